//! Cross-module properties checked against small independent oracles.

use omega_core::fixtures;
use omega_core::fo::{self, Assignment, EvalConfig, Formula};
use omega_core::fot::f1_fot;
use omega_core::muller::{Coord, Dma, MonoidEntry, TransMatrix};
use omega_core::twowst::{Ctx, Quadrant, TwoWst};
use omega_core::words::first_divergence;
use omega_core::{Alphabet, StateSet, UpWord};
use proptest::prelude::*;

fn word(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn upword(u: &str, v: &str) -> UpWord {
    UpWord::new(word(u), word(v)).unwrap()
}

// Random Muller automata over {a, b}.

fn dma_strategy() -> impl Strategy<Value = Dma> {
    (1usize..=4).prop_flat_map(|n| {
        let delta = prop::collection::vec(prop::collection::vec(0..n, 2), n);
        let sets = prop::collection::vec(prop::collection::btree_set(0..n, 1..=n), 1..=3);
        (Just(n), delta, sets).prop_map(|(n, delta, sets)| {
            let mut muller: Vec<StateSet> = Vec::new();
            for s in sets {
                let s: StateSet = s.into_iter().collect();
                if !muller.contains(&s) {
                    muller.push(s);
                }
            }
            let states = (0..n).map(|i| format!("s{i}")).collect();
            Dma::new(states, 0, Alphabet::new(['a', 'b']).unwrap(), delta, muller).unwrap()
        })
    })
}

fn row_deterministic(m: &TransMatrix) -> bool {
    (0..m.size()).all(|p| (0..m.size()).filter(|&q| m.get(p, q) != MonoidEntry::Bot).count() <= 1)
}

// Prefix-local formulas: every quantifier is bounded by the free variable `n`.

const VARS: [&str; 3] = ["x", "y", "z"];

fn local_formula() -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(VARS.to_vec());
    let leaf = prop_oneof![
        (var.clone(), var.clone()).prop_map(|(a, b)| fo::eq(a, b)),
        (var.clone(), var.clone()).prop_map(|(a, b)| fo::leq(a, b)),
        (prop::sample::select(vec!['a', 'b']), var.clone()).prop_map(|(c, a)| fo::label(c, a)),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let var = prop::sample::select(VARS.to_vec());
        prop_oneof![
            inner.clone().prop_map(fo::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| fo::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| fo::or(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| fo::exists(v, fo::and(fo::leq(v, "n"), f))),
            (var, inner).prop_map(|(v, f)| fo::forall(v, fo::implies(fo::leq(v, "n"), f))),
        ]
    })
}

/// Direct evaluation with quantifiers over positions `1..=n+1`; sound for
/// prefix-local formulas.
fn naive(f: &Formula, w: &UpWord, env: &mut Vec<(String, usize)>, n: usize) -> bool {
    let get = |env: &[(String, usize)], v: &str| env.iter().rev().find(|(k, _)| k == v).map(|p| p.1).unwrap();
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => get(env, a) == get(env, b),
        Formula::Leq(a, b) => get(env, a) <= get(env, b),
        Formula::Label(c, a) => w.letter_at(get(env, a)) == *c,
        Formula::Not(g) => !naive(g, w, env, n),
        Formula::And(g, h) => naive(g, w, env, n) && naive(h, w, env, n),
        Formula::Or(g, h) => naive(g, w, env, n) || naive(h, w, env, n),
        Formula::Implies(g, h) => !naive(g, w, env, n) || naive(h, w, env, n),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let mut results = (1..=n + 1).map(|i| {
                env.push((v.clone(), i));
                let r = naive(g, w, env, n);
                env.pop();
                r
            });
            if matches!(f, Formula::Exists(..)) {
                results.any(|r| r)
            } else {
                results.all(|r| r)
            }
        }
    }
}

fn machines() -> Vec<TwoWst> {
    vec![fixtures::f1_2wst(), fixtures::parity_copier(), fixtures::left_bouncer(), fixtures::after_a_marker()]
}

proptest! {
    #[test]
    fn letters_are_eventually_periodic(u in "[ab#]{0,5}", v in "[ab#]{1,4}", i in 1usize..40) {
        let w = upword(&u, &v);
        let i = i + w.prefix().len();
        prop_assert_eq!(w.letter_at(i), w.letter_at(i + w.period().len()));
        prop_assert_eq!(w.letter_at(i), w.letter_at(i + v.len()));
    }

    #[test]
    fn divergence_is_symmetric(u1 in "[ab]{0,4}", v1 in "[ab]{1,3}", u2 in "[ab]{0,4}", v2 in "[ab]{1,3}") {
        let (a, b) = (upword(&u1, &v1), upword(&u2, &v2));
        let d = first_divergence(&a, &b, 64);
        prop_assert_eq!(d, first_divergence(&b, &a, 64));
        if let Some(i) = d {
            prop_assert_ne!(a.letter_at(i), b.letter_at(i));
            prop_assert!((1..i).all(|j| a.letter_at(j) == b.letter_at(j)));
        }
    }

    #[test]
    fn prefix_local_formulas_match_direct_evaluation(
        f in local_formula(),
        u in "[ab]{0,4}",
        v in "[ab]{1,3}",
        n in 1usize..7,
        pos in prop::collection::vec(1usize..7, 3),
    ) {
        let w = upword(&u, &v);
        let mut env: Vec<(String, usize)> = VARS.iter().zip(&pos).map(|(k, p)| (k.to_string(), (*p).min(n + 1))).collect();
        env.push(("n".into(), n));
        let assignment: Assignment = env.iter().cloned().collect();
        let bounded = fo::eval(&f, &w, &assignment, &EvalConfig::default()).unwrap();
        // quantifiers range one position past `n`, which the guard excludes
        prop_assert_eq!(bounded, naive(&f, &w, &mut env, n));
    }

    #[test]
    fn universal_is_dual_to_existential(f in local_formula(), u in "[ab]{0,3}", v in "[ab]{1,2}", n in 1usize..5) {
        let w = upword(&u, &v);
        let a: Assignment = [("n".to_string(), n), ("y".into(), 1), ("z".into(), 2)].into_iter().collect();
        let all = fo::forall("x", f.clone());
        let dual = fo::not(fo::exists("x", fo::not(f)));
        let cfg = EvalConfig::default();
        prop_assert_eq!(fo::eval(&all, &w, &a, &cfg).ok(), fo::eval(&dual, &w, &a, &cfg).ok());
    }

    #[test]
    fn matrix_identity_laws(a in dma_strategy(), s in "[ab]{0,5}") {
        let fam = a.family();
        let id = TransMatrix::identity(a.states.len(), &fam);
        let m = a.matrix_of_word(&word(&s));
        prop_assert_eq!(&id.mul(&m, &fam), &m);
        prop_assert_eq!(&m.mul(&id, &fam), &m);
        prop_assert_eq!(a.matrix_of_word(&[]), id);
    }

    #[test]
    fn products_stay_row_deterministic(a in dma_strategy(), s in "[ab]{0,5}", t in "[ab]{0,5}") {
        let fam = a.family();
        let p = a.matrix_of_word(&word(&s)).mul(&a.matrix_of_word(&word(&t)), &fam);
        prop_assert!(row_deterministic(&p));
    }

    #[test]
    fn acceptance_ignores_unrolling(a in dma_strategy(), u in "[ab]{0,4}", v in "[ab]{1,3}") {
        let w = upword(&u, &v);
        let uv = format!("{u}{v}");
        let vv = format!("{v}{v}");
        let r = a.accepts(&w);
        prop_assert_eq!(r, a.accepts(&upword(&uv, &v)));
        prop_assert_eq!(r, a.accepts(&upword(&u, &vv)));
    }

    #[test]
    fn diagonal_one_means_the_loop_is_accepted(a in dma_strategy(), v in "[ab]{1,5}") {
        let m = a.matrix_of_word(&word(&v));
        for p in 0..a.states.len() {
            if let MonoidEntry::Tuple(t) = m.get(p, p) {
                for (i, c) in t.iter().enumerate() {
                    if *c == Coord::One {
                        prop_assert_eq!(&a.infinity_set(p, &upword("", &v)), &a.muller[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_quadrants_agree_with_runs(
        m in 0usize..4,
        u in prop::collection::vec(0usize..3, 1..6),
        v in prop::collection::vec(0usize..3, 1..4),
    ) {
        let t = &machines()[m];
        let letters = t.input().symbols();
        let pick = |xs: &[usize]| -> Vec<char> { xs.iter().map(|&i| letters[i % letters.len()]).collect() };
        let (w, tail) = (pick(&u), UpWord::new(vec![], pick(&v)).unwrap());
        let full = tail.prepend(&w);
        // the context of `w` at the start of `full`
        let ctx = Ctx { eta: t.lookbehind().map(|b| b.identity_vector()).unwrap_or_default(), prof: t.profile(&tail) };
        let q = t.quads_in(&w, &ctx).unwrap();
        for (p, r) in q.get(Quadrant::LR).support() {
            prop_assert!(t.reaches(&full, p, 1, r, w.len() + 1).unwrap());
        }
        for (p, r) in q.get(Quadrant::LL).support() {
            prop_assert!(t.reaches(&full, p, 1, r, 0).unwrap());
        }
        // determinism: a run never finds two enabled transitions
        prop_assert!(t.run(&full, 10).is_ok());
    }

    #[test]
    fn f1_labels_are_unambiguous(u in "[ab#]{0,6}", v in "[ab]{1,3}") {
        let t = f1_fot();
        let w = upword(&u, &v);
        for copy in 1..=t.copies {
            for x in 1..=u.len() + v.len() + 1 {
                prop_assert!(t.node_label(&w, copy, x).is_ok());
            }
        }
    }
}

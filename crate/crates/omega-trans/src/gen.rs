//! Seeded random machines and word corpora.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use omega_core::fixtures;
use omega_core::monoid::DEFAULT_CAP;
use omega_core::sst::{Item, OutputSpec, Sst, Substitution};
use omega_core::twowst::{Move, Sym, Transition, TwoWst};
use omega_core::{Alphabet, StateSet, UpWord};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn pick_word(rng: &mut StdRng, letters: &[char], len: std::ops::RangeInclusive<usize>) -> Vec<char> {
    let len = rng.gen_range(len);
    (0..len).map(|_| *letters.choose(rng).expect("non-empty alphabet")).collect()
}

/// A word `u·v^ω` with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
pub fn random_word(rng: &mut StdRng, letters: &[char], max_prefix: usize, max_period: usize) -> UpWord {
    let u = pick_word(rng, letters, 0..=max_prefix);
    let v = pick_word(rng, letters, 1..=max_period);
    UpWord::new(u, v).expect("non-empty period")
}

/// Words with finitely many `#`: a prefix over `a b #` and a `#`-free period.
/// The first entries are fixed so that small corpora still cover the
/// examples everyone checks by hand.
pub fn f1_corpus(seed: u64, n: usize) -> Vec<UpWord> {
    let fixed = ["ab#(a)^w", "abbb#ba#(ab)^w", "(ab)^w", "#(b)^w", "##(a)^w", "a#b#(ba)^w"];
    let mut out: Vec<UpWord> = fixed.iter().take(n).map(|s| UpWord::parse(s).expect("fixed word")).collect();
    let mut r = rng(seed);
    while out.len() < n {
        let u = pick_word(&mut r, &['a', 'b', '#'], 0..=10);
        let v = pick_word(&mut r, &['a', 'b'], 1..=4);
        let w = UpWord::new(u, v).expect("non-empty period");
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// General words over `letters`, without duplicates.
pub fn corpus(seed: u64, letters: &[char], n: usize, max_prefix: usize, max_period: usize) -> Vec<UpWord> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < n && tries < 100 * n {
        let w = random_word(&mut r, letters, max_prefix, max_period);
        if !out.contains(&w) {
            out.push(w);
        }
        tries += 1;
    }
    out
}

/// One word per line in `PREFIX(PERIOD)^w` syntax; `//` starts a comment.
pub fn parse_corpus(text: &str) -> omega_core::Result<Vec<UpWord>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("//")).map(UpWord::parse).collect()
}

pub fn print_corpus(words: &[UpWord]) -> String {
    words.iter().map(|w| format!("{w}\n")).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SstShape {
    pub max_states: usize,
    pub max_vars: usize,
    /// Variable 0 only ever grows on the right and is the output variable.
    pub output_var: bool,
}

/// A random copyless update: every variable lands in at most one
/// right-hand side, padded with up to two letters per slot.
fn copyless_update(rng: &mut StdRng, nv: usize, letters: &[char], output_var: bool) -> Substitution {
    let mut rhs: Vec<Vec<Item>> = vec![Vec::new(); nv];
    let first = usize::from(output_var);
    if output_var {
        rhs[0].push(Item::Var(0));
    }
    let mut order: Vec<usize> = (first..nv).collect();
    order.shuffle(rng);
    for y in order {
        // dropped with probability 1/(nv + 1)
        let dest = rng.gen_range(0..=nv);
        if dest < nv {
            rhs[dest].push(Item::Var(y));
        }
    }
    for (x, r) in rhs.iter_mut().enumerate() {
        let lead = output_var && x == 0;
        let mut items = Vec::new();
        for it in r.drain(..) {
            items.push(it);
            if rng.gen_bool(0.4) {
                items.push(Item::Sym(*letters.choose(rng).unwrap()));
            }
        }
        if !lead && rng.gen_bool(0.3) {
            items.insert(0, Item::Sym(*letters.choose(rng).unwrap()));
        }
        if !lead && rng.gen_bool(0.25) {
            items.shuffle(rng);
        }
        *r = items;
    }
    Substitution::from_rhs(rhs)
}

/// A random copyless SST over `a b`. Muller sets are random; with
/// `output_var` they output variable 0, otherwise nothing.
pub fn random_copyless_sst(rng: &mut StdRng, shape: SstShape) -> Sst {
    let letters = ['a', 'b'];
    loop {
        let nq = rng.gen_range(1..=shape.max_states);
        let nv = rng.gen_range(1..=shape.max_vars);
        let delta: Vec<Vec<usize>> = (0..nq).map(|_| (0..2).map(|_| rng.gen_range(0..nq)).collect()).collect();
        let rho: Vec<Vec<Substitution>> =
            (0..nq).map(|_| (0..2).map(|_| copyless_update(rng, nv, &letters, shape.output_var)).collect()).collect();
        let mut sets: Vec<StateSet> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let s: StateSet = (0..nq).filter(|_| rng.gen_bool(0.5)).collect();
            if !s.is_empty() && !sets.contains(&s) {
                sets.push(s);
            }
        }
        if sets.is_empty() {
            sets.push((0..nq).collect());
        }
        let xs = if shape.output_var { vec![0] } else { Vec::new() };
        let out = OutputSpec::Muller(sets.into_iter().map(|s| (s, xs.clone())).collect());
        let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let vars = if shape.output_var {
            std::iter::once("O".to_string()).chain((1..nv).map(|i| format!("X{i}"))).collect()
        } else {
            names("X", nv)
        };
        let alphabet = Alphabet::new(letters).unwrap();
        if let Ok(t) = Sst::new(alphabet.clone(), alphabet, names("q", nq), 0, vars, delta, rho, out) {
            return t;
        }
    }
}

/// A random copyless SST with an output variable whose transition monoid is
/// aperiodic.
pub fn random_aperiodic_sst(rng: &mut StdRng, max_states: usize, max_vars: usize) -> Sst {
    loop {
        let t = random_copyless_sst(rng, SstShape { max_states, max_vars, output_var: true });
        if t.is_aperiodic(DEFAULT_CAP).is_ok_and(|v| v.aperiodic) {
            return t;
        }
    }
}

/// A random two-way transducer over `a b #`, optionally with the
/// "a `#` follows" look-ahead guarding some letters.
pub fn random_2wst(rng: &mut StdRng, lookahead: bool) -> TwoWst {
    let letters = ['a', 'b', '#'];
    let la = lookahead.then(fixtures::reach_lookahead);
    let (n, n2) = match &la {
        Some(a) => (a.state_index("n"), a.state_index("n2")),
        None => (None, None),
    };
    loop {
        let nq = rng.gen_range(2..=3);
        let mut trans = Vec::new();
        for q in 0..nq {
            for sym in [Sym::End, Sym::Letter('a'), Sym::Letter('b'), Sym::Letter('#')] {
                if !rng.gen_bool(0.9) {
                    continue;
                }
                let guarded = la.is_some() && sym != Sym::End && rng.gen_bool(0.3);
                let guards: Vec<Option<usize>> = if guarded { vec![n, n2] } else { vec![None] };
                for ahead in guards {
                    let mv = match sym {
                        Sym::End => *[Move::Stay, Move::Right, Move::Right].choose(rng).unwrap(),
                        _ => *[Move::Left, Move::Stay, Move::Right, Move::Right].choose(rng).unwrap(),
                    };
                    let output = if rng.gen_bool(0.6) { vec![*letters.choose(rng).unwrap()] } else { Vec::new() };
                    trans.push(Transition { from: q, behind: None, sym, ahead, to: rng.gen_range(0..nq), output, mv });
                }
            }
        }
        let mut muller = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let s: StateSet = (0..nq).filter(|_| rng.gen_bool(0.5)).collect();
            if !s.is_empty() && !muller.contains(&s) {
                muller.push(s);
            }
        }
        let alphabet = Alphabet::new(letters).unwrap();
        let states = (0..nq).map(|i| format!("q{i}")).collect();
        if let Ok(t) = TwoWst::new(states, 0, alphabet.clone(), alphabet, trans, muller, la.clone(), None) {
            return t;
        }
    }
}

/// The two-way machines every property suite runs on: the fixtures plus
/// `extra` random ones.
pub fn twowst_corpus(seed: u64, extra: usize) -> Vec<TwoWst> {
    let mut out = vec![fixtures::f1_2wst(), fixtures::parity_copier(), fixtures::left_bouncer(), fixtures::after_a_marker()];
    let mut r = rng(seed);
    for i in 0..extra {
        out.push(random_2wst(&mut r, i % 2 == 0));
    }
    out
}

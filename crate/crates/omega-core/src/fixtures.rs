//! Small reference machines used by tests, the acceptance suite and the CLI.

use alloc::string::String;
use alloc::vec::Vec;

use crate::muller::{Dfa, Dma};
use crate::set::StateSet;
use crate::sst::{OutputSpec, Sst, Substitution};
use crate::twowst::{Move, Sym, Transition, TwoWst};
use crate::words::Alphabet;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| String::from(*s)).collect()
}

/// Builds an SST from named parts; every `(state, letter)` pair must appear once.
///
/// Each transition is `(from, letter, to, updates)` with updates in the
/// `X := aXb; Y := Y` syntax; the output lists `(states, variables)` pairs.
pub fn sst_from(
    states: &[&str],
    initial: &str,
    input: &[char],
    output: &[char],
    vars: &[&str],
    trans: &[(&str, char, &str, &str)],
    out: &[(&[&str], &[&str])],
) -> crate::Result<Sst> {
    use crate::error::Error;
    use alloc::format;
    let st = names(states);
    let vs = names(vars);
    let input = Alphabet::new(input.iter().copied())?;
    let output = Alphabet::new(output.iter().copied())?;
    let idx = |s: &str| st.iter().position(|n| n == s).ok_or_else(|| Error::Invalid(format!("unknown state `{s}`")));
    let vidx = |s: &str| vs.iter().position(|n| n == s).ok_or_else(|| Error::Invalid(format!("unknown variable `{s}`")));
    let mut delta = alloc::vec![alloc::vec![usize::MAX; input.len()]; st.len()];
    let mut rho = alloc::vec![alloc::vec![Substitution::identity(vs.len()); input.len()]; st.len()];
    for (p, a, q, upd) in trans {
        let ai = input.index_of(*a).ok_or_else(|| Error::Invalid(format!("letter `{a}`")))?;
        let p = idx(p)?;
        delta[p][ai] = idx(q)?;
        rho[p][ai] = Substitution::parse(upd, &vs)?;
    }
    if delta.iter().flatten().any(|&q| q == usize::MAX) {
        return Err(Error::Invalid("transition table is not total".into()));
    }
    let mut f = Vec::new();
    for (set, xs) in out {
        let p = set.iter().map(|s| idx(s)).collect::<crate::Result<StateSet>>()?;
        let xs = xs.iter().map(|s| vidx(s)).collect::<crate::Result<Vec<_>>>()?;
        f.push((p, xs));
    }
    Sst::new(input, output, st.clone(), idx(initial)?, vs.clone(), delta, rho, OutputSpec::Muller(f))
}

/// Three states `q, r, t` over `{a, b}` with Muller sets `{q}` and `{r}`.
pub fn muller_ex1() -> Dma {
    Dma::from_names(
        &["q", "r", "t"],
        "t",
        &['a', 'b'],
        &[("r", 'a', "r"), ("r", 'b', "t"), ("t", 'b', "r"), ("q", 'b', "q"), ("q", 'a', "t"), ("t", 'a', "q")],
        &[&["q"], &["r"]],
    )
    .expect("valid fixture")
}

/// Two states `u, v` moving to `v` on `a` and to `u` on `b`, accepting `{u, v}`.
pub fn tm_ex1_right() -> Dma {
    Dma::from_names(&["u", "v"], "u", &['a', 'b'], &[("u", 'a', "v"), ("v", 'a', "v"), ("v", 'b', "u"), ("u", 'b', "u")], &[&["u", "v"]])
        .expect("valid fixture")
}

/// The SST on the `q, r, t` automaton with a copying update `Y := YX`.
pub fn tm_ex1_left() -> Sst {
    sst_from(
        &["q", "r", "t"],
        "t",
        &['a', 'b'],
        &['a', 'b'],
        &["X", "Y"],
        &[
            ("r", 'a', "r", "X := Xb"),
            ("r", 'b', "t", ""),
            ("t", 'b', "r", "X := bY"),
            ("q", 'b', "q", "Y := YX"),
            ("q", 'a', "t", "X := bX"),
            ("t", 'a', "q", "Y := aX"),
        ],
        &[(&["q"], &["X", "Y"]), (&["r"], &["X"])],
    )
    .expect("valid fixture")
}

/// Look-ahead automaton for "a `#` occurs later": guard `n` holds on words
/// containing `#`, guard `n2` on words without.
pub fn reach_lookahead() -> Dma {
    Dma::from_names(
        &["n", "n2", "y", "dead"],
        "n",
        &['a', 'b', '#'],
        &[
            ("n", 'a', "n"),
            ("n", 'b', "n"),
            ("n", '#', "y"),
            ("n2", 'a', "n2"),
            ("n2", 'b', "n2"),
            ("n2", '#', "dead"),
            ("y", 'a', "y"),
            ("y", 'b', "y"),
            ("y", '#', "y"),
            ("dead", 'a', "dead"),
            ("dead", 'b', "dead"),
            ("dead", '#', "dead"),
        ],
        &[&["y"], &["n2"]],
    )
    .expect("valid fixture")
}

/// Look-behind DFA: guard `u0` holds when the previous letter is `a`, `v0`
/// when it is not (including at the first position).
pub fn last_letter_lookbehind() -> Dfa {
    Dfa::from_names(
        &["u0", "ua", "ub", "v0", "va", "vb"],
        "u0",
        &['a', 'b'],
        &[
            ("u0", 'a', "ua"),
            ("u0", 'b', "ub"),
            ("ua", 'a', "ua"),
            ("ua", 'b', "ub"),
            ("ub", 'a', "ua"),
            ("ub", 'b', "ub"),
            ("v0", 'a', "va"),
            ("v0", 'b', "vb"),
            ("va", 'a', "va"),
            ("va", 'b', "vb"),
            ("vb", 'a', "va"),
            ("vb", 'b', "vb"),
        ],
        &["ua", "vb", "v0"],
    )
    .expect("valid fixture")
}

/// The streaming transducer for `f₁`: every maximal `#`-free block `u`
/// followed by `#` becomes `ū u #`; the final infinite block is copied.
pub fn f1_sst() -> Sst {
    sst_from(
        &["1", "2"],
        "1",
        &['a', 'b', '#'],
        &['a', 'b', '#'],
        &["x", "y", "z"],
        &[
            ("1", '#', "1", "x := x#; y := ε; z := ε"),
            ("1", 'a', "2", "y := aya; z := za"),
            ("1", 'b', "2", "y := byb; z := zb"),
            ("2", 'a', "2", "y := aya; z := za"),
            ("2", 'b', "2", "y := byb; z := zb"),
            ("2", '#', "1", "x := xy#; y := ε; z := ε"),
        ],
        &[(&["2"], &["x", "z"])],
    )
    .expect("valid fixture")
}

/// One variable set to `c` once and then never extended.
pub fn finite_output_sst() -> Sst {
    sst_from(&["s", "t"], "s", &['a'], &['c'], &["X"], &[("s", 'a', "t", "X := c"), ("t", 'a', "t", "")], &[(&["t"], &["X"])])
        .expect("valid fixture")
}

/// A chain `q0 … q6` on `a` whose six updates exercise usefulness and the
/// three edge rules of the output graph; `q6` loops with identity updates.
pub fn output_graph_sst() -> Sst {
    sst_from(
        &["q0", "q1", "q2", "q3", "q4", "q5", "q6"],
        "q0",
        &['a'],
        &['a', 'b', 'c', 'd', 'e', 'f', 'g'],
        &["X", "Y", "Z"],
        &[
            ("q0", 'a', "q1", "X := aXb; Y := aaa; Z := Zc"),
            ("q1", 'a', "q2", "X := c; Z := dZc"),
            ("q2", 'a', "q3", "Y := eYf"),
            ("q3", 'a', "q4", "Z := dZc"),
            ("q4", 'a', "q5", "Y := YbZc; Z := g"),
            ("q5", 'a', "q6", "X := XY; Y := bZc; Z := g"),
            ("q6", 'a', "q6", ""),
        ],
        &[(&["q6"], &["X", "Y", "Z"])],
    )
    .expect("valid fixture")
}

/// One 2WST transition: `(from, behind, symbol, ahead, to, output, move)`,
/// with `'⊢'` standing for the end-marker.
pub type Trans2<'a> = (&'a str, Option<&'a str>, char, Option<&'a str>, &'a str, &'a str, i8);

/// Builds a two-way transducer from named parts.
#[allow(clippy::too_many_arguments)]
pub fn twowst_from(
    states: &[&str],
    initial: &str,
    input: &[char],
    output: &[char],
    trans: &[Trans2<'_>],
    muller: &[&[&str]],
    lookahead: Option<Dma>,
    lookbehind: Option<Dfa>,
) -> crate::Result<TwoWst> {
    use crate::error::Error;
    use alloc::format;
    let st = names(states);
    let idx = |s: &str| st.iter().position(|n| n == s).ok_or_else(|| Error::Invalid(format!("unknown state `{s}`")));
    let mut ts = Vec::new();
    for &(from, behind, sym, ahead, to, out, mv) in trans {
        let behind = match behind {
            Some(r) => Some(
                lookbehind
                    .as_ref()
                    .and_then(|b| b.state_index(r))
                    .ok_or_else(|| Error::Invalid(format!("unknown look-behind state `{r}`")))?,
            ),
            None => None,
        };
        let ahead = match ahead {
            Some(p) => Some(
                lookahead
                    .as_ref()
                    .and_then(|a| a.state_index(p))
                    .ok_or_else(|| Error::Invalid(format!("unknown look-ahead state `{p}`")))?,
            ),
            None => None,
        };
        let mv = match mv {
            -1 => Move::Left,
            0 => Move::Stay,
            1 => Move::Right,
            m => return Err(Error::Invalid(format!("bad move {m}"))),
        };
        let sym = if sym == '⊢' { Sym::End } else { Sym::Letter(sym) };
        ts.push(Transition { from: idx(from)?, behind, sym, ahead, to: idx(to)?, output: out.chars().collect(), mv });
    }
    let f = muller.iter().map(|set| set.iter().map(|s| idx(s)).collect::<crate::Result<StateSet>>()).collect::<crate::Result<Vec<_>>>()?;
    TwoWst::new(
        st.clone(),
        idx(initial)?,
        Alphabet::new(input.iter().copied())?,
        Alphabet::new(output.iter().copied())?,
        ts,
        f,
        lookahead,
        lookbehind,
    )
}

/// The two-way transducer for `f₁` with the `reach_#` look-ahead: `t` skips
/// a block, `p` copies it backwards, `q` copies it forwards.
pub fn f1_2wst() -> TwoWst {
    let mut trans: Vec<Trans2<'static>> = Vec::new();
    for a in ['a', 'b'] {
        let s: &'static str = if a == 'a' { "a" } else { "b" };
        trans.push(("t", None, a, Some("n2"), "t", s, 1));
        trans.push(("t", None, a, Some("n"), "t", "", 1));
        trans.push(("p", None, a, None, "p", s, -1));
        trans.push(("q", None, a, None, "q", s, 1));
    }
    trans.extend_from_slice(&[
        ("t", None, '#', None, "p", "", -1),
        ("p", None, '#', None, "q", "", 1),
        ("p", None, '⊢', None, "q", "", 1),
        ("q", None, '#', None, "t", "#", 1),
    ]);
    twowst_from(&["t", "p", "q"], "t", &['a', 'b', '#'], &['a', 'b', '#'], &trans, &[&["t"]], Some(reach_lookahead()), None)
        .expect("valid fixture")
}

/// Copies `a`s while flipping between two states.
pub fn parity_copier() -> TwoWst {
    twowst_from(
        &["e", "o"],
        "e",
        &['a'],
        &['a'],
        &[("e", None, 'a', None, "o", "a", 1), ("o", None, 'a', None, "e", "a", 1)],
        &[&["e", "o"]],
        None,
        None,
    )
    .expect("valid fixture")
}

/// Bounces between the first letter and the end-marker forever.
pub fn left_bouncer() -> TwoWst {
    twowst_from(
        &["s"],
        "s",
        &['a'],
        &['a'],
        &[("s", None, 'a', None, "s", "", -1), ("s", None, '⊢', None, "s", "", 1)],
        &[&["s"]],
        None,
        None,
    )
    .expect("valid fixture")
}

/// Copies the input, upper-casing every letter that follows an `a`.
pub fn after_a_marker() -> TwoWst {
    twowst_from(
        &["c"],
        "c",
        &['a', 'b'],
        &['a', 'b', 'A', 'B'],
        &[
            ("c", Some("u0"), 'a', None, "c", "A", 1),
            ("c", Some("v0"), 'a', None, "c", "a", 1),
            ("c", Some("u0"), 'b', None, "c", "B", 1),
            ("c", Some("v0"), 'b', None, "c", "b", 1),
        ],
        &[&["c"]],
        None,
        Some(last_letter_lookbehind()),
    )
    .expect("valid fixture")
}

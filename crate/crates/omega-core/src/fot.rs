//! First-order string transducers.
//!
//! The output of a transducer with copies `1..=n` on input `w` is the
//! structure whose nodes are pairs `(c, v)` of a copy and an input position
//! carrying the unique label `γ` with `pos[c, γ](v)`, ordered by the strict
//! order `ord[c, d](x, y)`. [`Fot::run`] linearises a finite window of it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fo::{self, and, btw_label, eq, finitely_many, label, lt, not, or, reach, Assignment, EvalConfig, Formula};
use crate::words::{Alphabet, OutSym, RunResult, UpWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fot {
    pub input: Alphabet,
    pub output: Alphabet,
    pub dom: Formula,
    pub copies: usize,
    /// `(copy, γ) ↦ φ(x)`; missing entries are false.
    pub pos: BTreeMap<(usize, char), Formula>,
    /// `(c, d) ↦ φ(x, y)`: node `(c, x)` strictly precedes node `(d, y)`.
    pub ord: BTreeMap<(usize, usize), Formula>,
}

/// A node of the output structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Node {
    pub copy: usize,
    pub position: usize,
    pub label: char,
}

/// How far [`Fot::run`] may double its window.
pub const MAX_WINDOW_DOUBLINGS: u32 = 6;

impl Fot {
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        dom: Formula,
        copies: usize,
        pos: BTreeMap<(usize, char), Formula>,
        ord: BTreeMap<(usize, usize), Formula>,
    ) -> Result<Fot> {
        let t = Fot { input, output, dom, copies, pos, ord };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: alloc::string::String| Err(Error::Invalid(m));
        if self.copies == 0 {
            return bad("at least one copy is needed".into());
        }
        let labels_ok = |f: &Formula| labels(f).iter().all(|c| self.input.contains(*c));
        if !self.dom.free_vars().is_empty() {
            return bad("the domain formula must be closed".into());
        }
        if !labels_ok(&self.dom) {
            return bad("the domain formula uses a letter outside the input alphabet".into());
        }
        for ((c, g), f) in &self.pos {
            if *c == 0 || *c > self.copies || !self.output.contains(*g) {
                return bad(format!("bad label formula index ({c}, {g})"));
            }
            if f.free_vars().iter().any(|v| v != "x") || !labels_ok(f) {
                return bad(format!("label formula ({c}, {g}) may only use `x` and input letters"));
            }
        }
        for ((c, d), f) in &self.ord {
            if *c == 0 || *c > self.copies || *d == 0 || *d > self.copies {
                return bad(format!("bad order formula index ({c}, {d})"));
            }
            if f.free_vars().iter().any(|v| v != "x" && v != "y") || !labels_ok(f) {
                return bad(format!("order formula ({c}, {d}) may only use `x`, `y` and input letters"));
            }
        }
        Ok(())
    }

    fn check(&self, w: &UpWord) -> Result<()> {
        self.input.check_word(w.prefix())?;
        self.input.check_word(w.period())
    }

    pub fn in_domain(&self, w: &UpWord) -> Result<bool> {
        self.check(w)?;
        fo::eval(&self.dom, w, &Assignment::new(), &EvalConfig::default())
    }

    /// The label of node `(copy, position)`, if the node exists.
    pub fn node_label(&self, w: &UpWord, copy: usize, position: usize) -> Result<Option<char>> {
        if position == 0 || copy == 0 || copy > self.copies {
            return Err(Error::Invalid(format!("no node ({copy}, {position})")));
        }
        let a: Assignment = [("x".to_string(), position)].into_iter().collect();
        let mut found = None;
        for ((c, g), f) in &self.pos {
            if *c == copy && fo::eval(f, w, &a, &EvalConfig::default())? {
                if found.is_some() {
                    return Err(Error::AmbiguousLabel { copy, position });
                }
                found = Some(*g);
            }
        }
        Ok(found)
    }

    /// Whether `a` strictly precedes `b` in the output order.
    pub fn precedes(&self, w: &UpWord, a: &Node, b: &Node) -> Result<bool> {
        let Some(f) = self.ord.get(&(a.copy, b.copy)) else { return Ok(false) };
        let env: Assignment = [("x".to_string(), a.position), ("y".to_string(), b.position)].into_iter().collect();
        fo::eval(f, w, &env, &EvalConfig::default())
    }

    fn nodes(&self, w: &UpWord, from: usize, to: usize) -> Result<Vec<Node>> {
        let mut out = Vec::new();
        for position in from..=to {
            for copy in 1..=self.copies {
                if let Some(label) = self.node_label(w, copy, position)? {
                    out.push(Node { copy, position, label });
                }
            }
        }
        Ok(out)
    }

    /// Strict comparison that also demands exactly one direction to hold.
    fn less(&self, w: &UpWord, a: &Node, b: &Node) -> Result<bool> {
        let ab = self.precedes(w, a, b)?;
        let ba = self.precedes(w, b, a)?;
        if ab == ba {
            return Err(Error::NotStringShaped(format!(
                "nodes ({}, {}) and ({}, {}) are {}",
                a.copy,
                a.position,
                b.copy,
                b.position,
                if ab { "mutually ordered" } else { "unordered" }
            )));
        }
        Ok(ab)
    }

    fn sort(&self, w: &UpWord, mut v: Vec<Node>) -> Result<Vec<Node>> {
        if v.len() <= 1 {
            return Ok(v);
        }
        let right = v.split_off(v.len() / 2);
        let (l, r) = (self.sort(w, v)?, self.sort(w, right)?);
        let mut out = Vec::with_capacity(l.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < l.len() && j < r.len() {
            if self.less(w, &r[j], &l[i])? {
                out.push(r[j]);
                j += 1;
            } else {
                out.push(l[i]);
                i += 1;
            }
        }
        out.extend_from_slice(&l[i..]);
        out.extend_from_slice(&r[j..]);
        Ok(out)
    }

    /// The output structure restricted to input positions `1..=window`, in order.
    pub fn linearize(&self, w: &UpWord, window: usize) -> Result<Vec<Node>> {
        let sorted = self.sort(w, self.nodes(w, 1, window)?)?;
        for p in sorted.windows(3) {
            if !self.less(w, &p[0], &p[2])? {
                return Err(Error::NotStringShaped(format!("order is not transitive at ({}, {})", p[0].copy, p[0].position)));
            }
        }
        Ok(sorted)
    }

    /// The first `k` output letters. The window starts at `window` input
    /// positions and doubles until the `k`-th node precedes every node of the
    /// next period beyond the window.
    pub fn run(&self, w: &UpWord, k: usize, window: usize) -> Result<RunResult> {
        if !self.in_domain(w)? {
            return Ok(RunResult::Rejected);
        }
        if k == 0 {
            return Ok(RunResult::Output(Vec::new()));
        }
        let mut window = window.max(k).max(w.prefix().len() + 1);
        for _ in 0..=MAX_WINDOW_DOUBLINGS {
            let sorted = self.linearize(w, window)?;
            if sorted.len() >= k {
                let last = sorted[k - 1];
                let probe = self.nodes(w, window + 1, window + w.period().len())?;
                let mut ok = true;
                for p in &probe {
                    if !self.less(w, &last, p)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(RunResult::Output(sorted[..k].iter().map(|n| OutSym::Sym(n.label)).collect()));
                }
            }
            window *= 2;
        }
        Err(Error::WindowExhausted)
    }
}

fn labels(f: &Formula) -> Vec<char> {
    use Formula::*;
    match f {
        True | False | Eq(..) | Leq(..) => Vec::new(),
        Label(c, _) => alloc::vec![*c],
        Not(g) | Exists(_, g) | Forall(_, g) => labels(g),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            let mut v = labels(a);
            v.extend(labels(b));
            v
        }
    }
}

pub fn fot_domain(t: &Fot, w: &UpWord) -> Result<bool> {
    t.in_domain(w)
}

pub fn node_label(t: &Fot, w: &UpWord, copy: usize, position: usize) -> Result<Option<char>> {
    t.node_label(w, copy, position)
}

pub fn run_fot(t: &Fot, w: &UpWord, k: usize, window: usize) -> Result<RunResult> {
    t.run(w, k, window)
}

fn f1_parts(printed: bool) -> Fot {
    let input = Alphabet::new(['a', 'b', '#']).expect("alphabet");
    let sep = || btw_label("x", "y", '#', "z");
    let reach_x = || reach("x", '#', "y");
    let mut pos = BTreeMap::new();
    for g in ['a', 'b'] {
        let kept = and(label(g, "x"), and(not(label('#', "x")), reach_x()));
        pos.insert((1, g), kept.clone());
        pos.insert((2, g), kept);
        pos.insert((3, g), and(label(g, "x"), not(reach_x())));
    }
    pos.insert((3, '#'), label('#', "x"));
    let mut ord = BTreeMap::new();
    ord.insert((1, 1), lt("x", "y"));
    ord.insert((3, 3), lt("x", "y"));
    ord.insert((2, 2), and(fo::implies(not(sep()), lt("y", "x")), fo::implies(sep(), lt("x", "y"))));
    ord.insert((1, 2), and(lt("x", "y"), sep()));
    ord.insert((3, 1), and(label('#', "x"), lt("x", "y")));
    ord.insert((3, 2), and(label('#', "x"), lt("x", "y")));
    if printed {
        let to_hash = and(label('#', "y"), lt("x", "y"));
        ord.insert((1, 3), to_hash.clone());
        ord.insert((2, 3), to_hash);
        ord.insert((2, 1), or(and(lt("x", "y"), sep()), and(not(sep()), or(lt("y", "x"), eq("y", "x")))));
    } else {
        ord.insert((1, 3), lt("x", "y"));
        ord.insert((2, 3), lt("x", "y"));
        ord.insert((2, 1), or(and(lt("x", "y"), sep()), not(sep())));
    }
    Fot::new(input.clone(), input, finitely_many('#'), 3, pos, ord).expect("valid fixture")
}

/// The three-copy transducer for `f₁`: copy 2 holds each `#`-terminated
/// block reversed, copy 1 holds it forwards, copy 3 the `#`s and the final
/// `#`-free suffix.
pub fn f1_fot() -> Fot {
    f1_parts(false)
}

/// The `f₁` transducer with the order formulas exactly as commonly printed:
/// copy-3 nodes must be `#` to follow copies 1 and 2, and a reversed-copy
/// node only precedes forward nodes at or before it. On inputs with a
/// non-trivial block these leave pairs of nodes unordered.
pub fn f1_fot_printed() -> Fot {
    f1_parts(true)
}

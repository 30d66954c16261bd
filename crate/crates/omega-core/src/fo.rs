//! First-order logic over ω-words with `=`, `⪯` and label predicates.
//!
//! Quantifiers range over the positions of an infinite word, so evaluation is
//! approximated on finite horizons: a quantifier at nesting depth `ℓ` ranges
//! over `1..=H_ℓ` with `H_ℓ = base + |period| · base_bound · (ℓ + 1) · 2^d`,
//! where `base` covers the prefix and every assigned position. The value is
//! computed for `d = 0..=stability_doublings` and must not change at the last
//! doubling. Giving inner quantifiers strictly larger horizons lets properties
//! such as "finitely many `#`" be witnessed beyond the last `#` that an outer
//! variable can see.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::words::UpWord;

pub type Var = String;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Var, Var),
    Leq(Var, Var),
    Label(char, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

pub type Assignment = BTreeMap<Var, usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub base_bound: usize,
    pub stability_doublings: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { base_bound: 4, stability_doublings: 2 }
    }
}

// Constructors used by the shorthand catalogue and by fixtures.

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.into(), y.into())
}

pub fn leq(x: &str, y: &str) -> Formula {
    Formula::Leq(x.into(), y.into())
}

pub fn label(c: char, x: &str) -> Formula {
    Formula::Label(c, x.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn exists(x: &str, f: Formula) -> Formula {
    Formula::Exists(x.into(), Box::new(f))
}

pub fn forall(x: &str, f: Formula) -> Formula {
    Formula::Forall(x.into(), Box::new(f))
}

/// `x ≺ y`: strictly before.
pub fn lt(x: &str, y: &str) -> Formula {
    and(leq(x, y), not(eq(x, y)))
}

/// `x ≻ y`: strictly after.
pub fn gt(x: &str, y: &str) -> Formula {
    not(leq(x, y))
}

/// `x` is the first position; `fresh` names the bound variable.
pub fn first(x: &str, fresh: &str) -> Formula {
    not(exists(fresh, lt(fresh, x)))
}

/// `z` lies strictly between `x` and `y`, in either order.
pub fn btw(x: &str, y: &str, z: &str) -> Formula {
    or(and(lt(y, z), lt(z, x)), and(lt(x, z), lt(z, y)))
}

/// Some `c`-labelled position lies strictly between `x` and `y`.
pub fn btw_label(x: &str, y: &str, c: char, fresh: &str) -> Formula {
    exists(fresh, and(label(c, fresh), btw(x, y, fresh)))
}

/// A `c`-labelled position occurs strictly after `x`.
pub fn reach(x: &str, c: char, fresh: &str) -> Formula {
    exists(fresh, and(lt(x, fresh), label(c, fresh)))
}

/// Only finitely many positions carry `c`.
pub fn finitely_many(c: char) -> Formula {
    exists("x", forall("y", implies(lt("x", "y"), not(label(c, "y")))))
}

fn succ_edge(x: &str, y: &str) -> Formula {
    and(lt(x, y), not(exists("z", and(lt(x, "z"), lt("z", y)))))
}

/// `x` has exactly one immediate successor.
pub fn u_succ(x: &str) -> Formula {
    and(forall("y", forall("y'", implies(and(succ_edge(x, "y"), succ_edge(x, "y'")), eq("y", "y'")))), exists("y", succ_edge(x, "y")))
}

/// `x` has exactly one immediate predecessor.
pub fn u_pred(x: &str) -> Formula {
    and(forall("y", forall("y'", implies(and(succ_edge("y", x), succ_edge("y'", x)), eq("y", "y'")))), exists("y", succ_edge("y", x)))
}

/// The string-shape sentence: unique successors and predecessors, a unique
/// first element and no last element. Position 1 has no predecessor, so the
/// sentence fails on every ω-word.
pub fn is_string() -> Formula {
    and(
        and(
            forall("x", and(u_succ("x"), u_pred("x"))),
            exists("y", and(first("y", "w"), forall("z", implies(first("z", "w"), eq("z", "y"))))),
        ),
        forall("x", exists("y", and(lt("x", "y"), not(eq("x", "y"))))),
    )
}

/// Looks up a shorthand by name. Free variables are `x`, `y`, `z` in order.
pub fn shorthand(name: &str) -> Result<Formula> {
    let f = match name {
        "first" => first("x", "y"),
        "lt" => lt("x", "y"),
        "gt" => gt("x", "y"),
        "btw" => btw("x", "y", "z"),
        "btw_#" => btw_label("x", "y", '#', "z"),
        "reach_#" => reach("x", '#', "y"),
        "u_succ" => u_succ("x"),
        "u_pred" => u_pred("x"),
        "is_string" => is_string(),
        "is_string_#" => finitely_many('#'),
        _ => return Err(Error::UnknownShorthand(name.to_string())),
    };
    Ok(f)
}

impl Formula {
    pub fn quantifier_depth(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Eq(..) | Leq(..) | Label(..) => 0,
            Not(f) => f.quantifier_depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Exists(_, f) | Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        use Formula::*;
        let mut see = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            True | False => {}
            Eq(a, b) | Leq(a, b) => {
                see(a, bound);
                see(b, bound);
            }
            Label(_, a) => see(a, bound),
            Not(f) => f.collect_free(bound, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Exists(v, f) | Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Renames free occurrences of `from` to `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        use Formula::*;
        let r = |v: &Var| if v == from { to.to_string() } else { v.clone() };
        match self {
            True => True,
            False => False,
            Eq(a, b) => Eq(r(a), r(b)),
            Leq(a, b) => Leq(r(a), r(b)),
            Label(c, a) => Label(*c, r(a)),
            Not(f) => not(f.rename_free(from, to)),
            And(a, b) => and(a.rename_free(from, to), b.rename_free(from, to)),
            Or(a, b) => or(a.rename_free(from, to), b.rename_free(from, to)),
            Implies(a, b) => implies(a.rename_free(from, to), b.rename_free(from, to)),
            Exists(v, f) if v == from => self.clone(),
            Forall(v, f) if v == from => self.clone(),
            Exists(v, f) => Exists(v.clone(), Box::new(f.rename_free(from, to))),
            Forall(v, f) => Forall(v.clone(), Box::new(f.rename_free(from, to))),
        }
    }
}

/// Evaluates `f` on `w` under `assignment`, which must cover the free variables.
pub fn eval(f: &Formula, w: &UpWord, assignment: &Assignment, cfg: &EvalConfig) -> Result<bool> {
    for v in f.free_vars() {
        match assignment.get(&v) {
            None => return Err(Error::Invalid(format!("free variable `{v}` is unassigned"))),
            Some(0) => return Err(Error::Invalid(format!("variable `{v}` is assigned position 0"))),
            Some(_) => {}
        }
    }
    let base = assignment.values().copied().fold(w.prefix().len(), usize::max);
    let step = w.period().len() * cfg.base_bound.max(1);
    let mut env: Vec<(&str, usize)> = assignment.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    let mut prev = None;
    for d in 0..=cfg.stability_doublings {
        let ev = Evaluator { w, base, step: step << d };
        let v = ev.eval(f, &mut env, 0);
        if d == cfg.stability_doublings {
            if let Some(p) = prev {
                if p != v {
                    return Err(Error::Unstable);
                }
            }
            return Ok(v);
        }
        prev = Some(v);
    }
    unreachable!()
}

/// Evaluates with the default configuration and the given `(variable, position)` pairs.
pub fn eval_at(f: &Formula, w: &UpWord, pairs: &[(&str, usize)]) -> Result<bool> {
    let a: Assignment = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    eval(f, w, &a, &EvalConfig::default())
}

struct Evaluator<'a> {
    w: &'a UpWord,
    base: usize,
    step: usize,
}

impl<'a> Evaluator<'a> {
    fn lookup(env: &[(&str, usize)], v: &str) -> usize {
        env.iter().rev().find(|(k, _)| *k == v).map(|p| p.1).expect("free variables are checked")
    }

    fn eval<'f>(&self, f: &'f Formula, env: &mut Vec<(&'f str, usize)>, level: usize) -> bool {
        use Formula::*;
        match f {
            True => true,
            False => false,
            Eq(a, b) => Self::lookup(env, a) == Self::lookup(env, b),
            Leq(a, b) => Self::lookup(env, a) <= Self::lookup(env, b),
            Label(c, a) => self.w.letter_at(Self::lookup(env, a)) == *c,
            Not(g) => !self.eval(g, env, level),
            And(a, b) => self.eval(a, env, level) && self.eval(b, env, level),
            Or(a, b) => self.eval(a, env, level) || self.eval(b, env, level),
            Implies(a, b) => !self.eval(a, env, level) || self.eval(b, env, level),
            Exists(v, g) | Forall(v, g) => {
                let want = matches!(f, Exists(..));
                let horizon = self.base + self.step * (level + 1);
                for p in 1..=horizon {
                    env.push((v.as_str(), p));
                    let r = self.eval(g, env, level + 1);
                    env.pop();
                    if r == want {
                        return want;
                    }
                }
                !want
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Eq(a, b) => write!(f, "{a}={b}"),
            Leq(a, b) => write!(f, "{a}<={b}"),
            Label(c, a) => {
                if matches!(c, '(' | ')' | '\\') || c.is_whitespace() {
                    write!(f, "L\\{c}({a})")
                } else {
                    write!(f, "L{c}({a})")
                }
            }
            Not(g) => write!(f, "!{g}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Exists(v, g) => write!(f, "(E {v}. {g})"),
            Forall(v, g) => write!(f, "(A {v}. {g})"),
        }
    }
}

/// Parses the textual syntax.
///
/// Atoms: `x=y`, `x!=y`, `x<=y`, `x<y`, `Lc(x)`, `true`, `false`, and
/// `@name(v1,..)` for catalogue shorthands with their free variables renamed.
/// Connectives by decreasing precedence: `!`, `&`, `|`, `->` (right
/// associative). `E x. φ` and `A x. φ` extend as far right as possible.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { s: text.chars().collect(), i: 0 };
    let f = p.implication()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

struct Parser {
    s: Vec<char>,
    i: usize,
}

impl Parser {
    fn err(&self, m: &str) -> Error {
        let ctx: String = self.s.iter().skip(self.i).take(12).collect();
        Error::Invalid(format!("formula: {m} at offset {} near `{ctx}`", self.i))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        let t: Vec<char> = tok.chars().collect();
        if self.s[self.i..].starts_with(&t) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let a = self.disjunction()?;
        if self.eat("->") {
            let b = self.implication()?;
            return Ok(implies(a, b));
        }
        Ok(a)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut a = self.conjunction()?;
        while self.eat("|") {
            a = or(a, self.conjunction()?);
        }
        Ok(a)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut a = self.unary()?;
        while self.eat("&") {
            a = and(a, self.unary()?);
        }
        Ok(a)
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() {
            let c = self.s[self.i];
            let ok = if self.i == start { c.is_ascii_lowercase() } else { c.is_ascii_alphanumeric() || c == '_' || c == '\'' };
            if !ok {
                break;
            }
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a variable"));
        }
        Ok(self.s[start..self.i].iter().collect())
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some('!') if self.s.get(self.i + 1) != Some(&'=') => {
                self.i += 1;
                Ok(not(self.unary()?))
            }
            Some('(') => {
                self.i += 1;
                let f = self.implication()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(q @ ('E' | 'A')) if self.s.get(self.i + 1).is_some_and(|c| c.is_whitespace()) => {
                self.i += 1;
                let v = self.ident()?;
                self.expect(".")?;
                let body = self.implication()?;
                Ok(if q == 'E' { Formula::Exists(v, Box::new(body)) } else { Formula::Forall(v, Box::new(body)) })
            }
            Some('L') => {
                self.i += 1;
                let mut c = *self.s.get(self.i).ok_or_else(|| self.err("expected a label"))?;
                self.i += 1;
                if c == '\\' {
                    c = *self.s.get(self.i).ok_or_else(|| self.err("dangling escape"))?;
                    self.i += 1;
                }
                self.expect("(")?;
                let v = self.ident()?;
                self.expect(")")?;
                Ok(label(c, &v))
            }
            Some('@') => {
                self.i += 1;
                let start = self.i;
                while self.i < self.s.len() && !matches!(self.s[self.i], '(' | ' ' | ')') {
                    self.i += 1;
                }
                let name: String = self.s[start..self.i].iter().collect();
                let mut f = shorthand(&name)?;
                if self.eat("(") {
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.ident()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    f = instantiate(&f, &args)?;
                }
                Ok(f)
            }
            Some(_) => {
                if self.eat("true") {
                    return Ok(Formula::True);
                }
                if self.eat("false") {
                    return Ok(Formula::False);
                }
                let a = self.ident()?;
                let f = if self.eat("<=") {
                    leq(&a, &self.ident()?)
                } else if self.eat("!=") {
                    not(eq(&a, &self.ident()?))
                } else if self.eat("<") {
                    lt(&a, &self.ident()?)
                } else if self.eat("=") {
                    eq(&a, &self.ident()?)
                } else {
                    return Err(self.err("expected a comparison"));
                };
                Ok(f)
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Renames the free variables `x`, `y`, `z` of a catalogue shorthand to `args`.
fn instantiate(f: &Formula, args: &[String]) -> Result<Formula> {
    let names = ["x", "y", "z"];
    if args.len() > names.len() {
        return Err(Error::Invalid("too many shorthand arguments".into()));
    }
    let bound = bound_vars(f);
    if let Some(a) = args.iter().find(|a| bound.contains(a.as_str()) && !names[..args.len()].contains(&a.as_str())) {
        return Err(Error::Invalid(format!("argument `{a}` would be captured")));
    }
    // Two-phase rename so that swapped arguments do not collide.
    let mut g = f.clone();
    for (i, _) in args.iter().enumerate() {
        g = g.rename_free(names[i], &format!("#{i}"));
    }
    for (i, a) in args.iter().enumerate() {
        g = g.rename_free(&format!("#{i}"), a);
    }
    Ok(g)
}

fn bound_vars(f: &Formula) -> BTreeSet<String> {
    use Formula::*;
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            True | False | Eq(..) | Leq(..) | Label(..) => {}
            Not(g) => go(g, out),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                go(a, out);
                go(b, out);
            }
            Exists(v, g) | Forall(v, g) => {
                out.insert(v.clone());
                go(g, out);
            }
        }
    }
    go(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn w(u: &str, v: &str) -> UpWord {
        UpWord::from_strs(u, v)
    }

    #[test]
    fn atoms_and_shadowing() {
        let x = w("ab", "c");
        assert!(eval_at(&label('b', "x"), &x, &[("x", 2)]).unwrap());
        assert!(eval_at(&lt("x", "y"), &x, &[("x", 2), ("y", 5)]).unwrap());
        // the inner `x` shadows the assigned one
        let f = exists("x", label('a', "x"));
        assert!(eval_at(&f, &x, &[("x", 3)]).unwrap());
        let g = parse("E x. (Lc(x) & A x. Lc(x) -> x=x)").unwrap();
        assert!(eval_at(&g, &x, &[]).unwrap());
    }

    #[test]
    fn unassigned_free_variables_are_rejected() {
        assert!(eval_at(&label('a', "x"), &w("", "a"), &[]).is_err());
    }

    #[test]
    fn reach_and_betweenness() {
        let s = w("ab#ba#", "a");
        let r = shorthand("reach_#").unwrap();
        assert!(eval_at(&r, &s, &[("x", 4)]).unwrap());
        assert!(!eval_at(&r, &s, &[("x", 6)]).unwrap());
        let b = shorthand("btw_#").unwrap();
        assert!(eval_at(&b, &s, &[("x", 1), ("y", 4)]).unwrap());
        assert!(eval_at(&b, &s, &[("x", 4), ("y", 1)]).unwrap());
        assert!(!eval_at(&b, &s, &[("x", 4), ("y", 5)]).unwrap());
    }

    #[test]
    fn finitely_many_hashes() {
        let f = shorthand("is_string_#").unwrap();
        assert!(eval_at(&f, &w("ab#", "a"), &[]).unwrap());
        assert!(eval_at(&f, &w("", "a"), &[]).unwrap());
        assert!(!eval_at(&f, &w("", "#a"), &[]).unwrap());
        assert!(!eval_at(&f, &w("aaaaaaa", "ab#"), &[]).unwrap());
    }

    #[test]
    fn string_shape_sentence_fails_on_omega_words() {
        let f = shorthand("is_string").unwrap();
        assert!(f.free_vars().is_empty());
        for s in [w("", "a"), w("ab", "ba"), w("#", "a#")] {
            assert!(!eval_at(&f, &s, &[]).unwrap());
        }
        // all positions but the first have a unique predecessor
        let p = and(not(first("x", "w")), u_pred("x"));
        assert!(eval_at(&p, &w("", "a"), &[("x", 3)]).unwrap());
        assert!(eval_at(&u_succ("x"), &w("", "a"), &[("x", 1)]).unwrap());
    }

    #[test]
    fn unknown_shorthand() {
        assert_eq!(shorthand("nope"), Err(Error::UnknownShorthand("nope".into())));
        assert!(parse("@nope(x)").is_err());
    }

    #[test]
    fn parser_precedence_and_shorthands() {
        let f = parse("!La(x) & Lb(x) | x<y -> x=y").unwrap();
        assert_eq!(f, implies(or(and(not(label('a', "x")), label('b', "x")), lt("x", "y")), eq("x", "y")));
        let g = parse("@btw_#(u, v)").unwrap();
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), ["u", "v"]);
        let h = parse("@lt(y, x)").unwrap();
        assert_eq!(h, lt("y", "x"));
        assert!(parse("@reach_#(y)").is_err());
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0usize..3, 0usize..3).prop_map(|(a, b)| eq(["x", "y", "z"][a], ["x", "y", "z"][b])),
            (0usize..3, 0usize..3).prop_map(|(a, b)| leq(["x", "y", "z"][a], ["x", "y", "z"][b])),
            (prop::sample::select(vec!['a', '#', '(']), 0usize..3).prop_map(|(c, a)| label(c, ["x", "y", "z"][a])),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| implies(a, b)),
                (0usize..3, inner.clone()).prop_map(|(v, f)| exists(["x", "y", "z"][v], f)),
                (0usize..3, inner).prop_map(|(v, f)| forall(["x", "y", "z"][v], f)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(f in formula()) {
            let text = alloc::format!("{f}");
            prop_assert_eq!(parse(&text).unwrap(), f);
        }

        #[test]
        fn negation_flips_sentences(f in formula(), u in "[a#]{0,3}", v in "[a#]{1,2}") {
            let s = UpWord::from_strs(&u, &v);
            let pairs = [("x", 1), ("y", 2), ("z", 4)];
            if let (Ok(a), Ok(b)) = (eval_at(&f, &s, &pairs), eval_at(&not(f.clone()), &s, &pairs)) {
                prop_assert_eq!(a, !b);
            }
        }

        #[test]
        fn stable_under_larger_horizons(u in "[a#]{0,4}", v in "[a#]{1,3}") {
            // formulas of depth at most two are evaluated exactly by these horizons
            let s = UpWord::from_strs(&u, &v);
            let f = shorthand("is_string_#").unwrap();
            let truth = !v.contains('#');
            prop_assert_eq!(eval_at(&f, &s, &[]).unwrap(), truth);
            let big = EvalConfig { base_bound: 8, stability_doublings: 3 };
            prop_assert_eq!(eval(&f, &s, &Assignment::new(), &big).unwrap(), truth);
        }
    }
}

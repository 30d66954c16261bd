//! Deterministic streaming string transducers over ω-words.
//!
//! Columns are numbered by the number of letters read: column `i` holds the
//! variable values after `s[1..i]`, and the update reading `s[i+1]` moves from
//! column `i` to column `i + 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monoid::{self, Monoid, Verdict};
use crate::muller::{Family, Tuple};
use crate::set::StateSet;
use crate::words::{Alphabet, Lasso, OutSym, RunResult, UpWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Var(usize),
    Sym(char),
}

/// A map from variables to strings over output letters and variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    rhs: Vec<Vec<Item>>,
}

impl Substitution {
    pub fn identity(nvars: usize) -> Self {
        Substitution { rhs: (0..nvars).map(|x| vec![Item::Var(x)]).collect() }
    }

    pub fn from_rhs(rhs: Vec<Vec<Item>>) -> Self {
        Substitution { rhs }
    }

    pub fn nvars(&self) -> usize {
        self.rhs.len()
    }

    pub fn get(&self, x: usize) -> &[Item] {
        &self.rhs[x]
    }

    pub fn set(&mut self, x: usize, items: Vec<Item>) {
        self.rhs[x] = items;
    }

    pub fn rhs(&self) -> &[Vec<Item>] {
        &self.rhs
    }

    /// `x ↦ ŝelf(other(x))`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let rhs = other
            .rhs
            .iter()
            .map(|items| {
                let mut out = Vec::new();
                for it in items {
                    match it {
                        Item::Var(y) => out.extend_from_slice(&self.rhs[*y]),
                        Item::Sym(c) => out.push(Item::Sym(*c)),
                    }
                }
                out
            })
            .collect();
        Substitution { rhs }
    }

    pub fn is_copyless(&self) -> bool {
        let mut seen = vec![false; self.rhs.len()];
        for it in self.rhs.iter().flatten() {
            if let Item::Var(y) = it {
                if core::mem::replace(&mut seen[*y], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Applies the update to a valuation, truncating every value to `cap` letters.
    pub fn apply(&self, val: &[Vec<char>], cap: usize) -> Vec<Vec<char>> {
        self.rhs
            .iter()
            .map(|items| {
                let mut out = Vec::new();
                for it in items {
                    if out.len() >= cap {
                        break;
                    }
                    match it {
                        Item::Var(y) => out.extend_from_slice(&val[*y]),
                        Item::Sym(c) => out.push(*c),
                    }
                }
                out.truncate(cap);
                out
            })
            .collect()
    }

    /// `counts[x][y]`: occurrences of `x` in the image of `y`.
    pub fn occurrences(&self) -> Vec<(usize, usize, u64)> {
        let mut m: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (y, items) in self.rhs.iter().enumerate() {
            for it in items {
                if let Item::Var(x) = it {
                    *m.entry((*x, y)).or_default() += 1;
                }
            }
        }
        m.into_iter().map(|((x, y), c)| (x, y, c)).collect()
    }

    /// Maximal constant factors between variable occurrences, `ε` included.
    pub fn constant_factors(&self) -> BTreeSet<Vec<char>> {
        let mut out = BTreeSet::new();
        for items in &self.rhs {
            let mut cur = Vec::new();
            for it in items {
                match it {
                    Item::Sym(c) => cur.push(*c),
                    Item::Var(_) => {
                        out.insert(core::mem::take(&mut cur));
                    }
                }
            }
            out.insert(cur);
        }
        out
    }
}

impl Substitution {
    /// Parses `X := aXb; Y := YX`; unlisted variables keep their value.
    ///
    /// A right-hand side is read left to right, taking the longest variable
    /// name at each point and a single letter otherwise; whitespace is
    /// ignored and `ε` or nothing denotes the empty string.
    pub fn parse(text: &str, vars: &[String]) -> Result<Substitution> {
        let mut s = Substitution::identity(vars.len());
        let mut assigned = BTreeSet::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once(":=").ok_or_else(|| Error::Invalid(format!("expected `X := ...` in `{part}`")))?;
            let lhs = lhs.trim();
            let x = vars.iter().position(|v| v == lhs).ok_or_else(|| Error::Invalid(format!("unknown variable `{lhs}`")))?;
            if !assigned.insert(x) {
                return Err(Error::Invalid(format!("variable `{lhs}` assigned twice")));
            }
            s.rhs[x] = parse_rhs(rhs, vars);
        }
        Ok(s)
    }

    /// Renders as `X := ...; Y := ...`, skipping identity assignments.
    pub fn display(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (x, items) in self.rhs.iter().enumerate() {
            if items.as_slice() == [Item::Var(x)] {
                continue;
            }
            let mut r = String::new();
            for it in items {
                match it {
                    Item::Var(y) => r.push_str(&vars[*y]),
                    Item::Sym(c) => r.push(*c),
                }
            }
            if r.is_empty() {
                r.push('ε');
            }
            parts.push(format!("{} := {}", vars[x], r));
        }
        parts.join("; ")
    }
}

fn parse_rhs(rhs: &str, vars: &[String]) -> Vec<Item> {
    let chars: Vec<char> = rhs.chars().filter(|c| !c.is_whitespace()).collect();
    if chars == ['ε'] {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let best = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                let v: Vec<char> = v.chars().collect();
                chars[i..].starts_with(&v)
            })
            .max_by_key(|(_, v)| v.chars().count());
        match best {
            Some((x, v)) => {
                out.push(Item::Var(x));
                i += v.chars().count();
            }
            None => {
                out.push(Item::Sym(chars[i]));
                i += 1;
            }
        }
    }
    out
}

pub fn compose_subst(s1: &Substitution, s2: &Substitution) -> Substitution {
    s1.compose(s2)
}

pub fn is_copyless(s: &Substitution) -> bool {
    s.is_copyless()
}

/// The output function of an SST.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutputSpec {
    /// A partial map from Muller sets to output variable sequences.
    Muller(Vec<(StateSet, Vec<usize>)>),
    /// Every non-empty set of states outputs the same sequence.
    Uniform(Vec<usize>),
}

impl OutputSpec {
    pub fn select(&self, omega: &StateSet) -> Option<&[usize]> {
        match self {
            OutputSpec::Muller(f) => f.iter().find(|(p, _)| p == omega).map(|(_, v)| v.as_slice()),
            OutputSpec::Uniform(v) => (!omega.is_empty()).then_some(v.as_slice()),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            OutputSpec::Muller(f) => Family::Sets(f.iter().map(|(p, _)| p.clone()).collect()),
            OutputSpec::Uniform(_) => Family::AllSubsets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sst {
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub vars: Vec<String>,
    /// `delta[q][i]` on the `i`-th input letter.
    pub delta: Vec<Vec<usize>>,
    pub rho: Vec<Vec<Substitution>>,
    pub out: OutputSpec,
}

impl Sst {
    /// Validates structure and the output invariant; copylessness is checked by
    /// [`Sst::check_copyless`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        states: Vec<String>,
        initial: usize,
        vars: Vec<String>,
        delta: Vec<Vec<usize>>,
        rho: Vec<Vec<Substitution>>,
        out: OutputSpec,
    ) -> Result<Sst> {
        let t = Sst { input, output, states, initial, vars, delta, rho, out };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let (nq, na, nv) = (self.states.len(), self.input.len(), self.vars.len());
        if nq == 0 || self.initial >= nq {
            return Err(Error::Invalid("bad state set or initial state".into()));
        }
        if self.delta.len() != nq || self.delta.iter().any(|r| r.len() != na || r.iter().any(|&q| q >= nq)) {
            return Err(Error::Invalid("transition table is not total".into()));
        }
        if self.rho.len() != nq || self.rho.iter().any(|r| r.len() != na) {
            return Err(Error::Invalid("update table is not total".into()));
        }
        for s in self.rho.iter().flatten() {
            if s.nvars() != nv {
                return Err(Error::Invalid("update arity differs from the variable count".into()));
            }
            for it in s.rhs.iter().flatten() {
                match it {
                    Item::Var(x) if *x >= nv => return Err(Error::Invalid("unknown variable".into())),
                    Item::Sym(c) if !self.output.contains(*c) => {
                        return Err(Error::Invalid(format!("output letter `{c}` not in the output alphabet")))
                    }
                    _ => {}
                }
            }
        }
        let entries: Vec<(StateSet, Vec<usize>)> = match &self.out {
            OutputSpec::Muller(f) => f.clone(),
            OutputSpec::Uniform(v) => vec![((0..nq).collect(), v.clone())],
        };
        for (i, (p, xs)) in entries.iter().enumerate() {
            if p.is_empty() || p.iter().any(|q| q >= nq) {
                return Err(Error::Invalid("output sets must be non-empty sets of states".into()));
            }
            if entries[..i].iter().any(|(p2, _)| p2 == p) {
                return Err(Error::Invalid("duplicate output set".into()));
            }
            if xs.iter().any(|&x| x >= nv) {
                return Err(Error::Invalid("unknown output variable".into()));
            }
            let distinct: BTreeSet<_> = xs.iter().collect();
            if distinct.len() != xs.len() {
                return Err(Error::Invalid("output sequence is not copyless".into()));
            }
            let Some((&last, init)) = xs.split_last() else { continue };
            for q in p.iter() {
                for a in 0..na {
                    if !p.contains(self.delta[q][a]) {
                        continue;
                    }
                    let s = &self.rho[q][a];
                    let fixed = init.iter().all(|&x| s.get(x) == [Item::Var(x)]);
                    let appends = s.get(last).first() == Some(&Item::Var(last));
                    if !fixed || !appends {
                        return Err(Error::Invalid(format!(
                            "output invariant fails on `{}` reading `{}`",
                            self.states[q],
                            self.input.symbols()[a]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_copyless(&self) -> Result<()> {
        for (q, row) in self.rho.iter().enumerate() {
            for (a, s) in row.iter().enumerate() {
                if !s.is_copyless() {
                    return Err(Error::Invalid(format!(
                        "copyless violation in the update of `{}` on `{}`",
                        self.states[q],
                        self.input.symbols()[a]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_copyless(&self) -> bool {
        self.check_copyless().is_ok()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|s| s == name)
    }

    fn letter(&self, a: char) -> usize {
        self.input.index_of(a).expect("letter in the input alphabet")
    }

    pub fn step(&self, q: usize, a: char) -> (usize, &Substitution) {
        let i = self.letter(a);
        (self.delta[q][i], &self.rho[q][i])
    }

    pub fn family(&self) -> Family {
        self.out.family()
    }

    /// Variable values after reading a finite word.
    pub fn valuation(&self, w: &[char]) -> Vec<Vec<char>> {
        let mut val = vec![Vec::new(); self.vars.len()];
        let mut q = self.initial;
        for &a in w {
            let (q2, s) = self.step(q, a);
            val = s.apply(&val, usize::MAX);
            q = q2;
        }
        val
    }

    pub fn run_output(&self, w: &UpWord, k: usize) -> RunResult {
        run_lasso(
            self.initial,
            self.vars.len(),
            &w.lasso(),
            |q, a| Some(self.step(q, *a)),
            |om| self.out.select(om).map(<[usize]>::to_vec),
            k,
        )
    }
}

pub fn run_output(t: &Sst, w: &UpWord, k: usize) -> RunResult {
    t.run_output(w, k)
}

/// Runs a deterministic substitution machine on a lasso of letters.
///
/// `select` maps the set of states visited infinitely often to the output
/// variables, or `None` to reject. A missing transition makes the run stuck.
pub(crate) fn run_lasso<'a, L>(
    initial: usize,
    nvars: usize,
    lasso: &Lasso<L>,
    mut step: impl FnMut(usize, &L) -> Option<(usize, &'a Substitution)>,
    select: impl Fn(&StateSet) -> Option<Vec<usize>>,
    k: usize,
) -> RunResult {
    let cap = k.max(1);
    let mut val = vec![Vec::new(); nvars];
    let mut q = initial;
    for a in &lasso.prefix {
        let Some((q2, s)) = step(q, a) else { return RunResult::Stuck };
        val = s.apply(&val, cap);
        q = q2;
    }
    // period boundaries until the state repeats
    let mut bounds = vec![q];
    let start = loop {
        for a in &lasso.period {
            let Some((q2, s)) = step(q, a) else { return RunResult::Stuck };
            val = s.apply(&val, cap);
            q = q2;
        }
        if let Some(i) = bounds.iter().position(|&b| b == q) {
            break i;
        }
        bounds.push(q);
    };
    let cycles = bounds.len() - start;
    let mut omega = StateSet::new();
    let mut p = q;
    for _ in 0..cycles {
        for a in &lasso.period {
            omega.insert(p);
            p = step(p, a).expect("transition seen before").0;
        }
    }
    let Some(out_vars) = select(&omega) else { return RunResult::Rejected };
    let render = |val: &[Vec<char>]| {
        let mut o = Vec::new();
        for &x in &out_vars {
            o.extend_from_slice(&val[x]);
        }
        o
    };
    let nonempty = |val: &[Vec<char>]| -> StateSet { (0..nvars).filter(|&x| !val[x].is_empty()).collect() };
    let mut seen: BTreeMap<StateSet, usize> = BTreeMap::new();
    loop {
        let out = render(&val);
        if out.len() >= k {
            return RunResult::Output(out.into_iter().take(k).map(OutSym::Sym).collect());
        }
        let n = nonempty(&val);
        if seen.get(&n) == Some(&out.len()) {
            let mut res: Vec<OutSym> = out.into_iter().map(OutSym::Sym).collect();
            res.resize(k, OutSym::Bot);
            return RunResult::Output(res);
        }
        seen.insert(n, out.len());
        for _ in 0..cycles {
            for a in &lasso.period {
                let (q2, s) = step(q, a).expect("transition seen before");
                val = s.apply(&val, cap);
                q = q2;
            }
        }
    }
}

/// Saturation bound for copy counts.
pub const COUNT_CAP: u8 = 2;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowRow {
    pub target: usize,
    pub tuple: Tuple,
    /// `(x, y, n)`: `n` copies of `x` flow into `y`; sorted, zero counts omitted.
    pub counts: Vec<(u32, u32, u8)>,
}

/// Flow entry between `(p, X)` and `(q, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowEntry {
    Bot,
    Entry { count: u8, tuple: Tuple },
}

/// Flow matrix of a finite word; row `p` is `None` only for the empty machine.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowMatrix {
    pub rows: Vec<FlowRow>,
}

impl FlowMatrix {
    pub fn identity(nstates: usize, nvars: usize, family: &Family) -> Self {
        let counts: Vec<(u32, u32, u8)> = (0..nvars as u32).map(|x| (x, x, 1)).collect();
        FlowMatrix { rows: (0..nstates).map(|p| FlowRow { target: p, tuple: family.neutral(), counts: counts.clone() }).collect() }
    }

    pub fn get(&self, p: usize, x: usize, q: usize, y: usize) -> FlowEntry {
        let row = &self.rows[p];
        if row.target != q {
            return FlowEntry::Bot;
        }
        let count = row.counts.binary_search_by(|&(a, b, _)| (a, b).cmp(&(x as u32, y as u32))).map(|i| row.counts[i].2).unwrap_or(0);
        FlowEntry::Entry { count, tuple: row.tuple.clone() }
    }

    pub fn mul(&self, other: &FlowMatrix, family: &Family) -> FlowMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r1| {
                let r2 = &other.rows[r1.target];
                let mut prod: Vec<(u32, u32, u8)> = Vec::new();
                for &(x, z, a) in &r1.counts {
                    let lo = r2.counts.partition_point(|e| e.0 < z);
                    for &(z2, y, b) in &r2.counts[lo..] {
                        if z2 != z {
                            break;
                        }
                        prod.push((x, y, a.saturating_mul(b).min(COUNT_CAP)));
                    }
                }
                prod.sort_unstable();
                let mut counts: Vec<(u32, u32, u8)> = Vec::with_capacity(prod.len());
                for (x, y, c) in prod {
                    match counts.last_mut() {
                        Some(last) if last.0 == x && last.1 == y => last.2 = (last.2 + c).min(COUNT_CAP),
                        _ => counts.push((x, y, c)),
                    }
                }
                FlowRow { target: r2.target, tuple: family.mul(&r1.tuple, &r2.tuple), counts }
            })
            .collect();
        FlowMatrix { rows }
    }

    pub fn max_count(&self) -> u8 {
        self.rows.iter().flat_map(|r| r.counts.iter().map(|c| c.2)).max().unwrap_or(0)
    }
}

impl Sst {
    pub fn letter_flow(&self, a: char) -> FlowMatrix {
        let family = self.family();
        let i = self.letter(a);
        let rows = (0..self.states.len())
            .map(|p| {
                let q = self.delta[p][i];
                let visited: StateSet = [p, q].into_iter().collect();
                let counts =
                    self.rho[p][i].occurrences().into_iter().map(|(x, y, c)| (x as u32, y as u32, c.min(COUNT_CAP as u64) as u8)).collect();
                FlowRow { target: q, tuple: family.tuple_of(&visited), counts }
            })
            .collect();
        FlowMatrix { rows }
    }

    pub fn flow_matrix(&self, w: &[char]) -> FlowMatrix {
        let family = self.family();
        let id = FlowMatrix::identity(self.states.len(), self.vars.len(), &family);
        w.iter().fold(id, |m, &a| m.mul(&self.letter_flow(a), &family))
    }

    pub fn monoid(&self, cap: usize) -> Result<Monoid<FlowMatrix>> {
        let family = self.family();
        let gens: Vec<(char, FlowMatrix)> = self.input.symbols().iter().map(|&a| (a, self.letter_flow(a))).collect();
        let id = FlowMatrix::identity(self.states.len(), self.vars.len(), &family);
        monoid::generate(id, &gens, |x, y| Ok(x.mul(y, &family)), cap)
    }

    pub fn is_1_bounded(&self, cap: usize) -> Result<bool> {
        Ok(self.monoid(cap)?.elements.iter().all(|m| m.max_count() <= 1))
    }

    pub fn is_aperiodic(&self, cap: usize) -> Result<Verdict> {
        let family = self.family();
        let m = self.monoid(cap)?;
        monoid::check_aperiodic(&m, |x, y| Ok(x.mul(y, &family)))
    }
}

pub fn flow_matrix(t: &Sst, w: &[char]) -> FlowMatrix {
    t.flow_matrix(w)
}

pub fn sst_monoid(t: &Sst, cap: usize) -> Result<Monoid<FlowMatrix>> {
    t.monoid(cap)
}

pub fn is_1_bounded(t: &Sst, cap: usize) -> Result<bool> {
    t.is_1_bounded(cap)
}

pub fn is_aperiodic_sst(t: &Sst, cap: usize) -> Result<Verdict> {
    t.is_aperiodic(cap)
}

/// The run of an SST on an accepted word, with its lasso.
#[derive(Clone, Debug)]
pub struct SettledRun<'a> {
    t: &'a Sst,
    w: UpWord,
    /// States at columns `0..=settle + cycle`.
    states: Vec<usize>,
    /// From this column on, states repeat with period `cycle`.
    pub settle: usize,
    pub cycle: usize,
    pub omega: StateSet,
    pub out_vars: Vec<usize>,
}

impl<'a> SettledRun<'a> {
    pub fn new(t: &'a Sst, w: &UpWord) -> Result<Self> {
        let (u, v) = (w.prefix(), w.period());
        let mut q = t.initial;
        let mut states = vec![q];
        for &a in u {
            q = t.step(q, a).0;
            states.push(q);
        }
        let mut bounds = vec![q];
        let start = loop {
            for &a in v {
                q = t.step(q, a).0;
                states.push(q);
            }
            if let Some(i) = bounds.iter().position(|&b| b == q) {
                break i;
            }
            bounds.push(q);
        };
        let settle = u.len() + start * v.len();
        let cycle = (bounds.len() - start) * v.len();
        states.truncate(settle + cycle + 1);
        let omega: StateSet = states[settle..settle + cycle].iter().copied().collect();
        let out_vars = t.out.select(&omega).ok_or(Error::NotInDomain)?.to_vec();
        Ok(SettledRun { t, w: w.clone(), states, settle, cycle, omega, out_vars })
    }

    pub fn state_at(&self, col: usize) -> usize {
        if col < self.states.len() {
            self.states[col]
        } else {
            self.states[self.settle + (col - self.settle) % self.cycle]
        }
    }

    /// Phase of a column at or after the settling column.
    fn phase(&self, col: usize) -> usize {
        (col - self.settle) % self.cycle
    }

    /// The update from column `col - 1` to column `col`.
    pub fn update(&self, col: usize) -> &'a Substitution {
        self.t.step(self.state_at(col - 1), self.w.letter_at(col)).1
    }

    /// Variables at column `col + 1` containing content of some variable in `s` at `col`.
    fn containers_step(&self, s: &StateSet, col: usize) -> StateSet {
        let sub = self.update(col + 1);
        (0..self.t.vars.len()).filter(|&y| sub.get(y).iter().any(|it| matches!(it, Item::Var(z) if s.contains(*z)))).collect()
    }

    fn containers(&self, x: usize, from: usize, to: usize) -> StateSet {
        let mut s = StateSet::singleton(x);
        for c in from..to {
            s = self.containers_step(&s, c);
        }
        s
    }

    /// Copies of `x` at column `i` inside `y` at column `j`.
    pub fn flows(&self, i: usize, j: usize, x: usize, y: usize) -> u64 {
        let nv = self.t.vars.len();
        let mut cur = vec![0u64; nv];
        cur[x] = 1;
        for c in i..j {
            let sub = self.update(c + 1);
            let mut next = vec![0u64; nv];
            for (y2, items) in sub.rhs().iter().enumerate() {
                for it in items {
                    if let Item::Var(z) = it {
                        next[y2] = next[y2].saturating_add(cur[*z]);
                    }
                }
            }
            cur = next;
        }
        cur[y]
    }

    /// Whether the content of `x` at column `i` reaches an output variable.
    pub fn useful(&self, x: usize, i: usize) -> bool {
        let outs: StateSet = self.out_vars.iter().copied().collect();
        let mut s = StateSet::singleton(x);
        let mut col = i;
        let mut seen = BTreeSet::new();
        loop {
            if s.is_empty() {
                return false;
            }
            if col >= self.settle {
                if s.intersects(&outs) {
                    return true;
                }
                if !seen.insert((self.phase(col), s.clone())) {
                    return false;
                }
            }
            s = self.containers_step(&s, col);
            col += 1;
        }
    }

    /// Whether some update at or after column `max(i, j)` places content of
    /// `x@i` before content of `y@j` in one right-hand side.
    pub fn concatenated_later(&self, x: usize, i: usize, y: usize, j: usize) -> bool {
        let m = i.max(j);
        let mut sx = self.containers(x, i, m);
        let mut sy = self.containers(y, j, m);
        let mut col = m;
        let mut seen = BTreeSet::new();
        loop {
            if sx.is_empty() || sy.is_empty() {
                return false;
            }
            if col >= self.settle && !seen.insert((self.phase(col), sx.clone(), sy.clone())) {
                return false;
            }
            let sub = self.update(col + 1);
            for items in sub.rhs() {
                let mut saw_x = false;
                for it in items {
                    if let Item::Var(z) = it {
                        if saw_x && sy.contains(*z) {
                            return true;
                        }
                        if sx.contains(*z) {
                            saw_x = true;
                        }
                    }
                }
            }
            sx = self.containers_step(&sx, col);
            sy = self.containers_step(&sy, col);
            col += 1;
        }
    }

    /// Whether `(X^d, i)` reaches `(Y^d', j)` in the output graph.
    pub fn path(&self, x: usize, i: usize, d: Side, y: usize, j: usize, d2: Side) -> bool {
        if !self.useful(x, i) || !self.useful(y, j) {
            return false;
        }
        let cond1 = d == Side::In && j <= i && self.flows(j, i, y, x) >= 1;
        let cond2 = d2 == Side::Out && i <= j && self.flows(i, j, x, y) >= 1;
        cond1 || cond2 || self.concatenated_later(x, i, y, j)
    }

    /// Value of every variable at column `col`, computed directly.
    pub fn valuation_at(&self, col: usize) -> Vec<Vec<char>> {
        let mut val = vec![Vec::new(); self.t.vars.len()];
        for c in 1..=col {
            val = self.update(c).apply(&val, usize::MAX);
        }
        val
    }
}

pub fn flows(t: &Sst, w: &UpWord, i: usize, j: usize, x: usize, y: usize) -> Result<u64> {
    if i > j {
        return Err(Error::Invalid("flows needs i <= j".into()));
    }
    Ok(SettledRun::new(t, w)?.flows(i, j, x, y))
}

pub fn useful(t: &Sst, w: &UpWord, x: usize, i: usize) -> Result<bool> {
    Ok(SettledRun::new(t, w)?.useful(x, i))
}

#[allow(clippy::too_many_arguments)]
pub fn path_conditions(t: &Sst, w: &UpWord, x: usize, i: usize, d: Side, y: usize, j: usize, d2: Side) -> Result<bool> {
    Ok(SettledRun::new(t, w)?.path(x, i, d, y, j, d2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub var: usize,
    pub col: usize,
    pub side: Side,
}

impl Node {
    pub fn new(var: usize, col: usize, side: Side) -> Self {
        Node { var, col, side }
    }
}

/// The output graph truncated to columns `0..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputGraph {
    pub vars: Vec<String>,
    pub horizon: usize,
    pub nodes: BTreeSet<Node>,
    pub edges: BTreeMap<(Node, Node), Vec<char>>,
    /// Constant strings that may label edges.
    pub labels: BTreeSet<Vec<char>>,
}

impl OutputGraph {
    pub fn successors(&self, n: Node) -> impl Iterator<Item = (Node, &Vec<char>)> + '_ {
        let lo = (n, Node::new(0, 0, Side::In));
        self.edges.range(lo..).take_while(move |((a, _), _)| *a == n).map(|((_, b), l)| (*b, l))
    }

    pub fn reachable(&self, from: Node, to: Node) -> bool {
        let mut seen = BTreeSet::new();
        let mut todo = vec![from];
        while let Some(n) = todo.pop() {
            if n == to {
                return true;
            }
            if seen.insert(n) {
                todo.extend(self.successors(n).map(|(m, _)| m));
            }
        }
        false
    }

    /// Label of the path from `(X^in, i)` to `(X^out, i)`.
    pub fn path_label(&self, x: usize, i: usize) -> Option<Vec<char>> {
        let target = Node::new(x, i, Side::Out);
        let mut label = Vec::new();
        let mut n = Node::new(x, i, Side::In);
        let mut steps = 0;
        while n != target {
            let mut succ = self.successors(n);
            let (m, l) = succ.next()?;
            if succ.next().is_some() || steps > self.edges.len() {
                return None;
            }
            label.extend_from_slice(l);
            n = m;
            steps += 1;
        }
        Some(label)
    }
}

/// Builds the output graph of `t` on `w` for columns `0..=horizon`.
pub fn build_output_graph(t: &Sst, w: &UpWord, horizon: usize, cap: usize) -> Result<OutputGraph> {
    if !t.is_copyless() && !t.is_1_bounded(cap)? {
        return Err(Error::NotOneBounded);
    }
    let run = SettledRun::new(t, w)?;
    let nv = t.vars.len();
    let useful: Vec<Vec<bool>> = (0..=horizon).map(|i| (0..nv).map(|x| run.useful(x, i)).collect()).collect();
    let mut g = OutputGraph { vars: t.vars.clone(), horizon, nodes: BTreeSet::new(), edges: BTreeMap::new(), labels: BTreeSet::new() };
    for s in t.rho.iter().flatten() {
        g.labels.extend(s.constant_factors());
    }
    g.labels.insert(Vec::new());
    let add = |g: &mut OutputGraph, a: Node, b: Node, l: Vec<char>| -> Result<()> {
        if g.edges.insert((a, b), l).is_some() {
            return Err(Error::NotOneBounded);
        }
        Ok(())
    };
    for (i, row) in useful.iter().enumerate() {
        for (x, &u) in row.iter().enumerate() {
            if u {
                g.nodes.insert(Node::new(x, i, Side::In));
                g.nodes.insert(Node::new(x, i, Side::Out));
            }
        }
    }
    for (x, _) in useful[0].iter().enumerate().filter(|p| *p.1) {
        add(&mut g, Node::new(x, 0, Side::In), Node::new(x, 0, Side::Out), Vec::new())?;
    }
    for i in 0..horizon {
        let sub = run.update(i + 1);
        for (x, _) in useful[i + 1].iter().enumerate().filter(|p| *p.1) {
            let mut prev = Node::new(x, i + 1, Side::In);
            let mut label = Vec::new();
            for it in sub.get(x) {
                match it {
                    Item::Sym(c) => label.push(*c),
                    Item::Var(y) => {
                        add(&mut g, prev, Node::new(*y, i, Side::In), core::mem::take(&mut label))?;
                        prev = Node::new(*y, i, Side::Out);
                    }
                }
            }
            add(&mut g, prev, Node::new(x, i + 1, Side::Out), label)?;
        }
    }
    Ok(g)
}

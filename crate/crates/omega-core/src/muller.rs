//! Deterministic Muller automata, look-behind DFAs and transition monoids.
//!
//! A transition matrix records, for every source state, the state reached by a
//! finite word together with a tuple summarising the set `V` of states visited
//! on the way (both ends included). Against a Muller family `F_1..F_m`,
//! coordinate `i` is `Zero` when `V ⊄ F_i`, `One` when `V = F_i` and `Part(V)`
//! when `V ⊊ F_i`. Products combine coordinates through [`Family::mul`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monoid::{self, Monoid, Verdict};
use crate::set::StateSet;
use crate::words::{Alphabet, UpWord};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Zero,
    One,
    Part(StateSet),
    /// Coordinate of the identity matrix; neutral for products.
    Neutral,
}

pub type Tuple = Vec<Coord>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonoidEntry {
    Bot,
    Tuple(Tuple),
}

/// How visited-state sets are summarised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Relative to each set of a Muller family.
    Sets(Vec<StateSet>),
    /// Every non-empty set is accepting; the tuple is the visited set itself.
    AllSubsets,
}

impl Family {
    pub fn arity(&self) -> usize {
        match self {
            Family::Sets(f) => f.len(),
            Family::AllSubsets => 1,
        }
    }

    pub fn neutral(&self) -> Tuple {
        alloc::vec![Coord::Neutral; self.arity()]
    }

    pub fn tuple_of(&self, visited: &StateSet) -> Tuple {
        match self {
            Family::Sets(f) => f
                .iter()
                .map(|fi| {
                    if !visited.is_subset(fi) {
                        Coord::Zero
                    } else if visited == fi {
                        Coord::One
                    } else {
                        Coord::Part(visited.clone())
                    }
                })
                .collect(),
            Family::AllSubsets => alloc::vec![Coord::Part(visited.clone())],
        }
    }

    /// Product of tuples.
    pub fn mul(&self, a: &Tuple, b: &Tuple) -> Tuple {
        a.iter()
            .zip(b.iter())
            .enumerate()
            .map(|(i, (x, y))| match self {
                Family::Sets(f) => coord_mul(x, y, &f[i]),
                Family::AllSubsets => match (x, y) {
                    (Coord::Neutral, z) | (z, Coord::Neutral) => z.clone(),
                    (Coord::Part(p), Coord::Part(q)) => Coord::Part(p.union(q)),
                    _ => Coord::Zero,
                },
            })
            .collect()
    }

    /// Whether a visited set is accepting.
    pub fn accepts(&self, visited: &StateSet) -> bool {
        match self {
            Family::Sets(f) => f.contains(visited),
            Family::AllSubsets => !visited.is_empty(),
        }
    }
}

/// Coordinate product relative to `fi`.
pub fn coord_mul(x: &Coord, y: &Coord, fi: &StateSet) -> Coord {
    use Coord::*;
    match (x, y) {
        (Neutral, z) | (z, Neutral) => z.clone(),
        (Zero, _) | (_, Zero) => Zero,
        (One, One) | (One, Part(_)) | (Part(_), One) => One,
        (Part(p), Part(q)) => {
            let u = p.union(q);
            if &u == fi {
                One
            } else {
                Part(u)
            }
        }
    }
}

pub fn entry_mul(a: &MonoidEntry, b: &MonoidEntry, family: &Family) -> MonoidEntry {
    match (a, b) {
        (MonoidEntry::Tuple(x), MonoidEntry::Tuple(y)) => MonoidEntry::Tuple(family.mul(x, y)),
        _ => MonoidEntry::Bot,
    }
}

/// Sum of entries; only `⊥` and equal tuples can be added.
pub fn entry_add(a: &MonoidEntry, b: &MonoidEntry) -> Result<MonoidEntry> {
    match (a, b) {
        (MonoidEntry::Bot, e) | (e, MonoidEntry::Bot) => Ok(e.clone()),
        (x, y) if x == y => Ok(x.clone()),
        _ => Err(Error::Internal(format!("undefined sum {a:?} + {b:?}"))),
    }
}

/// A matrix with at most one non-`⊥` entry per row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransMatrix {
    rows: Vec<Option<(usize, Tuple)>>,
}

impl TransMatrix {
    pub fn identity(n: usize, family: &Family) -> Self {
        TransMatrix { rows: (0..n).map(|p| Some((p, family.neutral()))).collect() }
    }

    pub fn bot(n: usize) -> Self {
        TransMatrix { rows: alloc::vec![None; n] }
    }

    pub fn from_rows(rows: Vec<Option<(usize, Tuple)>>) -> Self {
        TransMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, p: usize) -> Option<&(usize, Tuple)> {
        self.rows[p].as_ref()
    }

    pub fn set_row(&mut self, p: usize, row: Option<(usize, Tuple)>) {
        self.rows[p] = row;
    }

    pub fn get(&self, p: usize, q: usize) -> MonoidEntry {
        match &self.rows[p] {
            Some((t, tup)) if *t == q => MonoidEntry::Tuple(tup.clone()),
            _ => MonoidEntry::Bot,
        }
    }

    pub fn is_bot(&self) -> bool {
        self.rows.iter().all(Option::is_none)
    }

    /// Non-`⊥` positions as `(row, column)` pairs.
    pub fn support(&self) -> BTreeSet<(usize, usize)> {
        self.rows.iter().enumerate().filter_map(|(p, r)| r.as_ref().map(|(q, _)| (p, *q))).collect()
    }

    pub fn mul(&self, other: &TransMatrix, family: &Family) -> TransMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let (q, t1) = r.as_ref()?;
                let (s, t2) = other.rows[*q].as_ref()?;
                Some((*s, family.mul(t1, t2)))
            })
            .collect();
        TransMatrix { rows }
    }

    /// Entrywise sum; fails when a row has two different entries.
    pub fn add(&self, other: &TransMatrix) -> Result<TransMatrix> {
        let rows = self
            .rows
            .iter()
            .zip(other.rows.iter())
            .map(|(a, b)| match (a, b) {
                (None, x) | (x, None) => Ok(x.clone()),
                (Some(x), Some(y)) if x == y => Ok(Some(x.clone())),
                _ => Err(Error::Internal("sum of matrices is not row-deterministic".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TransMatrix { rows })
    }
}

pub fn matrix_mul(a: &TransMatrix, b: &TransMatrix, family: &Family) -> TransMatrix {
    a.mul(b, family)
}

/// Checks a state table and returns it.
fn check_table(states: usize, alphabet: &Alphabet, delta: &[Vec<usize>]) -> Result<()> {
    if states == 0 {
        return Err(Error::Invalid("no states".into()));
    }
    if delta.len() != states || delta.iter().any(|r| r.len() != alphabet.len()) {
        return Err(Error::Invalid("transition table is not total".into()));
    }
    if delta.iter().flatten().any(|&q| q >= states) {
        return Err(Error::Invalid("transition to an unknown state".into()));
    }
    Ok(())
}

/// A deterministic Muller automaton with a total transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dma {
    pub states: Vec<String>,
    pub initial: usize,
    pub alphabet: Alphabet,
    /// `delta[q][i]` is the successor of `q` on the `i`-th letter.
    pub delta: Vec<Vec<usize>>,
    pub muller: Vec<StateSet>,
}

impl Dma {
    pub fn new(states: Vec<String>, initial: usize, alphabet: Alphabet, delta: Vec<Vec<usize>>, muller: Vec<StateSet>) -> Result<Self> {
        check_table(states.len(), &alphabet, &delta)?;
        if initial >= states.len() {
            return Err(Error::Invalid("unknown initial state".into()));
        }
        for (i, f) in muller.iter().enumerate() {
            if f.is_empty() || f.iter().any(|q| q >= states.len()) {
                return Err(Error::Invalid("Muller sets must be non-empty sets of states".into()));
            }
            if muller[..i].contains(f) {
                return Err(Error::Invalid("duplicate Muller set".into()));
            }
        }
        Ok(Dma { states, initial, alphabet, delta, muller })
    }

    /// Builds an automaton from state names; missing transitions are an error.
    pub fn from_names(
        states: &[&str],
        initial: &str,
        alphabet: &[char],
        transitions: &[(&str, char, &str)],
        muller: &[&[&str]],
    ) -> Result<Self> {
        let names: Vec<String> = states.iter().map(|s| String::from(*s)).collect();
        let alphabet = Alphabet::new(alphabet.iter().copied())?;
        let idx =
            |s: &str| -> Result<usize> { names.iter().position(|n| n == s).ok_or_else(|| Error::Invalid(format!("unknown state `{s}`"))) };
        let delta = table_from(&names, &alphabet, transitions, idx)?;
        let muller = muller.iter().map(|set| set.iter().map(|s| idx(s)).collect::<Result<StateSet>>()).collect::<Result<Vec<_>>>()?;
        Dma::new(names.clone(), idx(initial)?, alphabet, delta, muller)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn family(&self) -> Family {
        Family::Sets(self.muller.clone())
    }

    pub fn step(&self, q: usize, a: char) -> usize {
        let i = self.alphabet.index_of(a).expect("letter in alphabet");
        self.delta[q][i]
    }

    pub fn run_state(&self, w: &[char], from: usize) -> usize {
        w.iter().fold(from, |q, &a| self.step(q, a))
    }

    /// The end state and the set of states visited, both ends included.
    pub fn run_visited(&self, w: &[char], from: usize) -> (usize, StateSet) {
        let mut v = StateSet::singleton(from);
        let mut q = from;
        for &a in w {
            q = self.step(q, a);
            v.insert(q);
        }
        (q, v)
    }

    /// The set of states visited infinitely often on `w` from `from`.
    pub fn infinity_set(&self, from: usize, w: &UpWord) -> StateSet {
        let mut q = self.run_state(w.prefix(), from);
        let mut seen: Vec<usize> = Vec::new();
        while !seen.contains(&q) {
            seen.push(q);
            q = self.run_state(w.period(), q);
        }
        let start = seen.iter().position(|&s| s == q).unwrap();
        let mut omega = StateSet::new();
        for &s in &seen[start..] {
            omega.union_with(&self.run_visited(w.period(), s).1);
        }
        omega
    }

    pub fn accepts_from(&self, from: usize, w: &UpWord) -> bool {
        self.muller.contains(&self.infinity_set(from, w))
    }

    pub fn accepts(&self, w: &UpWord) -> bool {
        self.accepts_from(self.initial, w)
    }

    pub fn letter_matrix(&self, a: char) -> TransMatrix {
        let family = self.family();
        let i = self.alphabet.index_of(a).expect("letter in alphabet");
        let rows = (0..self.states.len())
            .map(|p| {
                let q = self.delta[p][i];
                let v: StateSet = [p, q].into_iter().collect();
                Some((q, family.tuple_of(&v)))
            })
            .collect();
        TransMatrix { rows }
    }

    pub fn matrix_of_word(&self, w: &[char]) -> TransMatrix {
        let family = self.family();
        w.iter().fold(TransMatrix::identity(self.states.len(), &family), |m, &a| m.mul(&self.letter_matrix(a), &family))
    }

    pub fn monoid(&self, cap: usize) -> Result<Monoid<TransMatrix>> {
        let family = self.family();
        let gens: Vec<(char, TransMatrix)> = self.alphabet.symbols().iter().map(|&a| (a, self.letter_matrix(a))).collect();
        monoid::generate(TransMatrix::identity(self.states.len(), &family), &gens, |x, y| Ok(x.mul(y, &family)), cap)
    }

    pub fn is_aperiodic(&self, cap: usize) -> Result<Verdict> {
        let family = self.family();
        let m = self.monoid(cap)?;
        monoid::check_aperiodic(&m, |x, y| Ok(x.mul(y, &family)))
    }

    /// The states from which `w` is accepted.
    pub fn profile(&self, w: &UpWord) -> StateSet {
        (0..self.states.len()).filter(|&m| self.accepts_from(m, w)).collect()
    }

    /// Every set `{m | w accepted from m}` that some ω-word realises.
    ///
    /// An ultimately periodic word `x · y^ω` may be taken with `y` idempotent
    /// in the monoid; `m` accepts it iff the loop of `y` at `y(x(m))` visits
    /// exactly a Muller set.
    pub fn realizable_profiles(&self, cap: usize) -> Result<BTreeSet<StateSet>> {
        let family = self.family();
        let mul = |x: &TransMatrix, y: &TransMatrix| Ok(x.mul(y, &family));
        let m = self.monoid(cap)?;
        let mut out = BTreeSet::new();
        // elements produced by non-empty words
        let semigroup: Vec<&TransMatrix> = m.elements.iter().zip(m.words.iter()).filter(|(_, w)| !w.is_empty()).map(|(e, _)| e).collect();
        let mut idem = BTreeSet::new();
        for g in semigroup {
            idem.insert(monoid::idempotent_power(g, mul)?);
        }
        for s in &m.elements {
            for e in &idem {
                let prof = (0..self.states.len())
                    .filter(|&q| {
                        let q1 = s.row(q).unwrap().0;
                        let q2 = e.row(q1).unwrap().0;
                        let (q3, tup) = e.row(q2).unwrap();
                        debug_assert_eq!(*q3, q2);
                        tup.contains(&Coord::One)
                    })
                    .collect();
                out.insert(prof);
            }
        }
        Ok(out)
    }
}

fn table_from(
    names: &[String],
    alphabet: &Alphabet,
    transitions: &[(&str, char, &str)],
    idx: impl Fn(&str) -> Result<usize>,
) -> Result<Vec<Vec<usize>>> {
    let mut delta = alloc::vec![alloc::vec![usize::MAX; alphabet.len()]; names.len()];
    for (p, a, q) in transitions {
        let ai = alphabet.index_of(*a).ok_or_else(|| Error::Invalid(format!("letter `{a}` not in alphabet")))?;
        let p = idx(p)?;
        if delta[p][ai] != usize::MAX {
            return Err(Error::Nondeterministic(format!("two transitions from `{}` on `{a}`", names[p])));
        }
        delta[p][ai] = idx(q)?;
    }
    if delta.iter().flatten().any(|&q| q == usize::MAX) {
        return Err(Error::Invalid("transition table is not total".into()));
    }
    Ok(delta)
}

/// A deterministic finite automaton, used for look-behind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<String>,
    pub initial: usize,
    pub alphabet: Alphabet,
    pub delta: Vec<Vec<usize>>,
    pub accepting: StateSet,
}

impl Dfa {
    pub fn new(states: Vec<String>, initial: usize, alphabet: Alphabet, delta: Vec<Vec<usize>>, accepting: StateSet) -> Result<Self> {
        check_table(states.len(), &alphabet, &delta)?;
        if initial >= states.len() || accepting.iter().any(|q| q >= states.len()) {
            return Err(Error::Invalid("unknown state".into()));
        }
        Ok(Dfa { states, initial, alphabet, delta, accepting })
    }

    pub fn from_names(
        states: &[&str],
        initial: &str,
        alphabet: &[char],
        transitions: &[(&str, char, &str)],
        accepting: &[&str],
    ) -> Result<Self> {
        let names: Vec<String> = states.iter().map(|s| String::from(*s)).collect();
        let alphabet = Alphabet::new(alphabet.iter().copied())?;
        let idx =
            |s: &str| -> Result<usize> { names.iter().position(|n| n == s).ok_or_else(|| Error::Invalid(format!("unknown state `{s}`"))) };
        let delta = table_from(&names, &alphabet, transitions, idx)?;
        let accepting = accepting.iter().map(|s| idx(s)).collect::<Result<StateSet>>()?;
        Dfa::new(names.clone(), idx(initial)?, alphabet, delta, accepting)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn step(&self, q: usize, a: char) -> usize {
        self.delta[q][self.alphabet.index_of(a).expect("letter in alphabet")]
    }

    pub fn run_state(&self, w: &[char], from: usize) -> usize {
        w.iter().fold(from, |q, &a| self.step(q, a))
    }

    pub fn accepts_from(&self, from: usize, w: &[char]) -> bool {
        self.accepting.contains(self.run_state(w, from))
    }

    /// Applies one letter to every component of a state vector.
    pub fn step_vector(&self, eta: &[usize], a: char) -> Vec<usize> {
        eta.iter().map(|&q| self.step(q, a)).collect()
    }

    pub fn identity_vector(&self) -> Vec<usize> {
        (0..self.states.len()).collect()
    }

    /// `r ↦ δ(r, w)` for every start state `r`.
    pub fn run_vector(&self, w: &[char]) -> Vec<usize> {
        w.iter().fold(self.identity_vector(), |e, &c| self.step_vector(&e, c))
    }

    /// State vectors `r ↦ δ(r, w)` reachable over all finite words `w`.
    pub fn reachable_vectors(&self) -> BTreeSet<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut todo = alloc::vec![self.identity_vector()];
        while let Some(v) = todo.pop() {
            if seen.insert(v.clone()) {
                for &a in self.alphabet.symbols() {
                    todo.push(self.step_vector(&v, a));
                }
            }
        }
        seen
    }
}

pub fn run_state(a: &Dma, w: &[char], from: usize) -> usize {
    a.run_state(w, from)
}

pub fn accepts(a: &Dma, w: &UpWord) -> bool {
    a.accepts(w)
}

pub fn matrix_of_word(a: &Dma, w: &[char]) -> TransMatrix {
    a.matrix_of_word(w)
}

pub fn generate_monoid(a: &Dma, cap: usize) -> Result<Monoid<TransMatrix>> {
    a.monoid(cap)
}

pub fn is_aperiodic(a: &Dma, cap: usize) -> Result<Verdict> {
    a.is_aperiodic(cap)
}

//! Finite monoids generated by letters, and the aperiodicity test.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on the number of monoid elements.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A monoid given by its elements in breadth-first order, each with a
/// shortest word that produces it.
#[derive(Clone, Debug)]
pub struct Monoid<E> {
    pub elements: Vec<E>,
    pub words: Vec<Vec<char>>,
    index: BTreeMap<E, usize>,
}

impl<E: Ord + Clone> Monoid<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }
}

/// Closes `identity` under right multiplication by the letter generators.
pub fn generate<E, F>(identity: E, gens: &[(char, E)], mut mul: F, cap: usize) -> Result<Monoid<E>>
where
    E: Ord + Clone,
    F: FnMut(&E, &E) -> Result<E>,
{
    let mut m = Monoid { elements: Vec::new(), words: Vec::new(), index: BTreeMap::new() };
    m.index.insert(identity.clone(), 0);
    m.elements.push(identity);
    m.words.push(Vec::new());
    let mut next = 0;
    while next < m.elements.len() {
        for (a, g) in gens {
            let p = mul(&m.elements[next], g)?;
            if !m.index.contains_key(&p) {
                if m.elements.len() >= cap {
                    return Err(Error::MonoidBlowup(cap));
                }
                let mut w = m.words[next].clone();
                w.push(*a);
                m.index.insert(p.clone(), m.elements.len());
                m.elements.push(p);
                m.words.push(w);
            }
        }
        next += 1;
    }
    Ok(m)
}

/// Outcome of an aperiodicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub aperiodic: bool,
    /// The first word, in breadth-first order, whose element has a
    /// non-trivial cycle among its powers.
    pub witness: Option<Vec<char>>,
    /// Every such word, one per failing element.
    pub witnesses: Vec<Vec<char>>,
    pub size: usize,
}

/// Checks that every element `e` satisfies `e^n = e^(n+1)` for some `n`.
pub fn check_aperiodic<E, F>(m: &Monoid<E>, mut mul: F) -> Result<Verdict>
where
    E: Ord + Clone,
    F: FnMut(&E, &E) -> Result<E>,
{
    let mut witnesses = Vec::new();
    for (i, e) in m.elements.iter().enumerate() {
        let mut seen = BTreeMap::new();
        let mut cur = e.clone();
        loop {
            let next = mul(&cur, e)?;
            if next == cur {
                break;
            }
            if seen.contains_key(&next) || next == *e {
                witnesses.push(m.words[i].clone());
                break;
            }
            seen.insert(cur, ());
            cur = next;
        }
    }
    Ok(Verdict { aperiodic: witnesses.is_empty(), witness: witnesses.first().cloned(), witnesses, size: m.len() })
}

/// The idempotent power `g^n` of `g`.
pub fn idempotent_power<E, F>(g: &E, mut mul: F) -> Result<E>
where
    E: Ord + Clone,
    F: FnMut(&E, &E) -> Result<E>,
{
    let mut x = g.clone();
    loop {
        let xx = mul(&x, &x)?;
        if xx == x {
            return Ok(x);
        }
        x = mul(&x, g)?;
    }
}

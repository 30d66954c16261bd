//! Deterministic two-way transducers with regular look-ahead and look-behind.
//!
//! The input is `⊢ s[1] s[2] …` with the end-marker at position 0. A run
//! starts at position 1 in the initial state. At position `i` a look-behind
//! guard `r` holds when the DFA started in `r` accepts `s[1..i-1]`, and a
//! look-ahead guard `p` holds when the Muller automaton started in `p` accepts
//! `s[i..]`. At the end-marker both guards see the same context as position 1.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monoid::{self, Monoid, Verdict, DEFAULT_CAP};
use crate::muller::{Dfa, Dma, Family, TransMatrix};
use crate::set::StateSet;
use crate::words::{extend_periodic, Alphabet, RunResult, UpWord};

/// Symbol under the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    End,
    Letter(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> isize {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    /// Look-behind guard; `None` is `⊤`.
    pub behind: Option<usize>,
    pub sym: Sym,
    /// Look-ahead guard; `None` is `⊤`.
    pub ahead: Option<usize>,
    pub to: usize,
    pub output: Vec<char>,
    pub mv: Move,
}

/// Look-around context of a position: the look-behind state vector reached
/// from every start state, and the set of look-ahead states accepting the
/// remaining suffix.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ctx {
    pub eta: Vec<usize>,
    pub prof: StateSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoWst {
    states: Vec<String>,
    initial: usize,
    input: Alphabet,
    output: Alphabet,
    transitions: Vec<Transition>,
    muller: Vec<StateSet>,
    lookahead: Option<Dma>,
    lookbehind: Option<Dfa>,
    index: BTreeMap<(usize, Sym), Vec<usize>>,
}

impl TwoWst {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        states: Vec<String>,
        initial: usize,
        input: Alphabet,
        output: Alphabet,
        transitions: Vec<Transition>,
        muller: Vec<StateSet>,
        lookahead: Option<Dma>,
        lookbehind: Option<Dfa>,
    ) -> Result<TwoWst> {
        let mut index: BTreeMap<(usize, Sym), Vec<usize>> = BTreeMap::new();
        for (i, t) in transitions.iter().enumerate() {
            index.entry((t.from, t.sym)).or_default().push(i);
        }
        let t = TwoWst { states, initial, input, output, transitions, muller, lookahead, lookbehind, index };
        t.validate()?;
        Ok(t)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn muller(&self) -> &[StateSet] {
        &self.muller
    }

    pub fn lookahead(&self) -> Option<&Dma> {
        self.lookahead.as_ref()
    }

    pub fn lookbehind(&self) -> Option<&Dfa> {
        self.lookbehind.as_ref()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn family(&self) -> Family {
        Family::Sets(self.muller.clone())
    }

    fn validate(&self) -> Result<()> {
        let n = self.states.len();
        let bad = |m: String| Err(Error::Invalid(m));
        if n == 0 || self.initial >= n {
            return bad("bad state set or initial state".into());
        }
        for (i, f) in self.muller.iter().enumerate() {
            if f.is_empty() || f.iter().any(|q| q >= n) || self.muller[..i].contains(f) {
                return bad("Muller sets must be distinct non-empty sets of states".into());
            }
        }
        if let Some(a) = &self.lookahead {
            if a.alphabet != self.input {
                return bad("look-ahead alphabet differs from the input alphabet".into());
            }
        }
        if let Some(b) = &self.lookbehind {
            if b.alphabet != self.input {
                return bad("look-behind alphabet differs from the input alphabet".into());
            }
        }
        for t in &self.transitions {
            if t.from >= n || t.to >= n {
                return bad("transition refers to an unknown state".into());
            }
            if let Sym::Letter(c) = t.sym {
                if !self.input.contains(c) {
                    return bad(format!("letter `{c}` not in the input alphabet"));
                }
            }
            if t.sym == Sym::End && t.mv == Move::Left {
                return bad("left move from the end-marker".into());
            }
            if let Some(c) = t.output.iter().find(|c| !self.output.contains(**c)) {
                return bad(format!("output letter `{c}` not in the output alphabet"));
            }
            match (t.ahead, &self.lookahead) {
                (Some(p), Some(a)) if p < a.states.len() => {}
                (Some(_), _) => return bad("look-ahead guard without a matching automaton state".into()),
                _ => {}
            }
            match (t.behind, &self.lookbehind) {
                (Some(r), Some(b)) if r < b.states.len() => {}
                (Some(_), _) => return bad("look-behind guard without a matching automaton state".into()),
                _ => {}
            }
        }
        let ctxs = self.contexts()?;
        for ((q, sym), idx) in &self.index {
            if idx.len() < 2 {
                continue;
            }
            for ctx in &ctxs {
                let on = idx.iter().filter(|&&i| self.enabled(&self.transitions[i], ctx)).count();
                if on > 1 {
                    return Err(Error::Nondeterministic(format!("state `{}` on {:?} has {on} enabled transitions", self.states[*q], sym)));
                }
            }
        }
        Ok(())
    }

    /// All realisable contexts: reachable look-behind vectors times realisable
    /// look-ahead profiles.
    pub fn contexts(&self) -> Result<Vec<Ctx>> {
        contexts_of(self.lookahead.as_ref(), self.lookbehind.as_ref())
    }

    pub fn enabled(&self, t: &Transition, ctx: &Ctx) -> bool {
        let behind = match (t.behind, &self.lookbehind) {
            (Some(r), Some(b)) => b.accepting.contains(ctx.eta[r]),
            _ => true,
        };
        let ahead = match t.ahead {
            Some(p) => ctx.prof.contains(p),
            None => true,
        };
        behind && ahead
    }

    /// The unique enabled transition, if any.
    pub fn lookup(&self, q: usize, sym: Sym, ctx: &Ctx) -> Result<Option<&Transition>> {
        let Some(idx) = self.index.get(&(q, sym)) else { return Ok(None) };
        let mut found = None;
        for &i in idx {
            let t = &self.transitions[i];
            if self.enabled(t, ctx) {
                if found.is_some() {
                    return Err(Error::Nondeterministic(format!("state `{}` on {:?}", self.states[q], sym)));
                }
                found = Some(t);
            }
        }
        Ok(found)
    }

    fn identity_eta(&self) -> Vec<usize> {
        self.lookbehind.as_ref().map(Dfa::identity_vector).unwrap_or_default()
    }

    fn eta_step(&self, eta: &[usize], a: char) -> Vec<usize> {
        match &self.lookbehind {
            Some(b) => b.step_vector(eta, a),
            None => Vec::new(),
        }
    }

    /// The look-ahead profile of an ω-word.
    pub fn profile(&self, w: &UpWord) -> StateSet {
        self.lookahead.as_ref().map(|a| a.profile(w)).unwrap_or_default()
    }
}

/// All pairs of a reachable look-behind vector and a realisable look-ahead
/// profile.
pub fn contexts_of(a: Option<&Dma>, b: Option<&Dfa>) -> Result<Vec<Ctx>> {
    let etas: Vec<Vec<usize>> = match b {
        Some(b) => b.reachable_vectors().into_iter().collect(),
        None => vec![Vec::new()],
    };
    let profs: Vec<StateSet> = match a {
        Some(a) => a.realizable_profiles(DEFAULT_CAP)?.into_iter().collect(),
        None => vec![StateSet::new()],
    };
    let mut out = Vec::new();
    for e in &etas {
        for p in &profs {
            out.push(Ctx { eta: e.clone(), prof: p.clone() });
        }
    }
    Ok(out)
}

/// Per-position contexts of one input word, periodic beyond `offset`.
#[derive(Clone, Debug)]
pub struct Oracle {
    offset: usize,
    period: usize,
    letters: Vec<char>,
    ctxs: Vec<Ctx>,
}

impl Oracle {
    pub fn new(t: &TwoWst, w: &UpWord) -> Oracle {
        Oracle::with_automata(t.lookahead.as_ref(), t.lookbehind.as_ref(), w)
    }

    pub fn with_automata(a: Option<&Dma>, b: Option<&Dfa>, w: &UpWord) -> Oracle {
        let (u, v) = (w.prefix(), w.period());
        let (offset, period) = match b {
            None => (u.len(), v.len()),
            Some(b) => {
                let mut eta = b.run_vector(u);
                let mut bounds = vec![eta.clone()];
                loop {
                    eta = v.iter().fold(eta, |e, &c| b.step_vector(&e, c));
                    if let Some(i) = bounds.iter().position(|x| *x == eta) {
                        break (u.len() + i * v.len(), (bounds.len() - i) * v.len());
                    }
                    bounds.push(eta.clone());
                }
            }
        };
        let n = offset + period;
        let letters: Vec<char> = (1..=n).map(|i| w.letter_at(i)).collect();
        let mut ctxs = Vec::with_capacity(n + 1);
        let mut eta = b.map(Dfa::identity_vector).unwrap_or_default();
        let prof_at = |i: usize| a.map(|a| a.profile(&w.suffix(i))).unwrap_or_default();
        // profiles repeat with the period of the word
        let mut profs: Vec<StateSet> = Vec::new();
        for i in 1..=n {
            let p = if i > u.len() + v.len() { profs[i - 1 - v.len()].clone() } else { prof_at(i) };
            profs.push(p);
        }
        ctxs.push(Ctx { eta: eta.clone(), prof: profs[0].clone() });
        for i in 1..=n {
            ctxs.push(Ctx { eta: eta.clone(), prof: profs[i - 1].clone() });
            if let Some(b) = b {
                eta = b.step_vector(&eta, letters[i - 1]);
            }
        }
        Oracle { offset, period, letters, ctxs }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Representative position with the same letter and context; `0` is `⊢`.
    pub fn class(&self, i: usize) -> usize {
        if i <= self.offset {
            i
        } else {
            self.offset + 1 + (i - self.offset - 1) % self.period
        }
    }

    pub fn sym(&self, i: usize) -> Sym {
        match self.class(i) {
            0 => Sym::End,
            c => Sym::Letter(self.letters[c - 1]),
        }
    }

    /// The letter at position `i >= 1`.
    pub fn letter(&self, i: usize) -> char {
        self.letters[self.class(i) - 1]
    }

    pub fn ctx(&self, i: usize) -> &Ctx {
        &self.ctxs[self.class(i)]
    }
}

#[derive(Debug)]
enum TraceEnd {
    Stuck,
    /// Configurations from `start` on repeat shifted right by `shift`.
    Lasso {
        start: usize,
    },
}

#[derive(Debug)]
struct Trace {
    configs: Vec<(usize, usize)>,
    /// Output length before each step.
    marks: Vec<usize>,
    output: Vec<char>,
    end: TraceEnd,
    shift: usize,
}

const MAX_STEPS: usize = 50_000_000;

impl TwoWst {
    fn trace(&self, o: &Oracle, q: usize, pos: usize) -> Result<Trace> {
        let mut tr = Trace { configs: Vec::new(), marks: Vec::new(), output: Vec::new(), end: TraceEnd::Stuck, shift: 0 };
        let mut exact = BTreeSet::new();
        let mut keyed: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        let mut last_low: Option<usize> = None;
        let (mut q, mut pos) = (q, pos);
        loop {
            let step = tr.configs.len();
            if step > MAX_STEPS {
                return Err(Error::Internal("two-way run exceeded the step limit".into()));
            }
            if pos <= o.offset {
                if !exact.insert((q, pos)) {
                    return Ok(tr);
                }
                last_low = Some(step);
            } else {
                let key = (q, o.class(pos));
                if let Some(&(s0, p0)) = keyed.get(&key) {
                    if pos == p0 {
                        return Ok(tr);
                    }
                    if pos > p0 && last_low.is_none_or(|l| l < s0) {
                        tr.end = TraceEnd::Lasso { start: s0 };
                        tr.shift = pos - p0;
                        return Ok(tr);
                    }
                }
                keyed.insert(key, (step, pos));
            }
            tr.configs.push((q, pos));
            tr.marks.push(tr.output.len());
            let Some(t) = self.lookup(q, o.sym(pos), o.ctx(pos))? else { return Ok(tr) };
            tr.output.extend_from_slice(&t.output);
            q = t.to;
            pos = pos.checked_add_signed(t.mv.delta()).expect("no left move from the end-marker");
        }
    }

    pub fn run(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.input.check_word(w.prefix())?;
        self.input.check_word(w.period())?;
        let o = Oracle::new(self, w);
        let tr = self.trace(&o, self.initial, 1)?;
        let TraceEnd::Lasso { start } = tr.end else { return Ok(RunResult::Stuck) };
        let omega: StateSet = tr.configs[start..].iter().map(|c| c.0).collect();
        if !self.muller.contains(&omega) {
            return Ok(RunResult::Rejected);
        }
        let cut = tr.marks[start];
        Ok(RunResult::Output(extend_periodic(tr.output[..cut].to_vec(), &tr.output[cut..], k)))
    }

    /// Whether the run from `(q, x)` visits `(q2, y)`.
    pub fn reaches(&self, w: &UpWord, q: usize, x: usize, q2: usize, y: usize) -> Result<bool> {
        let o = Oracle::new(self, w);
        let tr = self.trace(&o, q, x)?;
        if tr.configs.contains(&(q2, y)) {
            return Ok(true);
        }
        if let TraceEnd::Lasso { start } = tr.end {
            return Ok(tr.configs[start..].iter().any(|&(s, p)| s == q2 && y > p && (y - p).is_multiple_of(tr.shift)));
        }
        Ok(false)
    }
}

pub fn run_2wst(t: &TwoWst, w: &UpWord, k: usize) -> Result<RunResult> {
    t.run(w, k)
}

pub fn reaches(t: &TwoWst, w: &UpWord, q: usize, x: usize, q2: usize, y: usize) -> Result<bool> {
    t.reaches(w, q, x, q2, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrant {
    LL,
    LR,
    RL,
    RR,
}

/// The four behaviour matrices of one word in one context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quads {
    pub ll: TransMatrix,
    pub lr: TransMatrix,
    pub rl: TransMatrix,
    pub rr: TransMatrix,
}

impl Quads {
    pub fn get(&self, q: Quadrant) -> &TransMatrix {
        match q {
            Quadrant::LL => &self.ll,
            Quadrant::LR => &self.lr,
            Quadrant::RL => &self.rl,
            Quadrant::RR => &self.rr,
        }
    }
}

/// Monoid element of a finite word: its action on look-ahead and look-behind
/// states and its behaviour matrices in every realisable context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Behavior {
    pub afun: Vec<usize>,
    pub bfun: Vec<usize>,
    pub quads: BTreeMap<Ctx, Quads>,
}

impl Behavior {
    pub fn quads(&self, ctx: &Ctx) -> Result<&Quads> {
        self.quads.get(ctx).ok_or_else(|| Error::Internal("missing behaviour context".into()))
    }
}

enum Exit {
    Left(usize, StateSet),
    Right(usize, StateSet),
    None,
}

impl TwoWst {
    /// Runs inside a window `lo..=hi`, returning how the head leaves it.
    fn walk(&self, q: usize, pos: usize, lo: usize, hi: usize, sym: impl Fn(usize) -> Sym, ctx: impl Fn(usize) -> Ctx) -> Result<Exit> {
        let (mut q, mut pos) = (q, pos);
        let mut seen = BTreeSet::new();
        let mut visited = StateSet::new();
        loop {
            visited.insert(q);
            if pos < lo {
                return Ok(Exit::Left(q, visited));
            }
            if pos > hi {
                return Ok(Exit::Right(q, visited));
            }
            if !seen.insert((q, pos)) {
                return Ok(Exit::None);
            }
            let Some(t) = self.lookup(q, sym(pos), &ctx(pos))? else { return Ok(Exit::None) };
            q = t.to;
            let next = pos as isize + t.mv.delta();
            if next < 0 {
                return Err(Error::Internal("head moved left of the end-marker".into()));
            }
            pos = next as usize;
        }
    }

    fn quads_from_walks(
        &self,
        n: usize,
        from_left: impl Fn(usize) -> Result<Exit>,
        from_right: impl Fn(usize) -> Result<Exit>,
    ) -> Result<Quads> {
        let family = self.family();
        let nq = self.states.len();
        let mut q = Quads { ll: TransMatrix::bot(nq), lr: TransMatrix::bot(nq), rl: TransMatrix::bot(nq), rr: TransMatrix::bot(nq) };
        if n == 0 {
            q.lr = TransMatrix::identity(nq, &family);
            q.rl = TransMatrix::identity(nq, &family);
            return Ok(q);
        }
        for p in 0..nq {
            match from_left(p)? {
                Exit::Left(s, v) => q.ll.set_row(p, Some((s, family.tuple_of(&v)))),
                Exit::Right(s, v) => q.lr.set_row(p, Some((s, family.tuple_of(&v)))),
                Exit::None => {}
            }
            match from_right(p)? {
                Exit::Left(s, v) => q.rl.set_row(p, Some((s, family.tuple_of(&v)))),
                Exit::Right(s, v) => q.rr.set_row(p, Some((s, family.tuple_of(&v)))),
                Exit::None => {}
            }
        }
        Ok(q)
    }

    /// Behaviour matrices of `w` placed in context `ctx`: `ctx.eta` is the
    /// look-behind vector before `w`, `ctx.prof` the look-ahead profile after it.
    pub fn quads_in(&self, w: &[char], ctx: &Ctx) -> Result<Quads> {
        self.input.check_word(w)?;
        let n = w.len();
        let mut etas = vec![ctx.eta.clone()];
        for &a in w {
            let next = self.eta_step(etas.last().unwrap(), a);
            etas.push(next);
        }
        let profs: Vec<StateSet> = (1..=n)
            .map(|x| match &self.lookahead {
                Some(a) => (0..a.states.len()).filter(|&m| ctx.prof.contains(a.run_state(&w[x - 1..], m))).collect(),
                None => StateSet::new(),
            })
            .collect();
        let sym = |x: usize| Sym::Letter(w[x - 1]);
        let cx = |x: usize| Ctx { eta: etas[x - 1].clone(), prof: profs[x - 1].clone() };
        self.quads_from_walks(n, |p| self.walk(p, 1, 1, n, sym, cx), |p| self.walk(p, n, 1, n, sym, cx))
    }

    pub fn behavior(&self, w: &[char], quadrant: Quadrant, ctx: &Ctx) -> Result<TransMatrix> {
        Ok(self.quads_in(w, ctx)?.get(quadrant).clone())
    }

    /// The monoid element of a finite word.
    pub fn behavior_of(&self, w: &[char]) -> Result<Behavior> {
        let afun = match &self.lookahead {
            Some(a) => (0..a.states.len()).map(|m| a.run_state(w, m)).collect(),
            None => Vec::new(),
        };
        let bfun = match &self.lookbehind {
            Some(b) => b.run_vector(w),
            None => Vec::new(),
        };
        let mut quads = BTreeMap::new();
        for ctx in self.contexts()? {
            let q = self.quads_in(w, &ctx)?;
            quads.insert(ctx, q);
        }
        Ok(Behavior { afun, bfun, quads })
    }

    /// Element of the end-marker cell; only the right-to-right quadrant is defined.
    pub fn end_marker_behavior(&self) -> Result<Behavior> {
        let nq = self.states.len();
        let ida: Vec<usize> = self.lookahead.as_ref().map(|a| (0..a.states.len()).collect()).unwrap_or_default();
        let mut quads = BTreeMap::new();
        for ctx in self.contexts()? {
            let c = ctx.clone();
            let mut q = self.quads_from_walks(1, |_| Ok(Exit::None), |p| self.walk(p, 0, 0, 0, |_| Sym::End, |_| c.clone()))?;
            debug_assert!(q.rl.is_bot());
            q.ll = TransMatrix::bot(nq);
            quads.insert(ctx, q);
        }
        Ok(Behavior { afun: ida, bfun: self.identity_eta(), quads })
    }

    /// `A · X* · B`, summed over all powers of `X`.
    fn star_between(&self, a: &TransMatrix, x: &TransMatrix, b: &TransMatrix) -> Result<TransMatrix> {
        let family = self.family();
        let mut acc = a.mul(b, &family);
        let mut cur = a.clone();
        let mut seen = BTreeSet::new();
        seen.insert(cur.clone());
        for _ in 0..1_000_000 {
            cur = cur.mul(x, &family);
            if cur.is_bot() || !seen.insert(cur.clone()) {
                return Ok(acc);
            }
            acc = acc.add(&cur.mul(b, &family))?;
        }
        Err(Error::NoStabilization)
    }

    fn compose_quads(&self, q1: &Quads, q2: &Quads) -> Result<Quads> {
        let f = self.family();
        let id = TransMatrix::identity(self.states.len(), &f);
        let lr = self.star_between(&q1.lr, &q2.ll.mul(&q1.rr, &f), &q2.lr)?;
        let ll = q1.ll.add(&self.star_between(&q1.lr, &q2.ll.mul(&q1.rr, &f), &q2.ll.mul(&q1.rl, &f))?)?;
        let rl = self.star_between(&q2.rl, &q1.rr.mul(&q2.ll, &f), &q1.rl)?;
        let rr = q2.rr.add(&self.star_between(&q2.rl, &q1.rr.mul(&q2.ll, &f), &q1.rr.mul(&q2.lr, &f))?)?;
        let _ = id;
        Ok(Quads { ll, lr, rl, rr })
    }

    /// The element of `w1 · w2` from the elements of `w1` and `w2`.
    pub fn compose_behaviors(&self, b1: &Behavior, b2: &Behavior) -> Result<Behavior> {
        let mut quads = BTreeMap::new();
        for ctx in b2.quads.keys() {
            let prof1: StateSet = b2.afun.iter().enumerate().filter(|(_, &t)| ctx.prof.contains(t)).map(|(m, _)| m).collect();
            let c1 = Ctx { eta: ctx.eta.clone(), prof: if self.lookahead.is_some() { prof1 } else { StateSet::new() } };
            let c2 = Ctx { eta: ctx.eta.iter().map(|&r| b1.bfun[r]).collect(), prof: ctx.prof.clone() };
            let q = self.compose_quads(b1.quads(&c1)?, b2.quads(&c2)?)?;
            quads.insert(ctx.clone(), q);
        }
        let afun = b1.afun.iter().map(|&m| b2.afun[m]).collect();
        let bfun = b1.bfun.iter().map(|&r| b2.bfun[r]).collect();
        Ok(Behavior { afun, bfun, quads })
    }

    pub fn monoid(&self, cap: usize) -> Result<Monoid<Behavior>> {
        let id = self.behavior_of(&[])?;
        let gens = self.input.symbols().iter().map(|&a| Ok((a, self.behavior_of(&[a])?))).collect::<Result<Vec<_>>>()?;
        monoid::generate(id, &gens, |x, y| self.compose_behaviors(x, y), cap)
    }

    pub fn is_aperiodic(&self, cap: usize) -> Result<Verdict> {
        let m = self.monoid(cap)?;
        monoid::check_aperiodic(&m, |x, y| self.compose_behaviors(x, y))
    }

    /// Behaviour of `w` at the start of the input, followed by `right`.
    ///
    /// The head enters at the first letter (left entries) or the last letter
    /// of `w` (right entries) and may bounce off `⊢`; only `lr` and `rr` can
    /// be non-`⊥`.
    pub fn anchored_quads(&self, w: &[char], right: &UpWord) -> Result<Quads> {
        self.input.check_word(w)?;
        let n = w.len();
        let whole = right.prepend(w);
        let o = Oracle::new(self, &whole);
        let sym = |x: usize| o.sym(x);
        let cx = |x: usize| o.ctx(x).clone();
        let nq = self.states.len();
        if n == 0 {
            let mut q = self.quads_from_walks(1, |_| Ok(Exit::None), |p| self.walk(p, 0, 0, 0, sym, cx))?;
            q.lr = TransMatrix::identity(nq, &self.family());
            return Ok(q);
        }
        self.quads_from_walks(n, |p| self.walk(p, 1, 0, n, sym, cx), |p| self.walk(p, n, 0, n, sym, cx))
    }

    /// The anchored behaviour derived from the end-marker element and the
    /// element of `w` through [`TwoWst::compose_behaviors`].
    pub fn anchored_by_composition(&self, w: &[char], right: &UpWord) -> Result<Quads> {
        let f = self.family();
        let e = self.end_marker_behavior()?;
        let bw = self.behavior_of(w)?;
        let ctx = Ctx { eta: self.identity_eta(), prof: self.profile(right) };
        let prof1: StateSet = match &self.lookahead {
            Some(_) => bw.afun.iter().enumerate().filter(|(_, &t)| ctx.prof.contains(t)).map(|(m, _)| m).collect(),
            None => StateSet::new(),
        };
        let qe = e.quads(&Ctx { eta: ctx.eta.clone(), prof: prof1 })?;
        let qw = bw.quads(&ctx)?;
        let nq = self.states.len();
        let id = TransMatrix::identity(nq, &f);
        let lr = self.star_between(&id, &qw.ll.mul(&qe.rr, &f), &qw.lr)?;
        let rr = self.compose_quads(qe, qw)?.rr;
        Ok(Quads { ll: TransMatrix::bot(nq), lr, rl: TransMatrix::bot(nq), rr })
    }
}

pub fn behavior(t: &TwoWst, w: &[char], quadrant: Quadrant, ctx: &Ctx) -> Result<TransMatrix> {
    t.behavior(w, quadrant, ctx)
}

pub fn compose_behaviors(t: &TwoWst, b1: &Behavior, b2: &Behavior) -> Result<Behavior> {
    t.compose_behaviors(b1, b2)
}

pub fn is_aperiodic_2wst(t: &TwoWst, cap: usize) -> Result<Verdict> {
    t.is_aperiodic(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::render;
    use proptest::prelude::*;

    fn out(t: &TwoWst, u: &str, v: &str, k: usize) -> String {
        render(t.run(&UpWord::from_strs(u, v), k).unwrap().output().expect("accepted"))
    }

    fn pairs(t: &TwoWst, m: &TransMatrix) -> BTreeSet<(String, String)> {
        m.support().into_iter().map(|(p, q)| (t.states()[p].clone(), t.states()[q].clone())).collect()
    }

    fn set(v: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        v.iter().map(|(a, b)| (String::from(*a), String::from(*b))).collect()
    }

    #[test]
    fn f1_runs() {
        let t = fixtures::f1_2wst();
        assert_eq!(out(&t, "abbb#ba#", "ab", 14), "bbbaabbb#abba#");
        assert_eq!(out(&t, "ab#", "a", 8), "baab#aaa");
        assert_eq!(out(&t, "", "a", 5), "aaaaa");
        assert_eq!(t.run(&UpWord::from_strs("", "a#"), 5).unwrap(), RunResult::Rejected);
    }

    #[test]
    fn loops_are_stuck() {
        let t = fixtures::left_bouncer();
        assert_eq!(t.run(&UpWord::from_strs("", "a"), 3).unwrap(), RunResult::Stuck);
    }

    #[test]
    fn anchored_behaviour_of_ab_hash() {
        let t = fixtures::f1_2wst();
        let q = t.anchored_quads(&['a', 'b', '#'], &UpWord::from_strs("", "a")).unwrap();
        assert_eq!(pairs(&t, &q.lr), set(&[("t", "t"), ("p", "t"), ("q", "t")]));
        assert_eq!(pairs(&t, &q.rr), set(&[("q", "t"), ("t", "t"), ("p", "q")]));
        let c = t.anchored_by_composition(&['a', 'b', '#'], &UpWord::from_strs("", "a")).unwrap();
        assert_eq!(c, q);
    }

    #[test]
    fn floating_behaviour_of_ab_hash() {
        let t = fixtures::f1_2wst();
        let ctx = Ctx { eta: Vec::new(), prof: t.profile(&UpWord::from_strs("", "a")) };
        let q = t.quads_in(&['a', 'b', '#'], &ctx).unwrap();
        assert_eq!(pairs(&t, &q.lr), set(&[("q", "t")]));
        assert_eq!(pairs(&t, &q.ll), set(&[("t", "p"), ("p", "p")]));
        assert_eq!(pairs(&t, &q.rr), set(&[("q", "t"), ("p", "q")]));
        assert_eq!(pairs(&t, &q.rl), set(&[("t", "p")]));
    }

    #[test]
    fn repeated_block_has_the_same_anchored_lr() {
        let t = fixtures::f1_2wst();
        let right = UpWord::from_strs("", "a");
        let one = t.anchored_quads(&['a', 'b', '#'], &right).unwrap();
        let two = t.anchored_quads(&['a', 'b', '#', 'a', 'b', '#'], &right).unwrap();
        assert_eq!(one.lr.support(), two.lr.support());
    }

    #[test]
    fn aperiodicity() {
        assert!(fixtures::f1_2wst().is_aperiodic(DEFAULT_CAP).unwrap().aperiodic);
        let v = fixtures::parity_copier().is_aperiodic(DEFAULT_CAP).unwrap();
        assert!(!v.aperiodic);
        assert_eq!(v.witness.unwrap(), ['a']);
    }

    #[test]
    fn reachability() {
        let t = fixtures::f1_2wst();
        let w = UpWord::from_strs("abbb#", "a");
        let [tt, p] = ["t", "p"].map(|s| t.state_index(s).unwrap());
        assert!(t.reaches(&w, tt, 1, tt, 1).unwrap());
        assert!(t.reaches(&w, tt, 1, p, 4).unwrap());
        assert!(!t.reaches(&w, tt, 1, p, 7).unwrap());
        assert!(t.reaches(&w, tt, 1, tt, 40).unwrap());
    }

    #[test]
    fn lookbehind_guards() {
        let t = fixtures::after_a_marker();
        // letters after an `a` are upper-cased
        assert_eq!(out(&t, "ab", "ba", 6), "aBbaBa");
    }

    fn machines() -> Vec<TwoWst> {
        vec![fixtures::f1_2wst(), fixtures::parity_copier(), fixtures::after_a_marker(), fixtures::left_bouncer()]
    }

    proptest! {
        #[test]
        fn composition_matches_simulation(m in 0usize..4, u in "[ab#]{0,4}", v in "[ab#]{0,4}") {
            let t = &machines()[m];
            let keep = |s: &str| -> Vec<char> { s.chars().filter(|c| t.input().contains(*c)).collect() };
            let (u, v) = (keep(&u), keep(&v));
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let direct = t.behavior_of(&uv).unwrap();
            let composed = t.compose_behaviors(&t.behavior_of(&u).unwrap(), &t.behavior_of(&v).unwrap()).unwrap();
            prop_assert_eq!(direct, composed);
        }

        #[test]
        fn anchored_composition_matches(u in "[ab#]{0,5}", v in "[ab#]{1,3}") {
            let t = fixtures::f1_2wst();
            let w: Vec<char> = u.chars().collect();
            let right = UpWord::from_strs("", &v);
            prop_assert_eq!(t.anchored_quads(&w, &right).unwrap(), t.anchored_by_composition(&w, &right).unwrap());
        }

        #[test]
        fn run_prefixes_are_stable(u in "[ab#]{0,6}", v in "[ab]{1,3}", k in 0usize..25) {
            let t = fixtures::f1_2wst();
            let w = UpWord::from_strs(&u, &v);
            let a = t.run(&w, k).unwrap();
            let b = t.run(&w, k + 1).unwrap();
            prop_assert_eq!(a.output().unwrap(), &b.output().unwrap()[..k]);
        }
    }
}

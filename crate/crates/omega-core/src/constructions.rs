//! Two-way transducers to streaming transducers with look-around, removal of
//! look-around, and output comparison across models.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fot::Fot;
use crate::monoid::DEFAULT_CAP;
use crate::muller::{Dfa, Dma};
use crate::set::StateSet;
use crate::sst::{run_lasso, Item, OutputSpec, Sst, Substitution};
use crate::twowst::{contexts_of, Ctx, Move, Oracle, Sym, TwoWst};
use crate::words::{first_difference, Alphabet, Lasso, OutSym, RunResult, UpWord};

/// One guarded alternative of an [`SstSf`] transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guarded {
    /// Look-behind guard; `None` is `⊤`.
    pub behind: Option<usize>,
    /// Look-ahead guard; `None` is `⊤`.
    pub ahead: Option<usize>,
    pub to: usize,
    pub update: Substitution,
}

/// A streaming transducer whose transitions carry look-around guards.
///
/// The guards of a transition are read at the position of the letter being
/// consumed: look-behind on the letters before it, look-ahead on the suffix
/// starting with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SstSf {
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub vars: Vec<String>,
    /// `delta[q][i]`: the alternatives of `q` on the `i`-th letter.
    pub delta: Vec<Vec<Vec<Guarded>>>,
    pub out: OutputSpec,
    pub lookahead: Option<Dma>,
    pub lookbehind: Option<Dfa>,
}

impl SstSf {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        input: Alphabet,
        output: Alphabet,
        states: Vec<String>,
        initial: usize,
        vars: Vec<String>,
        delta: Vec<Vec<Vec<Guarded>>>,
        out: OutputSpec,
        lookahead: Option<Dma>,
        lookbehind: Option<Dfa>,
    ) -> Result<SstSf> {
        let s = SstSf { input, output, states, initial, vars, delta, out, lookahead, lookbehind };
        s.validate()?;
        Ok(s)
    }

    /// The same machine without look-around.
    pub fn from_sst(t: &Sst) -> SstSf {
        let delta = t
            .delta
            .iter()
            .zip(&t.rho)
            .map(|(row, rrow)| {
                row.iter().zip(rrow).map(|(&to, s)| vec![Guarded { behind: None, ahead: None, to, update: s.clone() }]).collect()
            })
            .collect();
        SstSf {
            input: t.input.clone(),
            output: t.output.clone(),
            states: t.states.clone(),
            initial: t.initial,
            vars: t.vars.clone(),
            delta,
            out: t.out.clone(),
            lookahead: None,
            lookbehind: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let (nq, na, nv) = (self.states.len(), self.input.len(), self.vars.len());
        let bad = |m: String| Err(Error::Invalid(m));
        if nq == 0 || self.initial >= nq {
            return bad("bad state set or initial state".into());
        }
        if self.delta.len() != nq || self.delta.iter().any(|r| r.len() != na) {
            return bad("transition table has the wrong shape".into());
        }
        if self.lookahead.as_ref().is_some_and(|a| a.alphabet != self.input)
            || self.lookbehind.as_ref().is_some_and(|b| b.alphabet != self.input)
        {
            return bad("look-around alphabet differs from the input alphabet".into());
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (a, alts) in row.iter().enumerate() {
                for g in alts {
                    let at = || format!("`{}` reading `{}`", self.states[q], self.input.symbols()[a]);
                    if g.to >= nq || g.update.nvars() != nv {
                        return bad(format!("malformed transition of {}", at()));
                    }
                    if !g.update.is_copyless() {
                        return bad(format!("copyless violation in the update of {}", at()));
                    }
                    for item in g.update.rhs().iter().flatten() {
                        if let Item::Sym(c) = item {
                            if !self.output.contains(*c) {
                                return bad(format!("output letter `{c}` not in the output alphabet"));
                            }
                        }
                    }
                    if g.ahead.is_some_and(|p| self.lookahead.as_ref().is_none_or(|a| p >= a.states.len())) {
                        return bad(format!("look-ahead guard of {} has no automaton state", at()));
                    }
                    if g.behind.is_some_and(|r| self.lookbehind.as_ref().is_none_or(|b| r >= b.states.len())) {
                        return bad(format!("look-behind guard of {} has no automaton state", at()));
                    }
                }
            }
        }
        match &self.out {
            OutputSpec::Uniform(xs) => {
                if xs.iter().any(|&x| x >= nv) {
                    return bad("unknown output variable".into());
                }
            }
            OutputSpec::Muller(f) => {
                for (p, xs) in f {
                    if p.is_empty() || p.iter().any(|q| q >= nq) || xs.iter().any(|&x| x >= nv) {
                        return bad("malformed output entry".into());
                    }
                }
            }
        }
        let ctxs = self.contexts()?;
        for (q, row) in self.delta.iter().enumerate() {
            for (a, alts) in row.iter().enumerate() {
                if alts.len() < 2 {
                    continue;
                }
                for ctx in &ctxs {
                    if alts.iter().filter(|g| self.enabled(g, ctx)).count() > 1 {
                        return Err(Error::GuardsNotPartition(format!(
                            "guards of `{}` reading `{}` overlap",
                            self.states[q],
                            self.input.symbols()[a]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|s| s == name)
    }

    pub fn contexts(&self) -> Result<Vec<Ctx>> {
        contexts_of(self.lookahead.as_ref(), self.lookbehind.as_ref())
    }

    pub fn enabled(&self, g: &Guarded, ctx: &Ctx) -> bool {
        let behind = match (g.behind, &self.lookbehind) {
            (Some(r), Some(b)) => b.accepting.contains(ctx.eta[r]),
            _ => true,
        };
        behind && g.ahead.is_none_or(|p| ctx.prof.contains(p))
    }

    pub fn lookup(&self, q: usize, a: char, ctx: &Ctx) -> Result<Option<&Guarded>> {
        let ai = self.input.index_of(a).ok_or_else(|| Error::Invalid(format!("letter `{a}`")))?;
        let mut found = None;
        for g in &self.delta[q][ai] {
            if self.enabled(g, ctx) {
                if found.is_some() {
                    return Err(Error::Nondeterministic(format!("`{}` reading `{a}`", self.states[q])));
                }
                found = Some(g);
            }
        }
        Ok(found)
    }

    /// The first `k` output letters on `w`, guards resolved against `w`.
    pub fn run(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.input.check_word(w.prefix())?;
        self.input.check_word(w.period())?;
        let o = Oracle::with_automata(self.lookahead.as_ref(), self.lookbehind.as_ref(), w);
        let lasso = Lasso { prefix: (1..=o.offset()).collect(), period: (o.offset() + 1..=o.offset() + o.period()).collect() };
        let mut err = None;
        let res = run_lasso(
            self.initial,
            self.vars.len(),
            &lasso,
            |q, &pos| match self.lookup(q, o.letter(pos), o.ctx(pos)) {
                Ok(g) => g.map(|g| (g.to, &g.update)),
                Err(e) => {
                    err = Some(e);
                    None
                }
            },
            |omega| self.out.select(omega).map(|v| v.to_vec()),
            k,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(res),
        }
    }
}

/// Strongly connected vertex sets of a graph given by successor lists.
fn strongly_connected_subsets(succ: &[Vec<usize>], limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = succ.len();
    let reach = |from: usize, allowed: &dyn Fn(usize) -> bool, fwd: bool| -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut todo = vec![from];
        while let Some(x) = todo.pop() {
            let next: Vec<usize> = if fwd { succ[x].clone() } else { (0..n).filter(|&y| succ[y].contains(&x)).collect() };
            for y in next {
                if allowed(y) && seen.insert(y) {
                    todo.push(y);
                }
            }
        }
        seen
    };
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut done = BTreeSet::new();
    for x in 0..n {
        if done.contains(&x) {
            continue;
        }
        let f = reach(x, &|_| true, true);
        let b = reach(x, &|_| true, false);
        let mut c: Vec<usize> = f.intersection(&b).copied().collect();
        if c.is_empty() {
            c.push(x);
        }
        done.extend(c.iter().copied());
        comps.push(c);
    }
    let mut out = Vec::new();
    for c in comps {
        if c.len() > limit {
            return Err(Error::StateBlowup(limit));
        }
        for mask in 1u32..(1 << c.len()) {
            let members: Vec<usize> = (0..c.len()).filter(|i| mask >> i & 1 == 1).map(|i| c[i]).collect();
            let inside = |y: usize| members.contains(&y);
            let first = members[0];
            let f = reach(first, &inside, true);
            let b = reach(first, &inside, false);
            if members.iter().all(|m| f.contains(m) && b.contains(m)) {
                out.push(members);
            }
        }
    }
    Ok(out)
}

/// A look-ahead automaton whose single states decide a whole profile.
///
/// States are pairs `(τ, S)` of a state vector `τ = m ↦ δ(m, w)` and a
/// realisable profile `S`; `(τ, S)` accepts `w′` iff the states `m` with
/// `δ(τ(m), w′)` accepted are exactly `S`. The returned map gives the guard
/// state `(id, S)` of each profile.
pub fn profile_automaton(a: &Dma) -> Result<(Dma, BTreeMap<StateSet, usize>)> {
    let n = a.states.len();
    let profiles: Vec<StateSet> = a.realizable_profiles(DEFAULT_CAP)?.into_iter().collect();
    let mut taus: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    index.insert(taus[0].clone(), 0);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < taus.len() {
        let mut row = Vec::new();
        for &c in a.alphabet.symbols() {
            let next: Vec<usize> = taus[i].iter().map(|&q| a.step(q, c)).collect();
            let j = *index.entry(next.clone()).or_insert_with(|| {
                taus.push(next);
                taus.len() - 1
            });
            row.push(j);
        }
        edges.push(row);
        i += 1;
    }
    let nt = taus.len();
    let succ: Vec<Vec<usize>> = edges.iter().map(|r| r.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()).collect();
    let loops = strongly_connected_subsets(&succ, 16)?;
    let mut states = Vec::new();
    let mut delta = Vec::new();
    let mut muller = Vec::new();
    let mut guards = BTreeMap::new();
    for (si, s) in profiles.iter().enumerate() {
        for (ti, row) in edges.iter().enumerate() {
            states.push(format!("t{ti}s{si}"));
            delta.push(row.iter().map(|&tj| si * nt + tj).collect());
        }
        guards.insert(s.clone(), si * nt);
        for m in &loops {
            let ok = (0..n).all(|q| {
                let inf: StateSet = m.iter().map(|&t| taus[t][q]).collect();
                a.muller.contains(&inf) == s.contains(q)
            });
            if ok {
                muller.push(m.iter().map(|&t| si * nt + t).collect());
            }
        }
    }
    Ok((Dma::new(states, 0, a.alphabet.clone(), delta, muller)?, guards))
}

/// A look-behind automaton whose single states decide the whole state vector.
///
/// States are pairs `(v, E)` of reachable state vectors; `(id, E)` accepts
/// exactly the words leading the identity vector to `E`.
pub fn vector_automaton(b: &Dfa) -> Result<(Dfa, BTreeMap<Vec<usize>, usize>)> {
    let vs: Vec<Vec<usize>> = b.reachable_vectors().into_iter().collect();
    let nv = vs.len();
    let pos = |v: &Vec<usize>| vs.iter().position(|x| x == v).expect("closed under steps");
    let id = pos(&b.identity_vector());
    let mut states = Vec::new();
    let mut delta = Vec::new();
    let mut accepting = StateSet::new();
    let mut guards = BTreeMap::new();
    for (ei, e) in vs.iter().enumerate() {
        for v in &vs {
            states.push(format!("v{}e{ei}", pos(v)));
            delta.push(b.alphabet.symbols().iter().map(|&c| ei * nv + pos(&b.step_vector(v, c))).collect());
        }
        accepting.insert(ei * nv + ei);
        guards.insert(e.clone(), ei * nv + id);
    }
    Ok((Dfa::new(states, id, b.alphabet.clone(), delta, accepting)?, guards))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Start,
    Main(usize, Vec<Option<usize>>),
}

/// Exit state and output of a visit, `None` if the head never leaves.
type Exit = Option<(usize, Vec<Item>)>;

#[derive(Clone)]
enum Memo {
    Todo,
    Busy,
    Done(Exit),
}

/// Output and exit state of the visit that starts on the current cell in
/// state `s` and ends when the head first moves right of it. Left moves use
/// the previous cell's summary: `back[t]` is the state in which the head
/// returns from the previous cell when it enters it in `t`, `left(t)` the
/// output produced meanwhile.
#[allow(clippy::too_many_arguments)]
fn excursion(
    t: &TwoWst,
    sym: Sym,
    ctx: &Ctx,
    back: &[Option<usize>],
    left: &dyn Fn(usize) -> Vec<Item>,
    s: usize,
    memo: &mut Vec<Memo>,
) -> Result<Exit> {
    match &memo[s] {
        Memo::Done(r) => return Ok(r.clone()),
        Memo::Busy => return Ok(None),
        Memo::Todo => {}
    }
    memo[s] = Memo::Busy;
    let r = match t.lookup(s, sym, ctx)? {
        None => None,
        Some(tr) => {
            let mut items: Vec<Item> = tr.output.iter().map(|&c| Item::Sym(c)).collect();
            let rest = match tr.mv {
                Move::Right => Some((tr.to, Vec::new())),
                Move::Stay => excursion(t, sym, ctx, back, left, tr.to, memo)?,
                Move::Left => match back[tr.to] {
                    None => None,
                    Some(u) => {
                        items.extend(left(tr.to));
                        excursion(t, sym, ctx, back, left, u, memo)?
                    }
                },
            };
            rest.map(|(e, tail)| {
                items.extend(tail);
                (e, items)
            })
        }
    };
    memo[s] = Memo::Done(r.clone());
    Ok(r)
}

fn cell(t: &TwoWst, sym: Sym, ctx: &Ctx, back: &[Option<usize>], left: &dyn Fn(usize) -> Vec<Item>) -> Result<Vec<Exit>> {
    let n = t.states().len();
    let mut memo = vec![Memo::Todo; n];
    (0..n).map(|s| excursion(t, sym, ctx, back, left, s, &mut memo)).collect()
}

/// One transition of the constructed machine, or `None` when the two-way run
/// gets stuck or loops on this cell.
fn step_key(t: &TwoWst, key: &Key, a: char, ctx: &Ctx) -> Result<Option<(Key, Substitution)>> {
    let n = t.states().len();
    let o = n;
    let no_back = vec![None; n];
    let res = match key {
        Key::Start => {
            let end = cell(t, Sym::End, ctx, &no_back, &|_| Vec::new())?;
            let back: Vec<Option<usize>> = end.iter().map(|r| r.as_ref().map(|x| x.0)).collect();
            let consts: Vec<Vec<Item>> = end.into_iter().map(|r| r.map(|x| x.1).unwrap_or_default()).collect();
            cell(t, Sym::Letter(a), ctx, &back, &|s| consts[s].clone())?
        }
        Key::Main(_, f) => cell(t, Sym::Letter(a), ctx, f, &|s| vec![Item::Var(s)])?,
    };
    let main = match key {
        Key::Start => t.initial(),
        Key::Main(m, _) => *m,
    };
    // keep one source per exit state, preferring the main one
    let mut keep = vec![false; n];
    let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
    if let Some((e, _)) = &res[main] {
        taken.insert(*e, main);
        keep[main] = true;
    }
    for s in 0..n {
        if let Some((e, _)) = &res[s] {
            if !taken.contains_key(e) {
                taken.insert(*e, s);
                keep[s] = true;
            }
        }
    }
    let Some((main2, main_items)) = res[main].clone() else { return Ok(None) };
    let f2: Vec<Option<usize>> = (0..n).map(|s| if keep[s] { res[s].as_ref().map(|x| x.0) } else { None }).collect();
    let mut rhs = vec![Vec::new(); n + 1];
    for s in 0..n {
        if keep[s] && s != main {
            rhs[s] = res[s].as_ref().map(|x| x.1.clone()).unwrap_or_default();
        }
    }
    let mut out = vec![Item::Var(o)];
    out.extend(main_items);
    rhs[o] = out;
    Ok(Some((Key::Main(main2, f2), Substitution::from_rhs(rhs))))
}

/// Compiles a deterministic two-way transducer into a streaming transducer
/// with look-around.
///
/// A state `(q, f)` after `i` letters records the state `q` in which the
/// two-way head first enters cell `i + 1` and, for every `s`, the state
/// `f(s)` in which it re-enters cell `i + 1` after moving left into cell `i`
/// in `s`; variable `X_s` holds the output of that visit and `O` the output
/// so far. Look-around guards of every transition fix the full context.
pub fn twowst_to_sst_sf(t: &TwoWst) -> Result<SstSf> {
    let n = t.states().len();
    let la = t.lookahead().map(profile_automaton).transpose()?;
    let lb = t.lookbehind().map(vector_automaton).transpose()?;
    let ctxs = t.contexts()?;
    let mut keys = vec![Key::Start];
    let mut index: BTreeMap<Key, usize> = BTreeMap::new();
    index.insert(Key::Start, 0);
    let mut delta: Vec<Vec<Vec<Guarded>>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        if keys.len() > DEFAULT_CAP {
            return Err(Error::StateBlowup(DEFAULT_CAP));
        }
        let key = keys[i].clone();
        let mut row = Vec::new();
        for &a in t.input().symbols() {
            let mut results = Vec::new();
            for ctx in &ctxs {
                results.push(step_key(t, &key, a, ctx)?);
            }
            let mut intern = |k: Key| {
                *index.entry(k.clone()).or_insert_with(|| {
                    keys.push(k);
                    keys.len() - 1
                })
            };
            let mut alts = Vec::new();
            if results.windows(2).all(|w| w[0] == w[1]) {
                if let Some((k2, s)) = results[0].clone() {
                    alts.push(Guarded { behind: None, ahead: None, to: intern(k2), update: s });
                }
            } else {
                for (ctx, r) in ctxs.iter().zip(results) {
                    if let Some((k2, s)) = r {
                        alts.push(Guarded {
                            behind: lb.as_ref().map(|(_, g)| g[&ctx.eta]),
                            ahead: la.as_ref().map(|(_, g)| g[&ctx.prof]),
                            to: intern(k2),
                            update: s,
                        });
                    }
                }
            }
            row.push(alts);
        }
        delta.push(row);
        i += 1;
    }
    let names = t.states();
    let states = keys
        .iter()
        .map(|k| match k {
            Key::Start => "start".to_string(),
            Key::Main(m, f) => {
                let parts: Vec<&str> = f.iter().map(|x| x.map_or("-", |q| names[q].as_str())).collect();
                format!("{}[{}]", names[*m], parts.join("."))
            }
        })
        .collect();
    let mut vars: Vec<String> = names.iter().map(|q| format!("X_{q}")).collect();
    vars.push("O".to_string());
    SstSf::new(
        t.input().clone(),
        t.output().clone(),
        states,
        0,
        vars,
        delta,
        OutputSpec::Uniform(vec![n]),
        la.map(|x| x.0),
        lb.map(|x| x.0),
    )
}

/// A configuration of an [`SstSf`] run: the state, the look-behind states
/// reached from every start state, and the look-ahead states that must still
/// accept the rest of the input. The derived order is the tie-break order of
/// [`eliminate_lookaround`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    pub state: usize,
    pub eta: Vec<usize>,
    pub obligations: StateSet,
}

struct ConfigSpace<'a> {
    s: &'a SstSf,
    profiles: Vec<StateSet>,
}

impl<'a> ConfigSpace<'a> {
    fn new(s: &'a SstSf) -> Result<Self> {
        let profiles = match &s.lookahead {
            Some(a) => a.realizable_profiles(DEFAULT_CAP)?.into_iter().collect(),
            None => Vec::new(),
        };
        Ok(ConfigSpace { s, profiles })
    }

    fn initial(&self) -> Config {
        Config {
            state: self.s.initial,
            eta: self.s.lookbehind.as_ref().map(Dfa::identity_vector).unwrap_or_default(),
            obligations: StateSet::new(),
        }
    }

    fn satisfiable(&self, p: &StateSet) -> bool {
        p.is_empty() || self.profiles.iter().any(|r| p.is_subset(r))
    }

    /// Successors on `a` with the index of the alternative taken.
    fn steps(&self, c: &Config, a: char) -> Vec<(usize, Config)> {
        let ai = self.s.input.index_of(a).expect("letter in alphabet");
        let mut out = Vec::new();
        for (gi, g) in self.s.delta[c.state][ai].iter().enumerate() {
            if let (Some(r), Some(b)) = (g.behind, &self.s.lookbehind) {
                if !b.accepting.contains(c.eta[r]) {
                    continue;
                }
            }
            let eta = match &self.s.lookbehind {
                Some(b) => b.step_vector(&c.eta, a),
                None => Vec::new(),
            };
            let mut p = c.obligations.clone();
            if let Some(x) = g.ahead {
                p.insert(x);
            }
            let obligations: StateSet = match &self.s.lookahead {
                Some(la) => p.iter().map(|x| la.step(x, a)).collect(),
                None => StateSet::new(),
            };
            if self.satisfiable(&obligations) {
                out.push((gi, Config { state: g.to, eta, obligations }));
            }
        }
        out
    }
}

/// Configurations reachable from the initial one that have jointly
/// satisfiable obligations and an infinite continuation through such
/// configurations, in increasing order.
pub fn useful_configs(s: &SstSf, cap: usize) -> Result<Vec<Config>> {
    let space = ConfigSpace::new(s)?;
    let mut seen: BTreeMap<Config, BTreeSet<Config>> = BTreeMap::new();
    let mut todo = vec![space.initial()];
    while let Some(c) = todo.pop() {
        if seen.contains_key(&c) {
            continue;
        }
        if seen.len() >= cap {
            return Err(Error::StateBlowup(cap));
        }
        let mut next = BTreeSet::new();
        for &a in s.input.symbols() {
            for (_, c2) in space.steps(&c, a) {
                next.insert(c2.clone());
                todo.push(c2);
            }
        }
        seen.insert(c, next);
    }
    let mut alive: BTreeSet<Config> = seen.keys().cloned().collect();
    loop {
        let dead: Vec<Config> = alive.iter().filter(|c| !seen[*c].iter().any(|d| alive.contains(d))).cloned().collect();
        if dead.is_empty() {
            break;
        }
        for d in dead {
            alive.remove(&d);
        }
    }
    Ok(alive.into_iter().collect())
}

/// The result of removing look-around: a plain SST over sets of useful
/// configurations, plus what is needed to pick the accepting thread.
#[derive(Clone, Debug)]
pub struct Eliminated {
    /// State `Sj` stands for `subsets[j]`; variable `X@i` is the copy of `X`
    /// for configuration `i`.
    pub sst: Sst,
    pub configs: Vec<Config>,
    pub subsets: Vec<Vec<usize>>,
    /// `links[S][a]`: `(c′, c)` pairs, `c` the least predecessor of `c′`.
    pub links: Vec<Vec<Vec<(usize, usize)>>>,
    pub source_out: OutputSpec,
    pub source_vars: usize,
    pub lookahead: Option<Dma>,
}

/// Removes look-around by a subset construction over useful configurations.
///
/// Every configuration gets its own copy of the variables. A configuration
/// reached from several members of the current set takes its update from the
/// least of them.
pub fn eliminate_lookaround(s: &SstSf, cap: usize) -> Result<Eliminated> {
    let space = ConfigSpace::new(s)?;
    let configs = useful_configs(s, cap)?;
    let cidx: BTreeMap<&Config, usize> = configs.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let nv = s.vars.len();
    let total = configs.len() * nv;
    let init = space.initial();
    let start: Vec<usize> = cidx.get(&init).map(|&i| vec![i]).unwrap_or_default();
    let mut subsets = vec![start.clone()];
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    index.insert(start, 0);
    let (mut delta, mut rho, mut links) = (Vec::new(), Vec::new(), Vec::new());
    let mut i = 0;
    while i < subsets.len() {
        let (mut drow, mut rrow, mut lrow) = (Vec::new(), Vec::new(), Vec::new());
        for (ai, &a) in s.input.symbols().iter().enumerate() {
            let mut pre: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            for &ci in &subsets[i] {
                for (gi, c2) in space.steps(&configs[ci], a) {
                    if let Some(&cj) = cidx.get(&c2) {
                        pre.entry(cj).or_insert((ci, gi));
                    }
                }
            }
            let mut rhs = vec![Vec::new(); total];
            for (&cj, &(ci, gi)) in &pre {
                let upd = &s.delta[configs[ci].state][ai][gi].update;
                for x in 0..nv {
                    rhs[cj * nv + x] = upd
                        .get(x)
                        .iter()
                        .map(|it| match it {
                            Item::Var(y) => Item::Var(ci * nv + y),
                            Item::Sym(c) => Item::Sym(*c),
                        })
                        .collect();
                }
            }
            let target: Vec<usize> = pre.keys().copied().collect();
            let next = *index.entry(target.clone()).or_insert_with(|| {
                subsets.push(target);
                subsets.len() - 1
            });
            if subsets.len() > cap {
                return Err(Error::StateBlowup(cap));
            }
            drow.push(next);
            rrow.push(Substitution::from_rhs(rhs));
            lrow.push(pre.iter().map(|(&cj, &(ci, _))| (cj, ci)).collect());
        }
        delta.push(drow);
        rho.push(rrow);
        links.push(lrow);
        i += 1;
    }
    let states = (0..subsets.len()).map(|i| format!("S{i}")).collect();
    let mut vars = Vec::with_capacity(total);
    for ci in 0..configs.len() {
        for x in &s.vars {
            vars.push(format!("{x}@{ci}"));
        }
    }
    let sst = Sst::new(s.input.clone(), s.output.clone(), states, 0, vars, delta, rho, OutputSpec::Uniform(Vec::new()))?;
    Ok(Eliminated { sst, configs, subsets, links, source_out: s.out.clone(), source_vars: nv, lookahead: s.lookahead.clone() })
}

impl Eliminated {
    fn pred(&self, subset: usize, a: char, c2: usize) -> usize {
        let ai = self.sst.input.index_of(a).expect("letter in alphabet");
        let row = &self.links[subset][ai];
        row[row.binary_search_by_key(&c2, |p| p.0).expect("every member has a predecessor")].1
    }

    /// Runs the subset machine and reads the output from the unique thread of
    /// configurations whose state set and look-ahead obligations are accepting.
    pub fn run(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        let t = &self.sst;
        t.input.check_word(w.prefix())?;
        t.input.check_word(w.period())?;
        let cap = k.max(1);
        let mut val = vec![Vec::new(); t.vars.len()];
        let mut q = t.initial;
        let feed = |q: &mut usize, val: &mut Vec<Vec<char>>, word: &[char]| {
            for &a in word {
                let (q2, s) = t.step(*q, a);
                *val = s.apply(val, cap);
                *q = q2;
            }
        };
        feed(&mut q, &mut val, w.prefix());
        let mut bounds = vec![q];
        let start = loop {
            feed(&mut q, &mut val, w.period());
            if let Some(i) = bounds.iter().position(|&b| b == q) {
                break i;
            }
            bounds.push(q);
        };
        let block: Vec<char> = w.period().repeat(bounds.len() - start);
        let mut seq = vec![q];
        for &a in &block {
            seq.push(t.step(*seq.last().unwrap(), a).0);
        }
        let n = block.len();
        // configurations along the block, walking back from `c` at its end
        let thread = |c: usize| -> Vec<usize> {
            let mut path = vec![c];
            for j in (0..n).rev() {
                let prev = self.pred(seq[j], block[j], *path.last().unwrap());
                path.push(prev);
            }
            path.reverse();
            path
        };
        let members = &self.subsets[q];
        let back: BTreeMap<usize, usize> = members.iter().map(|&c| (c, thread(c)[0])).collect();
        let mut cycles: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &c in members {
            let mut walk = vec![c];
            let mut x = c;
            loop {
                x = back[&x];
                if let Some(p) = walk.iter().position(|&y| y == x) {
                    let mut cyc = walk[p..].to_vec();
                    cyc.reverse();
                    let m = cyc.iter().enumerate().min_by_key(|(_, v)| **v).unwrap().0;
                    cyc.rotate_left(m);
                    cycles.insert(cyc);
                    break;
                }
                walk.push(x);
            }
        }
        for cyc in cycles {
            // forward order: block j runs from cyc[j] to cyc[j + 1]
            let mlen = cyc.len();
            let mut path: Vec<usize> = Vec::new();
            for j in 0..mlen {
                let seg = thread(cyc[(j + 1) % mlen]);
                debug_assert_eq!(seg[0], cyc[j]);
                path.extend_from_slice(&seg[..n]);
            }
            let omega: StateSet = path.iter().map(|&c| self.configs[c].state).collect();
            let Some(out_vars) = self.source_out.select(&omega) else { continue };
            if !self.obligations_accepted(&self.configs[cyc[0]].obligations, &block.repeat(mlen)) {
                continue;
            }
            let x0 = cyc[0];
            let out_vars: Vec<usize> = out_vars.iter().map(|&x| x0 * self.source_vars + x).collect();
            let whole = block.repeat(mlen);
            let render = |val: &[Vec<char>]| out_vars.iter().flat_map(|&x| val[x].iter().copied()).collect::<Vec<char>>();
            let mut seen: BTreeMap<StateSet, usize> = BTreeMap::new();
            loop {
                let out = render(&val);
                if out.len() >= k {
                    return Ok(RunResult::Output(out.into_iter().take(k).map(OutSym::Sym).collect()));
                }
                let nonempty: StateSet = (0..val.len()).filter(|&x| !val[x].is_empty()).collect();
                if seen.get(&nonempty) == Some(&out.len()) {
                    let mut res: Vec<OutSym> = out.into_iter().map(OutSym::Sym).collect();
                    res.resize(k, OutSym::Bot);
                    return Ok(RunResult::Output(res));
                }
                seen.insert(nonempty, out.len());
                feed(&mut q, &mut val, &whole);
            }
        }
        Ok(RunResult::Rejected)
    }

    /// Whether every look-ahead run from the obligations, repeated on
    /// `cycle^ω`, has an accepting set of recurring states.
    fn obligations_accepted(&self, p: &StateSet, cycle: &[char]) -> bool {
        let Some(a) = &self.lookahead else { return true };
        for start in p.iter() {
            // iterate to a repeating state at cycle boundaries
            let mut bounds = vec![start];
            let mut x = start;
            let loop_start = loop {
                x = a.run_state(cycle, x);
                if let Some(i) = bounds.iter().position(|&b| b == x) {
                    break i;
                }
                bounds.push(x);
            };
            let mut inf = StateSet::new();
            for &b in &bounds[loop_start..] {
                inf.union_with(&a.run_visited(cycle, b).1);
            }
            if !a.muller.contains(&inf) {
                return false;
            }
        }
        true
    }
}

/// Anything that maps ultimately periodic words to output prefixes.
pub trait Runnable {
    fn input_alphabet(&self) -> &Alphabet;
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult>;
}

impl Runnable for Sst {
    fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.input.check_word(w.prefix())?;
        self.input.check_word(w.period())?;
        Ok(self.run_output(w, k))
    }
}

impl Runnable for TwoWst {
    fn input_alphabet(&self) -> &Alphabet {
        self.input()
    }
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.run(w, k)
    }
}

impl Runnable for Fot {
    fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.run(w, k, k)
    }
}

impl Runnable for SstSf {
    fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.run(w, k)
    }
}

impl Runnable for Eliminated {
    fn input_alphabet(&self) -> &Alphabet {
        &self.sst.input
    }
    fn run_prefix(&self, w: &UpWord, k: usize) -> Result<RunResult> {
        self.run(w, k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Neither machine produces an output.
    BothRejected,
    Equal,
    /// Outputs differ, or only one machine accepts.
    Mismatch,
    /// A run failed with an error.
    Failed(String),
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agreement::BothRejected => f.write_str("both-rejected"),
            Agreement::Equal => f.write_str("equal"),
            Agreement::Mismatch => f.write_str("mismatch"),
            Agreement::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareRow {
    pub word: UpWord,
    pub verdict: Agreement,
    /// First differing output index (0-based) when both accept.
    pub divergence: Option<usize>,
}

impl CompareRow {
    pub fn agrees(&self) -> bool {
        matches!(self.verdict, Agreement::BothRejected | Agreement::Equal)
    }
}

/// Runs both machines on every word and classifies the outcomes.
pub fn compare_outputs(m1: &dyn Runnable, m2: &dyn Runnable, corpus: &[UpWord], k: usize) -> Vec<CompareRow> {
    corpus
        .iter()
        .map(|w| {
            let (verdict, divergence) = match (m1.run_prefix(w, k), m2.run_prefix(w, k)) {
                (Err(e), _) | (_, Err(e)) => (Agreement::Failed(e.to_string()), None),
                (Ok(r1), Ok(r2)) => match (r1.output(), r2.output()) {
                    (None, None) => (Agreement::BothRejected, None),
                    (Some(a), Some(b)) => match first_difference(a, b) {
                        None => (Agreement::Equal, None),
                        Some(i) => (Agreement::Mismatch, Some(i)),
                    },
                    _ => (Agreement::Mismatch, None),
                },
            };
            CompareRow { word: w.clone(), verdict, divergence }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::render;
    use proptest::prelude::*;

    fn f1_corpus() -> Vec<UpWord> {
        ["ab#(a)^w", "abbb#ba#(ab)^w", "(ab)^w", "#(b)^w", "##a#(ba)^w", "b#aab#(abb)^w", "(a)^w"]
            .iter()
            .map(|s| UpWord::parse(s).unwrap())
            .collect()
    }

    fn out(r: RunResult) -> String {
        render(r.output().expect("accepted"))
    }

    #[test]
    fn f1_compiles_to_an_equivalent_guarded_sst() {
        let t = fixtures::f1_2wst();
        let s = twowst_to_sst_sf(&t).unwrap();
        assert_eq!(s.states[0], "start");
        for w in f1_corpus() {
            assert_eq!(s.run(&w, 40).unwrap(), t.run(&w, 40).unwrap(), "{w}");
        }
        assert_eq!(out(s.run(&UpWord::parse("abbb#ba#(ab)^w").unwrap(), 14).unwrap()), "bbbaabbb#abba#");
    }

    #[test]
    fn single_cell_updates() {
        let t = fixtures::parity_copier();
        let s = twowst_to_sst_sf(&t).unwrap();
        // one-way machines just append their outputs to O
        assert_eq!(s.states.len(), 3);
        let upd = &s.delta[1][0][0].update;
        assert_eq!(upd.display(&s.vars), "X_e := a; X_o := ε; O := Oa");
        assert_eq!(out(s.run(&UpWord::parse("(a)^w").unwrap(), 5).unwrap()), "aaaaa");
    }

    #[test]
    fn stay_moves_chain_outputs() {
        let t = fixtures::twowst_from(
            &["p", "q"],
            "p",
            &['a'],
            &['a', 'b'],
            &[("p", None, 'a', None, "q", "a", 0), ("q", None, 'a', None, "p", "b", 1)],
            &[&["p"]],
            None,
            None,
        )
        .unwrap();
        let s = twowst_to_sst_sf(&t).unwrap();
        assert_eq!(s.delta[0][0][0].update.display(&s.vars), "X_p := ε; X_q := ε; O := Oab");
        assert_eq!(out(s.run(&UpWord::parse("(a)^w").unwrap(), 6).unwrap()), "ababab");
    }

    #[test]
    fn constructed_updates_are_copyless() {
        for t in [fixtures::f1_2wst(), fixtures::after_a_marker(), fixtures::parity_copier()] {
            let s = twowst_to_sst_sf(&t).unwrap();
            assert!(s.delta.iter().flatten().flatten().all(|g| g.update.is_copyless()));
        }
    }

    #[test]
    fn lookbehind_is_compiled() {
        let t = fixtures::after_a_marker();
        let s = twowst_to_sst_sf(&t).unwrap();
        let w = UpWord::parse("ab(ba)^w").unwrap();
        assert_eq!(out(s.run(&w, 9).unwrap()), out(t.run(&w, 9).unwrap()));
    }

    #[test]
    fn useful_configurations() {
        let s = SstSf::from_sst(&fixtures::f1_sst());
        let u = useful_configs(&s, 1000).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u[0], Config { state: 0, eta: Vec::new(), obligations: StateSet::new() });
        let sf = twowst_to_sst_sf(&fixtures::f1_2wst()).unwrap();
        let u = useful_configs(&sf, 100_000).unwrap();
        assert!(u.iter().any(|c| c.state == sf.initial && c.obligations.is_empty()));
    }

    #[test]
    fn dead_states_are_not_useful() {
        let t = fixtures::sst_from(
            &["s", "d"],
            "s",
            &['a', 'b'],
            &['a'],
            &["X"],
            &[("s", 'a', "s", "X := Xa"), ("s", 'b', "d", ""), ("d", 'a', "d", ""), ("d", 'b', "d", "")],
            &[(&["s"], &["X"])],
        )
        .unwrap();
        let mut s = SstSf::from_sst(&t);
        // drop every transition out of `d`
        s.delta[1] = vec![Vec::new(), Vec::new()];
        let u = useful_configs(&s, 100).unwrap();
        assert!(u.iter().all(|c| c.state == 0));
    }

    #[test]
    fn trivial_lookaround_elimination_keeps_the_machine() {
        let t = fixtures::f1_sst();
        let e = eliminate_lookaround(&SstSf::from_sst(&t), 10_000).unwrap();
        assert_eq!(e.configs.len(), 2);
        assert_eq!(e.sst.states.len(), 2);
        for w in f1_corpus() {
            assert_eq!(e.run(&w, 30).unwrap(), t.run_output(&w, 30), "{w}");
        }
    }

    #[test]
    fn least_predecessor_supplies_the_update() {
        let t = fixtures::sst_from(
            &["s", "l", "r", "m"],
            "s",
            &['a'],
            &['a', 'b', 'c', 'd'],
            &["X"],
            &[("s", 'a', "l", "X := a"), ("l", 'a', "m", "X := Xc"), ("r", 'a', "m", "X := Xd"), ("m", 'a', "m", "")],
            &[(&["m"], &["X"])],
        )
        .unwrap();
        let mut s = SstSf::from_sst(&t);
        // two copies of the trivial look-ahead; the struct is built directly
        // so that overlapping guards put `l` and `r` in one subset
        s.lookahead =
            Some(Dma::from_names(&["h", "g", "t"], "h", &['a'], &[("h", 'a', "t"), ("g", 'a', "t"), ("t", 'a', "t")], &[&["t"]]).unwrap());
        let g = s.delta[0][0][0].clone();
        s.delta[0][0] = vec![
            Guarded { ahead: Some(0), ..g.clone() },
            Guarded { ahead: Some(1), to: 2, update: Substitution::parse("X := b", &s.vars).unwrap(), ..g },
        ];
        let e = eliminate_lookaround(&s, 1000).unwrap();
        let first = e.sst.delta[e.sst.initial][0];
        assert_eq!(e.subsets[first].len(), 2);
        let second = e.sst.delta[first][0];
        assert_eq!(e.subsets[second].len(), 1);
        let (m, p) = e.links[first][0][0];
        assert_eq!(e.configs[m].state, 3);
        assert_eq!(e.configs[p].state, 1);
        let w = UpWord::parse("(a)^w").unwrap();
        assert_eq!(out(e.run(&w, 2).unwrap()), "ac");
    }

    #[test]
    fn f1_pipeline() {
        let t = fixtures::f1_2wst();
        let e = eliminate_lookaround(&twowst_to_sst_sf(&t).unwrap(), 100_000).unwrap();
        for w in f1_corpus() {
            let r = t.run(&w, 60).unwrap();
            if r.is_accepted() {
                assert_eq!(e.run(&w, 60).unwrap(), r, "{w}");
            }
        }
    }

    #[test]
    fn comparison_rows() {
        let t = fixtures::f1_sst();
        let rows = compare_outputs(&t, &t, &f1_corpus(), 20);
        assert!(rows.iter().all(CompareRow::agrees));
        let mut m = t.clone();
        // change the first letter produced for an `a` in the reversed copy
        m.rho[0][0] = Substitution::parse("y := byb; z := za", &m.vars).unwrap();
        let rows = compare_outputs(&t, &m, &[UpWord::parse("ab#(a)^w").unwrap()], 20);
        assert_eq!(rows[0].verdict, Agreement::Mismatch);
        assert_eq!(rows[0].divergence, Some(1));
        let rows = compare_outputs(&fixtures::f1_2wst(), &t, &f1_corpus(), 30);
        assert!(rows.iter().all(CompareRow::agrees), "{rows:?}");
    }

    #[test]
    fn overlapping_guards_are_rejected() {
        let t = fixtures::f1_sst();
        let mut s = SstSf::from_sst(&t);
        s.lookahead = Some(fixtures::reach_lookahead());
        let g = s.delta[0][0][0].clone();
        s.delta[0][0] = vec![Guarded { ahead: Some(0), ..g.clone() }, Guarded { ahead: Some(2), ..g }];
        let r = SstSf::new(s.input, s.output, s.states, s.initial, s.vars, s.delta, s.out, s.lookahead, None);
        assert!(matches!(r, Err(Error::GuardsNotPartition(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn compiled_machine_agrees(u in "[ab#]{0,6}", v in "[ab]{1,3}", k in 1usize..30) {
            let t = fixtures::f1_2wst();
            let s = twowst_to_sst_sf(&t).unwrap();
            let w = UpWord::from_strs(&u, &v);
            prop_assert_eq!(s.run(&w, k).unwrap(), t.run(&w, k).unwrap());
        }

        #[test]
        fn lookbehind_machine_agrees(u in "[ab]{0,6}", v in "[ab]{1,3}") {
            let t = fixtures::after_a_marker();
            let w = UpWord::from_strs(&u, &v);
            let s = twowst_to_sst_sf(&t).unwrap();
            let e = eliminate_lookaround(&s, 100_000).unwrap();
            let r = t.run(&w, 12).unwrap();
            prop_assert_eq!(&s.run(&w, 12).unwrap(), &r);
            prop_assert_eq!(&e.run(&w, 12).unwrap(), &r);
        }
    }
}

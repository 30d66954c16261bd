//! Line-oriented text format for every machine kind.
//!
//! A file is a list of `key: value` lines headed by `kind: dma|dfa|sst|2wst|fot|sstsf`.
//! Blank lines and lines starting with `//` are ignored. Look-around automata
//! of `2wst` and `sstsf` files are nested sections opened by a bare
//! `lookahead:` or `lookbehind:` line and closed by `end`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use omega_core::constructions::{Guarded, SstSf};
use omega_core::fo::{self, Formula};
use omega_core::fot::Fot;
use omega_core::muller::{Dfa, Dma};
use omega_core::sst::{OutputSpec, Sst, Substitution};
use omega_core::twowst::{Move, Sym, Transition, TwoWst};
use omega_core::{Alphabet, StateSet};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid machine: {0}")]
    Invalid(#[from] omega_core::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

type Res<T> = Result<T, FormatError>;

/// Any machine the CLI can load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Dma(Dma),
    Dfa(Dfa),
    Sst(Sst),
    TwoWst(TwoWst),
    Fot(Fot),
    SstSf(SstSf),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Dma(_) => "dma",
            Machine::Dfa(_) => "dfa",
            Machine::Sst(_) => "sst",
            Machine::TwoWst(_) => "2wst",
            Machine::Fot(_) => "fot",
            Machine::SstSf(_) => "sstsf",
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    col: usize,
    section: Option<Vec<Entry>>,
}

impl Entry {
    fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }
}

fn lex(text: &str) -> Res<Vec<Entry>> {
    let mut stack: Vec<(Entry, Vec<Entry>)> = Vec::new();
    let mut top = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        if trimmed == "end" {
            let (mut head, body) =
                stack.pop().ok_or(FormatError::Syntax { line, col: indent + 1, msg: "`end` without an open section".into() })?;
            head.section = Some(body);
            match stack.last_mut() {
                Some((_, b)) => b.push(head),
                None => top.push(head),
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(FormatError::Syntax { line, col: indent + 1, msg: "expected `key: value`".into() });
        };
        let value_col = indent + key.len() + 2 + (value.len() - value.trim_start().len());
        let e = Entry { key: key.trim().to_string(), value: value.trim().to_string(), line, col: value_col, section: None };
        if matches!(e.key.as_str(), "lookahead" | "lookbehind") && e.value.is_empty() {
            stack.push((e, Vec::new()));
        } else {
            match stack.last_mut() {
                Some((_, b)) => b.push(e),
                None => top.push(e),
            }
        }
    }
    if let Some((head, _)) = stack.pop() {
        return Err(head.err(format!("section `{}` is not closed by `end`", head.key)));
    }
    Ok(top)
}

/// Keyed access to the entries of one section.
struct Fields<'a> {
    entries: &'a [Entry],
    allowed: &'static [&'static str],
}

impl<'a> Fields<'a> {
    fn new(entries: &'a [Entry], allowed: &'static [&'static str]) -> Res<Self> {
        for e in entries {
            if !allowed.contains(&e.key.as_str()) && e.key != "kind" {
                return Err(e.err(format!("unexpected key `{}`", e.key)));
            }
        }
        Ok(Fields { entries, allowed })
    }

    fn all(&self, key: &str) -> impl Iterator<Item = &'a Entry> + '_ {
        debug_assert!(self.allowed.contains(&key));
        let key = key.to_string();
        self.entries.iter().filter(move |e| e.key == key)
    }

    fn opt(&self, key: &str) -> Res<Option<&'a Entry>> {
        let mut it = self.all(key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return Err(dup.err(format!("`{key}` given twice")));
        }
        Ok(first)
    }

    fn one(&self, key: &str) -> Res<&'a Entry> {
        self.opt(key)?.ok_or_else(|| {
            let line = self.entries.first().map_or(1, |e| e.line);
            FormatError::Syntax { line, col: 1, msg: format!("missing `{key}:`") }
        })
    }
}

fn names(e: &Entry) -> Vec<String> {
    e.value.split_whitespace().map(str::to_string).collect()
}

fn alphabet(e: &Entry) -> Res<Alphabet> {
    let mut out = Vec::new();
    for tok in e.value.split_whitespace() {
        let mut cs = tok.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => out.push(c),
            _ => return Err(e.err(format!("alphabet symbols are single characters, got `{tok}`"))),
        }
    }
    Ok(Alphabet::new(out)?)
}

fn index(e: &Entry, states: &[String], name: &str) -> Res<usize> {
    states.iter().position(|s| s == name).ok_or_else(|| e.err(format!("unknown state `{name}`")))
}

fn letter(e: &Entry, a: &Alphabet, tok: &str) -> Res<char> {
    let mut cs = tok.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) if a.contains(c) => Ok(c),
        _ => Err(e.err(format!("`{tok}` is not a letter of the alphabet"))),
    }
}

/// `{q r} {s}` or `{q,r}`: sets of state names.
fn state_sets(e: &Entry, text: &str, states: &[String]) -> Res<Vec<StateSet>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('{') else { return Err(e.err("expected `{`")) };
        let Some(close) = body.find('}') else { return Err(e.err("unclosed `{`")) };
        let set = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|n| index(e, states, n))
            .collect::<Res<StateSet>>()?;
        out.push(set);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// `q,a -> q'` lines into a total table.
fn table(f: &Fields, states: &[String], a: &Alphabet) -> Res<Vec<Vec<usize>>> {
    let mut delta = vec![vec![None; a.len()]; states.len()];
    for e in f.all("delta") {
        let (lhs, rhs) = e.value.split_once("->").ok_or_else(|| e.err("expected `q,a -> q'`"))?;
        let (q, c) = lhs.trim().rsplit_once(',').ok_or_else(|| e.err("expected `q,a`"))?;
        let (q, c) = (index(e, states, q.trim())?, letter(e, a, c.trim())?);
        let ci = a.index_of(c).expect("checked letter");
        if delta[q][ci].replace(index(e, states, rhs.trim())?).is_some() {
            return Err(e.err("transition given twice"));
        }
    }
    delta
        .into_iter()
        .enumerate()
        .map(|(q, row)| {
            row.into_iter()
                .enumerate()
                .map(|(ci, t)| {
                    t.ok_or_else(|| FormatError::Syntax {
                        line: f.entries.first().map_or(1, |e| e.line),
                        col: 1,
                        msg: format!("no transition for `{}`,`{}`", states[q], a.symbols()[ci]),
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_dma(entries: &[Entry]) -> Res<Dma> {
    let f = Fields::new(entries, &["states", "initial", "alphabet", "delta", "muller"])?;
    let states = names(f.one("states")?);
    let a = alphabet(f.one("alphabet")?)?;
    let init = f.one("initial")?;
    let initial = index(init, &states, &init.value)?;
    let delta = table(&f, &states, &a)?;
    let mut muller = Vec::new();
    for e in f.all("muller") {
        muller.extend(state_sets(e, &e.value, &states)?);
    }
    Ok(Dma::new(states, initial, a, delta, muller)?)
}

fn parse_dfa(entries: &[Entry]) -> Res<Dfa> {
    let f = Fields::new(entries, &["states", "initial", "alphabet", "delta", "accepting"])?;
    let states = names(f.one("states")?);
    let a = alphabet(f.one("alphabet")?)?;
    let init = f.one("initial")?;
    let initial = index(init, &states, &init.value)?;
    let delta = table(&f, &states, &a)?;
    let mut accepting = StateSet::new();
    if let Some(e) = f.opt("accepting")? {
        for n in e.value.split_whitespace() {
            accepting.insert(index(e, &states, n)?);
        }
    }
    Ok(Dfa::new(states, initial, a, delta, accepting)?)
}

fn parse_output(f: &Fields, states: &[String], vars: &[String]) -> Res<OutputSpec> {
    let mut entries = Vec::new();
    let mut uniform = None;
    for e in f.all("output") {
        let (lhs, rhs) = e.value.split_once("->").ok_or_else(|| e.err("expected `{q,..} -> X Y`"))?;
        let xs = rhs
            .split_whitespace()
            .map(|x| vars.iter().position(|v| v == x).ok_or_else(|| e.err(format!("unknown variable `{x}`"))))
            .collect::<Res<Vec<usize>>>()?;
        if lhs.trim() == "*" {
            if uniform.replace(xs).is_some() {
                return Err(e.err("`*` output given twice"));
            }
        } else {
            let sets = state_sets(e, lhs, states)?;
            if sets.len() != 1 {
                return Err(e.err("one state set per output line"));
            }
            entries.push((sets.into_iter().next().unwrap(), xs));
        }
    }
    match (uniform, entries.is_empty()) {
        (Some(xs), true) => Ok(OutputSpec::Uniform(xs)),
        (None, _) => Ok(OutputSpec::Muller(entries)),
        (Some(_), false) => Err(f.one("output").map_or_else(|e| e, |e| e.err("`*` cannot be mixed with state sets"))),
    }
}

/// Declared variables. Right-hand sides are read by longest variable name,
/// so a variable spelled like an output letter would hide that letter.
fn var_names(f: &Fields, out: &Alphabet) -> Res<Vec<String>> {
    let Some(e) = f.opt("vars")? else { return Ok(Vec::new()) };
    let vars = names(e);
    for v in &vars {
        let mut cs = v.chars();
        if let (Some(c), None) = (cs.next(), cs.next()) {
            if out.contains(c) {
                return Err(e.err(format!("variable `{v}` clashes with the output letter `{c}`")));
            }
        }
    }
    Ok(vars)
}

fn parse_sst(entries: &[Entry]) -> Res<Sst> {
    let f = Fields::new(entries, &["states", "initial", "alphabet", "output-alphabet", "vars", "delta", "update", "output", "copyless"])?;
    let states = names(f.one("states")?);
    let a = alphabet(f.one("alphabet")?)?;
    let b = alphabet(f.one("output-alphabet")?)?;
    let vars = var_names(&f, &b)?;
    let init = f.one("initial")?;
    let initial = index(init, &states, &init.value)?;
    let delta = table(&f, &states, &a)?;
    let mut rho = vec![vec![None; a.len()]; states.len()];
    for e in f.all("update") {
        let (lhs, rhs) = e.value.split_once(':').ok_or_else(|| e.err("expected `q,a: X := ...`"))?;
        let (q, c) = lhs.trim().rsplit_once(',').ok_or_else(|| e.err("expected `q,a`"))?;
        let (q, c) = (index(e, &states, q.trim())?, letter(e, &a, c.trim())?);
        let s = Substitution::parse(rhs, &vars).map_err(|err| e.err(err.to_string()))?;
        if rho[q][a.index_of(c).unwrap()].replace(s).is_some() {
            return Err(e.err("update given twice"));
        }
    }
    let rho =
        rho.into_iter().map(|row| row.into_iter().map(|s| s.unwrap_or_else(|| Substitution::identity(vars.len()))).collect()).collect();
    let out = parse_output(&f, &states, &vars)?;
    let t = Sst::new(a, b, states, initial, vars, delta, rho, out)?;
    let require_copyless = match f.opt("copyless")? {
        None => true,
        Some(e) => match e.value.as_str() {
            "true" => true,
            "false" => false,
            _ => return Err(e.err("expected `true` or `false`")),
        },
    };
    if require_copyless {
        t.check_copyless()?;
    }
    Ok(t)
}

fn guard(e: &Entry, tok: &str, states: Option<&[String]>) -> Res<Option<usize>> {
    let inner = tok
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| e.err(format!("expected a guard `[..]`, got `{tok}`")))?
        .trim();
    if inner.is_empty() {
        return Ok(None);
    }
    match states {
        Some(s) => index(e, s, inner).map(Some),
        None => Err(e.err("guard without a look-around automaton")),
    }
}

/// `q, [r], a, [p]`.
fn guarded_head<'e>(
    e: &'e Entry,
    lhs: &'e str,
    behind: Option<&[String]>,
    ahead: Option<&[String]>,
) -> Res<(&'e str, Option<usize>, &'e str, Option<usize>)> {
    let parts: Vec<&str> = lhs.split(',').collect();
    if parts.len() != 4 {
        return Err(e.err("expected `q, [r], a, [p]`"));
    }
    Ok((parts[0].trim(), guard(e, parts[1], behind)?, parts[2].trim(), guard(e, parts[3], ahead)?))
}

fn sections(f: &Fields) -> Res<(Option<Dma>, Option<Dfa>)> {
    let la = match f.opt("lookahead")? {
        Some(e) => Some(parse_dma(e.section.as_deref().ok_or_else(|| e.err("expected a nested section"))?)?),
        None => None,
    };
    let lb = match f.opt("lookbehind")? {
        Some(e) => Some(parse_dfa(e.section.as_deref().ok_or_else(|| e.err("expected a nested section"))?)?),
        None => None,
    };
    Ok((la, lb))
}

fn parse_2wst(entries: &[Entry]) -> Res<TwoWst> {
    let f = Fields::new(entries, &["states", "initial", "alphabet", "output-alphabet", "trans", "muller", "lookahead", "lookbehind"])?;
    let states = names(f.one("states")?);
    let a = alphabet(f.one("alphabet")?)?;
    let b = alphabet(f.one("output-alphabet")?)?;
    let init = f.one("initial")?;
    let initial = index(init, &states, &init.value)?;
    let (la, lb) = sections(&f)?;
    let mut trans = Vec::new();
    for e in f.all("trans") {
        let (lhs, rhs) = e.value.split_once("->").ok_or_else(|| e.err("expected `... -> q', \"out\", move`"))?;
        let (q, r, c, p) = guarded_head(e, lhs, lb.as_ref().map(|d| d.states.as_slice()), la.as_ref().map(|d| d.states.as_slice()))?;
        let sym = match c {
            "⊢" | "|-" => Sym::End,
            _ => Sym::Letter(letter(e, &a, c)?),
        };
        let (to, rest) = rhs.split_once(',').ok_or_else(|| e.err("expected `q', \"out\", move`"))?;
        let rest = rest.trim();
        let open = rest.strip_prefix('"').ok_or_else(|| e.err("output must be quoted"))?;
        let close = open.rfind('"').ok_or_else(|| e.err("unterminated output string"))?;
        let output: Vec<char> = open[..close].chars().collect();
        let mv = match open[close + 1..].trim().strip_prefix(',').map(str::trim) {
            Some("+1") | Some("1") => Move::Right,
            Some("0") => Move::Stay,
            Some("-1") => Move::Left,
            _ => return Err(e.err("move must be +1, 0 or -1")),
        };
        trans.push(Transition { from: index(e, &states, q)?, behind: r, sym, ahead: p, to: index(e, &states, to.trim())?, output, mv });
    }
    let mut muller = Vec::new();
    for e in f.all("muller") {
        muller.extend(state_sets(e, &e.value, &states)?);
    }
    Ok(TwoWst::new(states, initial, a, b, trans, muller, la, lb)?)
}

fn formula(e: &Entry, text: &str) -> Res<Formula> {
    fo::parse(text).map_err(|err| e.err(err.to_string()))
}

fn number(e: &Entry, tok: &str) -> Res<usize> {
    tok.trim().parse().map_err(|_| e.err(format!("expected a number, got `{}`", tok.trim())))
}

fn parse_fot(entries: &[Entry]) -> Res<Fot> {
    let f = Fields::new(entries, &["alphabet", "output-alphabet", "dom", "copies", "pos", "ord"])?;
    let a = alphabet(f.one("alphabet")?)?;
    let b = alphabet(f.one("output-alphabet")?)?;
    let d = f.one("dom")?;
    let dom = formula(d, &d.value)?;
    let c = f.one("copies")?;
    let copies = number(c, &c.value)?;
    let mut pos = BTreeMap::new();
    for e in f.all("pos") {
        let (head, body) = e.value.split_once(':').ok_or_else(|| e.err("expected `c, γ: formula`"))?;
        let (cp, g) = head.split_once(',').ok_or_else(|| e.err("expected `c, γ`"))?;
        let g = letter(e, &b, g.trim())?;
        if pos.insert((number(e, cp)?, g), formula(e, body)?).is_some() {
            return Err(e.err("label formula given twice"));
        }
    }
    let mut ord = BTreeMap::new();
    for e in f.all("ord") {
        let (head, body) = e.value.split_once(':').ok_or_else(|| e.err("expected `c,d: formula`"))?;
        let (c1, c2) = head.split_once(',').ok_or_else(|| e.err("expected `c,d`"))?;
        if ord.insert((number(e, c1)?, number(e, c2)?), formula(e, body)?).is_some() {
            return Err(e.err("order formula given twice"));
        }
    }
    Ok(Fot::new(a, b, dom, copies, pos, ord)?)
}

fn parse_sstsf(entries: &[Entry]) -> Res<SstSf> {
    let f =
        Fields::new(entries, &["states", "initial", "alphabet", "output-alphabet", "vars", "trans", "output", "lookahead", "lookbehind"])?;
    let states = names(f.one("states")?);
    let a = alphabet(f.one("alphabet")?)?;
    let b = alphabet(f.one("output-alphabet")?)?;
    let vars = var_names(&f, &b)?;
    let init = f.one("initial")?;
    let initial = index(init, &states, &init.value)?;
    let (la, lb) = sections(&f)?;
    let mut delta = vec![vec![Vec::new(); a.len()]; states.len()];
    for e in f.all("trans") {
        let (lhs, rhs) = e.value.split_once("->").ok_or_else(|| e.err("expected `... -> q': updates`"))?;
        let (q, r, c, p) = guarded_head(e, lhs, lb.as_ref().map(|d| d.states.as_slice()), la.as_ref().map(|d| d.states.as_slice()))?;
        let (to, upd) = rhs.split_once(':').ok_or_else(|| e.err("expected `q': updates`"))?;
        let c = letter(e, &a, c)?;
        let update = Substitution::parse(upd, &vars).map_err(|err| e.err(err.to_string()))?;
        delta[index(e, &states, q)?][a.index_of(c).unwrap()].push(Guarded {
            behind: r,
            ahead: p,
            to: index(e, &states, to.trim())?,
            update,
        });
    }
    let out = parse_output(&f, &states, &vars)?;
    Ok(SstSf::new(a, b, states, initial, vars, delta, out, la, lb)?)
}

/// Parses a machine; the `kind:` header selects the format.
pub fn parse_machine(text: &str) -> Res<Machine> {
    let entries = lex(text)?;
    let Some(head) = entries.first() else {
        return Err(FormatError::Syntax { line: 1, col: 1, msg: "empty file".into() });
    };
    if head.key != "kind" {
        return Err(head.err("the first line must be `kind: ...`"));
    }
    Ok(match head.value.as_str() {
        "dma" => Machine::Dma(parse_dma(&entries[1..])?),
        "dfa" => Machine::Dfa(parse_dfa(&entries[1..])?),
        "sst" => Machine::Sst(parse_sst(&entries[1..])?),
        "2wst" => Machine::TwoWst(parse_2wst(&entries[1..])?),
        "fot" => Machine::Fot(parse_fot(&entries[1..])?),
        "sstsf" => Machine::SstSf(parse_sstsf(&entries[1..])?),
        other => return Err(head.err(format!("unknown kind `{other}`"))),
    })
}

pub fn load_machine(path: &Path) -> Res<Machine> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    parse_machine(&text)
}

fn join_chars(cs: &[char]) -> String {
    cs.iter().map(char::to_string).collect::<Vec<_>>().join(" ")
}

fn set_text(s: &StateSet, states: &[String]) -> String {
    format!("{{{}}}", s.iter().map(|q| states[q].as_str()).collect::<Vec<_>>().join(","))
}

fn print_table(out: &mut String, indent: &str, states: &[String], a: &Alphabet, delta: &[Vec<usize>]) {
    for (q, row) in delta.iter().enumerate() {
        for (ci, &to) in row.iter().enumerate() {
            let _ = writeln!(out, "{indent}delta: {},{} -> {}", states[q], a.symbols()[ci], states[to]);
        }
    }
}

fn print_dma(out: &mut String, indent: &str, d: &Dma) {
    let _ = writeln!(out, "{indent}states: {}", d.states.join(" "));
    let _ = writeln!(out, "{indent}initial: {}", d.states[d.initial]);
    let _ = writeln!(out, "{indent}alphabet: {}", join_chars(d.alphabet.symbols()));
    print_table(out, indent, &d.states, &d.alphabet, &d.delta);
    let sets: Vec<String> = d.muller.iter().map(|s| set_text(s, &d.states)).collect();
    let _ = writeln!(out, "{indent}muller: {}", sets.join(" "));
}

fn print_dfa(out: &mut String, indent: &str, d: &Dfa) {
    let _ = writeln!(out, "{indent}states: {}", d.states.join(" "));
    let _ = writeln!(out, "{indent}initial: {}", d.states[d.initial]);
    let _ = writeln!(out, "{indent}alphabet: {}", join_chars(d.alphabet.symbols()));
    print_table(out, indent, &d.states, &d.alphabet, &d.delta);
    let acc: Vec<&str> = d.accepting.iter().map(|q| d.states[q].as_str()).collect();
    let _ = writeln!(out, "{indent}accepting: {}", acc.join(" "));
}

fn print_output(out: &mut String, o: &OutputSpec, states: &[String], vars: &[String]) {
    let xs = |v: &[usize]| v.iter().map(|&x| vars[x].as_str()).collect::<Vec<_>>().join(" ");
    match o {
        OutputSpec::Uniform(v) => {
            let _ = writeln!(out, "output: * -> {}", xs(v));
        }
        OutputSpec::Muller(f) => {
            for (p, v) in f {
                let _ = writeln!(out, "output: {} -> {}", set_text(p, states), xs(v));
            }
        }
    }
}

fn print_sections(out: &mut String, la: Option<&Dma>, lb: Option<&Dfa>) {
    if let Some(a) = la {
        out.push_str("lookahead:\n");
        print_dma(out, "  ", a);
        out.push_str("end\n");
    }
    if let Some(b) = lb {
        out.push_str("lookbehind:\n");
        print_dfa(out, "  ", b);
        out.push_str("end\n");
    }
}

fn guard_text(g: Option<usize>, states: Option<&[String]>) -> String {
    match (g, states) {
        (Some(i), Some(s)) => format!("[{}]", s[i]),
        _ => "[]".to_string(),
    }
}

/// Renders a machine so that [`parse_machine`] gives it back.
pub fn print_machine(m: &Machine) -> String {
    let mut out = format!("kind: {}\n", m.kind());
    match m {
        Machine::Dma(d) => print_dma(&mut out, "", d),
        Machine::Dfa(d) => print_dfa(&mut out, "", d),
        Machine::Sst(t) => {
            let _ = writeln!(out, "states: {}", t.states.join(" "));
            let _ = writeln!(out, "initial: {}", t.states[t.initial]);
            let _ = writeln!(out, "alphabet: {}", join_chars(t.input.symbols()));
            let _ = writeln!(out, "output-alphabet: {}", join_chars(t.output.symbols()));
            let _ = writeln!(out, "vars: {}", t.vars.join(" "));
            if !t.is_copyless() {
                out.push_str("copyless: false\n");
            }
            print_table(&mut out, "", &t.states, &t.input, &t.delta);
            for (q, row) in t.rho.iter().enumerate() {
                for (ci, s) in row.iter().enumerate() {
                    let text = s.display(&t.vars);
                    if !text.is_empty() {
                        let _ = writeln!(out, "update: {},{}: {}", t.states[q], t.input.symbols()[ci], text);
                    }
                }
            }
            print_output(&mut out, &t.out, &t.states, &t.vars);
        }
        Machine::TwoWst(t) => {
            let s = t.states();
            let _ = writeln!(out, "states: {}", s.join(" "));
            let _ = writeln!(out, "initial: {}", s[t.initial()]);
            let _ = writeln!(out, "alphabet: {}", join_chars(t.input().symbols()));
            let _ = writeln!(out, "output-alphabet: {}", join_chars(t.output().symbols()));
            let lb = t.lookbehind().map(|b| b.states.as_slice());
            let la = t.lookahead().map(|a| a.states.as_slice());
            for tr in t.transitions() {
                let sym = match tr.sym {
                    Sym::End => '⊢',
                    Sym::Letter(c) => c,
                };
                let mv = match tr.mv {
                    Move::Left => "-1",
                    Move::Stay => "0",
                    Move::Right => "+1",
                };
                let _ = writeln!(
                    out,
                    "trans: {}, {}, {sym}, {} -> {}, \"{}\", {mv}",
                    s[tr.from],
                    guard_text(tr.behind, lb),
                    guard_text(tr.ahead, la),
                    s[tr.to],
                    tr.output.iter().collect::<String>()
                );
            }
            let sets: Vec<String> = t.muller().iter().map(|m| set_text(m, s)).collect();
            let _ = writeln!(out, "muller: {}", sets.join(" "));
            print_sections(&mut out, t.lookahead(), t.lookbehind());
        }
        Machine::Fot(t) => {
            let _ = writeln!(out, "alphabet: {}", join_chars(t.input.symbols()));
            let _ = writeln!(out, "output-alphabet: {}", join_chars(t.output.symbols()));
            let _ = writeln!(out, "dom: {}", t.dom);
            let _ = writeln!(out, "copies: {}", t.copies);
            for ((c, g), f) in &t.pos {
                let _ = writeln!(out, "pos: {c}, {g}: {f}");
            }
            for ((c, d), f) in &t.ord {
                let _ = writeln!(out, "ord: {c},{d}: {f}");
            }
        }
        Machine::SstSf(t) => {
            let _ = writeln!(out, "states: {}", t.states.join(" "));
            let _ = writeln!(out, "initial: {}", t.states[t.initial]);
            let _ = writeln!(out, "alphabet: {}", join_chars(t.input.symbols()));
            let _ = writeln!(out, "output-alphabet: {}", join_chars(t.output.symbols()));
            let _ = writeln!(out, "vars: {}", t.vars.join(" "));
            let lb = t.lookbehind.as_ref().map(|b| b.states.as_slice());
            let la = t.lookahead.as_ref().map(|a| a.states.as_slice());
            for (q, row) in t.delta.iter().enumerate() {
                for (ci, alts) in row.iter().enumerate() {
                    for g in alts {
                        let _ = writeln!(
                            out,
                            "trans: {}, {}, {}, {} -> {}: {}",
                            t.states[q],
                            guard_text(g.behind, lb),
                            t.input.symbols()[ci],
                            guard_text(g.ahead, la),
                            t.states[g.to],
                            g.update.display(&t.vars)
                        );
                    }
                }
            }
            print_output(&mut out, &t.out, &t.states, &t.vars);
            print_sections(&mut out, t.lookahead.as_ref(), t.lookbehind.as_ref());
        }
    }
    out
}

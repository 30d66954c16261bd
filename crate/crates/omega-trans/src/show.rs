//! Plain-text rendering of monoid elements, behaviours and reports.

use std::fmt::Write as _;

use omega_core::constructions::CompareRow;
use omega_core::muller::{Coord, TransMatrix};
use omega_core::sst::FlowMatrix;
use omega_core::twowst::{Ctx, Quadrant, Quads};
use omega_core::StateSet;

fn set(s: &StateSet, names: &[String]) -> String {
    format!("{{{}}}", s.iter().map(|q| names[q].as_str()).collect::<Vec<_>>().join(","))
}

pub fn coord(c: &Coord, names: &[String]) -> String {
    match c {
        Coord::Zero => "0".into(),
        Coord::One => "1".into(),
        Coord::Neutral => "e".into(),
        Coord::Part(s) => set(s, names),
    }
}

fn tuple(t: &[Coord], names: &[String]) -> String {
    format!("({})", t.iter().map(|c| coord(c, names)).collect::<Vec<_>>().join(", "))
}

/// One line per state: `p -> q (coordinates)` or `p -> ⊥`.
pub fn trans_matrix(m: &TransMatrix, names: &[String]) -> String {
    let mut out = String::new();
    for p in 0..m.size() {
        match m.row(p) {
            Some((q, t)) => {
                let _ = writeln!(out, "  {} -> {} {}", names[p], names[*q], tuple(t, names));
            }
            None => {
                let _ = writeln!(out, "  {} -> ⊥", names[p]);
            }
        }
    }
    out
}

/// One line per state: target, coordinates and the copy counts `x>y:n`.
pub fn flow_matrix(m: &FlowMatrix, states: &[String], vars: &[String]) -> String {
    let mut out = String::new();
    for (p, row) in m.rows.iter().enumerate() {
        let counts: Vec<String> = row.counts.iter().map(|&(x, y, n)| format!("{}>{}:{n}", vars[x as usize], vars[y as usize])).collect();
        let _ = writeln!(out, "  {} -> {} {} [{}]", states[p], states[row.target], tuple(&row.tuple, states), counts.join(" "));
    }
    out
}

/// `{(p,q),..}`: the state pairs a behaviour matrix connects.
pub fn pairs(m: &TransMatrix, names: &[String]) -> String {
    let items: Vec<String> = m.support().iter().map(|&(p, q)| format!("({},{})", names[p], names[q])).collect();
    format!("{{{}}}", items.join(","))
}

pub fn quads(q: &Quads, names: &[String]) -> String {
    let mut out = String::new();
    for (label, quad) in [("ll", Quadrant::LL), ("lr", Quadrant::LR), ("rl", Quadrant::RL), ("rr", Quadrant::RR)] {
        let _ = writeln!(out, "{label}: {}", pairs(q.get(quad), names));
    }
    out
}

pub fn context(c: &Ctx, ahead: Option<&[String]>, behind: Option<&[String]>) -> String {
    let mut parts = Vec::new();
    if let Some(b) = behind {
        parts.push(format!("behind=[{}]", c.eta.iter().map(|&i| b[i].as_str()).collect::<Vec<_>>().join(" ")));
    }
    if let Some(a) = ahead {
        parts.push(format!("ahead={}", set(&c.prof, a)));
    }
    parts.join(" ")
}

pub fn word(w: &[char]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.iter().collect()
    }
}

/// Tab-separated report: word, verdict, divergence index (`-` if none).
pub fn report_tsv(rows: &[CompareRow]) -> String {
    let mut out = String::from("word\tverdict\tdivergence-index\n");
    for r in rows {
        let d = r.divergence.map_or("-".to_string(), |i| i.to_string());
        let _ = writeln!(out, "{}\t{}\t{d}", r.word, r.verdict);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use omega_core::fixtures;

    #[test]
    fn behaviour_pairs_of_the_f1_example() {
        let t = fixtures::f1_2wst();
        let names = t.states().to_vec();
        let ctx = t.contexts().unwrap().into_iter().next().unwrap();
        let q = t.quads_in(&['a', 'b', '#'], &ctx).unwrap();
        let text = quads(&q, &names);
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("ll: "));
    }

    #[test]
    fn matrices_render_every_row() {
        let d = fixtures::muller_ex1();
        let m = d.matrix_of_word(&['a', 'b']);
        assert_eq!(trans_matrix(&m, &d.states).lines().count(), d.states.len());
        let t = fixtures::tm_ex1_left();
        let f = t.flow_matrix(&['b', 'b']);
        assert_eq!(flow_matrix(&f, &t.states, &t.vars).lines().count(), t.states.len());
    }
}

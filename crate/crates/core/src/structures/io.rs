//! Line-oriented text formats.
//!
//! Model:
//! ```text
//! domain 3
//! rel R arity 2
//! 0 1
//! 2 2
//! end
//! ```
//! Team:
//! ```text
//! vars x y
//! 0 1
//! 1 1
//! ```
//! `#` starts a comment. A 0-ary tuple or the assignment over no variables is written `()`.

use std::fmt::Write;

use crate::syntax::{Signature, Var};

use super::model::{Elem, Model};
use super::team::Team;
use super::StructureError;

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn err(line: usize, msg: impl Into<String>) -> StructureError {
    StructureError::Format { line, msg: msg.into() }
}

fn tuple(line: usize, text: &str) -> Result<Vec<Elem>, StructureError> {
    if text == "()" {
        return Ok(Vec::new());
    }
    text.split_whitespace()
        .map(|w| w.parse::<Elem>().map_err(|_| err(line, format!("expected an element index, found `{w}`"))))
        .collect()
}

/// Parses a model. When `sig` is given, every relation it declares must be
/// present in the file with the same arity; otherwise the file's own
/// declarations form the signature.
pub fn parse_model(text: &str, sig: Option<&Signature>) -> Result<Model, StructureError> {
    let mut it = lines(text);
    let (line, first) = it.next().ok_or_else(|| err(1, "empty model file"))?;
    let size = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["domain", n] => n.parse::<usize>().map_err(|_| err(line, "bad domain size"))?,
        _ => return Err(err(line, "expected `domain N`")),
    };
    let mut blocks: Vec<(usize, String, usize, Vec<Vec<Elem>>)> = Vec::new();
    let mut open = false;
    for (line, l) in it {
        let words: Vec<_> = l.split_whitespace().collect();
        match words[..] {
            ["rel", name, "arity", k] if !open => {
                let k = k.parse::<usize>().map_err(|_| err(line, "bad arity"))?;
                blocks.push((line, name.to_string(), k, Vec::new()));
                open = true;
            }
            ["end"] if open => open = false,
            _ if open => {
                let t = tuple(line, l)?;
                blocks.last_mut().expect("open block").3.push(t);
            }
            _ => return Err(err(line, format!("expected `rel NAME arity K`, found `{l}`"))),
        }
    }
    if open {
        return Err(err(blocks.last().map_or(1, |b| b.0), "relation block is missing `end`"));
    }
    let mut declared = Signature::empty();
    for (line, name, k, _) in &blocks {
        declared.add(name.clone(), *k).map_err(|e| err(*line, e.to_string()))?;
    }
    let sig = match sig {
        Some(sig) => {
            for (name, k) in declared.relations() {
                match sig.arity(name) {
                    None => return Err(StructureError::UnknownRelation(name.to_string())),
                    Some(a) if a != k => {
                        return Err(StructureError::ArityMismatch { rel: name.to_string(), expected: a, found: k })
                    }
                    _ => {}
                }
            }
            if let Some((name, _)) = sig.relations().find(|(n, _)| declared.arity(n).is_none()) {
                return Err(err(0, format!("relation `{name}` is declared but missing from the model file")));
            }
            sig.clone()
        }
        None => declared,
    };
    let mut m = Model::new(size, sig)?;
    for (line, name, _, tuples) in blocks {
        for t in tuples {
            m.insert(&name, t).map_err(|e| err(line, e.to_string()))?;
        }
    }
    Ok(m)
}

pub fn write_model(m: &Model) -> String {
    let mut out = format!("domain {}\n", m.size());
    for (name, k) in m.signature().relations() {
        writeln!(out, "rel {name} arity {k}").unwrap();
        for t in m.relation(name).into_iter().flatten() {
            out.push_str(&row_text(t));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

/// Parses a team. Elements are checked against `size` when given.
pub fn parse_team(text: &str, size: Option<usize>) -> Result<Team, StructureError> {
    let mut it = lines(text);
    let (line, first) = it.next().ok_or_else(|| err(1, "empty team file"))?;
    let mut words = first.split_whitespace();
    if words.next() != Some("vars") {
        return Err(err(line, "expected `vars x y ...`"));
    }
    let vs: Vec<Var> = words.map(Var::new).collect();
    if let Some(v) = vs.iter().find(|v| !is_variable(v.as_str())) {
        return Err(err(line, format!("invalid variable name `{v}`")));
    }
    let mut t = Team::new(vs).map_err(|e| err(line, e.to_string()))?;
    for (line, l) in it {
        let row = tuple(line, l)?;
        if let (Some(n), Some(&e)) = (size, row.iter().find(|&&e| Some(e) >= size)) {
            return Err(err(line, format!("element {e} is outside the domain of size {n}")));
        }
        t.insert_row(row).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(t)
}

pub fn write_team(t: &Team) -> String {
    let mut out = String::from("vars");
    for v in t.vars() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for r in t.rows() {
        out.push_str(&row_text(r));
        out.push('\n');
    }
    out
}

fn row_text(r: &[Elem]) -> String {
    if r.is_empty() {
        "()".to_string()
    } else {
        r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn is_variable(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase()) && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::vars;

    #[test]
    fn model_round_trip() {
        let text = "# a small graph\ndomain 3\nrel R arity 2\n0 1\n2 2\nend\nrel Z arity 0\n()\nend\n";
        let m = parse_model(text, None).unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.holds("R", &[0, 1]), Some(true));
        assert_eq!(m.holds("R", &[1, 0]), Some(false));
        assert_eq!(m.holds("Z", &[]), Some(true));
        assert_eq!(parse_model(&write_model(&m), None).unwrap(), m);
    }

    #[test]
    fn model_checked_against_signature() {
        let sig = Signature::new([("R", 1)]).unwrap();
        assert!(parse_model("domain 2\nrel R arity 2\nend\n", Some(&sig)).is_err());
        assert!(parse_model("domain 2\n", Some(&sig)).is_err());
        assert!(parse_model("domain 2\nrel R arity 1\n5\nend\n", Some(&sig)).is_err());
        assert!(parse_model("domain 2\nrel R arity 1\n1\n", Some(&sig)).is_err());
        assert!(parse_model("domain 0\n", None).is_err());
    }

    #[test]
    fn team_round_trip() {
        let t = parse_team("vars x y\n0 1\n0 0\n", Some(2)).unwrap();
        assert_eq!(t.vars(), &vars(&["x", "y"])[..]);
        assert_eq!(t.len(), 2);
        assert_eq!(parse_team(&write_team(&t), None).unwrap(), t);
        let unit = parse_team("vars\n()\n", None).unwrap();
        assert_eq!(unit, Team::unit());
        assert_eq!(parse_team("vars\n", None).unwrap(), Team::empty());
        assert!(parse_team("vars x\n0 1\n", None).is_err());
        assert!(parse_team("vars x\n3\n", Some(2)).is_err());
        assert!(parse_team("vars x x\n", None).is_err());
    }
}

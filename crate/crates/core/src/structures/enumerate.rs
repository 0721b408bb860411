use crate::syntax::{Signature, Var};

use super::model::{Elem, Model};
use super::team::{decode_lex, Team};
use super::StructureError;

/// Teams over `|M|^|V|` assignments are enumerated only up to this many assignments by default.
pub const DEFAULT_TEAM_UNIVERSE_LIMIT: usize = 16;
/// Cap on the total number of candidate tuples across all relations of a signature.
pub const MODEL_BITS_LIMIT: usize = 24;

/// All teams over `vars` for a domain of `size` elements, in subset rank
/// order: assignments are ranked lexicographically and subsets by the
/// binary number whose bit `i` selects assignment `i`. The empty team comes first.
pub fn enumerate_teams(size: usize, vars: &[Var], limit: usize) -> Result<TeamIter, StructureError> {
    let universe = team_universe(size, vars.len(), limit)?;
    Team::new(vars.to_vec())?;
    let rows = (0..universe).map(|i| decode_lex(i, vars.len(), size)).collect();
    Ok(TeamIter { vars: vars.to_vec(), rows, next: 0, end: 1u64 << universe })
}

/// Same as [`enumerate_teams`] but skips the empty team.
pub fn enumerate_nonempty_teams(size: usize, vars: &[Var], limit: usize) -> Result<impl Iterator<Item = Team>, StructureError> {
    Ok(enumerate_teams(size, vars, limit)?.skip(1))
}

/// Number of assignments over `width` variables, checked against `limit`.
pub fn team_universe(size: usize, width: usize, limit: usize) -> Result<usize, StructureError> {
    let universe = size.checked_pow(width as u32).filter(|&u| u <= limit.min(62));
    universe.ok_or(StructureError::LimitExceeded {
        what: "team universe",
        size: size.saturating_pow(width as u32),
        limit: limit.min(62),
    })
}

pub struct TeamIter {
    vars: Vec<Var>,
    rows: Vec<Vec<Elem>>,
    next: u64,
    end: u64,
}

impl Iterator for TeamIter {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let rows = self.rows.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| r.clone());
        Some(Team::from_rows(self.vars.clone(), rows).expect("rows have the team's width"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

/// Options for model enumeration.
#[derive(Clone, Copy, Debug, Default)]
pub struct ModelEnumeration {
    /// Keep only the lexicographically least member of each isomorphism class.
    pub iso_reduction: bool,
}

/// All models of `sig` over the domain `0..size`.
pub fn enumerate_models(sig: &Signature, size: usize) -> Result<Vec<Model>, StructureError> {
    enumerate_models_with(sig, size, ModelEnumeration::default())
}

pub fn enumerate_models_with(sig: &Signature, size: usize, opts: ModelEnumeration) -> Result<Vec<Model>, StructureError> {
    if size == 0 {
        return Err(StructureError::EmptyDomain);
    }
    let mut slots: Vec<(String, Vec<Elem>)> = Vec::new();
    for (name, arity) in sig.relations() {
        let count = size.checked_pow(arity as u32).unwrap_or(usize::MAX);
        if count > MODEL_BITS_LIMIT {
            return Err(StructureError::LimitExceeded { what: "model tuples", size: count, limit: MODEL_BITS_LIMIT });
        }
        for i in 0..count {
            slots.push((name.to_string(), decode_lex(i, arity, size)));
        }
    }
    if slots.len() > MODEL_BITS_LIMIT {
        return Err(StructureError::LimitExceeded { what: "model tuples", size: slots.len(), limit: MODEL_BITS_LIMIT });
    }
    let perms = if opts.iso_reduction { permutations(size) } else { Vec::new() };
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        if opts.iso_reduction && !is_canonical(mask, &slots, &perms) {
            continue;
        }
        let mut m = Model::new(size, sig.clone())?;
        for (i, (rel, tuple)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m.insert(rel, tuple.clone())?;
            }
        }
        out.push(m);
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<Elem>> {
    fn go(prefix: &mut Vec<Elem>, n: usize, out: &mut Vec<Vec<Elem>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for e in 0..n {
            if !prefix.contains(&e) {
                prefix.push(e);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn is_canonical(mask: u64, slots: &[(String, Vec<Elem>)], perms: &[Vec<Elem>]) -> bool {
    perms.iter().all(|p| {
        let mut image = 0u64;
        for (i, (rel, tuple)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let moved: Vec<Elem> = tuple.iter().map(|&e| p[e]).collect();
                let j = slots.iter().position(|(r, t)| r == rel && *t == moved).expect("permutation stays in range");
                image |= 1 << j;
            }
        }
        mask <= image
    })
}

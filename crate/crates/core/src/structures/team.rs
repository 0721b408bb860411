use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{Formula, Var};

use super::model::{Elem, Model};
use super::tarski::tarski_eval;
use super::StructureError;

/// A single assignment `s : V -> M`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<Var, Elem>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn get(&self, v: &Var) -> Option<Elem> {
        self.0.get(v).copied()
    }

    pub fn set(&mut self, v: Var, e: Elem) {
        self.0.insert(v, e);
    }

    /// `s[e/v]`
    pub fn updated(&self, v: &Var, e: Elem) -> Assignment {
        let mut s = self.clone();
        s.set(v.clone(), e);
        s
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, Elem)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }
}

impl FromIterator<(Var, Elem)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, Elem)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// A set of assignments over a common, ordered variable domain. Each row
/// lists the values of [`Team::vars`] in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Team {
    vars: Vec<Var>,
    rows: BTreeSet<Vec<Elem>>,
}

impl Team {
    pub fn new(vars: Vec<Var>) -> Result<Self, StructureError> {
        let distinct: BTreeSet<_> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(StructureError::DuplicateVariable);
        }
        Ok(Team { vars, rows: BTreeSet::new() })
    }

    /// The empty team over no variables.
    pub fn empty() -> Self {
        Team { vars: Vec::new(), rows: BTreeSet::new() }
    }

    /// `{∅}`: the team in which sentences are evaluated.
    pub fn unit() -> Self {
        Team { vars: Vec::new(), rows: [Vec::new()].into() }
    }

    pub fn from_rows(vars: Vec<Var>, rows: impl IntoIterator<Item = Vec<Elem>>) -> Result<Self, StructureError> {
        let mut t = Team::new(vars)?;
        for r in rows {
            t.insert_row(r)?;
        }
        Ok(t)
    }

    /// The full team `{∅}[M/v1]...[M/vk]`.
    pub fn full(vars: Vec<Var>, size: usize) -> Result<Self, StructureError> {
        let mut t = Team::new(vars)?;
        let k = t.vars.len();
        let total = size.checked_pow(k as u32).ok_or(StructureError::LimitExceeded { what: "team", size: usize::MAX, limit: 0 })?;
        for i in 0..total {
            t.rows.insert(decode_lex(i, k, size));
        }
        Ok(t)
    }

    pub fn insert_row(&mut self, row: Vec<Elem>) -> Result<(), StructureError> {
        if row.len() != self.vars.len() {
            return Err(StructureError::RowWidth { expected: self.vars.len(), found: row.len() });
        }
        self.rows.insert(row);
        Ok(())
    }

    pub fn insert(&mut self, s: &Assignment) -> Result<(), StructureError> {
        let row = self
            .vars
            .iter()
            .map(|v| s.get(v).ok_or_else(|| StructureError::UnboundVariable(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.rows.insert(row);
        Ok(())
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn rows(&self) -> &BTreeSet<Vec<Elem>> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.rows.iter().map(|r| self.vars.iter().cloned().zip(r.iter().copied()).collect())
    }

    pub fn position(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    /// Largest element mentioned, if any.
    pub fn max_elem(&self) -> Option<Elem> {
        self.rows.iter().flat_map(|r| r.iter().copied()).max()
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.vars == other.vars && self.rows.is_subset(&other.rows)
    }

    /// The same assignments restricted to `keep` (which must be a subset of the domain).
    pub fn restrict_domain(&self, keep: &[Var]) -> Result<Team, StructureError> {
        let pos = positions(&self.vars, keep)?;
        Team::from_rows(keep.to_vec(), self.rows.iter().map(|r| pos.iter().map(|&i| r[i]).collect()))
    }

    /// Adds a variable column holding the constant `value` (used to test locality).
    pub fn with_constant_column(&self, v: Var, value: Elem) -> Result<Team, StructureError> {
        let mut vars = self.vars.clone();
        vars.push(v);
        Team::from_rows(vars, self.rows.iter().map(|r| {
            let mut r = r.clone();
            r.push(value);
            r
        }))
    }

    /// Rows kept by `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&[Elem]) -> bool) -> Team {
        Team { vars: self.vars.clone(), rows: self.rows.iter().filter(|r| pred(r)).cloned().collect() }
    }

    /// All subteams in subset rank order (empty first).
    pub fn subteams(&self) -> impl Iterator<Item = Team> + '_ {
        let rows: Vec<_> = self.rows.iter().cloned().collect();
        let n = rows.len();
        assert!(n < 63, "too many assignments to enumerate subteams");
        (0u64..(1u64 << n)).map(move |mask| Team {
            vars: self.vars.clone(),
            rows: (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()).collect(),
        })
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.assignments().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (j, (v, e)) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}:{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn decode_lex(mut index: usize, width: usize, size: usize) -> Vec<Elem> {
    let mut row = vec![0; width];
    for slot in row.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    row
}

fn positions(domain: &[Var], wanted: &[Var]) -> Result<Vec<usize>, StructureError> {
    wanted
        .iter()
        .map(|v| domain.iter().position(|w| w == v).ok_or_else(|| StructureError::UnboundVariable(v.clone())))
        .collect()
}

/// `X(v)`: the relation `{ s(v) : s ∈ X }`.
pub fn project(t: &Team, vs: &[Var]) -> Result<BTreeSet<Vec<Elem>>, StructureError> {
    let pos = positions(&t.vars, vs)?;
    Ok(t.rows.iter().map(|r| pos.iter().map(|&i| r[i]).collect()).collect())
}

/// `X↾θ`: the assignments satisfying the first-order `theta`.
pub fn restrict(m: &Model, t: &Team, theta: &Formula) -> Result<Team, StructureError> {
    if !theta.is_first_order() {
        return Err(StructureError::NotFirstOrder(theta.to_string()));
    }
    let mut out = Team { vars: t.vars.clone(), rows: BTreeSet::new() };
    for (row, s) in t.rows.iter().zip(t.assignments()) {
        if tarski_eval(m, &s, theta)? {
            out.rows.insert(row.clone());
        }
    }
    Ok(out)
}

/// `X[M/v]`. If `v` is already in the domain its column is overwritten,
/// otherwise it is appended.
pub fn universal_extend(m: &Model, t: &Team, v: &Var) -> Team {
    let mut vars = t.vars.clone();
    let pos = match t.position(v) {
        Some(p) => p,
        None => {
            vars.push(v.clone());
            vars.len() - 1
        }
    };
    let mut rows = BTreeSet::new();
    for r in &t.rows {
        for e in 0..m.size() {
            let mut r2 = r.clone();
            if pos == r2.len() {
                r2.push(e);
            } else {
                r2[pos] = e;
            }
            rows.insert(r2);
        }
    }
    Team { vars, rows }
}

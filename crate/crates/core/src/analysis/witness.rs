use rayon::prelude::*;

use crate::eval::{check_upward_closed, EvalOptions, Evaluator, Registry, UpwardClosure, CLOSURE_CHECK_LIMIT};
use crate::structures::{enumerate_models, enumerate_teams, Elem, Model, Team, DEFAULT_TEAM_UNIVERSE_LIMIT};
use crate::syntax::{Atom, Formula, Signature, Var};

use super::gamma::{nu_bound, GammaTable};
use super::AnalysisError;

/// Largest team searched for a minimal witness.
pub const WITNESS_TEAM_LIMIT: usize = 20;

/// Largest full team built by [`hierarchy_witness`].
pub const HIERARCHY_TEAM_LIMIT: usize = 16;

/// A smallest `Y ⊆ t` satisfying `f`, or `None` when no subteam does.
pub fn minimal_satisfying_subteam(m: &Model, t: &Team, f: &Formula, reg: &Registry) -> Result<Option<Team>, AnalysisError> {
    let ev = Evaluator::new(m, f, reg, EvalOptions::default())?;
    minimal_with(&ev, t)
}

fn minimal_with(ev: &Evaluator, t: &Team) -> Result<Option<Team>, AnalysisError> {
    let rows: Vec<&Vec<Elem>> = t.rows().iter().collect();
    let n = rows.len();
    if n > WITNESS_TEAM_LIMIT {
        return Err(AnalysisError::LimitExceeded { what: "witness search team", size: n, limit: WITNESS_TEAM_LIMIT });
    }
    let build = |mask: u64| Team::from_rows(t.vars().to_vec(), (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rows[i].clone()));
    for k in 0..=n {
        let mut mask: u64 = (1u64 << k) - 1;
        while mask < 1u64 << n {
            let y = build(mask)?;
            if ev.eval(&y)? {
                return Ok(Some(y));
            }
            if k == 0 {
                break;
            }
            // next mask with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub formula: Formula,
    pub model_size: usize,
    pub team: Team,
    pub nu: u64,
    pub witness: Team,
    pub holds: bool,
}

impl BoundReport {
    pub fn team_size(&self) -> usize {
        self.team.len()
    }

    pub fn witness_size(&self) -> usize {
        self.witness.len()
    }
}

/// For every model up to `max_model` and every team over the free variables
/// of `f` that satisfies it, the smallest satisfying subteam and the bound
/// `ν_f(|M|)` it should respect.
pub fn check_boundedness(f: &Formula, max_model: usize, g: &GammaTable, reg: &Registry) -> Result<Vec<BoundReport>, AnalysisError> {
    check_fragment(f, g, reg, max_model)?;
    let vars: Vec<Var> = f.free_variables().into_iter().collect();
    let sig = Signature::new(f.relation_uses()).map_err(|e| AnalysisError::InvalidArgument(e.to_string()))?;
    let mut out = Vec::new();
    for n in 1..=max_model {
        let nu = nu_bound(f, n, g)?;
        for m in enumerate_models(&sig, n)? {
            let teams: Vec<Team> = enumerate_teams(n, &vars, DEFAULT_TEAM_UNIVERSE_LIMIT)?.collect();
            let found: Vec<Option<(Team, Team)>> = teams
                .par_iter()
                .map_init(
                    || Evaluator::new(&m, f, reg, EvalOptions::default()),
                    |ev, t| -> Result<Option<(Team, Team)>, AnalysisError> {
                        let ev = ev.as_ref().map_err(|e| e.clone())?;
                        if !ev.eval(t)? {
                            return Ok(None);
                        }
                        let w = minimal_with(ev, t)?.expect("the team itself satisfies the formula");
                        Ok(Some((t.clone(), w)))
                    },
                )
                .collect::<Result<_, _>>()?;
            for (team, witness) in found.into_iter().flatten() {
                // re-check the witness with a fresh evaluation
                debug_assert!(crate::eval::eval(&m, &witness, f, reg).unwrap_or(false));
                let holds = witness.len() as u64 <= nu;
                out.push(BoundReport { formula: f.clone(), model_size: n, team, nu, witness, holds });
            }
        }
    }
    Ok(out)
}

/// Conjunction, disjunctions, quantifiers, first-order literals, constancy
/// and upward-closed atoms.
fn check_fragment(f: &Formula, g: &GammaTable, reg: &Registry, max_model: usize) -> Result<(), AnalysisError> {
    let mut err = None;
    f.visit(&mut |h| {
        if err.is_some() {
            return;
        }
        let bad = match h {
            Formula::ContraNeg(_) | Formula::IntImpl(..) | Formula::Possibly(_) | Formula::Bracket(_) => Some(crate::syntax::print(h)),
            Formula::Atom(Atom::Const(_) | Atom::NonEmpty | Atom::All(_) | Atom::Geq(..)) => None,
            Formula::Atom(a @ Atom::Custom(name, args)) => {
                if g.has_override(&a.keyword()) || args.is_empty() {
                    None
                } else {
                    match reg.get(name) {
                        None => Some(format!("unregistered dependency `{name}`")),
                        Some(spec) => {
                            let feasible = (1..=max_model).take_while(|n| n.pow(spec.arity as u32) <= CLOSURE_CHECK_LIMIT).last();
                            match feasible.map(|n| check_upward_closed(spec, n)) {
                                Some(Ok(UpwardClosure::Holds { .. })) => None,
                                Some(Ok(UpwardClosure::Counterexample { .. })) => {
                                    Some(format!("`D:{name}` is not upward closed and has no bound override"))
                                }
                                Some(Err(e)) => Some(e.to_string()),
                                None if spec.claimed_upward_closed == crate::eval::Claim::Yes => None,
                                None => Some(format!("cannot confirm that `D:{name}` is upward closed")),
                            }
                        }
                    }
                }
            }
            Formula::Atom(a) => Some(format!("atom `{}`", a.keyword())),
            _ => None,
        };
        err = bad;
    });
    match err {
        Some(msg) => Err(AnalysisError::Fragment(msg)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyReport {
    pub kprime: usize,
    pub q: usize,
    pub k: usize,
    /// Least `n` with `n^k' > q n^k`.
    pub n: usize,
    /// `q n^k`
    pub bound: usize,
    pub team_size: usize,
    pub satisfied: bool,
    pub witness_size: usize,
}

impl HierarchyReport {
    /// Every satisfying subteam is larger than the `q n^k` bound.
    pub fn separates(&self) -> bool {
        self.satisfied && self.witness_size > self.bound
    }
}

/// `all` over `k'` variables on the full team of the least domain where
/// `n^k' > q n^k`, with its smallest satisfying subteam.
pub fn hierarchy_witness(kprime: usize, q: usize, k: usize) -> Result<HierarchyReport, AnalysisError> {
    if !(kprime > k && k >= 1 && q >= 1) {
        return Err(AnalysisError::InvalidArgument(format!("need k' > k >= 1 and q >= 1, got k' = {kprime}, k = {k}, q = {q}")));
    }
    let n = (1usize..)
        .find(|&n| n.checked_pow(kprime as u32).is_none_or(|big| big > q * n.pow(k as u32)))
        .expect("n^k' outgrows q n^k");
    let team_size = n.checked_pow(kprime as u32).unwrap_or(usize::MAX);
    if team_size > HIERARCHY_TEAM_LIMIT {
        return Err(AnalysisError::LimitExceeded { what: "hierarchy team", size: team_size, limit: HIERARCHY_TEAM_LIMIT });
    }
    let vars: Vec<Var> = (1..=kprime).map(|i| Var::new(format!("x{i}"))).collect();
    let m = Model::pure(n)?;
    let team = Team::full(vars.clone(), n)?;
    let f = Formula::atom(Atom::All(vars));
    let reg = Registry::new();
    let satisfied = crate::eval::eval(&m, &team, &f, &reg)?;
    let witness = minimal_satisfying_subteam(&m, &team, &f, &reg)?;
    Ok(HierarchyReport {
        kprime,
        q,
        k,
        n,
        bound: q * n.pow(k as u32),
        team_size,
        satisfied,
        witness_size: witness.map_or(0, |w| w.len()),
    })
}

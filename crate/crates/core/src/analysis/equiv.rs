use std::fmt;

use rayon::prelude::*;

use crate::eval::{eval, EvalOptions, Evaluator, Registry};
use crate::structures::{enumerate_models, enumerate_teams, team_universe, write_model, write_team, Model, Team, DEFAULT_TEAM_UNIVERSE_LIMIT};
use crate::syntax::{Formula, Signature, Var};

use super::AnalysisError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TeamFilter {
    #[default]
    All,
    NonEmpty,
}

/// What [`equivalent`] ranges over: every model of `signature` with at
/// most `max_model` elements and every team over `vars`.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub vars: Vec<Var>,
    pub signature: Signature,
    pub max_model: usize,
    pub filter: TeamFilter,
    pub team_limit: usize,
}

impl Sweep {
    pub fn new(vars: Vec<Var>) -> Self {
        Sweep { vars, signature: Signature::empty(), max_model: 3, filter: TeamFilter::All, team_limit: DEFAULT_TEAM_UNIVERSE_LIMIT }
    }

    pub fn signature(mut self, sig: Signature) -> Self {
        self.signature = sig;
        self
    }

    pub fn max_model(mut self, n: usize) -> Self {
        self.max_model = n;
        self
    }

    pub fn nonempty(mut self) -> Self {
        self.filter = TeamFilter::NonEmpty;
        self
    }

    pub fn team_limit(mut self, limit: usize) -> Self {
        self.team_limit = limit;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: Model,
    pub team: Team,
    pub left: bool,
    pub right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Counterexample(Box<Counterexample>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub verdict: Verdict,
    /// Model sizes fully or partly swept.
    pub sizes: Vec<usize>,
    pub teams_checked: usize,
    pub filter: TeamFilter,
}

impl EquivReport {
    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.verdict {
            Verdict::Counterexample(c) => Some(c),
            Verdict::Equivalent => None,
        }
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let teams = match self.filter {
            TeamFilter::All => "teams",
            TeamFilter::NonEmpty => "nonempty teams",
        };
        match &self.verdict {
            Verdict::Equivalent => {
                writeln!(f, "equivalent ({} {teams}, |M|<={})", self.teams_checked, self.sizes.last().copied().unwrap_or(0))
            }
            Verdict::Counterexample(c) => {
                writeln!(f, "counterexample (left {}, right {})", c.left, c.right)?;
                write!(f, "{}", write_model(&c.model))?;
                write!(f, "{}", write_team(&c.team))
            }
        }
    }
}

/// Exhaustively compares `f` and `g` on every model and team of the sweep;
/// returns the first disagreement in enumeration order.
pub fn equivalent(f: &Formula, g: &Formula, sweep: &Sweep, reg: &Registry) -> Result<EquivReport, AnalysisError> {
    for v in f.free_variables().into_iter().chain(g.free_variables()) {
        if !sweep.vars.contains(&v) {
            return Err(AnalysisError::FreeVariable(v));
        }
    }
    if sweep.max_model == 0 {
        return Err(AnalysisError::InvalidArgument("the largest model size must be at least 1".into()));
    }
    let mut checked = 0;
    let mut sizes = Vec::new();
    for n in 1..=sweep.max_model {
        team_universe(n, sweep.vars.len(), sweep.team_limit)?;
        sizes.push(n);
        for m in enumerate_models(&sweep.signature, n)? {
            let teams: Vec<Team> =
                enumerate_teams(n, &sweep.vars, sweep.team_limit)?.filter(|t| sweep.filter == TeamFilter::All || !t.is_empty()).collect();
            let differs = teams
                .par_iter()
                .map_init(
                    || (Evaluator::new(&m, f, reg, EvalOptions::default()), Evaluator::new(&m, g, reg, EvalOptions::default())),
                    |(a, b), t| -> Result<bool, AnalysisError> {
                        let a = a.as_ref().map_err(|e| e.clone())?;
                        let b = b.as_ref().map_err(|e| e.clone())?;
                        Ok(a.eval(t)? != b.eval(t)?)
                    },
                )
                .position_first(|r| !matches!(r, Ok(false)));
            let Some(i) = differs else {
                checked += teams.len();
                continue;
            };
            checked += i + 1;
            // recompute from scratch: reports an error, or re-validates the disagreement
            let team = teams[i].clone();
            let left = eval(&m, &team, f, reg)?;
            let right = eval(&m, &team, g, reg)?;
            assert_ne!(left, right, "a disagreement must survive a fresh evaluation");
            let c = Counterexample { model: m, team, left, right };
            return Ok(EquivReport { verdict: Verdict::Counterexample(Box::new(c)), sizes, teams_checked: checked, filter: sweep.filter });
        }
    }
    Ok(EquivReport { verdict: Verdict::Equivalent, sizes, teams_checked: checked, filter: sweep.filter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, vars};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::empty()).unwrap()
    }

    #[test]
    fn reflexive() {
        let g = f("exists y (dep(x; y) & y != x)");
        assert!(equivalent(&g, &g, &Sweep::new(vars(&["x"])), &Registry::new()).unwrap().is_equivalent());
    }

    #[test]
    fn ne_and_totality() {
        let r = equivalent(&f("NE"), &f("forall q all(q)"), &Sweep::new(vars(&["x"])), &Registry::new()).unwrap();
        assert!(r.is_equivalent());
        assert_eq!(r.sizes, [1, 2, 3]);
    }

    #[test]
    fn finds_counterexample() {
        let r = equivalent(&f("const(x)"), &f("NE"), &Sweep::new(vars(&["x"])), &Registry::new()).unwrap();
        let c = r.counterexample().unwrap();
        assert!(c.team.is_empty());
        assert!(c.left && !c.right);
        assert!(r.to_string().starts_with("counterexample"));
        let r = equivalent(&f("const(x)"), &f("NE"), &Sweep::new(vars(&["x"])).nonempty(), &Registry::new()).unwrap();
        assert_eq!(r.counterexample().unwrap().team.len(), 2);
    }

    #[test]
    fn free_variables_must_be_swept() {
        let r = equivalent(&f("x = y"), &f("top"), &Sweep::new(vars(&["x"])), &Registry::new());
        assert!(matches!(r, Err(AnalysisError::FreeVariable(_))));
    }
}

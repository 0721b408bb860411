use std::collections::BTreeSet;

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use teamlogic::analysis::{equivalent, Sweep};
use teamlogic::eval::{eval, DependencySpec, Registry, DEFINING_RELATION};
use teamlogic::structures::{enumerate_models, enumerate_teams, restrict, Model, Team, DEFAULT_TEAM_UNIVERSE_LIMIT};
use teamlogic::syntax::{print, Atom, Formula, Signature, Var};
use teamlogic::transforms::*;

use crate::{read_formula, sweep_vars, write_counterexample, Common};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Name {
    /// FORMULA: replace dependency atoms by top.
    Flatten,
    /// FORMULA: negate a first-order formula.
    Dualneg,
    /// FORMULA THETA: restrict FORMULA to the assignments satisfying THETA.
    Restrict,
    /// FORMULA: classical disjunctive form, one disjunct per line.
    Dnf,
    /// FORMULA: remove `~`.
    Negelim,
    /// V W: dependence from constancy and `~`; tuples are comma separated.
    Depdef,
    /// [totality|neg]: NE from totality or from `~`.
    Nedef,
    /// KIND K V: counting atom (eq, neq, co_eq, co_neq) or formula (le, ge, co_le, co_ge).
    Countdef,
    /// DESCRIPTION V: unary dependency, e.g. `eq:1 | co_eq:0 & neq:2`.
    CompileUnary,
    /// FORMULA: hoist brackets, one form per line.
    Brackets,
}

#[derive(Args)]
pub struct TransformArgs {
    #[arg(value_enum)]
    name: Name,
    args: Vec<String>,
    /// Check the result on every model and team up to this size.
    #[arg(long, value_name = "N")]
    verify: Option<usize>,
    /// Variables of the swept teams for --verify.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[command(flatten)]
    common: Common,
}

/// What the output must satisfy on each swept team.
enum Check {
    /// Same value as the formula, on all or only on nonempty teams.
    Equivalent { target: Formula, nonempty: bool },
    /// `f` implies the output.
    Implied(Formula),
    /// The output holds iff no assignment satisfies `f`.
    Negation(Formula),
    /// The output holds iff `psi` holds on the part satisfying `theta`.
    Restriction { psi: Formula, theta: Formula },
}

fn arg<'a>(a: &'a TransformArgs, i: usize, what: &str) -> Result<&'a str> {
    a.args.get(i).map(String::as_str).ok_or_else(|| anyhow!("{:?} needs {what}", a.name))
}

fn var_list(s: &str) -> Vec<Var> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty()).map(Var::new).collect()
}

fn count_literal(s: &str) -> Result<CountLiteral> {
    let (kind, k) = s.trim().split_once(':').ok_or_else(|| anyhow!("`{s}`: expected KIND:K"))?;
    let k: usize = k.parse().with_context(|| format!("`{s}`: bad count"))?;
    Ok(match kind {
        "eq" => CountLiteral::PosCount(k),
        "neq" => CountLiteral::NegPosCount(k),
        "co_eq" => CountLiteral::CoCount(k),
        "co_neq" => CountLiteral::NegCoCount(k),
        _ => bail!("`{kind}`: expected eq, neq, co_eq or co_neq"),
    })
}

/// `|` separates disjuncts, `&` conjuncts; the empty text never holds.
fn description(s: &str) -> Result<UnaryDepDescription> {
    let disjuncts = s
        .split('|')
        .filter(|d| !d.trim().is_empty())
        .map(|d| d.split('&').map(count_literal).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(UnaryDepDescription::new(disjuncts))
}

pub fn run(a: &TransformArgs) -> Result<bool> {
    let sig = a.common.signature()?;
    let mut reg = a.common.registry()?;
    let formula = |i| -> Result<Formula> { read_formula(arg(a, i, "a formula")?, &sig) };
    let (outputs, check): (Vec<Formula>, Check) = match a.name {
        Name::Flatten => {
            let f = formula(0)?;
            (vec![flatten(&f)?], Check::Implied(f))
        }
        Name::Dualneg => {
            let f = formula(0)?;
            (vec![dual_negate(&f)?], Check::Negation(f))
        }
        Name::Restrict => {
            let (psi, theta) = (formula(0)?, formula(1)?);
            (vec![restrict_formula(&psi, &theta)?], Check::Restriction { psi, theta })
        }
        Name::Dnf => {
            let f = formula(0)?;
            (to_classical_dnf(&f)?, Check::Equivalent { target: f, nonempty: false })
        }
        Name::Negelim => {
            let f = formula(0)?;
            (vec![neg_eliminate(&f)?], Check::Equivalent { target: f, nonempty: false })
        }
        Name::Brackets => {
            let f = formula(0)?;
            let forms = extract_brackets(&f)?;
            (forms.iter().map(BracketForm::to_formula).collect(), Check::Equivalent { target: f, nonempty: false })
        }
        Name::Depdef => {
            let (v, w) = (var_list(arg(a, 0, "the determining variables")?), var_list(arg(a, 1, "the determined variables")?));
            (vec![dep_via_neg_const(&v, &w)], Check::Equivalent { target: Formula::atom(Atom::Dep(v, w)), nonempty: false })
        }
        Name::Nedef => {
            let out = match a.args.first().map(String::as_str).unwrap_or("totality") {
                "totality" => ne_via_totality(),
                "neg" => ne_via_neg(),
                other => bail!("`{other}`: expected totality or neg"),
            };
            (vec![out], Check::Equivalent { target: Formula::ne(), nonempty: false })
        }
        Name::Countdef => {
            let kind = arg(a, 0, "a kind")?;
            let k: usize = arg(a, 1, "a count")?.parse().context("bad count")?;
            let v = Var::new(arg(a, 2, "a variable")?);
            let (out, target) = match kind {
                "eq" => (counting_atom_definition(CountAtom::Eq, k, &v), Some(Atom::CountEq(v.clone(), k))),
                "neq" => (counting_atom_definition(CountAtom::Neq, k, &v), Some(Atom::CountNeq(v.clone(), k))),
                "co_eq" => (counting_atom_definition(CountAtom::CoEq, k, &v), Some(Atom::CoCountEq(v.clone(), k))),
                "co_neq" => (counting_atom_definition(CountAtom::CoNeq, k, &v), Some(Atom::CoCountNeq(v.clone(), k))),
                "le" => (counting_formula(CountBound::Le, k, &v), None),
                "ge" => (counting_formula(CountBound::Ge, k, &v), None),
                "co_le" => (counting_formula(CountBound::CoLe, k, &v), None),
                "co_ge" => (counting_formula(CountBound::CoGe, k, &v), None),
                other => bail!("`{other}`: expected eq, neq, co_eq, co_neq, le, ge, co_le or co_ge"),
            };
            let target = match target {
                Some(t) => Formula::atom(t),
                None if a.verify.is_some() => bail!("--verify needs a counting atom kind (eq, neq, co_eq, co_neq)"),
                None => Formula::top(),
            };
            (vec![out], Check::Equivalent { target, nonempty: true })
        }
        Name::CompileUnary => {
            let d = description(arg(a, 0, "a description")?)?;
            let v = Var::new(arg(a, 1, "a variable")?);
            let name = (0..).map(|i| format!("unary{i}")).find(|n| reg.get(n).is_none()).expect("a free name");
            reg.register(DependencySpec::new(name.clone(), 1, d.sentence(DEFINING_RELATION)))?;
            let target = Formula::atom(Atom::Custom(name, vec![v.clone()]));
            (vec![compile_unary_dependency(&d, &v)], Check::Equivalent { target, nonempty: true })
        }
    };
    for out in &outputs {
        println!("{}", print(out));
    }
    let Some(n) = a.verify else { return Ok(true) };
    ensure!(n >= 1, "--verify needs a size of at least 1");
    let joined = Formula::big_classical_or(outputs.iter().cloned());
    verify(&joined, &check, n, a.vars.clone(), &sig, &reg)
}

fn verify(out: &Formula, check: &Check, n: usize, vars: Option<Vec<String>>, sig: &Signature, reg: &Registry) -> Result<bool> {
    let source = match check {
        Check::Equivalent { target, .. } | Check::Implied(target) | Check::Negation(target) => vec![target.clone()],
        Check::Restriction { psi, theta } => vec![psi.clone(), theta.clone()],
    };
    let mut refs: Vec<&Formula> = source.iter().collect();
    refs.push(out);
    let vars = sweep_vars(vars, &refs);
    let free: BTreeSet<Var> = refs.iter().flat_map(|f| f.free_variables()).collect();
    if let Some(v) = free.iter().find(|v| !vars.contains(v)) {
        bail!("free variable `{v}` is not among the swept variables");
    }
    let nonempty = matches!(check, Check::Equivalent { nonempty: true, .. });
    let scope = if nonempty { "nonempty teams" } else { "all teams" };
    if let Check::Equivalent { target, nonempty } = check {
        let mut sweep = Sweep::new(vars).signature(sig.clone()).max_model(n);
        if *nonempty {
            sweep = sweep.nonempty();
        }
        let report = equivalent(out, target, &sweep, reg)?;
        return match report.counterexample() {
            None => {
                println!("verified ({scope}, |M|<={n})");
                Ok(true)
            }
            Some(c) => {
                println!("verification failed (output {}, expected {})", c.left, c.right);
                write_counterexample(&c.model, &c.team, None, None)?;
                Ok(false)
            }
        };
    }
    for size in 1..=n {
        for m in enumerate_models(sig, size)? {
            for t in enumerate_teams(size, &vars, DEFAULT_TEAM_UNIVERSE_LIMIT)? {
                if !holds(out, check, &m, &t, reg)? {
                    println!("verification failed");
                    write_counterexample(&m, &t, None, None)?;
                    return Ok(false);
                }
            }
        }
    }
    println!("verified ({scope}, |M|<={n})");
    Ok(true)
}

fn holds(out: &Formula, check: &Check, m: &Model, t: &Team, reg: &Registry) -> Result<bool> {
    let value = eval(m, t, out, reg)?;
    Ok(match check {
        Check::Implied(f) => !eval(m, t, f, reg)? || value,
        Check::Negation(f) => value == restrict(m, t, f)?.is_empty(),
        Check::Restriction { psi, theta } => value == eval(m, &restrict(m, t, theta)?, psi, reg)?,
        Check::Equivalent { .. } => unreachable!("handled by the equivalence sweep"),
    })
}

//! `teamlogic`: evaluate, rewrite and compare team-semantics formulas.

mod transform;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use teamlogic::analysis::{check_boundedness, equivalent, hierarchy_witness, Bound, GammaTable, Sweep};
use teamlogic::eval::{eval, DependencySpec, Registry};
use teamlogic::structures::{parse_model, parse_team, write_model, write_team};
use teamlogic::syntax::{parse, print, Formula, Signature, Var};
use teamlogic::{Model, Team};

#[derive(Parser)]
#[command(name = "teamlogic", version, about = "First-order team semantics: evaluation, rewriting and equivalence checking")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// Relation symbol of the signature, `NAME:ARITY` (repeatable).
    #[arg(long = "rel", value_name = "NAME:ARITY")]
    rels: Vec<String>,
    /// Custom dependency `NAME:ARITY=SENTENCE` over the relation `R` (repeatable).
    #[arg(long = "custom", value_name = "NAME:ARITY=SENTENCE")]
    customs: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula on a model and a team; exit 0 if true, 1 if false.
    Eval {
        formula: String,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Team file; the team containing only the empty assignment when omitted.
        #[arg(long)]
        team: Option<PathBuf>,
        /// Use the model of this size with empty relations instead of a model file.
        #[arg(long, conflicts_with = "model")]
        domain: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a rewriter and print the result.
    Transform(transform::TransformArgs),
    /// Compare two formulas on every model and team up to a size; exit 0 if equivalent, 1 otherwise.
    Equiv {
        left: String,
        right: String,
        /// Variables of the swept teams; the free variables of both formulas by default.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        max_model: usize,
        #[arg(long)]
        nonempty_teams: bool,
        /// Where to write the counterexample model.
        #[arg(long)]
        out_model: Option<PathBuf>,
        /// Where to write the counterexample team.
        #[arg(long)]
        out_team: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Witness-size bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Parse a formula and print it back.
    Parse {
        formula: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Check that every satisfying team has a satisfying subteam within the bound.
    Check {
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_model: usize,
        /// Bound for an atom keyword, `NAME=c`, `NAME=cn`, `NAME=n^k`, `NAME=const:c`, `NAME=lin:c` (repeatable).
        #[arg(long = "gamma", value_name = "NAME=BOUND")]
        gammas: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Totality over k' variables on the least domain where n^k' > q n^k.
    Hierarchy { kprime: usize, k: usize, q: usize },
}

/// Outcome of a command: `Ok(true)` exits 0, `Ok(false)` exits 1.
type Verdict = Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Eval { formula, model, team, domain, common } => cmd_eval(&formula, model, team, domain, &common),
        Cmd::Transform(args) => transform::run(&args),
        Cmd::Equiv { left, right, vars, max_model, nonempty_teams, out_model, out_team, common } => {
            cmd_equiv(&left, &right, vars, max_model, nonempty_teams, out_model, out_team, &common)
        }
        Cmd::Bounds(BoundsCmd::Check { formula, max_model, gammas, common }) => cmd_bounds_check(&formula, max_model, &gammas, &common),
        Cmd::Bounds(BoundsCmd::Hierarchy { kprime, k, q }) => cmd_hierarchy(kprime, k, q),
        Cmd::Parse { formula, common } => cmd_parse(&formula, &common),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl Common {
    pub fn signature(&self) -> Result<Signature> {
        let mut sig = Signature::empty();
        for r in &self.rels {
            let (name, k) = r.split_once(':').ok_or_else(|| anyhow!("`--rel {r}`: expected NAME:ARITY"))?;
            let k: usize = k.parse().with_context(|| format!("`--rel {r}`: bad arity"))?;
            sig.add(name, k)?;
        }
        Ok(sig)
    }

    pub fn registry(&self) -> Result<Registry> {
        let mut reg = Registry::new();
        for c in &self.customs {
            let (head, body) = c.split_once('=').ok_or_else(|| anyhow!("`--custom {c}`: expected NAME:ARITY=SENTENCE"))?;
            let (name, k) = head.split_once(':').ok_or_else(|| anyhow!("`--custom {c}`: expected NAME:ARITY=SENTENCE"))?;
            let k: usize = k.trim().parse().with_context(|| format!("`--custom {c}`: bad arity"))?;
            reg.register(DependencySpec::parse(name.trim(), k, body)?)?;
        }
        Ok(reg)
    }
}

/// Formula text, or the contents of a file for `@path`.
pub fn formula_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(arg.to_string()),
    }
}

pub fn read_formula(arg: &str, sig: &Signature) -> Result<Formula> {
    let text = formula_text(arg)?;
    parse(text.trim(), sig).with_context(|| format!("parsing `{}`", text.trim()))
}

fn cmd_eval(formula: &str, model: Option<PathBuf>, team: Option<PathBuf>, domain: Option<usize>, common: &Common) -> Verdict {
    let declared = if common.rels.is_empty() { None } else { Some(common.signature()?) };
    let m = match (model, domain) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            parse_model(&text, declared.as_ref()).with_context(|| format!("in {}", path.display()))?
        }
        (None, Some(n)) => Model::new(n, declared.unwrap_or_default())?,
        (None, None) => bail!("give a model file with --model or a domain size with --domain"),
    };
    let t = match team {
        Some(path) => {
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            parse_team(&text, Some(m.size())).with_context(|| format!("in {}", path.display()))?
        }
        None => Team::unit(),
    };
    let f = read_formula(formula, m.signature())?;
    let value = eval(&m, &t, &f, &common.registry()?)?;
    println!("{value}");
    Ok(value)
}

pub fn sweep_vars(given: Option<Vec<String>>, fs: &[&Formula]) -> Vec<Var> {
    match given {
        Some(vs) => vs.into_iter().filter(|v| !v.is_empty()).map(Var::new).collect(),
        None => {
            let mut all = std::collections::BTreeSet::new();
            for f in fs {
                all.extend(f.free_variables());
            }
            all.into_iter().collect()
        }
    }
}

pub fn write_counterexample(m: &Model, t: &Team, out_model: Option<&PathBuf>, out_team: Option<&PathBuf>) -> Result<()> {
    print!("{}", write_model(m));
    print!("{}", write_team(t));
    if let Some(p) = out_model {
        fs::write(p, write_model(m)).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = out_team {
        fs::write(p, write_team(t)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_equiv(
    left: &str,
    right: &str,
    vars: Option<Vec<String>>,
    max_model: usize,
    nonempty: bool,
    out_model: Option<PathBuf>,
    out_team: Option<PathBuf>,
    common: &Common,
) -> Verdict {
    let sig = common.signature()?;
    let (f, g) = (read_formula(left, &sig)?, read_formula(right, &sig)?);
    let mut sweep = Sweep::new(sweep_vars(vars, &[&f, &g])).signature(sig).max_model(max_model);
    if nonempty {
        sweep = sweep.nonempty();
    }
    let report = equivalent(&f, &g, &sweep, &common.registry()?)?;
    match report.counterexample() {
        None => {
            print!("{report}");
            Ok(true)
        }
        Some(c) => {
            println!("counterexample (left {}, right {})", c.left, c.right);
            write_counterexample(&c.model, &c.team, out_model.as_ref(), out_team.as_ref())?;
            Ok(false)
        }
    }
}

fn cmd_bounds_check(formula: &str, max_model: usize, gammas: &[String], common: &Common) -> Verdict {
    let f = read_formula(formula, &common.signature()?)?;
    let mut table = GammaTable::new();
    for g in gammas {
        let (name, b) = g.split_once('=').ok_or_else(|| anyhow!("`--gamma {g}`: expected NAME=BOUND"))?;
        table.set(name.trim(), b.parse::<Bound>()?);
    }
    let reports = check_boundedness(&f, max_model, &table, &common.registry()?)?;
    let mut ok = true;
    for n in 1..=max_model {
        let at: Vec<_> = reports.iter().filter(|r| r.model_size == n).collect();
        let nu = teamlogic::analysis::nu_bound(&f, n, &table)?;
        let widest = at.iter().map(|r| r.witness_size()).max().unwrap_or(0);
        let bad = at.iter().filter(|r| !r.holds).count();
        println!("|M|={n} nu={nu} satisfying={} largest_witness={widest} violations={bad}", at.len());
        for r in at.iter().filter(|r| !r.holds) {
            ok = false;
            print!("violation: witness {} > {}\n{}", r.witness_size(), r.nu, write_team(&r.team));
        }
    }
    println!("{}", if ok { "all hold" } else { "bound violated" });
    Ok(ok)
}

fn cmd_hierarchy(kprime: usize, k: usize, q: usize) -> Verdict {
    let r = hierarchy_witness(kprime, q, k)?;
    println!("n={} team={} all_holds={} witness={} bound={}", r.n, r.team_size, r.satisfied, r.witness_size, r.bound);
    println!("{}", if r.separates() { format!("witness {} > {}", r.witness_size, r.bound) } else { "no separation".into() });
    Ok(r.separates())
}

fn cmd_parse(formula: &str, common: &Common) -> Verdict {
    let sig = common.signature()?;
    let f = read_formula(formula, &sig)?;
    let text = print(&f);
    let again = parse(&text, &sig)?;
    if again != f {
        bail!("printed form `{text}` does not parse back to the same formula");
    }
    println!("{text}");
    Ok(true)
}

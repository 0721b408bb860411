use std::fmt::{self, Write};

use super::ast::{Atom, Formula, Var};

// Binding strength, loosest first. Mirrors the parser's grammar levels.
const IMPL: u8 = 0;
const COR: u8 = 1;
const TOR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::IntImpl(..) => IMPL,
        Formula::ClassicalOr(..) => COR,
        Formula::Or(..) => TOR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// Renders a formula in the concrete syntax accepted by [`super::parse`].
pub fn print(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, IMPL).expect("writing to a String cannot fail");
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, IMPL)
    }
}

fn write_tuple(out: &mut impl Write, vs: &[Var]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.write_char(' ')?;
        }
        write!(out, "{v}")?;
    }
    Ok(())
}

fn write_args(out: &mut impl Write, vs: &[Var]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        write!(out, "{v}")?;
    }
    Ok(())
}

fn write_sides(out: &mut impl Write, sides: &[&[Var]]) -> fmt::Result {
    for (i, side) in sides.iter().enumerate() {
        if i > 0 {
            out.write_str("; ")?;
        }
        write_tuple(out, side)?;
    }
    Ok(())
}

fn write_atom(out: &mut impl Write, a: &Atom) -> fmt::Result {
    if let Atom::NonEmpty = a {
        return out.write_str("NE");
    }
    write!(out, "{}(", a.keyword())?;
    match a {
        Atom::Const(v) | Atom::All(v) | Atom::NCon(v) => write_tuple(out, v)?,
        Atom::Custom(_, v) => write_args(out, v)?,
        Atom::Dep(v, w) | Atom::Inc(v, w) | Atom::NDep(v, w) | Atom::NInc(v, w) => write_sides(out, &[v, w])?,
        Atom::Ind(u, v, w) | Atom::NInd(u, v, w) => write_sides(out, &[u, v, w])?,
        Atom::Geq(v, n) => {
            write_tuple(out, v)?;
            write!(out, ", {n}")?;
        }
        Atom::CountEq(v, k) | Atom::CountNeq(v, k) | Atom::CoCountEq(v, k) | Atom::CoCountNeq(v, k) => {
            write!(out, "{v}, {k}")?
        }
        Atom::NonEmpty => unreachable!(),
    }
    out.write_char(')')
}

/// Operands of `~` and `<>` are written bare only when that cannot be misread.
fn bare_operand(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Rel(..)
            | Formula::NegRel(..)
            | Formula::Atom(_)
            | Formula::Bracket(_)
            | Formula::ContraNeg(_)
            | Formula::Possibly(_)
    )
}

fn write_formula(out: &mut impl Write, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.write_char('(')?;
        write_formula(out, f, IMPL)?;
        return out.write_char(')');
    }
    match f {
        Formula::Rel(r, args) => {
            write!(out, "{r}(")?;
            write_args(out, args)?;
            out.write_char(')')
        }
        Formula::NegRel(r, args) => {
            write!(out, "!{r}(")?;
            write_args(out, args)?;
            out.write_char(')')
        }
        Formula::Eq(a, b) => write!(out, "{a} = {b}"),
        Formula::Neq(a, b) => write!(out, "{a} != {b}"),
        Formula::IntImpl(a, b) => {
            write_formula(out, a, COR)?;
            out.write_str(" -> ")?;
            write_formula(out, b, IMPL)
        }
        Formula::ClassicalOr(a, b) => {
            write_formula(out, a, COR)?;
            out.write_str(" || ")?;
            write_formula(out, b, TOR)
        }
        Formula::Or(a, b) => {
            write_formula(out, a, TOR)?;
            out.write_str(" | ")?;
            write_formula(out, b, AND)
        }
        Formula::And(a, b) => {
            write_formula(out, a, AND)?;
            out.write_str(" & ")?;
            write_formula(out, b, UNARY)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let q = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            write!(out, "{q} {v} ")?;
            if matches!(**body, Formula::Exists(..) | Formula::Forall(..)) {
                write_formula(out, body, UNARY)
            } else {
                out.write_char('(')?;
                write_formula(out, body, IMPL)?;
                out.write_char(')')
            }
        }
        Formula::ContraNeg(a) | Formula::Possibly(a) => {
            out.write_str(if matches!(f, Formula::ContraNeg(_)) { "~" } else { "<>" })?;
            if bare_operand(a) {
                write_formula(out, a, UNARY)
            } else {
                out.write_char('(')?;
                write_formula(out, a, IMPL)?;
                out.write_char(')')
            }
        }
        Formula::Bracket(a) => {
            out.write_char('[')?;
            write_formula(out, a, IMPL)?;
            out.write_char(']')
        }
        Formula::Atom(a) => write_atom(out, a),
    }
}

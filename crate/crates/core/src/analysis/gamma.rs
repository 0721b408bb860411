use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{Atom, Formula};

use super::AnalysisError;

/// A bound as a function of the domain size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Constant(u64),
    /// `c * n`
    Linear(u64),
    /// `n^k`
    Power(u32),
}

impl Bound {
    pub fn at(self, n: usize) -> u64 {
        let n = n as u64;
        match self {
            Bound::Constant(c) => c,
            Bound::Linear(c) => c.saturating_mul(n),
            Bound::Power(k) => n.saturating_pow(k),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Constant(c) => write!(f, "{c}"),
            Bound::Linear(1) => write!(f, "n"),
            Bound::Linear(c) => write!(f, "{c}n"),
            Bound::Power(k) => write!(f, "n^{k}"),
        }
    }
}

impl FromStr for Bound {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || AnalysisError::BadBound(s.to_string());
        if let Some(c) = t.strip_prefix("const:") {
            return c.parse().map(Bound::Constant).map_err(|_| bad());
        }
        if let Some(c) = t.strip_prefix("lin:") {
            return c.parse().map(Bound::Linear).map_err(|_| bad());
        }
        if let Some(k) = t.strip_prefix("pow:").or_else(|| t.strip_prefix("n^")) {
            return k.parse().map(Bound::Power).map_err(|_| bad());
        }
        if let Some(c) = t.strip_suffix('n') {
            let c = c.trim().trim_end_matches('*').trim();
            return if c.is_empty() { Ok(Bound::Linear(1)) } else { c.parse().map(Bound::Linear).map_err(|_| bad()) };
        }
        t.parse().map(Bound::Constant).map_err(|_| bad())
    }
}

/// Bounds per atom. Without an override: NE is 1, `geq(v, k)` is `k`,
/// `all` over `k` variables and `k`-ary customs are `n^k`, constancy and
/// dependence are 0.
#[derive(Clone, Debug, Default)]
pub struct GammaTable {
    overrides: BTreeMap<String, Bound>,
}

impl GammaTable {
    pub fn new() -> Self {
        GammaTable::default()
    }

    /// Overrides the bound for every atom with this keyword (`NE`, `all`, `D:name`, ...).
    pub fn set(&mut self, keyword: impl Into<String>, b: Bound) {
        self.overrides.insert(keyword.into(), b);
    }

    pub fn with(mut self, keyword: impl Into<String>, b: Bound) -> Self {
        self.set(keyword, b);
        self
    }

    pub fn has_override(&self, keyword: &str) -> bool {
        self.overrides.contains_key(keyword)
    }

    pub fn gamma(&self, a: &Atom) -> Option<Bound> {
        if let Some(b) = self.overrides.get(&a.keyword()) {
            return Some(*b);
        }
        match a {
            Atom::NonEmpty => Some(Bound::Constant(1)),
            Atom::Geq(_, k) => Some(Bound::Constant(*k as u64)),
            Atom::All(v) | Atom::Custom(_, v) => Some(Bound::Power(v.len() as u32)),
            Atom::Const(_) | Atom::Dep(..) => Some(Bound::Constant(0)),
            _ => None,
        }
    }
}

/// `Σ k_i γ_i(n)` over the atom occurrences of `f`; first-order parts add nothing.
pub fn nu_bound(f: &Formula, n: usize, g: &GammaTable) -> Result<u64, AnalysisError> {
    let mut total = 0u64;
    let mut missing = None;
    f.visit(&mut |h| {
        if let Formula::Atom(a) = h {
            match g.gamma(a) {
                Some(b) => total = total.saturating_add(b.at(n)),
                None => missing = missing.take().or_else(|| Some(a.keyword())),
            }
        }
    });
    match missing {
        Some(k) => Err(AnalysisError::MissingGamma(k)),
        None => Ok(total),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn f(s: &str) -> Formula {
        parse(s, &Signature::new([("P", 1)]).unwrap()).unwrap()
    }

    #[test]
    fn sums_occurrences() {
        let g = GammaTable::new();
        assert_eq!(nu_bound(&f("all(x) | all(y)"), 3, &g).unwrap(), 6);
        assert_eq!(nu_bound(&f("forall x exists y (P(y) | x = y)"), 7, &g).unwrap(), 0);
        assert_eq!(nu_bound(&f("NE & NE"), 5, &g).unwrap(), 2);
        assert_eq!(nu_bound(&f("all(x y) || geq(x, 2)"), 3, &g).unwrap(), 11);
        assert_eq!(nu_bound(&f("ncon(x)"), 3, &g), Err(AnalysisError::MissingGamma("ncon".into())));
        assert_eq!(nu_bound(&f("ncon(x)"), 3, &g.with("ncon", Bound::Constant(2))).unwrap(), 2);
    }

    #[test]
    fn bound_text() {
        for (s, b) in [("3", Bound::Constant(3)), ("n", Bound::Linear(1)), ("2n", Bound::Linear(2)), ("n^2", Bound::Power(2))] {
            assert_eq!(s.parse::<Bound>().unwrap(), b);
            assert_eq!(b.to_string(), s);
        }
        assert_eq!("const:4".parse::<Bound>().unwrap(), Bound::Constant(4));
        assert_eq!("lin:3".parse::<Bound>().unwrap(), Bound::Linear(3));
        assert_eq!("pow:2".parse::<Bound>().unwrap(), Bound::Power(2));
        assert!("n^x".parse::<Bound>().is_err());
        assert_eq!(Bound::Power(3).at(2), 8);
    }
}

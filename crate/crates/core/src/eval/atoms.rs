use std::collections::{BTreeSet, HashMap, HashSet};

use crate::structures::Elem;

use super::compile::{digit, recode, AtomEval, AtomKind, Bits};
use super::EvalError;

fn column(x: &Bits, pos: &[usize], n: usize) -> Vec<usize> {
    x.ones().map(|c| recode(c, pos, n)).collect()
}

fn distinct(x: &Bits, pos: &[usize], n: usize) -> HashSet<usize> {
    x.ones().map(|c| recode(c, pos, n)).collect()
}

fn constant(x: &Bits, pos: &[usize], n: usize) -> bool {
    let mut it = x.ones().map(|c| recode(c, pos, n));
    match it.next() {
        Some(first) => it.all(|t| t == first),
        None => true,
    }
}

fn functional(x: &Bits, v: &[usize], w: &[usize], n: usize) -> bool {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    x.ones().all(|c| *seen.entry(recode(c, v, n)).or_insert_with(|| recode(c, w, n)) == recode(c, w, n))
}

/// Pairs `(s, s')` agreeing on `u` for which no `s''` realises `u v` of `s` with `w` of `s'`.
fn independent(x: &Bits, u: &[usize], v: &[usize], w: &[usize], n: usize) -> bool {
    let rows: Vec<(usize, usize, usize)> = x.ones().map(|c| (recode(c, u, n), recode(c, v, n), recode(c, w, n))).collect();
    let present: HashSet<(usize, usize, usize)> = rows.iter().copied().collect();
    let mut by_u: HashMap<usize, (HashSet<usize>, HashSet<usize>)> = HashMap::new();
    for &(a, b, c) in &rows {
        let e = by_u.entry(a).or_default();
        e.0.insert(b);
        e.1.insert(c);
    }
    by_u.iter().all(|(&a, (vs, ws))| vs.iter().all(|&b| ws.iter().all(|&c| present.contains(&(a, b, c)))))
}

/// Relation `X(v)` as element tuples.
fn relation(x: &Bits, pos: &[usize], n: usize) -> BTreeSet<Vec<Elem>> {
    x.ones().map(|c| pos.iter().map(|&p| digit(c, p, n)).collect()).collect()
}

fn custom_holds(a: &AtomEval, x: &Bits, n: usize) -> Result<bool, EvalError> {
    let c = a.custom.as_ref().expect("custom atom carries its notion");
    let pos = &a.tuples[0];
    match &c.table {
        Some(table) => {
            let mask = distinct(x, pos, n).into_iter().fold(0usize, |m, t| m | 1 << lex_index(t, pos.len(), n));
            Ok(table[mask])
        }
        None => c.spec.holds(n, &relation(x, pos, n)),
    }
}

/// Tuple codes are little-endian in argument order; relation tables index
/// tuples in lexicographic order (first argument most significant).
fn lex_index(code: usize, len: usize, n: usize) -> usize {
    (0..len).fold(0, |acc, i| acc * n + digit(code, i, n))
}

pub(crate) fn holds(a: &AtomEval, x: &Bits, n: usize) -> Result<bool, EvalError> {
    let t = &a.tuples;
    let k = a.param;
    Ok(match a.kind {
        AtomKind::Const => constant(x, &t[0], n),
        AtomKind::NCon => !constant(x, &t[0], n),
        AtomKind::Dep => functional(x, &t[0], &t[1], n),
        AtomKind::NDep => !functional(x, &t[0], &t[1], n),
        AtomKind::Inc => {
            let right = distinct(x, &t[1], n);
            column(x, &t[0], n).iter().all(|c| right.contains(c))
        }
        AtomKind::NInc => {
            let right = distinct(x, &t[1], n);
            column(x, &t[0], n).iter().any(|c| !right.contains(c))
        }
        AtomKind::Ind => independent(x, &t[0], &t[1], &t[2], n),
        AtomKind::NInd => !independent(x, &t[0], &t[1], &t[2], n),
        AtomKind::All => distinct(x, &t[0], n).len() == n.pow(t[0].len() as u32),
        AtomKind::NonEmpty => !x.is_clear(),
        AtomKind::Geq => distinct(x, &t[0], n).len() >= k,
        AtomKind::CountEq => distinct(x, &t[0], n).len() == k,
        AtomKind::CountNeq => distinct(x, &t[0], n).len() != k,
        AtomKind::CoCountEq => n - distinct(x, &t[0], n).len() == k,
        AtomKind::CoCountNeq => n - distinct(x, &t[0], n).len() != k,
        AtomKind::Custom => custom_holds(a, x, n)?,
    })
}

/// Largest satisfying subteam of `x` for union-closed atoms that are not
/// upward closed.
pub(crate) fn maxsub(a: &AtomEval, x: &Bits, n: usize) -> Result<Option<Bits>, EvalError> {
    match a.kind {
        AtomKind::Inc => {
            let (v, w) = (&a.tuples[0], &a.tuples[1]);
            let mut y = x.clone();
            loop {
                let right = distinct(&y, w, n);
                let next: Vec<usize> = y.ones().filter(|&c| right.contains(&recode(c, v, n))).collect();
                if next.len() == y.count_ones(..) {
                    return Ok(Some(y));
                }
                y.clear();
                next.into_iter().for_each(|c| y.insert(c));
            }
        }
        AtomKind::Custom => {
            // union of all satisfying subrelations of X(v)
            let pos = &a.tuples[0];
            let tuples: Vec<usize> = distinct(x, pos, n).into_iter().collect();
            if tuples.len() > 16 {
                return Err(EvalError::LimitExceeded { what: "custom subrelation search", size: tuples.len(), limit: 16 });
            }
            let mut best: Option<HashSet<usize>> = None;
            for mask in 0usize..1 << tuples.len() {
                let mut y = Bits::with_capacity(x.len());
                let chosen: HashSet<usize> = (0..tuples.len()).filter(|i| mask >> i & 1 == 1).map(|i| tuples[i]).collect();
                x.ones().filter(|&c| chosen.contains(&recode(c, pos, n))).for_each(|c| y.insert(c));
                if custom_holds(a, &y, n)? {
                    best.get_or_insert_with(HashSet::new).extend(chosen);
                }
            }
            Ok(best.map(|keep| {
                let mut y = Bits::with_capacity(x.len());
                x.ones().filter(|&c| keep.contains(&recode(c, pos, n))).for_each(|c| y.insert(c));
                y
            }))
        }
        _ => unreachable!("only inclusion and custom atoms are union-closed without being upward closed"),
    }
}

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::sync::Arc;

use crate::structures::{Model, Team};
use crate::syntax::Formula;

use super::atoms;
use super::compile::{compile, Bits, Kind, Link, NodeId, Program};
use super::{EvalError, EvalOptions, Registry};

const MEMO_LIMIT: usize = 1 << 21;
/// Subset enumeration is refused above this many assignments.
const ENUMERATION_ROWS: usize = 24;

/// A formula compiled against one model. Teams can be evaluated repeatedly;
/// results for subformula/team pairs are shared between calls.
pub struct Evaluator {
    prog: Program,
    opts: EvalOptions,
    sat_memo: RefCell<HashMap<(NodeId, Bits), bool>>,
    max_memo: RefCell<HashMap<(NodeId, Bits), Option<Bits>>>,
    steps: Cell<u64>,
}

impl Evaluator {
    pub fn new(model: &Model, f: &Formula, reg: &Registry, opts: EvalOptions) -> Result<Self, EvalError> {
        let prog = compile(model, f, reg, &opts)?;
        Ok(Evaluator {
            prog,
            opts,
            sat_memo: RefCell::new(HashMap::new()),
            max_memo: RefCell::new(HashMap::new()),
            steps: Cell::new(0),
        })
    }

    pub fn domain_size(&self) -> usize {
        self.prog.n
    }

    /// Does the team satisfy the formula? The team's domain must contain the
    /// formula's free variables; other columns are ignored.
    pub fn eval(&self, t: &Team) -> Result<bool, EvalError> {
        let bits = self.encode(t)?;
        self.steps.set(0);
        if self.sat_memo.borrow().len() > MEMO_LIMIT {
            self.sat_memo.borrow_mut().clear();
        }
        if self.max_memo.borrow().len() > MEMO_LIMIT {
            self.max_memo.borrow_mut().clear();
        }
        self.sat(self.prog.root, &bits)
    }

    fn encode(&self, t: &Team) -> Result<Bits, EvalError> {
        let pos = self
            .prog
            .root_frame
            .iter()
            .map(|v| t.position(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let n = self.prog.n;
        let mut bits = Bits::with_capacity(self.prog.nodes[self.prog.root].universe);
        for row in t.rows() {
            let mut code = 0;
            for &p in pos.iter().rev() {
                if row[p] >= n {
                    return Err(EvalError::ElementOutOfRange { elem: row[p], size: n });
                }
                code = code * n + row[p];
            }
            bits.insert(code);
        }
        Ok(bits)
    }

    fn tick(&self) -> Result<(), EvalError> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.opts.search_limit {
            return Err(EvalError::LimitExceeded { what: "search steps", size: s as usize, limit: self.opts.search_limit as usize });
        }
        Ok(())
    }

    fn kind(&self, id: NodeId) -> &Kind {
        &self.prog.nodes[id].kind
    }

    fn empty(&self, id: NodeId) -> Bits {
        Bits::with_capacity(self.prog.nodes[id].universe)
    }

    fn project(&self, link: &Link, x: &Bits) -> Bits {
        match &link.map {
            None => x.clone(),
            Some(map) => {
                let mut out = self.empty(link.id);
                x.ones().for_each(|c| out.insert(map[c] as usize));
                out
            }
        }
    }

    /// Codes of `x` whose projection lies in `p`.
    fn preimage(&self, link: &Link, x: &Bits, p: &Bits) -> Bits {
        match &link.map {
            None => {
                let mut out = x.clone();
                out.intersect_with(p);
                out
            }
            Some(map) => {
                let mut out = Bits::with_capacity(x.len());
                x.ones().filter(|&c| p.contains(map[c] as usize)).for_each(|c| out.insert(c));
                out
            }
        }
    }

    fn compose(&self, outer: &Link, inner: &Link) -> Link {
        let map = match (&outer.map, &inner.map) {
            (None, m) | (m, None) => m.clone(),
            (Some(a), Some(b)) => Some(Arc::new(a.iter().map(|&c| b[c as usize]).collect())),
        };
        Link { id: inner.id, map }
    }

    fn sat_link(&self, link: &Link, x: &Bits) -> Result<bool, EvalError> {
        self.sat(link.id, &self.project(link, x))
    }

    fn maxsub_link(&self, link: &Link, x: &Bits) -> Result<Option<Bits>, EvalError> {
        let m = self.maxsub(link.id, &self.project(link, x))?;
        Ok(m.map(|m| self.preimage(link, x, &m)))
    }

    fn sat(&self, id: NodeId, x: &Bits) -> Result<bool, EvalError> {
        if let Some(&b) = self.sat_memo.borrow().get(&(id, x.clone())) {
            return Ok(b);
        }
        let r = match self.kind(id) {
            Kind::Table(t) => x.is_subset(t),
            Kind::Truth(b) => *b,
            Kind::Atom(a) => atoms::holds(a, x, self.prog.n)?,
            Kind::And(a, b) => self.sat_link(a, x)? && self.sat_link(b, x)?,
            Kind::ClassicalOr(a, b) => self.sat_link(a, x)? || self.sat_link(b, x)?,
            Kind::Or(a, b) => self.split(a, b, x)?,
            Kind::Exists { .. } => self.exists(id, x)?,
            Kind::Forall { body, .. } => self.sat(*body, &self.extend(id, x))?,
            Kind::Neg(a) => !self.sat_link(a, x)?,
            Kind::Impl(a, b) => self.implication(a, b, x)?,
            Kind::Possibly(a) => self.possibly(a.id, &self.project(a, x))?,
        };
        self.sat_memo.borrow_mut().insert((id, x.clone()), r);
        Ok(r)
    }

    /// The largest satisfying subteam of `x`, for union-closed nodes.
    fn maxsub(&self, id: NodeId, x: &Bits) -> Result<Option<Bits>, EvalError> {
        if let Some(m) = self.max_memo.borrow().get(&(id, x.clone())) {
            return Ok(m.clone());
        }
        let node = &self.prog.nodes[id];
        debug_assert!(node.class.union);
        let r = match &node.kind {
            Kind::Table(t) => {
                let mut y = x.clone();
                y.intersect_with(t);
                Some(y)
            }
            _ if node.class.up => self.sat(id, x)?.then(|| x.clone()),
            Kind::Atom(a) => atoms::maxsub(a, x, self.prog.n)?,
            Kind::And(a, b) => self.fixpoint(&[a.clone(), b.clone()], x.clone())?,
            Kind::Or(a, b) => match (self.maxsub_link(a, x)?, self.maxsub_link(b, x)?) {
                (Some(mut y), Some(z)) => {
                    y.union_with(&z);
                    Some(y)
                }
                _ => None,
            },
            Kind::Exists { body, .. } => self.maxsub(*body, &self.extend(id, x))?.map(|p| self.covered(id, &p)),
            Kind::Forall { body, .. } => {
                let mut y = x.clone();
                loop {
                    let Some(p) = self.maxsub(*body, &self.extend(id, &y))? else { break None };
                    let next = self.fully_inside(id, &y, &p);
                    if next == y {
                        break Some(y);
                    }
                    y = next;
                }
            }
            other => unreachable!("no maximal subteam rule for {other:?}"),
        };
        self.max_memo.borrow_mut().insert((id, x.clone()), r.clone());
        Ok(r)
    }

    /// Largest `y ⊆ x` satisfying every (union-closed) conjunct.
    fn fixpoint(&self, conjuncts: &[Link], mut y: Bits) -> Result<Option<Bits>, EvalError> {
        loop {
            self.tick()?;
            let mut next = y.clone();
            for c in conjuncts {
                match self.maxsub_link(c, &y)? {
                    Some(m) => next.intersect_with(&m),
                    None => return Ok(None),
                }
            }
            if next == y {
                return Ok(Some(y));
            }
            y = next;
        }
    }

    fn block_sizes(&self, id: NodeId) -> (usize, usize) {
        let block = match self.kind(id) {
            Kind::Exists { block, .. } | Kind::Forall { block, .. } => *block,
            _ => unreachable!(),
        };
        (self.prog.nodes[id].universe, self.prog.n.pow(block as u32))
    }

    /// `x[M/v1..vk]` over the body frame.
    fn extend(&self, id: NodeId, x: &Bits) -> Bits {
        let (base, width) = self.block_sizes(id);
        let mut out = Bits::with_capacity(base * width);
        for c in x.ones() {
            for j in 0..width {
                out.insert(c + base * j);
            }
        }
        out
    }

    /// Assignments of the parent frame with some extension in `w`.
    fn covered(&self, id: NodeId, w: &Bits) -> Bits {
        let (base, _) = self.block_sizes(id);
        let mut out = Bits::with_capacity(base);
        w.ones().for_each(|c| out.insert(c % base));
        out
    }

    /// Assignments of `x` all of whose extensions are in `w`.
    fn fully_inside(&self, id: NodeId, x: &Bits, w: &Bits) -> Bits {
        let (base, width) = self.block_sizes(id);
        let mut out = Bits::with_capacity(base);
        x.ones().filter(|&c| (0..width).all(|j| w.contains(c + base * j))).for_each(|c| out.insert(c));
        out
    }

    /// Calls `f` on every subset of `rows` (as a bitset of length `len`),
    /// added to `base`, until it returns true.
    fn any_subset(&self, base: &Bits, rows: &[usize], mut f: impl FnMut(&Bits) -> Result<bool, EvalError>) -> Result<bool, EvalError> {
        if rows.len() > ENUMERATION_ROWS {
            return Err(EvalError::LimitExceeded { what: "subteam enumeration", size: rows.len(), limit: ENUMERATION_ROWS });
        }
        for mask in 0u64..1 << rows.len() {
            self.tick()?;
            let mut y = base.clone();
            (0..rows.len()).filter(|i| mask >> i & 1 == 1).for_each(|i| y.insert(rows[i]));
            if f(&y)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn split(&self, a: &Link, b: &Link, x: &Bits) -> Result<bool, EvalError> {
        if let Kind::ClassicalOr(a1, a2) = self.kind(a.id) {
            return Ok(self.split(&self.compose(a, a1), b, x)? || self.split(&self.compose(a, a2), b, x)?);
        }
        if let Kind::ClassicalOr(b1, b2) = self.kind(b.id) {
            return Ok(self.split(a, &self.compose(b, b1), x)? || self.split(a, &self.compose(b, b2), x)?);
        }
        let (ca, cb) = (self.prog.nodes[a.id].class, self.prog.nodes[b.id].class);
        for (p, q, cp) in [(a, b, ca), (b, a, cb)] {
            if cp.union {
                // the left part may as well be as large as possible
                let Some(big) = self.maxsub_link(p, x)? else { return Ok(false) };
                let mut rest = x.clone();
                rest.difference_with(&big);
                return self.between(q.id, &self.project(q, &rest), &self.project(q, x));
            }
        }
        let rows: Vec<usize> = x.ones().collect();
        if ca.down && cb.down {
            let none = Bits::with_capacity(x.len());
            return self.partition(a, b, &rows, &none, &none);
        }
        for (p, q, cp) in [(a, b, ca), (b, a, cb)] {
            if cp.down {
                // give q exactly its part, the rest to the downward-closed side
                return self.any_subset(&Bits::with_capacity(x.len()), &rows, |z| {
                    let mut rest = x.clone();
                    rest.difference_with(z);
                    Ok(self.sat_link(q, z)? && self.sat_link(p, &rest)?)
                });
            }
        }
        self.any_subset(&Bits::with_capacity(x.len()), &rows, |y| {
            if !self.sat_link(a, y)? {
                return Ok(false);
            }
            let mut rest = x.clone();
            rest.difference_with(y);
            self.between(b.id, &self.project(b, &rest), &self.project(b, x))
        })
    }

    /// Splits `rows` into two disjoint parts for two downward-closed disjuncts.
    fn partition(&self, a: &Link, b: &Link, rows: &[usize], y: &Bits, z: &Bits) -> Result<bool, EvalError> {
        self.tick()?;
        let Some((&r, rest)) = rows.split_first() else {
            return Ok(self.sat_link(a, y)? && self.sat_link(b, z)?);
        };
        let mut y2 = y.clone();
        y2.insert(r);
        if self.sat_link(a, &y2)? && self.partition(a, b, rest, &y2, z)? {
            return Ok(true);
        }
        let mut z2 = z.clone();
        z2.insert(r);
        Ok(self.sat_link(b, &z2)? && self.partition(a, b, rest, y, &z2)?)
    }

    /// Is some team between `lo` and `hi` (node coordinates) satisfying?
    fn between(&self, id: NodeId, lo: &Bits, hi: &Bits) -> Result<bool, EvalError> {
        if let Kind::ClassicalOr(a, b) = self.kind(id) {
            return Ok(self.between(a.id, &self.project(a, lo), &self.project(a, hi))?
                || self.between(b.id, &self.project(b, lo), &self.project(b, hi))?);
        }
        let class = self.prog.nodes[id].class;
        if class.union {
            return Ok(self.maxsub(id, hi)?.is_some_and(|m| lo.is_subset(&m)));
        }
        if class.down {
            return self.sat(id, lo);
        }
        let mut free = hi.clone();
        free.difference_with(lo);
        let rows: Vec<usize> = free.ones().collect();
        self.any_subset(lo, &rows, |z| self.sat(id, z))
    }

    fn possibly(&self, id: NodeId, x: &Bits) -> Result<bool, EvalError> {
        if x.is_clear() {
            return Ok(false);
        }
        if let Kind::ClassicalOr(a, b) = self.kind(id) {
            return Ok(self.possibly(a.id, &self.project(a, x))? || self.possibly(b.id, &self.project(b, x))?);
        }
        let class = self.prog.nodes[id].class;
        if class.union {
            return Ok(self.maxsub(id, x)?.is_some_and(|m| !m.is_clear()));
        }
        if class.down {
            for c in x.ones() {
                let mut y = self.empty(id);
                y.insert(c);
                if self.sat(id, &y)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let rows: Vec<usize> = x.ones().collect();
        self.any_subset(&self.empty(id), &rows, |y| Ok(!y.is_clear() && self.sat(id, y)?))
    }

    fn implication(&self, a: &Link, b: &Link, x: &Bits) -> Result<bool, EvalError> {
        let rows: Vec<usize> = x.ones().collect();
        let counterexample = self.any_subset(&Bits::with_capacity(x.len()), &rows, |y| Ok(self.sat_link(a, y)? && !self.sat_link(b, y)?))?;
        Ok(!counterexample)
    }

    fn exists(&self, id: NodeId, x: &Bits) -> Result<bool, EvalError> {
        let Kind::Exists { alts, .. } = self.kind(id) else { unreachable!() };
        let ext = self.extend(id, x);
        for alt in alts {
            if self.exists_alternative(id, alt, x, &ext)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Is there `w ⊆ ext` covering `x` that satisfies every conjunct?
    fn exists_alternative(&self, id: NodeId, conjuncts: &[Link], x: &Bits, ext: &Bits) -> Result<bool, EvalError> {
        let class = |l: &Link| self.prog.nodes[l.id].class;
        let unions: Vec<Link> = conjuncts.iter().filter(|l| class(l).union).cloned().collect();
        let downs: Vec<Link> = conjuncts.iter().filter(|l| class(l).down && !class(l).union).cloned().collect();
        let others: Vec<Link> = conjuncts.iter().filter(|l| !class(l).down && !class(l).union).cloned().collect();
        if x.is_clear() {
            // the only extension of the empty team is empty
            for l in conjuncts {
                if !self.sat_link(l, ext)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }

        // every witness lies inside the largest team satisfying the union-closed part
        let candidates = if unions.is_empty() {
            ext.clone()
        } else {
            match self.fixpoint(&unions, ext.clone())? {
                Some(c) => c,
                None => return Ok(false),
            }
        };
        if self.covered(id, &candidates) != *x {
            return Ok(false);
        }
        if downs.is_empty() && others.is_empty() {
            return Ok(true);
        }
        // conjuncts that may fail on a subteam of the candidates
        let checks: Vec<Link> = unions.iter().filter(|l| !class(l).down).chain(&others).cloned().collect();
        let search = CoverSearch { ev: self, id, x, candidates: &candidates, downs: &downs, checks: &checks };
        if downs.is_empty() {
            search.free()
        } else {
            search.select()
        }
    }
}

struct CoverSearch<'a> {
    ev: &'a Evaluator,
    id: NodeId,
    x: &'a Bits,
    candidates: &'a Bits,
    downs: &'a [Link],
    checks: &'a [Link],
}

impl CoverSearch<'_> {
    fn downs_hold(&self, w: &Bits) -> Result<bool, EvalError> {
        for d in self.downs {
            if !self.ev.sat_link(d, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn checks_hold(&self, w: &Bits) -> Result<bool, EvalError> {
        for c in self.checks {
            if !self.ev.sat_link(c, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Upward-closed checks must already hold on any team that can still be reached.
    fn upper_bound_ok(&self, upper: &Bits) -> Result<bool, EvalError> {
        for c in self.checks {
            if self.ev.prog.nodes[c.id].class.up && !self.ev.sat_link(c, upper)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Any witness contains one extension per assignment that already
    /// satisfies the downward-closed conjuncts: choose those first, then grow.
    fn select(&self) -> Result<bool, EvalError> {
        let (base, width) = self.ev.block_sizes(self.id);
        let mut options: Vec<Vec<usize>> = self
            .x
            .ones()
            .map(|s| (0..width).map(|j| s + base * j).filter(|&c| self.candidates.contains(c)).collect())
            .collect();
        options.sort_by_key(|o| o.len());
        let mut chosen = Bits::with_capacity(self.candidates.len());
        self.choose(&options, &mut chosen)
    }

    fn choose(&self, options: &[Vec<usize>], chosen: &mut Bits) -> Result<bool, EvalError> {
        self.ev.tick()?;
        let Some((first, rest)) = options.split_first() else {
            return self.grow(chosen);
        };
        for &c in first {
            chosen.insert(c);
            if self.downs_hold(chosen)? && self.choose(rest, chosen)? {
                return Ok(true);
            }
            chosen.set(c, false);
        }
        Ok(false)
    }

    fn grow(&self, core: &Bits) -> Result<bool, EvalError> {
        if self.checks.is_empty() {
            return Ok(true);
        }
        let mut extra = Vec::new();
        for c in self.candidates.ones().filter(|&c| !core.contains(c)) {
            let mut w = core.clone();
            w.insert(c);
            if self.downs_hold(&w)? {
                extra.push(c);
            }
        }
        let mut upper = core.clone();
        extra.iter().for_each(|&c| upper.insert(c));
        self.include(&extra, core.clone(), upper)
    }

    fn include(&self, rows: &[usize], w: Bits, upper: Bits) -> Result<bool, EvalError> {
        self.ev.tick()?;
        if !self.upper_bound_ok(&upper)? {
            return Ok(false);
        }
        let Some((&r, rest)) = rows.split_first() else {
            return self.checks_hold(&w);
        };
        let mut with = w.clone();
        with.insert(r);
        if self.downs_hold(&with)? && self.include(rest, with, upper.clone())? {
            return Ok(true);
        }
        let mut upper = upper;
        upper.set(r, false);
        self.include(rest, w, upper)
    }

    /// No downward-closed conjuncts: search subsets of the candidates that cover.
    fn free(&self) -> Result<bool, EvalError> {
        let rows: Vec<usize> = self.candidates.ones().collect();
        self.exclude(&rows, self.candidates.clone())
    }

    fn exclude(&self, rows: &[usize], upper: Bits) -> Result<bool, EvalError> {
        self.ev.tick()?;
        if self.ev.covered(self.id, &upper) != *self.x || !self.upper_bound_ok(&upper)? {
            return Ok(false);
        }
        let Some((&r, rest)) = rows.split_first() else {
            return self.checks_hold(&upper);
        };
        if self.exclude(rest, upper.clone())? {
            return Ok(true);
        }
        let mut smaller = upper;
        smaller.set(r, false);
        self.exclude(rest, smaller)
    }
}

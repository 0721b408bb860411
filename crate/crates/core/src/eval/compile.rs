//! Lowering of a formula to a node arena.
//!
//! Every node works over its own frame: the ordered list of its free
//! variables. A team over a frame of length `L` is a bitset over the `n^L`
//! assignment codes, digit `i` of a code being the value of the `i`-th frame
//! variable. Children see the projection of their parent's team onto their
//! own frame, which is sound because satisfaction is local. Quantifier blocks
//! append their variables to the parent's frame.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::structures::{tarski_eval, Assignment, Elem, Model};
use crate::syntax::{Atom, Formula, Var};

use super::registry::{relation_table, DependencySpec, Registry, CLOSURE_CHECK_LIMIT};
use super::{Claim, EvalError, EvalOptions};

pub(crate) type NodeId = usize;
pub(crate) type Bits = FixedBitSet;

/// Closure properties of a node's set of satisfying teams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Class {
    /// closed under subteams
    pub down: bool,
    /// closed under superteams
    pub up: bool,
    /// closed under unions of non-empty families
    pub union: bool,
}

impl Class {
    const NONE: Class = Class { down: false, up: false, union: false };
    const FLAT: Class = Class { down: true, up: false, union: true };
    const UP: Class = Class { down: false, up: true, union: true };
    const DOWN: Class = Class { down: true, up: false, union: false };
    const BOTH: Class = Class { down: true, up: true, union: true };
}

/// Edge from a parent to a child: `map[code]` is the child code of a parent code.
#[derive(Clone, Debug)]
pub(crate) struct Link {
    pub id: NodeId,
    pub map: Option<Arc<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub(crate) enum AtomKind {
    Const,
    Dep,
    Inc,
    Ind,
    All,
    NonEmpty,
    NCon,
    NDep,
    Geq,
    NInc,
    NInd,
    CountEq,
    CountNeq,
    CoCountEq,
    CoCountNeq,
    Custom,
}

#[derive(Debug)]
pub(crate) struct CustomEval {
    pub spec: DependencySpec,
    /// Truth by relation bitmask, when the relation space is small.
    pub table: Option<Vec<bool>>,
}

#[derive(Clone, Debug)]
pub(crate) struct AtomEval {
    pub kind: AtomKind,
    /// Frame positions of each argument tuple.
    pub tuples: Vec<Vec<usize>>,
    pub param: usize,
    pub custom: Option<Arc<CustomEval>>,
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    /// Satisfied exactly by the subteams of a fixed set of codes.
    Table(Bits),
    Truth(bool),
    Atom(AtomEval),
    And(Link, Link),
    Or(Link, Link),
    ClassicalOr(Link, Link),
    /// `alts` lists the conjuncts of the body, one list per alternative
    /// after distributing classical disjunctions; links start at the body frame.
    Exists { block: usize, body: NodeId, alts: Vec<Vec<Link>> },
    Forall { block: usize, body: NodeId },
    Neg(Link),
    Impl(Link, Link),
    Possibly(Link),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub kind: Kind,
    pub frame: Vec<Var>,
    pub universe: usize,
    pub class: Class,
}

pub(crate) struct Program {
    pub n: usize,
    pub nodes: Vec<Node>,
    pub root: NodeId,
    pub root_frame: Vec<Var>,
}

const MAX_ALTERNATIVES: usize = 64;

struct Compiler<'a> {
    model: &'a Model,
    reg: &'a Registry,
    opts: &'a EvalOptions,
    n: usize,
    nodes: Vec<Node>,
    customs: HashMap<String, Arc<CustomEval>>,
}

pub(crate) fn compile(model: &Model, f: &Formula, reg: &Registry, opts: &EvalOptions) -> Result<Program, EvalError> {
    let mut c = Compiler { model, reg, opts, n: model.size(), nodes: Vec::new(), customs: HashMap::new() };
    let root_frame: Vec<Var> = f.free_variables().into_iter().collect();
    let root = c.node(f, root_frame.clone())?;
    Ok(Program { n: c.n, nodes: c.nodes, root, root_frame })
}

fn union(a: Class, b: Class) -> Class {
    Class { down: a.down && b.down, up: a.up || b.up, union: (a.union && b.union) || a.up || b.up }
}

fn normalize(c: Class) -> Class {
    Class { union: c.union || c.up, ..c }
}

impl Compiler<'_> {
    fn universe(&self, width: usize) -> Result<usize, EvalError> {
        self.n
            .checked_pow(width as u32)
            .filter(|&u| u <= self.opts.max_universe)
            .ok_or(EvalError::LimitExceeded { what: "assignment universe", size: self.n.saturating_pow(width as u32), limit: self.opts.max_universe })
    }

    fn push(&mut self, kind: Kind, frame: Vec<Var>, class: Class) -> Result<NodeId, EvalError> {
        let universe = self.universe(frame.len())?;
        self.nodes.push(Node { kind, frame, universe, class: normalize(class) });
        Ok(self.nodes.len() - 1)
    }

    fn link(&self, parent: &[Var], id: NodeId) -> Link {
        let child = &self.nodes[id].frame;
        if child.as_slice() == parent {
            return Link { id, map: None };
        }
        let pos: Vec<usize> = child.iter().map(|v| parent.iter().position(|w| w == v).expect("child frame within parent")).collect();
        let total = self.n.pow(parent.len() as u32);
        let map = (0..total).map(|code| recode(code, &pos, self.n) as u32).collect();
        Link { id, map: Some(Arc::new(map)) }
    }

    fn child(&mut self, parent: &[Var], f: &Formula) -> Result<Link, EvalError> {
        let free = f.free_variables();
        let frame: Vec<Var> = parent.iter().filter(|v| free.contains(v)).cloned().collect();
        let id = self.node(f, frame)?;
        Ok(self.link(parent, id))
    }

    /// Compiles `f` over `frame`, which must list exactly the free variables of `f`.
    fn node(&mut self, f: &Formula, frame: Vec<Var>) -> Result<NodeId, EvalError> {
        if f.is_literal() || (self.opts.flat_shortcut && f.is_first_order()) {
            let table = self.truth_table(f, &frame)?;
            return self.push(Kind::Table(table), frame, Class::FLAT);
        }
        match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::ClassicalOr(a, b) | Formula::IntImpl(a, b) => {
                let la = self.child(&frame, a)?;
                let lb = self.child(&frame, b)?;
                let (ca, cb) = (self.nodes[la.id].class, self.nodes[lb.id].class);
                let (kind, class) = match f {
                    Formula::And(..) => (
                        Kind::And(la, lb),
                        Class { down: ca.down && cb.down, up: ca.up && cb.up, union: ca.union && cb.union },
                    ),
                    Formula::Or(..) => (Kind::Or(la, lb), union(ca, cb)),
                    Formula::ClassicalOr(..) => {
                        (Kind::ClassicalOr(la, lb), Class { down: ca.down && cb.down, up: ca.up && cb.up, union: false })
                    }
                    _ => (Kind::Impl(la, lb), Class::DOWN),
                };
                self.push(kind, frame, class)
            }
            Formula::ContraNeg(a) => {
                let la = self.child(&frame, a)?;
                let ca = self.nodes[la.id].class;
                self.push(Kind::Neg(la), frame, Class { down: ca.up, up: ca.down, union: false })
            }
            Formula::Possibly(a) => {
                let la = self.child(&frame, a)?;
                self.push(Kind::Possibly(la), frame, Class::UP)
            }
            Formula::Bracket(body) => {
                let truth = tarski_eval(self.model, &Assignment::new(), body)?;
                self.push(Kind::Truth(truth), frame, Class::BOTH)
            }
            Formula::Exists(..) | Formula::Forall(..) => self.quantifier(f, frame),
            Formula::Atom(atom) => self.atom(atom, frame),
            _ => unreachable!("literals and first-order formulas handled above"),
        }
    }

    fn quantifier(&mut self, f: &Formula, frame: Vec<Var>) -> Result<NodeId, EvalError> {
        let universal = matches!(f, Formula::Forall(..));
        let mut block = Vec::new();
        let mut body = f;
        loop {
            match (body, universal) {
                (Formula::Exists(v, inner), false) | (Formula::Forall(v, inner), true) => {
                    // a quantifier over a variable its body ignores changes nothing
                    if inner.free_variables().contains(v) {
                        block.push(v.clone());
                    }
                    body = inner;
                }
                _ => break,
            }
        }
        if block.is_empty() {
            return self.node(body, frame);
        }
        let mut body_frame = frame.clone();
        body_frame.extend(block.iter().cloned());
        let body_id = self.node(body, body_frame.clone())?;
        let class = self.nodes[body_id].class;
        let kind = if universal {
            Kind::Forall { block: block.len(), body: body_id }
        } else {
            let alts = self.alternatives(&body_frame, body_id);
            Kind::Exists { block: block.len(), body: body_id, alts }
        };
        self.push(kind, frame, class)
    }

    /// Conjunct lists of `id`, distributing `&` over `||`.
    fn alternatives(&self, frame: &[Var], id: NodeId) -> Vec<Vec<Link>> {
        let expanded = self.expand(id);
        if expanded.len() > MAX_ALTERNATIVES {
            return vec![vec![self.link(frame, id)]];
        }
        expanded.into_iter().map(|alt| alt.into_iter().map(|c| self.link(frame, c)).collect()).collect()
    }

    fn expand(&self, id: NodeId) -> Vec<Vec<NodeId>> {
        match &self.nodes[id].kind {
            Kind::And(a, b) => {
                let (xs, ys) = (self.expand(a.id), self.expand(b.id));
                if xs.len() * ys.len() > MAX_ALTERNATIVES {
                    return vec![vec![id]];
                }
                xs.iter().flat_map(|x| ys.iter().map(move |y| x.iter().chain(y).copied().collect())).collect()
            }
            Kind::ClassicalOr(a, b) => {
                let mut xs = self.expand(a.id);
                xs.extend(self.expand(b.id));
                xs
            }
            _ => vec![vec![id]],
        }
    }

    fn truth_table(&self, f: &Formula, frame: &[Var]) -> Result<Bits, EvalError> {
        let universe = self.universe(frame.len())?;
        let mut table = Bits::with_capacity(universe);
        for code in 0..universe {
            let s: Assignment = frame.iter().enumerate().map(|(i, v)| (v.clone(), digit(code, i, self.n))).collect();
            if tarski_eval(self.model, &s, f)? {
                table.insert(code);
            }
        }
        Ok(table)
    }

    fn atom(&mut self, atom: &Atom, frame: Vec<Var>) -> Result<NodeId, EvalError> {
        let pos = |vs: &[Var]| -> Vec<usize> { vs.iter().map(|v| frame.iter().position(|w| w == v).expect("argument in frame")).collect() };
        let one = |v: &Var| pos(std::slice::from_ref(v));
        let (kind, tuples, param, class) = match atom {
            Atom::Const(v) => (AtomKind::Const, vec![pos(v)], 0, Class::DOWN),
            Atom::Dep(v, w) => (AtomKind::Dep, vec![pos(v), pos(w)], 0, Class::DOWN),
            Atom::Inc(v, w) => (AtomKind::Inc, vec![pos(v), pos(w)], 0, Class { union: true, ..Class::NONE }),
            Atom::Ind(u, v, w) => (AtomKind::Ind, vec![pos(u), pos(v), pos(w)], 0, Class::NONE),
            Atom::All(v) => (AtomKind::All, vec![pos(v)], 0, Class::UP),
            Atom::NonEmpty => (AtomKind::NonEmpty, vec![], 0, Class::UP),
            Atom::NCon(v) => (AtomKind::NCon, vec![pos(v)], 0, Class::UP),
            Atom::NDep(v, w) => (AtomKind::NDep, vec![pos(v), pos(w)], 0, Class::UP),
            Atom::Geq(v, k) => (AtomKind::Geq, vec![pos(v)], *k, if *k == 0 { Class::BOTH } else { Class::UP }),
            Atom::NInc(v, w) => (AtomKind::NInc, vec![pos(v), pos(w)], 0, Class::NONE),
            Atom::NInd(u, v, w) => (AtomKind::NInd, vec![pos(u), pos(v), pos(w)], 0, Class::NONE),
            Atom::CountEq(v, k) => (AtomKind::CountEq, vec![one(v)], *k, Class::NONE),
            Atom::CountNeq(v, k) => (AtomKind::CountNeq, vec![one(v)], *k, Class::NONE),
            Atom::CoCountEq(v, k) => (AtomKind::CoCountEq, vec![one(v)], *k, Class::NONE),
            Atom::CoCountNeq(v, k) => (AtomKind::CoCountNeq, vec![one(v)], *k, Class::NONE),
            Atom::Custom(name, v) => {
                let spec = self.reg.get(name).ok_or_else(|| EvalError::UnregisteredCustom(name.clone()))?;
                if spec.arity != v.len() {
                    return Err(EvalError::CustomArity { name: name.clone(), expected: spec.arity, found: v.len() });
                }
                if spec.arity == 0 {
                    let truth = if self.reg.allows_model_symbols() {
                        tarski_eval(self.model, &Assignment::new(), &spec.definition)?
                    } else {
                        spec.holds_nullary(self.n)?
                    };
                    return self.push(Kind::Truth(truth), frame, Class::BOTH);
                }
                let custom = self.custom(spec)?;
                let class = custom_class(&custom, self.n);
                let kind = AtomKind::Custom;
                let atom = AtomEval { kind, tuples: vec![pos(v)], param: 0, custom: Some(custom) };
                return self.push(Kind::Atom(atom), frame, class);
            }
        };
        self.push(Kind::Atom(AtomEval { kind, tuples, param, custom: None }), frame, class)
    }

    fn custom(&mut self, spec: &DependencySpec) -> Result<Arc<CustomEval>, EvalError> {
        if let Some(c) = self.customs.get(&spec.name) {
            return Ok(c.clone());
        }
        let slots = self.n.checked_pow(spec.arity as u32).unwrap_or(usize::MAX);
        let table = if slots <= CLOSURE_CHECK_LIMIT.min(12) { Some(relation_table(spec, self.n)?) } else { None };
        let c = Arc::new(CustomEval { spec: spec.clone(), table });
        self.customs.insert(spec.name.clone(), c.clone());
        Ok(c)
    }
}

/// Closure class of a custom notion on teams over a domain of size `n`.
/// Exact when the relation space was tabulated, otherwise taken from the claim.
fn custom_class(c: &CustomEval, n: usize) -> Class {
    let Some(table) = &c.table else {
        return if c.spec.claimed_upward_closed == Claim::Yes { Class::UP } else { Class::NONE };
    };
    let slots = n.pow(c.spec.arity as u32);
    let sat: Vec<usize> = (0..table.len()).filter(|&m| table[m]).collect();
    let up = sat.iter().all(|&m| (0..slots).all(|b| table[m | 1 << b]));
    let down = sat.iter().all(|&m| (0..slots).all(|b| table[m & !(1 << b)]));
    let union = up || (sat.len() <= 256 && sat.iter().all(|&a| sat.iter().all(|&b| table[a | b])));
    Class { down, up, union }
}

pub(crate) fn digit(code: usize, i: usize, n: usize) -> Elem {
    code / n.pow(i as u32) % n
}

/// Code over the positions `pos` (in order) of a code over a wider frame.
pub(crate) fn recode(code: usize, pos: &[usize], n: usize) -> usize {
    pos.iter().rev().fold(0, |acc, &p| acc * n + digit(code, p, n))
}

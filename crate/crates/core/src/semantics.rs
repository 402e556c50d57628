//! The relational semantics, computed from System R typings, and the
//! step-count predictor built on it.
//!
//! The interpretation of a term with free variables `x1 … xm` (sorted) is
//! the set of types `a1 … am α` such that `x1 : a1, …, xm : am ⊢ t : α` is
//! derivable. Finite fragments are computed by taking the most general
//! typings of derivations up to a size and closing them under instantiation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::derivation::Derivation;
use crate::engine::search::DerivationTable;
use crate::reduce::{is_normal, leftmost_reduce, ReductionStatus};
use crate::term::{Name, Term};
use crate::types::{is_exact, type_size, typing_as_type, Atom, TypeExpr, TypeMultiset};
use crate::unify::{match_type, renaming_equivalent_fixing, same_outline, Problem, Substitution};

pub use crate::unify::{unify_multisets, unify_types};

/// Fuel used to normalise non-normal terms before interpreting them.
pub const NORMALIZATION_FUEL: usize = 10_000;

/// A finite fragment of an interpretation: every point of size at most
/// `bound`, one representative per renaming class.
#[derive(Clone, Debug)]
pub struct SemSet {
    /// Free variables, in the order their multisets are curried.
    pub vars: Vec<Name>,
    pub bound: usize,
    pub points: Vec<TypeExpr>,
    /// False when the fragment was computed from derivations of bounded
    /// size for a term without a normal form, so points may be missing.
    pub complete: bool,
    fixed: BTreeSet<Atom>,
}

impl SemSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TypeExpr> {
        self.points.iter()
    }

    /// Membership up to renaming of atoms not fixed by the environment.
    pub fn contains(&self, p: &TypeExpr) -> bool {
        let fixed = &self.fixed;
        self.points
            .iter()
            .any(|q| renaming_equivalent_fixing(p, q, &|a| fixed.contains(&a)))
    }

    /// Same points up to renaming.
    pub fn same_points(&self, other: &SemSet) -> bool {
        self.len() == other.len() && self.points.iter().all(|p| other.contains(p))
    }
}

impl fmt::Display for SemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Points deduplicated up to renaming of non-fixed atoms.
struct PointSet {
    fixed: BTreeSet<Atom>,
    buckets: BTreeMap<TypeExpr, Vec<TypeExpr>>,
    order: Vec<TypeExpr>,
}

impl PointSet {
    fn new(fixed: BTreeSet<Atom>) -> PointSet {
        PointSet {
            fixed,
            buckets: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    fn insert(&mut self, p: TypeExpr) -> bool {
        let p = self.canonical(&p);
        let fixed = &self.fixed;
        let bucket = self.buckets.entry(shape(&p, fixed)).or_default();
        if bucket
            .iter()
            .any(|q| renaming_equivalent_fixing(&p, q, &|a| fixed.contains(&a)))
        {
            return false;
        }
        bucket.push(p.clone());
        self.order.push(p);
        true
    }

    // Renames free atoms to γk, k above the fixed atoms, by first occurrence.
    fn canonical(&self, p: &TypeExpr) -> TypeExpr {
        let mut k = self.fixed.iter().next_back().map_or(0, |a| a.0 + 1);
        let mut order = Vec::new();
        p.atoms_in_order(&mut order);
        let mut map = BTreeMap::new();
        for a in order {
            if !self.fixed.contains(&a) && !map.contains_key(&a) {
                map.insert(a, TypeExpr::atom(k));
                k += 1;
            }
        }
        Substitution::from_map(map).apply(p)
    }
}

// The type with every free atom replaced by one placeholder.
fn shape(t: &TypeExpr, fixed: &BTreeSet<Atom>) -> TypeExpr {
    t.map_atoms(&mut |a| {
        if fixed.contains(&a) {
            TypeExpr::Atom(a)
        } else {
            TypeExpr::atom(u32::MAX)
        }
    })
}

/// Closes a set of points under instantiation, keeping sizes within `bound`.
/// Every instance is reached by refining one atom at a time: identifying
/// two atoms, identifying a free atom with a fixed one, or replacing an atom
/// by `([δ1 … δk], δ0)` with fresh `δ`s. None of these decreases the size.
fn close_under_instances(seeds: Vec<TypeExpr>, bound: usize, fixed: &BTreeSet<Atom>) -> Vec<TypeExpr> {
    let mut set = PointSet::new(fixed.clone());
    let mut queue = Vec::new();
    for p in seeds {
        if type_size(&p) <= bound && set.insert(p.clone()) {
            queue.push(set.order.last().cloned().expect("just inserted"));
        }
    }
    while let Some(p) = queue.pop() {
        for q in refinements(&p, bound, fixed) {
            if set.insert(q) {
                queue.push(set.order.last().cloned().expect("just inserted"));
            }
        }
    }
    set.order
}

fn refinements(p: &TypeExpr, bound: usize, fixed: &BTreeSet<Atom>) -> Vec<TypeExpr> {
    let mut out = Vec::new();
    let atoms: Vec<Atom> = p.atoms().into_iter().filter(|a| !fixed.contains(a)).collect();
    let top = p.max_atom().unwrap_or(0).max(fixed.iter().next_back().map_or(0, |a| a.0)) + 1;
    let subst = |a: Atom, t: TypeExpr| {
        let mut m = BTreeMap::new();
        m.insert(a, t);
        Substitution::from_map(m).apply(p)
    };
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            out.push(subst(*b, TypeExpr::Atom(*a)));
        }
        for r in fixed {
            out.push(subst(*a, TypeExpr::Atom(*r)));
        }
        for k in 0.. {
            let args: TypeMultiset = (1..=k).map(|j| TypeExpr::atom(top + j)).collect();
            let q = subst(*a, TypeExpr::arrow(args, TypeExpr::atom(top)));
            if type_size(&q) > bound {
                break;
            }
            out.push(q);
        }
    }
    out.retain(|q| type_size(q) <= bound);
    out
}

/// The term to interpret: its normal form when one is reached within
/// `fuel`, otherwise the term itself.
fn normal_or_self(t: &Term, fuel: usize) -> (Term, bool) {
    if is_normal(t) {
        return (t.clone(), true);
    }
    let r = leftmost_reduce(t, fuel);
    match r.status {
        ReductionStatus::Normalized => (r.term, true),
        ReductionStatus::FuelExhausted => (t.clone(), false),
    }
}

/// The points of `⟦t⟧` of size at most `bound`.
///
/// For a normal term every derivation is no larger than its typing, so the
/// most general typings of derivations of size at most `bound` generate the
/// whole fragment. A non-normal term is interpreted through its normal form;
/// if none is found, the fragment is marked incomplete.
pub fn interpret(t: &Term, bound: usize) -> SemSet {
    interpret_with_fuel(t, bound, NORMALIZATION_FUEL)
}

pub fn interpret_with_fuel(t: &Term, bound: usize, fuel: usize) -> SemSet {
    let vars: Vec<Name> = t.free_vars().into_iter().collect();
    let (target, complete) = normal_or_self(t, fuel);
    let mut table = DerivationTable::new();
    let mut seeds = Vec::new();
    for s in 1..=bound {
        for d in table.typings(&target, s).expect("no limit set") {
            seeds.push(typing_as_type(&d.ctx, &vars, &d.ty));
        }
    }
    let fixed = BTreeSet::new();
    SemSet {
        vars,
        bound,
        points: close_under_instances(seeds, bound, &fixed),
        complete,
        fixed,
    }
}

/// A derivation of `x1 : a1, …, xm : am ⊢ t : α` for the point
/// `a1 … am α` (over the sorted free variables of `t`), searching
/// derivations of size at most `bound`.
pub fn derivation_for_point(t: &Term, point: &TypeExpr, bound: usize) -> Option<Derivation> {
    let vars: Vec<Name> = t.free_vars().into_iter().collect();
    let shift = point.max_atom().map_or(0, |m| m + 1);
    let mut table = DerivationTable::new();
    for s in 1..=bound {
        for d in table.typings(t, s).expect("no limit set") {
            let d = d.shift_atoms(shift);
            let general = typing_as_type(&d.ctx, &vars, &d.ty);
            if let Some(sigma) = match_type(&general, point).into_iter().next() {
                return Some(d.substitute(&sigma));
            }
        }
    }
    None
}

/// Types of the ground derivations of a closed normal term with size at
/// most `max_size`, by increasing size. Every point of `⟦t⟧` is an instance
/// of one of them, and each has the size of its derivation.
pub fn ground_points(t: &Term, max_size: usize) -> Result<Vec<TypeExpr>, PredictError> {
    if !t.is_closed() || !is_normal(t) {
        return Err(PredictError::NotClosedNormal);
    }
    let mut g = GroundPoints::new(t.clone());
    g.extend_to(max_size);
    Ok(g.points_up_to(max_size).cloned().collect())
}

/// A semantic environment: a finite set of points for each variable.
pub type SemEnv = BTreeMap<Name, Vec<TypeExpr>>;

/// The points `α` of size at most `bound` such that `Γ ⊢ t : α` for some
/// context `Γ` drawing each `Γ(x)` from `ρ(x)`, with derivations of size at
/// most `bound`. Atoms occurring in `ρ` are fixed; other atoms are free.
pub fn interpret_in_env(t: &Term, rho: &SemEnv, bound: usize) -> SemSet {
    let (target, complete) = normal_or_self(t, NORMALIZATION_FUEL);
    let mut fixed = BTreeSet::new();
    for ps in rho.values() {
        for p in ps {
            p.collect_atoms(&mut fixed);
        }
    }
    let shift = fixed.iter().next_back().map_or(0, |a| a.0 + 1);
    let mut table = DerivationTable::new();
    let mut seeds = Vec::new();
    for s in 1..=bound {
        for d in table.typings(&target, s).expect("no limit set") {
            let d = d.shift_atoms(shift);
            // One equation per element of each Γ(x), against a choice in ρ(x).
            let mut slots: Vec<(&TypeExpr, &[TypeExpr])> = Vec::new();
            let mut ok = true;
            for (x, a) in d.ctx.iter() {
                let choices = rho.get(x).map(Vec::as_slice).unwrap_or(&[]);
                if choices.is_empty() {
                    ok = false;
                    break;
                }
                for tau in a {
                    slots.push((tau, choices));
                }
            }
            if !ok {
                continue;
            }
            let mut pick = Vec::new();
            assign(&slots, &mut pick, &fixed, &mut |sigma| seeds.push(sigma.apply(&d.ty)));
        }
    }
    SemSet {
        vars: Vec::new(),
        bound,
        points: close_under_instances(seeds, bound, &fixed),
        complete,
        fixed,
    }
}

fn assign<'a>(
    slots: &[(&'a TypeExpr, &'a [TypeExpr])],
    pick: &mut Vec<&'a TypeExpr>,
    fixed: &BTreeSet<Atom>,
    emit: &mut dyn FnMut(&Substitution),
) {
    if pick.len() == slots.len() {
        let rigid = |a: Atom| fixed.contains(&a);
        let mut p = Problem::with_rigid(&rigid);
        for ((tau, _), chosen) in slots.iter().zip(pick.iter()) {
            p.types(tau, chosen);
        }
        for sigma in p.solve() {
            emit(&sigma);
        }
        return;
    }
    let (_, choices) = slots[pick.len()];
    for c in choices {
        pick.push(c);
        assign(slots, pick, fixed, emit);
        pick.pop();
    }
}

/// `{α | (a, α) ∈ d1, Supp(a) ⊆ d2}`, with membership in `d2` up to renaming.
pub fn semantic_apply(d1: &[TypeExpr], d2: &SemSet) -> Vec<TypeExpr> {
    let mut out: Vec<TypeExpr> = Vec::new();
    for p in d1 {
        if let Some(a) = p.as_arrow() {
            if a.arg.iter().all(|e| d2.contains(e)) && !out.contains(&a.res) {
                out.push(a.res.clone());
            }
        }
    }
    out
}

/// `2|a| + |α| + 2`: an upper bound on the steps of `(v)u` given
/// `(a, α) ∈ ⟦v⟧` and `Supp(a) ⊆ ⟦u⟧`; for the β machine `α` must be exact.
pub fn step_bound(point: &TypeExpr) -> Option<usize> {
    let a = point.as_arrow()?;
    Some(2 * crate::types::multiset_size(&a.arg) + type_size(&a.res) + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PredictMode {
    Head,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredictError {
    /// Both terms must be closed and normal.
    NotClosedNormal,
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("the predictor needs closed normal terms")
    }
}

impl core::error::Error for PredictError {}

/// The minimising pair: `(a, α) ∈ ⟦v⟧`, `a'` a multiset of points of
/// `⟦u⟧`, and a unifier of `a` and `a'` (exact on `α` in β mode).
#[derive(Clone, Debug)]
pub struct PredictionWitness {
    pub point: TypeExpr,
    pub args: TypeMultiset,
    pub unifier: Substitution,
    pub cost: usize,
}

#[derive(Clone, Debug)]
pub struct Prediction {
    /// The predicted number of steps of `((v)u, ∅) · ε`. `None` when no
    /// unifiable pair costs at most `searched_up_to`.
    pub steps: Option<usize>,
    /// Every cost up to this value was examined, so a prediction is exact
    /// and an absence means at least this many steps (or divergence).
    pub searched_up_to: usize,
    pub witness: Option<PredictionWitness>,
}

/// Largest point size the predictor escalates to.
pub const PREDICT_BOUND_CAP: usize = 32;

/// Predicts the steps of the head (or β) machine on `(v)u` from the points
/// of `⟦v⟧` and `⟦u⟧`, as the least `|(a, α)| + |a'| + 1` over unifiable
/// pairs. Starts with points up to `bound` and grows the bound by half, up to
/// [`PREDICT_BOUND_CAP`], until a pair is found.
pub fn predict_steps(v: &Term, u: &Term, mode: PredictMode, bound: usize) -> Result<Prediction, PredictError> {
    predict_steps_capped(v, u, mode, bound, PREDICT_BOUND_CAP.max(bound))
}

pub fn predict_steps_capped(
    v: &Term,
    u: &Term,
    mode: PredictMode,
    bound: usize,
    cap: usize,
) -> Result<Prediction, PredictError> {
    Predictor::new(cap).predict(v, u, mode, bound)
}

/// Runs predictions over many pairs, sharing ground points and search
/// results between them.
pub struct Predictor {
    points: BTreeMap<Term, GroundPoints>,
    memos: BTreeMap<(Term, PredictMode, usize), Memo>,
    /// Largest point size the search escalates to.
    pub cap: usize,
}

impl Predictor {
    pub fn new(cap: usize) -> Predictor {
        Predictor {
            points: BTreeMap::new(),
            memos: BTreeMap::new(),
            cap,
        }
    }

    fn points_of(&mut self, t: &Term, b: usize) {
        self.points
            .entry(t.clone())
            .or_insert_with(|| GroundPoints::new(t.clone()))
            .extend_to(b);
    }

    pub fn predict(&mut self, v: &Term, u: &Term, mode: PredictMode, bound: usize) -> Result<Prediction, PredictError> {
        for t in [v, u] {
            if !t.is_closed() || !is_normal(t) {
                return Err(PredictError::NotClosedNormal);
            }
        }
        let cap = self.cap.max(bound);
        let mut b = bound.max(1);
        loop {
            self.points_of(v, b);
            self.points_of(u, b);
            let (vp, up) = (&self.points[v].by_size, &self.points[u].by_size);
            let memo = self.memos.entry((u.clone(), mode, b)).or_default();
            // Costs up to b + 1 only involve points of size at most b.
            if let Some(w) = min_cost_within(vp, up, b + 1, mode, memo) {
                return Ok(Prediction {
                    steps: Some(w.cost),
                    searched_up_to: w.cost,
                    witness: Some(w),
                });
            }
            if b >= cap {
                return Ok(Prediction {
                    steps: None,
                    searched_up_to: b + 1,
                    witness: None,
                });
            }
            b = (b + b / 2).max(b + 1).min(cap);
        }
    }
}

/// The same minimisation over explicit finite point sets, indexed by size.
/// Only costs up to `max_cost` are examined.
pub fn predict_from_points(
    v_points: &[TypeExpr],
    u_points: &[TypeExpr],
    mode: PredictMode,
    max_cost: usize,
) -> Option<PredictionWitness> {
    let index = |ps: &[TypeExpr]| {
        let mut m: BTreeMap<usize, Vec<TypeExpr>> = BTreeMap::new();
        for p in ps {
            m.entry(type_size(p)).or_default().push(p.clone());
        }
        m
    };
    let vi = index(v_points);
    let ui = index(u_points);
    min_cost_within(&vi, &ui, max_cost, mode, &mut Memo::new())
}

/// Ground points of a closed normal term: the most general typings of its
/// derivations, whose sizes equal the derivation sizes.
pub struct GroundPoints {
    term: Term,
    table: DerivationTable,
    computed: usize,
    pub by_size: BTreeMap<usize, Vec<TypeExpr>>,
}

impl GroundPoints {
    pub fn new(term: Term) -> GroundPoints {
        GroundPoints {
            term,
            table: DerivationTable::new(),
            computed: 0,
            by_size: BTreeMap::new(),
        }
    }

    /// Adds the typings of derivations of size up to `bound`.
    pub fn extend_to(&mut self, bound: usize) {
        while self.computed < bound {
            self.computed += 1;
            let ds = self.table.typings(&self.term, self.computed).expect("no limit set");
            for d in ds {
                self.by_size.entry(type_size(&d.ty)).or_default().push(d.ty.clone());
            }
        }
    }

    pub fn points_up_to(&self, size: usize) -> impl Iterator<Item = &TypeExpr> {
        self.by_size.range(..=size).flat_map(|(_, v)| v.iter())
    }
}

fn pairs_at_cost(
    vp: &BTreeMap<usize, Vec<TypeExpr>>,
    up: &BTreeMap<usize, Vec<TypeExpr>>,
    cost: usize,
    mode: PredictMode,
) -> Option<PredictionWitness> {
    let pool: Vec<(usize, &TypeExpr)> = up.iter().flat_map(|(s, v)| v.iter().map(move |p| (*s, p))).collect();
    let min_u = pool.first().map_or(usize::MAX, |(s, _)| *s);
    for (&sv, points) in vp.range(..cost) {
        let rem = cost - 1 - sv;
        for p in points {
            let Some(arrow) = p.as_arrow() else { continue };
            let slots: Vec<&TypeExpr> = arrow.arg.iter().collect();
            if (slots.is_empty() && rem != 0) || slots.len().saturating_mul(min_u) > rem {
                continue;
            }
            let mut search = ArgSearch {
                pool: &pool,
                min_u,
                slots: &slots,
                res: &arrow.res,
                mode,
                chosen: Vec::new(),
                failed: BTreeSet::new(),
            };
            let offset = p.max_atom().map_or(0, |m| m + 1);
            if let Some(unifier) = search.assign(0, rem, Substitution::identity(), offset) {
                return Some(PredictionWitness {
                    point: p.clone(),
                    args: TypeMultiset::new(search.chosen),
                    unifier,
                    cost,
                });
            }
        }
    }
    None
}

/// Assigns a point of `u` to each element of `a` in turn, unifying as it
/// goes, so that incompatible partial choices are cut early. Each complete
/// assignment is one bijection between `a` and a multiset `a'`. What is
/// left to decide depends only on the remaining size and on the remaining
/// elements of `a` (and `α` in β mode) under the current substitution, up
/// to renaming, so failed states are remembered under that key.
struct ArgSearch<'a> {
    pool: &'a [(usize, &'a TypeExpr)],
    min_u: usize,
    slots: &'a [&'a TypeExpr],
    res: &'a TypeExpr,
    mode: PredictMode,
    chosen: Vec<TypeExpr>,
    failed: BTreeSet<(usize, Vec<TypeExpr>)>,
}

impl ArgSearch<'_> {
    fn assign(&mut self, i: usize, rem: usize, sigma: Substitution, offset: u32) -> Option<Substitution> {
        if i == self.slots.len() {
            let ok = rem == 0 && (self.mode == PredictMode::Head || is_exact(&sigma.apply(self.res)));
            return ok.then_some(sigma);
        }
        let reserve = (self.slots.len() - i - 1) * self.min_u;
        let room = rem.checked_sub(reserve)?;
        let key = (rem, state_key(&self.slots[i..], &sigma, self.res, self.mode));
        if self.failed.contains(&key) {
            return None;
        }
        let slot = sigma.apply(self.slots[i]);
        // Atoms the rest of the search can see; those of `q` are fresh.
        let observed = observed_atoms(&self.slots[i..], &sigma, self.res);
        let last = i + 1 == self.slots.len();
        for &(s, q) in self.pool {
            if s > room {
                break;
            }
            if last && s != room {
                continue;
            }
            if !same_outline(&slot, q) {
                continue;
            }
            let q = q.shift_atoms(offset);
            let next_offset = q.max_atom().map_or(offset, |m| m + 1);
            let mut problem = Problem::new();
            problem.types(&slot, &q).observe(&observed);
            for tau in problem.solve() {
                self.chosen.push(q.clone());
                if let Some(done) = self.assign(i + 1, rem - s, tau.after(&sigma), next_offset) {
                    return Some(done);
                }
                self.chosen.pop();
            }
        }
        self.failed.insert(key);
        None
    }
}

// The remaining slots under `sigma`, sorted by shape, then `σ(α)` when
// exactness matters, with all atoms renamed by first occurrence.
fn state_key(slots: &[&TypeExpr], sigma: &Substitution, res: &TypeExpr, mode: PredictMode) -> Vec<TypeExpr> {
    let mut items: Vec<TypeExpr> = slots.iter().map(|t| sigma.apply(t)).collect();
    items.sort_by_cached_key(|t| t.map_atoms(&mut |_| TypeExpr::atom(0)));
    if mode == PredictMode::Beta {
        items.push(sigma.apply(res));
    }
    let mut order = Vec::new();
    for t in &items {
        t.atoms_in_order(&mut order);
    }
    let mut map = BTreeMap::new();
    for a in order {
        let k = map.len() as u32;
        map.entry(a).or_insert(TypeExpr::atom(k));
    }
    let rename = Substitution::from_map(map);
    items.iter().map(|t| rename.apply(t)).collect()
}

// Atoms the rest of a search can see; those of the next `u` point are fresh.
fn observed_atoms(slots: &[&TypeExpr], sigma: &Substitution, res: &TypeExpr) -> BTreeSet<Atom> {
    let mut observed = BTreeSet::new();
    for t in slots {
        sigma.apply(t).collect_atoms(&mut observed);
    }
    sigma.apply(res).collect_atoms(&mut observed);
    observed
}

/// The least cost at most `max_cost` of a unifiable pair, with a witness.
/// `memo` may be shared between calls with the same `up` and `mode`.
fn min_cost_within(
    vp: &BTreeMap<usize, Vec<TypeExpr>>,
    up: &BTreeMap<usize, Vec<TypeExpr>>,
    max_cost: usize,
    mode: PredictMode,
    memo: &mut Memo,
) -> Option<PredictionWitness> {
    let pool: Vec<(usize, &TypeExpr)> = up.iter().flat_map(|(s, v)| v.iter().map(move |p| (*s, p))).collect();
    let min_u = pool.first().map_or(usize::MAX, |(s, _)| *s);
    let mut best: Option<usize> = None;
    for (&sv, points) in vp.range(..max_cost) {
        for p in points {
            let Some(arrow) = p.as_arrow() else { continue };
            // Only strictly cheaper pairs are of interest.
            let limit = best.map_or(max_cost, |c| c - 1);
            if sv + 1 > limit {
                break;
            }
            let slots: Vec<&TypeExpr> = arrow.arg.iter().collect();
            let mut search = MinSearch {
                pool: &pool,
                min_u,
                slots: &slots,
                res: &arrow.res,
                mode,
                memo: &mut *memo,
            };
            let offset = p.max_atom().map_or(0, |m| m + 1);
            if let Some(m) = search.least(0, &Substitution::identity(), offset, limit - sv - 1) {
                best = Some(sv + m + 1);
            }
        }
    }
    pairs_at_cost(vp, up, best?, mode)
}

enum Known {
    Least(usize),
    NoneUpTo(usize),
}

/// Completion results by search state, valid for one pool of `u` points.
type Memo = BTreeMap<Vec<TypeExpr>, Known>;

/// The least total size of points of `u` completing an assignment, by
/// branch and bound over the same states as [`ArgSearch`].
struct MinSearch<'a> {
    pool: &'a [(usize, &'a TypeExpr)],
    min_u: usize,
    slots: &'a [&'a TypeExpr],
    res: &'a TypeExpr,
    mode: PredictMode,
    memo: &'a mut Memo,
}

impl MinSearch<'_> {
    fn least(&mut self, i: usize, sigma: &Substitution, offset: u32, budget: usize) -> Option<usize> {
        let left = self.slots.len() - i;
        if left == 0 {
            let ok = self.mode == PredictMode::Head || is_exact(&sigma.apply(self.res));
            return ok.then_some(0);
        }
        if left.saturating_mul(self.min_u) > budget {
            return None;
        }
        let key = state_key(&self.slots[i..], sigma, self.res, self.mode);
        match self.memo.get(&key) {
            Some(Known::Least(m)) => return (*m <= budget).then_some(*m),
            Some(Known::NoneUpTo(b)) if budget <= *b => return None,
            _ => {}
        }
        let slot = sigma.apply(self.slots[i]);
        let observed = observed_atoms(&self.slots[i..], sigma, self.res);
        let mut best: Option<usize> = None;
        for &(s, q) in self.pool {
            let limit = best.map_or(budget, |b| b - 1);
            if s + (left - 1) * self.min_u > limit {
                break;
            }
            if !same_outline(&slot, q) {
                continue;
            }
            let q = q.shift_atoms(offset);
            let next_offset = q.max_atom().map_or(offset, |m| m + 1);
            let mut problem = Problem::new();
            problem.types(&slot, &q).observe(&observed);
            for tau in problem.solve() {
                let limit = best.map_or(budget, |b| b - 1);
                if s > limit {
                    break;
                }
                if let Some(m) = self.least(i + 1, &tau.after(sigma), next_offset, limit - s) {
                    best = Some(s + m);
                }
            }
        }
        let known = match best {
            Some(m) => Known::Least(m),
            None => Known::NoneUpTo(budget),
        };
        self.memo.insert(key, known);
        best
    }
}

/// What the predictor can certify about `(v)u` within a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalizability {
    /// The β machine stops, after this many steps.
    Normalizable { steps: usize },
    /// The head machine stops after `head_steps`; the β machine was not
    /// shown to stop within the bound.
    HeadNormalizable { head_steps: usize },
    /// Neither machine was shown to stop within the bound.
    Unknown,
}

pub fn check_app_normalizability(v: &Term, u: &Term, bound: usize) -> Result<Normalizability, PredictError> {
    let beta = predict_steps_capped(v, u, PredictMode::Beta, bound, bound)?;
    if let Some(steps) = beta.steps {
        return Ok(Normalizability::Normalizable { steps });
    }
    let head = predict_steps_capped(v, u, PredictMode::Head, bound, bound)?;
    Ok(match head.steps {
        Some(head_steps) => Normalizability::HeadNormalizable { head_steps },
        None => Normalizability::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{church, identity};
    use crate::parse::parse;
    use crate::types::parse_type;
    use alloc::vec;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn identity_up_to_four() {
        let s = interpret(&identity(), 4);
        assert_eq!(s.len(), 2, "{s}");
        assert!(s.contains(&t("([γ0], γ0)")));
        assert!(s.contains(&t("([([], γ0)], ([], γ0))")));
        assert!(!s.contains(&t("([γ0, γ0], γ0)")));
    }

    #[test]
    fn beta_invariance() {
        let a = interpret(&p("(\\x.x)\\y.y"), 6);
        let b = interpret(&identity(), 6);
        assert!(a.same_points(&b));
    }

    #[test]
    fn predicts_the_running_example() {
        let pr = predict_steps(&p("\\x.(x)x"), &identity(), PredictMode::Head, 8).unwrap();
        assert_eq!(pr.steps, Some(9));
        let w = pr.witness.unwrap();
        assert_eq!(type_size(&w.point), 4);
        assert_eq!(crate::types::multiset_size(&w.args), 4);
    }

    #[test]
    fn predicts_church_numerals() {
        for n in 1..4 {
            let pr = predict_steps(&church(n), &identity(), PredictMode::Head, 8).unwrap();
            assert_eq!(pr.steps, Some(4 * (n + 1)));
        }
    }

    #[test]
    fn semantic_application() {
        let d2 = interpret(&identity(), 2);
        let d1 = vec![t("([([γ0], γ0)], γ1)"), t("([γ0], γ0)")];
        let r = semantic_apply(&d1, &d2);
        assert_eq!(r, vec![t("γ1")]);
    }

    #[test]
    fn environment_fixes_atoms() {
        let mut rho = SemEnv::new();
        rho.insert(Name::new("y"), vec![t("([γ0], γ0)")]);
        rho.insert(Name::new("x"), vec![t("γ0")]);
        let s = interpret_in_env(&p("(y)x"), &rho, 6);
        assert_eq!(s.points, vec![t("γ0")]);
    }

    #[test]
    fn zero_has_the_empty_argument_point() {
        assert!(interpret(&church(0), 3).contains(&t("([], ([γ0], γ0))")));
        assert!(interpret(&p("(\\x.(x)x)\\x.(x)x"), 8).is_empty());
    }

    #[test]
    fn points_have_derivations() {
        let z = p("\\z.\\x.(z)x");
        let d = derivation_for_point(&z, &t("([([γ0], γ0)], ([γ0], γ0))"), 10).unwrap();
        crate::derivation::check_derivation(&d, &z).unwrap();
        assert!(derivation_for_point(&z, &t("([([γ0], γ0)], ([γ0, γ0], γ0))"), 10).is_none());
    }

    #[test]
    fn bound_formula() {
        assert_eq!(step_bound(&t("([γ0, ([γ0], γ0)], γ0)")), Some(2 * 3 + 1 + 2));
        assert_eq!(step_bound(&t("γ0")), None);
    }
}

//! Search for derivations of minimal size.
//!
//! For each subterm and each size `s`, the table holds the most general
//! typings of derivations of size exactly `s`, each with a witness. An
//! application `(v)u` of size `s` combines a typing of `v` of size `s0` with
//! a multiset of typings of `u` whose sizes add up to `s - 1 - s0`, glued by
//! every most general unifier. Typings are stored with atoms renamed
//! canonically, so equal typings from different skeletons are merged.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::derivation::Derivation;
use crate::term::Term;
use crate::types::{is_exact, is_exact_context, Atom, Context, TypeExpr, TypeMultiset};
use crate::unify::{Problem, Substitution};

/// Outcome of a bounded search.
#[derive(Clone, Debug)]
pub enum SearchResult {
    Found {
        size: usize,
        derivation: Derivation,
        explored: usize,
    },
    /// No derivation of size at most `bound`.
    Exhausted { bound: usize, explored: usize },
    /// The candidate limit was hit before the search completed.
    GaveUp { size_reached: usize, explored: usize },
}

impl SearchResult {
    pub fn size(&self) -> Option<usize> {
        match self {
            SearchResult::Found { size, .. } => Some(*size),
            _ => None,
        }
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            SearchResult::Found { derivation, .. } => Some(derivation),
            _ => None,
        }
    }

    pub fn explored(&self) -> usize {
        match self {
            SearchResult::Found { explored, .. }
            | SearchResult::Exhausted { explored, .. }
            | SearchResult::GaveUp { explored, .. } => *explored,
        }
    }
}

/// Memo table of most general typings, shared across queries.
pub struct DerivationTable {
    cells: BTreeMap<Term, Vec<Option<Vec<Derivation>>>>,
    explored: usize,
    /// Maximum number of glue attempts before giving up.
    pub max_explored: usize,
}

impl Default for DerivationTable {
    fn default() -> Self {
        DerivationTable::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitReached;

impl DerivationTable {
    pub fn new() -> DerivationTable {
        DerivationTable {
            cells: BTreeMap::new(),
            explored: 0,
            max_explored: usize::MAX,
        }
    }

    pub fn with_limit(max_explored: usize) -> DerivationTable {
        DerivationTable {
            max_explored,
            ..DerivationTable::new()
        }
    }

    /// Candidate combinations tried so far.
    pub fn explored(&self) -> usize {
        self.explored
    }

    /// Most general derivations of `t` of size exactly `s`, up to renaming
    /// of atoms. Atoms of each entry are numbered from 0.
    pub fn typings(&mut self, t: &Term, s: usize) -> Result<&[Derivation], LimitReached> {
        let cached = self
            .cells
            .get(t)
            .and_then(|v| v.get(s))
            .map(|c| c.is_some())
            .unwrap_or(false);
        if !cached {
            let v = self.compute(t, s)?;
            let row = self.cells.entry(t.clone()).or_default();
            if row.len() <= s {
                row.resize(s + 1, None);
            }
            row[s] = Some(v);
        }
        Ok(self.cells[t][s].as_deref().expect("filled above"))
    }

    fn compute(&mut self, t: &Term, s: usize) -> Result<Vec<Derivation>, LimitReached> {
        let mut out = Dedup::default();
        match t {
            Term::Var(x) => {
                if s == 1 {
                    out.push(Derivation::axiom(x.clone(), TypeExpr::atom(0)));
                }
            }
            Term::Abs(x, b) => {
                if s >= 2 {
                    let body = self.typings(b, s - 1)?.to_vec();
                    for d in body {
                        out.push(Derivation::abs(x.clone(), d));
                    }
                }
            }
            Term::App(v, u) => {
                for s0 in 1..s {
                    let funs = self.typings(v, s0)?.to_vec();
                    if funs.is_empty() {
                        continue;
                    }
                    let rem = s - 1 - s0;
                    let mut pool: Vec<Derivation> = Vec::new();
                    let mut pool_sizes = Vec::new();
                    for si in 1..=rem {
                        for d in self.typings(u, si)? {
                            pool.push(d.clone());
                            pool_sizes.push(si);
                        }
                    }
                    for f in &funs {
                        let arity = f.ty.as_arrow().map(|a| a.arg.len());
                        let mut picks = Vec::new();
                        select(&pool_sizes, 0, rem, arity, &mut Vec::new(), &mut picks);
                        for pick in picks {
                            self.explored += 1;
                            if self.explored > self.max_explored {
                                return Err(LimitReached);
                            }
                            let args: Vec<&Derivation> = pick.iter().map(|&i| &pool[i]).collect();
                            for d in glue(f, &args, u) {
                                out.push(d);
                            }
                        }
                    }
                }
            }
        }
        Ok(out.items)
    }

    /// The least size of a derivation of `t`, searching sizes `1..=bound`.
    /// With `exact_only`, only typings in `Φ^ex × D^ex` count.
    pub fn min_derivation_size(&mut self, t: &Term, bound: usize, exact_only: bool) -> SearchResult {
        for s in 1..=bound {
            let found = match self.typings(t, s) {
                Ok(ds) => ds
                    .iter()
                    .find(|d| !exact_only || (is_exact(&d.ty) && is_exact_context(&d.ctx)))
                    .cloned(),
                Err(LimitReached) => {
                    return SearchResult::GaveUp {
                        size_reached: s,
                        explored: self.explored,
                    }
                }
            };
            if let Some(derivation) = found {
                return SearchResult::Found {
                    size: s,
                    derivation,
                    explored: self.explored,
                };
            }
        }
        SearchResult::Exhausted {
            bound,
            explored: self.explored,
        }
    }
}

/// Least derivation size of `t` up to `bound`, with a fresh table.
pub fn min_derivation_size(t: &Term, bound: usize, exact_only: bool) -> SearchResult {
    DerivationTable::new().min_derivation_size(t, bound, exact_only)
}

// Nondecreasing index sequences into the pool with sizes summing to `rem`,
// of length `arity` when given.
fn select(sizes: &[usize], start: usize, rem: usize, arity: Option<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rem == 0 {
        if arity.is_none_or(|n| n == cur.len()) {
            out.push(cur.clone());
        }
        return;
    }
    if arity.is_some_and(|n| cur.len() >= n) {
        return;
    }
    for i in start..sizes.len() {
        if sizes[i] <= rem {
            cur.push(i);
            select(sizes, i, rem - sizes[i], arity, cur, out);
            cur.pop();
        }
    }
}

/// Application nodes from a function derivation and argument derivations,
/// one per most general unifier.
fn glue(f: &Derivation, args: &[&Derivation], u: &Term) -> Vec<Derivation> {
    let mut offset = max_atom(f).map_or(0, |m| m + 1);
    let mut shifted = Vec::with_capacity(args.len());
    for a in args {
        let d = a.shift_atoms(offset);
        offset = max_atom(&d).map_or(offset, |m| m + 1);
        shifted.push(d);
    }
    let arg_types: TypeMultiset = shifted.iter().map(|d| d.ty.clone()).collect();
    let mut p = Problem::new();
    match f.ty.as_arrow() {
        Some(a) => {
            p.multisets(&a.arg, &arg_types);
        }
        None => {
            let beta = TypeExpr::Atom(Atom(offset));
            p.types(&f.ty, &TypeExpr::arrow(arg_types, beta));
        }
    }
    let mut out = Vec::new();
    for sigma in p.solve() {
        let fun = f.substitute(&sigma);
        let ds: Vec<Derivation> = shifted.iter().map(|d| d.substitute(&sigma)).collect();
        if let Ok(d) = Derivation::app(fun, u.clone(), ds) {
            out.push(d);
        }
    }
    out
}

pub(crate) fn max_atom(d: &Derivation) -> Option<u32> {
    let mut atoms = BTreeSet::new();
    collect_derivation_atoms(d, &mut atoms);
    atoms.iter().next_back().map(|a| a.0)
}

fn collect_derivation_atoms(d: &Derivation, out: &mut BTreeSet<Atom>) {
    use crate::derivation::Inference;
    d.ty.collect_atoms(out);
    d.ctx.collect_atoms(out);
    match &d.rule {
        Inference::Axiom(_) => {}
        Inference::Abs(_, p) => collect_derivation_atoms(p, out),
        Inference::App { fun, args, .. } => {
            collect_derivation_atoms(fun, out);
            for a in args {
                collect_derivation_atoms(a, out);
            }
        }
    }
}

/// Renames the atoms of a derivation to 0, 1, … in order of first
/// occurrence in its conclusion, then in the rest of the tree.
pub fn canonicalize(d: &Derivation) -> Derivation {
    let mut order = Vec::new();
    conclusion_atoms(&d.ctx, &d.ty, &mut order);
    tree_atoms(d, &mut order);
    d.substitute(&first_occurrence_renaming(&order))
}

// Maps the atoms to 0, 1, … in the given order of first occurrence.
fn first_occurrence_renaming(order: &[Atom]) -> Substitution {
    let mut map = BTreeMap::new();
    for a in order {
        let k = map.len() as u32;
        map.entry(*a).or_insert(TypeExpr::atom(k));
    }
    Substitution::from_map(map)
}

pub(crate) fn conclusion_atoms(ctx: &Context, ty: &TypeExpr, order: &mut Vec<Atom>) {
    for (_, a) in ctx.iter() {
        for t in a {
            t.atoms_in_order(order);
        }
    }
    ty.atoms_in_order(order);
}

fn tree_atoms(d: &Derivation, order: &mut Vec<Atom>) {
    use crate::derivation::Inference;
    conclusion_atoms(&d.ctx, &d.ty, order);
    match &d.rule {
        Inference::Axiom(_) => {}
        Inference::Abs(_, p) => tree_atoms(p, order),
        Inference::App { fun, args, .. } => {
            tree_atoms(fun, order);
            for a in args {
                tree_atoms(a, order);
            }
        }
    }
}

#[derive(Default)]
struct Dedup {
    keys: BTreeSet<(Context, TypeExpr)>,
    items: Vec<Derivation>,
}

impl Dedup {
    fn push(&mut self, d: Derivation) {
        // The conclusion is renamed first, so its canonical form is known
        // before touching the rest of the tree.
        let mut order = Vec::new();
        conclusion_atoms(&d.ctx, &d.ty, &mut order);
        let rename = first_occurrence_renaming(&order);
        if self.keys.insert((rename.apply_context(&d.ctx), rename.apply(&d.ty))) {
            self.items.push(canonicalize(&d));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_derivation;
    use crate::parse::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn minimal_sizes_of_small_terms() {
        assert_eq!(min_derivation_size(&p("x"), 5, false).size(), Some(1));
        assert_eq!(min_derivation_size(&p("\\y.y"), 5, false).size(), Some(2));
        let t = p("(\\x.(x)x)\\y.y");
        let r = min_derivation_size(&t, 9, false);
        assert_eq!(r.size(), Some(9));
        check_derivation(r.derivation().unwrap(), &t).unwrap();
        assert!(matches!(min_derivation_size(&t, 8, false), SearchResult::Exhausted { .. }));
    }

    #[test]
    fn omega_is_untypable() {
        let omega = p("(\\x.(x)x)\\x.(x)x");
        assert!(matches!(min_derivation_size(&omega, 14, false), SearchResult::Exhausted { .. }));
    }

    #[test]
    fn canonical_names() {
        let d = Derivation::axiom(crate::term::Name::new("x"), TypeExpr::atom(7));
        assert_eq!(canonicalize(&d).ty, TypeExpr::atom(0));
    }
}

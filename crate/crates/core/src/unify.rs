//! Substitutions over atoms, and unification of types and multisets.
//!
//! Multiset equations are solved by trying every pairing of elements, so a
//! problem can have several most general unifiers; all of them are returned.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::types::{Atom, Context, TypeExpr, TypeMultiset};

/// An idempotent substitution: no atom in the domain occurs in the image.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Substitution(BTreeMap<Atom, TypeExpr>);

impl Substitution {
    pub fn identity() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn from_map(map: BTreeMap<Atom, TypeExpr>) -> Self {
        Substitution(map)
    }

    pub fn get(&self, a: Atom) -> Option<&TypeExpr> {
        self.0.get(&a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &TypeExpr)> {
        self.0.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, t: &TypeExpr) -> TypeExpr {
        if self.0.is_empty() {
            return t.clone();
        }
        t.map_atoms(&mut |a| self.0.get(&a).cloned().unwrap_or(TypeExpr::Atom(a)))
    }

    pub fn apply_multiset(&self, m: &TypeMultiset) -> TypeMultiset {
        m.map(|t| self.apply(t))
    }

    pub fn apply_context(&self, c: &Context) -> Context {
        c.map_types(|t| self.apply(t))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Substitution) -> Substitution {
        let mut m: BTreeMap<Atom, TypeExpr> = first.0.iter().map(|(a, t)| (*a, self.apply(t))).collect();
        for (a, t) in &self.0 {
            m.entry(*a).or_insert_with(|| t.clone());
        }
        m.retain(|a, t| *t != TypeExpr::Atom(*a));
        Substitution(m)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} := {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone)]
enum Equation {
    Types(TypeExpr, TypeExpr),
    Multisets(Vec<TypeExpr>, Vec<TypeExpr>),
}

#[derive(Clone, Default)]
struct Bindings(BTreeMap<Atom, TypeExpr>);

impl Bindings {
    fn walk<'a>(&'a self, mut t: &'a TypeExpr) -> &'a TypeExpr {
        while let TypeExpr::Atom(a) = t {
            match self.0.get(a) {
                Some(u) => t = u,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, x: Atom, t: &TypeExpr) -> bool {
        match self.walk(t) {
            TypeExpr::Atom(a) => *a == x,
            TypeExpr::Arrow(a) => a.arg.iter().any(|s| self.occurs(x, s)) || self.occurs(x, &a.res),
        }
    }

    fn resolve(&self, t: &TypeExpr) -> TypeExpr {
        match self.walk(t) {
            TypeExpr::Atom(a) => TypeExpr::Atom(*a),
            TypeExpr::Arrow(a) => TypeExpr::arrow(a.arg.map(|s| self.resolve(s)), self.resolve(&a.res)),
        }
    }
}

/// A unification problem. Atoms for which `rigid` holds behave as constants.
pub struct Problem<'r> {
    equations: Vec<Equation>,
    rigid: &'r dyn Fn(Atom) -> bool,
    /// Stop after this many solutions.
    pub limit: usize,
    observed: Option<&'r BTreeSet<Atom>>,
}

fn never_rigid(_: Atom) -> bool {
    false
}

impl Default for Problem<'_> {
    fn default() -> Self {
        Problem::new()
    }
}

impl<'r> Problem<'r> {
    pub fn new() -> Problem<'r> {
        Problem {
            equations: Vec::new(),
            rigid: &never_rigid,
            limit: usize::MAX,
            observed: None,
        }
    }

    pub fn with_rigid(rigid: &'r dyn Fn(Atom) -> bool) -> Problem<'r> {
        Problem {
            equations: Vec::new(),
            rigid,
            limit: usize::MAX,
            observed: None,
        }
    }

    /// Only the images of these atoms matter to the caller: unifiers that
    /// agree on them up to renaming count as one, and branches that differ
    /// by swapping two unobserved atoms are explored once. The returned
    /// substitutions still cover every atom of the problem.
    pub fn observe(&mut self, atoms: &'r BTreeSet<Atom>) -> &mut Self {
        self.observed = Some(atoms);
        self
    }

    pub fn types(&mut self, a: &TypeExpr, b: &TypeExpr) -> &mut Self {
        self.equations.push(Equation::Types(a.clone(), b.clone()));
        self
    }

    pub fn multisets(&mut self, a: &TypeMultiset, b: &TypeMultiset) -> &mut Self {
        self.equations
            .push(Equation::Multisets(a.as_slice().to_vec(), b.as_slice().to_vec()));
        self
    }

    /// All most general unifiers, up to renaming, restricted to the atoms
    /// of the problem.
    pub fn solve(&self) -> Vec<Substitution> {
        let mut atoms = BTreeSet::new();
        for e in &self.equations {
            match e {
                Equation::Types(a, b) => {
                    a.collect_atoms(&mut atoms);
                    b.collect_atoms(&mut atoms);
                }
                Equation::Multisets(a, b) => {
                    for t in a.iter().chain(b) {
                        t.collect_atoms(&mut atoms);
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut keys = BTreeSet::new();
        self.search(Bindings::default(), self.equations.clone(), &atoms, &mut out, &mut keys);
        out
    }

    /// Whether some unifier exists.
    pub fn solvable(&self) -> bool {
        let p = Problem {
            equations: self.equations.clone(),
            rigid: self.rigid,
            limit: 1,
            observed: self.observed,
        };
        !p.solve().is_empty()
    }

    fn search(
        &self,
        mut b: Bindings,
        mut eqs: Vec<Equation>,
        atoms: &BTreeSet<Atom>,
        out: &mut Vec<Substitution>,
        keys: &mut BTreeSet<Vec<TypeExpr>>,
    ) {
        if out.len() >= self.limit {
            return;
        }
        // Solve every type equation first; multiset equations wait.
        let mut pending: Vec<(Vec<TypeExpr>, Vec<TypeExpr>)> = Vec::new();
        loop {
            while let Some(eq) = eqs.pop() {
                match eq {
                    Equation::Types(s, t) => {
                        let s = b.walk(&s).clone();
                        let t = b.walk(&t).clone();
                        match (&s, &t) {
                            (TypeExpr::Atom(x), TypeExpr::Atom(y)) if x == y => {}
                            (TypeExpr::Atom(x), _) if !(self.rigid)(*x) => {
                                if b.occurs(*x, &t) {
                                    return;
                                }
                                b.0.insert(*x, t);
                            }
                            (_, TypeExpr::Atom(y)) if !(self.rigid)(*y) => {
                                if b.occurs(*y, &s) {
                                    return;
                                }
                                b.0.insert(*y, s);
                            }
                            (TypeExpr::Arrow(p), TypeExpr::Arrow(q)) => {
                                if p.arg.len() != q.arg.len() {
                                    return;
                                }
                                eqs.push(Equation::Multisets(p.arg.as_slice().to_vec(), q.arg.as_slice().to_vec()));
                                eqs.push(Equation::Types(p.res.clone(), q.res.clone()));
                            }
                            _ => return,
                        }
                    }
                    Equation::Multisets(l, r) => {
                        if l.len() != r.len() {
                            return;
                        }
                        if l.len() == 1 {
                            eqs.push(Equation::Types(l[0].clone(), r[0].clone()));
                        } else if !l.is_empty() {
                            pending.push((l, r));
                        }
                    }
                }
            }
            // Branch on the element with the fewest possible partners.
            let mut best: Option<(usize, usize, Vec<usize>)> = None;
            for (k, (l, r)) in pending.iter().enumerate() {
                for (i, x) in l.iter().enumerate() {
                    let mut partners: Vec<usize> = Vec::new();
                    let mut seen: Vec<TypeExpr> = Vec::new();
                    for (j, y) in r.iter().enumerate() {
                        if !self.may_unify(&b, x, y) {
                            continue;
                        }
                        // Identical partners lead to the same unifiers.
                        let y = b.resolve(y);
                        if !seen.contains(&y) {
                            seen.push(y);
                            partners.push(j);
                        }
                    }
                    if best.as_ref().is_none_or(|(_, _, p)| partners.len() < p.len()) {
                        best = Some((k, i, partners));
                    }
                }
            }
            let Some((k, i, partners)) = best else { break };
            let (mut l, r) = pending.swap_remove(k);
            let first = l.swap_remove(i);
            if partners.len() == 1 {
                let mut r = r;
                let partner = r.swap_remove(partners[0]);
                eqs.push(Equation::Multisets(l, r));
                eqs.push(Equation::Types(first, partner));
                continue;
            }
            let partners = match self.observed {
                Some(observed) => self.break_symmetry(&b, observed, &pending, (&l, &first), &r, partners),
                None => partners,
            };
            for j in partners {
                let mut rest = r.clone();
                let partner = rest.swap_remove(j);
                let mut eqs2: Vec<Equation> = pending
                    .iter()
                    .map(|(l, r)| Equation::Multisets(l.clone(), r.clone()))
                    .collect();
                eqs2.push(Equation::Multisets(l.clone(), rest));
                eqs2.push(Equation::Types(first.clone(), partner));
                self.search(b.clone(), eqs2, atoms, out, keys);
                if out.len() >= self.limit {
                    return;
                }
            }
            return;
        }
        let mut map = BTreeMap::new();
        for a in atoms {
            let t = b.resolve(&TypeExpr::Atom(*a));
            if t != TypeExpr::Atom(*a) {
                map.insert(*a, t);
            }
        }
        let sigma = Substitution(map);
        let key_atoms = self.observed.unwrap_or(atoms);
        if keys.insert(unifier_key(&sigma, key_atoms, self.rigid)) {
            out.push(sigma);
        }
    }

    // Drops partners that are unobserved atoms interchangeable with an
    // earlier partner: swapping the two leaves the whole state unchanged,
    // so both branches give the same unifiers up to renaming.
    fn break_symmetry(
        &self,
        b: &Bindings,
        observed: &BTreeSet<Atom>,
        pending: &[(Vec<TypeExpr>, Vec<TypeExpr>)],
        current: (&[TypeExpr], &TypeExpr),
        r: &[TypeExpr],
        partners: Vec<usize>,
    ) -> Vec<usize> {
        let free = |a: Atom| !observed.contains(&a) && !(self.rigid)(a);
        let mut l = current.0.to_vec();
        l.push(current.1.clone());
        let mut all: Vec<(Vec<TypeExpr>, Vec<TypeExpr>)> = pending.to_vec();
        all.push((l, r.to_vec()));
        let base = signature(b, observed, &all, None);
        let mut kept: Vec<usize> = Vec::new();
        let mut kept_atoms: Vec<Atom> = Vec::new();
        for j in partners {
            if let TypeExpr::Atom(d) = b.walk(&r[j]) {
                let d = *d;
                if free(d) {
                    let symmetric = kept_atoms
                        .iter()
                        .any(|&e| signature(b, observed, &all, Some((d, e))) == base);
                    if symmetric {
                        continue;
                    }
                    kept_atoms.push(d);
                }
            }
            kept.push(j);
        }
        kept
    }

    // A cheap necessary condition for unifiability: matching head shapes.
    fn may_unify(&self, b: &Bindings, s: &TypeExpr, t: &TypeExpr) -> bool {
        match (b.walk(s), b.walk(t)) {
            (TypeExpr::Atom(x), TypeExpr::Atom(y)) => x == y || !(self.rigid)(*x) || !(self.rigid)(*y),
            (TypeExpr::Atom(x), _) | (_, TypeExpr::Atom(x)) => !(self.rigid)(*x),
            (TypeExpr::Arrow(p), TypeExpr::Arrow(q)) => {
                p.arg.len() == q.arg.len() && self.may_unify(b, &p.res, &q.res)
            }
        }
    }
}

/// Whether two types have the same outline, reading atoms as wildcards:
/// a cheap necessary condition for unifiability without rigid atoms.
pub fn same_outline(a: &TypeExpr, b: &TypeExpr) -> bool {
    match (a, b) {
        (TypeExpr::Arrow(p), TypeExpr::Arrow(q)) => p.arg.len() == q.arg.len() && same_outline(&p.res, &q.res),
        _ => true,
    }
}

// The resolved images of the observed atoms and the pending multiset
// equations, optionally with two atoms swapped.
fn signature(
    b: &Bindings,
    observed: &BTreeSet<Atom>,
    eqs: &[(Vec<TypeExpr>, Vec<TypeExpr>)],
    swap: Option<(Atom, Atom)>,
) -> (Vec<TypeExpr>, Vec<TypeExpr>) {
    let fix = |t: &TypeExpr| {
        let t = b.resolve(t);
        match swap {
            None => t,
            Some((x, y)) => t.map_atoms(&mut |a| {
                TypeExpr::Atom(if a == x {
                    y
                } else if a == y {
                    x
                } else {
                    a
                })
            }),
        }
    };
    let images = observed.iter().map(|a| fix(&TypeExpr::Atom(*a))).collect();
    let mut encoded: Vec<TypeExpr> = eqs
        .iter()
        .map(|(l, r)| {
            let l: TypeMultiset = l.iter().map(fix).collect();
            let r: TypeMultiset = r.iter().map(fix).collect();
            TypeExpr::arrow(l, TypeExpr::arrow(r, TypeExpr::atom(0)))
        })
        .collect();
    encoded.sort();
    (images, encoded)
}

// Images of the problem atoms with flexible atoms renamed by first occurrence.
fn unifier_key(sigma: &Substitution, atoms: &BTreeSet<Atom>, rigid: &dyn Fn(Atom) -> bool) -> Vec<TypeExpr> {
    let images: Vec<TypeExpr> = atoms.iter().map(|a| sigma.apply(&TypeExpr::Atom(*a))).collect();
    let mut order = Vec::new();
    for t in &images {
        t.atoms_in_order(&mut order);
    }
    let renaming: BTreeMap<Atom, u32> = order
        .iter()
        .filter(|a| !rigid(**a))
        .enumerate()
        .map(|(i, a)| (*a, i as u32 + (1 << 30)))
        .collect();
    images
        .iter()
        .map(|t| t.map_atoms(&mut |a| TypeExpr::Atom(renaming.get(&a).map_or(a, |i| Atom(*i)))))
        .collect()
}

/// Most general unifiers of two types.
pub fn unify_types(a: &TypeExpr, b: &TypeExpr) -> Vec<Substitution> {
    let mut p = Problem::new();
    p.types(a, b);
    p.solve()
}

/// Most general unifiers of two multisets.
pub fn unify_multisets(a: &TypeMultiset, b: &TypeMultiset) -> Vec<Substitution> {
    let mut p = Problem::new();
    p.multisets(a, b);
    p.solve()
}

/// Substitutions `σ` with `σ(pattern) = target`, treating the atoms of
/// `target` as constants. Pattern and target atoms are assumed disjoint.
pub fn match_type(pattern: &TypeExpr, target: &TypeExpr) -> Vec<Substitution> {
    let fixed = target.atoms();
    let rigid = |a: Atom| fixed.contains(&a);
    let mut p = Problem::with_rigid(&rigid);
    p.types(pattern, target);
    p.solve()
}

/// Whether two types are equal up to a bijective renaming of atoms.
pub fn renaming_equivalent(a: &TypeExpr, b: &TypeExpr) -> bool {
    renaming_between(&[(a.clone(), b.clone())], &[])
}

/// As [`renaming_equivalent`], with the atoms satisfying `fixed` mapped to themselves.
pub fn renaming_equivalent_fixing(a: &TypeExpr, b: &TypeExpr, fixed: &dyn Fn(Atom) -> bool) -> bool {
    iso(alloc::vec![Pair::Types(a.clone(), b.clone())], &BTreeMap::new(), &BTreeMap::new(), fixed)
}

/// Whether there is one bijective renaming of atoms taking each left type
/// to its right partner and each left multiset to its right partner.
pub fn renaming_between(types: &[(TypeExpr, TypeExpr)], multisets: &[(TypeMultiset, TypeMultiset)]) -> bool {
    let mut pending: Vec<Pair> = types.iter().map(|(a, b)| Pair::Types(a.clone(), b.clone())).collect();
    for (a, b) in multisets {
        if a.len() != b.len() {
            return false;
        }
        pending.push(Pair::Multisets(a.as_slice().to_vec(), b.as_slice().to_vec()));
    }
    iso(pending, &BTreeMap::new(), &BTreeMap::new(), &|_| false)
}

#[derive(Clone)]
enum Pair {
    Types(TypeExpr, TypeExpr),
    Multisets(Vec<TypeExpr>, Vec<TypeExpr>),
}

// Backtracking search for a bijection; multisets try every shape-compatible pairing.
fn iso(
    mut pending: Vec<Pair>,
    fwd: &BTreeMap<Atom, Atom>,
    bwd: &BTreeMap<Atom, Atom>,
    fixed: &dyn Fn(Atom) -> bool,
) -> bool {
    let mut fwd = fwd.clone();
    let mut bwd = bwd.clone();
    while let Some(p) = pending.pop() {
        match p {
            Pair::Types(TypeExpr::Atom(x), TypeExpr::Atom(y)) if fixed(x) || fixed(y) => {
                if x != y {
                    return false;
                }
            }
            Pair::Types(TypeExpr::Atom(x), TypeExpr::Atom(y)) => match (fwd.get(&x), bwd.get(&y)) {
                (Some(y2), Some(x2)) if *y2 == y && *x2 == x => {}
                (None, None) => {
                    fwd.insert(x, y);
                    bwd.insert(y, x);
                }
                _ => return false,
            },
            Pair::Types(TypeExpr::Arrow(p), TypeExpr::Arrow(q)) => {
                if p.arg.len() != q.arg.len() {
                    return false;
                }
                pending.push(Pair::Types(p.res.clone(), q.res.clone()));
                pending.push(Pair::Multisets(p.arg.as_slice().to_vec(), q.arg.as_slice().to_vec()));
            }
            Pair::Types(..) => return false,
            Pair::Multisets(mut l, r) => {
                let Some(first) = l.pop() else { continue };
                let sh = shape(&first);
                for j in 0..r.len() {
                    if shape(&r[j]) != sh {
                        continue;
                    }
                    let mut rest = r.clone();
                    let partner = rest.swap_remove(j);
                    let mut next = pending.clone();
                    next.push(Pair::Multisets(l.clone(), rest));
                    next.push(Pair::Types(first.clone(), partner));
                    if iso(next, &fwd, &bwd, fixed) {
                        return true;
                    }
                }
                return false;
            }
        }
    }
    true
}

// The type with every atom replaced by γ0.
fn shape(t: &TypeExpr) -> TypeExpr {
    t.map_atoms(&mut |_| TypeExpr::atom(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;
    use alloc::vec;

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn unifies_atoms_and_arrows() {
        let s = unify_types(&t("γ0"), &t("([γ1], γ1)"));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].apply(&t("γ0")), t("([γ1], γ1)"));
        assert!(unify_types(&t("γ0"), &t("([γ0], γ1)")).is_empty());
        assert!(unify_types(&t("([γ0], γ0)"), &t("([γ1, γ2], γ1)")).is_empty());
    }

    #[test]
    fn multiset_unification_branches() {
        let a = TypeMultiset::new(vec![t("γ0"), t("([γ1], γ1)")]);
        let b = TypeMultiset::new(vec![t("([γ2], γ3)"), t("γ4")]);
        let sols = unify_multisets(&a, &b);
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert_eq!(s.apply_multiset(&a), s.apply_multiset(&b));
        }
    }

    #[test]
    fn identical_partners_are_not_repeated() {
        let a = TypeMultiset::new(vec![t("γ0"), t("γ0")]);
        let b = TypeMultiset::new(vec![t("γ1"), t("γ1")]);
        assert_eq!(unify_multisets(&a, &b).len(), 1);
    }

    #[test]
    fn rigid_atoms() {
        let m = match_type(&t("([γ5], γ6)"), &t("([γ0], γ0)"));
        assert_eq!(m.len(), 1);
        assert!(match_type(&t("([γ5], γ5)"), &t("([γ0], γ1)")).is_empty());
        assert!(match_type(&t("([γ5], γ5)"), &t("([([γ0], γ0)], γ0)")).is_empty());
    }

    #[test]
    fn renaming() {
        assert!(renaming_equivalent(&t("([γ0, γ1], γ0)"), &t("([γ3, γ2], γ3)")));
        assert!(renaming_equivalent(&t("([γ0, γ1], γ0)"), &t("([γ7, γ2], γ2)")));
        assert!(!renaming_equivalent(&t("([γ0, γ1], γ0)"), &t("([γ0, γ0], γ0)")));
        assert!(renaming_equivalent(
            &t("([([γ1], γ0), ([γ0], γ1)], γ1)"),
            &t("([([γ5], γ4), ([γ4], γ5)], γ4)")
        ));
    }

    #[test]
    fn composition() {
        let s1 = unify_types(&t("γ0"), &t("([γ1], γ2)")).remove(0);
        let s2 = unify_types(&t("γ1"), &t("γ2")).remove(0);
        let c = s2.after(&s1);
        let r = c.apply(&t("γ0"));
        assert!(renaming_equivalent(&r, &t("([γ9], γ9)")));
    }
}

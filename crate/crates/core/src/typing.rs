//! Principal typings and 1-typings of normal terms.
//!
//! A normal term is `λx1…λxm.(x)u1…un`. Its 1-typings are the typings
//! derived by giving the head variable `x` the single type
//! `[α1] … [αn] γ`, where `αi` is a 1-typing type of `ui`; the principal
//! typing is the one in which every such `γ` is a distinct atom.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::derivation::Derivation;
use crate::reduce::is_normal;
use crate::term::{Name, Term};
use crate::types::{typing_as_type, Atom, Context, TypeExpr, TypeMultiset};
use crate::unify::{renaming_between, Problem, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotNormal;

impl fmt::Display for NotNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("the term is not in normal form")
    }
}

impl core::error::Error for NotNormal {}

/// The principal typing of a normal term, with its derivation. Atoms are
/// numbered from 0 in order of creation, innermost arguments first.
pub fn principal_typing(t: &Term) -> Result<Derivation, NotNormal> {
    if !is_normal(t) {
        return Err(NotNormal);
    }
    let mut next = 0;
    Ok(principal_rec(t, &mut next))
}

fn principal_rec(t: &Term, next: &mut u32) -> Derivation {
    match t {
        Term::Abs(x, b) => Derivation::abs(x.clone(), principal_rec(b, next)),
        _ => {
            let (head, args) = t.spine();
            let Term::Var(x) = head else { unreachable!("normal term") };
            let ds: Vec<Derivation> = args.iter().map(|u| principal_rec(u, next)).collect();
            let gamma = TypeExpr::atom(*next);
            *next += 1;
            let head_ty = TypeExpr::curried(ds.iter().map(|d| TypeMultiset::singleton(d.ty.clone())), gamma);
            let mut acc = Derivation::axiom(x.clone(), head_ty);
            for (u, d) in args.into_iter().zip(ds) {
                acc = Derivation::app(acc, u.clone(), vec![d]).expect("types line up by construction");
            }
            acc
        }
    }
}

/// All 1-typings of a normal term, up to renaming of atoms, as derivations.
/// Empty when the typing size exceeds `size_bound`.
pub fn one_typings(t: &Term, size_bound: usize) -> Result<OneTypings, NotNormal> {
    let principal = principal_typing(t)?;
    let vars: Vec<Name> = t.free_vars().into_iter().collect();
    let whole = typing_as_type(&principal.ctx, &vars, &principal.ty);
    let slots = whole.atoms().len();
    let too_big = crate::types::type_size(&whole) > size_bound;
    Ok(OneTypings {
        principal,
        vars,
        rgs: if too_big { None } else { Some(vec![0; slots]) },
        seen: Vec::new(),
    })
}

/// Iterator over 1-typings: one per partition of the principal atoms,
/// skipping partitions that give a renaming of an earlier typing.
pub struct OneTypings {
    principal: Derivation,
    vars: Vec<Name>,
    // Restricted growth string over the principal atoms; `None` when done.
    rgs: Option<Vec<u32>>,
    seen: Vec<TypeExpr>,
}

impl OneTypings {
    fn advance(&mut self) {
        let Some(rgs) = self.rgs.as_mut() else { return };
        let n = rgs.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                return;
            }
        }
        self.rgs = None;
    }
}

impl Iterator for OneTypings {
    type Item = Derivation;
    fn next(&mut self) -> Option<Derivation> {
        loop {
            let rgs = self.rgs.clone()?;
            self.advance();
            let sigma = Substitution::from_map(
                rgs.iter()
                    .enumerate()
                    .map(|(i, c)| (Atom(i as u32), TypeExpr::atom(*c)))
                    .collect::<BTreeMap<_, _>>(),
            );
            let d = self.principal.substitute(&sigma);
            let whole = typing_as_type(&d.ctx, &self.vars, &d.ty);
            if self.seen.iter().any(|s| renaming_between(&[(s.clone(), whole.clone())], &[])) {
                continue;
            }
            self.seen.push(whole);
            return Some(d);
        }
    }
}

/// Whether `(ctx, ty)` is a 1-typing of the normal term `t`, that is, the
/// principal typing with some of its atoms identified.
pub fn is_one_typing(t: &Term, ctx: &Context, ty: &TypeExpr) -> Result<bool, NotNormal> {
    let p = principal_typing(t)?;
    let vars: Vec<Name> = t.free_vars().into_iter().collect();
    if ctx.domain().cloned().collect::<Vec<_>>() != vars {
        return Ok(false);
    }
    let target = typing_as_type(ctx, &vars, ty);
    let shift = target.max_atom().map_or(0, |m| m + 1);
    let pattern = typing_as_type(&p.ctx, &vars, &p.ty).shift_atoms(shift);
    let fixed = target.atoms();
    let rigid = |a: Atom| fixed.contains(&a);
    let mut prob = Problem::with_rigid(&rigid);
    prob.types(&pattern, &target);
    Ok(prob
        .solve()
        .iter()
        .any(|s| pattern.atoms().iter().all(|a| s.apply(&TypeExpr::Atom(*a)).is_atom())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_derivation;
    use crate::parse::parse;
    use crate::types::parse_type;
    use crate::unify::renaming_equivalent;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn principal_of_identity_and_delta() {
        let d = principal_typing(&p("\\y.y")).unwrap();
        assert!(renaming_equivalent(&d.ty, &parse_type("([γ0], γ0)").unwrap()));
        let d = principal_typing(&p("\\x.(x)x")).unwrap();
        assert!(renaming_equivalent(&d.ty, &parse_type("([([γ1], γ0), γ1], γ0)").unwrap()));
        check_derivation(&d, &p("\\x.(x)x")).unwrap();
        assert!(principal_typing(&p("(\\x.x)y")).is_err());
    }

    #[test]
    fn one_typings_of_identity() {
        let all: Vec<Derivation> = one_typings(&p("\\y.y"), 10).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].ty, parse_type("([γ0], γ0)").unwrap());
        assert_eq!(one_typings(&p("\\y.y"), 1).unwrap().count(), 0);
    }

    #[test]
    fn one_typings_of_delta() {
        // Two atoms: either identified or not.
        let t = p("\\x.(x)x");
        let all: Vec<Derivation> = one_typings(&t, 20).unwrap().collect();
        assert_eq!(all.len(), 2);
        for d in &all {
            check_derivation(d, &t).unwrap();
            assert!(is_one_typing(&t, &d.ctx, &d.ty).unwrap());
        }
    }

    #[test]
    fn recognises_non_one_typings() {
        let t = p("\\y.y");
        let c = Context::empty();
        assert!(is_one_typing(&t, &c, &parse_type("([γ3], γ3)").unwrap()).unwrap());
        assert!(!is_one_typing(&t, &c, &parse_type("([γ0, γ0], γ0)").unwrap()).unwrap());
        assert!(!is_one_typing(&t, &c, &parse_type("([([γ1], γ0)], ([γ1], γ0))").unwrap()).unwrap());
        let d = p("\\x.(x)x");
        assert!(is_one_typing(&d, &c, &parse_type("([([γ0], γ0), γ0], γ0)").unwrap()).unwrap());
        assert!(!is_one_typing(&d, &c, &parse_type("([([γ0, γ0], γ0), γ0], γ0)").unwrap()).unwrap());
        assert!(!is_one_typing(&t, &c, &parse_type("([([γ1, γ1], γ0)], ([γ1, γ1], γ0))").unwrap()).unwrap());
    }
}

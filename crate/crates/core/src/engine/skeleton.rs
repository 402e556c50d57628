//! Derivation skeletons: derivation trees with the types erased.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::derivation::Derivation;
use crate::term::Term;
use crate::types::{Atom, TypeExpr, TypeMultiset};
use crate::unify::Problem;

/// The shape of a derivation. An application node lists its argument
/// premises as a multiset, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Skeleton {
    Leaf,
    Abs(Box<Skeleton>),
    App(Box<Skeleton>, Vec<Skeleton>),
}

impl Skeleton {
    pub fn app(fun: Skeleton, mut args: Vec<Skeleton>) -> Skeleton {
        args.sort();
        Skeleton::App(Box::new(fun), args)
    }

    pub fn size(&self) -> usize {
        match self {
            Skeleton::Leaf => 1,
            Skeleton::Abs(b) => 1 + b.size(),
            Skeleton::App(f, args) => 1 + f.size() + args.iter().map(Skeleton::size).sum::<usize>(),
        }
    }

    pub fn of(d: &Derivation) -> Skeleton {
        use crate::derivation::Inference;
        match &d.rule {
            Inference::Axiom(_) => Skeleton::Leaf,
            Inference::Abs(_, p) => Skeleton::Abs(Box::new(Skeleton::of(p))),
            Inference::App { fun, args, .. } => Skeleton::app(Skeleton::of(fun), args.iter().map(Skeleton::of).collect()),
        }
    }
}

impl fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Leaf => f.write_str("ax"),
            Skeleton::Abs(b) => write!(f, "abs({b:?})"),
            Skeleton::App(g, args) => write!(f, "app({g:?}; {args:?})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonMismatch;

impl fmt::Display for SkeletonMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("skeleton does not fit the term")
    }
}

impl core::error::Error for SkeletonMismatch {}

/// All skeletons for `t` of size at most `bound`, by increasing size.
pub fn enumerate_skeletons(t: &Term, bound: usize) -> Vec<Skeleton> {
    let mut memo = BTreeMap::new();
    let mut out = Vec::new();
    for s in 1..=bound {
        out.extend(skeletons_of_size(t, s, &mut memo).iter().cloned());
    }
    out
}

fn skeletons_of_size<'m>(
    t: &Term,
    s: usize,
    memo: &'m mut BTreeMap<(Term, usize), Vec<Skeleton>>,
) -> &'m Vec<Skeleton> {
    let key = (t.clone(), s);
    if !memo.contains_key(&key) {
        let v = match t {
            Term::Var(_) => {
                if s == 1 {
                    alloc::vec![Skeleton::Leaf]
                } else {
                    Vec::new()
                }
            }
            Term::Abs(_, b) => {
                if s < 2 {
                    Vec::new()
                } else {
                    skeletons_of_size(b, s - 1, memo)
                        .iter()
                        .map(|k| Skeleton::Abs(Box::new(k.clone())))
                        .collect()
                }
            }
            Term::App(v, u) => {
                let mut out = Vec::new();
                for s0 in 1..s {
                    let funs = skeletons_of_size(v, s0, memo).clone();
                    if funs.is_empty() {
                        continue;
                    }
                    let rem = s - 1 - s0;
                    let mut pool = Vec::new();
                    for si in 1..=rem {
                        for k in skeletons_of_size(u, si, memo).iter() {
                            pool.push((si, k.clone()));
                        }
                    }
                    let mut arg_sets = Vec::new();
                    multisets_with_sum(&pool, 0, rem, &mut Vec::new(), &mut arg_sets);
                    for f in &funs {
                        for args in &arg_sets {
                            out.push(Skeleton::App(Box::new(f.clone()), args.clone()));
                        }
                    }
                }
                out
            }
        };
        memo.insert(key.clone(), v);
    }
    &memo[&key]
}

// Nondecreasing selections from `pool` (by index) whose sizes sum to `rem`.
fn multisets_with_sum(
    pool: &[(usize, Skeleton)],
    start: usize,
    rem: usize,
    cur: &mut Vec<Skeleton>,
    out: &mut Vec<Vec<Skeleton>>,
) {
    if rem == 0 {
        let mut v = cur.clone();
        v.sort();
        out.push(v);
        return;
    }
    for i in start..pool.len() {
        let (si, k) = &pool[i];
        if *si <= rem {
            cur.push(k.clone());
            multisets_with_sum(pool, i, rem - si, cur, out);
            cur.pop();
        }
    }
}

/// Most general derivations of `t` with skeleton `sk`, one per most
/// general unifier of the constraints. Empty when the skeleton admits no
/// typing.
pub fn infer_skeleton_typings(t: &Term, sk: &Skeleton) -> Result<Vec<Derivation>, SkeletonMismatch> {
    let mut next = 0;
    infer(t, sk, &mut next)
}

/// The first most general derivation of `t` with skeleton `sk`, if any.
pub fn infer_skeleton_typing(t: &Term, sk: &Skeleton) -> Result<Option<Derivation>, SkeletonMismatch> {
    Ok(infer_skeleton_typings(t, sk)?.into_iter().next())
}

fn infer(t: &Term, sk: &Skeleton, next: &mut u32) -> Result<Vec<Derivation>, SkeletonMismatch> {
    match (t, sk) {
        (Term::Var(x), Skeleton::Leaf) => {
            let a = TypeExpr::atom(*next);
            *next += 1;
            Ok(alloc::vec![Derivation::axiom(x.clone(), a)])
        }
        (Term::Abs(x, b), Skeleton::Abs(k)) => {
            Ok(infer(b, k, next)?.into_iter().map(|d| Derivation::abs(x.clone(), d)).collect())
        }
        (Term::App(v, u), Skeleton::App(kf, kargs)) => {
            let funs = infer(v, kf, next)?;
            let mut arg_choices: Vec<Vec<Derivation>> = Vec::new();
            for k in kargs {
                arg_choices.push(infer(u, k, next)?);
            }
            let beta = TypeExpr::Atom(Atom(*next));
            *next += 1;
            let mut out = Vec::new();
            let mut pick = Vec::new();
            combine(&funs, &arg_choices, &mut pick, &beta, u, &mut out);
            Ok(out)
        }
        _ => Err(SkeletonMismatch),
    }
}

fn combine(
    funs: &[Derivation],
    choices: &[Vec<Derivation>],
    pick: &mut Vec<Derivation>,
    beta: &TypeExpr,
    u: &Term,
    out: &mut Vec<Derivation>,
) {
    if pick.len() < choices.len() {
        for d in &choices[pick.len()] {
            pick.push(d.clone());
            combine(funs, choices, pick, beta, u, out);
            pick.pop();
        }
        return;
    }
    let args: TypeMultiset = pick.iter().map(|d| d.ty.clone()).collect();
    let want = TypeExpr::arrow(args, beta.clone());
    for f in funs {
        let mut p = Problem::new();
        p.types(&f.ty, &want);
        for sigma in p.solve() {
            let fun = f.substitute(&sigma);
            let args: Vec<Derivation> = pick.iter().map(|d| d.substitute(&sigma)).collect();
            if let Ok(d) = Derivation::app(fun, u.clone(), args) {
                out.push(d);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_derivation;
    use crate::parse::parse;

    #[test]
    fn skeletons_of_delta_identity() {
        let t = parse("(\\x.(x)x)\\y.y").unwrap();
        let sks = enumerate_skeletons(&t, 9);
        assert!(sks.windows(2).all(|w| w[0].size() <= w[1].size()));
        let typable: Vec<&Skeleton> = sks
            .iter()
            .filter(|k| !infer_skeleton_typings(&t, k).unwrap().is_empty())
            .collect();
        assert_eq!(typable.first().map(|k| k.size()), Some(9));
        for k in typable {
            for d in infer_skeleton_typings(&t, k).unwrap() {
                check_derivation(&d, &t).unwrap();
                assert_eq!(Skeleton::of(&d), *k);
            }
        }
    }

    #[test]
    fn mismatched_skeleton() {
        let t = parse("\\y.y").unwrap();
        assert!(infer_skeleton_typing(&t, &Skeleton::Leaf).is_err());
    }
}

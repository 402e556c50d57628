mod common;

use krivine_lab_core::corpus::{closed_normal_terms, closed_terms};
use krivine_lab_core::derivation::{check_derivation, Derivation, Inference};
use krivine_lab_core::engine::{
    enumerate_skeletons, extract_derivation_beta, extract_derivation_head, infer_skeleton_typings, DerivationTable,
    Skeleton,
};
use krivine_lab_core::semantics::ground_points;
use krivine_lab_core::types::{type_size, typing_as_type, Context, TypeExpr, TypeMultiset};
use krivine_lab_core::typing::{is_one_typing, principal_typing};
use krivine_lab_core::unify::renaming_equivalent;
use krivine_lab_core::{parse, run, steps, MachineKind, Name, RunStatus, Term};
use proptest::prelude::*;

fn whole(t: &Term, d: &Derivation) -> TypeExpr {
    let vars: Vec<Name> = t.free_vars().into_iter().collect();
    typing_as_type(&d.ctx, &vars, &d.ty)
}

fn same_typings(a: &[TypeExpr], b: &[TypeExpr]) -> bool {
    a.iter().all(|x| b.iter().any(|y| renaming_equivalent(x, y)))
        && b.iter().all(|y| a.iter().any(|x| renaming_equivalent(x, y)))
}

// Typing rules applied node by node, with every argument type chosen from
// a small pool: an exhaustive oracle for the typings of tiny terms.
fn brute_typings(t: &Term, depth: usize) -> Vec<(Context, TypeExpr, usize)> {
    let atoms = [TypeExpr::atom(0), TypeExpr::atom(1)];
    brute(t, depth, &atoms)
}

fn brute(t: &Term, depth: usize, atoms: &[TypeExpr]) -> Vec<(Context, TypeExpr, usize)> {
    let mut pool: Vec<TypeExpr> = atoms.to_vec();
    for a in atoms {
        pool.push(TypeExpr::arrow(TypeMultiset::singleton(a.clone()), a.clone()));
        pool.push(TypeExpr::arrow(TypeMultiset::empty(), a.clone()));
    }
    match t {
        Term::Var(x) => pool.iter().map(|ty| (Context::singleton(x.clone(), ty.clone()), ty.clone(), 1)).collect(),
        Term::Abs(x, b) => brute(b, depth, atoms)
            .into_iter()
            .map(|(ctx, ty, s)| {
                let (rest, a) = ctx.remove(x);
                (rest, TypeExpr::arrow(a, ty), s + 1)
            })
            .collect(),
        Term::App(v, u) => {
            let funs = brute(v, depth, atoms);
            let args = brute(u, depth, atoms);
            let mut out = Vec::new();
            for (c0, f, s0) in &funs {
                let Some(arrow) = f.as_arrow() else { continue };
                // Pick one argument derivation per element of the multiset.
                let mut partial: Vec<(Context, usize)> = vec![(c0.clone(), *s0)];
                for need in arrow.arg.iter() {
                    let mut next = Vec::new();
                    for (c, s) in &partial {
                        for (ca, ta, sa) in &args {
                            if ta == need {
                                next.push((c.sum(ca), s + sa));
                            }
                        }
                    }
                    partial = next;
                }
                for (c, s) in partial {
                    if s < depth {
                        out.push((c, arrow.res.clone(), s + 1));
                    }
                }
            }
            out
        }
    }
}

#[test]
fn dp_agrees_with_skeleton_search() {
    for t in closed_terms(6) {
        let mut table = DerivationTable::new();
        let sks = enumerate_skeletons(&t, 11);
        for s in 1..=11 {
            let dp: Vec<TypeExpr> = table.typings(&t, s).unwrap().iter().map(|d| whole(&t, d)).collect();
            let mut by_skeleton = Vec::new();
            for k in sks.iter().filter(|k| k.size() == s) {
                for d in infer_skeleton_typings(&t, k).unwrap() {
                    check_derivation(&d, &t).unwrap();
                    assert_eq!(Skeleton::of(&d), *k);
                    by_skeleton.push(whole(&t, &d));
                }
            }
            assert!(same_typings(&dp, &by_skeleton), "{t} size {s}: {dp:?} vs {by_skeleton:?}");
        }
    }
}

// Every derivation built from the brute-force pool is an instance of a
// most general typing of the same size.
#[test]
fn brute_force_derivations_are_instances() {
    use krivine_lab_core::unify::match_type;
    for t in closed_terms(5) {
        let mut table = DerivationTable::new();
        for (ctx, ty, s) in brute_typings(&t, 9) {
            let target = typing_as_type(&ctx, &[], &ty);
            let general = table.typings(&t, s).unwrap();
            let shift = target.max_atom().map_or(0, |m| m + 1);
            assert!(
                general.iter().any(|d| !match_type(&whole(&t, &d.shift_atoms(shift)), &target).is_empty()),
                "{t}: {target} of size {s} is not an instance"
            );
        }
    }
}

#[test]
fn least_sizes_are_step_counts() {
    let mut table = DerivationTable::new();
    for t in closed_terms(8) {
        if let Some(l) = steps(&t, MachineKind::Head, 5000) {
            assert_eq!(table.min_derivation_size(&t, l, false).size(), Some(l), "{t}");
        }
        if let Some(l) = steps(&t, MachineKind::Beta, 5000) {
            assert_eq!(table.min_derivation_size(&t, l, true).size(), Some(l), "{t}");
            assert!(table.min_derivation_size(&t, l - 1, true).size().is_none(), "{t}");
        }
    }
}

// A ground point has the size of its derivation.
#[test]
fn ground_points_have_derivation_sizes() {
    for t in closed_normal_terms(6) {
        let mut table = DerivationTable::new();
        for s in 1..=12 {
            for d in table.typings(&t, s).unwrap() {
                assert_eq!(type_size(&d.ty), s, "{t}: {}", d.ty);
            }
        }
        let points = ground_points(&t, 12).unwrap();
        assert!(points.windows(2).all(|w| type_size(&w[0]) <= type_size(&w[1])));
    }
}

#[test]
fn principal_typing_is_least_exact() {
    for t in closed_normal_terms(7) {
        let p = principal_typing(&t).unwrap();
        assert!(is_one_typing(&t, &p.ctx, &p.ty).unwrap());
        let l = steps(&t, MachineKind::Beta, 1000).unwrap();
        assert_eq!(p.size(), l, "{t}");
    }
}

fn count_nodes(d: &Derivation) -> usize {
    match &d.rule {
        Inference::Axiom(_) => 1,
        Inference::Abs(_, p) => 1 + count_nodes(p),
        Inference::App { fun, args, .. } => 1 + count_nodes(fun) + args.iter().map(count_nodes).sum::<usize>(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn extraction_sizes_are_step_counts(t in common::open_term(12)) {
        let r = run(&t, MachineKind::Head, 3000);
        match extract_derivation_head(&t, 3001) {
            Some(x) => {
                prop_assert_eq!(r.status, RunStatus::Finished);
                prop_assert_eq!(count_nodes(&x.derivation), r.steps);
                prop_assert!(check_derivation(&x.derivation, &x.term).is_ok());
            }
            None => prop_assert_ne!(r.status, RunStatus::Finished),
        }
        let r = run(&t, MachineKind::Beta, 3000);
        if let Some(x) = extract_derivation_beta(&t, 3001) {
            prop_assert_eq!(count_nodes(&x.derivation), r.steps);
            prop_assert!(check_derivation(&x.derivation, &x.term).is_ok());
            let nf = r.normal_form().unwrap();
            prop_assert!(is_one_typing(&nf, &x.derivation.ctx, &x.derivation.ty).unwrap());
        }
    }
}

#[test]
fn running_example_least_derivation() {
    let t = parse("(\\x.(x)x)\\y.y").unwrap();
    let mut table = DerivationTable::new();
    let d = table.min_derivation_size(&t, 9, false);
    assert_eq!(d.size(), Some(9));
    assert!(table.min_derivation_size(&t, 8, false).size().is_none());
}

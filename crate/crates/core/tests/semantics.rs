use krivine_lab_core::corpus::{boolean_probe, church, closed_normal_terms, identity};
use krivine_lab_core::derivation::check_derivation;
use krivine_lab_core::semantics::{
    check_app_normalizability, derivation_for_point, interpret, interpret_in_env, predict_steps, semantic_apply,
    step_bound, unify_multisets, unify_types, Normalizability, PredictMode, SemEnv,
};
use krivine_lab_core::types::{parse_multiset, parse_type, TypeExpr};
use krivine_lab_core::{parse, steps, MachineKind, Name, Term};

fn p(s: &str) -> Term {
    parse(s).unwrap()
}

fn ty(s: &str) -> TypeExpr {
    parse_type(s).unwrap()
}

#[test]
fn unification_examples() {
    let s = unify_types(&ty("γ0"), &ty("([γ1], γ1)"));
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].apply(&ty("γ0")), ty("([γ1], γ1)"));
    assert!(unify_multisets(&parse_multiset("[γ0]").unwrap(), &parse_multiset("[γ1, γ2]").unwrap()).is_empty());
    let a = parse_multiset("[γ0, ([γ1], γ1)]").unwrap();
    let b = parse_multiset("[([γ2], γ2), γ3]").unwrap();
    let all = unify_multisets(&a, &b);
    assert!(all.iter().any(|s| s.apply(&ty("γ0")) == ty("([γ2], γ2)") && s.apply(&ty("γ3")) == ty("([γ1], γ1)")));
    for s in &all {
        assert_eq!(s.apply_multiset(&a), s.apply_multiset(&b));
    }
    assert!(unify_types(&ty("γ0"), &ty("([γ0], γ1)")).is_empty());
}

#[test]
fn step_bound_examples() {
    assert_eq!(step_bound(&ty("([([γ0], γ0), ([γ0], γ0)], ([γ0], γ0))")), Some(12));
    assert_eq!(step_bound(&ty("([], γ0)")), Some(3));
    assert_eq!(step_bound(&ty("([γ0], γ0)")), Some(5));
    assert_eq!(step_bound(&ty("γ0")), None);
}

#[test]
fn interpretation_examples() {
    let id = interpret(&p("\\y.y"), 4);
    assert!(id.contains(&ty("([γ0], γ0)")));
    assert!(id.iter().all(|t| !t.is_atom()));
    assert!(interpret(&p("(\\x.(x)x)\\x.(x)x"), 8).is_empty());
    assert!(interpret(&p("\\x.\\y.y"), 3).contains(&ty("([], ([γ0], γ0))")));
}

// Every point comes with a valid derivation.
#[test]
fn points_are_derivable() {
    for t in closed_normal_terms(6) {
        for point in interpret(&t, 6).iter() {
            let d = derivation_for_point(&t, point, 6).unwrap_or_else(|| panic!("{t}: {point}"));
            check_derivation(&d, &t).unwrap();
            assert_eq!(&d.ty, point);
        }
    }
}

#[test]
fn application_is_sound() {
    let normals = closed_normal_terms(5);
    for v in &normals {
        for u in &normals {
            let dv = interpret(v, 6);
            let du = interpret(u, 6);
            let app = interpret(&Term::app(v.clone(), u.clone()), 6);
            for a in semantic_apply(&dv.points, &du) {
                if krivine_lab_core::types::type_size(&a) <= 6 {
                    assert!(app.contains(&a), "({v}){u}: {a}");
                }
            }
        }
    }
}

#[test]
fn semantic_apply_examples() {
    let d = |xs: &[&str], b| {
        let mut env = SemEnv::new();
        env.insert(Name::new("x"), xs.iter().map(|s| ty(s)).collect());
        interpret_in_env(&p("x"), &env, b)
    };
    assert_eq!(semantic_apply(&[ty("([γ0], γ0)")], &d(&["γ0"], 3)), vec![ty("γ0")]);
    assert!(semantic_apply(&[ty("([γ0], γ0)")], &d(&["γ1"], 3)).is_empty());
    assert_eq!(semantic_apply(&[ty("([], γ0)")], &d(&[], 3)), vec![ty("γ0")]);
}

#[test]
fn environment_examples() {
    let mut rho = SemEnv::new();
    rho.insert(Name::new("x"), vec![ty("γ0")]);
    assert!(interpret_in_env(&p("x"), &rho, 4).same_points(&interpret_in_env(&p("x"), &rho, 4)));
    assert_eq!(interpret_in_env(&p("x"), &rho, 4).points, vec![ty("γ0")]);
    for f in ["([γ0], γ0)", "([γ0, γ0], γ0)"] {
        let mut env = rho.clone();
        env.insert(Name::new("y"), vec![ty(f)]);
        assert_eq!(interpret_in_env(&p("(y)x"), &env, 6).points, vec![ty("γ0")], "{f}");
    }
}

// Equal on every environment, different as abstractions.
#[test]
fn not_a_lambda_model() {
    let mut rho = SemEnv::new();
    rho.insert(Name::new("y"), vec![ty("([γ0], γ0)")]);
    rho.insert(Name::new("z"), vec![ty("([γ0, γ0], γ0)")]);
    let pool = ["γ0", "γ1", "([γ0], γ0)", "([], γ1)"].map(ty);
    for mask in 0..16u32 {
        let d: Vec<TypeExpr> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
        let mut env = rho.clone();
        env.insert(Name::new("x"), d);
        let s1 = interpret_in_env(&p("(y)x"), &env, 6);
        let s2 = interpret_in_env(&p("(z)x"), &env, 6);
        assert!(s1.same_points(&s2), "{s1} vs {s2}");
    }
    let a1 = interpret_in_env(&p("\\x.(y)x"), &rho, 6);
    let a2 = interpret_in_env(&p("\\x.(z)x"), &rho, 6);
    assert_eq!(a1.points, vec![ty("([γ0], γ0)")]);
    assert_eq!(a2.points, vec![ty("([γ0, γ0], γ0)")]);
}

// Both points are in the interpretation, including the one that reads its
// argument as two incompatible booleans.
#[test]
fn non_uniform_points() {
    let t = boolean_probe();
    let delta = "([], ([γ0], γ0))";
    let beta = "([γ0], ([], γ0))";
    let alpha1 = ty(&format!("([([], ([{delta}], {delta})), ([], ([{delta}], {delta}))], {delta})"));
    let alpha2 = ty(&format!("([([], ([{beta}], {beta})), ([{beta}], ([], {beta}))], {beta})"));
    for point in [alpha1, alpha2] {
        assert_eq!(krivine_lab_core::types::type_size(&point), 20);
        let d = derivation_for_point(&t, &point, 20).unwrap_or_else(|| panic!("{point}"));
        check_derivation(&d, &t).unwrap();
        assert_eq!(d.ty, point);
    }
}

#[test]
fn predictions_of_small_pairs() {
    let zero = p("\\x.\\z.z");
    let pr = predict_steps(&zero, &identity(), PredictMode::Head, 8).unwrap();
    assert_eq!(pr.steps, Some(4));
    assert_eq!(steps(&Term::app(zero.clone(), identity()), MachineKind::Head, 100), Some(4));
    let beta = steps(&Term::app(zero.clone(), identity()), MachineKind::Beta, 100).unwrap();
    assert_eq!(
        check_app_normalizability(&zero, &identity(), 8).unwrap(),
        Normalizability::Normalizable { steps: beta }
    );
    let delta = p("\\x.(x)x");
    assert_eq!(
        check_app_normalizability(&delta, &delta, 12).unwrap(),
        Normalizability::Unknown
    );
    assert!(predict_steps(&p("(\\x.x)\\y.y"), &identity(), PredictMode::Head, 8).is_err());
}

// Church numerals applied to I cost different amounts, which an
// idempotent reading would not distinguish.
#[test]
fn numerals_are_told_apart() {
    let costs: Vec<usize> = (1..=4)
        .map(|n| predict_steps(&church(n), &identity(), PredictMode::Head, 8).unwrap().steps.unwrap())
        .collect();
    assert_eq!(costs, vec![8, 12, 16, 20]);
}

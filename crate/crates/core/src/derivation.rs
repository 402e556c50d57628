//! System R derivations.
//!
//! ```text
//!  ─────────────── ax      Γ, x : a ⊢ t : α          Γ0 ⊢ v : ([α1 … αn], α)   Γi ⊢ u : αi
//!  x : [α] ⊢ x : α        ─────────────────── abs    ───────────────────────────────────── app
//!                          Γ ⊢ λx.t : (a, α)              Γ0 + Γ1 + … + Γn ⊢ (v)u : α
//! ```

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::machine::{Closure, State};
use crate::term::{Name, Term};
use crate::types::{Context, TypeExpr, TypeMultiset};
use crate::unify::Substitution;

/// A derivation tree. Every node records its conclusion `Γ ⊢ t : α`.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    pub ctx: Context,
    pub ty: TypeExpr,
    pub rule: Inference,
}

#[derive(Clone, PartialEq, Eq)]
pub enum Inference {
    Axiom(Name),
    Abs(Name, Box<Derivation>),
    /// `arg` is the argument term, needed when there are no argument premises.
    App {
        fun: Box<Derivation>,
        arg: Term,
        args: Vec<Derivation>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The node's rule does not match the shape of the term.
    TermMismatch,
    /// The recorded conclusion differs from the one the rule produces.
    ConclusionMismatch,
    /// The function premise of an application does not have an arrow type.
    NotAnArrow,
    /// Argument premises do not match the argument multiset.
    ArgumentMismatch,
    /// A closure's environment part does not match its root context.
    EnvironmentMismatch(Name),
    /// A state derivation has the wrong number of stack entries, or their
    /// types do not match the head type.
    StackMismatch,
}

/// A rule violation, located by the path of premise indices from the root.
/// In an application node the function premise is 0 and the argument
/// premises are 1, 2, ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleViolation {
    pub path: Vec<usize>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule violation at node {:?}: {:?}", self.path, self.kind)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

impl core::error::Error for RuleViolation {}

fn violation<T>(path: &[usize], kind: ViolationKind, detail: String) -> Result<T, RuleViolation> {
    Err(RuleViolation {
        path: path.to_vec(),
        kind,
        detail,
    })
}

impl Derivation {
    /// `x : [α] ⊢ x : α`
    pub fn axiom(x: Name, ty: TypeExpr) -> Derivation {
        Derivation {
            ctx: Context::singleton(x.clone(), ty.clone()),
            ty,
            rule: Inference::Axiom(x),
        }
    }

    pub fn abs(x: Name, premise: Derivation) -> Derivation {
        let (ctx, a) = premise.ctx.remove(&x);
        Derivation {
            ctx,
            ty: TypeExpr::arrow(a, premise.ty.clone()),
            rule: Inference::Abs(x, Box::new(premise)),
        }
    }

    /// Fails when the function type is not an arrow whose argument multiset
    /// is the multiset of argument types.
    pub fn app(fun: Derivation, arg: Term, args: Vec<Derivation>) -> Result<Derivation, RuleViolation> {
        let res = match fun.ty.as_arrow() {
            Some(a) => {
                let got: TypeMultiset = args.iter().map(|d| d.ty.clone()).collect();
                if got != a.arg {
                    return violation(&[], ViolationKind::ArgumentMismatch, alloc::format!("{} vs {}", a.arg, got));
                }
                a.res.clone()
            }
            None => return violation(&[0], ViolationKind::NotAnArrow, alloc::format!("{}", fun.ty)),
        };
        let mut ctx = fun.ctx.clone();
        for d in &args {
            ctx = ctx.sum(&d.ctx);
        }
        Ok(Derivation {
            ctx,
            ty: res,
            rule: Inference::App {
                fun: Box::new(fun),
                arg,
                args,
            },
        })
    }

    /// The subject term.
    pub fn term(&self) -> Term {
        match &self.rule {
            Inference::Axiom(x) => Term::Var(x.clone()),
            Inference::Abs(x, p) => Term::Abs(x.clone(), Arc::new(p.term())),
            Inference::App { fun, arg, .. } => Term::app(fun.term(), arg.clone()),
        }
    }

    /// Number of rule instances.
    pub fn size(&self) -> usize {
        match &self.rule {
            Inference::Axiom(_) => 1,
            Inference::Abs(_, p) => 1 + p.size(),
            Inference::App { fun, args, .. } => 1 + fun.size() + args.iter().map(Derivation::size).sum::<usize>(),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Derivation {
        let rule = match &self.rule {
            Inference::Axiom(x) => Inference::Axiom(x.clone()),
            Inference::Abs(x, p) => Inference::Abs(x.clone(), Box::new(p.substitute(s))),
            Inference::App { fun, arg, args } => Inference::App {
                fun: Box::new(fun.substitute(s)),
                arg: arg.clone(),
                args: args.iter().map(|d| d.substitute(s)).collect(),
            },
        };
        Derivation {
            ctx: s.apply_context(&self.ctx),
            ty: s.apply(&self.ty),
            rule,
        }
    }

    pub fn shift_atoms(&self, by: u32) -> Derivation {
        if by == 0 {
            return self.clone();
        }
        let rule = match &self.rule {
            Inference::Axiom(x) => Inference::Axiom(x.clone()),
            Inference::Abs(x, p) => Inference::Abs(x.clone(), Box::new(p.shift_atoms(by))),
            Inference::App { fun, arg, args } => Inference::App {
                fun: Box::new(fun.shift_atoms(by)),
                arg: arg.clone(),
                args: args.iter().map(|d| d.shift_atoms(by)).collect(),
            },
        };
        Derivation {
            ctx: self.ctx.map_types(|t| t.shift_atoms(by)),
            ty: self.ty.shift_atoms(by),
            rule,
        }
    }

    /// Renders the tree, one judgement per line, premises indented.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.pretty_into(&mut out, 0);
        out
    }

    fn pretty_into(&self, out: &mut String, depth: usize) {
        use core::fmt::Write;
        let name = match &self.rule {
            Inference::Axiom(_) => "ax",
            Inference::Abs(..) => "abs",
            Inference::App { .. } => "app",
        };
        for _ in 0..depth {
            out.push_str("  ");
        }
        let _ = writeln!(out, "{} ⊢ {} : {}   [{}]", self.ctx, self.term(), self.ty, name);
        match &self.rule {
            Inference::Axiom(_) => {}
            Inference::Abs(_, p) => p.pretty_into(out, depth + 1),
            Inference::App { fun, args, .. } => {
                fun.pretty_into(out, depth + 1);
                for a in args {
                    a.pretty_into(out, depth + 1);
                }
            }
        }
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Checks every rule instance of `d` and that it derives a judgement for `t`.
pub fn check_derivation(d: &Derivation, t: &Term) -> Result<(), RuleViolation> {
    check_at(d, t, &mut Vec::new())
}

fn check_at(d: &Derivation, t: &Term, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    let (ctx, ty) = match (&d.rule, t) {
        (Inference::Axiom(x), Term::Var(y)) if x == y => (Context::singleton(x.clone(), d.ty.clone()), d.ty.clone()),
        (Inference::Abs(x, p), Term::Abs(y, b)) if x == y => {
            path.push(0);
            check_at(p, b, path)?;
            path.pop();
            let (ctx, a) = p.ctx.remove(x);
            (ctx, TypeExpr::arrow(a, p.ty.clone()))
        }
        (Inference::App { fun, arg, args }, Term::App(v, u)) if *arg == **u => {
            path.push(0);
            check_at(fun, v, path)?;
            path.pop();
            for (i, a) in args.iter().enumerate() {
                path.push(i + 1);
                check_at(a, u, path)?;
                path.pop();
            }
            let Some(arrow) = fun.ty.as_arrow() else {
                path.push(0);
                return violation(path, ViolationKind::NotAnArrow, alloc::format!("{}", fun.ty));
            };
            let got: TypeMultiset = args.iter().map(|a| a.ty.clone()).collect();
            if got != arrow.arg {
                return violation(path, ViolationKind::ArgumentMismatch, alloc::format!("{} vs {}", arrow.arg, got));
            }
            let mut ctx = fun.ctx.clone();
            for a in args {
                ctx = ctx.sum(&a.ctx);
            }
            (ctx, arrow.res.clone())
        }
        _ => return violation(path, ViolationKind::TermMismatch, alloc::format!("{t}")),
    };
    if ctx != d.ctx || ty != d.ty {
        return violation(
            path,
            ViolationKind::ConclusionMismatch,
            alloc::format!("recorded {} ⊢ {}, expected {} ⊢ {}", d.ctx, d.ty, ctx, ty),
        );
    }
    Ok(())
}

/// Equality up to permutation of the argument premises of application nodes.
pub fn derivations_equivalent(d1: &Derivation, d2: &Derivation) -> bool {
    if d1.ctx != d2.ctx || d1.ty != d2.ty {
        return false;
    }
    match (&d1.rule, &d2.rule) {
        (Inference::Axiom(x), Inference::Axiom(y)) => x == y,
        (Inference::Abs(x, p), Inference::Abs(y, q)) => x == y && derivations_equivalent(p, q),
        (
            Inference::App { fun: f1, arg: a1, args: p1 },
            Inference::App { fun: f2, arg: a2, args: p2 },
        ) => {
            if a1 != a2 || p1.len() != p2.len() || !derivations_equivalent(f1, f2) {
                return false;
            }
            let mut used = alloc::vec![false; p2.len()];
            pair_up(p1, p2, &mut used)
        }
        _ => false,
    }
}

fn pair_up(p1: &[Derivation], p2: &[Derivation], used: &mut [bool]) -> bool {
    let Some((first, rest)) = p1.split_first() else { return true };
    for j in 0..p2.len() {
        if !used[j] && derivations_equivalent(first, &p2[j]) {
            used[j] = true;
            if pair_up(rest, p2, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// A derivation for a closure `(t, e)`: a derivation of `t` whose context
/// may mention variables of `e`, and for each such variable `x`, derivations
/// for `e(x)` at the types of the multiset given to `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureDerivation {
    pub root: Derivation,
    pub env: BTreeMap<Name, Vec<ClosureDerivation>>,
}

impl ClosureDerivation {
    pub fn plain(root: Derivation) -> ClosureDerivation {
        ClosureDerivation {
            root,
            env: BTreeMap::new(),
        }
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.root.ty
    }

    /// The context: the root context outside the environment, plus the
    /// contexts of all environment derivations.
    pub fn ctx(&self) -> Context {
        let mut ctx = self.root.ctx.clone();
        for (x, ds) in &self.env {
            ctx = ctx.remove(x).0;
            for d in ds {
                ctx = ctx.sum(&d.ctx());
            }
        }
        ctx
    }

    pub fn size(&self) -> usize {
        self.root.size() + self.env.values().flatten().map(ClosureDerivation::size).sum::<usize>()
    }
}

/// A derivation for a state `c0 · c1 · … · cq`: a derivation for `c0` at a
/// type `b1 … bq α` and, for each `k`, derivations for `ck` at the types of `bk`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateDerivation {
    pub head: ClosureDerivation,
    pub stack: Vec<Vec<ClosureDerivation>>,
}

impl StateDerivation {
    pub fn size(&self) -> usize {
        self.head.size() + self.stack.iter().flatten().map(ClosureDerivation::size).sum::<usize>()
    }

    /// The derived typing, or `None` when the head type is too short.
    pub fn typing(&self) -> Option<(Context, TypeExpr)> {
        let (_, ty) = self.head.ty().uncurry(self.stack.len())?;
        let mut ctx = self.head.ctx();
        for d in self.stack.iter().flatten() {
            ctx = ctx.sum(&d.ctx());
        }
        Some((ctx, ty))
    }
}

fn multiset_of(ds: &[ClosureDerivation]) -> TypeMultiset {
    ds.iter().map(|d| d.ty().clone()).collect()
}

/// Checks a closure derivation against a closure and returns its typing.
pub fn check_closure_derivation(d: &ClosureDerivation, c: &Closure) -> Result<(Context, TypeExpr), RuleViolation> {
    check_closure_at(d, c, &mut Vec::new())
}

fn check_closure_at(
    d: &ClosureDerivation,
    c: &Closure,
    path: &mut Vec<usize>,
) -> Result<(Context, TypeExpr), RuleViolation> {
    check_at(&d.root, &c.term, path)?;
    for (x, ds) in &d.env {
        if c.env.lookup(x).is_none() && !ds.is_empty() {
            return violation(path, ViolationKind::EnvironmentMismatch(x.clone()), String::from("not in the environment"));
        }
    }
    let mut ctx = Context::empty();
    for (x, a) in d.root.ctx.iter() {
        match c.env.lookup(x) {
            None => ctx = ctx.sum(&Context::from_map(BTreeMap::from([(x.clone(), a.clone())]))),
            Some(cx) => {
                let ds = d.env.get(x).map(Vec::as_slice).unwrap_or(&[]);
                if multiset_of(ds) != *a {
                    return violation(
                        path,
                        ViolationKind::EnvironmentMismatch(x.clone()),
                        alloc::format!("{} vs {}", a, multiset_of(ds)),
                    );
                }
                for (i, dx) in ds.iter().enumerate() {
                    let (cx_ctx, _) = check_closure_at(dx, cx, &mut Vec::new())
                        .map_err(|e| nested(e, alloc::format!("environment derivation {i} for {x}")))?;
                    ctx = ctx.sum(&cx_ctx);
                }
            }
        }
    }
    for (x, ds) in &d.env {
        if !ds.is_empty() && d.root.ctx.get(x).is_empty() {
            return violation(path, ViolationKind::EnvironmentMismatch(x.clone()), String::from("unused derivations"));
        }
    }
    Ok((ctx, d.root.ty.clone()))
}

fn nested(mut e: RuleViolation, place: String) -> RuleViolation {
    e.detail = if e.detail.is_empty() {
        place
    } else {
        alloc::format!("{place}: {}", e.detail)
    };
    e
}

/// Checks a state derivation against a state and returns its typing.
pub fn check_state_derivation(d: &StateDerivation, s: &State) -> Result<(Context, TypeExpr), RuleViolation> {
    let mut path = Vec::new();
    let (mut ctx, head_ty) = check_closure_at(&d.head, &s.head, &mut path)?;
    if d.stack.len() != s.stack_len() {
        return violation(&path, ViolationKind::StackMismatch, String::from("stack length"));
    }
    let Some((args, ty)) = head_ty.uncurry(d.stack.len()) else {
        return violation(&path, ViolationKind::StackMismatch, String::from("head type too short"));
    };
    for (k, (c, ds)) in s.stack().zip(&d.stack).enumerate() {
        if multiset_of(ds) != args[k] {
            return violation(&path, ViolationKind::StackMismatch, alloc::format!("stack entry {k}"));
        }
        for (i, dk) in ds.iter().enumerate() {
            let (c_ctx, _) = check_closure_at(dk, c, &mut Vec::new())
                .map_err(|e| nested(e, alloc::format!("stack entry {k}, derivation {i}")))?;
            ctx = ctx.sum(&c_ctx);
        }
    }
    Ok((ctx, ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::types::parse_type;
    use alloc::vec;

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    // ⊢ (λx.(x)x)λy.y : γ0 with x : [([γ0], γ0), ... ] style witness.
    fn delta_i() -> Derivation {
        let id = t("([γ0], γ0)");
        let idid = TypeExpr::arrow(TypeMultiset::singleton(id.clone()), id.clone());
        let x = Name::new("x");
        let y = Name::new("y");
        let xx = Derivation::app(
            Derivation::axiom(x.clone(), idid.clone()),
            Term::Var(x.clone()),
            vec![Derivation::axiom(x.clone(), id.clone())],
        )
        .unwrap();
        let delta = Derivation::abs(x, xx);
        let i1 = Derivation::abs(y.clone(), Derivation::axiom(y.clone(), t("γ0")));
        let i2 = Derivation::abs(y.clone(), Derivation::axiom(y, id.clone()));
        Derivation::app(delta, parse("\\y.y").unwrap(), vec![i2, i1]).unwrap()
    }

    #[test]
    fn builds_and_checks() {
        let d = delta_i();
        assert_eq!(d.term(), parse("(\\x.(x)x)\\y.y").unwrap());
        assert!(d.ctx.is_empty());
        assert_eq!(d.ty, t("([γ0], γ0)"));
        assert_eq!(d.size(), 9);
        check_derivation(&d, &d.term()).unwrap();
    }

    #[test]
    fn reports_the_failing_node() {
        let mut d = delta_i();
        if let Inference::App { args, .. } = &mut d.rule {
            args[1].ty = t("γ7");
        }
        let e = check_derivation(&d, &d.term()).unwrap_err();
        assert_eq!(e.path, vec![2]);
        assert_eq!(e.kind, ViolationKind::ConclusionMismatch);
    }

    #[test]
    fn premise_order_is_irrelevant() {
        let d = delta_i();
        let mut e = d.clone();
        if let Inference::App { args, .. } = &mut e.rule {
            args.reverse();
        }
        assert!(e != d);
        assert!(derivations_equivalent(&d, &e));
        check_derivation(&e, &d.term()).unwrap();
    }

    #[test]
    fn empty_argument_multiset() {
        let x = Name::new("x");
        let d = Derivation::abs(x.clone(), Derivation::axiom(x, t("([], γ0)")));
        let omega = parse("(\\x.(x)x)\\x.(x)x").unwrap();
        let app = Derivation::app(
            Derivation::axiom(Name::new("z"), t("([], γ0)")),
            omega.clone(),
            vec![],
        )
        .unwrap();
        assert_eq!(app.size(), 2);
        check_derivation(&app, &Term::app(Term::var("z"), omega)).unwrap();
        assert_eq!(d.ty, t("([([], γ0)], ([], γ0))"));
    }
}

//! Reference reducers on λ-terms, used as oracles for the machines.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;

use crate::term::{nameless, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStatus {
    Normalized,
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub term: Term,
    pub steps: usize,
    pub status: ReductionStatus,
}

/// Contracts the head redex, if any.
pub fn head_step(t: &Term) -> Option<Term> {
    match t {
        Term::Abs(x, b) => head_step(b).map(|b2| Term::Abs(x.clone(), Arc::new(b2))),
        Term::App(..) => {
            let (h, args) = t.spine();
            match h {
                Term::Abs(x, b) => {
                    let contracted = b.subst(x, args[0]);
                    Some(Term::apps(contracted, args[1..].iter().map(|a| (*a).clone())))
                }
                _ => None,
            }
        }
        Term::Var(_) => None,
    }
}

/// Contracts the leftmost outermost redex, if any.
pub fn leftmost_step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => None,
        Term::Abs(x, b) => leftmost_step(b).map(|b2| Term::Abs(x.clone(), Arc::new(b2))),
        Term::App(f, a) => {
            if let Term::Abs(x, b) = &**f {
                return Some(b.subst(x, a));
            }
            if let Some(f2) = leftmost_step(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            leftmost_step(a).map(|a2| Term::App(f.clone(), Arc::new(a2)))
        }
    }
}

fn iterate(t: &Term, fuel: usize, step: fn(&Term) -> Option<Term>) -> Reduction {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match step(&cur) {
            None => {
                return Reduction {
                    term: cur,
                    steps,
                    status: ReductionStatus::Normalized,
                }
            }
            Some(_) if steps == fuel => {
                return Reduction {
                    term: cur,
                    steps,
                    status: ReductionStatus::FuelExhausted,
                }
            }
            Some(next) => {
                cur = next;
                steps += 1;
            }
        }
    }
}

/// Head reduction to head normal form, within `fuel` steps.
pub fn head_reduce(t: &Term, fuel: usize) -> Reduction {
    iterate(t, fuel, head_step)
}

/// Normal-order reduction to normal form, within `fuel` steps.
pub fn leftmost_reduce(t: &Term, fuel: usize) -> Reduction {
    iterate(t, fuel, leftmost_step)
}

/// Whether the head reduction sequence of `t` revisits a term within `fuel`
/// steps. Head reduction is deterministic, so a revisit proves divergence.
pub fn head_reduction_cycles(t: &Term, fuel: usize) -> bool {
    cycles(t, fuel, head_step)
}

/// As [`head_reduction_cycles`], for normal-order reduction.
pub fn leftmost_reduction_cycles(t: &Term, fuel: usize) -> bool {
    cycles(t, fuel, leftmost_step)
}

fn cycles(t: &Term, fuel: usize, step: fn(&Term) -> Option<Term>) -> bool {
    let mut seen = BTreeSet::new();
    let mut cur = t.clone();
    for _ in 0..=fuel {
        if !seen.insert(nameless(&cur)) {
            return true;
        }
        match step(&cur) {
            Some(n) => cur = n,
            None => return false,
        }
    }
    false
}

pub fn is_head_normal(t: &Term) -> bool {
    head_step(t).is_none()
}

pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Abs(_, b) => is_normal(b),
        Term::App(f, a) => !matches!(&**f, Term::Abs(..)) && is_normal(f) && is_normal(a),
    }
}

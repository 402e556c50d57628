#![allow(dead_code)]

use krivine_lab_core::Term;
use proptest::prelude::*;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Decodes a byte string into a term of at most `budget` nodes. Variables
/// are drawn from the enclosing binders and, when `free` is set, from a few
/// free names. Names repeat, so shadowing occurs.
pub fn decode(bytes: &[u8], budget: usize, free: bool) -> Term {
    let mut pos = 0;
    let mut scope = Vec::new();
    build(bytes, &mut pos, budget.max(1), &mut scope, free)
}

fn next(bytes: &[u8], pos: &mut usize) -> u8 {
    let b = bytes.get(*pos).copied().unwrap_or(0);
    *pos += 1;
    b
}

fn build(bytes: &[u8], pos: &mut usize, budget: usize, scope: &mut Vec<&'static str>, free: bool) -> Term {
    let choice = next(bytes, pos) % 6;
    let var_ok = free || !scope.is_empty();
    if budget == 1 || (choice == 0 && var_ok) {
        if !var_ok {
            return Term::abs("x", Term::var("x"));
        }
        let pool: Vec<&str> = if free { NAMES.iter().copied().chain(scope.iter().copied()).collect() } else { scope.clone() };
        return Term::var(pool[next(bytes, pos) as usize % pool.len()]);
    }
    if choice <= 2 || budget < 3 || !var_ok {
        let x = NAMES[next(bytes, pos) as usize % NAMES.len()];
        scope.push(x);
        let body = build(bytes, pos, budget - 1, scope, free);
        scope.pop();
        return Term::abs(x, body);
    }
    let left = 1 + next(bytes, pos) as usize % (budget - 2);
    let f = build(bytes, pos, left, scope, free);
    let a = build(bytes, pos, budget - 1 - left, scope, free);
    Term::app(f, a)
}

pub fn closed_term(max: usize) -> impl Strategy<Value = Term> {
    proptest::collection::vec(any::<u8>(), 0..64).prop_map(move |b| decode(&b, max, false))
}

pub fn open_term(max: usize) -> impl Strategy<Value = Term> {
    proptest::collection::vec(any::<u8>(), 0..64).prop_map(move |b| decode(&b, max, true))
}

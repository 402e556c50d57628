//! Term corpora: every closed term up to a size, and named families.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::parse::parse;
use crate::term::Term;

const BINDERS: [&str; 8] = ["x", "y", "z", "w", "v", "u", "s", "r"];

fn binder(depth: usize) -> String {
    match BINDERS.get(depth) {
        Some(b) => (*b).to_string(),
        None => alloc::format!("x{depth}"),
    }
}

/// All closed terms with at most `max_size` AST nodes, one per α-class,
/// ordered by size. Binders are named after their depth.
pub fn closed_terms(max_size: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(terms_of_size(size, 0));
    }
    out
}

/// Closed normal terms with at most `max_size` nodes.
pub fn closed_normal_terms(max_size: usize) -> Vec<Term> {
    closed_terms(max_size).into_iter().filter(crate::reduce::is_normal).collect()
}

/// Terms of exactly `size` nodes whose free variables are among the
/// binders at depths `0..scope`.
fn terms_of_size(size: usize, scope: usize) -> Vec<Term> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if size == 1 {
        for d in 0..scope {
            out.push(Term::var(&binder(d)));
        }
        return out;
    }
    for body in terms_of_size(size - 1, scope + 1) {
        out.push(Term::abs(&binder(scope), body));
    }
    for left in 1..size - 1 {
        let fs = terms_of_size(left, scope);
        if fs.is_empty() {
            continue;
        }
        let args = terms_of_size(size - 1 - left, scope);
        for f in &fs {
            for a in &args {
                out.push(Term::app(f.clone(), a.clone()));
            }
        }
    }
    out
}

/// Church numeral `λf.λx.(f)…(f)x`.
pub fn church(n: usize) -> Term {
    let mut body = Term::var("x");
    for _ in 0..n {
        body = Term::app(Term::var("f"), body);
    }
    Term::abs("f", Term::abs("x", body))
}

pub fn identity() -> Term {
    Term::abs("y", Term::var("y"))
}

/// `λx.λy.x`, also the boolean true.
pub fn k_combinator() -> Term {
    Term::abs("x", Term::abs("y", Term::var("x")))
}

/// `λx.λy.y`, the boolean false.
pub fn false_term() -> Term {
    Term::abs("x", Term::abs("y", Term::var("y")))
}

pub fn delta() -> Term {
    Term::abs("x", Term::app(Term::var("x"), Term::var("x")))
}

pub fn omega() -> Term {
    Term::app(delta(), delta())
}

/// `λx.(x)1(x)1 0` with the booleans above.
pub fn boolean_probe() -> Term {
    let inner = Term::apps(Term::var("x"), [k_combinator(), false_term()]);
    Term::abs("x", Term::apps(Term::var("x"), [k_combinator(), inner]))
}

/// Named terms used throughout the test suites.
pub fn named_terms() -> Vec<(String, Term)> {
    let mut out = vec![
        ("I".to_string(), identity()),
        ("K".to_string(), k_combinator()),
        ("0".to_string(), false_term()),
        ("1".to_string(), k_combinator()),
        ("delta".to_string(), delta()),
        ("Omega".to_string(), omega()),
        ("probe".to_string(), boolean_probe()),
        ("delta-I".to_string(), Term::app(delta(), identity())),
        (
            "Omega3".to_string(),
            parse("(\\x.(x)x x)\\x.(x)x x").expect("well-formed"),
        ),
    ];
    for n in 0..=5 {
        out.push((alloc::format!("church{n}"), church(n)));
        out.push((alloc::format!("church{n}-I"), Term::app(church(n), identity())));
    }
    out
}

//! λ-terms with named variables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with any trailing digits removed, used as the stem for fresh names.
    pub fn stem(&self) -> &str {
        let s = self.as_str();
        let t = s.trim_end_matches(|c: char| c.is_ascii_digit());
        if t.is_empty() {
            s
        } else {
            t
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Name),
    Abs(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Name::new(x))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(Name::new(x), Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// `(f)a1 a2 … an`
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Abs(y, b) => y != x && b.has_free(x),
            Term::App(f, a) => f.has_free(x) || a.has_free(x),
        }
    }

    /// Every name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Abs(x, b) => {
                out.insert(x.clone());
                b.collect_names(out);
            }
            Term::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
        }
    }

    /// Splits `(h)a1 … an` into the head and its arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Capture-avoiding substitution of `s` for the free occurrences of `x`.
    pub fn subst(&self, x: &Name, s: &Term) -> Term {
        let mut map = BTreeMap::new();
        map.insert(x.clone(), s.clone());
        self.subst_many(&map)
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst_many(&self, map: &BTreeMap<Name, Term>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        let mut avoid = BTreeSet::new();
        for (k, v) in map {
            avoid.insert(k.clone());
            avoid.extend(v.free_vars());
        }
        self.collect_names(&mut avoid);
        subst_rec(self, map, &mut avoid)
    }

    /// Renames free occurrences of `x` to `y`, assuming `y` is not bound in the term.
    pub(crate) fn rename_free(&self, x: &Name, y: &Name) -> Term {
        match self {
            Term::Var(z) if z == x => Term::Var(y.clone()),
            Term::Var(_) => self.clone(),
            Term::Abs(z, _) if z == x => self.clone(),
            Term::Abs(z, b) => Term::Abs(z.clone(), Arc::new(b.rename_free(x, y))),
            Term::App(f, a) => Term::App(Arc::new(f.rename_free(x, y)), Arc::new(a.rename_free(x, y))),
        }
    }
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Abs(x, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    }
}

fn subst_rec(t: &Term, map: &BTreeMap<Name, Term>, avoid: &mut BTreeSet<Name>) -> Term {
    match t {
        Term::Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, a) => Term::App(Arc::new(subst_rec(f, map, avoid)), Arc::new(subst_rec(a, map, avoid))),
        Term::Abs(x, b) => {
            let mut inner = map.clone();
            inner.remove(x);
            inner.retain(|k, _| b.has_free(k));
            if inner.is_empty() {
                return t.clone();
            }
            let captures = inner.values().any(|v| v.has_free(x));
            if captures {
                let y = fresh_name(x, avoid);
                avoid.insert(y.clone());
                inner.insert(x.clone(), Term::Var(y.clone()));
                Term::Abs(y, Arc::new(subst_rec(b, &inner, avoid)))
            } else {
                Term::Abs(x.clone(), Arc::new(subst_rec(b, &inner, avoid)))
            }
        }
    }
}

/// The first name of the form `stem` + k (k = 1, 2, …) that is not in `taken`.
pub fn fresh_name(base: &Name, taken: &BTreeSet<Name>) -> Name {
    fresh_name_where(base, |n| taken.contains(n))
}

pub(crate) fn fresh_name_where(base: &Name, taken: impl Fn(&Name) -> bool) -> Name {
    let stem = base.stem();
    let mut k = 1usize;
    loop {
        let mut s = String::from(stem);
        s.push_str(&k.to_string());
        let n = Name::new(&s);
        if !taken(&n) {
            return n;
        }
        k += 1;
    }
}

/// Renames binders so that every binder is distinct from every other binder
/// and from every free variable.
pub fn ensure_variable_convention(t: &Term) -> Term {
    let mut taken = t.all_names();
    let mut seen: BTreeSet<Name> = t.free_vars();
    let mut scope = BTreeMap::new();
    convention_rec(t, &mut taken, &mut seen, &mut scope)
}

fn convention_rec(
    t: &Term,
    taken: &mut BTreeSet<Name>,
    seen: &mut BTreeSet<Name>,
    scope: &mut BTreeMap<Name, Name>,
) -> Term {
    match t {
        Term::Var(x) => Term::Var(scope.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::App(f, a) => {
            let f2 = convention_rec(f, taken, seen, scope);
            let a2 = convention_rec(a, taken, seen, scope);
            Term::App(Arc::new(f2), Arc::new(a2))
        }
        Term::Abs(x, b) => {
            let y = if seen.contains(x) {
                let y = fresh_name(x, taken);
                taken.insert(y.clone());
                y
            } else {
                x.clone()
            };
            seen.insert(y.clone());
            let prev = scope.insert(x.clone(), y.clone());
            let b2 = convention_rec(b, taken, seen, scope);
            match prev {
                Some(p) => scope.insert(x.clone(), p),
                None => scope.remove(x),
            };
            Term::Abs(y, Arc::new(b2))
        }
    }
}

/// Whether all binders are pairwise distinct and distinct from the free variables.
pub fn satisfies_variable_convention(t: &Term) -> bool {
    fn go(t: &Term, seen: &mut BTreeSet<Name>) -> bool {
        match t {
            Term::Var(_) => true,
            Term::Abs(x, b) => seen.insert(x.clone()) && go(b, seen),
            Term::App(f, a) => go(f, seen) && go(a, seen),
        }
    }
    let mut seen = t.free_vars();
    go(t, &mut seen)
}

/// α-equivalence.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    fn go(a: &Term, b: &Term, env: &mut Vec<(Name, Name)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            }
            (Term::Abs(x, p), Term::Abs(y, q)) => {
                env.push((x.clone(), y.clone()));
                let r = go(p, q, env);
                env.pop();
                r
            }
            (Term::App(f, a), Term::App(g, b)) => go(f, g, env) && go(a, b, env),
            _ => false,
        }
    }
    go(t1, t2, &mut Vec::new())
}

/// A nameless rendering of a term, equal for α-equivalent terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) enum Nameless {
    Bound(usize),
    Free(Name),
    Abs(alloc::boxed::Box<Nameless>),
    App(alloc::boxed::Box<Nameless>, alloc::boxed::Box<Nameless>),
}

pub(crate) fn nameless(t: &Term) -> Nameless {
    fn go(t: &Term, env: &mut Vec<Name>) -> Nameless {
        match t {
            Term::Var(x) => match env.iter().rev().position(|y| y == x) {
                Some(i) => Nameless::Bound(i),
                None => Nameless::Free(x.clone()),
            },
            Term::Abs(x, b) => {
                env.push(x.clone());
                let r = go(b, env);
                env.pop();
                Nameless::Abs(alloc::boxed::Box::new(r))
            }
            Term::App(f, a) => Nameless::App(alloc::boxed::Box::new(go(f, env)), alloc::boxed::Box::new(go(a, env))),
        }
    }
    go(t, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn convention_renames_repeated_binders() {
        let t = ensure_variable_convention(&p("(\\y.y)\\y.y"));
        assert_eq!(t.to_string(), "(\\y.y)\\y1.y1");
        let t = ensure_variable_convention(&p("\\x.\\x.x"));
        assert_eq!(t.to_string(), "\\x.\\x1.x1");
        assert!(satisfies_variable_convention(&t));
    }

    #[test]
    fn convention_avoids_free_names() {
        let t = ensure_variable_convention(&p("(x)\\x.x"));
        assert_eq!(t.to_string(), "(x)\\x1.x1");
    }

    #[test]
    fn substitution_avoids_capture() {
        let t = p("\\y.(x)y");
        let r = t.subst(&Name::new("x"), &p("y"));
        assert!(alpha_eq(&r, &p("\\z.(y)z")));
        assert!(!alpha_eq(&r, &p("\\y.(y)y")));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p("\\x.x"), &p("\\y.y")));
        assert!(!alpha_eq(&p("\\x.\\y.x"), &p("\\x.\\y.y")));
        assert!(!alpha_eq(&p("\\x.y"), &p("\\y.y")));
        assert!(alpha_eq(&p("\\x.\\x.x"), &p("\\a.\\b.b")));
    }

    #[test]
    fn nameless_matches_alpha() {
        assert_eq!(nameless(&p("\\x.(x)\\y.(y)x")), nameless(&p("\\a.(a)\\b.(b)a")));
        assert_ne!(nameless(&p("\\x.z")), nameless(&p("\\x.x")));
    }
}

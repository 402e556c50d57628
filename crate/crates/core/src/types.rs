//! System R types: atoms, arrows from finite multisets, and contexts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::term::Name;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom(pub u32);

/// A type: an atom or an arrow `(a, α)` from a finite multiset of types.
///
/// Atoms sort before arrows; arrows compare by argument multiset, then result.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Atom(Atom),
    Arrow(Arc<Arrow>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub arg: TypeMultiset,
    pub res: TypeExpr,
}

/// A finite multiset of types, kept sorted so that equality is multiset equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TypeMultiset(Vec<TypeExpr>);

impl TypeMultiset {
    pub fn empty() -> Self {
        TypeMultiset(Vec::new())
    }

    pub fn new(mut items: Vec<TypeExpr>) -> Self {
        items.sort();
        TypeMultiset(items)
    }

    pub fn singleton(t: TypeExpr) -> Self {
        TypeMultiset(alloc::vec![t])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TypeExpr> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[TypeExpr] {
        &self.0
    }

    /// Multiset sum.
    pub fn sum(&self, other: &TypeMultiset) -> TypeMultiset {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TypeMultiset::new(v)
    }

    /// The distinct elements.
    pub fn support(&self) -> BTreeSet<TypeExpr> {
        self.0.iter().cloned().collect()
    }

    pub fn map(&self, f: impl FnMut(&TypeExpr) -> TypeExpr) -> TypeMultiset {
        TypeMultiset::new(self.0.iter().map(f).collect())
    }
}

impl FromIterator<TypeExpr> for TypeMultiset {
    fn from_iter<I: IntoIterator<Item = TypeExpr>>(iter: I) -> Self {
        TypeMultiset::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TypeMultiset {
    type Item = &'a TypeExpr;
    type IntoIter = core::slice::Iter<'a, TypeExpr>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl TypeExpr {
    pub fn atom(i: u32) -> TypeExpr {
        TypeExpr::Atom(Atom(i))
    }

    pub fn arrow(arg: TypeMultiset, res: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Arc::new(Arrow { arg, res }))
    }

    /// `a1 … am α`, that is `(a1, (a2, … (am, α)))`.
    pub fn curried<I>(args: I, res: TypeExpr) -> TypeExpr
    where
        I: IntoIterator<Item = TypeMultiset>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(res, |acc, a| TypeExpr::arrow(a, acc))
    }

    /// Splits `a1 … am α` into its first `m` argument multisets and the rest.
    pub fn uncurry(&self, m: usize) -> Option<(Vec<TypeMultiset>, TypeExpr)> {
        let mut args = Vec::with_capacity(m);
        let mut t = self;
        for _ in 0..m {
            match t {
                TypeExpr::Arrow(a) => {
                    args.push(a.arg.clone());
                    t = &a.res;
                }
                TypeExpr::Atom(_) => return None,
            }
        }
        Some((args, t.clone()))
    }

    pub fn as_arrow(&self) -> Option<&Arrow> {
        match self {
            TypeExpr::Arrow(a) => Some(a),
            TypeExpr::Atom(_) => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, TypeExpr::Atom(_))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            TypeExpr::Atom(a) => {
                out.insert(*a);
            }
            TypeExpr::Arrow(a) => {
                for t in &a.arg {
                    t.collect_atoms(out);
                }
                a.res.collect_atoms(out);
            }
        }
    }

    /// Atoms in order of first occurrence, left to right.
    pub fn atoms_in_order(&self, out: &mut Vec<Atom>) {
        match self {
            TypeExpr::Atom(a) => {
                if !out.contains(a) {
                    out.push(*a);
                }
            }
            TypeExpr::Arrow(a) => {
                for t in &a.arg {
                    t.atoms_in_order(out);
                }
                a.res.atoms_in_order(out);
            }
        }
    }

    pub fn max_atom(&self) -> Option<u32> {
        self.atoms().iter().next_back().map(|a| a.0)
    }

    pub fn contains_atom(&self, x: Atom) -> bool {
        match self {
            TypeExpr::Atom(a) => *a == x,
            TypeExpr::Arrow(a) => a.arg.iter().any(|t| t.contains_atom(x)) || a.res.contains_atom(x),
        }
    }

    /// Replaces atoms through `f`.
    pub fn map_atoms(&self, f: &mut impl FnMut(Atom) -> TypeExpr) -> TypeExpr {
        match self {
            TypeExpr::Atom(a) => f(*a),
            TypeExpr::Arrow(a) => {
                let arg = a.arg.map(|t| t.map_atoms(f));
                TypeExpr::arrow(arg, a.res.map_atoms(f))
            }
        }
    }

    pub fn shift_atoms(&self, by: u32) -> TypeExpr {
        self.map_atoms(&mut |a| TypeExpr::Atom(Atom(a.0 + by)))
    }
}

/// Size of a type: `|γ| = 1` and `|(a, α)| = aux(a) + |α| + 1`.
pub fn type_size(t: &TypeExpr) -> usize {
    match t {
        TypeExpr::Atom(_) => 1,
        TypeExpr::Arrow(a) => multiset_aux(&a.arg) + type_size(&a.res) + 1,
    }
}

/// `aux(γ) = 0` and `aux((a, α)) = |a| + aux(α) + 1`.
pub fn type_aux(t: &TypeExpr) -> usize {
    match t {
        TypeExpr::Atom(_) => 0,
        TypeExpr::Arrow(a) => multiset_size(&a.arg) + type_aux(&a.res) + 1,
    }
}

pub fn multiset_size(m: &TypeMultiset) -> usize {
    m.iter().map(type_size).sum()
}

pub fn multiset_aux(m: &TypeMultiset) -> usize {
    m.iter().map(type_aux).sum()
}

/// Exact types: no empty multiset in positive position.
pub fn is_exact(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Atom(_) => true,
        TypeExpr::Arrow(a) => a.arg.iter().all(is_coexact) && is_exact(&a.res),
    }
}

/// Co-exact types: no empty multiset in negative position.
pub fn is_coexact(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Atom(_) => true,
        TypeExpr::Arrow(a) => !a.arg.is_empty() && a.arg.iter().all(is_exact) && is_coexact(&a.res),
    }
}

/// Whether every multiset in positive occurrence in `t` is a singleton,
/// where `positive` is the polarity of `t` itself.
pub fn positive_multisets_singleton(t: &TypeExpr, positive: bool) -> bool {
    match t {
        TypeExpr::Atom(_) => true,
        TypeExpr::Arrow(a) => {
            // The argument multiset has the opposite polarity of the arrow.
            (positive || a.arg.len() == 1)
                && a.arg.iter().all(|s| positive_multisets_singleton(s, !positive))
                && positive_multisets_singleton(&a.res, positive)
        }
    }
}

/// A typing context: finitely many variables, each with a non-empty multiset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Context(BTreeMap<Name, TypeMultiset>);

impl Context {
    pub fn empty() -> Context {
        Context(BTreeMap::new())
    }

    pub fn singleton(x: Name, t: TypeExpr) -> Context {
        let mut m = BTreeMap::new();
        m.insert(x, TypeMultiset::singleton(t));
        Context(m)
    }

    pub fn from_map(map: BTreeMap<Name, TypeMultiset>) -> Context {
        Context(map.into_iter().filter(|(_, m)| !m.is_empty()).collect())
    }

    /// The multiset of `x`, `[]` when `x` is not in the domain.
    pub fn get(&self, x: &Name) -> TypeMultiset {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &TypeMultiset)> {
        self.0.iter()
    }

    /// Pointwise multiset sum.
    pub fn sum(&self, other: &Context) -> Context {
        let mut m = self.0.clone();
        for (x, a) in &other.0 {
            let e = m.entry(x.clone()).or_default();
            *e = e.sum(a);
        }
        Context(m)
    }

    /// `Γ` without `x`, together with `Γ(x)`.
    pub fn remove(&self, x: &Name) -> (Context, TypeMultiset) {
        let mut m = self.0.clone();
        let a = m.remove(x).unwrap_or_default();
        (Context(m), a)
    }

    pub fn map_types(&self, mut f: impl FnMut(&TypeExpr) -> TypeExpr) -> Context {
        Context(self.0.iter().map(|(x, a)| (x.clone(), a.map(&mut f))).collect())
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        for a in self.0.values() {
            for t in a {
                t.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    /// Σ over the context of the auxiliary sizes.
    pub fn aux(&self) -> usize {
        self.0.values().map(multiset_aux).sum()
    }
}

/// Contexts whose types are all co-exact.
pub fn is_exact_context(ctx: &Context) -> bool {
    ctx.iter().all(|(_, a)| a.iter().all(is_coexact))
}

/// The typing `(Γ, α)` seen as the single type `Γ(x1) … Γ(xm) α` over the
/// given variables.
pub fn typing_as_type(ctx: &Context, vars: &[Name], ty: &TypeExpr) -> TypeExpr {
    TypeExpr::curried(vars.iter().map(|x| ctx.get(x)), ty.clone())
}

/// `|(Γ, α)|`: the size of the typing seen as a single curried type.
pub fn typing_size(ctx: &Context, ty: &TypeExpr) -> usize {
    ctx.aux() + ctx.len() + type_size(ty)
}

// ---- printing and parsing ----

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "γ{}", self.0)
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Atom(a) => write!(f, "{a}"),
            TypeExpr::Arrow(a) => write!(f, "({}, {})", a.arg, a.res),
        }
    }
}

impl fmt::Debug for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for TypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for TypeParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type parse error at offset {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for TypeParseError {}

/// Parses `γ3` (or `g3`), `[t, …]` and `([t, …], t)`.
pub fn parse_type(src: &str) -> Result<TypeExpr, TypeParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut p = TypeParser { chars, pos: 0 };
    let t = p.ty()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("expected end of input"));
    }
    Ok(t)
}

pub fn parse_multiset(src: &str) -> Result<TypeMultiset, TypeParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut p = TypeParser { chars, pos: 0 };
    let m = p.multiset()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error("expected end of input"));
    }
    Ok(m)
}

struct TypeParser {
    chars: Vec<char>,
    pos: usize,
}

impl TypeParser {
    fn error(&self, message: &str) -> TypeParseError {
        TypeParseError {
            offset: self.pos,
            message: String::from(message),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ty(&mut self) -> Result<TypeExpr, TypeParseError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('γ') | Some('g') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected atom index"));
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let i = s.parse().map_err(|_| self.error("atom index out of range"))?;
                Ok(TypeExpr::atom(i))
            }
            Some('(') => {
                self.pos += 1;
                let arg = self.multiset()?;
                if !self.eat(',') {
                    return Err(self.error("expected ','"));
                }
                let res = self.ty()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(TypeExpr::arrow(arg, res))
            }
            _ => Err(self.error("expected a type")),
        }
    }

    fn multiset(&mut self) -> Result<TypeMultiset, TypeParseError> {
        if !self.eat('[') {
            return Err(self.error("expected '['"));
        }
        let mut items = Vec::new();
        if self.eat(']') {
            return Ok(TypeMultiset::empty());
        }
        loop {
            items.push(self.ty()?);
            if self.eat(']') {
                break;
            }
            if !self.eat(',') {
                return Err(self.error("expected ',' or ']'"));
            }
        }
        Ok(TypeMultiset::new(items))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    fn id_type() -> TypeExpr {
        t("([γ0], γ0)")
    }

    #[test]
    fn sizes_of_small_types() {
        assert_eq!(type_size(&id_type()), 2);
        assert_eq!(type_aux(&id_type()), 2);
        for n in 0..6 {
            let a = TypeMultiset::new(alloc::vec![id_type(); n]);
            let ty = TypeExpr::arrow(a, id_type());
            assert_eq!(type_size(&ty), 2 * n + 3);
        }
    }

    #[test]
    fn exactness() {
        assert!(is_exact(&t("([], γ0)")));
        assert!(!is_coexact(&t("([], γ0)")));
        assert!(is_exact(&id_type()));
        // [] sits in argument position of the result: negative, so exact.
        assert!(is_exact(&t("([γ0], ([], γ0))")));
        // [] in argument of an argument: positive.
        assert!(!is_exact(&t("([([], γ0)], γ0)")));
    }

    #[test]
    fn multisets_are_canonical() {
        let a = TypeMultiset::new(alloc::vec![id_type(), TypeExpr::atom(3), TypeExpr::atom(1)]);
        assert_eq!(a.to_string(), "[γ1, γ3, ([γ0], γ0)]");
        let b = parse_multiset("[([γ0], γ0), γ3, γ1]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn printing_round_trips() {
        for s in ["γ0", "([], γ2)", "([γ0, ([γ1], γ1)], ([γ0], γ0))"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t("([g0,g0],g0)"), t("([γ0, γ0], γ0)"));
        assert!(parse_type("([γ0] γ0)").is_err());
    }

    #[test]
    fn context_sum_and_remove() {
        let x = Name::new("x");
        let c1 = Context::singleton(x.clone(), TypeExpr::atom(0));
        let c2 = Context::singleton(x.clone(), TypeExpr::atom(1));
        let s = c1.sum(&c2);
        assert_eq!(s.get(&x).len(), 2);
        let (rest, a) = s.remove(&x);
        assert!(rest.is_empty());
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn curried_typing_size() {
        let x = Name::new("x");
        let ctx = Context::singleton(x.clone(), TypeExpr::atom(0));
        let ty = TypeExpr::atom(0);
        let whole = typing_as_type(&ctx, &[x], &ty);
        assert_eq!(typing_size(&ctx, &ty), type_size(&whole));
    }
}

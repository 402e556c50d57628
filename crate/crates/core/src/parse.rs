//! Parser and printer for Krivine notation: `(v)u` is application,
//! `(v)u1 u2` is `((v)u1)u2`, and `\x.t` or `λx.t` is abstraction.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Name, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset of the offending input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() && c != 'λ' || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push((i, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((i, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            _ if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: alloc::format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            None => String::from("end of input"),
            Some(Tok::Lambda) => String::from("'\\'"),
            Some(Tok::Dot) => String::from("'.'"),
            Some(Tok::LParen) => String::from("'('"),
            Some(Tok::RParen) => String::from("')'"),
            Some(Tok::Ident(s)) => alloc::format!("identifier {s:?}"),
        };
        Err(ParseError {
            offset: self.offset(),
            message: alloc::format!("{message}, found {found}"),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&alloc::format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let n = Name::new(s);
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a variable"),
        }
    }

    // term := lambda | ident | '(' term ')' arg*
    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) => self.lambda(),
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident()?)),
            Some(Tok::LParen) => self.chain(),
            _ => self.err("expected a term"),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let x = self.ident()?;
        self.expect(Tok::Dot, "'.'")?;
        let body = self.term()?;
        Ok(Term::Abs(x, Arc::new(body)))
    }

    // '(' term ')' arg*, where a variable argument may be followed by further
    // arguments and an abstraction or parenthesised argument extends to the end.
    fn chain(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut head = self.term()?;
        self.expect(Tok::RParen, "')'")?;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => {
                    let x = self.ident()?;
                    head = Term::app(head, Term::Var(x));
                }
                Some(Tok::Lambda) => {
                    let a = self.lambda()?;
                    return Ok(Term::app(head, a));
                }
                Some(Tok::LParen) => {
                    let a = self.chain()?;
                    return Ok(Term::app(head, a));
                }
                _ => return Ok(head),
            }
        }
    }
}

/// Parses a term in Krivine notation.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("expected end of input");
    }
    Ok(t)
}

impl core::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Abs(x, b) => write!(f, "\\{x}.{b}"),
            Term::App(..) => {
                let (head, args) = self.spine();
                write_app(f, head, &args)
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Only the last argument may be an abstraction or an application, since
// those extend to the end of the enclosing chain.
fn write_app(f: &mut fmt::Formatter<'_>, head: &Term, args: &[&Term]) -> fmt::Result {
    let n = args.len();
    let cut = args[..n - 1].iter().rposition(|a| !matches!(a, Term::Var(_)));
    match cut {
        None => {
            write!(f, "({head})")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{a}")?;
            }
            Ok(())
        }
        Some(i) => {
            f.write_str("(")?;
            write_app(f, head, &args[..=i])?;
            f.write_str(")")?;
            for (j, a) in args[i + 1..].iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{a}")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn prints_krivine_notation() {
        assert_eq!(Term::abs("y", Term::var("y")).to_string(), "\\y.y");
        assert_eq!(Term::app(Term::var("x"), Term::var("y")).to_string(), "(x)y");
        assert_eq!(Term::apps(Term::var("x"), [Term::var("y"), Term::var("z")]).to_string(), "(x)y z");
        assert_eq!(Term::app(Term::var("x"), Term::app(Term::var("y"), Term::var("z"))).to_string(), "(x)(y)z");
    }

    #[test]
    fn parses_the_running_example() {
        let t = parse("(λx.(x)x)λy.y").unwrap();
        assert_eq!(
            t,
            Term::app(
                Term::abs("x", Term::app(Term::var("x"), Term::var("x"))),
                Term::abs("y", Term::var("y"))
            )
        );
        assert_eq!(t.to_string(), "(\\x.(x)x)\\y.y");
    }

    #[test]
    fn compound_arguments_before_the_last() {
        let t = Term::apps(Term::var("x"), [Term::app(Term::var("y"), Term::var("z")), Term::var("w")]);
        let s = t.to_string();
        assert_eq!(s, "((x)(y)z)w");
        assert_eq!(parse(&s).unwrap(), t);
        let t = Term::apps(Term::var("x"), [Term::abs("a", Term::var("a")), Term::var("w"), Term::var("v")]);
        assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn reports_offsets() {
        let e = parse("((x)").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse("\\x x").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse("x y").is_err());
        assert!(parse("").is_err());
    }
}

//! Textual graph specifications.
//!
//! ```text
//! spec := tensor(T,T) | twist(T) | ADpow(m,n) | ApowD(m,n) | EE(n)
//!       | exc:<name> | dual(spec) | mult(k,spec)
//! T    := A<n> | D<n> | E<n>
//! ```
//!
//! `dual` swaps the edge colors; `mult` multiplies every arrow and yields a
//! quiver rather than a bigraph.

use crate::ade::AdeType;
use crate::families::{canonical_exceptional_name, FamilyError, FamilySpec};
use crate::graph::{Bigraph, BipartiteQuiver, GraphError};
use std::fmt;
use thiserror::Error;

/// Upper bounds keeping generated instances small enough to build.
pub const MAX_RANK: usize = 200;
pub const MAX_PARAM: usize = 64;
pub const MAX_MULT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("value out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("`{0}` describes a quiver with multiple arrows, not a bigraph")]
    NotSimple(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Family(FamilySpec),
    Dual(Box<GraphSpec>),
    Mult(u32, Box<GraphSpec>),
}

impl GraphSpec {
    pub fn build(&self) -> Result<BipartiteQuiver, SpecError> {
        Ok(match self {
            GraphSpec::Family(f) => f.build()?.into_quiver(),
            GraphSpec::Dual(inner) => inner.build()?.color_dual(),
            GraphSpec::Mult(k, inner) => inner.build()?.scale_multiplicities(*k),
        })
    }

    pub fn build_bigraph(&self) -> Result<Bigraph, SpecError> {
        let q = self.build()?;
        Bigraph::try_from(q).map_err(|e: GraphError| match e {
            GraphError::Multiplicity(..) => SpecError::NotSimple(self.to_string()),
            other => SpecError::Family(FamilyError::Graph(other)),
        })
    }

    /// Predicted `(h, h′)`, when the spec is a plain or dualized family member.
    pub fn coxeter_pair(&self) -> Option<(u32, u32)> {
        match self {
            GraphSpec::Family(f) => f.coxeter_pair().ok(),
            GraphSpec::Dual(inner) => inner.coxeter_pair().map(|(a, b)| (b, a)),
            GraphSpec::Mult(k, inner) if *k == 1 => inner.coxeter_pair(),
            GraphSpec::Mult(..) => None,
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Family(x) => write!(f, "{x}"),
            GraphSpec::Dual(x) => write!(f, "dual({x})"),
            GraphSpec::Mult(k, x) => write!(f, "mult({k},{x})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> Result<(), SpecError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().bytes().take_while(|b| b.is_ascii_alphanumeric()).count();
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn number(&mut self, max: usize) -> Result<usize, SpecError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().bytes().take_while(|b| b.is_ascii_digit()).count();
        if len == 0 {
            return self.err("expected a number");
        }
        self.pos += len;
        let text = &self.src[start..self.pos];
        match text.parse::<usize>() {
            Ok(v) if v <= max => Ok(v),
            _ => Err(SpecError::Range(format!("{text} exceeds {max}"))),
        }
    }

    fn ade(&mut self) -> Result<AdeType, SpecError> {
        let start = self.pos;
        let word = self.ident();
        let t: AdeType = match word.parse() {
            Ok(t) => t,
            Err(_) => return Err(SpecError::Syntax { pos: start, msg: format!("`{word}` is not a Dynkin type") }),
        };
        if t.rank() > MAX_RANK {
            return Err(SpecError::Range(format!("rank {} exceeds {MAX_RANK}", t.rank())));
        }
        Ok(t)
    }

    fn spec(&mut self) -> Result<GraphSpec, SpecError> {
        self.depth += 1;
        if self.depth > 32 {
            return self.err("nesting too deep");
        }
        self.skip_ws();
        if self.rest().starts_with("exc:") {
            self.pos += 4;
            let start = self.pos;
            let len: usize = self.rest().chars().take_while(|&c| c != ')' && c != ',').map(char::len_utf8).sum();
            self.pos += len;
            let raw = self.src[start..self.pos].trim();
            let name = canonical_exceptional_name(raw)
                .ok_or_else(|| SpecError::Family(FamilyError::UnknownExceptional(raw.to_string())))?;
            self.depth -= 1;
            return Ok(GraphSpec::Family(FamilySpec::Exceptional(name.to_string())));
        }
        let head_pos = self.pos;
        let head = self.ident();
        self.eat('(')?;
        let out = match head {
            "tensor" => {
                let a = self.ade()?;
                self.eat(',')?;
                let b = self.ade()?;
                GraphSpec::Family(FamilySpec::Tensor(a, b))
            }
            "twist" => GraphSpec::Family(FamilySpec::Twist(self.ade()?)),
            "ADpow" | "ApowD" => {
                let m = self.number(MAX_PARAM)?;
                self.eat(',')?;
                let n = self.number(MAX_PARAM)?;
                if m < 2 || n < 2 {
                    return Err(SpecError::Range(format!("{head}({m},{n}) needs m, n >= 2")));
                }
                GraphSpec::Family(if head == "ADpow" { FamilySpec::ADpow(m, n) } else { FamilySpec::ApowD(m, n) })
            }
            "EE" => {
                let n = self.number(MAX_PARAM)?;
                if n < 2 {
                    return Err(SpecError::Range(format!("EE({n}) needs n >= 2")));
                }
                GraphSpec::Family(FamilySpec::EE(n))
            }
            "dual" => GraphSpec::Dual(Box::new(self.spec()?)),
            "mult" => {
                let k = self.number(MAX_MULT as usize)?;
                if k == 0 {
                    return Err(SpecError::Range("multiplicity must be positive".into()));
                }
                self.eat(',')?;
                GraphSpec::Mult(k as u32, Box::new(self.spec()?))
            }
            _ => return Err(SpecError::Syntax { pos: head_pos, msg: format!("unknown constructor `{head}`") }),
        };
        self.eat(')')?;
        self.depth -= 1;
        Ok(out)
    }
}

/// Parses a graph specification.
pub fn parse_spec(src: &str) -> Result<GraphSpec, SpecError> {
    let mut p = Parser { src, pos: 0, depth: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("trailing input");
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        for (text, shown) in [
            ("tensor(A3,A2)", "tensor(A3,A2)"),
            (" twist( D5 ) ", "twist(D5)"),
            ("ADpow(4,5)", "ADpow(4,5)"),
            ("ApowD(4,5)", "ApowD(4,5)"),
            ("EE(5)", "EE(5)"),
            ("exc:E8*E8=E8=E8", "exc:E8*E8≡E8≡E8"),
            ("dual(exc:D5xA7)", "dual(exc:D5⊠A7)"),
            ("mult(2,tensor(A2,A2))", "mult(2,tensor(A2,A2))"),
        ] {
            let s = parse_spec(text).unwrap();
            assert_eq!(s.to_string(), shown);
            assert_eq!(parse_spec(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["", "tensor(A3)", "tensor(A3,B2)", "twist(E9)", "ADpow(1,3)", "EE(1)", "foo(1)", "exc:E9", "mult(0,twist(A2))", "twist(A2) x", "tensor(A999999999999999999999,A1)"] {
            assert!(parse_spec(text).is_err(), "{text}");
        }
    }

    #[test]
    fn mult_is_not_a_bigraph() {
        let s = parse_spec("mult(2,tensor(A2,A2))").unwrap();
        assert!(s.build().is_ok());
        assert!(matches!(s.build_bigraph(), Err(SpecError::NotSimple(_))));
        assert_eq!(s.coxeter_pair(), None);
        assert_eq!(parse_spec("dual(tensor(A3,A2))").unwrap().coxeter_pair(), Some((3, 4)));
    }
}

//! Text form of ψ expression trees.
//!
//! ```text
//! node  := "linear" "(" vec ")"
//!        | "absdev" "(" vec "," num ")"          |<c, x> - offset|
//!        | "dist"   "(" num "," vec ")"          alpha * ||x - center||_p
//!        | "smooth" "(" num "," num "," vec ")"  alpha * sqrt(eps + ||x - center||_2^2)
//!        | "max"    "(" node { "," node } ")"
//!        | "sum"    "(" node { "," node } ")"
//!        | "scale"  "(" num "," node ")"
//!        | "shift"  "(" node "," num ")"         child(x) - c
//! vec   := "[" num { "," num } "]"
//! num   := decimal or exponent float literal
//! ```
//!
//! Whitespace is free between tokens. Numbers are printed with Rust's
//! shortest round-trip formatting, so `parse(display(t)) == t` exactly.

use std::fmt;

use super::Node;
use crate::error::{Error, Result};

fn write_vec(f: &mut fmt::Formatter<'_>, v: &[f64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x:?}")?;
    }
    f.write_str("]")
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, children: &[Node]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Linear(c) => {
                f.write_str("linear(")?;
                write_vec(f, c)?;
                f.write_str(")")
            }
            Node::AbsDev { coeffs, offset } => {
                f.write_str("absdev(")?;
                write_vec(f, coeffs)?;
                write!(f, ", {offset:?})")
            }
            Node::ScaledDist { alpha, center } => {
                write!(f, "dist({alpha:?}, ")?;
                write_vec(f, center)?;
                f.write_str(")")
            }
            Node::SmoothDist { alpha, eps, center } => {
                write!(f, "smooth({alpha:?}, {eps:?}, ")?;
                write_vec(f, center)?;
                f.write_str(")")
            }
            Node::MaxOf(children) => write_list(f, "max", children),
            Node::Sum(children) => write_list(f, "sum", children),
            Node::Scale(alpha, child) => write!(f, "scale({alpha:?}, {child})"),
            Node::Shift(child, c) => write!(f, "shift({child}, {c:?})"),
        }
    }
}

/// Parses the text form into a tree. Errors carry 1-based line and column.
pub fn parse_node(src: &str) -> Result<Node> {
    let mut p = Parser { src, pos: 0 };
    let node = p.node()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(node)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a node name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(rest.len());
        let v: f64 = rest[..len]
            .parse()
            .map_err(|_| self.error("expected a number"))?;
        if !v.is_finite() {
            return Err(self.error("numbers must be finite"));
        }
        self.pos += len;
        Ok(v)
    }

    fn vector(&mut self) -> Result<Vec<f64>> {
        self.expect('[')?;
        let mut v = vec![self.number()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            v.push(self.number()?);
        }
        self.expect(']')?;
        Ok(v)
    }

    fn children(&mut self) -> Result<Vec<Node>> {
        let mut v = vec![self.node()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            v.push(self.node()?);
        }
        Ok(v)
    }

    fn node(&mut self) -> Result<Node> {
        let start = self.pos;
        let name = self.ident()?.to_string();
        self.expect('(')?;
        let node = match name.as_str() {
            "linear" => Node::Linear(self.vector()?),
            "absdev" => {
                let coeffs = self.vector()?;
                self.expect(',')?;
                Node::AbsDev {
                    coeffs,
                    offset: self.number()?,
                }
            }
            "dist" => {
                let alpha = self.number()?;
                self.expect(',')?;
                Node::ScaledDist {
                    alpha,
                    center: self.vector()?,
                }
            }
            "smooth" => {
                let alpha = self.number()?;
                self.expect(',')?;
                let eps = self.number()?;
                self.expect(',')?;
                Node::SmoothDist {
                    alpha,
                    eps,
                    center: self.vector()?,
                }
            }
            "max" => Node::MaxOf(self.children()?),
            "sum" => Node::Sum(self.children()?),
            "scale" => {
                let alpha = self.number()?;
                self.expect(',')?;
                Node::Scale(alpha, Box::new(self.node()?))
            }
            "shift" => {
                let child = self.node()?;
                self.expect(',')?;
                Node::Shift(Box::new(child), self.number()?)
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                return Err(self.error(&format!("unknown node '{name}'")));
            }
        };
        self.expect(')')?;
        Ok(node)
    }
}

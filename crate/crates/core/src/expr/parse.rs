//! Recursive-descent parser for the ASCII expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' exponent)?
//! base   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Exponents must reduce to rational constants.

use thiserror::Error;

use super::{parse_rational, Expr, Func, Head, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("malformed jet index in `{name}` at byte {offset}")]
    MalformedJetIndex { name: String, offset: usize },
}

/// Why an identifier failed to resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unresolved {
    Unknown,
    MalformedJetIndex,
}

/// Maps identifiers to symbols; implemented by jet spaces.
pub trait Resolver {
    fn resolve(&self, ident: &str) -> Result<Symbol, Unresolved>;
}

pub fn parse(text: &str, ctx: &dyn Resolver) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a dyn Resolver,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(-self.term()?);
            } else {
                return Ok(Expr::add(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exp = if self.eat(b'-') { -self.base()? } else { self.base()? };
            let Some(r) = exp.as_num() else {
                return Err(ParseError::Syntax { offset: at, message: "exponent must be a rational constant".into() });
            };
            return Ok(Expr::pow(&base, r.clone()));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident_or_call(),
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        parse_rational(text)
            .map(Expr::num)
            .ok_or(ParseError::Syntax { offset: start, message: format!("bad number `{text}`") })
    }

    fn ident_or_call(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("").to_string();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut args = vec![self.expr()?];
            while self.eat(b',') {
                args.push(self.expr()?);
            }
            if !self.eat(b')') {
                return Err(self.syntax("expected `)` after arguments"));
            }
            if let Some(f) = Func::from_name(&name) {
                if args.len() != 1 {
                    return Err(ParseError::Syntax { offset: start, message: format!("`{name}` takes one argument") });
                }
                return Ok(Expr::func(f, args.remove(0)));
            }
            return Ok(Expr::apply(parse_head(&name), args));
        }
        match self.ctx.resolve(&name) {
            Ok(s) => Ok(Expr::sym(&s)),
            Err(Unresolved::Unknown) => Err(ParseError::UnknownIdentifier { name, offset: start }),
            Err(Unresolved::MalformedJetIndex) => Err(ParseError::MalformedJetIndex { name, offset: start }),
        }
    }
}

/// `b__d1d2` is the formal derivative of `b` in its first and second slot.
fn parse_head(name: &str) -> Head {
    if let Some((base, suffix)) = name.rsplit_once("__") {
        let parts: Vec<&str> = suffix.split('d').skip(1).collect();
        if suffix.starts_with('d') && !parts.is_empty() {
            let derivs: Option<Vec<usize>> =
                parts.iter().map(|p| p.parse::<usize>().ok().filter(|&k| k > 0).map(|k| k - 1)).collect();
            if let Some(derivs) = derivs {
                return Head { name: base.to_string(), derivs };
            }
        }
    }
    Head::new(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetSpace;

    fn ctx() -> JetSpace {
        JetSpace::new(&["x", "y"], "u")
    }

    #[test]
    fn product_of_exp_and_jet() {
        let j = ctx();
        let e = parse("exp(u)*u_x", &j).unwrap();
        assert_eq!(e, Expr::exp(j.dep_expr()) * j.jet_expr(&[0]));
    }

    #[test]
    fn zero_literal() {
        assert!(parse("0", &ctx()).unwrap().is_zero());
    }

    #[test]
    fn jet_indices_are_order_free() {
        let j = ctx();
        assert_eq!(parse("u_yx", &j).unwrap(), parse("u_xy", &j).unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let j = ctx();
        assert_eq!(parse("x + * y", &j), Err(ParseError::Syntax { offset: 4, message: "unexpected character".into() }));
        assert!(matches!(parse("x + q", &j), Err(ParseError::UnknownIdentifier { offset: 4, .. })));
        assert!(matches!(parse("u_xq", &j), Err(ParseError::MalformedJetIndex { .. })));
        assert!(matches!(parse("u_xyx", &j), Err(ParseError::MalformedJetIndex { .. })));
        assert!(parse("(x", &j).is_err());
        assert!(parse("x^y", &j).is_err());
    }

    #[test]
    fn derivative_heads() {
        let j = ctx();
        let e = parse("b__d2(x, u)", &j).unwrap();
        match e.node() {
            crate::expr::Node::Apply(h, args) => {
                assert_eq!(h.name, "b");
                assert_eq!(h.derivs, vec![1]);
                assert_eq!(args.len(), 2);
            }
            _ => panic!("expected application"),
        }
        assert_eq!(e.to_string(), "b__d2(x, u)");
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let j = ctx();
        let e = parse("-x^2", &j).unwrap();
        let x = j.coord_expr(0);
        assert_eq!(e, -(x.powi(2)));
    }
}

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::{Expr, Head, Node, Rat};

// Binding strength of the rendered form; a child is parenthesised when it
// binds weaker than its context requires.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const POWER: u8 = 3;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.derivs.is_empty() {
            f.write_str("__")?;
            for d in &self.derivs {
                write!(f, "d{}", d + 1)?;
            }
        }
        Ok(())
    }
}

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(_) => SUM,
        Node::Mul(_) => PRODUCT,
        Node::Num(r) if r.is_negative() || !r.is_integer() => PRODUCT,
        Node::Pow(_, r) if r.is_negative() => PRODUCT,
        Node::Pow(..) => POWER,
        _ => 4,
    }
}

fn write_rat(out: &mut String, r: &Rat) {
    if r.is_integer() {
        let _ = write!(out, "{}", r.numer());
    } else {
        let _ = write!(out, "{}/{}", r.numer(), r.denom());
    }
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    let parens = precedence(e) < min_prec;
    if parens {
        out.push('(');
    }
    match e.node() {
        Node::Num(r) => write_rat(out, r),
        Node::Sym(s) => out.push_str(s.name()),
        Node::Add(ts) => {
            for (i, t) in ts.iter().enumerate() {
                let (neg, mag) = split_sign(t);
                if i == 0 {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                write_product_body(out, &mag);
            }
        }
        Node::Mul(_) => {
            let (neg, mag) = split_sign(e);
            if neg {
                out.push('-');
            }
            write_product_body(out, &mag);
        }
        Node::Pow(b, r) if r.is_negative() => {
            out.push_str("1/");
            write_expr(out, &Expr::pow(b, -r.clone()), POWER);
        }
        Node::Pow(b, r) => {
            write_expr(out, b, POWER + 1);
            out.push('^');
            if r.is_integer() {
                write_rat(out, r);
            } else {
                out.push('(');
                write_rat(out, r);
                out.push(')');
            }
        }
        Node::Func(g, a) => {
            out.push_str(g.name());
            out.push('(');
            write_expr(out, a, 0);
            out.push(')');
        }
        Node::Apply(h, args) => {
            let _ = write!(out, "{h}");
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

/// Splits a term into sign and magnitude so sums render as `a - b`.
fn split_sign(t: &Expr) -> (bool, Expr) {
    match t.node() {
        Node::Num(r) if r.is_negative() => (true, Expr::num(-r.clone())),
        Node::Mul(fs) => match fs[0].node() {
            Node::Num(r) if r.is_negative() => {
                let mut rest = fs.clone();
                rest[0] = Expr::num(-r.clone());
                (true, Expr::mul(rest))
            }
            _ => (false, t.clone()),
        },
        _ => (false, t.clone()),
    }
}

/// Writes a non-negative term as `c*a*b/(d*e)`.
fn write_product_body(out: &mut String, t: &Expr) {
    let factors = match t.node() {
        Node::Mul(fs) => fs.clone(),
        _ => {
            match t.node() {
                Node::Pow(_, r) if r.is_negative() => write_expr(out, t, PRODUCT),
                Node::Num(_) => write_rat(out, t.as_num().cloned().as_ref().unwrap_or(&Rat::one())),
                _ => write_expr(out, t, PRODUCT),
            }
            return;
        }
    };
    let mut numer: Vec<Expr> = Vec::new();
    let mut denom: Vec<Expr> = Vec::new();
    for f in factors {
        match f.node() {
            Node::Pow(b, r) if r.is_negative() => denom.push(Expr::pow(b, -r.clone())),
            _ => numer.push(f),
        }
    }
    if numer.is_empty() {
        out.push('1');
    }
    for (i, f) in numer.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        if let Some(r) = f.as_num() {
            write_rat(out, r);
        } else {
            write_expr(out, f, PRODUCT + 1);
        }
    }
    if !denom.is_empty() {
        out.push('/');
        if denom.len() == 1 {
            write_expr(out, &denom[0], POWER);
        } else {
            out.push('(');
            for (i, f) in denom.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_expr(out, f, PRODUCT + 1);
            }
            out.push(')');
        }
    }
}

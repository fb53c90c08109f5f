//! Expanded trigonometric normal form.
//!
//! Produces a sum of Laurent monomials in symbols, `sin`/`cos` of
//! coefficient-free monomials, `exp(m)^c`, `log` and arbitrary-function
//! applications.  `tan` is rewritten through `sin/cos`, angle sums and small
//! integer multiples are expanded, and `sin(a)^k` with `k >= 2` is reduced via
//! `sin^2 = 1 - cos^2`.  Non-monomial denominators stay as opaque powers.
//!
//! On polynomial-trigonometric input without such denominators the result is
//! unique, which makes structural comparison meaningful.

use num_traits::{One, Signed, ToPrimitive};

use super::{rat_int, Expr, Func, Node, Rat};

/// Default cap on the number of terms produced by a single product.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Normal form, or the basic canonical form if expansion exceeds the budget.
pub fn normal(e: &Expr) -> Expr {
    try_normal(e, DEFAULT_BUDGET).unwrap_or_else(|| e.simplify_basic())
}

pub fn try_normal(e: &Expr, budget: usize) -> Option<Expr> {
    Normalizer { budget }.nf(e)
}

/// A single additive term (no top-level sum).
pub fn is_monomial(e: &Expr) -> bool {
    !matches!(e.node(), Node::Add(_))
}

struct Normalizer {
    budget: usize,
}

impl Normalizer {
    fn nf(&self, e: &Expr) -> Option<Expr> {
        Some(match e.node() {
            Node::Num(_) | Node::Sym(_) => e.clone(),
            Node::Add(ts) => {
                let parts = ts.iter().map(|t| self.nf(t)).collect::<Option<Vec<_>>>()?;
                Expr::add(parts)
            }
            Node::Mul(fs) => {
                let mut acc = Expr::one();
                for f in fs {
                    acc = self.mul(&acc, &self.nf(f)?)?;
                }
                acc
            }
            Node::Pow(b, r) => self.pow(&self.nf(b)?, r)?,
            Node::Func(Func::Exp, a) => {
                let na = self.nf(a)?;
                Expr::mul(na.terms().into_iter().map(|t| {
                    let (c, m) = t.split_coeff();
                    if m.is_one() {
                        Expr::exp(Expr::num(c))
                    } else {
                        Expr::pow(&Expr::exp(m), c)
                    }
                }))
            }
            Node::Func(Func::Tan, a) => {
                let na = self.nf(a)?;
                let s = self.trig(Func::Sin, &na)?;
                let c = self.trig(Func::Cos, &na)?;
                let ci = self.pow(&c, &rat_int(-1))?;
                self.mul(&s, &ci)?
            }
            Node::Func(f @ (Func::Sin | Func::Cos), a) => self.trig(*f, &self.nf(a)?)?,
            Node::Func(f, a) => Expr::func(*f, self.nf(a)?),
            Node::Apply(h, args) => {
                Expr::apply(h.clone(), args.iter().map(|x| self.nf(x)).collect::<Option<Vec<_>>>()?)
            }
        })
    }

    fn pow(&self, b: &Expr, r: &Rat) -> Option<Expr> {
        if r.is_integer() && r.is_positive() {
            let k = r.to_integer().to_usize()?;
            if is_monomial(b) {
                return Some(self.reduce(&Expr::pow(b, r.clone())));
            }
            if k > 16 {
                return Some(Expr::pow(b, r.clone()));
            }
            let mut acc = Expr::one();
            for _ in 0..k {
                acc = self.mul(&acc, b)?;
            }
            return Some(acc);
        }
        if is_monomial(b) {
            return Some(self.reduce(&Expr::pow(b, r.clone())));
        }
        // Opaque denominator: pull the leading coefficient out so that
        // `(-a - b)^-1` and `-(a + b)^-1` agree.
        let lead = b.terms()[0].split_coeff().0;
        let q = b.distribute(&Expr::num(lead.recip()));
        Some(Expr::pow(&Expr::num(lead), r.clone()) * Expr::pow(&q, r.clone()))
    }

    fn mul(&self, a: &Expr, b: &Expr) -> Option<Expr> {
        let ta = a.terms();
        let tb = b.terms();
        if ta.len().saturating_mul(tb.len()) > self.budget {
            return None;
        }
        let mut out = Vec::with_capacity(ta.len() * tb.len());
        for x in &ta {
            for y in &tb {
                out.extend(self.reduce(&(x * y)).terms());
            }
        }
        Some(Expr::add(out))
    }

    /// Rewrites `sin(a)^k`, `k >= 2`, in every term.
    fn reduce(&self, e: &Expr) -> Expr {
        let mut out = Vec::new();
        for t in e.terms() {
            let factors = match t.node() {
                Node::Mul(fs) => fs.clone(),
                _ => vec![t.clone()],
            };
            let hit = factors.iter().position(|f| match f.node() {
                Node::Pow(b, k) => {
                    matches!(b.node(), Node::Func(Func::Sin, _)) && k.is_integer() && k >= &rat_int(2)
                }
                _ => false,
            });
            let Some(i) = hit else {
                out.push(t);
                continue;
            };
            let Node::Pow(s, k) = factors[i].node() else { unreachable!() };
            let Node::Func(_, a) = s.node() else { unreachable!() };
            let mut rest = factors.clone();
            rest[i] = Expr::pow(s, k - rat_int(2));
            let one_minus_cos2 = Expr::one() - Expr::cos(a.clone()).powi(2);
            let base = Expr::mul(rest);
            for u in one_minus_cos2.terms() {
                out.extend(self.reduce(&(&base * &u)).terms());
            }
        }
        Expr::add(out)
    }

    /// `sin`/`cos` of a normalised argument, expanded over sums and small
    /// integer multiples.
    fn trig(&self, f: Func, a: &Expr) -> Option<Expr> {
        let terms = a.terms();
        if terms.len() > 1 {
            let first = &terms[0];
            let rest = Expr::add(terms[1..].to_vec());
            let (s1, c1) = (self.trig(Func::Sin, first)?, self.trig(Func::Cos, first)?);
            let (s2, c2) = (self.trig(Func::Sin, &rest)?, self.trig(Func::Cos, &rest)?);
            return Some(match f {
                Func::Sin => self.mul(&s1, &c2)? + self.mul(&c1, &s2)?,
                _ => self.mul(&c1, &c2)? - self.mul(&s1, &s2)?,
            });
        }
        let (c, m) = a.split_coeff();
        if m.is_one() {
            return Some(Expr::func(f, a.clone()));
        }
        if c.is_negative() {
            let pos = self.trig(f, &Expr::scaled(-c, m))?;
            return Some(if f == Func::Sin { -pos } else { pos });
        }
        if c.is_integer() && c > Rat::one() && c <= rat_int(6) {
            let prev = Expr::scaled(c - Rat::one(), m.clone());
            let (sp, cp) = (self.trig(Func::Sin, &prev)?, self.trig(Func::Cos, &prev)?);
            let (s1, c1) = (Expr::sin(m.clone()), Expr::cos(m));
            return Some(match f {
                Func::Sin => self.mul(&sp, &c1)? + self.mul(&cp, &s1)?,
                _ => self.mul(&cp, &c1)? - self.mul(&sp, &s1)?,
            });
        }
        Some(Expr::func(f, a.clone()))
    }
}

/// Presentation rewrite: `sin(a)^s * cos(a)^-c` becomes `tan(a)^min(s,c)`
/// times the leftover powers.
pub fn retan(e: &Expr) -> Expr {
    match e.node() {
        Node::Mul(fs) => {
            let fs: Vec<Expr> = fs.iter().map(retan).collect();
            let mut out = fs.clone();
            for (i, f) in fs.iter().enumerate() {
                let (sb, sk) = f.pow_parts();
                let Node::Func(Func::Sin, a) = sb.node() else { continue };
                if !sk.is_positive() || !sk.is_integer() {
                    continue;
                }
                let cos = Expr::cos(a.clone());
                let Some(j) = fs.iter().position(|g| g.pow_parts().0 == cos) else { continue };
                let ck = fs[j].pow_parts().1;
                if !ck.is_negative() || !ck.is_integer() {
                    continue;
                }
                let t = if sk < -ck.clone() { sk.clone() } else { -ck.clone() };
                out[i] = Expr::pow(&sb, sk - &t);
                out[j] = Expr::pow(&cos, ck + &t);
                out.push(Expr::pow(&Expr::tan(a.clone()), t));
            }
            Expr::mul(out)
        }
        Node::Num(_) | Node::Sym(_) => e.clone(),
        _ => e.map_children(retan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{is_zero, parse, SamplerConfig};
    use crate::jet::JetSpace;

    fn p(s: &str) -> Expr {
        parse(s, &JetSpace::new(&["x", "y"], "u")).unwrap()
    }

    #[test]
    fn pythagoras_collapses() {
        assert!(normal(&p("sin(x)^2 + cos(x)^2 - 1")).is_zero());
        assert_eq!(normal(&p("sin(x)^3")), normal(&p("sin(x) - sin(x)*cos(x)^2")));
    }

    #[test]
    fn tangent_and_secant_agree() {
        assert_eq!(normal(&p("tan(y)")), normal(&p("sin(y)/cos(y)")));
        assert_eq!(normal(&p("1 + tan(y)^2")), normal(&p("1/cos(y)^2")));
    }

    #[test]
    fn angle_expansions() {
        assert_eq!(normal(&p("sin(2*u)")), normal(&p("2*sin(u)*cos(u)")));
        assert_eq!(normal(&p("cos(x + y)")), normal(&p("cos(x)*cos(y) - sin(x)*sin(y)")));
        assert_eq!(normal(&p("sin(-x)")), normal(&p("-sin(x)")));
    }

    #[test]
    fn exponentials_merge() {
        assert_eq!(normal(&p("exp(2*u)*exp(-u)")), p("exp(u)"));
        assert_eq!(normal(&p("exp(u + x)")), p("exp(x)*exp(u)"));
    }

    #[test]
    fn value_is_preserved() {
        let cfg = SamplerConfig::default();
        for s in ["(x + sin(y))^3*tan(u)", "exp(x)*(cos(2*x) - u_x)/cos(y)", "(1 + x^2)^-1*(x - 1)^2"] {
            let e = p(s);
            assert_eq!(is_zero(&(normal(&e) - e.clone()), &cfg), Ok(true), "{s}");
        }
    }

    #[test]
    fn retan_recombines() {
        assert_eq!(retan(&normal(&p("sin(x)*tan(y)"))).to_string(), "sin(x)*tan(y)");
        assert_eq!(retan(&normal(&p("sin(x)/cos(y)"))).to_string(), "sin(x)/cos(y)");
    }

    #[test]
    fn budget_exhaustion_falls_back() {
        let e = p("(x + y + u + u_x + u_y)^12");
        assert!(try_normal(&e, 100).is_none());
    }
}

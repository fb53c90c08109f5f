use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::{Expr, Func, Head, Node, Rat, Symbol};

/// Numeric values for symbols.
pub type Assignment = HashMap<Symbol, f64>;

/// Denominators, cosines under `tan` and similar quantities at or below this
/// magnitude count as singular.
pub const SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("singular evaluation at `{subexpr}`")]
    Singular { subexpr: String },
}

fn singular(e: &Expr) -> EvalError {
    EvalError::Singular { subexpr: e.to_string() }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Expr {
    /// IEEE double evaluation.  Arbitrary-function heads evaluate through
    /// [`eval_opaque`].
    pub fn eval(&self, a: &Assignment) -> Result<f64, EvalError> {
        self.eval_with_scale(a).map(|(v, _)| v)
    }

    /// Value together with the magnitude obtained by replacing every sum by
    /// the sum of absolute values of its terms.  The ratio of the two
    /// measures how much cancellation happened.
    pub fn eval_with_scale(&self, a: &Assignment) -> Result<(f64, f64), EvalError> {
        let (v, m) = self.eval_rec(a)?;
        if !v.is_finite() || !m.is_finite() {
            return Err(singular(self));
        }
        Ok((v, m))
    }

    fn eval_rec(&self, a: &Assignment) -> Result<(f64, f64), EvalError> {
        Ok(match self.node() {
            Node::Num(r) => {
                let v = rat_to_f64(r);
                (v, v.abs())
            }
            Node::Sym(s) => {
                let v = *a.get(s).ok_or_else(|| EvalError::Unbound(s.name().to_string()))?;
                (v, v.abs())
            }
            Node::Add(ts) => {
                let mut v = 0.0;
                let mut m = 0.0;
                for t in ts {
                    let (tv, tm) = t.eval_rec(a)?;
                    v += tv;
                    m += tm;
                }
                (v, m)
            }
            Node::Mul(fs) => {
                let mut v = 1.0;
                let mut m = 1.0;
                for f in fs {
                    let (fv, fm) = f.eval_rec(a)?;
                    v *= fv;
                    m *= fm;
                }
                (v, m)
            }
            Node::Pow(b, r) => {
                let (bv, bm) = b.eval_rec(a)?;
                if r.is_negative() && bv.abs() <= SINGULAR_EPS {
                    return Err(singular(self));
                }
                let v = if r.is_integer() {
                    let k = r.to_integer().to_i32().ok_or_else(|| singular(self))?;
                    bv.powi(k)
                } else {
                    if bv < 0.0 {
                        return Err(singular(self));
                    }
                    bv.powf(rat_to_f64(r))
                };
                let m = if r.is_positive() && r.is_integer() { bm.powi(r.to_integer().to_i32().unwrap_or(1)) } else { v.abs() };
                (v, m)
            }
            Node::Func(f, arg) => {
                let (x, _) = arg.eval_rec(a)?;
                let v = match f {
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(singular(self));
                        }
                        x.ln()
                    }
                    Func::Tan => {
                        if x.cos().abs() <= SINGULAR_EPS {
                            return Err(singular(self));
                        }
                        x.tan()
                    }
                };
                (v, v.abs())
            }
            Node::Apply(h, args) => {
                let xs = args.iter().map(|x| x.eval_rec(a).map(|p| p.0)).collect::<Result<Vec<_>, _>>()?;
                let v = eval_opaque(h, &xs);
                (v, v.abs())
            }
        })
    }
}

fn fnv(bytes: &[u8], mut h: u64) -> u64 {
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Deterministic stand-in for an arbitrary smooth function: a cubic
/// polynomial in the arguments whose coefficients are hashed from the head
/// name.  Formal derivative heads evaluate to the exact derivatives of the
/// same polynomial, so identities involving `b` and `b__d1` stay consistent.
pub fn eval_opaque(head: &Head, args: &[f64]) -> f64 {
    const DEGREE: usize = 3;
    let k = args.len();
    let seed = fnv(head.name.as_bytes(), 0xcbf2_9ce4_8422_2325);
    let mut diff_count = vec![0usize; k];
    for &d in &head.derivs {
        if d < k {
            diff_count[d] += 1;
        }
    }
    let mut total = 0.0;
    let mut exps = vec![0usize; k];
    loop {
        if exps.iter().sum::<usize>() <= DEGREE {
            let mut h = seed;
            for e in &exps {
                h = fnv(&(*e as u64).to_le_bytes(), h);
            }
            let c = ((h >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
            let mut term = c;
            for i in 0..k {
                let (e, d) = (exps[i], diff_count[i]);
                if d > e {
                    term = 0.0;
                    break;
                }
                let falling: usize = ((e - d + 1)..=e).product();
                term *= falling as f64 * args[i].powi((e - d) as i32);
            }
            total += term;
        }
        let mut i = 0;
        loop {
            if i == k {
                return total;
            }
            exps[i] += 1;
            if exps[i] <= DEGREE {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::jet::JetSpace;

    fn at(j: &JetSpace, pairs: &[(&str, f64)]) -> Assignment {
        pairs
            .iter()
            .map(|(n, v)| (parse(n, j).unwrap().as_sym().unwrap().clone(), *v))
            .collect()
    }

    #[test]
    fn exp_times_jet() {
        let j = JetSpace::new(&["x", "y"], "u");
        let e = parse("exp(u)*u_x", &j).unwrap();
        assert_eq!(e.eval(&at(&j, &[("u", 0.0), ("u_x", 2.0)])), Ok(2.0));
    }

    #[test]
    fn secant_pole_is_singular() {
        let j = JetSpace::new(&["x", "y"], "u");
        let e = parse("1/cos(y)", &j).unwrap();
        let r = e.eval(&at(&j, &[("y", std::f64::consts::FRAC_PI_2)]));
        assert!(matches!(r, Err(EvalError::Singular { .. })), "{r:?}");
    }

    #[test]
    fn unbound_symbol_reported() {
        let j = JetSpace::new(&["x", "y"], "u");
        let e = parse("x + y", &j).unwrap();
        assert_eq!(e.eval(&at(&j, &[("x", 1.0)])), Err(EvalError::Unbound("y".into())));
    }

    #[test]
    fn scale_sees_cancellation() {
        let j = JetSpace::new(&["x", "y"], "u");
        let e = parse("x - y", &j).unwrap();
        let (v, m) = e.eval_with_scale(&at(&j, &[("x", 1.0), ("y", 1.0)])).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(m, 2.0);
    }

    #[test]
    fn opaque_derivative_matches_difference_quotient() {
        let b = Head::new("b");
        let db = Head { name: "b".into(), derivs: vec![1] };
        let (x, y, h) = (0.3, -0.7, 1e-6);
        let fd = (eval_opaque(&b, &[x, y + h]) - eval_opaque(&b, &[x, y - h])) / (2.0 * h);
        assert!((fd - eval_opaque(&db, &[x, y])).abs() < 1e-8);
        assert_ne!(eval_opaque(&b, &[x, y]), eval_opaque(&Head::new("a"), &[x, y]));
    }
}

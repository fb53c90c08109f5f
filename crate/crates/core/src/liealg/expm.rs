//! Closed-form `exp(t·M)` for small rational matrices via Putzer's algorithm.
//!
//! Eigenvalues must be rational or complex pairs `a ± ib` with rational `a`,
//! `b`; entries of the result are then sums of `t^m e^{at} cos(bt)` and
//! `t^m e^{at} sin(bt)` with rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LieError;
use crate::expr::{rat, rat_int, Expr, Rat};

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GRat {
    pub re: Rat,
    pub im: Rat,
}

impl GRat {
    pub fn real(re: Rat) -> GRat {
        GRat { re, im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> GRat {
        let d = &self.re * &self.re + &self.im * &self.im;
        GRat { re: &self.re / &d, im: -&self.im / &d }
    }

    fn scale(&self, r: &Rat) -> GRat {
        GRat { re: &self.re * r, im: &self.im * r }
    }
}

impl Add for &GRat {
    type Output = GRat;
    fn add(self, o: &GRat) -> GRat {
        GRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GRat {
    type Output = GRat;
    fn sub(self, o: &GRat) -> GRat {
        GRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GRat {
    type Output = GRat;
    fn mul(self, o: &GRat) -> GRat {
        GRat { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat { re: -&self.re, im: -&self.im }
    }
}

/// Coefficients `c_0..c_n` of `det(λI − M)`, computed by Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut c = vec![Rat::zero(); n + 1];
    c[n] = Rat::one();
    let mut mk = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = matmul(m, &mk);
        let tr: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / rat_int(k as i64);
    }
    c
}

fn matmul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn poly_eval(c: &[Rat], x: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, ci| acc * x + ci)
}

/// Divides by `(λ − r)`; `c` must have `r` as a root.
fn deflate(c: &[Rat], r: &Rat) -> Vec<Rat> {
    let n = c.len() - 1;
    let mut q = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for i in (1..=n).rev() {
        carry = &c[i] + carry * r;
        q[i - 1] = carry.clone();
    }
    q
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let s = |n: &BigInt| -> Option<BigInt> {
        let q = n.sqrt();
        (&q * &q == *n).then_some(q)
    };
    Some(Rat::new(s(r.numer())?, s(r.denom())?))
}

/// All eigenvalues with multiplicity, or an error naming the unsupported
/// factor of the characteristic polynomial.
pub fn eigenvalues(m: &[Vec<Rat>]) -> Result<Vec<GRat>, LieError> {
    let mut c = char_poly(m);
    let mut out = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        out.push(GRat::default());
    }
    'search: while c.len() > 1 {
        let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
        for p in divisors(&ints[0]) {
            for q in divisors(&lead) {
                for cand in [Rat::new(p.clone(), q.clone()), -Rat::new(p.clone(), q.clone())] {
                    if poly_eval(&c, &cand).is_zero() {
                        c = deflate(&c, &cand);
                        out.push(GRat::real(cand));
                        continue 'search;
                    }
                }
            }
        }
        break;
    }
    match c.len() - 1 {
        0 => {}
        2 => {
            let b = &c[1] / &c[2];
            let cc = &c[0] / &c[2];
            let disc = &b * &b - rat_int(4) * &cc;
            let root = exact_sqrt(&-disc.clone()).filter(|_| disc.is_negative());
            let Some(s) = root else {
                return Err(LieError::EigenvalueUnsupported(format!("irrational roots of {}", render_poly(&c))));
            };
            let re = -b / rat_int(2);
            let im = s / rat_int(2);
            out.push(GRat { re: re.clone(), im: im.clone() });
            out.push(GRat { re, im: -im });
        }
        _ => return Err(LieError::EigenvalueUnsupported(format!("factor {}", render_poly(&c)))),
    }
    Ok(out)
}

fn render_poly(c: &[Rat]) -> String {
    let t = Expr::sym(&crate::expr::Symbol::base("t"));
    Expr::add(c.iter().enumerate().map(|(i, ci)| Expr::num(ci.clone()) * t.powi(i as i64))).to_string()
}

/// `Σ c · t^m · e^{λt}` keyed by `(λ, m)`.
type ExpPoly = BTreeMap<(GRat, usize), GRat>;

fn accumulate(p: &mut ExpPoly, key: (GRat, usize), c: GRat) {
    let slot = p.entry(key.clone()).or_default();
    *slot = &*slot + &c;
    if slot.is_zero() {
        p.remove(&key);
    }
}

/// Solves `r' = λ r + prev`, `r(0) = 0`.
fn putzer_step(prev: &ExpPoly, lambda: &GRat) -> ExpPoly {
    let mut out = ExpPoly::new();
    for ((mu, m), c) in prev {
        let delta = mu - lambda;
        if delta.is_zero() {
            accumulate(&mut out, (lambda.clone(), m + 1), c.scale(&rat(1, (*m + 1) as i64)));
            continue;
        }
        let dinv = delta.recip();
        let mut dpow = dinv.clone();
        let mut fall = Rat::one();
        for j in 0..=*m {
            let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            accumulate(&mut out, (mu.clone(), m - j), (c * &dpow).scale(&(&sign * &fall)));
            fall *= rat_int((*m - j) as i64);
            dpow = &dpow * &dinv;
        }
        let fact: Rat = (1..=*m).map(|k| rat_int(k as i64)).product();
        let sign = if m % 2 == 0 { -Rat::one() } else { Rat::one() };
        let mut dm1 = dinv.clone();
        for _ in 0..*m {
            dm1 = &dm1 * &dinv;
        }
        accumulate(&mut out, (lambda.clone(), 0), (c * &dm1).scale(&(sign * fact)));
    }
    out
}

/// `exp(t·M)` with `t` an arbitrary expression (typically `±z_k`).
pub fn exp_matrix(m: &[Vec<Rat>], t: &Expr) -> Result<Vec<Vec<Expr>>, LieError> {
    let n = m.len();
    let lambdas = eigenvalues(m)?;
    let gm: Vec<Vec<GRat>> = m.iter().map(|r| r.iter().map(|x| GRat::real(x.clone())).collect()).collect();
    let ident = |i: usize, j: usize| if i == j { GRat::real(Rat::one()) } else { GRat::default() };
    let mut p: Vec<Vec<GRat>> = (0..n).map(|i| (0..n).map(|j| ident(i, j)).collect()).collect();
    let mut r = ExpPoly::new();
    r.insert((lambdas[0].clone(), 0), GRat::real(Rat::one()));
    let mut entries: Vec<Vec<ExpPoly>> = vec![vec![ExpPoly::new(); n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if p[i][j].is_zero() {
                    continue;
                }
                for (key, c) in &r {
                    accumulate(&mut entries[i][j], key.clone(), c * &p[i][j]);
                }
            }
        }
        if k + 1 == n {
            break;
        }
        let shifted: Vec<Vec<GRat>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { &gm[i][j] - &lambdas[k] } else { gm[i][j].clone() }).collect()).collect();
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(GRat::default(), |acc, l| &acc + &(&shifted[i][l] * &p[l][j]))).collect())
            .collect();
        r = putzer_step(&r, &lambdas[k + 1]);
    }
    entries.iter().map(|row| row.iter().map(|e| to_real(e, t)).collect()).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Wave {
    Cos,
    Sin,
}

fn to_real(e: &ExpPoly, t: &Expr) -> Result<Expr, LieError> {
    let mut real: BTreeMap<(Rat, Rat, usize, Wave), Rat> = BTreeMap::new();
    let mut imag: BTreeMap<(Rat, Rat, usize, Wave), Rat> = BTreeMap::new();
    for ((lambda, m), c) in e {
        let b = lambda.im.abs();
        let sgn = if lambda.im.is_negative() { -Rat::one() } else { Rat::one() };
        let a = lambda.re.clone();
        *real.entry((a.clone(), b.clone(), *m, Wave::Cos)).or_default() += &c.re;
        *real.entry((a.clone(), b.clone(), *m, Wave::Sin)).or_default() -= &c.im * &sgn;
        *imag.entry((a.clone(), b.clone(), *m, Wave::Cos)).or_default() += &c.im;
        *imag.entry((a, b, *m, Wave::Sin)).or_default() += &c.re * &sgn;
    }
    if imag.iter().any(|((_, b, _, w), v)| !v.is_zero() && !(b.is_zero() && *w == Wave::Sin)) {
        return Err(LieError::EigenvalueUnsupported("complex entries failed to cancel".into()));
    }
    let mut terms = Vec::new();
    for ((a, b, m, w), c) in real {
        if c.is_zero() || (b.is_zero() && w == Wave::Sin) {
            continue;
        }
        let bt = Expr::num(b.clone()) * t;
        let wave = match w {
            Wave::Cos => Expr::cos(bt),
            Wave::Sin => Expr::sin(bt),
        };
        let power = t.powi(m.to_i64().unwrap_or(0));
        terms.push(Expr::mul([Expr::num(c), power, Expr::exp(Expr::num(a) * t), wave]));
    }
    Ok(Expr::add(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SamplerConfig};
    use crate::jet::JetSpace;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    fn t() -> (JetSpace, Expr) {
        let j = JetSpace::new(&["t"], "u");
        let t = j.coord_expr(0);
        (j, t)
    }

    /// Truncated Taylor series of exp(tM) at a numeric t.
    fn taylor(mat: &[Vec<Rat>], tv: f64) -> Vec<Vec<f64>> {
        let n = mat.len();
        let a: Vec<Vec<f64>> = mat.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap() * tv).collect()).collect();
        let mut term: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let mut sum = term.clone();
        for k in 1..60 {
            term = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|l| term[i][l] * a[l][j]).sum::<f64>() / k as f64).collect())
                .collect();
            for i in 0..n {
                for j in 0..n {
                    sum[i][j] += term[i][j];
                }
            }
        }
        sum
    }

    fn check_against_series(mat: Vec<Vec<Rat>>) {
        let (j, t) = t();
        let e = exp_matrix(&mat, &t).unwrap();
        for tv in [-0.7, 0.3, 1.1] {
            let want = taylor(&mat, tv);
            let a = [(j.coord(0).clone(), tv)].into_iter().collect();
            for (row, wrow) in e.iter().zip(&want) {
                for (x, w) in row.iter().zip(wrow) {
                    let v = x.eval(&a).unwrap();
                    assert!((v - w).abs() < 1e-9 * (1.0 + w.abs()), "{x} at {tv}: {v} vs {w}");
                }
            }
        }
    }

    #[test]
    fn char_poly_of_rotation() {
        assert_eq!(char_poly(&m(&[&[0, -1], &[1, 0]])), vec![rat_int(1), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn eigenvalue_kinds() {
        let ev = eigenvalues(&m(&[&[1, 0], &[0, -2]])).unwrap();
        assert!(ev.contains(&GRat::real(rat_int(1))) && ev.contains(&GRat::real(rat_int(-2))));
        let ev = eigenvalues(&m(&[&[0, -1], &[1, 0]])).unwrap();
        assert!(ev.iter().all(|l| l.re.is_zero() && l.im.abs() == rat_int(1)));
        assert!(matches!(eigenvalues(&m(&[&[0, 2], &[1, 0]])), Err(LieError::EigenvalueUnsupported(_))));
    }

    #[test]
    fn nilpotent_and_diagonal() {
        let (j, t) = t();
        let e = exp_matrix(&m(&[&[0, 1], &[0, 0]]), &t).unwrap();
        assert_eq!(e[0][1], t);
        assert!(e[1][0].is_zero());
        let e = exp_matrix(&m(&[&[2, 0], &[0, 0]]), &t).unwrap();
        assert_eq!(e[0][0], parse("exp(2*t)", &j).unwrap());
    }

    #[test]
    fn matches_power_series() {
        check_against_series(m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]));
        check_against_series(m(&[&[1, 1], &[0, 1]]));
        check_against_series(m(&[&[1, -1], &[1, 1]]));
        check_against_series(m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
        check_against_series(m(&[&[-1, 0, 0], &[0, 0, 2], &[0, 0, 1]]));
        check_against_series(vec![vec![rat(1, 2), rat_int(0)], vec![rat_int(3), rat(-1, 3)]]);
    }

    #[test]
    fn rotation_is_trigonometric() {
        let (j, t) = t();
        let e = exp_matrix(&m(&[&[0, -1], &[1, 0]]), &t).unwrap();
        let cfg = SamplerConfig::default();
        let want = parse("cos(t)", &j).unwrap();
        assert_eq!(crate::expr::is_zero(&(e[0][0].clone() - want), &cfg), Ok(true));
        assert_eq!(e[1][0], parse("sin(t)", &j).unwrap());
    }
}

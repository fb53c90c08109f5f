//! Covariant form of scalar second-order equations: `E(x, u, ∂u) = 0`
//! rewritten as `Ẽ(z, ∂w) = 0` on `w = 0`, with `u` promoted to a coordinate.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::expr::normal::normal;
use crate::expr::{is_zero, parse, rat, Bindings, Expr, Node, ParseError, Rat, SamplerConfig, Symbol, ZeroTestError};
use crate::jet::JetSpace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CovariantError {
    #[error("equation is not invariant under w -> s(z) w: {0}")]
    NotRescaleInvariant(String),
    #[error("no single homogeneity degree fits the sampled points")]
    NotHomogeneous,
    #[error("equation is identically zero")]
    Trivial,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed equation file: {0}")]
    Format(String),
    #[error(transparent)]
    Sampling(#[from] ZeroTestError),
}

/// `lhs = 0` over a jet space with independent coordinates `x` and
/// dependent `u`.
#[derive(Debug, Clone)]
pub struct ScalarPDE {
    pub space: JetSpace,
    pub lhs: Expr,
}

/// `lhs = 0` over a jet space whose coordinates include the former
/// dependent variable and whose dependent variable is `w`.
#[derive(Debug, Clone)]
pub struct CovariantPDE {
    pub space: JetSpace,
    pub lhs: Expr,
    /// Position of the coordinate that plays the role of `u`.
    pub dependent: usize,
    /// Power of `w_n` multiplied in to clear denominators.
    pub kappa: i64,
}

/// Reads the two-line format `coords: x,y; dep: u` / `lhs: <expr>`.
pub fn parse_equation_file(text: &str) -> Result<(JetSpace, Expr), CovariantError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| CovariantError::Format("missing `coords:` line".into()))?;
    let body = lines.next().ok_or_else(|| CovariantError::Format("missing `lhs:` line".into()))?;
    if let Some(extra) = lines.next() {
        return Err(CovariantError::Format(format!("unexpected line `{extra}`")));
    }
    let mut coords = None;
    let mut dep = None;
    for part in header.split(';') {
        let (key, value) = part.split_once(':').ok_or_else(|| CovariantError::Format(format!("bad field `{part}`")))?;
        match key.trim() {
            "coords" => coords = Some(value.split(',').map(|c| c.trim().to_string()).collect::<Vec<_>>()),
            "dep" => dep = Some(value.trim().to_string()),
            other => return Err(CovariantError::Format(format!("unknown field `{other}`"))),
        }
    }
    let coords = coords.ok_or_else(|| CovariantError::Format("missing coords".into()))?;
    let dep = dep.ok_or_else(|| CovariantError::Format("missing dep".into()))?;
    if coords.is_empty() || coords.iter().any(|c| c.is_empty() || c == &dep) {
        return Err(CovariantError::Format("coordinates must be non-empty and distinct from the dependent".into()));
    }
    let lhs = body.strip_prefix("lhs:").ok_or_else(|| CovariantError::Format("second line must start with `lhs:`".into()))?;
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let space = JetSpace::new(&refs, &dep);
    let e = parse(lhs.trim(), &space)?;
    Ok((space, e))
}

impl ScalarPDE {
    pub fn new(space: JetSpace, lhs: Expr) -> ScalarPDE {
        ScalarPDE { space, lhs }
    }
}

impl CovariantPDE {
    /// Wraps an equation over `space`, with the last coordinate dependent.
    pub fn new(space: JetSpace, lhs: Expr) -> CovariantPDE {
        let dependent = space.n() - 1;
        CovariantPDE { space, lhs, dependent, kappa: 0 }
    }
}

/// The `w` space over `x` and `u` and the symbol renaming `u -> z^n`.
fn lift_space(s: &JetSpace) -> (JetSpace, Symbol) {
    let mut names: Vec<&str> = s.coords().iter().map(|c| c.name()).collect();
    names.push(s.dep_name());
    let w = JetSpace::new(&names, if s.dep_name() == "w" { "v" } else { "w" });
    let u = w.coord(names.len() - 1).clone();
    (w, u)
}

/// Implicit-differentiation substitutions for `u_a` and `u_ab`.
fn implicit_bindings(s: &JetSpace, w: &JetSpace, n: usize) -> Bindings {
    let wn = w.jet_expr(&[n]);
    let mut b = Bindings::new();
    b.insert(s.dep(), w.coord_expr(n));
    for a in 0..s.n() {
        b.insert(s.jet(&[a]), -(w.jet_expr(&[a]) / &wn));
        for c in a..s.n() {
            let (wa, wc) = (w.jet_expr(&[a]), w.jet_expr(&[c]));
            let e = -(w.jet_expr(&[a, c]) / &wn) + w.jet_expr(&[n, a]) * &wc / wn.powi(2)
                + w.jet_expr(&[n, c]) * &wa / wn.powi(2)
                - wa * wc * w.jet_expr(&[n, n]) / wn.powi(3);
            b.insert(s.jet(&[a, c]), e);
        }
    }
    b
}

fn top_level_power(term: &Expr, s: &Symbol) -> i64 {
    let factors = match term.node() {
        Node::Mul(fs) => fs.clone(),
        _ => vec![term.clone()],
    };
    factors
        .iter()
        .filter_map(|f| match f.node() {
            Node::Sym(t) if t == s => Some(1),
            Node::Pow(b, r) if b.as_sym() == Some(s) && r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        })
        .sum()
}

/// Substitutes the implicit-derivative formulas and multiplies through by
/// the least power of `w_n` that clears them from every top-level term.
pub fn to_covariant(e: &ScalarPDE) -> CovariantPDE {
    let (w, _) = lift_space(&e.space);
    let n = e.space.n();
    let sub = e.lhs.substitute(&implicit_bindings(&e.space, &w, n)).expand();
    let wn = w.jet(&[n]);
    let kappa = sub.terms().iter().map(|t| -top_level_power(t, &wn)).max().unwrap_or(0).max(0);
    let lhs = normal(&sub.distribute(&Expr::sym(&wn).powi(kappa)));
    CovariantPDE { space: w, lhs, dependent: n, kappa }
}

/// `D = Σ w_i ∂/∂w_i + Σ_{i<=j} w_ij ∂/∂w_ij`.
pub fn euler_operator(space: &JetSpace, f: &Expr) -> Expr {
    let n = space.n();
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push(space.jet_expr(&[i]) * f.diff(&space.jet(&[i])));
        for j in i..n {
            terms.push(space.jet_expr(&[i, j]) * f.diff(&space.jet(&[i, j])));
        }
    }
    Expr::add(terms)
}

/// `R_j = Σ_i (1 + δ_ij) w_i ∂/∂w_ij`.
pub fn rescale_operator(space: &JetSpace, j: usize, f: &Expr) -> Expr {
    let terms = (0..space.n()).map(|i| {
        let c = if i == j { Expr::int(2) } else { Expr::one() };
        c * space.jet_expr(&[i]) * f.diff(&space.jet(&[i, j]))
    });
    Expr::add(terms.collect::<Vec<_>>())
}

fn rationalize(x: f64) -> Option<Rat> {
    (1..=12).find_map(|d| {
        let k = (x * d as f64).round();
        ((x * d as f64 - k).abs() < 1e-7 * d as f64).then(|| rat(k as i64, d))
    })
}

/// The `k` with `D·lhs = k·lhs`, fitted at eight points and confirmed by a
/// zero test.
pub fn homogeneity_degree(t: &CovariantPDE, cfg: &SamplerConfig) -> Result<Rat, CovariantError> {
    let d = euler_operator(&t.space, &t.lhs);
    let pts = cfg.sampler(0x4D).regular_points(&[&t.lhs, &d], 8)?;
    let mut fitted: Option<f64> = None;
    for p in &pts {
        let (l, scale) = t.lhs.eval_with_scale(p).map_err(ZeroTestError::Unsampleable)?;
        if l.abs() <= 1e-9 * scale {
            continue;
        }
        let k = d.eval(p).map_err(ZeroTestError::Unsampleable)? / l;
        match fitted {
            None => fitted = Some(k),
            Some(k0) if (k - k0).abs() > 1e-9 * k0.abs().max(1.0) => return Err(CovariantError::NotHomogeneous),
            _ => {}
        }
    }
    let k = fitted.ok_or(CovariantError::Trivial)?;
    let k = rationalize(k).ok_or(CovariantError::NotHomogeneous)?;
    if is_zero(&(d - Expr::num(k.clone()) * &t.lhs), cfg)? {
        Ok(k)
    } else {
        Err(CovariantError::NotHomogeneous)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaleReport {
    /// Degree under `D`, if homogeneous.
    pub degree: Option<String>,
    /// Whether `R_j · lhs` vanishes, for each `j`.
    pub annihilated: Vec<bool>,
}

impl RescaleReport {
    pub fn pass(&self) -> bool {
        self.degree.is_some() && self.annihilated.iter().all(|&b| b)
    }

    fn failures(&self) -> String {
        let mut out = Vec::new();
        if self.degree.is_none() {
            out.push("not homogeneous".to_string());
        }
        out.extend(self.annihilated.iter().enumerate().filter(|(_, b)| !**b).map(|(j, _)| format!("R_{}", j + 1)));
        out.join(", ")
    }
}

pub fn rescale_invariance_check(t: &CovariantPDE, cfg: &SamplerConfig) -> RescaleReport {
    let degree = homogeneity_degree(t, cfg).ok().map(|k| k.to_string());
    let annihilated = (0..t.space.n())
        .map(|j| is_zero(&rescale_operator(&t.space, j, &t.lhs), cfg).unwrap_or(false))
        .collect();
    RescaleReport { degree, annihilated }
}

/// Evaluates the covariant equation at the representative jet
/// `w_n = 1, w_an = w_nn = 0`, which turns `w_a` into `-u_a` and `w_ab`
/// into `-u_ab`.  Valid exactly when the equation is rescale invariant.
pub fn from_covariant(t: &CovariantPDE, cfg: &SamplerConfig) -> Result<ScalarPDE, CovariantError> {
    let report = rescale_invariance_check(t, cfg);
    if !report.pass() {
        return Err(CovariantError::NotRescaleInvariant(report.failures()));
    }
    let w = &t.space;
    let n = t.dependent;
    let names: Vec<&str> = (0..w.n()).filter(|&i| i != n).map(|i| w.coord(i).name()).collect();
    let s = JetSpace::new(&names, w.coord(n).name());
    let pos = |i: usize| if i < n { i } else { i - 1 };
    let mut b = Bindings::new();
    b.insert(w.coord(n).clone(), s.dep_expr());
    b.insert(w.jet(&[n]), Expr::one());
    b.insert(w.jet(&[n, n]), Expr::zero());
    for a in (0..w.n()).filter(|&a| a != n) {
        b.insert(w.jet(&[a]), -s.jet_expr(&[pos(a)]));
        b.insert(w.jet(&[a, n]), Expr::zero());
        for c in (a..w.n()).filter(|&c| c != n) {
            b.insert(w.jet(&[a, c]), -s.jet_expr(&[pos(a), pos(c)]));
        }
    }
    let lhs = normal(&t.lhs.substitute(&b));
    if lhs.is_zero() {
        return Err(CovariantError::Trivial);
    }
    Ok(ScalarPDE { space: s, lhs })
}

/// The inverse table for second derivatives in terms of normalised
/// invariants: `u_a = -J̃_a`, `u_aa = -J̃_an` and
/// `u_ab = (J̃_ab - J̃_a² J̃_bn - J̃_b² J̃_an) / (2 J̃_a J̃_b)`.
pub fn derivatives_from_invariants(space: &JetSpace, dependent: usize) -> Vec<(Vec<usize>, Expr)> {
    let j = j_invariants(space, dependent);
    let n = dependent;
    let first = |a: usize| j.normalized_first(a);
    let second = |a: usize, b: usize| j.normalized_second(a, b);
    let others: Vec<usize> = (0..space.n()).filter(|&a| a != n).collect();
    let mut out = Vec::new();
    for (p, &a) in others.iter().enumerate() {
        out.push((vec![a], -first(a)));
        out.push((vec![a, a], -second(a, n)));
        for &b in &others[p + 1..] {
            let e = (second(a, b) - first(a).powi(2) * second(b, n) - first(b).powi(2) * second(a, n))
                / (Expr::int(2) * first(a) * first(b));
            out.push((vec![a, b], e));
        }
    }
    out
}

/// `J_i = w_i`, `J_ij = w_i² w_jj + w_j² w_ii - 2 w_i w_j w_ij` and their
/// normalisations by `w_n` and `w_n³`.
#[derive(Debug, Clone)]
pub struct JInvariants {
    pub raw: Vec<(String, Expr)>,
    pub normalized: Vec<(String, Expr)>,
    n: usize,
    dependent: usize,
}

impl JInvariants {
    fn normalized_first(&self, a: usize) -> Expr {
        self.normalized[a].1.clone()
    }

    fn normalized_second(&self, a: usize, b: usize) -> Expr {
        let (a, b) = (a.min(b), a.max(b));
        let offset = self.n + (0..a).map(|i| self.n - i - 1).sum::<usize>() + (b - a - 1);
        self.normalized[offset].1.clone()
    }

    pub fn dependent(&self) -> usize {
        self.dependent
    }
}

pub fn j_invariants(space: &JetSpace, dependent: usize) -> JInvariants {
    let n = space.n();
    let w = |i: usize| space.jet_expr(&[i]);
    let ww = |i: usize, j: usize| space.jet_expr(&[i, j]);
    let wn = w(dependent);
    let mut raw = Vec::new();
    let mut normalized = Vec::new();
    for i in 0..n {
        raw.push((format!("J_{}", i + 1), w(i)));
        normalized.push((format!("J~_{}", i + 1), w(i) / &wn));
    }
    for i in 0..n {
        for j in i + 1..n {
            let e = w(i).powi(2) * ww(j, j) + w(j).powi(2) * ww(i, i) - Expr::int(2) * w(i) * w(j) * ww(i, j);
            normalized.push((format!("J~_{}{}", i + 1, j + 1), &e / wn.powi(3)));
            raw.push((format!("J_{}{}", i + 1, j + 1), e));
        }
    }
    JInvariants { raw, normalized, n, dependent }
}

/// Searches `w_n^p · c` with `|p| <= 6` such that `a = c · w_n^p · b`.
pub fn proportionality(a: &CovariantPDE, b: &CovariantPDE, cfg: &SamplerConfig) -> Option<(i64, Rat)> {
    let wn = Expr::sym(&a.space.jet(&[a.dependent]));
    let pts = cfg.sampler(0x9A).regular_points(&[&a.lhs, &b.lhs], 4).ok()?;
    for p in -6..=6 {
        let scaled = &b.lhs * wn.powi(p);
        let ratio = pts.iter().find_map(|pt| {
            let (den, m) = scaled.eval_with_scale(pt).ok()?;
            (den.abs() > 1e-6 * m).then(|| a.lhs.eval(pt).ok().map(|num| num / den)).flatten()
        })?;
        let Some(c) = rationalize(ratio) else { continue };
        if c.is_zero() {
            continue;
        }
        if is_zero(&(&a.lhs - Expr::num(c.clone()) * &scaled), cfg).ok()? {
            return Some((p, c));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(coords: &[&str], text: &str) -> ScalarPDE {
        let s = JetSpace::new(coords, "u");
        let e = parse(text, &s).unwrap();
        ScalarPDE::new(s, e)
    }

    fn covariant(coords: &[&str], text: &str) -> CovariantPDE {
        let s = JetSpace::new(coords, "w");
        let e = parse(text, &s).unwrap();
        CovariantPDE::new(s, e)
    }

    #[test]
    fn second_derivative_clears_cube() {
        let c = to_covariant(&scalar(&["x"], "u_xx"));
        assert_eq!(c.kappa, 3);
        let want = covariant(&["x", "u"], "-w_u^2*w_xx + 2*w_u*w_x*w_ux - w_x^2*w_uu");
        assert_eq!(c.lhs, normal(&want.lhs));
    }

    #[test]
    fn transport_equation() {
        let c = to_covariant(&scalar(&["x", "y"], "a1(x,y,u)*u_x + a2(x,y,u)*u_y + b(x,y,u)"));
        let want = covariant(&["x", "y", "u"], "-a1(x,y,u)*w_x - a2(x,y,u)*w_y + b(x,y,u)*w_u");
        assert_eq!(c.kappa, 1);
        assert_eq!(c.lhs, normal(&want.lhs));
    }

    #[test]
    fn degrees() {
        let cfg = SamplerConfig::default();
        assert_eq!(homogeneity_degree(&covariant(&["x", "u"], "w_x"), &cfg), Ok(rat(1, 1)));
        let g = covariant(&["x", "u"], "g11(x,u)*w_x^2 + 2*g12(x,u)*w_x*w_u + g22(x,u)*w_u^2");
        assert_eq!(homogeneity_degree(&g, &cfg), Ok(rat(2, 1)));
        assert_eq!(homogeneity_degree(&covariant(&["x", "u"], "w_x + w_x*w_u"), &cfg), Err(CovariantError::NotHomogeneous));
    }

    #[test]
    fn first_order_back_substitution() {
        let cfg = SamplerConfig::default();
        let e = from_covariant(&covariant(&["x", "u"], "w_x + w_u"), &cfg).unwrap();
        assert_eq!(e.lhs, parse("1 - u_x", &e.space).unwrap());
    }

    #[test]
    fn second_derivative_alone_is_rejected() {
        let cfg = SamplerConfig::default();
        let t = covariant(&["x", "u"], "w_xx");
        let r = rescale_invariance_check(&t, &cfg);
        assert_eq!(r.annihilated, vec![false, true]);
        assert!(matches!(from_covariant(&t, &cfg), Err(CovariantError::NotRescaleInvariant(_))));
    }

    #[test]
    fn j_invariants_pass_rescaling() {
        let cfg = SamplerConfig::default();
        let s = JetSpace::new(&["x", "y", "u"], "w");
        let j = j_invariants(&s, 2);
        assert_eq!(j.raw.len(), 6);
        assert_eq!(j.raw[3].1, normal(&parse("w_x^2*w_yy + w_y^2*w_xx - 2*w_x*w_y*w_xy", &s).unwrap()));
        for (label, e) in &j.normalized {
            let t = CovariantPDE::new(s.clone(), e.clone());
            assert!(rescale_invariance_check(&t, &cfg).annihilated.iter().all(|&b| b), "{label}");
            assert_eq!(homogeneity_degree(&t, &cfg), Ok(Rat::zero()), "{label}");
        }
    }

    #[test]
    fn inverse_table_recovers_derivatives() {
        let cfg = SamplerConfig::default();
        let s = scalar(&["x", "y"], "u");
        let (w, _) = lift_space(&s.space);
        let bind = implicit_bindings(&s.space, &w, 2);
        for (idx, e) in derivatives_from_invariants(&w, 2) {
            let want = &bind[&s.space.jet(&idx)];
            assert_eq!(is_zero(&(e - want), &cfg), Ok(true), "{idx:?}");
        }
    }

    #[test]
    fn equation_file() {
        let (s, e) = parse_equation_file("coords: x, y; dep: u\nlhs: u_xx + u_yy\n").unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(e.to_string(), "u_xx + u_yy");
        assert!(parse_equation_file("coords: x\n").is_err());
        assert!(parse_equation_file("coords: x; dep: u\nrhs: u").is_err());
    }
}

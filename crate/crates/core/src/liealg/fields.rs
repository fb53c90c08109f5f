//! Left- and right-invariant vector fields in coordinates of the second kind
//! `g = exp(zⁿeₙ)···exp(z¹e₁)`.

use serde::Serialize;

use super::{exp_matrix, LieError, StructureConstants};
use crate::expr::normal::{is_monomial, normal};
use crate::expr::{is_zero, Expr, SamplerConfig, Symbol};
use crate::jet::VectorField;

/// `ξ_i` (left-invariant, `[ξ_i, ξ_j] = C^k_ij ξ_k`) and `η_i`
/// (right-invariant, `[η_i, η_j] = −C^k_ij η_k`) over `coords`.
#[derive(Debug, Clone)]
pub struct InvariantFields {
    pub coords: Vec<Symbol>,
    pub xi: Vec<VectorField>,
    pub eta: Vec<VectorField>,
}

impl InvariantFields {
    /// Renames the coordinates, e.g. `z1, z2, z3` to `x, y, u`.
    pub fn rename(&self, names: &[&str]) -> InvariantFields {
        let coords: Vec<Symbol> = names.iter().map(|n| Symbol::base(n)).collect();
        let map = self.coords.iter().cloned().zip(coords.iter().map(Expr::sym)).collect();
        let conv = |f: &VectorField| VectorField::new(coords.clone(), f.coeffs.iter().map(|c| c.substitute(&map)).collect());
        InvariantFields { coords: coords.clone(), xi: self.xi.iter().map(conv).collect(), eta: self.eta.iter().map(conv).collect() }
    }
}

pub fn z_coords(n: usize) -> Vec<Symbol> {
    (1..=n).map(|k| Symbol::base(&format!("z{k}"))).collect()
}

fn mat_vec(m: &[Vec<Expr>], v: &[Expr]) -> Vec<Expr> {
    m.iter().map(|row| Expr::add(row.iter().zip(v).map(|(a, b)| a * b).collect::<Vec<_>>())).map(|e| normal(&e)).collect()
}

fn minor(m: &[Vec<Expr>], skip_r: usize, skip_c: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_r)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != skip_c).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn det(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        _ => {
            let terms: Vec<Expr> = (0..m.len())
                .filter(|&c| !m[0][c].is_zero())
                .map(|c| {
                    let sign = if c % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                    sign * &m[0][c] * det(&minor(m, 0, c))
                })
                .collect();
            normal(&Expr::add(terms))
        }
    }
}

/// Symbolic inverse by adjugate over determinant.  When the determinant
/// normalises to a single term the entries come out as Laurent polynomials.
pub fn invert_matrix(m: &[Vec<Expr>]) -> Result<Vec<Vec<Expr>>, LieError> {
    let n = m.len();
    let d = det(m);
    if d.is_zero() {
        return Err(LieError::VerificationFailed("coefficient matrix is singular".into()));
    }
    let dinv = if is_monomial(&d) { normal(&d.recip()) } else { d.recip() };
    let mut inv = vec![vec![Expr::zero(); n]; n];
    for (r, row) in inv.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            let sign = if (r + c) % 2 == 0 { Expr::one() } else { Expr::int(-1) };
            let cof = sign * det(&minor(m, c, r));
            *slot = normal(&(cof * &dinv));
        }
    }
    Ok(inv)
}

/// Steps through `exp(±z ad)` products to obtain the trivialisation
/// matrices, inverts them and reads off `ξ` and `η`; the result is gated by
/// [`verify_realization`].
pub fn build_invariant_fields(sc: &StructureConstants, cfg: &SamplerConfig) -> Result<InvariantFields, LieError> {
    sc.validate()?;
    let n = sc.dim();
    if n == 0 || n > 4 {
        return Err(LieError::Input(format!("dimension {n} outside 1..=4")));
    }
    let z = z_coords(n);
    let mut minus = Vec::with_capacity(n);
    let mut plus = Vec::with_capacity(n);
    for (k, zk) in z.iter().enumerate() {
        let ad = sc.ad(k + 1);
        minus.push(exp_matrix(&ad, &-Expr::sym(zk))?);
        plus.push(exp_matrix(&ad, &Expr::sym(zk))?);
    }
    let unit = |k: usize| -> Vec<Expr> { (0..n).map(|i| if i == k { Expr::one() } else { Expr::zero() }).collect() };
    // Columns k of the left (A) and right (B) trivialisations.
    let mut a_cols = Vec::with_capacity(n);
    let mut b_cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = unit(k);
        for m in minus[..k].iter().rev() {
            v = mat_vec(m, &v);
        }
        a_cols.push(v);
        let mut v = unit(k);
        for p in &plus[k + 1..] {
            v = mat_vec(p, &v);
        }
        b_cols.push(v);
    }
    let as_matrix = |cols: &[Vec<Expr>]| -> Vec<Vec<Expr>> { (0..n).map(|i| (0..n).map(|k| cols[k][i].clone()).collect()).collect() };
    let a_inv = invert_matrix(&as_matrix(&a_cols))?;
    let b_inv = invert_matrix(&as_matrix(&b_cols))?;
    let field = |inv: &[Vec<Expr>], i: usize| VectorField::new(z.clone(), (0..n).map(|k| inv[k][i].clone()).collect());
    let fields = InvariantFields {
        coords: z.clone(),
        xi: (0..n).map(|i| field(&a_inv, i)).collect(),
        eta: (0..n).map(|i| field(&b_inv, i)).collect(),
    };
    let report = verify_realization(&fields, sc, cfg);
    if !report.pass() {
        return Err(LieError::VerificationFailed(report.failures().join("; ")));
    }
    Ok(fields)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketCheck {
    pub label: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationReport {
    pub checks: Vec<BracketCheck>,
}

impl RealizationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.label.clone()).collect()
    }
}

fn field_is_zero(f: &VectorField, cfg: &SamplerConfig) -> bool {
    f.coeffs.iter().all(|c| {
        let c = normal(c);
        c.is_zero() || is_zero(&c, cfg).unwrap_or(false)
    })
}

fn combination(fields: &[VectorField], sc: &StructureConstants, i: usize, j: usize, sign: i64) -> VectorField {
    let mut acc = fields[0].scale(&Expr::zero());
    for (k, f) in fields.iter().enumerate() {
        let c = sc.get(i + 1, j + 1, k + 1);
        if !num_traits::Zero::is_zero(&c) {
            acc = acc.add(&f.scale(&(Expr::int(sign) * Expr::num(c))));
        }
    }
    acc
}

/// Checks `[ξ_i, ξ_j] = C^k_ij ξ_k`, `[η_i, η_j] = −C^k_ij η_k` and
/// `[ξ_i, η_j] = 0` coefficientwise.
pub fn verify_realization(f: &InvariantFields, sc: &StructureConstants, cfg: &SamplerConfig) -> RealizationReport {
    let n = sc.dim();
    let mut checks = Vec::new();
    let mut check = |label: String, diff: Option<VectorField>| {
        let pass = diff.is_some_and(|d| field_is_zero(&d, cfg));
        checks.push(BracketCheck { label, pass });
    };
    if f.xi.len() != n || f.eta.len() != n {
        check("dimension".into(), None);
        return RealizationReport { checks };
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = f.xi[i].commutator(&f.xi[j]).ok().map(|b| b.add(&combination(&f.xi, sc, i, j, -1)));
            check(format!("[xi{},xi{}]", i + 1, j + 1), d);
            let d = f.eta[i].commutator(&f.eta[j]).ok().map(|b| b.add(&combination(&f.eta, sc, i, j, 1)));
            check(format!("[eta{},eta{}]", i + 1, j + 1), d);
        }
    }
    for i in 0..n {
        for j in 0..n {
            check(format!("[xi{},eta{}]", i + 1, j + 1), f.xi[i].commutator(&f.eta[j]).ok());
        }
    }
    RealizationReport { checks }
}

/// `det ‖ξ_i^j‖` is bounded away from zero at `points` sampled points.
pub fn det_check(fields: &[VectorField], cfg: &SamplerConfig, points: usize) -> bool {
    let exprs: Vec<&Expr> = fields.iter().flat_map(|f| f.coeffs.iter()).collect();
    let Ok(pts) = cfg.sampler(0xDE7).regular_points(&exprs, points) else { return false };
    pts.len() == points
        && pts.iter().all(|p| {
            let m: Option<Vec<Vec<f64>>> =
                fields.iter().map(|f| f.coeffs.iter().map(|c| c.eval(p).ok()).collect()).collect();
            m.is_some_and(|m| numeric_det(m).abs() > 1e-9)
        })
}

fn numeric_det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let Some(p) = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else { return 0.0 };
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, rat_int};
    use crate::jet::JetSpace;

    fn zspace(n: usize) -> JetSpace {
        let names: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        JetSpace::new(&refs, "w")
    }

    fn field(j: &JetSpace, coeffs: &[&str]) -> VectorField {
        VectorField::new(j.coords().to_vec(), coeffs.iter().map(|c| normal(&parse(c, j).unwrap())).collect())
    }

    #[test]
    fn abelian_fields_are_coordinate_fields() {
        let cfg = SamplerConfig::default();
        let f = build_invariant_fields(&StructureConstants::abelian(3), &cfg).unwrap();
        for i in 0..3 {
            assert_eq!(f.xi[i], VectorField::unit(&f.coords, i));
            assert_eq!(f.eta[i], VectorField::unit(&f.coords, i));
        }
    }

    #[test]
    fn affine_algebra_fields() {
        let cfg = SamplerConfig::default();
        let sc = StructureConstants::new(2).with(1, 2, 1, rat_int(1));
        let f = build_invariant_fields(&sc, &cfg).unwrap();
        let j = zspace(2);
        assert_eq!(f.xi[0], field(&j, &["1", "0"]));
        assert_eq!(f.xi[1], field(&j, &["z1", "1"]));
        assert_eq!(f.eta[0], field(&j, &["exp(z2)", "0"]));
        assert_eq!(f.eta[1], field(&j, &["0", "1"]));
    }

    #[test]
    fn broken_realization_is_reported() {
        let cfg = SamplerConfig::default();
        let sc = StructureConstants::new(2).with(1, 2, 1, rat_int(1));
        let j = zspace(2);
        let f = InvariantFields {
            coords: j.coords().to_vec(),
            xi: vec![field(&j, &["1", "0"]), field(&j, &["z1", "1"])],
            eta: vec![field(&j, &["1", "0"]), field(&j, &["0", "1"])],
        };
        let r = verify_realization(&f, &sc, &cfg);
        assert!(!r.pass());
        assert!(r.failures().contains(&"[xi2,eta1]".to_string()));
    }

    #[test]
    fn symbolic_inverse_of_rotation() {
        let j = zspace(1);
        let m = vec![
            vec![parse("cos(z1)", &j).unwrap(), parse("-sin(z1)", &j).unwrap()],
            vec![parse("sin(z1)", &j).unwrap(), parse("cos(z1)", &j).unwrap()],
        ];
        let inv = invert_matrix(&m).unwrap();
        assert_eq!(inv[0][1], normal(&parse("sin(z1)", &j).unwrap()));
        assert_eq!(inv[1][1], normal(&parse("cos(z1)", &j).unwrap()));
    }

    #[test]
    fn determinant_sampling() {
        let cfg = SamplerConfig::default();
        let j = zspace(2);
        assert!(det_check(&[field(&j, &["1", "0"]), field(&j, &["z1", "1"])], &cfg, 16));
        assert!(!det_check(&[field(&j, &["1", "0"]), field(&j, &["2", "0"])], &cfg, 16));
    }
}

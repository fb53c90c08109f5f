//! Numerical and symbolic checks: annihilation, functional rank,
//! equivalence of invariant sets, and the reference tables.

pub mod fixtures;
pub mod suite;

use crate::expr::{is_zero, Assignment, Expr, SamplerConfig, Symbol, ZeroTestError};
use crate::jet::{JetSpace, ProlongedField};

pub use suite::{run_fixture_suite, rows_for, CheckLine, Report, RowReport, RowSpec};

/// True iff every prolonged generator sends `e` to zero.
pub fn annihilation_check(pro: &[ProlongedField], e: &Expr, cfg: &SamplerConfig) -> Result<bool, ZeroTestError> {
    for x in pro {
        if !is_zero(&x.apply(e), cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub const FD_STEP: f64 = 1e-6;
pub const RANK_THRESHOLD: f64 = 1e-9;

fn gradient_row(e: &Expr, vars: &[Symbol], p: &Assignment) -> Option<Vec<f64>> {
    let mut q = p.clone();
    let mut row = Vec::with_capacity(vars.len());
    for v in vars {
        let x = p.get(v).copied().unwrap_or(0.0);
        let h = FD_STEP * x.abs().max(1.0);
        q.insert(v.clone(), x + h);
        let up = e.eval(&q).ok()?;
        q.insert(v.clone(), x - h);
        let down = e.eval(&q).ok()?;
        q.insert(v.clone(), x);
        row.push((up - down) / (2.0 * h));
    }
    Some(row)
}

/// Rank of a dense matrix by Gaussian elimination with complete pivoting;
/// pivots below `threshold` times the largest entry count as zero.
pub fn numeric_rank(mut m: Vec<Vec<f64>>, threshold: f64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (0.0, rank, rank);
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, x) in row.iter().enumerate().skip(rank) {
                if x.abs() > best.0 {
                    best = (x.abs(), i, j);
                }
            }
        }
        if best.0 <= threshold * scale {
            break;
        }
        m.swap(rank, best.1);
        for row in &mut m {
            row.swap(rank, best.2);
        }
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[rank] / pivot[rank];
            for (x, p) in row.iter_mut().zip(&pivot).skip(rank) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Generic rank of the Jacobian of `exprs` with respect to all coordinates of
/// the jet space, estimated by central differences at sampled points.
pub fn functional_rank(exprs: &[Expr], space: &JetSpace, cfg: &SamplerConfig) -> Result<usize, ZeroTestError> {
    let vars = space.all_symbols();
    let refs: Vec<&Expr> = exprs.iter().collect();
    let points = cfg.sampler(1).regular_points(&refs, cfg.points)?;
    let mut rank = 0;
    for p in &points {
        let rows: Option<Vec<Vec<f64>>> = exprs.iter().map(|e| gradient_row(e, &vars, p)).collect();
        let Some(rows) = rows else { continue };
        let rows = rows
            .into_iter()
            .map(|r| {
                let s = r.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                if s > 0.0 {
                    r.into_iter().map(|x| x / s).collect()
                } else {
                    r
                }
            })
            .collect();
        rank = rank.max(numeric_rank(rows, RANK_THRESHOLD));
    }
    Ok(rank)
}

/// Two sets generate the same functions when each has the rank of their
/// union.
pub fn equivalence_check(a: &[Expr], b: &[Expr], space: &JetSpace, cfg: &SamplerConfig) -> Result<bool, ZeroTestError> {
    let ra = functional_rank(a, space, cfg)?;
    let rb = functional_rank(b, space, cfg)?;
    let union: Vec<Expr> = a.iter().chain(b).cloned().collect();
    let ru = functional_rank(&union, space, cfg)?;
    Ok(ra == rb && rb == ru)
}

/// True when `lhs` is a relative invariant: after solving `lhs = 0` for
/// `solve_for` (on which it depends linearly), every prolonged generator
/// maps it to zero.
pub fn relative_invariance(
    pro: &[ProlongedField],
    lhs: &Expr,
    solve_for: &Symbol,
    cfg: &SamplerConfig,
) -> Result<bool, ZeroTestError> {
    let coeff = lhs.diff(solve_for);
    let rest = lhs.substitute(&[(solve_for.clone(), Expr::zero())].into_iter().collect());
    let value = -(rest / coeff);
    let map = [(solve_for.clone(), value)].into_iter().collect();
    for x in pro {
        if !is_zero(&x.apply(lhs).substitute(&map), cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn space() -> JetSpace {
        JetSpace::new(&["x", "y"], "u")
    }

    fn ps(texts: &[&str]) -> Vec<Expr> {
        texts.iter().map(|t| parse(t, &space()).unwrap()).collect()
    }

    #[test]
    fn rank_of_dependent_functions() {
        let cfg = SamplerConfig::default();
        let s = space();
        assert_eq!(functional_rank(&ps(&["u_x", "u_y", "u_x*u_y"]), &s, &cfg), Ok(2));
        assert_eq!(functional_rank(&ps(&["exp(u)*u_x", "exp(2*u)*u_xx", "u_xx + u_x^2"]), &s, &cfg), Ok(3));
        assert_eq!(functional_rank(&ps(&["sin(x)^2", "cos(x)^2"]), &s, &cfg), Ok(1));
    }

    #[test]
    fn rank_of_matrix() {
        assert_eq!(numeric_rank(vec![vec![1.0, 2.0], vec![2.0, 4.0]], 1e-9), 1);
        assert_eq!(numeric_rank(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1e-9), 2);
        assert_eq!(numeric_rank(vec![vec![0.0; 3]; 2], 1e-9), 0);
    }

    #[test]
    fn equivalence_of_generators() {
        let cfg = SamplerConfig::default();
        let s = space();
        let a = ps(&["u_x", "u_y"]);
        assert_eq!(equivalence_check(&a, &ps(&["u_x + u_y", "u_x - u_y"]), &s, &cfg), Ok(true));
        assert_eq!(equivalence_check(&a, &ps(&["u_x", "u_xx"]), &s, &cfg), Ok(false));
    }

    #[test]
    fn relative_invariance_of_scaled_equation() {
        let cfg = SamplerConfig::default();
        let s = JetSpace::new(&["x"], "u");
        let vars = vec![s.coord(0).clone(), s.dep()];
        let shift = crate::jet::VectorField::new(vars.clone(), vec![Expr::one(), Expr::zero()]);
        let scale = crate::jet::VectorField::new(vars, vec![s.coord_expr(0), Expr::one()]);
        let pro = vec![s.prolong2(&shift).unwrap(), s.prolong2(&scale).unwrap()];
        let uxx = s.jet(&[0, 0]);
        let good = parse("u_xx + exp(-2*u)*(exp(u)*u_x)^3", &s).unwrap();
        let bad = parse("u_xx + exp(-u)*(exp(u)*u_x)^3", &s).unwrap();
        assert_eq!(relative_invariance(&pro, &good, &uxx, &cfg), Ok(true));
        assert_eq!(relative_invariance(&pro, &bad, &uxx, &cfg), Ok(false));
    }
}

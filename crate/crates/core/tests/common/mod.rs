#![allow(dead_code)]

use lieinv::expr::{rat, Assignment, Expr, Symbol};
use lieinv::jet::JetSpace;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn space() -> JetSpace {
    JetSpace::new(&["x", "y"], "u")
}

pub fn symbols() -> Vec<Symbol> {
    let j = space();
    vec![j.coord(0).clone(), j.coord(1).clone(), j.dep(), j.jet(&[0]), j.jet(&[0, 1])]
}

/// Expressions over `x, y, u, u_x, u_xy` that are finite everywhere on the
/// unit box: division only by `2 + v^2`.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let syms = symbols();
    let leaf = prop_oneof![
        (0..syms.len()).prop_map(move |i| Expr::sym(&syms[i])),
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expr::num(rat(n, d))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), 2i64..=3).prop_map(|(a, k)| a.powi(k)),
            inner.clone().prop_map(|a| Expr::num(rat(1, 2)) * a),
            inner.clone().prop_map(|a| (Expr::int(2) + a.powi(2)).recip()),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.prop_map(|a| Expr::exp(Expr::sin(a))),
        ]
    })
}

pub fn arb_symbol() -> impl Strategy<Value = Symbol> {
    let syms = symbols();
    (0..syms.len()).prop_map(move |i| syms[i].clone())
}

pub fn points(seed: u64, count: usize) -> Vec<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| symbols().into_iter().map(|s| (s, rng.gen_range(-0.9..0.9))).collect()).collect()
}

/// `|a - b| <= tol * max(1, |a|, |b|)` at every point where both evaluate.
pub fn agree(a: &Expr, b: &Expr, tol: f64) -> bool {
    points(0xA11CE, 16).iter().all(|p| match (a.eval(p), b.eval(p)) {
        (Ok(x), Ok(y)) => (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs()),
        (Err(_), Err(_)) => true,
        _ => false,
    })
}

/// Central difference of `e` in `s` against `e.diff(s)`.
pub fn fd_agrees(e: &Expr, s: &Symbol, tol: f64) -> bool {
    let d = e.diff(s);
    let h = 1e-5;
    points(0xFD, 8).iter().all(|p| {
        let mut plus = p.clone();
        let mut minus = p.clone();
        *plus.get_mut(s).unwrap() += h;
        *minus.get_mut(s).unwrap() -= h;
        match (e.eval(&plus), e.eval(&minus), d.eval(p)) {
            (Ok(a), Ok(b), Ok(exact)) => {
                let fd = (a - b) / (2.0 * h);
                (fd - exact).abs() <= tol * 1f64.max(exact.abs())
            }
            _ => false,
        }
    })
}

use lieinv::covariant::{
    euler_operator, from_covariant, rescale_invariance_check, rescale_operator, to_covariant, ScalarPDE,
};
use lieinv::expr::{is_zero, rat, Expr, SamplerConfig, Symbol};
use lieinv::jet::JetSpace;
use proptest::prelude::*;

fn w_space() -> JetSpace {
    JetSpace::new(&["x", "y", "u"], "w")
}

fn jets(space: &JetSpace) -> Vec<Symbol> {
    let n = space.n();
    let mut out: Vec<Symbol> = (0..n).map(|i| space.jet(&[i])).collect();
    for i in 0..n {
        for j in i..n {
            out.push(space.jet(&[i, j]));
        }
    }
    out
}

/// Polynomials in base coordinates and first and second jets.
fn arb_polynomial(space: JetSpace) -> impl Strategy<Value = Expr> {
    let mut syms: Vec<Symbol> = space.coords().to_vec();
    syms.extend(jets(&space));
    let k = syms.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..k, 1..4)), 1..5).prop_map(move |terms| {
        Expr::add(terms.into_iter().map(|(c, idx)| {
            Expr::int(c) * Expr::mul(idx.into_iter().map(|i| Expr::sym(&syms[i])))
        }))
    })
}

/// Second-order equations in `u(x, y)`, polynomial in the derivatives.
fn arb_scalar() -> impl Strategy<Value = Expr> {
    let u = JetSpace::new(&["x", "y"], "u");
    let mut syms: Vec<Symbol> = u.coords().to_vec();
    syms.push(u.dep());
    syms.extend([u.jet(&[0]), u.jet(&[1]), u.jet(&[0, 0]), u.jet(&[0, 1]), u.jet(&[1, 1])]);
    let k = syms.len();
    prop::collection::vec((1i64..=3, prop::collection::vec(0..k, 0..3)), 1..4).prop_map(move |terms| {
        Expr::add(terms.into_iter().map(|(c, idx)| {
            Expr::num(rat(c, 2)) * Expr::mul(idx.into_iter().map(|i| Expr::sym(&syms[i])))
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_commutes_with_rescaling(f in arb_polynomial(w_space()), j in 0usize..3) {
        let s = w_space();
        let cfg = SamplerConfig::default();
        let dr = euler_operator(&s, &rescale_operator(&s, j, &f));
        let rd = rescale_operator(&s, j, &euler_operator(&s, &f));
        prop_assert_eq!(is_zero(&(dr - rd), &cfg), Ok(true));
    }

    #[test]
    fn covariant_round_trip(lhs in arb_scalar()) {
        let cfg = SamplerConfig::default();
        let e = ScalarPDE::new(JetSpace::new(&["x", "y"], "u"), lhs);
        let t = to_covariant(&e);
        prop_assert!(rescale_invariance_check(&t, &cfg).pass());
        let back = from_covariant(&t, &cfg).unwrap();
        prop_assert_eq!(is_zero(&(back.lhs - e.lhs.clone()), &cfg), Ok(true));
    }
}

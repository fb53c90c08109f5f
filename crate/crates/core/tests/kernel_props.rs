mod common;

use common::{agree, arb_expr, arb_symbol, fd_agrees, space};
use lieinv::expr::normal::normal;
use lieinv::expr::{parse, Bindings, Expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_preserves_value(a in arb_expr()) {
        prop_assert!(agree(&normal(&a), &a, 1e-9));
    }

    #[test]
    fn derivative_is_linear(a in arb_expr(), b in arb_expr(), s in arb_symbol(), c in -5i64..5) {
        let lhs = (&a + &(Expr::int(c) * &b)).diff(&s);
        let rhs = a.diff(&s) + Expr::int(c) * b.diff(&s);
        prop_assert!(agree(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn product_rule(a in arb_expr(), b in arb_expr(), s in arb_symbol()) {
        let lhs = (&a * &b).diff(&s);
        let rhs = &a * &b.diff(&s) + &b * &a.diff(&s);
        prop_assert!(agree(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in arb_expr(), b in arb_expr(), s in arb_symbol()) {
        let mut map = Bindings::new();
        map.insert(s.clone(), b.clone());
        let sub = a.substitute(&map);
        for p in common::points(5, 8) {
            let mut q = p.clone();
            q.insert(s.clone(), b.eval(&p).unwrap());
            let (x, y) = (sub.eval(&p).unwrap(), a.eval(&q).unwrap());
            prop_assert!((x - y).abs() <= 1e-9 * 1f64.max(x.abs()));
        }
    }

    #[test]
    fn parse_inverts_render(a in arb_expr()) {
        let back = parse(&a.to_string(), &space()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn derivative_matches_finite_differences(a in arb_expr(), s in arb_symbol()) {
        prop_assert!(fd_agrees(&a, &s, 1e-5));
    }
}

use jetvar::random::Gen;
use jetvar::symbolic::{Coord, Expr, JetContext};
use proptest::prelude::*;

fn triple(seed: u64, n: usize, m: usize) -> (Expr, Expr, Expr) {
    let mut g = Gen::new(seed);
    let atoms = Gen::coords(n, m, 2);
    (g.poly(&atoms, 4, 3), g.poly(&atoms, 4, 3), g.poly(&atoms, 3, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let (a, b, c) = triple(seed, n, m);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Expr::one(), a.clone());
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>(), n in 2usize..=3, m in 1usize..=2) {
        let (a, _, _) = triple(seed, n, m);
        for i in 1..=n as u8 {
            for j in 1..i {
                prop_assert_eq!(a.total_derivative(i).total_derivative(j), a.total_derivative(j).total_derivative(i));
            }
        }
    }

    #[test]
    fn total_derivative_is_a_derivation(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let (a, b, _) = triple(seed, n, m);
        for i in 1..=n as u8 {
            let lhs = (&a * &b).total_derivative(i);
            let rhs = &a.total_derivative(i) * &b + &a * &b.total_derivative(i);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partials_commute(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2) {
        let (a, _, _) = triple(seed, n, m);
        let coords: Vec<Coord> = a.coords().into_iter().collect();
        for u in &coords {
            for v in &coords {
                prop_assert_eq!(a.partial(u).partial(v), a.partial(v).partial(u));
            }
        }
    }

    #[test]
    fn total_derivative_respects_opaque_chain_rule(seed in any::<u64>()) {
        let mut c = JetContext::new(2, 1, 6).unwrap();
        let f = c.declare("f", vec![Coord::x(1), Coord::y(1)]).unwrap();
        let mut g = Gen::new(seed);
        let k = g.coefficient();
        let e = Expr::func(&f).scale(&k);
        let d = c.total_derivative(&e, 1).unwrap();
        let want = e.partial(&Coord::x(1)) + &e.partial(&Coord::y(1)) * &Expr::z(1, &[1]);
        prop_assert_eq!(&d, &want);
        prop_assert!(c.total_derivative(&e, 2).unwrap() == &e.partial(&Coord::y(1)) * &Expr::z(1, &[2]));
    }
}

#[test]
fn order_cap_is_enforced() {
    let c = JetContext::new(1, 1, 2).unwrap();
    let e = Expr::z(1, &[1, 1]);
    assert!(matches!(c.total_derivative(&e, 1), Err(jetvar::Error::Order { required: 3, max: 2 })));
}

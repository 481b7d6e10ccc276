use jetvar::jet::{ProjectableField, TensorType};
use jetvar::random::Gen;
use jetvar::symbolic::{Coord, Expr, JetContext};
use jetvar::symmetry::{conserved_current, covariance_expressions, covariance_system, noether_check};
use jetvar::variational::{euler, Lagrangian};
use proptest::prelude::*;

fn ctx(n: usize, m: usize) -> JetContext {
    JetContext::new(n, m, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn current_identity_holds_off_shell(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2) {
        let mut g = Gen::new(seed);
        let c = ctx(n, m);
        let l = Lagrangian::new(&c, g.lagrangian(n, m, 1, &[])).unwrap();
        let xi = g.projectable_field(n, m);
        let cur = conserved_current(&c, &l, &xi).unwrap();
        prop_assert!(cur.residual.is_zero());
        prop_assert_eq!(cur.euler, euler(&c, &l).unwrap());
    }

    #[test]
    fn translations_preserve_autonomous_lagrangians(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let mut g = Gen::new(seed);
        let c = ctx(n, m);
        let atoms: Vec<Expr> = Gen::coords(n, m, 1)
            .into_iter()
            .filter(|a| !a.coords().iter().any(Coord::is_base))
            .collect();
        let l = Lagrangian::new(&c, g.poly(&atoms, 4, 3)).unwrap();
        for i in 1..=n {
            let (ok, residual) = noether_check(&c, &l, &ProjectableField::translation(n, m, i)).unwrap();
            prop_assert!(ok, "residual {}", residual);
        }
    }

    #[test]
    fn covariance_table_rebuilds_expressions(seed in any::<u64>(), variance in prop::sample::select(vec!["+", "-"])) {
        let n = 2;
        let sigma = TensorType::parse(variance, 1).unwrap();
        let m = sigma.fiber_dim(n);
        let c = ctx(n, m);
        let mut g = Gen::new(seed);
        let l = Lagrangian::new(&c, g.lagrangian(n, m, 1, &[])).unwrap();
        let table = covariance_system(&c, &l, &sigma).unwrap();
        let base = Gen::base_coords(n);
        let xi: Vec<Expr> = (0..n).map(|_| g.poly(&base, 4, 3)).collect();
        let direct = covariance_expressions(&c, &l, &sigma, &xi).unwrap();
        for (k, e) in direct.iter().enumerate() {
            prop_assert_eq!(&table.evaluate(k + 1, &xi), e);
        }
    }

    #[test]
    fn zeroth_covariance_coefficient_is_explicit_x_derivative(seed in any::<u64>()) {
        let n = 2;
        let sigma = TensorType::tangent();
        let m = sigma.fiber_dim(n);
        let c = ctx(n, m);
        let mut g = Gen::new(seed);
        let l = Lagrangian::new(&c, g.lagrangian(n, m, 1, &[])).unwrap();
        let table = covariance_system(&c, &l, &sigma).unwrap();
        let e = euler(&c, &l).unwrap();
        for cc in 1..=m {
            for i in 1..=n {
                prop_assert_eq!(table.a0(cc, i), e.get(cc).partial(&Coord::x(i as u8)));
            }
        }
    }
}

#[test]
fn tangent_volume_density_is_not_covariant() {
    let c = ctx(1, 1);
    let l = Lagrangian::new(&c, Expr::y(1).pow(2)).unwrap();
    let table = covariance_system(&c, &l, &TensorType::tangent()).unwrap();
    assert!(!table.is_zero());
}

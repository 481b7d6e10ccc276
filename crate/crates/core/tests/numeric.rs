use jetvar::numeric::{
    eval, flow_prolong_oracle, randomized_zero_check, relative_difference, section_jet_f64, CompiledExpr, FlowOutcome,
    PointAssignment,
};
use jetvar::random::Gen;
use jetvar::symbolic::{Coord, Expr, JetContext};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn point(g: &mut Gen, e: &[&Expr]) -> PointAssignment {
    let coords = e.iter().flat_map(|x| x.coords()).collect::<Vec<_>>();
    PointAssignment { values: g.point(coords), realizations: BTreeMap::new() }
}

fn eval_on_jet(e: &Expr, jet: &BTreeMap<Coord, f64>) -> f64 {
    let vars: Vec<Coord> = jet.keys().cloned().collect();
    let x: Vec<f64> = vars.iter().map(|v| jet[v]).collect();
    CompiledExpr::new(e, &vars).unwrap().eval(&x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2) {
        let mut g = Gen::new(seed);
        let atoms = Gen::coords(n, m, 1);
        let (a, b) = (g.poly(&atoms, 4, 3), g.poly(&atoms, 4, 3));
        let p = point(&mut g, &[&a, &b]);
        let (va, vb) = (eval(&a, &p).unwrap(), eval(&b, &p).unwrap());
        prop_assert_eq!(eval(&(&a + &b), &p).unwrap(), &va + &vb);
        prop_assert_eq!(eval(&(&a * &b), &p).unwrap(), va * vb);
    }

    #[test]
    fn total_derivative_matches_difference_quotient(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2) {
        let mut g = Gen::new(seed);
        let e = g.poly(&Gen::coords(n, m, 1), 4, 3);
        let gamma = g.section(n, m, 3);
        let x0: Vec<f64> = (0..n).map(|_| g.int(-10, 10) as f64 / 10.0).collect();
        let h = 1e-4;
        for i in 1..=n as u8 {
            let exact = eval_on_jet(&e.total_derivative(i), &section_jet_f64(&gamma, &x0, 2).unwrap());
            let shifted = |s: f64| {
                let mut x = x0.clone();
                x[i as usize - 1] += s;
                eval_on_jet(&e, &section_jet_f64(&gamma, &x, 1).unwrap())
            };
            let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{} vs {}", fd, exact);
        }
    }

    #[test]
    fn zero_check_detects_identities_and_nonzeros(seed in any::<u64>()) {
        let mut c = JetContext::new(2, 1, 4).unwrap();
        let f = c.declare("f", vec![Coord::x(1), Coord::y(1)]).unwrap();
        let fe = Expr::func(&f);
        let d = c.total_derivative(&(&fe * &fe), 1).unwrap();
        let leibniz = d - (&c.total_derivative(&fe, 1).unwrap() * &fe).scale(&jetvar::symbolic::q(2));
        prop_assert!(randomized_zero_check(&leibniz, 5, seed).unwrap().is_probably_zero());
        let bumped = leibniz + &Expr::z(1, &[1]) * &fe.partial(&Coord::y(1));
        prop_assert!(!randomized_zero_check(&bumped, 5, seed).unwrap().is_probably_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_oracle_agrees_with_prolongation(seed in any::<u64>()) {
        let (n, m, r) = (2, 1, 2);
        let mut g = Gen::new(seed);
        let c = JetContext::new(n, m, r).unwrap();
        let xi = g.projectable_field(n, m);
        let jf = xi.prolong(&c, r).unwrap();
        let gamma = g.section(n, m, 3);
        let x0 = [0.25, -0.5];
        let jet = section_jet_f64(&gamma, &x0, r).unwrap();
        let symbolic: BTreeMap<Coord, f64> = jet.keys().map(|k| (k.clone(), eval_on_jet(&jf.component(k), &jet))).collect();
        // the t-difference error is O(h_t²) with a constant that grows with the
        // section's size, so use a smaller step than the acceptance run
        match flow_prolong_oracle(&xi, &gamma, &x0, r, 1e-5).unwrap() {
            FlowOutcome::Jet(numeric) => {
                let d = relative_difference(&numeric, &symbolic);
                prop_assert!(d < 1e-5, "relative difference {}", d);
            }
            FlowOutcome::Inconclusive(why) => prop_assume!(false, "{}", why),
        }
    }
}

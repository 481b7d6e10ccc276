//! Seeded generators for random expressions, forms, fields and sections.
//!
//! Used by the property tests and the acceptance suite; every generator is
//! deterministic given the seed.

use crate::exterior::{DiffForm, PolySection};
use crate::jet::ProjectableField;
use crate::symbolic::{Coord, Expr, MultiIndex, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("non-empty").clone()
    }

    /// Nonzero coefficient `p/q` with `|p| ≤ 5`, `q ≤ 3`.
    pub fn coefficient(&mut self) -> Rational {
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-5..=5);
        }
        Rational::new(p.into(), self.rng.gen_range(1..=3i64).into())
    }

    /// Rational with numerator and denominator bounded by 97.
    pub fn point_value(&mut self) -> Rational {
        let p = self.rng.gen_range(-97..=97i64);
        let q = self.rng.gen_range(1..=97i64);
        Rational::new(p.into(), q.into())
    }

    /// Random polynomial: `terms` monomials of degree `≤ max_deg` in `atoms`.
    pub fn poly(&mut self, atoms: &[Expr], terms: usize, max_deg: u32) -> Expr {
        let mut out = Expr::zero();
        for _ in 0..terms {
            let d = self.rng.gen_range(0..=max_deg);
            let mut m = Expr::constant(self.coefficient());
            for _ in 0..d {
                if atoms.is_empty() {
                    break;
                }
                m = &m * &self.pick(atoms);
            }
            out += m;
        }
        out
    }

    /// Like [`Gen::poly`] but every monomial has degree `≥ 1` in `atoms`.
    pub fn poly_nonconstant(&mut self, atoms: &[Expr], terms: usize, max_deg: u32) -> Expr {
        let mut out = Expr::zero();
        for _ in 0..terms {
            let d = self.rng.gen_range(1..=max_deg.max(1));
            let mut m = Expr::constant(self.coefficient());
            for _ in 0..d {
                m = &m * &self.pick(atoms);
            }
            out += m;
        }
        out
    }

    /// The coordinates of `J^r` as expressions.
    pub fn coords(n: usize, m: usize, r: usize) -> Vec<Expr> {
        let mut out: Vec<Expr> = (1..=n as u8).map(Expr::x).collect();
        for idx in MultiIndex::up_to_order(n as u8, r) {
            for mu in 1..=m as u8 {
                out.push(Expr::coord(Coord::Jet(mu, idx.clone())));
            }
        }
        out
    }

    pub fn base_coords(n: usize) -> Vec<Expr> {
        (1..=n as u8).map(Expr::x).collect()
    }

    pub fn fiber_coords(n: usize, m: usize) -> Vec<Expr> {
        Gen::coords(n, m, 0)
    }

    /// Jet coordinates of exactly order `k`.
    pub fn jets_of_order(n: usize, m: usize, k: usize) -> Vec<Expr> {
        let mut out = Vec::new();
        for idx in MultiIndex::all_of_order(n as u8, k) {
            for mu in 1..=m as u8 {
                out.push(Expr::coord(Coord::Jet(mu, idx.clone())));
            }
        }
        out
    }

    /// A Lagrangian of order exactly `r` (for `r ≥ 1`) built from
    /// coordinates of `J^r`, plus optional extra atoms.
    pub fn lagrangian(&mut self, n: usize, m: usize, r: usize, extra: &[Expr]) -> Expr {
        let mut atoms = Gen::coords(n, m, r);
        atoms.extend_from_slice(extra);
        loop {
            let mut l = self.poly(&atoms, 4, 3);
            if r > 0 {
                let top = Gen::jets_of_order(n, m, r);
                let lower = Gen::coords(n, m, r);
                let t = self.poly_nonconstant(&top, 1, 2);
                l += &t * &self.poly(&lower, 2, 1);
            }
            if l.order() == r && l.depends_on_fiber() {
                return l;
            }
        }
    }

    pub fn projectable_field(&mut self, n: usize, m: usize) -> ProjectableField {
        let base = Gen::base_coords(n);
        let fib = Gen::fiber_coords(n, m);
        let xi = (0..n).map(|_| self.poly(&base, 2, 2)).collect();
        let big = (0..m).map(|_| self.poly(&fib, 3, 2)).collect();
        ProjectableField::new(xi, big).expect("projectable by construction")
    }

    pub fn vertical_field(&mut self, n: usize, m: usize) -> ProjectableField {
        let fib = Gen::fiber_coords(n, m);
        let big = (0..m).map(|_| self.poly(&fib, 3, 2)).collect();
        ProjectableField::vertical(n, big).expect("vertical by construction")
    }

    /// Random `degree`-form on `J^r` with `terms` basis terms.
    pub fn form(&mut self, n: usize, m: usize, r: usize, degree: usize, terms: usize) -> DiffForm {
        let coords: Vec<Coord> = {
            let mut v: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
            for idx in MultiIndex::up_to_order(n as u8, r) {
                for mu in 1..=m as u8 {
                    v.push(Coord::Jet(mu, idx.clone()));
                }
            }
            v
        };
        let atoms = Gen::coords(n, m, r);
        let mut out = DiffForm::zero(degree);
        if degree > coords.len() {
            return out;
        }
        for _ in 0..terms {
            let basis: Vec<Coord> = coords.choose_multiple(&mut self.rng, degree).cloned().collect();
            let c = self.poly(&atoms, 2, 2);
            out = out + DiffForm::term(c, basis);
        }
        out
    }

    /// Random form on `Y` (jet order 0), optionally with extra coefficient atoms.
    pub fn form_on_y(&mut self, n: usize, m: usize, degree: usize, terms: usize, extra: &[Expr]) -> DiffForm {
        let coords: Vec<Coord> = (1..=n as u8).map(Coord::x).chain((1..=m as u8).map(Coord::y)).collect();
        let mut atoms = Gen::fiber_coords(n, m);
        atoms.extend_from_slice(extra);
        let mut out = DiffForm::zero(degree);
        if degree > coords.len() {
            return out;
        }
        for _ in 0..terms {
            let basis: Vec<Coord> = coords.choose_multiple(&mut self.rng, degree).cloned().collect();
            let c = self.poly(&atoms, 2, 3);
            out = out + DiffForm::term(c, basis);
        }
        out
    }

    /// Random `n`-form on `J¹` horizontal over `Y` (no `dz` covectors).
    pub fn form_horizontal_over_y(&mut self, n: usize, m: usize, terms: usize) -> DiffForm {
        let coords: Vec<Coord> = (1..=n as u8).map(Coord::x).chain((1..=m as u8).map(Coord::y)).collect();
        let atoms = Gen::coords(n, m, 1);
        let mut out = DiffForm::zero(n);
        for _ in 0..terms {
            let basis: Vec<Coord> = coords.choose_multiple(&mut self.rng, n).cloned().collect();
            let c = self.poly(&atoms, 2, 2);
            out = out + DiffForm::term(c, basis);
        }
        out
    }

    pub fn section(&mut self, n: usize, m: usize, max_deg: u32) -> PolySection {
        let base = Gen::base_coords(n);
        let comps = (0..m).map(|_| self.poly(&base, 4, max_deg)).collect();
        PolySection::new(n, comps).expect("base-only by construction")
    }

    /// Dense random polynomial of total degree `≤ max_deg` in `args`.
    pub fn realization(&mut self, args: &[Coord], max_deg: usize) -> Expr {
        let mut out = Expr::zero();
        let k = args.len();
        for deg in 0..=max_deg {
            for combo in MultiIndex::all_of_order(k.max(1) as u8, deg) {
                if k == 0 && deg > 0 {
                    break;
                }
                let c = self.rng.gen_range(-9..=9i64);
                if c == 0 {
                    continue;
                }
                let mut m = Expr::int(c);
                for &p in combo.entries() {
                    m = &m * &Expr::coord(args[p as usize - 1].clone());
                }
                out += m;
            }
        }
        out
    }

    /// Random rational values for the given coordinates.
    pub fn point(&mut self, coords: impl IntoIterator<Item = Coord>) -> BTreeMap<Coord, Rational> {
        coords.into_iter().map(|c| (c, self.point_value())).collect()
    }
}

use super::{Atom, Coord, Expr, FunctionSymbol, MultiIndex};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Dimensions and order cap of the working jet space `J^r Y`, plus the
/// declared opaque function symbols.
///
/// `max_order` is the highest jet order any input or output of an
/// operation may reach. Operations whose result would need a higher
/// order fail with [`Error::Order`]; the caller raises the cap with
/// [`JetContext::with_max_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetContext {
    n: u8,
    m: u8,
    max_order: usize,
    functions: Vec<Arc<FunctionSymbol>>,
}

impl JetContext {
    pub fn new(n: usize, m: usize, max_order: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Context(format!("dimensions must be positive (n = {n}, m = {m})")));
        }
        if n > 9 {
            return Err(Error::Context(format!("base dimension {n} exceeds 9")));
        }
        if m > 99 {
            return Err(Error::Context(format!("fiber dimension {m} exceeds 99")));
        }
        Ok(JetContext { n: n as u8, m: m as u8, max_order, functions: Vec::new() })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn with_max_order(&self, r: usize) -> Self {
        JetContext { max_order: r, ..self.clone() }
    }

    pub fn functions(&self) -> &[Arc<FunctionSymbol>] {
        &self.functions
    }

    /// Declare a function symbol and return its handle.
    pub fn declare(&mut self, name: &str, args: Vec<Coord>) -> Result<Arc<FunctionSymbol>> {
        if self.function(name).is_some() {
            return Err(Error::Context(format!("function {name} declared twice")));
        }
        for a in &args {
            self.check_coord(a)?;
        }
        let f = FunctionSymbol::new(name, args)?;
        self.functions.push(f.clone());
        Ok(f)
    }

    pub fn function(&self, name: &str) -> Option<&Arc<FunctionSymbol>> {
        self.functions.iter().find(|f| f.name() == name)
    }

    pub fn check_coord(&self, c: &Coord) -> Result<()> {
        match c {
            Coord::Base(i) => {
                if *i == 0 || *i > self.n {
                    return Err(Error::Context(format!("{c} out of range (n = {})", self.n)));
                }
            }
            Coord::Jet(mu, idx) => {
                if *mu == 0 || *mu > self.m {
                    return Err(Error::Context(format!("{c} out of range (m = {})", self.m)));
                }
                if idx.entries().iter().any(|&i| i == 0 || i > self.n) {
                    return Err(Error::Context(format!("{c} has a base index out of range")));
                }
                if idx.order() > self.max_order {
                    return Err(Error::Order { required: idx.order(), max: self.max_order });
                }
            }
        }
        Ok(())
    }

    /// Validate every atom of `e` against this context.
    pub fn check(&self, e: &Expr) -> Result<()> {
        for a in e.atoms() {
            match a {
                Atom::Coord(c) => self.check_coord(c)?,
                Atom::Func(f) => {
                    for c in f.symbol().args() {
                        self.check_coord(c)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn ensure_order(&self, required: usize) -> Result<()> {
        if required > self.max_order {
            Err(Error::Order { required, max: self.max_order })
        } else {
            Ok(())
        }
    }

    /// Jet order needed to hold `D_i e`.
    fn order_after_derivative(e: &Expr) -> usize {
        if e.depends_on_fiber() {
            e.order() + 1
        } else {
            0
        }
    }

    /// Checked formal derivative `D_i e`.
    pub fn total_derivative(&self, e: &Expr, i: usize) -> Result<Expr> {
        self.check_base_index(i)?;
        self.ensure_order(Self::order_after_derivative(e))?;
        Ok(e.total_derivative(i as u8))
    }

    /// Checked iterated formal derivative `D_I e`.
    pub fn total_derivative_multi(&self, e: &Expr, idx: &MultiIndex) -> Result<Expr> {
        let mut acc = e.clone();
        for &i in idx.entries() {
            acc = self.total_derivative(&acc, i as usize)?;
        }
        Ok(acc)
    }

    pub fn check_base_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::Context(format!("base index {i} out of range (n = {})", self.n)))
        } else {
            Ok(())
        }
    }

    /// All base coordinates `x_1..x_n`.
    pub fn base_coords(&self) -> Vec<Coord> {
        (1..=self.n).map(Coord::x).collect()
    }

    /// All jet coordinates of exactly order `k`.
    pub fn jet_coords_of_order(&self, k: usize) -> Vec<Coord> {
        let idxs = MultiIndex::all_of_order(self.n, k);
        (1..=self.m).flat_map(|mu| idxs.iter().map(move |i| Coord::Jet(mu, i.clone()))).collect()
    }

    /// All coordinates of `J^r Y`, in canonical order.
    pub fn coords_up_to(&self, r: usize) -> Vec<Coord> {
        let mut out = self.base_coords();
        let idxs = MultiIndex::up_to_order(self.n, r);
        for mu in 1..=self.m {
            out.extend(idxs.iter().map(|i| Coord::Jet(mu, i.clone())));
        }
        out.sort();
        out
    }

    /// `ω₀ = dx_1 ∧ … ∧ dx_n` as a basis list.
    pub fn volume_basis(&self) -> Vec<Coord> {
        self.base_coords()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_counts() {
        let ctx = JetContext::new(2, 1, 2).unwrap();
        // x1, x2, y, z1, z2, z11, z12, z22
        assert_eq!(ctx.coords_up_to(2).len(), 8);
        assert_eq!(ctx.jet_coords_of_order(2).len(), 3);
    }

    #[test]
    fn range_checks() {
        let ctx = JetContext::new(2, 1, 1).unwrap();
        assert!(ctx.check(&Expr::x(3)).is_err());
        assert!(ctx.check(&Expr::y(2)).is_err());
        assert!(matches!(ctx.check(&Expr::z(1, &[1, 1])), Err(Error::Order { .. })));
        assert!(ctx.check(&Expr::z(1, &[2])).is_ok());
    }

    #[test]
    fn checked_derivative_respects_the_cap() {
        let ctx = JetContext::new(1, 1, 1).unwrap();
        assert_eq!(ctx.total_derivative(&Expr::y(1), 1).unwrap(), Expr::z(1, &[1]));
        assert!(matches!(ctx.total_derivative(&Expr::z(1, &[1]), 1), Err(Error::Order { required: 2, max: 1 })));
        // purely base-dependent expressions never need jets
        let ctx0 = JetContext::new(1, 1, 0).unwrap();
        assert_eq!(ctx0.total_derivative(&Expr::x(1).pow(2), 1).unwrap(), Expr::x(1).scale(&super::super::q(2)));
    }

    #[test]
    fn declarations() {
        let mut ctx = JetContext::new(2, 2, 1).unwrap();
        ctx.declare("f", vec![Coord::x(1), Coord::y(2)]).unwrap();
        assert!(ctx.declare("f", vec![Coord::x(1)]).is_err());
        assert!(ctx.declare("g", vec![Coord::y(3)]).is_err());
        assert!(ctx.function("f").is_some());
    }
}

//! Noether analysis: invariance, generalized invariance, conserved
//! currents, symmetric systems, and general covariance of tensor-bundle
//! Lagrangians.

use crate::error::{Error, Result};
use crate::exterior::DiffForm;
use crate::jet::{ProjectableField, TensorType};
use crate::symbolic::{Atom, Coord, Expr, FuncAtom, JetContext, MultiIndex};
use crate::variational::{euler, euler_expressions, first_variation, null_certificate, EulerSystem, Lagrangian};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// `L_Ξ = ⟨dL, j¹Ξ⟩ + L div ξ` for a first-order Lagrangian.
pub fn lie_lagrangian(ctx: &JetContext, l: &Lagrangian, field: &ProjectableField) -> Result<Expr> {
    field.check(ctx)?;
    ctx.check(l.density())?;
    if l.order() > 1 {
        return Err(Error::Domain(format!("L_Ξ needs a first-order Lagrangian, got order {}", l.order())));
    }
    ensure(ctx, 1)?;
    let jf = field.prolong_unchecked(1);
    Ok(jf.apply(l.density()) + l.density() * &field.divergence())
}

fn ensure(ctx: &JetContext, required: usize) -> Result<()> {
    if required > ctx.max_order() {
        Err(Error::Order { required, max: ctx.max_order() })
    } else {
        Ok(())
    }
}

/// Noether equation: `Ok((true, 0))` iff `L_Ξ = 0`; the residual is `L_Ξ`.
pub fn noether_check(ctx: &JetContext, l: &Lagrangian, field: &ProjectableField) -> Result<(bool, Expr)> {
    let r = lie_lagrangian(ctx, l, field)?;
    Ok((r.is_zero(), r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryVerdict {
    pub invariant: bool,
    pub generalized_invariant: bool,
    pub lie: Expr,
    pub lie_euler: EulerSystem,
    /// A closed `n`-form `η` on `Y` with `h(η) = L_Ξ ω₀`, when one was found.
    pub certificate: Option<DiffForm>,
}

/// Invariance and generalized (Noether–Bessel-Hagen) invariance.
pub fn generalized_invariance_check(
    ctx: &JetContext,
    l: &Lagrangian,
    field: &ProjectableField,
) -> Result<SymmetryVerdict> {
    let lie = lie_lagrangian(ctx, l, field)?;
    let lag = Lagrangian::new(ctx, lie.clone())?;
    let lie_euler = euler(ctx, &lag)?;
    let generalized = lie_euler.is_zero();
    let certificate = if generalized { null_certificate(ctx, &lag).ok() } else { None };
    Ok(SymmetryVerdict { invariant: lie.is_zero(), generalized_invariant: generalized, lie, lie_euler, certificate })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedCurrent {
    pub currents: Vec<Expr>,
    pub characteristics: Vec<Expr>,
    pub euler: EulerSystem,
    pub lie: Expr,
    /// `Σ D_k J_k`.
    pub divergence: Expr,
    /// `Σ D_k J_k + Σ E_μ Q_μ − L_Ξ`; zero by construction.
    pub residual: Expr,
}

/// Currents `J_k = L ξ_k + (∂L/∂z_{kμ}) Q_μ` with the off-shell identity.
pub fn conserved_current(ctx: &JetContext, l: &Lagrangian, field: &ProjectableField) -> Result<ConservedCurrent> {
    if l.order() > 1 {
        return Err(Error::Domain(format!("currents need a first-order Lagrangian, got order {}", l.order())));
    }
    let split = first_variation(ctx, l, field)?;
    let divergence: Expr = split.currents.iter().enumerate().map(|(k0, j)| j.total_derivative(k0 as u8 + 1)).sum();
    let mut residual = &divergence - &split.lie;
    for (e, q) in split.euler.components().iter().zip(&split.characteristics) {
        residual += e * q;
    }
    Ok(ConservedCurrent {
        currents: split.currents,
        characteristics: split.characteristics,
        euler: split.euler,
        lie: split.lie,
        divergence,
        residual,
    })
}

/// `E(L)` followed by `E(L_Ξ)` for each `Ξ` in `fields`.
pub fn symmetric_system(ctx: &JetContext, l: &Lagrangian, fields: &[ProjectableField]) -> Result<Vec<EulerSystem>> {
    let mut out = vec![euler(ctx, l)?];
    for f in fields {
        let lie = lie_lagrangian(ctx, l, f)?;
        out.push(euler(ctx, &Lagrangian::new(ctx, lie)?)?);
    }
    Ok(out)
}

fn check_tensor(ctx: &JetContext, sigma: &TensorType) -> Result<()> {
    let want = sigma.fiber_dim(ctx.n());
    if ctx.m() != want {
        return Err(Error::Dimension(format!(
            "tensor type {} needs fiber dimension {want}, context has m = {}",
            sigma.variance_string(),
            ctx.m()
        )));
    }
    Ok(())
}

/// `W_l = E_μ z_{lμ} + D_q(E_μ σ_{μl}^{νq} y_ν)`, one per base index `l`.
pub fn weak_critical_system(ctx: &JetContext, l: &Lagrangian, sigma: &TensorType) -> Result<Vec<Expr>> {
    check_tensor(ctx, sigma)?;
    let (n, m) = (ctx.n(), ctx.m());
    if l.order() > 2 {
        return Err(Error::Domain(format!("order {} exceeds 2", l.order())));
    }
    let e = euler(ctx, l)?;
    if !e.is_zero() {
        ensure(ctx, 2 * l.order() + 1)?;
    }
    let sc = sigma.constants(n);
    let mut out = Vec::with_capacity(n);
    for lb in 1..=n {
        let mut w = Expr::zero();
        for mu in 1..=m {
            let emu = e.get(mu);
            if emu.is_zero() {
                continue;
            }
            w += emu * &Expr::z(mu as u8, &[lb as u8]);
            for (p, nu, q, s) in sc.nonzero_for(mu) {
                if p != lb {
                    continue;
                }
                let inner = (emu * &Expr::y(nu as u8)).scale(&crate::symbolic::q(s));
                w += inner.total_derivative(q as u8);
            }
        }
        out.push(w);
    }
    Ok(out)
}

/// Coefficients of `E_C(L_{ξ_σ})` in the opaque base field `ξ` and its
/// partial derivatives up to order 3.
///
/// Entries are keyed by `(C, p, J)` with `J` a sorted multi-index: the
/// entry is the coefficient of the atom `∂_J ξ_p`. Lookups accept the
/// derivative indices in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovarianceTable {
    n: usize,
    m: usize,
    symbols: Vec<String>,
    entries: Vec<BTreeMap<(usize, MultiIndex), Expr>>,
}

impl CovarianceTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Names of the opaque functions standing for `ξ_1 … ξ_n`.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Coefficient of `∂_J ξ_p` in `E_C(L_{ξ_σ})`.
    pub fn get(&self, c: usize, p: usize, derivs: &[u8]) -> Expr {
        self.entries[c - 1].get(&(p, MultiIndex::new(derivs.iter().copied()))).cloned().unwrap_or_default()
    }

    /// `a_i^C`.
    pub fn a0(&self, c: usize, i: usize) -> Expr {
        self.get(c, i, &[])
    }

    /// All nonzero entries `(C, p, J, coefficient)`.
    pub fn nonzero(&self) -> Vec<(usize, usize, MultiIndex, Expr)> {
        let mut out = Vec::new();
        for (c0, map) in self.entries.iter().enumerate() {
            for ((p, j), e) in map {
                out.push((c0 + 1, *p, j.clone(), e.clone()));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }

    /// Rebuild `E_C(L_{ξ_σ})` for a concrete base field.
    pub fn evaluate(&self, c: usize, xi: &[Expr]) -> Expr {
        let mut out = Expr::zero();
        for ((p, j), coeff) in &self.entries[c - 1] {
            let d = j.entries().iter().fold(xi[p - 1].clone(), |acc, &k| acc.partial(&Coord::x(k)));
            out += coeff * &d;
        }
        out
    }
}

/// Declare opaque `ξ_p(x_1, …, x_n)` in a copy of `ctx`.
pub fn opaque_base_field(ctx: &JetContext) -> Result<(JetContext, Vec<Expr>, Vec<String>)> {
    let mut c = ctx.clone();
    let mut comps = Vec::new();
    let mut names = Vec::new();
    for p in 1..=ctx.n() {
        let mut name = format!("xi{p}");
        while c.function(&name).is_some() {
            name.push('_');
        }
        let sym = c.declare(&name, c.base_coords())?;
        comps.push(Expr::func(&sym));
        names.push(name);
    }
    Ok((c, comps, names))
}

/// `E_C(L_{ξ_σ})` for a first-order Lagrangian and a base field `ξ`.
pub fn covariance_expressions(ctx: &JetContext, l: &Lagrangian, sigma: &TensorType, xi: &[Expr]) -> Result<Vec<Expr>> {
    check_tensor(ctx, sigma)?;
    let lift = sigma.lift(ctx, xi)?;
    let lie = lie_lagrangian(ctx, l, &lift)?;
    ensure(ctx, 2)?;
    Ok(euler_expressions(&lie, ctx.n(), ctx.m()))
}

/// Coefficient extraction for general covariance.
pub fn covariance_system(ctx: &JetContext, l: &Lagrangian, sigma: &TensorType) -> Result<CovarianceTable> {
    check_tensor(ctx, sigma)?;
    if l.order() > 1 {
        return Err(Error::Domain(format!("covariance needs a first-order Lagrangian, got order {}", l.order())));
    }
    let (cx, xi, names) = opaque_base_field(ctx)?;
    let syms: Vec<Arc<_>> = names.iter().map(|nm| cx.function(nm).expect("declared").clone()).collect();
    let exprs = covariance_expressions(&cx, l, sigma, &xi)?;
    let is_xi = |a: &Atom| matches!(a, Atom::Func(f) if syms.iter().any(|s| Arc::ptr_eq(s, f.symbol())));
    let entries = exprs
        .par_iter()
        .map(|e| {
            let mut map = BTreeMap::new();
            for (key, coeff) in e.collect_by(is_xi) {
                let f: Option<&FuncAtom> = match key.factors() {
                    [(Atom::Func(f), 1)] => Some(f),
                    _ => None,
                };
                let f =
                    f.ok_or_else(|| Error::Internal(format!("E(L_ξ) is not linear in ξ: residual monomial {key}")))?;
                if f.deriv().order() > 3 {
                    return Err(Error::Internal(format!("derivative of ξ above order 3: {f}")));
                }
                let p = syms.iter().position(|s| Arc::ptr_eq(s, f.symbol())).expect("ξ atom") + 1;
                map.insert((p, f.deriv().clone()), coeff);
            }
            Ok(map)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CovarianceTable { n: ctx.n(), m: ctx.m(), symbols: names, entries })
}

/// True iff every entry of the covariance table vanishes.
pub fn general_covariance_check(ctx: &JetContext, l: &Lagrangian, sigma: &TensorType) -> Result<bool> {
    Ok(covariance_system(ctx, l, sigma)?.is_zero())
}

/// Euler operator with respect to the opaque base-field atoms `∂_J ξ_l`:
/// `Σ_J (−1)^{|J|} D_J (∂e/∂(∂_J ξ_l))`.
pub fn xi_euler(e: &Expr, xi_symbol: &Arc<crate::symbolic::FunctionSymbol>) -> Expr {
    let mut out = Expr::zero();
    for f in e.func_atoms() {
        if !Arc::ptr_eq(f.symbol(), xi_symbol) {
            continue;
        }
        let p = e.partial_atom(&Atom::Func(f.clone()));
        let idx = MultiIndex::new(f.deriv_coords().iter().map(|c| match c {
            Coord::Base(i) => *i,
            Coord::Jet(..) => unreachable!("ξ depends on base coordinates only"),
        }));
        let d = p.total_derivative_multi(&idx);
        if idx.order().is_multiple_of(2) {
            out += d;
        } else {
            out -= d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{q, qr};

    fn ctx(n: usize, m: usize, r: usize) -> JetContext {
        JetContext::new(n, m, r).unwrap()
    }

    fn free(c: &JetContext) -> Lagrangian {
        Lagrangian::new(c, Expr::z(1, &[1]).pow(2).scale(&qr(1, 2))).unwrap()
    }

    #[test]
    fn lie_examples() {
        let c = ctx(1, 1, 3);
        let shift = ProjectableField::vertical(1, vec![Expr::one()]).unwrap();
        assert!(lie_lagrangian(&c, &free(&c), &shift).unwrap().is_zero());
        let boost = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        assert_eq!(lie_lagrangian(&c, &free(&c), &boost).unwrap(), Expr::z(1, &[1]));
        let dil = ProjectableField::new(vec![Expr::x(1)], vec![Expr::zero()]).unwrap();
        assert_eq!(lie_lagrangian(&c, &free(&c), &dil).unwrap(), Expr::z(1, &[1]).pow(2).scale(&qr(-1, 2)));
    }

    #[test]
    fn noether_examples() {
        let c = ctx(1, 1, 3);
        let t = ProjectableField::translation(1, 1, 1);
        assert!(noether_check(&c, &free(&c), &t).unwrap().0);
        let boost = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        assert_eq!(noether_check(&c, &free(&c), &boost).unwrap(), (false, Expr::z(1, &[1])));
        assert!(noether_check(&c, &free(&c), &ProjectableField::zero(1, 1)).unwrap().0);
    }

    #[test]
    fn invariance_classes() {
        let c = ctx(1, 1, 3);
        let boost = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        let v = generalized_invariance_check(&c, &free(&c), &boost).unwrap();
        assert!(!v.invariant && v.generalized_invariant);
        assert_eq!(v.certificate, Some(DiffForm::d_coord(Coord::y(1))));
        let scale = ProjectableField::vertical(1, vec![Expr::y(1)]).unwrap();
        let v = generalized_invariance_check(&c, &free(&c), &scale).unwrap();
        assert_eq!(v.lie, Expr::z(1, &[1]).pow(2));
        assert_eq!(v.lie_euler.get(1), &Expr::z(1, &[1, 1]).scale(&q(-2)));
        assert!(!v.generalized_invariant);
        let t = ProjectableField::translation(1, 1, 1);
        let v = generalized_invariance_check(&c, &free(&c), &t).unwrap();
        assert!(v.invariant && v.generalized_invariant);
    }

    #[test]
    fn currents() {
        let c = ctx(1, 1, 3);
        let shift = ProjectableField::vertical(1, vec![Expr::one()]).unwrap();
        let j = conserved_current(&c, &free(&c), &shift).unwrap();
        assert_eq!(j.currents, vec![Expr::z(1, &[1])]);
        assert!(j.residual.is_zero());
        let t = ProjectableField::translation(1, 1, 1);
        let j = conserved_current(&c, &free(&c), &t).unwrap();
        assert_eq!(j.currents, vec![Expr::z(1, &[1]).pow(2).scale(&qr(-1, 2))]);
        let j = conserved_current(&c, &free(&c), &ProjectableField::zero(1, 1)).unwrap();
        assert!(j.currents[0].is_zero());
    }

    #[test]
    fn symmetric_systems() {
        let c = ctx(1, 1, 3);
        assert_eq!(symmetric_system(&c, &free(&c), &[]).unwrap().len(), 1);
        let t = ProjectableField::translation(1, 1, 1);
        let boost = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        let s = symmetric_system(&c, &free(&c), &[t, boost]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[1].is_zero() && s[2].is_zero());
    }

    #[test]
    fn weak_critical_for_tangent_bundle_line() {
        let c = ctx(1, 1, 3);
        let w = weak_critical_system(&c, &free(&c), &TensorType::tangent()).unwrap();
        let e = -Expr::z(1, &[1, 1]);
        let expect = &e * &Expr::z(1, &[1]) + (&e * &Expr::y(1)).total_derivative(1);
        assert_eq!(w, vec![expect]);
        let null = Lagrangian::new(&c, Expr::z(1, &[1])).unwrap();
        assert!(weak_critical_system(&c, &null, &TensorType::tangent()).unwrap()[0].is_zero());
    }

    #[test]
    fn covariance_examples() {
        let c = ctx(1, 1, 3);
        let zero = Lagrangian::new(&c, Expr::zero()).unwrap();
        assert!(general_covariance_check(&c, &zero, &TensorType::tangent()).unwrap());
        let y = Lagrangian::new(&c, Expr::y(1)).unwrap();
        let table = covariance_system(&c, &y, &TensorType::tangent()).unwrap();
        assert!(!table.is_zero());
        // L = y: L_ξ = ξ' y + y ξ' = 2 y ξ', E(L_ξ) = 2 ξ'
        assert_eq!(table.get(1, 1, &[1]), Expr::int(2));
        assert!(table.a0(1, 1).is_zero());
    }

    #[test]
    fn covariance_rejects_wrong_fiber() {
        let c = ctx(2, 1, 3);
        let y = Lagrangian::new(&c, Expr::y(1)).unwrap();
        assert!(matches!(covariance_system(&c, &y, &TensorType::tangent()), Err(Error::Dimension(_))));
    }
}

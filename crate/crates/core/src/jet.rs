//! Projectable vector fields, their jet prolongations, and tensor lifts.

use crate::error::{Error, Result};
use crate::exterior::JetField;
use crate::symbolic::{Coord, Expr, JetContext, MultiIndex};
use std::collections::BTreeMap;
use std::fmt;

/// `Ξ = ξ_k ∂/∂x_k + Ξ_μ ∂/∂y_μ` with `ξ_k = ξ_k(x)` and `Ξ_μ = Ξ_μ(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectableField {
    base: Vec<Expr>,
    fiber: Vec<Expr>,
}

impl ProjectableField {
    pub fn new(base: Vec<Expr>, fiber: Vec<Expr>) -> Result<Self> {
        for (k, e) in base.iter().enumerate() {
            if let Some(c) = e.dependencies().into_iter().find(|c| !c.is_base()) {
                return Err(Error::Domain(format!("base component {} of a projectable field depends on {c}", k + 1)));
            }
        }
        for (mu, e) in fiber.iter().enumerate() {
            if let Some(c) = e.dependencies().into_iter().find(|c| c.order() > 0) {
                return Err(Error::Domain(format!("fiber component {} of a projectable field depends on {c}", mu + 1)));
            }
        }
        Ok(ProjectableField { base, fiber })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        ProjectableField { base: vec![Expr::zero(); n], fiber: vec![Expr::zero(); m] }
    }

    /// `∂/∂x_i` on a space with `n` base and `m` fiber dimensions.
    pub fn translation(n: usize, m: usize, i: usize) -> Self {
        let mut f = ProjectableField::zero(n, m);
        f.base[i - 1] = Expr::one();
        f
    }

    /// A vertical field `Ξ_μ ∂/∂y_μ`.
    pub fn vertical(n: usize, fiber: Vec<Expr>) -> Result<Self> {
        ProjectableField::new(vec![Expr::zero(); n], fiber)
    }

    pub fn check(&self, ctx: &JetContext) -> Result<()> {
        if self.base.len() != ctx.n() || self.fiber.len() != ctx.m() {
            return Err(Error::Dimension(format!(
                "field has {} base and {} fiber components, context is n = {}, m = {}",
                self.base.len(),
                self.fiber.len(),
                ctx.n(),
                ctx.m()
            )));
        }
        for e in self.base.iter().chain(&self.fiber) {
            ctx.check(e)?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn m(&self) -> usize {
        self.fiber.len()
    }

    /// `ξ_k`, 1-based.
    pub fn xi(&self, k: usize) -> &Expr {
        &self.base[k - 1]
    }

    /// `Ξ_μ`, 1-based.
    pub fn big_xi(&self, mu: usize) -> &Expr {
        &self.fiber[mu - 1]
    }

    pub fn base_components(&self) -> &[Expr] {
        &self.base
    }

    pub fn fiber_components(&self) -> &[Expr] {
        &self.fiber
    }

    pub fn is_vertical(&self) -> bool {
        self.base.iter().all(Expr::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_vertical() && self.fiber.iter().all(Expr::is_zero)
    }

    /// `div ξ = Σ ∂ξ_k/∂x_k` relative to `ω₀`.
    pub fn divergence(&self) -> Expr {
        self.base.iter().enumerate().map(|(k, e)| e.partial(&Coord::x(k as u8 + 1))).sum()
    }

    /// The field itself, as a field on `Y = J⁰Y`.
    pub fn as_jet_field(&self) -> JetField {
        let base = self.base.iter().enumerate().map(|(k, e)| (Coord::x(k as u8 + 1), e.clone()));
        let fiber = self.fiber.iter().enumerate().map(|(mu, e)| (Coord::y(mu as u8 + 1), e.clone()));
        JetField::from_components(base.chain(fiber))
    }

    /// Fiber components `Ξ_{Iμ}` of `j^r Ξ` for `|I| ≤ r`, keyed by coordinate.
    fn prolonged_components(&self, r: usize) -> BTreeMap<Coord, Expr> {
        let n = self.n() as u8;
        // ∂ξ_l/∂x_i
        let dxi: Vec<Vec<Expr>> =
            (1..=n).map(|i| self.base.iter().map(|xl| xl.partial(&Coord::x(i))).collect()).collect();
        let mut out = BTreeMap::new();
        for (mu0, e) in self.fiber.iter().enumerate() {
            out.insert(Coord::y(mu0 as u8 + 1), e.clone());
        }
        for s in 1..=r {
            for idx in MultiIndex::all_of_order(n, s) {
                let i = idx.max_entry().expect("non-empty");
                let parent = idx.without(i).expect("contains i");
                for mu in 1..=self.m() as u8 {
                    let prev = &out[&Coord::Jet(mu, parent.clone())];
                    let mut v = prev.total_derivative(i);
                    for (l0, d) in dxi[i as usize - 1].iter().enumerate() {
                        if d.is_zero() {
                            continue;
                        }
                        let z = Expr::coord(Coord::Jet(mu, parent.with(l0 as u8 + 1)));
                        v -= &z * d;
                    }
                    out.insert(Coord::Jet(mu, idx.clone()), v);
                }
            }
        }
        out
    }

    /// The prolongation `j^r Ξ` as a field on `J^r Y`.
    pub fn prolong(&self, ctx: &JetContext, r: usize) -> Result<JetField> {
        self.check(ctx)?;
        if r > ctx.max_order() {
            return Err(Error::Order { required: r, max: ctx.max_order() });
        }
        Ok(self.prolong_unchecked(r))
    }

    pub(crate) fn prolong_unchecked(&self, r: usize) -> JetField {
        let base = self.base.iter().enumerate().map(|(k, e)| (Coord::x(k as u8 + 1), e.clone()));
        JetField::from_components(base.chain(self.prolonged_components(r)))
    }

    /// Characteristic `Q_μ = Ξ_μ − z_{iμ} ξ_i`.
    pub fn characteristic(&self, mu: usize) -> Expr {
        let mut q = self.fiber[mu - 1].clone();
        for (i0, xi) in self.base.iter().enumerate() {
            if !xi.is_zero() {
                q -= &Expr::z(mu as u8, &[i0 as u8 + 1]) * xi;
            }
        }
        q
    }

    /// Vertical part of `j^{r+1} Ξ` restricted to `J^r` coordinates:
    /// `Q_{Iμ} = Ξ_{Iμ} − Σ_i z_{(I∪i)μ} ξ_i` for `|I| ≤ r`.
    pub fn vertical_part(&self, ctx: &JetContext, r: usize) -> Result<JetField> {
        self.check(ctx)?;
        if r + 1 > ctx.max_order() {
            return Err(Error::Order { required: r + 1, max: ctx.max_order() });
        }
        Ok(self.vertical_part_unchecked(r))
    }

    pub(crate) fn vertical_part_unchecked(&self, r: usize) -> JetField {
        let comps = self.prolonged_components(r);
        JetField::from_components(comps.into_iter().map(|(c, v)| {
            let mut q = v;
            for (i0, xi) in self.base.iter().enumerate() {
                if !xi.is_zero() {
                    q -= &Expr::coord(c.shifted(i0 as u8 + 1).expect("jet")) * xi;
                }
            }
            (c, q)
        }))
    }

    /// Lie bracket of projectable fields.
    pub fn bracket(&self, other: &ProjectableField) -> Result<ProjectableField> {
        if self.n() != other.n() || self.m() != other.m() {
            return Err(Error::Dimension("bracket of fields on different spaces".into()));
        }
        let b = self.as_jet_field().bracket(&other.as_jet_field());
        let base = (1..=self.n() as u8).map(|i| b.component(&Coord::x(i))).collect();
        let fiber = (1..=self.m() as u8).map(|mu| b.component(&Coord::y(mu))).collect();
        ProjectableField::new(base, fiber)
    }

    pub fn to_latex(&self) -> String {
        let f = self.as_jet_field();
        if f.is_zero() {
            return "0".into();
        }
        f.components()
            .map(|(c, e)| {
                let coeff = if e.len() > 1 { format!("\\left({}\\right)", e.to_latex()) } else { e.to_latex() };
                format!("{coeff} \\frac{{\\partial}}{{\\partial {}}}", c.to_latex())
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for ProjectableField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_jet_field().fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// Variance signature of a tensor bundle over the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorType {
    slots: Vec<Variance>,
    cov_sign: i8,
}

impl TensorType {
    pub fn new(slots: Vec<Variance>, cov_sign: i8) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Context("a tensor type needs at least one slot".into()));
        }
        if cov_sign != 1 && cov_sign != -1 {
            return Err(Error::Context(format!("cov_sign must be +1 or -1, got {cov_sign}")));
        }
        Ok(TensorType { slots, cov_sign })
    }

    /// The tangent bundle `TX`.
    pub fn tangent() -> Self {
        TensorType { slots: vec![Variance::Contravariant], cov_sign: 1 }
    }

    /// Parse a variance string such as `"+-"` (`+` contravariant, `-` covariant).
    pub fn parse(variance: &str, cov_sign: i8) -> Result<Self> {
        let slots = variance
            .chars()
            .map(|ch| match ch {
                '+' => Ok(Variance::Contravariant),
                '-' => Ok(Variance::Covariant),
                other => Err(Error::Context(format!("bad variance mark {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        TensorType::new(slots, cov_sign)
    }

    pub fn slots(&self) -> &[Variance] {
        &self.slots
    }

    pub fn cov_sign(&self) -> i8 {
        self.cov_sign
    }

    pub fn variance_string(&self) -> String {
        self.slots
            .iter()
            .map(|v| match v {
                Variance::Contravariant => '+',
                Variance::Covariant => '-',
            })
            .collect()
    }

    pub fn fiber_dim(&self, n: usize) -> usize {
        n.pow(self.slots.len() as u32)
    }

    /// Multi-label `A = (a₁, …, a_k)` of fiber index `μ`.
    pub fn label(&self, mu: usize, n: usize) -> Vec<usize> {
        let k = self.slots.len();
        let mut rest = mu - 1;
        let mut out = vec![0; k];
        for t in (0..k).rev() {
            out[t] = rest % n + 1;
            rest /= n;
        }
        out
    }

    /// Fiber index `μ = 1 + Σ (a_t − 1) n^{k−t}` of a multi-label.
    pub fn index(&self, label: &[usize], n: usize) -> usize {
        1 + label.iter().fold(0, |acc, &a| acc * n + (a - 1))
    }

    /// `σ_{Ap}^{Bq}` for fiber indices `A`, `B` and base indices `p`, `q`.
    pub fn sigma(&self, n: usize, a: usize, p: usize, b: usize, q: usize) -> i64 {
        let la = self.label(a, n);
        let lb = self.label(b, n);
        let mut total = 0;
        for (t, v) in self.slots.iter().enumerate() {
            let others_equal = (0..la.len()).all(|u| u == t || la[u] == lb[u]);
            if !others_equal {
                continue;
            }
            match v {
                Variance::Contravariant => {
                    if la[t] == p && lb[t] == q {
                        total += 1;
                    }
                }
                Variance::Covariant => {
                    if lb[t] == p && la[t] == q {
                        total += self.cov_sign as i64;
                    }
                }
            }
        }
        total
    }

    /// Dense table of `σ` values for base dimension `n`.
    pub fn constants(&self, n: usize) -> SigmaConstants {
        let m = self.fiber_dim(n);
        let mut values = vec![0; m * n * m * n];
        for a in 1..=m {
            for p in 1..=n {
                for b in 1..=m {
                    for q in 1..=n {
                        values[(((a - 1) * n + (p - 1)) * m + (b - 1)) * n + (q - 1)] = self.sigma(n, a, p, b, q);
                    }
                }
            }
        }
        SigmaConstants { n, m, values }
    }

    /// Natural lift `ξ_σ` of a base field `ξ` to the tensor bundle.
    pub fn lift(&self, ctx: &JetContext, xi: &[Expr]) -> Result<ProjectableField> {
        let n = ctx.n();
        if xi.len() != n {
            return Err(Error::Dimension(format!("base field has {} components, n = {n}", xi.len())));
        }
        if ctx.m() != self.fiber_dim(n) {
            return Err(Error::Dimension(format!(
                "tensor type {} needs fiber dimension {}, context has m = {}",
                self.variance_string(),
                self.fiber_dim(n),
                ctx.m()
            )));
        }
        let sc = self.constants(n);
        let dxi: Vec<Vec<Expr>> = xi.iter().map(|e| (1..=n as u8).map(|q| e.partial(&Coord::x(q))).collect()).collect();
        let mut fiber = Vec::with_capacity(ctx.m());
        for a in 1..=ctx.m() {
            let mut v = Expr::zero();
            for (p, b, q, s) in sc.nonzero_for(a) {
                let d = &dxi[p - 1][q - 1];
                if d.is_zero() {
                    continue;
                }
                v += (d * &Expr::y(b as u8)).scale(&crate::symbolic::q(s));
            }
            fiber.push(v);
        }
        ProjectableField::new(xi.to_vec(), fiber)
    }
}

/// Dense table `(A, p, B, q) ↦ σ_{Ap}^{Bq}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaConstants {
    n: usize,
    m: usize,
    values: Vec<i64>,
}

impl SigmaConstants {
    pub fn get(&self, a: usize, p: usize, b: usize, q: usize) -> i64 {
        self.values[(((a - 1) * self.n + (p - 1)) * self.m + (b - 1)) * self.n + (q - 1)]
    }

    /// Nonzero entries `(p, B, q, σ)` with first index `A`.
    pub fn nonzero_for(&self, a: usize) -> Vec<(usize, usize, usize, i64)> {
        let mut out = Vec::new();
        for p in 1..=self.n {
            for b in 1..=self.m {
                for q in 1..=self.n {
                    let s = self.get(a, p, b, q);
                    if s != 0 {
                        out.push((p, b, q, s));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::q;

    fn ctx(n: usize, m: usize, r: usize) -> JetContext {
        JetContext::new(n, m, r).unwrap()
    }

    #[test]
    fn prolong_vertical_boost() {
        let f = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        let j = f.prolong(&ctx(1, 1, 1), 1).unwrap();
        assert_eq!(j.component(&Coord::y(1)), Expr::x(1));
        assert_eq!(j.component(&Coord::z(1, &[1])), Expr::one());
    }

    #[test]
    fn prolong_scaling() {
        let f = ProjectableField::new(vec![Expr::x(1)], vec![Expr::zero()]).unwrap();
        let j = f.prolong(&ctx(1, 1, 2), 2).unwrap();
        assert_eq!(j.component(&Coord::x(1)), Expr::x(1));
        assert_eq!(j.component(&Coord::z(1, &[1])), -Expr::z(1, &[1]));
        assert_eq!(j.component(&Coord::z(1, &[1, 1])), Expr::z(1, &[1, 1]).scale(&q(-2)));
    }

    #[test]
    fn constant_vertical_field_has_no_higher_components() {
        let f = ProjectableField::vertical(2, vec![Expr::int(3)]).unwrap();
        let j = f.prolong(&ctx(2, 1, 3), 3).unwrap();
        assert_eq!(j.components().count(), 1);
    }

    #[test]
    fn prolong_respects_the_order_cap() {
        let f = ProjectableField::translation(1, 1, 1);
        assert!(matches!(f.prolong(&ctx(1, 1, 1), 2), Err(Error::Order { .. })));
        assert!(f.vertical_part(&ctx(1, 1, 1), 1).is_err());
    }

    #[test]
    fn characteristics() {
        let f = ProjectableField::new(vec![Expr::x(1)], vec![Expr::zero()]).unwrap();
        assert_eq!(f.characteristic(1), -(&Expr::x(1) * &Expr::z(1, &[1])));
        let t = ProjectableField::translation(2, 1, 1);
        assert_eq!(t.characteristic(1), -Expr::z(1, &[1]));
        let v = ProjectableField::vertical(1, vec![Expr::y(1)]).unwrap();
        let c = ctx(1, 1, 3);
        assert_eq!(v.vertical_part(&c, 2).unwrap(), v.prolong(&c, 2).unwrap());
    }

    #[test]
    fn brackets() {
        let a = ProjectableField::translation(1, 1, 1);
        let b = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        assert_eq!(a.bracket(&b).unwrap(), ProjectableField::vertical(1, vec![Expr::one()]).unwrap());
        assert!(b.bracket(&b).unwrap().is_zero());
        let s = ProjectableField::new(vec![Expr::x(1)], vec![Expr::zero()]).unwrap();
        let neg = ProjectableField::new(vec![-Expr::one()], vec![Expr::zero()]).unwrap();
        assert_eq!(s.bracket(&a).unwrap(), neg);
    }

    #[test]
    fn labels_round_trip() {
        let t = TensorType::parse("+-+", 1).unwrap();
        for mu in 1..=27 {
            assert_eq!(t.index(&t.label(mu, 3), 3), mu);
        }
        assert_eq!(t.label(1, 3), vec![1, 1, 1]);
        assert_eq!(t.label(2, 3), vec![1, 1, 2]);
    }

    #[test]
    fn tangent_lift_matches_the_classical_formula() {
        let c = ctx(2, 2, 1);
        let xi = vec![&Expr::x(1) * &Expr::x(2), Expr::x(1).pow(2)];
        let lift = TensorType::tangent().lift(&c, &xi).unwrap();
        // Ξ_i = ∂ξ_i/∂x_j y_j
        let mut expect = Vec::new();
        for i in 1..=2u8 {
            let mut v = Expr::zero();
            for j in 1..=2u8 {
                v += &xi[i as usize - 1].partial(&Coord::x(j)) * &Expr::y(j);
            }
            expect.push(v);
        }
        assert_eq!(lift.fiber_components(), &expect[..]);
    }

    #[test]
    fn covariant_sign_convention() {
        let c = ctx(2, 2, 1);
        let xi = vec![Expr::x(2), Expr::zero()];
        let plus = TensorType::parse("-", 1).unwrap().lift(&c, &xi).unwrap();
        let minus = TensorType::parse("-", -1).unwrap().lift(&c, &xi).unwrap();
        // ∂ξ_1/∂x_2 = 1 is the only nonzero derivative; it feeds component A = q = 2 from B = p = 1
        assert_eq!(plus.big_xi(2), &Expr::y(1));
        assert_eq!(minus.big_xi(2), &-Expr::y(1));
        assert!(plus.big_xi(1).is_zero());
    }

    #[test]
    fn lift_of_a_translation_is_trivial() {
        let c = ctx(2, 4, 1);
        let lift = TensorType::parse("+-", 1).unwrap().lift(&c, &[Expr::one(), Expr::zero()]).unwrap();
        assert!(lift.fiber_components().iter().all(Expr::is_zero));
        assert!(TensorType::parse("+-", 1).unwrap().lift(&ctx(2, 2, 1), &[Expr::one(), Expr::zero()]).is_err());
    }
}

//! Horizontalization, Lepage equivalents, the Euler operator, null
//! Lagrangians and the first variation.

use crate::error::{Error, Result};
use crate::exterior::{Basis, DiffForm, JetField, PolySection};
use crate::jet::ProjectableField;
use crate::symbolic::{q, qr, Atom, Coord, Expr, JetContext, MultiIndex, Rational};
use itertools::Itertools;
use std::collections::BTreeMap;
use std::fmt;

/// A Lagrangian density `L`, read as the form `λ = L ω₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lagrangian {
    density: Expr,
}

impl Lagrangian {
    pub fn new(ctx: &JetContext, density: Expr) -> Result<Self> {
        ctx.check(&density)?;
        Ok(Lagrangian { density })
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }

    pub fn order(&self) -> usize {
        self.density.order()
    }

    pub fn form(&self, n: usize) -> DiffForm {
        DiffForm::volume(n).scale(&self.density)
    }
}

/// Euler expressions `E_μ`, one per fiber index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSystem {
    components: Vec<Expr>,
}

impl EulerSystem {
    pub fn new(components: Vec<Expr>) -> Self {
        EulerSystem { components }
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// `E_μ`, 1-based.
    pub fn get(&self, mu: usize) -> &Expr {
        &self.components[mu - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    /// `Σ E_μ (dy_μ − z_{kμ} dx_k)`.
    pub fn contact_form(&self, n: usize) -> DiffForm {
        let mut out = DiffForm::zero(1);
        for (mu0, e) in self.components.iter().enumerate() {
            out = out + contact(mu0 as u8 + 1, &MultiIndex::empty(), n).scale(e);
        }
        out
    }

    /// `Σ E_μ dy_μ ∧ ω₀`.
    pub fn source_form(&self, n: usize) -> DiffForm {
        let vol = DiffForm::volume(n);
        let mut out = DiffForm::zero(n + 1);
        for (mu0, e) in self.components.iter().enumerate() {
            out = out + DiffForm::d_coord(Coord::y(mu0 as u8 + 1)).wedge(&vol).scale(e);
        }
        out
    }
}

impl fmt::Display for EulerSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (mu0, e) in self.components.iter().enumerate() {
            if mu0 > 0 {
                writeln!(f)?;
            }
            write!(f, "E{} = {e}", mu0 + 1)?;
        }
        Ok(())
    }
}

/// The decomposition `L_Ξ = Σ E_μ Q_μ + Σ D_k J_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationSplit {
    pub lie: Expr,
    pub euler: EulerSystem,
    pub characteristics: Vec<Expr>,
    pub currents: Vec<Expr>,
}

/// Output of [`canonical_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSplit {
    /// `h(ρ) = G ω₀`.
    pub g: Expr,
    /// `A[k-1][ν-1] = A_{kν}`.
    pub a: Vec<Vec<Expr>>,
    /// `E_ν = ∂G/∂y_ν − D_k ∂G/∂z_{kν}`.
    pub euler: EulerSystem,
}

impl CanonicalSplit {
    pub fn is_lepagean(&self) -> bool {
        self.a.iter().flatten().all(Expr::is_zero)
    }

    /// Nonzero `A_{kν}` as `((k, ν), A)`.
    pub fn offending(&self) -> Vec<((usize, usize), Expr)> {
        let mut out = Vec::new();
        for (k0, row) in self.a.iter().enumerate() {
            for (nu0, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    out.push(((k0 + 1, nu0 + 1), a.clone()));
                }
            }
        }
        out
    }
}

fn ensure(ctx: &JetContext, required: usize) -> Result<()> {
    if required > ctx.max_order() {
        Err(Error::Order { required, max: ctx.max_order() })
    } else {
        Ok(())
    }
}

/// `dz_{Iμ} − z_{(I∪k)μ} dx_k`.
pub fn contact(mu: u8, idx: &MultiIndex, n: usize) -> DiffForm {
    let c = Coord::Jet(mu, idx.clone());
    let mut out = DiffForm::d_coord(c.clone());
    for k in 1..=n as u8 {
        let z = Expr::coord(c.shifted(k).expect("jet"));
        out = out - DiffForm::d_coord(Coord::x(k)).scale(&z);
    }
    out
}

/// `Σ_k (D_k c) dx_k`, the horizontal part of `dc`.
pub fn horizontal_differential(c: &Coord, n: usize) -> DiffForm {
    match c {
        Coord::Base(_) => DiffForm::d_coord(c.clone()),
        Coord::Jet(..) => {
            let mut out = DiffForm::zero(1);
            for k in 1..=n as u8 {
                out = out + DiffForm::d_coord(Coord::x(k)).scale(&Expr::coord(c.shifted(k).expect("jet")));
            }
            out
        }
    }
}

/// `ω₀` with `dx_i` replaced by `θ` in place: `θ ∧ i(∂/∂x_i) ω₀`.
pub fn slot_form(theta: &DiffForm, i: usize, n: usize) -> DiffForm {
    let inner = DiffForm::volume(n).contract(&JetField::coordinate(Coord::x(i as u8))).expect("n ≥ 1");
    theta.wedge(&inner)
}

fn basis_order(b: &Basis) -> usize {
    b.coords().iter().map(Coord::order).max().unwrap_or(0)
}

fn required_for_h(rho: &DiffForm) -> usize {
    rho.terms()
        .map(|(b, c)| {
            let needs = if b.is_horizontal() { 0 } else { basis_order(b) + 1 };
            needs.max(c.order())
        })
        .max()
        .unwrap_or(0)
}

/// Horizontalization `h`.
pub fn horizontalize(ctx: &JetContext, rho: &DiffForm) -> Result<DiffForm> {
    let n = ctx.n();
    if rho.degree() > n {
        return Ok(DiffForm::zero(rho.degree()));
    }
    ensure(ctx, required_for_h(rho))?;
    Ok(horizontalize_unchecked(rho, n))
}

pub(crate) fn horizontalize_unchecked(rho: &DiffForm, n: usize) -> DiffForm {
    if rho.degree() > n {
        return DiffForm::zero(rho.degree());
    }
    let mut cache: BTreeMap<Coord, DiffForm> = BTreeMap::new();
    let mut out = DiffForm::zero(rho.degree());
    for (b, c) in rho.terms() {
        let mut acc = DiffForm::scalar(c.clone());
        for v in b.coords() {
            let hv = cache.entry(v.clone()).or_insert_with(|| horizontal_differential(v, n));
            acc = acc.wedge(hv);
            if acc.is_zero() {
                break;
            }
        }
        out = out + acc;
    }
    out
}

/// Pseudovertical part `p(ρ) = ρ − h(ρ)`.
pub fn pseudovertical(ctx: &JetContext, rho: &DiffForm) -> Result<DiffForm> {
    Ok(rho - &horizontalize(ctx, rho)?)
}

/// `h̃` on `(n+1)`-forms: keep one factor, horizontalize the rest, over
/// every choice of the kept factor.
pub fn h_tilde(ctx: &JetContext, rho: &DiffForm) -> Result<DiffForm> {
    let n = ctx.n();
    if rho.degree() != n + 1 {
        return Err(Error::Degree { expected: format!("{}", n + 1), found: rho.degree() });
    }
    ensure(ctx, required_for_h(rho))?;
    Ok(h_tilde_unchecked(rho, n))
}

pub(crate) fn h_tilde_unchecked(rho: &DiffForm, n: usize) -> DiffForm {
    let mut cache: BTreeMap<Coord, DiffForm> = BTreeMap::new();
    let mut out = DiffForm::zero(rho.degree());
    for (b, c) in rho.terms() {
        let coords = b.coords();
        for (j, kept) in coords.iter().enumerate() {
            if kept.is_base() {
                // the remaining n factors would add a second dx of some index
                continue;
            }
            let mut acc = DiffForm::d_coord(kept.clone()).scale(c);
            for (l, v) in coords.iter().enumerate() {
                if l == j {
                    continue;
                }
                let hv = cache.entry(v.clone()).or_insert_with(|| horizontal_differential(v, n));
                acc = acc.wedge(hv);
                if acc.is_zero() {
                    break;
                }
            }
            out = if j % 2 == 1 { out - acc } else { out + acc };
        }
    }
    out
}

/// Jet order needed to hold the Euler expressions of `L`.
fn euler_order(l: &Expr) -> usize {
    if l.depends_on_fiber() {
        2 * l.order()
    } else {
        0
    }
}

/// `E_σ = Σ_I (−1)^{|I|} D_I (∂L/∂z_{Iσ})`, without order bookkeeping.
pub fn euler_expressions(l: &Expr, n: usize, m: usize) -> Vec<Expr> {
    let r = l.order();
    let idxs = MultiIndex::up_to_order(n as u8, r);
    (1..=m as u8)
        .map(|sigma| {
            let mut e = Expr::zero();
            for idx in &idxs {
                let p = l.partial(&Coord::Jet(sigma, idx.clone()));
                if p.is_zero() {
                    continue;
                }
                let d = p.total_derivative_multi(idx);
                if idx.order() % 2 == 0 {
                    e += d;
                } else {
                    e -= d;
                }
            }
            e
        })
        .collect()
}

/// The Euler operator.
pub fn euler(ctx: &JetContext, l: &Lagrangian) -> Result<EulerSystem> {
    ctx.check(l.density())?;
    ensure(ctx, euler_order(l.density()))?;
    Ok(EulerSystem::new(euler_expressions(l.density(), ctx.n(), ctx.m())))
}

/// The Lepage equivalent `Θ(λ)` of a Lagrangian of order at most 2.
pub fn lepage_theta(ctx: &JetContext, l: &Lagrangian) -> Result<DiffForm> {
    let (n, m) = (ctx.n(), ctx.m());
    let lag = l.density();
    if l.order() > 2 {
        return Err(Error::Domain(format!("Θ needs a Lagrangian of order ≤ 2, got order {}", l.order())));
    }
    ensure(ctx, if lag.depends_on_fiber() { l.order() + 1 } else { 0 })?;
    let half = qr(1, 2);
    let mut theta = l.form(n);
    for sigma in 1..=m as u8 {
        for i in 1..=n as u8 {
            let mut fi = lag.partial(&Coord::z(sigma, &[i]));
            fi -= lag.partial(&Coord::z(sigma, &[i, i])).total_derivative(i);
            for j in (1..=n as u8).filter(|&j| j != i) {
                fi -= lag.partial(&Coord::z(sigma, &[i, j])).total_derivative(j).scale(&half);
            }
            if !fi.is_zero() {
                let w = slot_form(&contact(sigma, &MultiIndex::empty(), n), i as usize, n);
                theta = theta + w.scale(&fi);
            }
            for j in 1..=n as u8 {
                let fij = if i == j {
                    lag.partial(&Coord::z(sigma, &[i, i])).scale(&q(2))
                } else {
                    lag.partial(&Coord::z(sigma, &[i, j]))
                };
                if fij.is_zero() {
                    continue;
                }
                let w = slot_form(&contact(sigma, &MultiIndex::single(j), n), i as usize, n);
                theta = theta + w.scale(&fij.scale(&half));
            }
        }
    }
    Ok(theta)
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Sign of the permutation taking `0..k` to `perm`.
fn perm_sign(perm: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `dx_1 ∧ … ∧ dy_{σ_t} (slot s_t) ∧ … ∧ dx_n`.
fn slot_basis(slots: &[u8], sigmas: &[u8], n: usize) -> DiffForm {
    let mut coords: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
    for (s, sg) in slots.iter().zip(sigmas) {
        coords[*s as usize - 1] = Coord::y(*sg);
    }
    // DiffForm::term sorts covectors, tracking the sign
    DiffForm::term(Expr::one(), coords)
}

/// A coefficient of the multilinear expansion of `L` in first-order
/// jet coordinates: slots `s₁ < … < s_p`, fibers `σ₁ … σ_p`.
struct MultilinearTerm {
    slots: Vec<u8>,
    sigmas: Vec<u8>,
    coeff: Expr,
}

impl MultilinearTerm {
    fn vars(&self) -> Vec<Coord> {
        self.slots.iter().zip(&self.sigmas).map(|(s, sg)| Coord::z(*sg, &[*s])).collect()
    }
}

/// `∂^p (Π vars) / ∂targets` for distinct `vars`: the product of the
/// remaining variables when `targets ⊂ vars`, else zero.
fn derivative_of_product(vars: &[Coord], targets: &[Coord]) -> Option<Expr> {
    let mut rest: Vec<&Coord> = vars.iter().collect();
    for t in targets {
        let k = rest.iter().position(|v| *v == t)?;
        rest.remove(k);
    }
    Some(rest.into_iter().fold(Expr::one(), |acc, v| &acc * &Expr::coord(v.clone())))
}

/// The Lepage equivalent `Δ(λ)` of a first-order Lagrangian.
pub fn lepage_delta(ctx: &JetContext, l: &Lagrangian) -> Result<DiffForm> {
    let (n, m) = (ctx.n(), ctx.m());
    if l.order() > 1 {
        return Err(Error::Domain(format!("Δ needs a first-order Lagrangian, got order {}", l.order())));
    }
    ctx.check(l.density())?;
    let lag = l.density();
    let mut found: Vec<MultilinearTerm> = Vec::new();
    for p in (1..=n).rev() {
        let norm = Rational::new(1.into(), factorial(p).into());
        let mut level = Vec::new();
        for slots in (1..=n as u8).combinations(p) {
            for sigmas in (0..p).map(|_| 1..=m as u8).multi_cartesian_product() {
                let mut f = Expr::zero();
                for perm in (0..p).permutations(p) {
                    let targets: Vec<Coord> =
                        perm.iter().zip(&sigmas).map(|(&t, &sg)| Coord::z(sg, &[slots[t]])).collect();
                    let mut d = targets.iter().fold(lag.clone(), |acc, t| acc.partial(t));
                    for hi in &found {
                        if let Some(rest) = derivative_of_product(&hi.vars(), &targets) {
                            d -= &hi.coeff * &rest;
                        }
                    }
                    if perm_sign(&perm) < 0 {
                        f -= d;
                    } else {
                        f += d;
                    }
                }
                let f = f.scale(&norm);
                if !f.is_zero() {
                    level.push(MultilinearTerm { slots: slots.clone(), sigmas, coeff: f });
                }
            }
        }
        found.extend(level);
    }
    let mut f0 = lag.clone();
    let mut delta = DiffForm::zero(n);
    for t in &found {
        let prod = t.vars().into_iter().fold(Expr::one(), |acc, v| &acc * &Expr::coord(v));
        f0 -= &t.coeff * &prod;
        let w = Rational::new(1.into(), factorial(t.slots.len()).into());
        delta = delta + slot_basis(&t.slots, &t.sigmas, n).scale(&t.coeff.scale(&w));
    }
    Ok(delta + DiffForm::volume(n).scale(&f0))
}

/// Split `h̃(dρ)` for an `n`-form `ρ` on `J¹` horizontal over `Y`.
pub fn canonical_split(ctx: &JetContext, rho: &DiffForm) -> Result<CanonicalSplit> {
    let (n, m) = (ctx.n(), ctx.m());
    if rho.degree() != n {
        return Err(Error::Degree { expected: n.to_string(), found: rho.degree() });
    }
    for (b, c) in rho.terms() {
        if let Some(v) = b.coords().iter().find(|v| v.order() > 0) {
            return Err(Error::Horizontality(format!("basis covector d{v} present in term {b}")));
        }
        if c.order() > 1 {
            return Err(Error::Domain(format!("coefficient of {b} has jet order {}", c.order())));
        }
    }
    ensure(ctx, if rho.is_zero() { 0 } else { 2 })?;
    let vol = Basis::sorted((1..=n as u8).map(Coord::x).collect()).expect("distinct").0;
    let mut g = Expr::zero();
    let mut a = vec![vec![Expr::zero(); m]; n];
    for (b, c) in rho.terms() {
        let hb = horizontalize_unchecked(&DiffForm::term(Expr::one(), b.coords().to_vec()), n);
        let p = hb.coefficient(&vol);
        if p.is_zero() {
            continue;
        }
        g += c * &p;
        for (k0, row) in a.iter_mut().enumerate() {
            for (nu0, akn) in row.iter_mut().enumerate() {
                let dc = c.partial(&Coord::z(nu0 as u8 + 1, &[k0 as u8 + 1]));
                if !dc.is_zero() {
                    *akn += &dc * &p;
                }
            }
        }
    }
    let euler: Vec<Expr> = (1..=m as u8)
        .map(|nu| {
            let mut e = g.partial(&Coord::y(nu));
            for k in 1..=n as u8 {
                e -= g.partial(&Coord::z(nu, &[k])).total_derivative(k);
            }
            e
        })
        .collect();

    let volume = DiffForm::volume(n);
    let mut rebuilt = DiffForm::zero(n + 1);
    for nu in 1..=m as u8 {
        let mut coeff = euler[nu as usize - 1].clone();
        for k in 1..=n as u8 {
            let akn = &a[k as usize - 1][nu as usize - 1];
            coeff += akn.total_derivative(k);
            let dz = DiffForm::d_coord(Coord::z(nu, &[k])).wedge(&volume);
            rebuilt = rebuilt + dz.scale(akn);
        }
        rebuilt = rebuilt + DiffForm::d_coord(Coord::y(nu)).wedge(&volume).scale(&coeff);
    }
    let direct = h_tilde_unchecked(&rho.ext_d(), n);
    if direct != rebuilt {
        return Err(Error::Internal(format!(
            "canonical split does not reconstruct h̃(dρ): difference {}",
            &direct - &rebuilt
        )));
    }
    Ok(CanonicalSplit { g, a, euler: EulerSystem::new(euler) })
}

/// Lepage test: `Ok(split)` carries the offending `A_{kν}` when false.
pub fn is_lepagean(ctx: &JetContext, rho: &DiffForm) -> Result<(bool, CanonicalSplit)> {
    let split = canonical_split(ctx, rho)?;
    Ok((split.is_lepagean(), split))
}

/// True iff every Euler expression vanishes identically.
pub fn null_test(ctx: &JetContext, l: &Lagrangian) -> Result<bool> {
    Ok(euler(ctx, l)?.is_zero())
}

/// The null Lagrangian `L` with `L ω₀ = h(dη)` for an `(n−1)`-form `η` on `Y`.
pub fn null_from_form(ctx: &JetContext, eta: &DiffForm) -> Result<Lagrangian> {
    let n = ctx.n();
    if eta.degree() + 1 != n {
        return Err(Error::Degree { expected: format!("{}", n - 1), found: eta.degree() });
    }
    if eta.order() > 0 {
        return Err(Error::Domain("the form must live on Y (jet order 0)".into()));
    }
    let h = horizontalize(ctx, &eta.ext_d())?;
    let vol = Basis::sorted((1..=n as u8).map(Coord::x).collect()).expect("distinct").0;
    Lagrangian::new(ctx, h.coefficient(&vol))
}

fn first_order_z(a: &Atom) -> Option<(u8, u8)> {
    match a {
        Atom::Coord(Coord::Jet(mu, idx)) if idx.order() == 1 => Some((idx.entries()[0], *mu)),
        _ => None,
    }
}

/// A closed `n`-form `ρ` on `Y` with `h(ρ) = L ω₀`, for a null `L`.
pub fn null_certificate(ctx: &JetContext, l: &Lagrangian) -> Result<DiffForm> {
    let n = ctx.n();
    ctx.check(l.density())?;
    if l.order() > 1 {
        return Err(Error::Structure(format!(
            "null Lagrangian of order {} has no multilinear first-order expansion",
            l.order()
        )));
    }
    let mut rho = DiffForm::zero(n);
    for (key, coeff) in l.density().collect_by(|a| first_order_z(a).is_some()) {
        let mut pairs: Vec<(u8, u8)> = Vec::new();
        for (atom, p) in key.factors() {
            let sm = first_order_z(atom).expect("collected");
            if *p > 1 || pairs.iter().any(|(s, _)| *s == sm.0) {
                return Err(Error::Structure(format!("monomial {key} is not multilinear in distinct columns")));
            }
            pairs.push(sm);
        }
        pairs.sort();
        let slots: Vec<u8> = pairs.iter().map(|p| p.0).collect();
        let sigmas: Vec<u8> = pairs.iter().map(|p| p.1).collect();
        let w = Rational::new(1.into(), factorial(slots.len()).into());
        rho = rho + slot_basis(&slots, &sigmas, n).scale(&coeff.scale(&w));
    }
    if !null_test(ctx, l)? {
        return Err(Error::Domain("the Lagrangian is not null; no certificate exists".into()));
    }
    if !rho.ext_d().is_zero() {
        return Err(Error::Internal(format!("assembled certificate is not closed: dρ = {}", rho.ext_d())));
    }
    let back = horizontalize_unchecked(&rho, n);
    if back != l.form(n) {
        return Err(Error::Internal(format!("h(ρ) = {back} differs from λ")));
    }
    Ok(rho)
}

/// `L_Ξ`: the coefficient of `ω₀` in `ϑ(j^r Ξ)(L ω₀)`.
pub fn lie_density(l: &Expr, field: &ProjectableField, n: usize) -> Expr {
    let r = l.order();
    let jf = field.prolong_unchecked(r);
    let vol = Basis::sorted((1..=n as u8).map(Coord::x).collect()).expect("distinct").0;
    DiffForm::volume(n).scale(l).lie_derivative(&jf).coefficient(&vol)
}

/// First variation: `L_Ξ = Σ E_μ Q_μ + Σ D_k J_k`, checked exactly.
pub fn first_variation(ctx: &JetContext, l: &Lagrangian, field: &ProjectableField) -> Result<VariationSplit> {
    let (n, m) = (ctx.n(), ctx.m());
    field.check(ctx)?;
    ctx.check(l.density())?;
    let lag = l.density();
    let r = l.order();
    ensure(ctx, (2 * r).max(1))?;
    let lie = lie_density(lag, field, n);
    let euler = EulerSystem::new(euler_expressions(lag, n, m));
    let chars: Vec<Expr> = (1..=m).map(|mu| field.characteristic(mu)).collect();
    let mut currents: Vec<Expr> = field.base_components().iter().map(|xi| lag * xi).collect();
    for (mu0, qmu) in chars.iter().enumerate() {
        for idx in MultiIndex::up_to_order(n as u8, r) {
            if idx.is_empty() {
                continue;
            }
            let p_i = lag.partial(&Coord::Jet(mu0 as u8 + 1, idx.clone()));
            if p_i.is_zero() {
                continue;
            }
            let e = idx.entries();
            for t in 0..e.len() {
                let after = MultiIndex::new(e[t + 1..].iter().copied());
                let before = MultiIndex::new(e[..t].iter().copied());
                let term = &qmu.total_derivative_multi(&after) * &p_i.total_derivative_multi(&before);
                let slot = &mut currents[e[t] as usize - 1];
                if t % 2 == 0 {
                    *slot += term;
                } else {
                    *slot -= term;
                }
            }
        }
    }
    let mut rhs = Expr::zero();
    for (e, qm) in euler.components().iter().zip(&chars) {
        rhs += e * qm;
    }
    for (k0, j) in currents.iter().enumerate() {
        rhs += j.total_derivative(k0 as u8 + 1);
    }
    if rhs != lie {
        return Err(Error::Internal(format!("first variation identity fails by {}", &lie - &rhs)));
    }
    Ok(VariationSplit { lie, euler, characteristics: chars, currents })
}

/// Euler expressions evaluated along `j^{2r} γ`.
pub fn extremal_residual(ctx: &JetContext, l: &Lagrangian, gamma: &PolySection) -> Result<Vec<Expr>> {
    if gamma.n() != ctx.n() || gamma.m() != ctx.m() {
        return Err(Error::Dimension("section does not match the context".into()));
    }
    let e = euler(ctx, l)?;
    e.components().iter().map(|c| gamma.pull(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, m: usize, r: usize) -> JetContext {
        JetContext::new(n, m, r).unwrap()
    }

    fn z(mu: u8, idx: &[u8]) -> Expr {
        Expr::z(mu, idx)
    }

    fn dx(i: u8) -> DiffForm {
        DiffForm::d_coord(Coord::x(i))
    }

    fn dy(mu: u8) -> DiffForm {
        DiffForm::d_coord(Coord::y(mu))
    }

    #[test]
    fn horizontalization_examples() {
        let c = ctx(2, 2, 2);
        let h = horizontalize(&c, &dy(1)).unwrap();
        assert_eq!(h, dx(1).scale(&z(1, &[1])) + dx(2).scale(&z(1, &[2])));
        let lam = DiffForm::volume(2).scale(&z(1, &[1]));
        assert_eq!(horizontalize(&c, &lam).unwrap(), lam);
        let h = horizontalize(&c, &dy(1).wedge(&dy(2))).unwrap();
        let expect = &z(1, &[1]) * &z(2, &[2]) - &z(1, &[2]) * &z(2, &[1]);
        assert_eq!(h, DiffForm::volume(2).scale(&expect));
    }

    #[test]
    fn pseudovertical_examples() {
        let c = ctx(2, 1, 2);
        assert_eq!(pseudovertical(&c, &dy(1)).unwrap(), contact(1, &MultiIndex::empty(), 2));
        assert!(pseudovertical(&c, &dx(1)).unwrap().is_zero());
    }

    #[test]
    fn h_tilde_examples() {
        let c = ctx(2, 2, 2);
        let vol = DiffForm::volume(2);
        let a = dy(1).wedge(&vol);
        assert_eq!(h_tilde(&c, &a).unwrap(), a);
        let b = DiffForm::d_coord(Coord::z(2, &[1])).wedge(&vol);
        assert_eq!(h_tilde(&c, &b).unwrap(), b);
        let rho = dy(1).wedge(&dy(2)).wedge(&dx(2));
        let expect = (dy(1).scale(&z(2, &[1])) - dy(2).scale(&z(1, &[1]))).wedge(&vol);
        assert_eq!(h_tilde(&c, &rho).unwrap(), expect);
        assert!(h_tilde(&c, &vol).is_err());
    }

    #[test]
    fn euler_examples() {
        let c = ctx(2, 1, 2);
        let l = (&z(1, &[1]).pow(2) + &z(1, &[2]).pow(2)).scale(&qr(1, 2));
        let e = euler(&c, &Lagrangian::new(&c, l).unwrap()).unwrap();
        assert_eq!(e.get(1), &-(z(1, &[1, 1]) + z(1, &[2, 2])));
        let e = euler(&c, &Lagrangian::new(&c, Expr::y(1)).unwrap()).unwrap();
        assert_eq!(e.get(1), &Expr::one());
        let c4 = ctx(1, 1, 4);
        let l = z(1, &[1, 1]).pow(2).scale(&qr(1, 2));
        let e = euler(&c4, &Lagrangian::new(&c4, l.clone()).unwrap()).unwrap();
        assert_eq!(e.get(1), &z(1, &[1, 1, 1, 1]));
        let c3 = ctx(1, 1, 3);
        assert!(matches!(euler(&c3, &Lagrangian::new(&c4, l).unwrap()), Err(Error::Order { .. })));
    }

    #[test]
    fn poincare_cartan_form() {
        let c = ctx(1, 1, 3);
        let l = &z(1, &[1]).pow(2) * &Expr::y(1);
        let theta = lepage_theta(&c, &Lagrangian::new(&c, l.clone()).unwrap()).unwrap();
        let pl = l.partial(&Coord::z(1, &[1]));
        let expect = dx(1).scale(&l) + (dy(1) - dx(1).scale(&z(1, &[1]))).scale(&pl);
        assert_eq!(theta, expect);
    }

    #[test]
    fn theta_of_second_order_free_lagrangian() {
        let c = ctx(1, 1, 4);
        let l = Lagrangian::new(&c, z(1, &[1, 1]).pow(2).scale(&qr(1, 2))).unwrap();
        let theta = lepage_theta(&c, &l).unwrap();
        let ht = h_tilde(&c, &theta.ext_d()).unwrap();
        assert_eq!(ht, dy(1).wedge(&dx(1)).scale(&z(1, &[1, 1, 1, 1])));
        assert_eq!(horizontalize(&c, &theta).unwrap(), l.form(1));
    }

    #[test]
    fn delta_in_one_dimension() {
        let c = ctx(1, 2, 2);
        let l = &(&z(1, &[1]) * &z(2, &[1])) * &Expr::y(1) + Expr::x(1);
        let d = lepage_delta(&c, &Lagrangian::new(&c, l.clone()).unwrap()).unwrap();
        let mut f0 = l.clone();
        let mut expect = DiffForm::zero(1);
        for mu in 1..=2 {
            let g = l.partial(&Coord::z(mu, &[1]));
            f0 -= &g * &z(mu, &[1]);
            expect = expect + dy(mu).scale(&g);
        }
        assert_eq!(d, expect + dx(1).scale(&f0));
    }

    #[test]
    fn delta_of_affine_lagrangian() {
        let c = ctx(2, 1, 2);
        let a = &Expr::x(1) * &Expr::y(1);
        let l = &a + &(&Expr::x(2) * &z(1, &[1]));
        let d = lepage_delta(&c, &Lagrangian::new(&c, l).unwrap()).unwrap();
        let expect = DiffForm::volume(2).scale(&a) + dy(1).wedge(&dx(2)).scale(&Expr::x(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn delta_inverts_h_on_forms_from_y() {
        let c = ctx(2, 2, 2);
        let rho0 = dy(1).wedge(&dy(2)).scale(&Expr::y(1));
        let l = horizontalize(&c, &rho0).unwrap();
        let lag = Lagrangian::new(&c, l.coefficient_of(vec![Coord::x(1), Coord::x(2)])).unwrap();
        assert_eq!(lepage_delta(&c, &lag).unwrap(), rho0);
    }

    #[test]
    fn split_examples() {
        let c = ctx(1, 1, 2);
        let l = z(1, &[1]).pow(2).scale(&qr(1, 2));
        let s = canonical_split(&c, &DiffForm::volume(1).scale(&l)).unwrap();
        assert_eq!(s.g, l);
        assert_eq!(s.a[0][0], z(1, &[1]));
        assert!(!s.is_lepagean());
        let d = lepage_delta(&c, &Lagrangian::new(&c, l).unwrap()).unwrap();
        assert!(is_lepagean(&c, &d).unwrap().0);
        let s = canonical_split(&ctx(2, 1, 2), &DiffForm::volume(2).scale(&Expr::x(1))).unwrap();
        assert!(s.is_lepagean() && s.euler.is_zero());
        assert!(matches!(canonical_split(&c, &DiffForm::d_coord(Coord::z(1, &[1]))), Err(Error::Horizontality(_))));
    }

    #[test]
    fn null_lagrangian_examples() {
        let mut c = ctx(1, 1, 2);
        let g = c.declare("g", vec![Coord::x(1), Coord::y(1)]).unwrap();
        let l = Expr::func(&g).total_derivative(1);
        assert!(null_test(&c, &Lagrangian::new(&c, l.clone()).unwrap()).unwrap());
        let made = null_from_form(&c, &DiffForm::scalar(Expr::func(&g))).unwrap();
        assert_eq!(made.density(), &l);
        let cert = null_certificate(&c, &made).unwrap();
        assert_eq!(cert, DiffForm::scalar(Expr::func(&g)).ext_d());
        let free = Lagrangian::new(&c, z(1, &[1]).pow(2).scale(&qr(1, 2))).unwrap();
        assert!(!null_test(&c, &free).unwrap());
        let zero = Lagrangian::new(&c, Expr::zero()).unwrap();
        assert!(null_certificate(&c, &zero).unwrap().is_zero());
    }

    #[test]
    fn quadratic_column_is_a_structure_error() {
        let c = ctx(1, 1, 4);
        let l = Lagrangian::new(&c, (&Expr::y(1) * &z(1, &[1])).total_derivative(1)).unwrap();
        assert!(null_test(&c, &l).unwrap());
        assert!(matches!(null_certificate(&c, &l), Err(Error::Structure(_))));
        let free = Lagrangian::new(&c, z(1, &[1]).pow(2).scale(&qr(1, 2))).unwrap();
        assert!(matches!(null_certificate(&c, &free), Err(Error::Structure(_))));
        let y = Lagrangian::new(&c, Expr::y(1)).unwrap();
        assert!(matches!(null_certificate(&c, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_form_from_function_gives_zero() {
        let mut c = ctx(2, 1, 2);
        let g = c.declare("G", vec![Coord::x(1), Coord::x(2), Coord::y(1)]).unwrap();
        let eta = DiffForm::scalar(Expr::func(&g)).ext_d();
        assert!(null_from_form(&c, &eta).unwrap().density().is_zero());
    }

    #[test]
    fn first_variation_examples() {
        let c = ctx(1, 1, 2);
        let l = Lagrangian::new(&c, z(1, &[1]).pow(2).scale(&qr(1, 2))).unwrap();
        let shift = ProjectableField::vertical(1, vec![Expr::one()]).unwrap();
        let s = first_variation(&c, &l, &shift).unwrap();
        assert!(s.lie.is_zero());
        assert_eq!(s.characteristics, vec![Expr::one()]);
        assert_eq!(s.euler.get(1), &-z(1, &[1, 1]));
        assert_eq!(s.currents, vec![z(1, &[1])]);
        let t = ProjectableField::translation(1, 1, 1);
        let s = first_variation(&c, &l, &t).unwrap();
        assert_eq!(s.characteristics, vec![-z(1, &[1])]);
        assert_eq!(s.currents, vec![z(1, &[1]).pow(2).scale(&qr(-1, 2))]);
        let s = first_variation(&c, &l, &ProjectableField::zero(1, 1)).unwrap();
        assert!(s.currents[0].is_zero() && s.lie.is_zero());
    }

    #[test]
    fn second_order_first_variation() {
        let c = ctx(2, 1, 4);
        let l = &z(1, &[1, 2]).pow(2) * &Expr::y(1) + &z(1, &[1, 1]) * &Expr::x(2);
        let f = ProjectableField::new(vec![Expr::x(2), Expr::x(1).pow(2)], vec![&Expr::y(1) * &Expr::x(1)]).unwrap();
        first_variation(&c, &Lagrangian::new(&c, l).unwrap(), &f).unwrap();
    }

    #[test]
    fn residual_examples() {
        let c = ctx(1, 1, 2);
        let l = Lagrangian::new(&c, z(1, &[1]).pow(2).scale(&qr(1, 2))).unwrap();
        let line = PolySection::new(1, vec![Expr::int(3) + Expr::x(1).scale(&q(5))]).unwrap();
        assert!(extremal_residual(&c, &l, &line).unwrap()[0].is_zero());
        let par = PolySection::new(1, vec![Expr::x(1).pow(2)]).unwrap();
        assert_eq!(extremal_residual(&c, &l, &par).unwrap()[0], Expr::int(-2));
    }

    #[test]
    fn counterexample_variants() {
        let mut c = ctx(2, 2, 2);
        let f = c.declare("f", vec![Coord::x(1), Coord::x(2), Coord::y(1), Coord::y(2)]).unwrap();
        let fe = Expr::func(&f);
        let d = |v: Coord| fe.partial(&v);
        let corrected = &(d(Coord::x(2)) + &d(Coord::y(2)) * &z(2, &[2])) * &z(1, &[1])
            - &(d(Coord::x(1)) + &d(Coord::y(2)) * &z(2, &[1])) * &z(1, &[2]);
        let printed = &(d(Coord::x(2)) + &d(Coord::y(2)) * &z(2, &[2])) * &z(1, &[1])
            - &(d(Coord::x(1)) + &d(Coord::y(2)) * &z(2, &[1])) * &z(2, &[1]);
        assert!(null_test(&c, &Lagrangian::new(&c, corrected.clone()).unwrap()).unwrap());
        assert!(!null_test(&c, &Lagrangian::new(&c, printed).unwrap()).unwrap());
        let h = horizontalize(&c, &DiffForm::scalar(fe.clone()).wedge(&dy(1)).ext_d()).unwrap();
        assert_eq!(h.coefficient_of(vec![Coord::x(1), Coord::x(2)]), -corrected);
    }
}

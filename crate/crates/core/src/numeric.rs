//! Numeric oracles: evaluation, randomized zero checks, a flow-based
//! prolongation oracle and a discrete-action gradient check.
//!
//! None of this decides anything symbolic; it cross-checks the exact
//! engine from an independent direction.

use crate::error::{Error, Result};
use crate::exterior::PolySection;
use crate::jet::ProjectableField;
use crate::random::Gen;
use crate::symbolic::{Atom, Coord, Expr, MultiIndex, Rational};
use crate::variational::euler_expressions;
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Coordinate values plus polynomial realizations of opaque functions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointAssignment {
    pub values: BTreeMap<Coord, Rational>,
    pub realizations: BTreeMap<String, Expr>,
}

/// Exact evaluation.
pub fn eval(e: &Expr, a: &PointAssignment) -> Result<Rational> {
    let grounded = e.realize(&a.realizations);
    if let Some(f) = grounded.func_atoms().into_iter().next() {
        return Err(Error::Ungrounded(format!("no realization for {}", f.symbol().name())));
    }
    let mut total = Rational::zero();
    for (m, c) in grounded.terms() {
        let mut v = c.clone();
        for (atom, p) in m.factors() {
            let Atom::Coord(coord) = atom else { unreachable!("grounded") };
            let x = a.values.get(coord).ok_or_else(|| Error::Ungrounded(format!("no value for {coord}")))?;
            v *= num_traits::pow(x.clone(), *p as usize);
        }
        total += v;
    }
    Ok(total)
}

/// Floating-point evaluation (function atoms must already be realized).
pub fn eval_f64(e: &Expr, values: &BTreeMap<Coord, f64>) -> Result<f64> {
    let vars: Vec<Coord> = values.keys().cloned().collect();
    let c = CompiledExpr::new(e, &vars)?;
    let x: Vec<f64> = vars.iter().map(|v| values[v]).collect();
    Ok(c.eval(&x))
}

/// A polynomial compiled against a fixed variable ordering.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledExpr {
    pub fn new(e: &Expr, vars: &[Coord]) -> Result<Self> {
        let pos: HashMap<&Coord, usize> = vars.iter().enumerate().map(|(k, c)| (c, k)).collect();
        let mut terms = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            let mut fs = Vec::new();
            for (atom, p) in m.factors() {
                match atom {
                    Atom::Coord(coord) => {
                        let k = *pos.get(coord).ok_or_else(|| Error::Ungrounded(format!("no slot for {coord}")))?;
                        fs.push((k, *p));
                    }
                    Atom::Func(f) => {
                        return Err(Error::Ungrounded(format!("opaque function {} in numeric evaluation", f)));
                    }
                }
            }
            terms.push((c.to_f64().unwrap_or(f64::NAN), fs));
        }
        Ok(CompiledExpr { terms })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, fs)| fs.iter().fold(*c, |acc, &(k, p)| acc * x[k].powi(p as i32))).sum()
    }

    fn eval_series(&self, space: &SeriesSpace, x: &[Vec<f64>]) -> Vec<f64> {
        let mut out = space.zero();
        let mut powers: HashMap<(usize, u32), Vec<f64>> = HashMap::new();
        for (c, fs) in &self.terms {
            let mut acc = space.constant(*c);
            for &(k, p) in fs {
                let pw = powers.entry((k, p)).or_insert_with(|| space.pow(&x[k], p)).clone();
                acc = space.mul(&acc, &pw);
            }
            for (o, a) in out.iter_mut().zip(&acc) {
                *o += a;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroVerdict {
    ProbablyZero { trials: usize },
    Nonzero { point: PointAssignment, value: Rational },
}

impl ZeroVerdict {
    pub fn is_probably_zero(&self) -> bool {
        matches!(self, ZeroVerdict::ProbablyZero { .. })
    }
}

/// Evaluate at random rational points with random cubic realizations.
pub fn randomized_zero_check(e: &Expr, trials: usize, seed: u64) -> Result<ZeroVerdict> {
    let mut g = Gen::new(seed);
    let symbols: BTreeMap<String, Vec<Coord>> =
        e.func_atoms().into_iter().map(|f| (f.symbol().name().to_string(), f.symbol().args().to_vec())).collect();
    let coords: BTreeSet<Coord> = e.dependencies();
    for _ in 0..trials {
        let realizations = symbols.iter().map(|(k, args)| (k.clone(), g.realization(args, 3))).collect();
        let point = PointAssignment { values: g.point(coords.iter().cloned()), realizations };
        let value = eval(e, &point)?;
        if !value.is_zero() {
            return Ok(ZeroVerdict::Nonzero { point, value });
        }
    }
    Ok(ZeroVerdict::ProbablyZero { trials })
}

/// Truncated multivariate power series in `n` variables up to total degree `r`.
struct SeriesSpace {
    n: usize,
    exps: Vec<Vec<u32>>,
    mul_table: Vec<(usize, usize, usize)>,
}

impl SeriesSpace {
    fn new(n: usize, r: usize) -> Self {
        let mut exps = Vec::new();
        for deg in 0..=r {
            for idx in MultiIndex::all_of_order(n as u8, deg) {
                let mut e = vec![0u32; n];
                for &i in idx.entries() {
                    e[i as usize - 1] += 1;
                }
                exps.push(e);
            }
        }
        let index: HashMap<Vec<u32>, usize> = exps.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        let mut mul_table = Vec::new();
        for (a, ea) in exps.iter().enumerate() {
            for (b, eb) in exps.iter().enumerate() {
                let s: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if let Some(&c) = index.get(&s) {
                    mul_table.push((a, b, c));
                }
            }
        }
        SeriesSpace { n, exps, mul_table }
    }

    fn len(&self) -> usize {
        self.exps.len()
    }

    fn zero(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    fn constant(&self, c: f64) -> Vec<f64> {
        let mut s = self.zero();
        s[0] = c;
        s
    }

    /// `c + δ_i`.
    fn variable(&self, i: usize, c: f64) -> Vec<f64> {
        let mut s = self.constant(c);
        if let Some(k) = self.exps.iter().position(|e| e.iter().sum::<u32>() == 1 && e[i] == 1) {
            s[k] = 1.0;
        }
        s
    }

    fn linear_index(&self, i: usize) -> usize {
        self.exps.iter().position(|e| e.iter().sum::<u32>() == 1 && e[i] == 1).expect("r ≥ 1")
    }

    fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = self.zero();
        for &(i, j, k) in &self.mul_table {
            out[k] += a[i] * b[j];
        }
        out
    }

    fn pow(&self, a: &[f64], p: u32) -> Vec<f64> {
        let mut acc = self.constant(1.0);
        for _ in 0..p {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn axpy(&self, y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
        y.iter().zip(x).map(|(u, v)| u + a * v).collect()
    }

    /// Substitute series `sub[i]` (without constant term) for `δ_i` in `s`.
    fn compose(&self, s: &[f64], sub: &[Vec<f64>]) -> Vec<f64> {
        let mut out = self.zero();
        let mut powers: Vec<Vec<Vec<f64>>> = sub.iter().map(|d| vec![self.constant(1.0), d.clone()]).collect();
        for (k, e) in self.exps.iter().enumerate() {
            if s[k] == 0.0 {
                continue;
            }
            let mut term = self.constant(s[k]);
            for i in 0..self.n {
                while powers[i].len() <= e[i] as usize {
                    let next = self.mul(powers[i].last().expect("non-empty"), &sub[i]);
                    powers[i].push(next);
                }
                term = self.mul(&term, &powers[i][e[i] as usize]);
            }
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowOutcome {
    /// Components of the prolonged field, keyed by jet coordinate.
    Jet(BTreeMap<Coord, f64>),
    Inconclusive(String),
}

struct CompiledField {
    base: Vec<CompiledExpr>,
    fiber: Vec<CompiledExpr>,
}

/// The `r`-jet of the transformed section at the transformed point after
/// flowing for time `t`, as a map over the coordinates of `J^r`.
fn transported_jet(
    field: &CompiledField,
    gamma: &[CompiledExpr],
    x0: &[f64],
    n: usize,
    m: usize,
    r: usize,
    t: f64,
) -> Option<BTreeMap<Coord, f64>> {
    let space = SeriesSpace::new(n, r.max(1));
    let delta: Vec<Vec<f64>> = (0..n).map(|i| space.variable(i, x0[i])).collect();
    let mut state: Vec<Vec<f64>> = delta.clone();
    for g in gamma {
        state.push(g.eval_series(&space, &delta));
    }
    let rhs = |s: &[Vec<f64>]| -> Vec<Vec<f64>> {
        field.base.iter().chain(&field.fiber).map(|c| c.eval_series(&space, s)).collect()
    };
    let steps = ((t.abs() / 1e-3).ceil() as usize).max(1);
    let dt = t / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(&state);
        let s2: Vec<Vec<f64>> = state.iter().zip(&k1).map(|(s, k)| space.axpy(s, dt / 2.0, k)).collect();
        let k2 = rhs(&s2);
        let s3: Vec<Vec<f64>> = state.iter().zip(&k2).map(|(s, k)| space.axpy(s, dt / 2.0, k)).collect();
        let k3 = rhs(&s3);
        let s4: Vec<Vec<f64>> = state.iter().zip(&k3).map(|(s, k)| space.axpy(s, dt, k)).collect();
        let k4 = rhs(&s4);
        for (i, s) in state.iter_mut().enumerate() {
            for (j, v) in s.iter_mut().enumerate() {
                *v += dt / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
            }
        }
    }
    if state.iter().flatten().any(|v| !v.is_finite() || v.abs() > 1e12) {
        return None;
    }
    // X(δ) = x_t + A δ + N(δ); invert to δ(w) with w = X − x_t
    let lin: Vec<usize> = (0..n).map(|i| space.linear_index(i)).collect();
    let a = DMatrix::from_fn(n, n, |k, i| state[k][lin[i]]);
    let ainv = a.try_inverse()?;
    let w: Vec<Vec<f64>> = (0..n).map(|i| space.variable(i, 0.0)).collect();
    let nonlinear: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut s = state[k].clone();
            s[0] = 0.0;
            for &li in &lin {
                s[li] = 0.0;
            }
            s
        })
        .collect();
    let mut d: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).fold(space.zero(), |acc, k| space.axpy(&acc, ainv[(i, k)], &w[k]))).collect();
    for _ in 0..r {
        let nd: Vec<Vec<f64>> = nonlinear.iter().map(|s| space.compose(s, &d)).collect();
        let resid: Vec<Vec<f64>> = (0..n).map(|k| space.axpy(&w[k], -1.0, &nd[k])).collect();
        d = (0..n).map(|i| (0..n).fold(space.zero(), |acc, k| space.axpy(&acc, ainv[(i, k)], &resid[k]))).collect();
    }
    let mut out = BTreeMap::new();
    for (k, s) in state[..n].iter().enumerate() {
        out.insert(Coord::x(k as u8 + 1), s[0]);
    }
    for mu in 0..m {
        let yw = space.compose(&state[n + mu], &d);
        for (k, e) in space.exps.iter().enumerate() {
            let order: u32 = e.iter().sum();
            if order as usize > r {
                continue;
            }
            let fact: f64 = e.iter().map(|&p| (1..=p).product::<u32>() as f64).product();
            let idx =
                MultiIndex::new(e.iter().enumerate().flat_map(|(i, &p)| std::iter::repeat_n(i as u8 + 1, p as usize)));
            out.insert(Coord::Jet(mu as u8 + 1, idx), yw[k] * fact);
        }
    }
    Some(out)
}

/// Numeric `j^r Ξ` at `j^r_{x0} γ`: flow the section by `Ξ` for `±h_t`,
/// read off the transported jets, and take the symmetric difference.
pub fn flow_prolong_oracle(
    field: &ProjectableField,
    gamma: &PolySection,
    x0: &[f64],
    r: usize,
    h_t: f64,
) -> Result<FlowOutcome> {
    let (n, m) = (field.n(), field.m());
    if gamma.n() != n || gamma.m() != m || x0.len() != n {
        return Err(Error::Dimension("field, section and point dimensions differ".into()));
    }
    let vars: Vec<Coord> = (1..=n as u8).map(Coord::x).chain((1..=m as u8).map(Coord::y)).collect();
    let compiled = CompiledField {
        base: field.base_components().iter().map(|e| CompiledExpr::new(e, &vars)).collect::<Result<_>>()?,
        fiber: field.fiber_components().iter().map(|e| CompiledExpr::new(e, &vars)).collect::<Result<_>>()?,
    };
    let gvars: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
    let gc: Vec<CompiledExpr> =
        gamma.components().iter().map(|e| CompiledExpr::new(e, &gvars)).collect::<Result<_>>()?;
    let plus = transported_jet(&compiled, &gc, x0, n, m, r, h_t);
    let minus = transported_jet(&compiled, &gc, x0, n, m, r, -h_t);
    let (Some(plus), Some(minus)) = (plus, minus) else {
        return Ok(FlowOutcome::Inconclusive("flow left the chart or became singular".into()));
    };
    Ok(FlowOutcome::Jet(plus.iter().map(|(c, p)| (c.clone(), (p - minus[c]) / (2.0 * h_t))).collect()))
}

/// Values of the coordinates of `J^r` along `j^r γ` at `x0`.
pub fn section_jet_f64(gamma: &PolySection, x0: &[f64], r: usize) -> Result<BTreeMap<Coord, f64>> {
    let gvars: Vec<Coord> = (1..=gamma.n() as u8).map(Coord::x).collect();
    let mut out = BTreeMap::new();
    for (i, v) in x0.iter().enumerate() {
        out.insert(Coord::x(i as u8 + 1), *v);
    }
    for idx in MultiIndex::up_to_order(gamma.n() as u8, r) {
        for mu in 1..=gamma.m() {
            let d = gamma.jet_value(mu, &idx);
            out.insert(Coord::Jet(mu as u8, idx.clone()), CompiledExpr::new(&d, &gvars)?.eval(x0));
        }
    }
    Ok(out)
}

/// Largest componentwise difference divided by the largest reference
/// magnitude (absolute when the reference vanishes).
pub fn relative_difference(a: &BTreeMap<Coord, f64>, reference: &BTreeMap<Coord, f64>) -> f64 {
    let keys: BTreeSet<&Coord> = a.keys().chain(reference.keys()).collect();
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in keys {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = reference.get(k).copied().unwrap_or(0.0);
        diff = diff.max((x - y).abs());
        scale = scale.max(y.abs());
    }
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Nodal grid on the unit cube with `nodes` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientReport {
    pub nodes: usize,
    pub h: f64,
    /// `max |g − E| / max |E|` over nodes whose stencil avoids the boundary layer.
    pub max_relative_error: f64,
    pub max_euler: f64,
    /// Largest `|∂S/∂u|/hⁿ` over the compared nodes.
    pub max_interior_gradient: f64,
    /// Largest `|∂S/∂u|/hⁿ` over nodes next to the Dirichlet boundary.
    pub max_boundary_gradient: f64,
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub runs: Vec<GradientReport>,
    /// `log(e_k/e_{k+1}) / log(h_k/h_{k+1})` for consecutive runs.
    pub orders: Vec<f64>,
}

impl ConvergenceReport {
    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

struct Grid {
    n: usize,
    size: usize,
    h: f64,
}

impl Grid {
    fn total(&self) -> usize {
        self.size.pow(self.n as u32)
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for o in out.iter_mut() {
            *o = flat % self.size;
            flat /= self.size;
        }
        out
    }

    fn stride(&self, k: usize) -> usize {
        self.size.pow(k as u32)
    }

    fn within(&self, idx: &[usize], lo: usize) -> bool {
        idx.iter().all(|&j| j >= lo && j + lo < self.size)
    }
}

/// Compare the gradient of a discretized action with the Euler expressions.
///
/// `S = Σ hⁿ L(x_j, u_j, (δu)_j)` over interior nodes with central
/// difference jets; boundary nodes carry fixed section values. The
/// gradient `∂S/∂u_{μ,j} / hⁿ` approximates `+E_μ(x_j)` to `O(h²)`.
pub fn discrete_action_gradient(
    lagrangian: &Expr,
    m: usize,
    gamma: &PolySection,
    grid: GridSpec,
) -> Result<GradientReport> {
    let n = grid.n;
    if !(1..=2).contains(&n) || gamma.n() != n || gamma.m() != m {
        return Err(Error::Dimension("gradient check supports n ∈ {1, 2} with a matching section".into()));
    }
    if grid.nodes < 4 {
        return Err(Error::Domain("grid needs at least 4 nodes per axis".into()));
    }
    if lagrangian.order() > 1 {
        return Err(Error::Domain("gradient check needs a first-order Lagrangian".into()));
    }
    let g = Grid { n, size: grid.nodes, h: 1.0 / (grid.nodes - 1) as f64 };
    let mut vars: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
    for mu in 1..=m as u8 {
        vars.push(Coord::y(mu));
        for k in 1..=n as u8 {
            vars.push(Coord::z(mu, &[k]));
        }
    }
    let lc = CompiledExpr::new(lagrangian, &vars)?;
    let slot_y = |mu: usize| n + mu * (n + 1);
    let slot_z = |mu: usize, k: usize| n + mu * (n + 1) + 1 + k;

    let gvars: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
    let gc: Vec<CompiledExpr> =
        gamma.components().iter().map(|e| CompiledExpr::new(e, &gvars)).collect::<Result<_>>()?;
    let coords_of = |idx: &[usize]| -> Vec<f64> { idx.iter().map(|&j| j as f64 * g.h).collect() };
    let u: Vec<Vec<f64>> =
        (0..m).map(|mu| (0..g.total()).map(|f| gc[mu].eval(&coords_of(&g.unflatten(f)))).collect()).collect();

    let local = |flat: usize, u: &dyn Fn(usize, usize) -> f64| -> f64 {
        let idx = g.unflatten(flat);
        let mut x = vec![0.0; vars.len()];
        x[..n].copy_from_slice(&coords_of(&idx));
        for mu in 0..m {
            x[slot_y(mu)] = u(mu, flat);
            for k in 0..n {
                let s = g.stride(k);
                x[slot_z(mu, k)] = (u(mu, flat + s) - u(mu, flat - s)) / (2.0 * g.h);
            }
        }
        lc.eval(&x)
    };

    let euler = euler_expressions(lagrangian, n, m);
    let ejet = section_jet_vars(n, m, 2);
    let ec: Vec<CompiledExpr> = euler.iter().map(|e| CompiledExpr::new(e, &ejet)).collect::<Result<_>>()?;

    let per_node: Vec<(f64, f64, f64, bool)> = (0..g.total())
        .into_par_iter()
        .filter_map(|flat| {
            let idx = g.unflatten(flat);
            if !g.within(&idx, 1) {
                return None;
            }
            let compared = g.within(&idx, 2);
            let x = coords_of(&idx);
            let jet = section_jet_f64(gamma, &x, 2).ok()?;
            let jv: Vec<f64> = ejet.iter().map(|c| jet[c]).collect();
            let mut worst = (0.0f64, 0.0f64, 0.0f64);
            for mu in 0..m {
                let mut neighbours = vec![flat];
                for k in 0..n {
                    let s = g.stride(k);
                    for nb in [flat - s, flat + s] {
                        if g.within(&g.unflatten(nb), 1) {
                            neighbours.push(nb);
                        }
                    }
                }
                let base = u[mu][flat];
                let eps = 1e-5 * (1.0 + base.abs());
                let with = |delta: f64| {
                    let read = |nu: usize, f: usize| if nu == mu && f == flat { base + delta } else { u[nu][f] };
                    neighbours.iter().map(|&q| local(q, &read)).sum::<f64>()
                };
                let grad = (with(eps) - with(-eps)) / (2.0 * eps);
                let e = ec[mu].eval(&jv);
                worst.0 = worst.0.max((grad - e).abs());
                worst.1 = worst.1.max(e.abs());
                worst.2 = worst.2.max(grad.abs());
            }
            Some((worst.0, worst.1, worst.2, compared))
        })
        .collect();

    let mut err: f64 = 0.0;
    let mut emax: f64 = 0.0;
    let mut interior: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for (d, e, gr, compared) in per_node {
        if compared {
            err = err.max(d);
            emax = emax.max(e);
            interior = interior.max(gr);
        } else {
            boundary = boundary.max(gr);
        }
    }
    let vacuous = emax < 1e-12;
    Ok(GradientReport {
        nodes: grid.nodes,
        h: g.h,
        max_relative_error: if vacuous { err } else { err / emax },
        max_euler: emax,
        max_interior_gradient: interior,
        max_boundary_gradient: boundary,
        vacuous,
    })
}

fn section_jet_vars(n: usize, m: usize, r: usize) -> Vec<Coord> {
    let mut out: Vec<Coord> = (1..=n as u8).map(Coord::x).collect();
    for idx in MultiIndex::up_to_order(n as u8, r) {
        for mu in 1..=m as u8 {
            out.push(Coord::Jet(mu, idx.clone()));
        }
    }
    out
}

/// Run [`discrete_action_gradient`] over several grid sizes.
pub fn gradient_convergence(
    lagrangian: &Expr,
    m: usize,
    gamma: &PolySection,
    n: usize,
    sizes: &[usize],
) -> Result<ConvergenceReport> {
    let runs = sizes
        .iter()
        .map(|&nodes| discrete_action_gradient(lagrangian, m, gamma, GridSpec { n, nodes }))
        .collect::<Result<Vec<_>>>()?;
    let orders = runs
        .windows(2)
        .map(|w| (w[0].max_relative_error / w[1].max_relative_error).ln() / (w[0].h / w[1].h).ln())
        .collect();
    Ok(ConvergenceReport { runs, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{q, qr, FunctionSymbol};

    #[test]
    fn eval_examples() {
        let mut a = PointAssignment::default();
        a.values.insert(Coord::z(1, &[1]), q(3));
        assert_eq!(eval(&Expr::z(1, &[1]).pow(2), &a).unwrap(), q(9));
        let f = FunctionSymbol::new("f", vec![Coord::x(1)]).unwrap();
        let df = Expr::func(&f).partial(&Coord::x(1));
        let mut a = PointAssignment::default();
        a.values.insert(Coord::x(1), q(2));
        assert!(matches!(eval(&df, &a), Err(Error::Ungrounded(_))));
        a.realizations.insert("f".into(), Expr::x(1).pow(2));
        assert_eq!(eval(&df, &a).unwrap(), q(4));
    }

    #[test]
    fn zero_check_examples() {
        let e = Expr::x(1).pow(2) - &Expr::x(1) * &Expr::x(1);
        assert!(randomized_zero_check(&e, 10, 1).unwrap().is_probably_zero());
        let e = Expr::x(1) - Expr::x(2);
        assert!(!randomized_zero_check(&e, 10, 1).unwrap().is_probably_zero());
    }

    #[test]
    fn flow_oracle_examples() {
        let gamma = PolySection::new(1, vec![Expr::x(1).pow(2)]).unwrap();
        let boost = ProjectableField::vertical(1, vec![Expr::x(1)]).unwrap();
        let FlowOutcome::Jet(j) = flow_prolong_oracle(&boost, &gamma, &[1.0], 1, 1e-4).unwrap() else {
            panic!("inconclusive")
        };
        assert!((j[&Coord::z(1, &[1])] - 1.0).abs() < 1e-6);
        let dil = ProjectableField::new(vec![Expr::x(1)], vec![Expr::zero()]).unwrap();
        let FlowOutcome::Jet(j) = flow_prolong_oracle(&dil, &gamma, &[1.0], 1, 1e-4).unwrap() else {
            panic!("inconclusive")
        };
        assert!((j[&Coord::z(1, &[1])] + 2.0).abs() < 1e-6);
        let zero = ProjectableField::zero(1, 1);
        let FlowOutcome::Jet(j) = flow_prolong_oracle(&zero, &gamma, &[1.0], 2, 1e-4).unwrap() else {
            panic!("inconclusive")
        };
        assert!(j.values().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn free_particle_gradient() {
        let l = Expr::z(1, &[1]).pow(2).scale(&qr(1, 2));
        let gamma = PolySection::new(1, vec![Expr::x(1).pow(2)]).unwrap();
        let rep = discrete_action_gradient(&l, 1, &gamma, GridSpec { n: 1, nodes: 100 }).unwrap();
        assert!(rep.max_relative_error < 1e-3, "{rep:?}");
        let line = PolySection::new(1, vec![Expr::x(1).scale(&q(3)) + Expr::one()]).unwrap();
        let rep = discrete_action_gradient(&l, 1, &line, GridSpec { n: 1, nodes: 100 }).unwrap();
        assert!(rep.vacuous && rep.max_interior_gradient < 1e-8, "{rep:?}");
    }
}

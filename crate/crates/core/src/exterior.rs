//! Differential forms on jet spaces with [`Expr`] coefficients.

use crate::error::{Error, Result};
use crate::symbolic::{Coord, Expr, MultiIndex};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Strictly increasing list of coordinates, read as `dc₁ ∧ … ∧ dc_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Basis(Vec<Coord>);

impl Basis {
    pub fn empty() -> Self {
        Basis(Vec::new())
    }

    /// Sort `coords` into canonical order; `None` if a covector repeats,
    /// otherwise the permutation sign.
    pub fn sorted(mut coords: Vec<Coord>) -> Option<(Basis, i64)> {
        let mut sign = 1;
        // insertion sort keeps the parity bookkeeping obvious
        for k in 1..coords.len() {
            let mut j = k;
            while j > 0 && coords[j - 1] > coords[j] {
                coords.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if coords.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Basis(coords), sign))
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_horizontal(&self) -> bool {
        self.0.iter().all(Coord::is_base)
    }

    pub fn without(&self, k: usize) -> Basis {
        let mut v = self.0.clone();
        v.remove(k);
        Basis(v)
    }

    fn wedge(&self, other: &Basis) -> Option<(Basis, i64)> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Basis::sorted(v)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "^")?;
            }
            write!(f, "d{c}")?;
        }
        Ok(())
    }
}

impl Basis {
    pub fn to_latex(&self) -> String {
        if self.0.is_empty() {
            return String::new();
        }
        self.0.iter().map(|c| format!("d{}", c.to_latex())).collect::<Vec<_>>().join(" \\wedge ")
    }
}

/// A homogeneous differential form of fixed degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffForm {
    degree: usize,
    terms: BTreeMap<Basis, Expr>,
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm<{}>({self})", self.degree)
    }
}

impl DiffForm {
    pub fn zero(degree: usize) -> Self {
        DiffForm { degree, terms: BTreeMap::new() }
    }

    pub fn scalar(e: Expr) -> Self {
        DiffForm::term(e, vec![])
    }

    /// `coeff · dc₁ ∧ … ∧ dc_p` with the covectors in any order.
    pub fn term(coeff: Expr, coords: Vec<Coord>) -> Self {
        let degree = coords.len();
        let mut out = DiffForm::zero(degree);
        if let Some((b, s)) = Basis::sorted(coords) {
            out.add_term(b, if s < 0 { -coeff } else { coeff });
        }
        out
    }

    /// The exact 1-form `dc`.
    pub fn d_coord(c: Coord) -> Self {
        DiffForm::term(Expr::one(), vec![c])
    }

    /// `ω₀ = dx₁ ∧ … ∧ dx_n`.
    pub fn volume(n: usize) -> Self {
        DiffForm::term(Expr::one(), (1..=n as u8).map(Coord::x).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Expr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &Basis) -> Expr {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    /// Coefficient of the covectors `coords` (any order, sign-corrected).
    pub fn coefficient_of(&self, coords: Vec<Coord>) -> Expr {
        match Basis::sorted(coords) {
            Some((b, s)) => {
                let c = self.coefficient(&b);
                if s < 0 {
                    -c
                } else {
                    c
                }
            }
            None => Expr::zero(),
        }
    }

    /// The scalar of a degree-0 form.
    pub fn as_scalar(&self) -> Option<Expr> {
        (self.degree == 0).then(|| self.coefficient(&Basis::empty()))
    }

    pub(crate) fn add_term(&mut self, b: Basis, c: Expr) {
        debug_assert_eq!(b.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_degree(&self, other: &DiffForm) {
        assert!(
            self.is_zero() || other.is_zero() || self.degree == other.degree,
            "adding forms of degree {} and {}",
            self.degree,
            other.degree
        );
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<DiffForm> {
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::Degree { expected: self.degree.to_string(), found: other.degree });
        }
        Ok(self + other)
    }

    pub fn scale(&self, e: &Expr) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * e);
        }
        out
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Expr) -> Expr) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients(&self, mut f: impl FnMut(&Expr) -> Result<Expr>) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.degree);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        let mut out = DiffForm::zero(self.degree + other.degree);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some((b, s)) = b1.wedge(b2) {
                    let c = c1 * c2;
                    out.add_term(b, if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.degree + 1);
        for (b, c) in &self.terms {
            for v in c.dependencies() {
                let dc = c.partial(&v);
                if dc.is_zero() {
                    continue;
                }
                let mut coords = Vec::with_capacity(b.degree() + 1);
                coords.push(v);
                coords.extend_from_slice(b.coords());
                if let Some((nb, s)) = Basis::sorted(coords) {
                    out.add_term(nb, if s < 0 { -dc } else { dc });
                }
            }
        }
        out
    }

    /// Interior product `i(ξ)`.
    pub fn contract(&self, xi: &JetField) -> Result<DiffForm> {
        if self.degree == 0 {
            return Err(Error::Degree { expected: "at least 1".into(), found: 0 });
        }
        let mut out = DiffForm::zero(self.degree - 1);
        for (b, c) in &self.terms {
            for (k, v) in b.coords().iter().enumerate() {
                let comp = xi.component(v);
                if comp.is_zero() {
                    continue;
                }
                let t = &comp * c;
                out.add_term(b.without(k), if k % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Lie derivative by Cartan's formula `i(ξ)d + d i(ξ)`.
    pub fn lie_derivative(&self, xi: &JetField) -> DiffForm {
        if self.degree == 0 {
            return DiffForm::scalar(xi.apply(&self.coefficient(&Basis::empty())));
        }
        let a = self.ext_d().contract(xi).expect("degree ≥ 1");
        let b = self.contract(xi).expect("degree ≥ 1").ext_d();
        a + b
    }

    /// Highest jet order among coefficients and basis covectors.
    pub fn order(&self) -> usize {
        self.terms
            .iter()
            .map(|(b, c)| {
                let bo = b.coords().iter().map(Coord::order).max().unwrap_or(0);
                bo.max(c.order())
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(Basis::is_horizontal)
    }

    /// All coordinates occurring in bases or coefficients.
    pub fn coords(&self) -> BTreeSet<Coord> {
        let mut out = BTreeSet::new();
        for (b, c) in &self.terms {
            out.extend(b.coords().iter().cloned());
            out.extend(c.dependencies());
        }
        out
    }

    /// Pullback along the prolongation of a polynomial section.
    pub fn pullback(&self, gamma: &PolySection) -> Result<DiffForm> {
        let r = self.order();
        let binding = gamma.binding(r)?;
        let mut out = DiffForm::zero(self.degree);
        let mut dcache: BTreeMap<Coord, DiffForm> = BTreeMap::new();
        for (b, c) in &self.terms {
            let mut acc = DiffForm::scalar(c.substitute(&binding)?);
            for v in b.coords() {
                let dv = dcache.entry(v.clone()).or_insert_with(|| gamma.pullback_differential(v, &binding));
                acc = acc.wedge(dv);
                if acc.is_zero() {
                    break;
                }
            }
            out = out + acc;
        }
        Ok(out)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(b, c)| {
                let coeff = if c.len() > 1 { format!("\\left({}\\right)", c.to_latex()) } else { c.to_latex() };
                if b.degree() == 0 {
                    coeff
                } else {
                    format!("{coeff} \\, {}", b.to_latex())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if b.degree() == 0 {
                write!(f, "{}", c.to_factor_string())?;
            } else if *c == Expr::one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{}*{b}", c.to_factor_string())?;
            }
        }
        Ok(())
    }
}

impl Add<&DiffForm> for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.check_degree(rhs);
        // adding a zero form (of any degree) must not change the degree
        let mut out = if self.is_zero() && !rhs.is_zero() { DiffForm::zero(rhs.degree) } else { self.clone() };
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl Add for DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: DiffForm) -> DiffForm {
        &self + &rhs
    }
}

impl Sub<&DiffForm> for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self + &(-rhs)
    }
}

impl Sub for DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: DiffForm) -> DiffForm {
        &self - &rhs
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        -&self
    }
}

/// A vector field `Σ comp(c) ∂/∂c` on a jet space, finitely supported.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct JetField {
    components: BTreeMap<Coord, Expr>,
}

impl fmt::Debug for JetField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetField{{")?;
        for (k, (c, e)) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}: {e}")?;
        }
        write!(f, "}}")
    }
}

impl JetField {
    pub fn zero() -> Self {
        JetField::default()
    }

    /// The coordinate field `∂/∂c`.
    pub fn coordinate(c: Coord) -> Self {
        let mut f = JetField::zero();
        f.set(c, Expr::one());
        f
    }

    pub fn from_components(comps: impl IntoIterator<Item = (Coord, Expr)>) -> Self {
        let mut f = JetField::zero();
        for (c, e) in comps {
            f.set(c, e);
        }
        f
    }

    pub fn set(&mut self, c: Coord, e: Expr) {
        if e.is_zero() {
            self.components.remove(&c);
        } else {
            self.components.insert(c, e);
        }
    }

    pub fn component(&self, c: &Coord) -> Expr {
        self.components.get(c).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Coord, &Expr)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn order(&self) -> usize {
        self.components.iter().map(|(c, e)| c.order().max(e.order())).max().unwrap_or(0)
    }

    /// The derivation `ξ(f) = Σ ξ_c ∂f/∂c`.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for v in e.dependencies() {
            let comp = self.component(&v);
            if comp.is_zero() {
                continue;
            }
            out += &comp * &e.partial(&v);
        }
        out
    }

    /// Lie bracket `[a, b]`.
    pub fn bracket(&self, other: &JetField) -> JetField {
        let keys: BTreeSet<&Coord> = self.components.keys().chain(other.components.keys()).collect();
        JetField::from_components(keys.into_iter().map(|c| {
            let v = self.apply(&other.component(c)) - other.apply(&self.component(c));
            (c.clone(), v)
        }))
    }

    pub fn scale(&self, e: &Expr) -> JetField {
        JetField::from_components(self.components.iter().map(|(c, v)| (c.clone(), v * e)))
    }

    pub fn map_components(&self, mut f: impl FnMut(&Coord, &Expr) -> Expr) -> JetField {
        JetField::from_components(self.components.iter().map(|(c, v)| (c.clone(), f(c, v))))
    }

    /// The part supported on coordinates satisfying `pred`.
    pub fn restrict(&self, pred: impl Fn(&Coord) -> bool) -> JetField {
        JetField::from_components(self.components.iter().filter(|(c, _)| pred(c)).map(|(c, v)| (c.clone(), v.clone())))
    }
}

impl Add<&JetField> for &JetField {
    type Output = JetField;
    fn add(self, rhs: &JetField) -> JetField {
        let mut out = self.clone();
        for (c, v) in &rhs.components {
            let s = &out.component(c) + v;
            out.set(c.clone(), s);
        }
        out
    }
}

impl Sub<&JetField> for &JetField {
    type Output = JetField;
    fn sub(self, rhs: &JetField) -> JetField {
        let mut out = self.clone();
        for (c, v) in &rhs.components {
            let s = &out.component(c) - v;
            out.set(c.clone(), s);
        }
        out
    }
}

impl fmt::Display for JetField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, e)) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*d/d{c}", e.to_factor_string())?;
        }
        Ok(())
    }
}

/// A polynomial section `x ↦ (x, γ(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySection {
    n: usize,
    components: Vec<Expr>,
}

impl PolySection {
    pub fn new(n: usize, components: Vec<Expr>) -> Result<Self> {
        for (mu, g) in components.iter().enumerate() {
            if let Some(c) = g.dependencies().into_iter().find(|c| !c.is_base()) {
                return Err(Error::Domain(format!(
                    "section component {} depends on {c}, not only on base coordinates",
                    mu + 1
                )));
            }
        }
        Ok(PolySection { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, mu: usize) -> &Expr {
        &self.components[mu - 1]
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// `∂_I γ_μ`.
    pub fn jet_value(&self, mu: usize, idx: &MultiIndex) -> Expr {
        idx.entries().iter().fold(self.components[mu - 1].clone(), |acc, &i| acc.partial(&Coord::x(i)))
    }

    /// Values of every coordinate of `J^r` along `j^r γ`.
    pub fn binding(&self, r: usize) -> Result<BTreeMap<Coord, Expr>> {
        let mut out = BTreeMap::new();
        for i in 1..=self.n as u8 {
            out.insert(Coord::x(i), Expr::x(i));
        }
        for idx in MultiIndex::up_to_order(self.n as u8, r) {
            for mu in 1..=self.m() {
                out.insert(Coord::Jet(mu as u8, idx.clone()), self.jet_value(mu, &idx));
            }
        }
        Ok(out)
    }

    /// Evaluate an expression along `j^r γ`.
    pub fn pull(&self, e: &Expr) -> Result<Expr> {
        e.substitute(&self.binding(e.order())?)
    }

    fn pullback_differential(&self, c: &Coord, binding: &BTreeMap<Coord, Expr>) -> DiffForm {
        match c {
            Coord::Base(_) => DiffForm::d_coord(c.clone()),
            Coord::Jet(..) => {
                let v = binding.get(c).cloned().unwrap_or_else(|| match c {
                    Coord::Jet(mu, idx) => self.jet_value(*mu as usize, idx),
                    Coord::Base(_) => unreachable!(),
                });
                DiffForm::scalar(v).ext_d()
            }
        }
    }
}

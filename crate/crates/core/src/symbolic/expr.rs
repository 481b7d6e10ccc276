use super::{Coord, MultiIndex, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

/// Declaration of an opaque function of order-0 coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    name: String,
    args: Vec<Coord>,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, args: Vec<Coord>) -> Result<Arc<Self>> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Context("function symbol needs a name".into()));
        }
        for (k, a) in args.iter().enumerate() {
            if a.order() > 0 {
                return Err(Error::Context(format!(
                    "function {name}: argument {a} has jet order {} (only x and y are allowed)",
                    a.order()
                )));
            }
            if args[..k].contains(a) {
                return Err(Error::Context(format!("function {name}: repeated argument {a}")));
            }
        }
        Ok(Arc::new(FunctionSymbol { name, args }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[Coord] {
        &self.args
    }

    /// 1-based position of `c` among the arguments.
    pub fn position(&self, c: &Coord) -> Option<u8> {
        self.args.iter().position(|a| a == c).map(|p| p as u8 + 1)
    }

    pub fn depends_on_fiber(&self) -> bool {
        self.args.iter().any(Coord::is_jet)
    }
}

/// A formal partial derivative `∂^{|J|} f / ∂args_J` of an opaque function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncAtom {
    symbol: Arc<FunctionSymbol>,
    deriv: MultiIndex,
}

impl FuncAtom {
    pub fn new(symbol: Arc<FunctionSymbol>) -> Self {
        FuncAtom { symbol, deriv: MultiIndex::empty() }
    }

    /// Partial derivative record over argument positions (1-based).
    pub fn with_deriv(symbol: Arc<FunctionSymbol>, deriv: MultiIndex) -> Self {
        FuncAtom { symbol, deriv }
    }

    pub fn symbol(&self) -> &Arc<FunctionSymbol> {
        &self.symbol
    }

    pub fn deriv(&self) -> &MultiIndex {
        &self.deriv
    }

    /// The coordinates this atom has been differentiated by, in canonical order.
    pub fn deriv_coords(&self) -> Vec<Coord> {
        self.deriv.entries().iter().map(|&p| self.symbol.args[p as usize - 1].clone()).collect()
    }

    pub fn differentiated(&self, pos: u8) -> FuncAtom {
        FuncAtom { symbol: self.symbol.clone(), deriv: self.deriv.with(pos) }
    }

    /// Partial derivative by a coordinate, `None` if `c` is not an argument.
    pub fn partial(&self, c: &Coord) -> Option<FuncAtom> {
        self.symbol.position(c).map(|p| self.differentiated(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Coord(Coord),
    Func(FuncAtom),
}

impl Atom {
    pub fn as_coord(&self) -> Option<&Coord> {
        match self {
            Atom::Coord(c) => Some(c),
            Atom::Func(_) => None,
        }
    }

    pub fn as_func(&self) -> Option<&FuncAtom> {
        match self {
            Atom::Func(f) => Some(f),
            Atom::Coord(_) => None,
        }
    }
}

impl From<Coord> for Atom {
    fn from(c: Coord) -> Self {
        Atom::Coord(c)
    }
}

impl From<FuncAtom> for Atom {
    fn from(f: FuncAtom) -> Self {
        Atom::Func(f)
    }
}

/// Sorted product of atom powers; the empty product is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    pub fn power_of(&self, a: &Atom) -> u32 {
        self.0.binary_search_by(|(b, _)| b.cmp(a)).map(|k| self.0[k].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The monomial with the power of factor `k` lowered by one.
    fn lowered(&self, k: usize) -> Monomial {
        let mut v = self.0.clone();
        if v[k].1 == 1 {
            v.remove(k);
        } else {
            v[k].1 -= 1;
        }
        Monomial(v)
    }

    /// Split into the part built from atoms satisfying `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&Atom) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(at, _)| pred(at));
        (Monomial(a), Monomial(b))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().map(|(a, _)| a)
    }
}

/// Exact differential polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Expr::zero();
        e.add_term(Monomial::one(), c);
        e
    }

    pub fn int(v: i64) -> Self {
        Expr::constant(super::q(v))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Expr::constant(super::qr(num, den))
    }

    pub fn atom(a: impl Into<Atom>) -> Self {
        let mut e = Expr::zero();
        e.add_term(Monomial::atom(a.into()), Rational::one());
        e
    }

    pub fn coord(c: Coord) -> Self {
        Expr::atom(c)
    }

    pub fn x(i: u8) -> Self {
        Expr::coord(Coord::x(i))
    }

    pub fn y(mu: u8) -> Self {
        Expr::coord(Coord::y(mu))
    }

    pub fn z(mu: u8, idx: &[u8]) -> Self {
        Expr::coord(Coord::z(mu, idx))
    }

    pub fn func(symbol: &Arc<FunctionSymbol>) -> Self {
        Expr::atom(FuncAtom::new(symbol.clone()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Expr::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Highest jet order of any coordinate atom (function arguments are order 0).
    pub fn order(&self) -> usize {
        self.atoms().filter_map(|a| a.as_coord().map(Coord::order)).max().unwrap_or(0)
    }

    /// True if the expression depends on some fiber or jet coordinate,
    /// directly or through a function argument.
    pub fn depends_on_fiber(&self) -> bool {
        self.atoms().any(|a| match a {
            Atom::Coord(c) => c.is_jet(),
            Atom::Func(f) => f.symbol().depends_on_fiber(),
        })
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.terms.keys().flat_map(|m| m.atoms())
    }

    /// Coordinates appearing as atoms.
    pub fn coords(&self) -> BTreeSet<Coord> {
        self.atoms().filter_map(|a| a.as_coord().cloned()).collect()
    }

    /// Coordinates the expression depends on, including function arguments.
    pub fn dependencies(&self) -> BTreeSet<Coord> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            match a {
                Atom::Coord(c) => {
                    out.insert(c.clone());
                }
                Atom::Func(f) => out.extend(f.symbol().args().iter().cloned()),
            }
        }
        out
    }

    pub fn func_atoms(&self) -> BTreeSet<FuncAtom> {
        self.atoms().filter_map(|a| a.as_func().cloned()).collect()
    }

    /// Apply the derivation determined by its values on atoms.
    pub fn derive(&self, mut d: impl FnMut(&Atom) -> Expr) -> Expr {
        let mut cache: BTreeMap<&Atom, Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (mono, c) in &self.terms {
            for (k, (atom, p)) in mono.0.iter().enumerate() {
                let da = cache.entry(atom).or_insert_with(|| d(atom));
                if da.is_zero() {
                    continue;
                }
                let rest = mono.lowered(k);
                let coeff = c * Rational::from_integer((*p).into());
                for (m2, c2) in &da.terms {
                    out.add_term(rest.mul(m2), &coeff * c2);
                }
            }
        }
        out
    }

    /// `∂e/∂c`, treating every canonical coordinate as independent.
    pub fn partial(&self, c: &Coord) -> Expr {
        self.derive(|a| match a {
            Atom::Coord(b) if b == c => Expr::one(),
            Atom::Coord(_) => Expr::zero(),
            Atom::Func(f) => f.partial(c).map(Expr::atom).unwrap_or_default(),
        })
    }

    /// Derivative with respect to an atom treated as an independent variable.
    pub fn partial_atom(&self, target: &Atom) -> Expr {
        self.derive(|a| if a == target { Expr::one() } else { Expr::zero() })
    }

    /// Formal (total) derivative `D_i`, without order bookkeeping.
    ///
    /// Use [`super::JetContext::total_derivative`] for the checked variant.
    pub fn total_derivative(&self, i: u8) -> Expr {
        self.derive(|a| atom_total_derivative(a, i))
    }

    /// Iterated total derivative `D_I`.
    pub fn total_derivative_multi(&self, idx: &MultiIndex) -> Expr {
        idx.entries().iter().fold(self.clone(), |acc, &i| acc.total_derivative(i))
    }

    /// Ring homomorphism determined by atom images; atoms mapped to `None` stay.
    pub fn map_atoms(&self, mut f: impl FnMut(&Atom) -> Option<Expr>) -> Expr {
        let mut cache: BTreeMap<&Atom, Option<Expr>> = BTreeMap::new();
        let mut out = Expr::zero();
        for (mono, c) in &self.terms {
            let mut acc = Expr::constant(c.clone());
            let mut kept = Monomial::one();
            for (atom, p) in &mono.0 {
                let img = cache.entry(atom).or_insert_with(|| f(atom));
                match img {
                    Some(e) => acc = &acc * &e.pow(*p),
                    None => kept = kept.mul(&Monomial(vec![(atom.clone(), *p)])),
                }
                if acc.is_zero() {
                    break;
                }
            }
            for (m, k) in acc.terms {
                out.add_term(m.mul(&kept), k);
            }
        }
        out
    }

    /// Substitute coordinates. Every coordinate atom must be bound; a
    /// function atom survives only if its arguments are bound to themselves
    /// or left unbound.
    pub fn substitute(&self, sigma: &BTreeMap<Coord, Expr>) -> Result<Expr> {
        for a in self.atoms() {
            match a {
                Atom::Coord(c) => {
                    if !sigma.contains_key(c) {
                        return Err(Error::Substitution(format!("no binding for {c}")));
                    }
                }
                Atom::Func(f) => check_func_args(f, sigma)?,
            }
        }
        Ok(self.map_atoms(|a| match a {
            Atom::Coord(c) => sigma.get(c).cloned(),
            Atom::Func(_) => None,
        }))
    }

    /// Like [`Expr::substitute`] but unbound coordinates are left in place.
    pub fn replace(&self, sigma: &BTreeMap<Coord, Expr>) -> Result<Expr> {
        for f in self.func_atoms() {
            check_func_args(&f, sigma)?;
        }
        Ok(self.map_atoms(|a| match a {
            Atom::Coord(c) => sigma.get(c).cloned(),
            Atom::Func(_) => None,
        }))
    }

    /// Replace function atoms by explicit realizations: the atom
    /// `∂_J f` becomes `∂_J` of the realization of `f`, differentiated by
    /// the argument coordinates. Unlisted functions stay opaque.
    pub fn realize(&self, realizations: &BTreeMap<String, Expr>) -> Expr {
        self.map_atoms(|a| match a {
            Atom::Func(f) => realizations
                .get(f.symbol().name())
                .map(|r| f.deriv_coords().iter().fold(r.clone(), |acc, c| acc.partial(c))),
            Atom::Coord(_) => None,
        })
    }

    /// Collect coefficients with respect to the atoms selected by `pred`:
    /// returns `key monomial ↦ cofactor` with `self = Σ key · cofactor`.
    pub fn collect_by(&self, pred: impl Fn(&Atom) -> bool) -> BTreeMap<Monomial, Expr> {
        let mut out: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Monomials on which `self` and `other` disagree, with both coefficients.
    pub fn discrepancy(&self, other: &Expr) -> Vec<(Monomial, Rational, Rational)> {
        let diff = self - other;
        diff.terms().map(|(m, _)| (m.clone(), self.coefficient(m), other.coefficient(m))).collect()
    }

    /// Leading coefficient sign, used by emitters.
    pub(crate) fn first_is_negative(&self) -> bool {
        self.terms.values().next().map(|c| c.is_negative()).unwrap_or(false)
    }
}

fn check_func_args(f: &FuncAtom, sigma: &BTreeMap<Coord, Expr>) -> Result<()> {
    for arg in f.symbol().args() {
        if let Some(img) = sigma.get(arg) {
            if *img != Expr::coord(arg.clone()) {
                return Err(Error::Substitution(format!(
                    "cannot substitute {img} for argument {arg} of opaque function {}",
                    f.symbol().name()
                )));
            }
        }
    }
    Ok(())
}

/// `D_i` on a single atom: `D_i x_j = δ_ij`, `D_i z_{Iμ} = z_{(I∪i)μ}`,
/// chain rule through function arguments.
pub(crate) fn atom_total_derivative(a: &Atom, i: u8) -> Expr {
    match a {
        Atom::Coord(Coord::Base(j)) => {
            if *j == i {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Coord(c) => Expr::coord(c.shifted(i).expect("jet coordinate")),
        Atom::Func(f) => {
            let mut out = Expr::zero();
            for (k, arg) in f.symbol().args().iter().enumerate() {
                let darg = atom_total_derivative(&Atom::Coord(arg.clone()), i);
                if darg.is_zero() {
                    continue;
                }
                let df = Expr::atom(f.differentiated(k as u8 + 1));
                out += &df * &darg;
            }
            out
        }
    }
}

impl From<Coord> for Expr {
    fn from(c: Coord) -> Self {
        Expr::coord(c)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<Rational> for Expr {
    fn from(v: Rational) -> Self {
        Expr::constant(v)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<Expr> for Expr {
    fn sub_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        self -= rhs;
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut acc = Expr::zero();
        for e in iter {
            acc += e;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_x1_y1() -> Arc<FunctionSymbol> {
        FunctionSymbol::new("f", vec![Coord::x(1), Coord::y(1)]).unwrap()
    }

    #[test]
    fn like_terms_collect() {
        let e = Expr::y(1) + Expr::y(1);
        assert_eq!(e, Expr::y(1).scale(&super::super::q(2)));
    }

    #[test]
    fn commutativity_cancels() {
        let e = &Expr::x(1) * &Expr::x(2) - &Expr::x(2) * &Expr::x(1);
        assert!(e.is_zero());
    }

    #[test]
    fn mixed_partials_share_an_atom() {
        let f = FunctionSymbol::new("f", vec![Coord::x(1), Coord::y(2)]).unwrap();
        let fe = Expr::func(&f);
        let a = fe.partial(&Coord::x(1)).partial(&Coord::y(2));
        let b = fe.partial(&Coord::y(2)).partial(&Coord::x(1));
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn partial_examples() {
        let e = Expr::z(1, &[1]).pow(2).scale(&super::super::qr(1, 2));
        assert_eq!(e.partial(&Coord::z(1, &[1])), Expr::z(1, &[1]));
        let f = f_x1_y1();
        let df = Expr::func(&f).partial(&Coord::y(1));
        assert_eq!(df, Expr::atom(FuncAtom::with_deriv(f, MultiIndex::single(2))));
        assert!(Expr::z(1, &[1]).partial(&Coord::x(1)).is_zero());
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(Expr::y(1).total_derivative(1), Expr::z(1, &[1]));
        assert!(Expr::x(2).total_derivative(1).is_zero());
        let e = &Expr::y(1) * &Expr::z(1, &[1]);
        let expect = &Expr::z(1, &[2]) * &Expr::z(1, &[1]) + &Expr::y(1) * &Expr::z(1, &[1, 2]);
        assert_eq!(e.total_derivative(2), expect);
    }

    #[test]
    fn total_derivative_chain_rule_through_functions() {
        let f = f_x1_y1();
        let d = Expr::func(&f).total_derivative(1);
        let fx = Expr::atom(FuncAtom::with_deriv(f.clone(), MultiIndex::single(1)));
        let fy = Expr::atom(FuncAtom::with_deriv(f, MultiIndex::single(2)));
        assert_eq!(d, fx + &fy * &Expr::z(1, &[1]));
    }

    #[test]
    fn substitute_examples() {
        let mut s = BTreeMap::new();
        s.insert(Coord::z(1, &[1]), Expr::int(3));
        assert_eq!(Expr::z(1, &[1]).pow(2).substitute(&s).unwrap(), Expr::int(9));

        let mut s = BTreeMap::new();
        s.insert(Coord::x(1), Expr::x(1));
        s.insert(Coord::y(1), Expr::x(1).pow(2));
        let e = Expr::x(1) + Expr::y(1);
        assert_eq!(e.substitute(&s).unwrap(), Expr::x(1) + Expr::x(1).pow(2));

        // D1(y1^2) = 2 y1 z11; along y1 = x^2, z11 = 2x this is 4x^3
        let d = Expr::y(1).pow(2).total_derivative(1);
        let mut s = BTreeMap::new();
        s.insert(Coord::y(1), Expr::x(1).pow(2));
        s.insert(Coord::z(1, &[1]), Expr::x(1).scale(&super::super::q(2)));
        assert_eq!(d.substitute(&s).unwrap(), Expr::x(1).pow(3).scale(&super::super::q(4)));
    }

    #[test]
    fn substitute_requires_every_binding() {
        let e = Expr::x(1) + Expr::y(1);
        let mut s = BTreeMap::new();
        s.insert(Coord::x(1), Expr::int(2));
        assert!(matches!(e.substitute(&s), Err(Error::Substitution(_))));
    }

    #[test]
    fn substitute_into_function_argument_is_rejected() {
        let f = f_x1_y1();
        let mut s = BTreeMap::new();
        s.insert(Coord::y(1), Expr::x(1));
        assert!(Expr::func(&f).replace(&s).is_err());
        let mut id = BTreeMap::new();
        id.insert(Coord::y(1), Expr::y(1));
        id.insert(Coord::x(1), Expr::x(1));
        assert_eq!(Expr::func(&f).substitute(&id).unwrap(), Expr::func(&f));
    }

    #[test]
    fn realization_differentiates_the_polynomial() {
        let f = f_x1_y1();
        let d = Expr::func(&f).partial(&Coord::x(1)).partial(&Coord::x(1));
        let mut r = BTreeMap::new();
        r.insert("f".to_string(), &Expr::x(1).pow(3) * &Expr::y(1));
        assert_eq!(d.realize(&r), (&Expr::x(1) * &Expr::y(1)).scale(&super::super::q(6)));
    }

    #[test]
    fn function_arguments_must_be_order_zero() {
        assert!(FunctionSymbol::new("g", vec![Coord::z(1, &[1])]).is_err());
        assert!(FunctionSymbol::new("g", vec![Coord::x(1), Coord::x(1)]).is_err());
    }
}

use super::{Coord, Expr, FuncAtom, JetContext, MultiIndex, Rational};
use crate::error::{Error, Result};
use num_traits::Zero;

/// Un-normalized expression tree, as produced by a parser.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    Num(Rational),
    Coord(Coord),
    /// `diff(name, c1, c2, …)`; an empty list is the bare function.
    Func {
        name: String,
        wrt: Vec<Coord>,
    },
    Add(Vec<RawExpr>),
    Neg(Box<RawExpr>),
    Mul(Vec<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, u32),
}

impl JetContext {
    /// Bring a raw tree to canonical form, validating every atom.
    pub fn normalize(&self, raw: &RawExpr) -> Result<Expr> {
        Ok(match raw {
            RawExpr::Num(c) => Expr::constant(c.clone()),
            RawExpr::Coord(c) => {
                self.check_coord(c)?;
                Expr::coord(c.clone())
            }
            RawExpr::Func { name, wrt } => {
                let sym =
                    self.function(name).ok_or_else(|| Error::Context(format!("undeclared function symbol {name}")))?;
                let mut pos = Vec::with_capacity(wrt.len());
                for c in wrt {
                    let p = sym
                        .position(c)
                        .ok_or_else(|| Error::Context(format!("{c} is not an argument of function {name}")))?;
                    pos.push(p);
                }
                Expr::atom(FuncAtom::with_deriv(sym.clone(), MultiIndex::new(pos)))
            }
            RawExpr::Add(items) => {
                let mut acc = Expr::zero();
                for it in items {
                    acc += self.normalize(it)?;
                }
                acc
            }
            RawExpr::Neg(a) => -self.normalize(a)?,
            RawExpr::Mul(items) => {
                let mut acc = Expr::one();
                for it in items {
                    acc = &acc * &self.normalize(it)?;
                }
                acc
            }
            RawExpr::Div(a, b) => {
                let num = self.normalize(a)?;
                let den = self.normalize(b)?;
                let c = den
                    .as_constant()
                    .ok_or_else(|| Error::Domain(format!("division by the non-constant expression {den}")))?;
                if c.is_zero() {
                    return Err(Error::Domain("division by zero".into()));
                }
                num.scale(&c.recip())
            }
            RawExpr::Pow(a, k) => self.normalize(a)?.pow(*k),
        })
    }
}

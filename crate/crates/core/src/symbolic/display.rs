//! Canonical text and LaTeX renderings.
//!
//! The text form is the model-file expression grammar: `x1`, `y2`,
//! `y2_13` for `z_{13,2}`, `diff(f, x1, y2)` for formal partials, `^` for
//! powers and `p/q` for rational coefficients. Parsing the text form
//! yields the same canonical expression back.

use super::{Atom, Coord, Expr, FuncAtom, Monomial, MultiIndex, Rational};
use num_traits::{One, Signed};
use std::fmt;

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.entries() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Base(i) => write!(f, "x{i}"),
            Coord::Jet(mu, idx) if idx.is_empty() => write!(f, "y{mu}"),
            Coord::Jet(mu, idx) => write!(f, "y{mu}_{idx}"),
        }
    }
}

impl fmt::Display for FuncAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deriv().is_empty() {
            return write!(f, "{}", self.symbol().name());
        }
        write!(f, "diff({}", self.symbol().name())?;
        for c in self.deriv_coords() {
            write!(f, ", {c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Coord(c) => c.fmt(f),
            Atom::Func(a) => a.fmt(f),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (a, p)) in self.factors().iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *p == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{p}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

impl Coord {
    pub fn to_latex(&self) -> String {
        match self {
            Coord::Base(i) => format!("x_{{{i}}}"),
            Coord::Jet(mu, idx) if idx.is_empty() => format!("y_{{{mu}}}"),
            Coord::Jet(mu, idx) => format!("z_{{{idx},{mu}}}"),
        }
    }
}

impl FuncAtom {
    pub fn to_latex(&self) -> String {
        let name = self.symbol().name();
        let k = self.deriv().order();
        if k == 0 {
            return name.to_string();
        }
        let mut den = String::new();
        for c in self.deriv_coords() {
            den.push_str(&format!("\\partial {}", c.to_latex()));
        }
        let pow = if k == 1 { String::new() } else { format!("^{{{k}}}") };
        format!("\\frac{{\\partial{pow} {name}}}{{{den}}}")
    }
}

impl Atom {
    pub fn to_latex(&self) -> String {
        match self {
            Atom::Coord(c) => c.to_latex(),
            Atom::Func(a) => a.to_latex(),
        }
    }
}

impl Monomial {
    pub fn to_latex(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .factors()
            .iter()
            .map(|(a, p)| {
                if *p == 1 {
                    a.to_latex()
                } else if matches!(a, Atom::Func(_)) {
                    format!("\\left({}\\right)^{{{p}}}", a.to_latex())
                } else {
                    format!("{}^{{{p}}}", a.to_latex())
                }
            })
            .collect();
        parts.join(" ")
    }
}

impl Expr {
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            out.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if m.is_one() {
                out.push_str(&latex_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&m.to_latex());
            } else {
                out.push_str(&latex_rational(&mag));
                out.push(' ');
                out.push_str(&m.to_latex());
            }
        }
        out
    }

    /// Text form wrapped in parentheses when it has more than one term.
    pub fn to_factor_string(&self) -> String {
        if self.len() > 1 || self.first_is_negative() {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

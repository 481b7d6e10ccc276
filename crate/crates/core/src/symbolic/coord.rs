use super::MultiIndex;

/// A coordinate on a jet space: `x_i`, `y_μ` (`Jet(μ, ∅)`), or `z_{Iμ}`.
///
/// Indices are 1-based. The derived order puts every base coordinate
/// before every jet coordinate and sorts jet coordinates by `(μ, I)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Base(u8),
    Jet(u8, MultiIndex),
}

impl Coord {
    pub fn x(i: u8) -> Coord {
        Coord::Base(i)
    }

    pub fn y(mu: u8) -> Coord {
        Coord::Jet(mu, MultiIndex::empty())
    }

    /// `z_{Iμ}`; `idx` need not be sorted.
    pub fn z(mu: u8, idx: &[u8]) -> Coord {
        Coord::Jet(mu, MultiIndex::new(idx.iter().copied()))
    }

    /// Jet order: 0 for base and fiber coordinates.
    pub fn order(&self) -> usize {
        match self {
            Coord::Base(_) => 0,
            Coord::Jet(_, idx) => idx.order(),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Coord::Base(_))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Coord::Jet(..))
    }

    /// The coordinate `z_{(I∪{i})μ}` that `D_i` maps `z_{Iμ}` to.
    pub fn shifted(&self, i: u8) -> Option<Coord> {
        match self {
            Coord::Base(_) => None,
            Coord::Jet(mu, idx) => Some(Coord::Jet(*mu, idx.with(i))),
        }
    }
}

//! The target algebra: truncated Laurent series in `z` over exact
//! polynomials in π², L, tau and u, with the minimal-subtraction splitting.

mod laurent;
mod special;
mod sympoly;

pub use laurent::{series_from_rationals, symbolic_term, LaurentSeries};
pub use special::{bn_series, sin_ratio_series};
pub use sympoly::{Monomial, SymPoly, Symbol};

/// Truncation settings shared by every series computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    /// Highest `z` exponent certified for exact arguments that need truncating.
    pub z_hi: i32,
    /// Highest power of tau kept when an expansion in tau has to be cut.
    pub tau_cap: u32,
    /// Largest pole order expected; equals the working tree degree.
    pub pole_bound: i32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            z_hi: 6,
            tau_cap: 4,
            pole_bound: 5,
        }
    }
}

impl Precision {
    /// Extra headroom granted to base values so that products with poles of
    /// order up to `pole_bound` still reach `z_hi`.
    pub fn working_hi(&self) -> i32 {
        self.z_hi + 2 * self.pole_bound
    }
}

/// `π`, the projection onto pole parts.
pub fn minimal_subtraction(a: &LaurentSeries) -> LaurentSeries {
    a.pole_part()
}

/// `Id − π`.
pub fn regular_part(a: &LaurentSeries) -> LaurentSeries {
    a.regular_part()
}

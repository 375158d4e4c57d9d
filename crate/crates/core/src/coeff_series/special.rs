use num_traits::One;

use super::laurent::LaurentSeries;
use super::sympoly::{SymPoly, Symbol};
use crate::rational::{factorial, q, Rational};

/// `sin(π n z) / (π n z) = Σ_k (−1)^k π^{2k} n^{2k} z^{2k} / (2k+1)!`,
/// certified through `z^hi`.
pub fn sin_ratio_series(n: u32, hi: i32) -> LaurentSeries {
    let n2 = q(n as i64) * q(n as i64);
    let mut terms = Vec::new();
    let mut k = 0u32;
    while 2 * k as i32 <= hi {
        let sign = if k.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        };
        let mut c = sign / factorial(2 * k as usize + 1);
        for _ in 0..k {
            c *= &n2;
        }
        terms.push((2 * k as i32, SymPoly::symbol_power(Symbol::Pi2, k, c)));
        k += 1;
    }
    LaurentSeries::from_coeffs(terms, Some(hi))
}

/// `B_n = π / sin(π n z)`, certified through `z^hi`.
pub fn bn_series(n: u32, hi: i32) -> LaurentSeries {
    assert!(n >= 1, "B_n needs n >= 1");
    let ratio = sin_ratio_series(n, hi + 1);
    let inv = ratio
        .invert(&super::Precision::default())
        .expect("sin ratio series has unit constant term");
    inv.mul(&LaurentSeries::monomial(
        -1,
        SymPoly::constant(Rational::new(1.into(), (n as i64).into())),
    ))
}

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::sympoly::{term_text, SymPoly, Symbol};
use super::Precision;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A Laurent series in `z` with [`SymPoly`] coefficients, known exactly on a
/// window of exponents.
///
/// Every coefficient below `lo` is zero. When `hi` is `Some(h)` nothing is
/// known about exponents above `h`; `None` means the value is an exact
/// Laurent polynomial. `tau_hi` plays the same role for powers of the flow
/// parameter: monomials with a higher tau-exponent were discarded.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i32, SymPoly>,
    lo: i32,
    hi: Option<i32>,
    tau_hi: Option<u32>,
}

fn min_opt<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<i32>, k: i32) -> Option<i32> {
    a.map(|h| h + k)
}

impl LaurentSeries {
    /// The exact zero.
    pub fn zero() -> Self {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            lo: 0,
            hi: None,
            tau_hi: None,
        }
    }

    pub fn one() -> Self {
        Self::constant(SymPoly::one())
    }

    pub fn constant(c: SymPoly) -> Self {
        Self::monomial(0, c)
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(SymPoly::constant(c))
    }

    /// The exact value `c · z^k`.
    pub fn monomial(k: i32, c: SymPoly) -> Self {
        Self::from_coeffs([(k, c)], None)
    }

    /// `z^k`.
    pub fn z_pow(k: i32) -> Self {
        Self::monomial(k, SymPoly::one())
    }

    /// Build from explicit coefficients, certified through `hi`.
    pub fn from_coeffs<I>(coeffs: I, hi: Option<i32>) -> Self
    where
        I: IntoIterator<Item = (i32, SymPoly)>,
    {
        let mut map: BTreeMap<i32, SymPoly> = BTreeMap::new();
        for (k, c) in coeffs {
            let slot = map.entry(k).or_default();
            *slot = slot.add(&c);
        }
        let mut s = LaurentSeries {
            coeffs: map,
            lo: 0,
            hi,
            tau_hi: None,
        };
        s.normalize();
        s
    }

    /// `O(z^(hi+1))`: a value known to vanish through `z^hi`.
    pub fn big_o(hi: i32) -> Self {
        Self::from_coeffs([], Some(hi))
    }

    fn normalize(&mut self) {
        if let Some(h) = self.hi {
            self.coeffs.retain(|&k, _| k <= h);
        }
        if let Some(cap) = self.tau_hi {
            for c in self.coeffs.values_mut() {
                *c = c.truncate(Symbol::Tau, cap);
            }
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        // `lo` tracks the valuation; an all-zero window collapses to its top.
        self.lo = match (self.coeffs.keys().next(), self.hi) {
            (Some(&k), _) => k,
            (None, None) => 0,
            (None, Some(h)) => h,
        };
    }

    /// Lower end of the window; coefficients below it vanish.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Upper end of the window, `None` for exact values.
    pub fn hi(&self) -> Option<i32> {
        self.hi
    }

    pub fn tau_hi(&self) -> Option<u32> {
        self.tau_hi
    }

    pub fn is_exact(&self) -> bool {
        self.hi.is_none() && self.tau_hi.is_none()
    }

    /// Exact zero, as opposed to a value that merely vanishes on its window.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.hi.is_none()
    }

    /// No nonzero coefficient on the window.
    pub fn vanishes_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &SymPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `z^k`; fails above the window.
    pub fn coeff(&self, k: i32) -> Result<SymPoly> {
        if let Some(h) = self.hi {
            if k > h {
                return Err(Error::PrecisionExhausted {
                    op: "coefficient",
                    detail: format!("z^{k} requested but the value is only known through z^{h}"),
                });
            }
        }
        Ok(self.coeff_or_zero(k))
    }

    pub(crate) fn coeff_or_zero(&self, k: i32) -> SymPoly {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn has_pole(&self) -> bool {
        self.valuation().is_some_and(|v| v < 0)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.coeffs.values().any(|c| c.contains(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            let slot = coeffs.entry(*k).or_default();
            *slot = slot.add(c);
        }
        let mut s = LaurentSeries {
            coeffs,
            lo: self.lo.min(other.lo),
            hi: min_opt(self.hi, other.hi),
            tau_hi: min_opt(self.tau_hi, other.tau_hi),
        };
        s.normalize();
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.scale_poly(&SymPoly::constant(c.clone()))
    }

    pub fn scale_poly(&self, p: &SymPoly) -> Self {
        let mut s = LaurentSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.mul(p))).collect(),
            ..self.clone()
        };
        s.normalize();
        s
    }

    /// Product; the window is `[lo_a+lo_b, min(lo_a+hi_b, lo_b+hi_a)]`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let hi = min_opt(add_opt(other.hi, self.lo), add_opt(self.hi, other.lo));
        let tau_hi = min_opt(self.tau_hi, other.tau_hi);
        let mut coeffs: BTreeMap<i32, SymPoly> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k = ka + kb;
                if hi.is_some_and(|h| k > h) {
                    break;
                }
                coeffs.entry(k).or_default().add_product(ca, cb, tau_hi);
            }
        }
        let mut s = LaurentSeries {
            coeffs,
            lo: self.lo + other.lo,
            hi,
            tau_hi,
        };
        s.normalize();
        s
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
            lo: self.lo + k,
            hi: add_opt(self.hi, k),
            tau_hi: self.tau_hi,
        }
    }

    /// Forget everything above `z^h`.
    pub fn truncate(&self, h: i32) -> Self {
        let mut s = self.clone();
        s.hi = min_opt(s.hi, Some(h));
        s.normalize();
        s
    }

    /// Forget tau powers above `cap`.
    pub fn truncate_tau(&self, cap: u32) -> Self {
        let mut s = self.clone();
        s.tau_hi = min_opt(s.tau_hi, Some(cap));
        s.normalize();
        s
    }

    /// Minimal subtraction: keep strictly negative powers of `z`.
    pub fn pole_part(&self) -> Self {
        let hi = match self.hi {
            Some(h) if h < -1 => Some(h),
            _ => None,
        };
        let mut s = LaurentSeries {
            coeffs: self
                .coeffs
                .range(..0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            lo: self.lo,
            hi,
            tau_hi: self.tau_hi,
        };
        s.normalize();
        s
    }

    /// `Id − π`: keep the part holomorphic at the origin.
    pub fn regular_part(&self) -> Self {
        let mut s = LaurentSeries {
            coeffs: self
                .coeffs
                .range(0..)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            lo: self.lo.max(0),
            hi: self.hi,
            tau_hi: self.tau_hi,
        };
        s.normalize();
        s
    }

    /// Coefficient of `z^-1`.
    pub fn residue(&self) -> Result<SymPoly> {
        self.coeff(-1).map_err(|_| Error::PrecisionExhausted {
            op: "residue",
            detail: format!("the window ends at z^{} before z^-1", self.hi.unwrap_or(0)),
        })
    }

    /// Value at `z = 0`; fails when a pole is present.
    pub fn eval_at_zero(&self) -> Result<SymPoly> {
        let pole = self.pole_part();
        if !pole.vanishes_on_window() {
            return Err(Error::NotHolomorphic(pole.to_string()));
        }
        self.coeff(0).map_err(|_| Error::PrecisionExhausted {
            op: "eval_at_zero",
            detail: "the window ends before z^0".to_string(),
        })
    }

    /// Set `U = 0` in every coefficient.
    pub fn limit_u_to_zero(&self) -> Self {
        self.map_coeffs(|c| c.at_zero(Symbol::U))
    }

    /// Substitute a rational value for one symbol. A tau-truncated value
    /// cannot be evaluated at a nonzero tau.
    pub fn substitute(&self, s: Symbol, v: &Rational) -> Result<Self> {
        if s == Symbol::Tau && self.tau_hi.is_some() && !v.is_zero() && self.contains(Symbol::Tau) {
            return Err(Error::PrecisionExhausted {
                op: "substitute",
                detail: "tau expansion is truncated".to_string(),
            });
        }
        let mut out = self.map_coeffs(|c| c.substitute(s, v));
        if s == Symbol::Tau {
            out.tau_hi = None;
        }
        Ok(out)
    }

    /// `d/dtau`; one order of tau precision is lost.
    pub fn tau_derivative(&self) -> Self {
        let mut out = self.map_coeffs(|c| c.derivative(Symbol::Tau));
        out.tau_hi = self.tau_hi.map(|t| t.saturating_sub(1));
        if self.tau_hi == Some(0) {
            // Nothing is known about the derivative of a constant-only truncation.
            out.coeffs.clear();
        }
        out.normalize();
        out
    }

    fn map_coeffs<F: Fn(&SymPoly) -> SymPoly>(&self, f: F) -> Self {
        let mut s = LaurentSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, f(c))).collect(),
            ..self.clone()
        };
        s.normalize();
        s
    }

    /// `Σ a^k / k!`, truncated to the window of `self` (or `prec.z_hi` for
    /// exact arguments) and to the tau cap when tau occurs.
    pub fn exp(&self, prec: &Precision) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(Self::one());
        }
        if self.has_pole() {
            return Err(Error::NonTerminating(format!(
                "argument has a pole: {}",
                self.pole_part()
            )));
        }
        let c0 = self.coeff_or_zero(0);
        if c0.min_degree_in(Symbol::Tau) == Some(0) {
            return Err(Error::NonTerminating(format!(
                "constant term {c0} is not nilpotent"
            )));
        }
        let h = self.hi.unwrap_or(prec.z_hi);
        let tau_cap = if self.contains(Symbol::Tau) {
            min_opt(self.tau_hi, Some(prec.tau_cap))
        } else {
            self.tau_hi
        };
        let cut = |s: Self| {
            let s = s.truncate(h);
            match tau_cap {
                Some(c) => s.truncate_tau(c),
                None => s,
            }
        };
        let arg = cut(self.clone());
        let mut term = cut(Self::one());
        let mut sum = term.clone();
        let guard = (h.max(0) as usize + 2) * (tau_cap.unwrap_or(0) as usize + 2);
        for k in 1..=guard {
            term = cut(term
                .mul(&arg)
                .scale(&Rational::new(1.into(), (k as i64).into())));
            if term.vanishes_on_window() {
                return Ok(sum);
            }
            sum = sum.add(&term);
        }
        Err(Error::NonTerminating(format!("exp({self}) did not settle")))
    }

    /// Multiplicative inverse; the leading coefficient must be a nonzero rational.
    pub fn invert(&self, prec: &Precision) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(match self.hi {
                None => Error::NotInvertible("0".to_string()),
                Some(hi) => Error::PrecisionExhausted {
                    op: "invert",
                    detail: format!("no nonzero coefficient known through z^{hi}"),
                },
            });
        };
        let lead = &self.coeffs[&v];
        let c = match lead.as_constant() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(Error::NotInvertible(lead.to_string())),
        };
        let inv_c = c.recip();
        if self.hi.is_none() && self.coeffs.len() == 1 {
            let mut out = Self::monomial(-v, SymPoly::constant(inv_c));
            out.tau_hi = self.tau_hi;
            return Ok(out);
        }
        let h_res = match self.hi {
            Some(h) => h - 2 * v,
            None => prec.z_hi.max(-v),
        };
        let n_max = (h_res + v) as usize;
        let mut r: Vec<SymPoly> = Vec::with_capacity(n_max + 1);
        r.push(SymPoly::constant(inv_c.clone()));
        for n in 1..=n_max {
            let mut acc = SymPoly::zero();
            for k in 1..=n {
                let a = self.coeff_or_zero(v + k as i32);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(&r[n - k]));
                }
            }
            let mut next = acc.scale(&-inv_c.clone());
            if let Some(cap) = self.tau_hi {
                next = next.truncate(Symbol::Tau, cap);
            }
            r.push(next);
        }
        let mut out = LaurentSeries::from_coeffs(
            r.into_iter().enumerate().map(|(n, c)| (n as i32 - v, c)),
            Some(h_res),
        );
        out.tau_hi = self.tau_hi;
        out.normalize();
        Ok(out)
    }

    /// Equality on the common window (and common tau precision).
    pub fn eq_within(&self, other: &Self) -> Result<bool> {
        let hi = min_opt(self.hi, other.hi);
        let lo = self.lo.min(other.lo);
        if hi.is_some_and(|h| h < lo) {
            return Err(Error::PrecisionExhausted {
                op: "compare",
                detail: "the two windows do not overlap".to_string(),
            });
        }
        let tau = min_opt(self.tau_hi, other.tau_hi);
        let diff = self.sub(other);
        Ok(diff
            .coeffs
            .iter()
            .filter(|(k, _)| hi.is_none_or(|h| **k <= h))
            .all(|(_, c)| match tau {
                Some(cap) => c.truncate(Symbol::Tau, cap).is_zero(),
                None => c.is_zero(),
            }))
    }

    /// The common window of `eq_within`, for reporting.
    pub fn common_hi(&self, other: &Self) -> Option<i32> {
        min_opt(self.hi, other.hi)
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.to_string(), c.to_json());
        }
        let mut obj = json!({
            "window": [self.lo, self.hi],
            "coeffs": Value::Object(coeffs),
        });
        if let Some(t) = self.tau_hi {
            obj["tau_hi"] = json!(t);
        }
        obj
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let w = v.get("window")?.as_array()?;
        let lo = w.first()?.as_i64()? as i32;
        let hi = match w.get(1)? {
            Value::Null => None,
            x => Some(x.as_i64()? as i32),
        };
        let mut coeffs = BTreeMap::new();
        for (k, c) in v.get("coeffs")?.as_object()? {
            coeffs.insert(k.parse::<i32>().ok()?, SymPoly::from_json(c)?);
        }
        let tau_hi = match v.get("tau_hi") {
            Some(t) => Some(t.as_u64()? as u32),
            None => None,
        };
        let mut s = LaurentSeries {
            coeffs,
            lo,
            hi,
            tau_hi,
        };
        s.normalize();
        Some(s)
    }
}

impl Default for LaurentSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<SymPoly> for LaurentSeries {
    fn from(c: SymPoly) -> Self {
        LaurentSeries::constant(c)
    }
}

fn z_text(k: i32) -> String {
    match k {
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            // A single-term coefficient is written inline with its sign;
            // longer ones go in parentheses.
            let (neg, body) = if c.len() == 1 {
                let (m, v) = c.terms().next().unwrap();
                (v.is_negative(), term_text(m, &v.abs()))
            } else {
                (false, format!("({c})"))
            };
            let text = match (*k, body.as_str()) {
                (0, _) => body.clone(),
                (_, "1") => z_text(*k),
                _ => format!("{body} {}", z_text(*k)),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{text}")?,
                (true, false) => f.write_str(&text)?,
                (false, true) => write!(f, " - {text}")?,
                (false, false) => write!(f, " + {text}")?,
            }
            first = false;
        }
        if let Some(h) = self.hi {
            if first {
                write!(f, "O({})", z_text(h + 1))?;
            } else {
                write!(f, " + O({})", z_text(h + 1))?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        if let Some(t) = self.tau_hi {
            if self.contains(Symbol::Tau) {
                write!(f, " + O(tau^{})", t + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries[{}..{:?}]({self})", self.lo, self.hi)
    }
}

/// `Σ c_k z^k` from rationals, exact.
pub fn series_from_rationals(coeffs: &[(i32, Rational)]) -> LaurentSeries {
    LaurentSeries::from_coeffs(
        coeffs
            .iter()
            .map(|(k, c)| (*k, SymPoly::constant(c.clone()))),
        None,
    )
}

/// `sym^e · z^k` with coefficient `c`, exact.
pub fn symbolic_term(k: i32, s: Symbol, e: u32, c: Rational) -> LaurentSeries {
    LaurentSeries::monomial(k, SymPoly::symbol_power(s, e, c))
}

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::rational::{fmt_rational, q, Rational};

/// The formal symbols of the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// π²
    Pi2,
    /// log(a/µ)
    L,
    /// the flow parameter t
    Tau,
    /// e^{−t}, used only for t → ∞ limits
    U,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Pi2, Symbol::L, Symbol::Tau, Symbol::U];

    fn index(self) -> usize {
        match self {
            Symbol::Pi2 => 0,
            Symbol::L => 1,
            Symbol::Tau => 2,
            Symbol::U => 3,
        }
    }

    pub fn json_key(self) -> &'static str {
        match self {
            Symbol::Pi2 => "pi2",
            Symbol::L => "L",
            Symbol::Tau => "tau",
            Symbol::U => "u",
        }
    }
}

/// Exponents of (π², L, tau, u).
pub type Monomial = [u32; 4];

/// Polynomial in π², L, tau and u with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `c · s^e`.
    pub fn symbol_power(s: Symbol, e: u32, c: Rational) -> Self {
        let mut m = [0; 4];
        m[s.index()] = e;
        Self::monomial(m, c)
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::symbol_power(s, 1, Rational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the rational constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&[0; 4])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(m).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        SymPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SymPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        out.add_product(self, other, None);
        out
    }

    /// `self += a·b`, dropping monomials whose tau exponent exceeds `tau_cap`.
    pub fn add_product(&mut self, a: &Self, b: &Self, tau_cap: Option<u32>) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                if tau_cap.is_some_and(|cap| m[2] > cap) {
                    continue;
                }
                self.add_term(m, ca * cb);
            }
        }
    }

    /// Highest exponent of `s` present (0 for the zero polynomial).
    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m[s.index()]).max().unwrap_or(0)
    }

    /// Lowest exponent of `s` present, `None` for zero.
    pub fn min_degree_in(&self, s: Symbol) -> Option<u32> {
        self.terms.keys().map(|m| m[s.index()]).min()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms.keys().any(|m| m[s.index()] > 0)
    }

    /// Partial derivative in `s`.
    pub fn derivative(&self, s: Symbol) -> Self {
        let i = s.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = *m;
                m2[i] -= 1;
                out.add_term(m2, c * q(m[i] as i64));
            }
        }
        out
    }

    /// Drop every term whose `s`-exponent exceeds `cap`.
    pub fn truncate(&self, s: Symbol, cap: u32) -> Self {
        let i = s.index();
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[i] <= cap)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitute `s = 0`.
    pub fn at_zero(&self, s: Symbol) -> Self {
        self.truncate(s, 0)
    }

    /// Substitute `s = value`.
    pub fn substitute(&self, s: Symbol, value: &Rational) -> Self {
        let i = s.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut m2 = *m;
            m2[i] = 0;
            let mut f = c.clone();
            for _ in 0..m[i] {
                f *= value;
            }
            out.add_term(m2, f);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "pi2": m[0],
                        "L": m[1],
                        "tau": m[2],
                        "u": m[3],
                        "num": c.numer().to_string(),
                        "den": c.denom().to_string(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let mut out = Self::zero();
        for t in v.as_array()? {
            let e = |k: &str| t.get(k).and_then(Value::as_u64).map(|x| x as u32);
            let m = [e("pi2")?, e("L")?, e("tau")?, e("u")?];
            let num: num_bigint::BigInt = t.get("num")?.as_str()?.parse().ok()?;
            let den: num_bigint::BigInt = t.get("den")?.as_str()?.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            out.add_term(m, Rational::new(num, den));
        }
        Some(out)
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }
}

impl From<Rational> for SymPoly {
    fn from(c: Rational) -> Self {
        SymPoly::constant(c)
    }
}

fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    let names = ["pi", "L", "tau", "u"];
    for (i, name) in names.iter().enumerate() {
        let e = if i == 0 { 2 * m[0] } else { m[i] };
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join(" ")
}

/// One term without its sign, e.g. `L^2/2`, `3 pi^2 L`, `1/6`.
pub(crate) fn term_text(m: &Monomial, mag: &Rational) -> String {
    let mono = monomial_text(m);
    if mono.is_empty() {
        return fmt_rational(mag);
    }
    let n = mag.numer();
    let d = mag.denom();
    let head = if n.is_one() {
        mono
    } else {
        format!("{n} {mono}")
    };
    if d.is_one() {
        head
    } else {
        format!("{head}/{d}")
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&term_text(m, &c.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn arithmetic_and_display() {
        let l = SymPoly::symbol(Symbol::L);
        let p =
            l.mul(&l)
                .scale(&frac(1, 2))
                .add(&SymPoly::symbol_power(Symbol::Pi2, 1, frac(1, 6)));
        assert_eq!(p.to_string(), "L^2/2 + pi^2/6");
        assert_eq!(SymPoly::one().sub(&l).to_string(), "1 - L");
        assert_eq!(l.neg().scale(&q(3)).to_string(), "-3 L");
        assert!(l.sub(&l).is_zero());
    }

    #[test]
    fn derivative_and_substitution() {
        let t = SymPoly::symbol(Symbol::Tau);
        let p = t.mul(&t).mul(&SymPoly::symbol(Symbol::L)).add(&t);
        assert_eq!(
            p.derivative(Symbol::Tau),
            t.mul(&SymPoly::symbol(Symbol::L))
                .scale(&q(2))
                .add(&SymPoly::one())
        );
        assert_eq!(
            p.substitute(Symbol::Tau, &q(2)),
            SymPoly::symbol(Symbol::L)
                .scale(&q(4))
                .add(&SymPoly::int(2))
        );
        assert!(p.at_zero(Symbol::Tau).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p =
            SymPoly::symbol_power(Symbol::Pi2, 2, frac(7, 360)).add(&SymPoly::symbol(Symbol::U));
        assert_eq!(SymPoly::from_json(&p.to_json()).unwrap(), p);
    }
}

//! Lower-triangular matrix representation over a left coideal spanned by
//! trees: the coproduct matrix, `Ψ`, and matrix versions of Birkhoff,
//! the grading and the beta function.

mod atkinson;
mod flow;

pub use atkinson::{
    atkinson_factorize, atkinson_product, nonrecursive_minus, nonrecursive_plus,
    nonrecursive_plus_inverse, plus_from_inverse_recursion, MatrixBirkhoff,
};
pub use flow::{
    aplus_flow_check, beta_all, beta_bch, beta_commutator, beta_conjugation, constant_entries,
    scattering_limit, scattering_prelimit, BetaMatrices, FlowCheck, SymPolyEntry,
};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::characters::{exp_matching, CharacterMap, FlowParam};
use crate::coeff_series::{LaurentSeries, Precision, SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::forests::{admissible_cuts, Forest, Tree};
use crate::hopf::{coproduct_forest, HopfElement};
use crate::rational::{factorial, q, Rational};

/// What a matrix entry must support.
pub trait MatrixEntry: Clone + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Known to be zero without looking at a window.
    fn is_exact_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn to_json(&self) -> Value;
}

impl MatrixEntry for HopfElement {
    fn zero() -> Self {
        HopfElement::zero()
    }
    fn one() -> Self {
        HopfElement::one()
    }
    fn add(&self, other: &Self) -> Self {
        HopfElement::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        HopfElement::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        HopfElement::scale(self, c)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_one(&self) -> bool {
        *self == HopfElement::one()
    }
    fn to_json(&self) -> Value {
        HopfElement::to_json(self)
    }
}

impl MatrixEntry for LaurentSeries {
    fn zero() -> Self {
        LaurentSeries::zero()
    }
    fn one() -> Self {
        LaurentSeries::one()
    }
    fn add(&self, other: &Self) -> Self {
        LaurentSeries::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentSeries::mul(self, other)
    }
    fn scale(&self, c: &Rational) -> Self {
        LaurentSeries::scale(self, c)
    }
    fn is_exact_zero(&self) -> bool {
        LaurentSeries::is_exact_zero(self)
    }
    fn is_one(&self) -> bool {
        self.eq_within(&LaurentSeries::one()).unwrap_or(false)
    }
    fn to_json(&self) -> Value {
        LaurentSeries::to_json(self)
    }
}

/// Dense square matrix; every matrix built here is lower-triangular.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: Vec<Vec<T>>,
}

/// The coproduct matrix.
pub type HopfMatrix = Matrix<HopfElement>;
/// Series-valued matrices such as `Ψ[φ]`.
pub type TriMatrix = Matrix<LaurentSeries>;

impl<T: MatrixEntry> Matrix<T> {
    pub fn from_fn<F: FnMut(usize, usize) -> T>(n: usize, mut f: F) -> Self {
        Matrix {
            rows: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn try_from_fn<F: FnMut(usize, usize) -> Result<T>>(n: usize, mut f: F) -> Result<Self> {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(f(i, j)?);
            }
            rows.push(row);
        }
        Ok(Matrix { rows })
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n);
        for (i, v) in d.into_iter().enumerate() {
            m.rows[i][i] = v;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> Matrix<U> {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&mut f).collect())
                .collect(),
        }
    }

    pub fn try_map<U, F: FnMut(&T) -> Result<U>>(&self, mut f: F) -> Result<Matrix<U>> {
        let mut rows = Vec::with_capacity(self.size());
        for r in &self.rows {
            let mut row = Vec::with_capacity(r.len());
            for v in r {
                row.push(f(v)?);
            }
            rows.push(row);
        }
        Ok(Matrix { rows })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.size(), |i, j| self.rows[i][j].add(&other.rows[i][j]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        Self::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                let a = &self.rows[i][k];
                let b = &other.rows[k][j];
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.size()).all(|i| (i + 1..self.size()).all(|j| self.rows[i][j].is_exact_zero()))
    }

    pub fn is_unipotent(&self) -> bool {
        self.is_lower_triangular() && (0..self.size()).all(|i| self.rows[i][i].is_one())
    }

    fn require_unipotent(&self, op: &str) -> Result<()> {
        if !self.is_lower_triangular() {
            return Err(Error::NotUnipotent(format!(
                "{op}: entries above the diagonal"
            )));
        }
        for i in 0..self.size() {
            if !self.rows[i][i].is_one() {
                return Err(Error::NotUnipotent(format!(
                    "{op}: diagonal entry {} is {}",
                    i + 1,
                    self.rows[i][i]
                )));
            }
        }
        Ok(())
    }

    /// `Σ_k N^k c_k` for the strictly lower part `N = self − 1`; stops at
    /// `k = size − 1` by nilpotency.
    fn nilpotent_series(n_mat: &Self, coeff: impl Fn(usize) -> Rational) -> Self {
        let n = n_mat.size();
        let mut out = Self::identity(n).scale(&coeff(0));
        let mut power = Self::identity(n);
        for k in 1..n.max(1) {
            power = power.mul(n_mat);
            out = out.add(&power.scale(&coeff(k)));
        }
        out
    }

    /// `1 + Σ_{k>0} (−1)^k (M − 1)^k`.
    pub fn inverse_unipotent(&self) -> Result<Self> {
        self.require_unipotent("inverse")?;
        let nil = self.sub(&Self::identity(self.size()));
        Ok(Self::nilpotent_series(&nil, |k| {
            if k % 2 == 0 {
                q(1)
            } else {
                q(-1)
            }
        }))
    }

    /// `Σ_{k>0} (−1)^{k+1} (M − 1)^k / k`.
    pub fn log_unipotent(&self) -> Result<Self> {
        self.require_unipotent("log")?;
        let nil = self.sub(&Self::identity(self.size()));
        Ok(Self::nilpotent_series(&nil, |k| match k {
            0 => Rational::zero(),
            _ if k % 2 == 1 => Rational::one() / q(k as i64),
            _ => -Rational::one() / q(k as i64),
        }))
    }

    /// `exp` of a strictly lower-triangular matrix.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        let n = self.size();
        for i in 0..n {
            for j in i..n {
                if !self.rows[i][j].is_exact_zero() {
                    return Err(Error::NonTerminating(
                        "exp needs a strictly lower-triangular argument".into(),
                    ));
                }
            }
        }
        Ok(Self::nilpotent_series(self, |k| {
            Rational::one() / factorial(k)
        }))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(T::to_json).collect()))
                .collect(),
        )
    }
}

impl<T: MatrixEntry> fmt::Display for Matrix<T> {
    /// One row per line, lower triangle only, entries separated by ` | `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            let cells: Vec<String> = r[..=i].iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" | "))?;
        }
        Ok(())
    }
}

impl<T: MatrixEntry> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(\n{self})")
    }
}

impl TriMatrix {
    /// Entrywise minimal subtraction.
    pub fn matrix_rb(&self) -> Self {
        self.map(LaurentSeries::pole_part)
    }

    /// `Id − R` entrywise.
    pub fn matrix_rb_tilde(&self) -> Self {
        self.map(LaurentSeries::regular_part)
    }

    pub fn tau_derivative(&self) -> Self {
        self.map(LaurentSeries::tau_derivative)
    }

    pub fn truncate_tau(&self, cap: u32) -> Self {
        self.map(|v| v.truncate_tau(cap))
    }

    pub fn limit_u_to_zero(&self) -> Self {
        self.map(LaurentSeries::limit_u_to_zero)
    }

    /// Multiply every entry by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        self.map(|v| v.shift(k))
    }

    /// Whether any entry mentions `s`.
    pub fn contains(&self, s: Symbol) -> bool {
        self.rows.iter().flatten().any(|v| v.contains(s))
    }

    /// First `(i, j)` (zero-based) where the two disagree on their common window.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(usize, usize)>> {
        if self.size() != other.size() {
            return Err(Error::Precondition("matrix sizes differ".into()));
        }
        for i in 0..self.size() {
            for j in 0..self.size() {
                if !self.rows[i][j].eq_within(&other.rows[i][j])? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn eq_within(&self, other: &Self) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// `exp` of a matrix whose entries all carry a factor of tau; the sum
    /// stops once the tau cap is passed.
    pub fn exp_tau(&self, tau_cap: u32) -> Result<Self> {
        for v in self.rows.iter().flatten() {
            for (_, c) in v.coeffs() {
                if c.min_degree_in(Symbol::Tau) == Some(0) {
                    return Err(Error::NonTerminating(format!(
                        "entry {v} has a tau-free term"
                    )));
                }
            }
        }
        let n = self.size();
        let arg = self.truncate_tau(tau_cap);
        let mut out = Self::identity(n).truncate_tau(tau_cap);
        let mut power = out.clone();
        for k in 1..=tau_cap as usize {
            power = power.mul(&arg).truncate_tau(tau_cap);
            out = out.add(&power.scale(&(Rational::one() / factorial(k))));
        }
        Ok(out)
    }
}

/// Basis of a left coideal: the unit first, then trees ordered by degree
/// and canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoidealBasis {
    elements: Vec<Forest>,
}

impl CoidealBasis {
    /// Validate an explicit list of trees (the unit is prepended).
    pub fn new(trees: Vec<Tree>) -> Result<Self> {
        let mut elements = vec![Forest::unit()];
        elements.extend(trees.into_iter().map(Forest::single));
        for w in elements.windows(2) {
            if w[0].degree() > w[1].degree() {
                return Err(Error::Precondition(format!(
                    "basis is not filtration-ordered: {} precedes {}",
                    w[0].to_text(),
                    w[1].to_text()
                )));
            }
        }
        let set: BTreeSet<&Forest> = elements.iter().collect();
        if set.len() != elements.len() {
            return Err(Error::Precondition("basis lists a tree twice".into()));
        }
        for x in &elements[1..] {
            for cut in admissible_cuts(x.as_tree().expect("basis holds trees")) {
                let c = Forest::single(cut.cotree);
                if !set.contains(&c) {
                    return Err(Error::NotCoideal(c.to_text()));
                }
            }
        }
        Ok(CoidealBasis { elements })
    }

    /// Smallest cotree-closed set of trees containing the seeds.
    pub fn closure(seeds: &[Tree]) -> Self {
        let mut seen: BTreeSet<Tree> = BTreeSet::new();
        let mut queue: VecDeque<Tree> = seeds.iter().cloned().collect();
        while let Some(t) = queue.pop_front() {
            if !seen.insert(t.clone()) {
                continue;
            }
            for cut in admissible_cuts(&t) {
                queue.push_back(cut.cotree);
            }
        }
        Self::new(seen.into_iter().collect()).expect("closure is a coideal")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Forest] {
        &self.elements
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.elements.iter().map(Forest::degree).collect()
    }

    pub fn index_of(&self, f: &Forest) -> Option<usize> {
        self.elements.binary_search(f).ok()
    }
}

/// `Δ(x_i) = Σ_j M_ij ⊗ x_j`.
pub fn coproduct_matrix(basis: &CoidealBasis) -> Result<HopfMatrix> {
    let n = basis.len();
    let mut m = HopfMatrix::zero(n);
    for (i, x) in basis.elements().iter().enumerate() {
        for ((l, r), c) in coproduct_forest(x).terms() {
            let j = basis
                .index_of(r)
                .ok_or_else(|| Error::NotCoideal(r.to_text()))?;
            let mut entry = m.get(i, j).clone();
            entry.add_term(l.clone(), c.clone());
            m.set(i, j, entry);
        }
    }
    Ok(m)
}

/// `Ψ[f] = (f(M_ij))`.
pub fn psi(f: &CharacterMap, m: &HopfMatrix) -> Result<TriMatrix> {
    m.try_map(|x| {
        if x.is_zero() {
            Ok(LaurentSeries::zero())
        } else {
            f.evaluate_element(x)
        }
    })
}

/// `Ẑ₀ = diag(|x_i|)`.
pub fn z0_matrix(degrees: &[usize]) -> TriMatrix {
    TriMatrix::diagonal(
        degrees
            .iter()
            .map(|&d| LaurentSeries::rational(q(d as i64)))
            .collect(),
    )
}

/// `diag(e^{s t z |x_i|})` with `s = ±1`, truncated to `prec`.
pub fn exp_z0(degrees: &[usize], t: &FlowParam, sign: i64, prec: &Precision) -> Result<TriMatrix> {
    let sym = flow_symbol(t);
    let mut d = Vec::with_capacity(degrees.len());
    for &deg in degrees {
        let arg = LaurentSeries::monomial(1, sym.scale(&q(sign * deg as i64)));
        d.push(arg.exp(prec)?);
    }
    Ok(TriMatrix::diagonal(d))
}

fn flow_symbol(t: &FlowParam) -> SymPoly {
    match t {
        FlowParam::Rational(r) => SymPoly::constant(r.clone()),
        FlowParam::Tau => SymPoly::symbol(Symbol::Tau),
    }
}

/// `e^{tzẐ₀} φ̂ e^{−tzẐ₀}` in closed form: entry `(i,j)` times
/// `e^{tz(|x_i|−|x_j|)}`.
pub fn scale_conjugate(
    m: &TriMatrix,
    degrees: &[usize],
    t: &FlowParam,
    prec: &Precision,
) -> Result<TriMatrix> {
    let sym = flow_symbol(t);
    TriMatrix::try_from_fn(m.size(), |i, j| {
        let v = m.get(i, j);
        let k = degrees[i] as i64 - degrees[j] as i64;
        if v.is_exact_zero() || k == 0 {
            return Ok(v.clone());
        }
        let arg = LaurentSeries::monomial(1, sym.scale(&q(k)));
        Ok(v.mul(&exp_matching(&arg, v, prec)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{compose_antipode, compose_grading, convolve, toy_character, unit_map};
    use crate::forests::parse_tree;
    use crate::hopf::antipode;

    fn five() -> CoidealBasis {
        CoidealBasis::closure(&[parse_tree("[[][][]]").unwrap()])
    }

    #[test]
    fn closure_examples() {
        let b = five();
        let texts: Vec<String> = b.elements().iter().map(Forest::to_text).collect();
        assert_eq!(texts, ["1", "[]", "[[]]", "[[][]]", "[[][][]]"]);
        assert_eq!(CoidealBasis::closure(&[Tree::leaf()]).len(), 2);
        let l3 = CoidealBasis::closure(&[Tree::ladder(3)]);
        assert_eq!(
            l3.elements().last().unwrap().as_tree(),
            Some(&Tree::ladder(3))
        );
        assert_eq!(l3.len(), 4);
        let err = CoidealBasis::new(vec![Tree::leaf(), parse_tree("[[][]]").unwrap()]).unwrap_err();
        assert_eq!(err, Error::NotCoideal("[[]]".into()));
    }

    #[test]
    fn coproduct_matrix_row_four() {
        let m = coproduct_matrix(&five()).unwrap();
        let row: Vec<String> = m.rows()[3].iter().map(|x| x.to_string()).collect();
        assert_eq!(row, ["[[][]]", "[] []", "2 []", "1", "0"]);
        assert!(m.is_unipotent());
        let s = m.inverse_unipotent().unwrap();
        let entrywise = m.map(antipode);
        assert_eq!(s, entrywise);
    }

    #[test]
    fn psi_is_multiplicative() {
        let p = Precision {
            z_hi: 4,
            tau_cap: 4,
            pole_bound: 4,
        };
        let m = coproduct_matrix(&five()).unwrap();
        let phi = toy_character(p);
        let inv = compose_antipode(&phi);
        let lhs = psi(&convolve(&phi, &inv), &m).unwrap();
        let rhs = psi(&phi, &m).unwrap().mul(&psi(&inv, &m).unwrap());
        assert!(lhs.eq_within(&rhs).unwrap());
        assert!(lhs.eq_within(&psi(&unit_map(p), &m).unwrap()).unwrap());
        let ph = psi(&phi, &m).unwrap();
        let back = ph.log_unipotent().unwrap().exp_nilpotent().unwrap();
        assert!(back.eq_within(&ph).unwrap());
        let degrees = five().degrees();
        let lhs = ph.commutator(&z0_matrix(&degrees).scale(&q(-1)));
        assert!(lhs
            .eq_within(&psi(&compose_grading(&phi), &m).unwrap())
            .unwrap());
        let t = FlowParam::Rational(crate::rational::frac(1, 3));
        let closed = scale_conjugate(&ph, &degrees, &t, &p).unwrap();
        let pw = Precision { z_hi: 20, ..p };
        let product = exp_z0(&degrees, &t, 1, &pw)
            .unwrap()
            .mul(&ph)
            .mul(&exp_z0(&degrees, &t, -1, &pw).unwrap());
        assert!(closed.eq_within(&product).unwrap());
    }
}

//! The matrix beta function, the flow equations in the parameter tau, and
//! the scattering-type limit for the counterterm matrix.

use serde_json::{json, Value};

use crate::characters::FlowParam;
use crate::coeff_series::{LaurentSeries, Precision, SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::rational::{factorial, q, Rational};

use super::{atkinson_factorize, exp_z0, scale_conjugate, z0_matrix, Matrix, TriMatrix};

/// `z Ẑ₀`.
fn z_z0(degrees: &[usize]) -> TriMatrix {
    z0_matrix(degrees).shift(1)
}

/// Read a matrix whose entries must be constants free of L and tau.
pub fn constant_entries(m: &TriMatrix, what: &str) -> Result<Matrix<SymPolyEntry>> {
    m.try_map(|v| {
        let c0 = v.coeff(0)?;
        let rest = v.sub(&LaurentSeries::constant(c0.clone()));
        if !rest.vanishes_on_window() {
            return Err(Error::NotLocal(format!(
                "{what} has a z-dependent entry {v}"
            )));
        }
        if c0.contains(Symbol::L) || c0.contains(Symbol::Tau) || c0.contains(Symbol::U) {
            return Err(Error::NotLocal(format!(
                "{what} has a non-constant entry {c0}"
            )));
        }
        Ok(SymPolyEntry(c0))
    })
}

/// A [`SymPoly`] viewed as a matrix entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPolyEntry(pub SymPoly);

impl std::fmt::Display for SymPolyEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl super::MatrixEntry for SymPolyEntry {
    fn zero() -> Self {
        SymPolyEntry(SymPoly::zero())
    }
    fn one() -> Self {
        SymPolyEntry(SymPoly::one())
    }
    fn add(&self, other: &Self) -> Self {
        SymPolyEntry(self.0.add(&other.0))
    }
    fn mul(&self, other: &Self) -> Self {
        SymPolyEntry(self.0.mul(&other.0))
    }
    fn scale(&self, c: &Rational) -> Self {
        SymPolyEntry(self.0.scale(c))
    }
    fn is_exact_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0 == SymPoly::one()
    }
    fn to_json(&self) -> Value {
        self.0.to_json()
    }
}

/// `φ̂₋ (zẐ₀) φ̂₋⁻¹ − zẐ₀`.
pub fn beta_conjugation(minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
    let zz = z_z0(degrees);
    let b = minus.mul(&zz).mul(&minus.inverse_unipotent()?).sub(&zz);
    constant_entries(&b, "beta (conjugation form)")
}

/// `[Res φ̂₋, Ẑ₀]`.
pub fn beta_commutator(minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
    let res = minus.try_map(|v| v.residue().map(LaurentSeries::constant))?;
    let b = res.commutator(&z0_matrix(degrees));
    constant_entries(&b, "beta (commutator form)")
}

/// `z Σ_{n>0} ad[W]^n(Ẑ₀) / n!` with `W = log φ̂₋`, so that
/// `φ̂₋ = exp(W)`.
pub fn beta_bch(minus: &TriMatrix, degrees: &[usize]) -> Result<Matrix<SymPolyEntry>> {
    let w = minus.log_unipotent()?;
    let mut term = z0_matrix(degrees);
    let mut sum = TriMatrix::zero(degrees.len());
    for n in 1..degrees.len().max(1) {
        term = w.commutator(&term);
        sum = sum.add(&term.scale(&(Rational::from(q(1)) / factorial(n))));
    }
    constant_entries(&sum.shift(1), "beta (exponential form)")
}

/// The three forms of the matrix beta function.
#[derive(Clone, Debug)]
pub struct BetaMatrices {
    pub conjugation: Matrix<SymPolyEntry>,
    pub commutator: Matrix<SymPolyEntry>,
    pub bch: Matrix<SymPolyEntry>,
}

/// All three forms, required to agree.
pub fn beta_all(minus: &TriMatrix, degrees: &[usize]) -> Result<BetaMatrices> {
    let out = BetaMatrices {
        conjugation: beta_conjugation(minus, degrees)?,
        commutator: beta_commutator(minus, degrees)?,
        bch: beta_bch(minus, degrees)?,
    };
    if out.conjugation != out.commutator || out.commutator != out.bch {
        return Err(Error::Consistency(format!(
            "beta forms disagree:\n{}\nvs\n{}\nvs\n{}",
            out.conjugation, out.commutator, out.bch
        )));
    }
    Ok(out)
}

impl BetaMatrices {
    /// The agreed matrix as series.
    pub fn as_series(&self) -> TriMatrix {
        self.conjugation
            .map(|e| LaurentSeries::constant(e.0.clone()))
    }
}

/// Outcome of one flow identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl FlowCheck {
    fn from_diff(name: &'static str, diff: Option<(usize, usize)>) -> Self {
        match diff {
            None => FlowCheck {
                name,
                holds: true,
                detail: "holds".into(),
            },
            Some((i, j)) => FlowCheck {
                name,
                holds: false,
                detail: format!("entry ({}, {}) differs", i + 1, j + 1),
            },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "holds": self.holds, "detail": self.detail })
    }
}

/// The flow equations for `A = φ̂ e^{tzẐ₀}` and its Birkhoff factors,
/// checked as polynomial identities in tau up to `prec.tau_cap`.
pub fn aplus_flow_check(
    phi_hat: &TriMatrix,
    degrees: &[usize],
    prec: &Precision,
) -> Result<Vec<FlowCheck>> {
    if prec.tau_cap < 2 {
        return Err(Error::Precondition(
            "the flow checks need tau_cap >= 2".into(),
        ));
    }
    let tau = FlowParam::Tau;
    let zz = z_z0(degrees);
    let mut checks = Vec::new();

    let phi_t = scale_conjugate(phi_hat, degrees, &tau, prec)?;
    let e_plus = exp_z0(degrees, &tau, 1, prec)?;
    let e_minus = exp_z0(degrees, &tau, -1, prec)?;

    // A(t) = φ̂(t) e^{tzẐ₀} = e^{tzẐ₀} A(0)
    let a = phi_t.mul(&e_plus);
    let a_direct = e_plus.mul(phi_hat);
    checks.push(FlowCheck::from_diff(
        "A(t) = exp(tzZ0) A(0)",
        a.first_difference(&a_direct)?,
    ));
    let a_dot = a.tau_derivative();
    checks.push(FlowCheck::from_diff(
        "dA/dt = zZ0 A",
        a_dot.first_difference(&zz.mul(&a))?,
    ));

    let f0 = atkinson_factorize(phi_hat)?;
    let ft = atkinson_factorize(&phi_t)?;
    let minus_dot = ft.minus.tau_derivative();
    let gphi = minus_dot
        .first_difference(&TriMatrix::zero(degrees.len()))?
        .or(ft.minus.first_difference(&f0.minus)?);
    checks.push(FlowCheck::from_diff("d phi_-/dt = 0", gphi));

    let beta = beta_all(&f0.minus, degrees)?.as_series();
    let gen = beta.add(&zz);
    let a_plus = ft.plus.mul(&e_plus);
    let a_plus_inv = e_minus.mul(&ft.plus_inv);
    let lhs = a_plus.tau_derivative().mul(&a_plus_inv);
    checks.push(FlowCheck::from_diff(
        "dA+/dt A+^-1 = beta + zZ0",
        lhs.first_difference(&gen)?,
    ));

    let tau_gen = gen.map(|v| v.scale_poly(&SymPoly::symbol(Symbol::Tau)));
    let flow = tau_gen.exp_tau(prec.tau_cap)?.mul(&f0.plus).mul(&e_minus);
    checks.push(FlowCheck::from_diff(
        "phi_+(t) = exp(t(beta + zZ0)) phi_+(0) exp(-tzZ0)",
        flow.first_difference(&ft.plus)?,
    ));
    Ok(checks)
}

/// `φ̂₋ e^{−tẐ₀} φ̂₋⁻¹ e^{tẐ₀}` with `e^{−t}` written as `U`: entry `(k, j)`
/// of the right-hand factor is `U^{|x_k|−|x_j|} (φ̂₋⁻¹)_{kj}`.
pub fn scattering_prelimit(minus: &TriMatrix, degrees: &[usize]) -> Result<TriMatrix> {
    let inv = minus.inverse_unipotent()?;
    let mut scaled = TriMatrix::zero(degrees.len());
    for k in 0..degrees.len() {
        for j in 0..degrees.len() {
            let v = inv.get(k, j);
            if v.is_exact_zero() {
                continue;
            }
            if degrees[k] < degrees[j] {
                return Err(Error::Consistency(format!(
                    "negative power of U at ({}, {})",
                    k + 1,
                    j + 1
                )));
            }
            let u = SymPoly::symbol_power(Symbol::U, (degrees[k] - degrees[j]) as u32, q(1));
            scaled.set(k, j, v.scale_poly(&u));
        }
    }
    Ok(minus.mul(&scaled))
}

/// The `t → +∞` limit, i.e. `U → 0`.
pub fn scattering_limit(minus: &TriMatrix, degrees: &[usize]) -> Result<TriMatrix> {
    Ok(scattering_prelimit(minus, degrees)?.limit_u_to_zero())
}

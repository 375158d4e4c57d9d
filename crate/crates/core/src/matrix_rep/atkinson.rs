//! Birkhoff factorization of unipotent series matrices, `φ̂ = φ̂₋⁻¹ φ̂₊`.

use crate::coeff_series::LaurentSeries;
use crate::error::Result;

use super::TriMatrix;

/// Both factors together with the inverse of the holomorphic one and the
/// prepared matrix `R̄̂ = φ̂₋ (φ̂ − 1)`.
#[derive(Clone, Debug)]
pub struct MatrixBirkhoff {
    pub minus: TriMatrix,
    pub plus: TriMatrix,
    pub plus_inv: TriMatrix,
    pub rbar: TriMatrix,
}

/// Solve `X = 1 − R(X a)` and `Y = 1 − R̃(a Y)` with `a = φ̂ − 1`, one
/// entry at a time. `X = φ̂₋` and `Y = φ̂₊⁻¹`.
pub fn atkinson_factorize(phi_hat: &TriMatrix) -> Result<MatrixBirkhoff> {
    let n = phi_hat.size();
    phi_hat.require_unipotent("atkinson_factorize")?;
    let a = phi_hat.sub(&TriMatrix::identity(n));

    // Row i of X a only needs X_ik for j < k <= i.
    let mut x = TriMatrix::identity(n);
    for i in 0..n {
        for j in (0..i).rev() {
            let mut acc = LaurentSeries::zero();
            for k in j + 1..=i {
                acc = acc.add(&x.get(i, k).mul(a.get(k, j)));
            }
            x.set(i, j, acc.pole_part().neg());
        }
    }

    // Column j of a Y only needs Y_kj for j <= k < i.
    let mut y = TriMatrix::identity(n);
    for j in 0..n {
        for i in j + 1..n {
            let mut acc = LaurentSeries::zero();
            for k in j..i {
                acc = acc.add(&a.get(i, k).mul(y.get(k, j)));
            }
            y.set(i, j, acc.regular_part().neg());
        }
    }

    let plus = y.inverse_unipotent()?;
    let rbar = x.mul(&a);
    Ok(MatrixBirkhoff {
        minus: x,
        plus,
        plus_inv: y,
        rbar,
    })
}

/// `X (1 + a) Y`, which is the identity for the factors above.
pub fn atkinson_product(f: &MatrixBirkhoff, phi_hat: &TriMatrix) -> TriMatrix {
    f.minus.mul(phi_hat).mul(&f.plus_inv)
}

/// `φ̂₊ = 1 − R̃(φ̂₊ (φ̂⁻¹ − 1))`, solved row by row.
pub fn plus_from_inverse_recursion(phi_hat: &TriMatrix) -> Result<TriMatrix> {
    let n = phi_hat.size();
    let b = phi_hat.inverse_unipotent()?.sub(&TriMatrix::identity(n));
    let mut p = TriMatrix::identity(n);
    for i in 0..n {
        for j in (0..i).rev() {
            let mut acc = LaurentSeries::zero();
            for k in j + 1..=i {
                acc = acc.add(&p.get(i, k).mul(b.get(k, j)));
            }
            p.set(i, j, acc.regular_part().neg());
        }
    }
    Ok(p)
}

/// Every strictly decreasing chain `i > l_1 > … > l_{k−1} > j`, as index lists.
fn chains(i: usize, j: usize) -> Vec<Vec<usize>> {
    let inner: Vec<usize> = (j + 1..i).rev().collect();
    let mut out = Vec::with_capacity(1 << inner.len());
    for mask in 0u64..(1u64 << inner.len()) {
        let mut c = vec![i];
        c.extend(
            inner
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &l)| l),
        );
        c.push(j);
        out.push(c);
    }
    out
}

/// `Σ_k (−1)^k P(⋯P(P(a_{i l_1}) a_{l_1 l_2})⋯ a_{l_{k−1} j})` when `left`,
/// or the right-nested `P(a_{i l_1} P(a_{l_1 l_2} ⋯ P(a_{l_{k−1} j})))`.
/// The number of chains doubles with each index, so this is only meant for
/// small matrices.
fn chain_formula(
    a: &TriMatrix,
    left: bool,
    proj: fn(&LaurentSeries) -> LaurentSeries,
) -> TriMatrix {
    let n = a.size();
    let mut out = TriMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = LaurentSeries::zero();
            for c in chains(i, j) {
                let steps: Vec<&LaurentSeries> = c.windows(2).map(|w| a.get(w[0], w[1])).collect();
                let mut v = if left {
                    let mut v = proj(steps[0]);
                    for s in &steps[1..] {
                        v = proj(&v.mul(s));
                    }
                    v
                } else {
                    let mut v = proj(steps[steps.len() - 1]);
                    for s in steps[..steps.len() - 1].iter().rev() {
                        v = proj(&s.mul(&v));
                    }
                    v
                };
                if steps.len() % 2 == 1 {
                    v = v.neg();
                }
                acc = acc.add(&v);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Closed-form entries of `φ̂₋`: left-nested pole parts of `σ = φ̂`.
pub fn nonrecursive_minus(sigma: &TriMatrix) -> Result<TriMatrix> {
    sigma.require_unipotent("nonrecursive_minus")?;
    let a = sigma.sub(&TriMatrix::identity(sigma.size()));
    Ok(chain_formula(&a, true, LaurentSeries::pole_part))
}

/// Closed-form entries of `φ̂₊⁻¹`: right-nested regular parts of `σ`.
pub fn nonrecursive_plus_inverse(sigma: &TriMatrix) -> Result<TriMatrix> {
    sigma.require_unipotent("nonrecursive_plus_inverse")?;
    let a = sigma.sub(&TriMatrix::identity(sigma.size()));
    Ok(chain_formula(&a, false, LaurentSeries::regular_part))
}

/// Left-nested regular parts of `σ⁻¹`, which yields `φ̂₊` itself.
pub fn nonrecursive_plus(sigma: &TriMatrix) -> Result<TriMatrix> {
    let inv = sigma.inverse_unipotent()?;
    let b = inv.sub(&TriMatrix::identity(sigma.size()));
    Ok(chain_formula(&b, true, LaurentSeries::regular_part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::toy_character;
    use crate::coeff_series::{Precision, SymPoly};
    use crate::forests::parse_tree;
    use crate::matrix_rep::{coproduct_matrix, psi, CoidealBasis};

    fn toy_matrix() -> TriMatrix {
        let p = Precision {
            z_hi: 4,
            tau_cap: 4,
            pole_bound: 4,
        };
        let basis = CoidealBasis::closure(&[parse_tree("[[][][]]").unwrap()]);
        psi(&toy_character(p), &coproduct_matrix(&basis).unwrap()).unwrap()
    }

    #[test]
    fn factors_and_identities() {
        let ph = toy_matrix();
        let f = atkinson_factorize(&ph).unwrap();
        let one = TriMatrix::identity(ph.size());
        assert!(atkinson_product(&f, &ph).eq_within(&one).unwrap());
        assert!(f
            .minus
            .inverse_unipotent()
            .unwrap()
            .mul(&f.plus)
            .eq_within(&ph)
            .unwrap());
        let minus_dot = LaurentSeries::monomial(-1, SymPoly::int(-1));
        assert!(f.minus.get(1, 0).eq_within(&minus_dot).unwrap());
        assert!(one
            .add(&f.rbar.matrix_rb_tilde())
            .eq_within(&f.plus)
            .unwrap());
        assert!(plus_from_inverse_recursion(&ph)
            .unwrap()
            .eq_within(&f.plus)
            .unwrap());
    }

    #[test]
    fn closed_forms_match_recursion() {
        let ph = toy_matrix();
        let f = atkinson_factorize(&ph).unwrap();
        assert!(nonrecursive_minus(&ph)
            .unwrap()
            .eq_within(&f.minus)
            .unwrap());
        assert!(nonrecursive_plus_inverse(&ph)
            .unwrap()
            .eq_within(&f.plus_inv)
            .unwrap());
        assert!(nonrecursive_plus(&ph).unwrap().eq_within(&f.plus).unwrap());
        let one = TriMatrix::identity(3);
        let g = atkinson_factorize(&one).unwrap();
        assert_eq!(g.minus, one);
        assert_eq!(g.plus, one);
    }
}

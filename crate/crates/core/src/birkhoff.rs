//! Scalar Birkhoff decomposition `φ = φ₋^{⋆−1} ⋆ φ₊` by Bogoliubov's
//! recursion under minimal subtraction.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::characters::{CharacterMap, MapKind};
use crate::coeff_series::{LaurentSeries, Symbol};
use crate::error::{Error, Result};
use crate::forests::{forests_up_to, Forest, Tree};
use crate::hopf::sweedler_terms;

/// Counterterm and renormalized character.
#[derive(Clone, Debug)]
pub struct BirkhoffPair {
    pub minus: CharacterMap,
    pub plus: CharacterMap,
    pub max_degree: usize,
    table: Arc<BTreeMap<Forest, Entry>>,
}

#[derive(Clone, Debug)]
struct Entry {
    rbar: LaurentSeries,
    minus: LaurentSeries,
    plus: LaurentSeries,
}

/// `R̄(x) = φ(x) + Σ φ₋(x′) φ(x″)` over the reduced coproduct, reading the
/// counterterm from values already computed for lower degrees.
pub fn bogoliubov_bar(
    phi: &CharacterMap,
    minus: &BTreeMap<Forest, LaurentSeries>,
    x: &Forest,
) -> Result<LaurentSeries> {
    if x.is_unit() {
        return Err(Error::Precondition(
            "R-bar is not defined on the unit".into(),
        ));
    }
    let mut acc = phi.evaluate(x)?;
    for (l, r, c) in sweedler_terms(x) {
        let m = minus
            .get(&l)
            .ok_or_else(|| Error::MissingLowerDegree(l.to_text()))?;
        acc = acc.add(&m.mul(&phi.evaluate(&r)?).scale(&c));
    }
    Ok(acc)
}

/// Decompose `phi` on every forest of degree at most `max_degree`.
///
/// Forest values come from the recursion itself, not from products, so
/// the multiplicativity of both factors is something to check.
pub fn birkhoff_decompose(phi: &CharacterMap, max_degree: usize) -> Result<BirkhoffPair> {
    let mut minus_vals: BTreeMap<Forest, LaurentSeries> = BTreeMap::new();
    let mut table: BTreeMap<Forest, Entry> = BTreeMap::new();
    minus_vals.insert(Forest::unit(), LaurentSeries::one());
    table.insert(
        Forest::unit(),
        Entry {
            rbar: LaurentSeries::one(),
            minus: LaurentSeries::one(),
            plus: LaurentSeries::one(),
        },
    );
    // forests_up_to is sorted by degree, so lower terms are always ready.
    for x in forests_up_to(max_degree) {
        if x.is_unit() {
            continue;
        }
        let rbar = bogoliubov_bar(phi, &minus_vals, &x)?;
        let minus = rbar.pole_part().neg();
        let plus = rbar.regular_part();
        if plus.hi().is_some_and(|h| h < 0) {
            return Err(Error::PrecisionExhausted {
                op: "birkhoff_decompose",
                detail: format!("phi_+({}) has no certified coefficients", x.to_text()),
            });
        }
        minus_vals.insert(x.clone(), minus.clone());
        table.insert(x, Entry { rbar, minus, plus });
    }
    let table = Arc::new(table);
    let prec = *phi.precision();
    let lookup = |table: Arc<BTreeMap<Forest, Entry>>, pick: fn(&Entry) -> &LaurentSeries| {
        move |x: &Forest| -> Result<LaurentSeries> {
            table
                .get(x)
                .map(|e| pick(e).clone())
                .ok_or(Error::DegreeOutOfRange {
                    degree: x.degree(),
                    max: max_degree,
                })
        }
    };
    let minus = CharacterMap::new(
        format!("{}_-", phi.name()),
        MapKind::Character,
        prec,
        lookup(table.clone(), |e| &e.minus),
    );
    let plus = CharacterMap::new(
        format!("{}_+", phi.name()),
        MapKind::Character,
        prec,
        lookup(table.clone(), |e| &e.plus),
    );
    Ok(BirkhoffPair {
        minus,
        plus,
        max_degree,
        table,
    })
}

impl BirkhoffPair {
    /// The prepared value `R̄(x)` stored during the recursion.
    pub fn rbar(&self, x: &Forest) -> Result<LaurentSeries> {
        self.table
            .get(x)
            .map(|e| e.rbar.clone())
            .ok_or(Error::DegreeOutOfRange {
                degree: x.degree(),
                max: self.max_degree,
            })
    }
}

/// First tree whose counterterm depends on L or has a non-negative power of
/// `z`; `None` means the map is local on the given trees.
pub fn locality_check(minus: &CharacterMap, trees: &[Tree]) -> Result<Option<Tree>> {
    for t in trees {
        let v = minus.evaluate_tree(t)?;
        let holo = v.regular_part();
        if v.contains(Symbol::L) || v.contains(Symbol::Tau) || !holo.vanishes_on_window() {
            return Ok(Some(t.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{
        convolve, first_disagreement, first_non_multiplicative, star_inverse, toy_character,
        unit_map,
    };
    use crate::coeff_series::{Precision, SymPoly};
    use crate::forests::{parse_forest, trees_up_to};

    fn prec() -> Precision {
        Precision {
            z_hi: 4,
            tau_cap: 4,
            pole_bound: 4,
        }
    }

    #[test]
    fn toy_counterterm_at_dot() {
        let phi = toy_character(prec());
        let pair = birkhoff_decompose(&phi, 3).unwrap();
        let m = pair.minus.evaluate(&parse_forest("[]").unwrap()).unwrap();
        let expected = LaurentSeries::monomial(-1, SymPoly::int(-1));
        assert!(m.eq_within(&expected).unwrap());
        assert!(m.is_exact());
        let two = pair
            .minus
            .evaluate_direct(&parse_forest("[] []").unwrap())
            .unwrap();
        assert!(two.eq_within(&m.mul(&m)).unwrap());
    }

    #[test]
    fn reconstruction_and_characters() {
        let p = prec();
        let phi = toy_character(p);
        let pair = birkhoff_decompose(&phi, 4).unwrap();
        let forests = forests_up_to(4);
        let rebuilt = convolve(&star_inverse(&pair.minus).unwrap(), &pair.plus);
        assert!(first_disagreement(&rebuilt, &phi, &forests)
            .unwrap()
            .is_none());
        assert!(first_non_multiplicative(&pair.minus, &forests)
            .unwrap()
            .is_none());
        assert!(first_non_multiplicative(&pair.plus, &forests)
            .unwrap()
            .is_none());
        assert!(locality_check(&pair.minus, &trees_up_to(4))
            .unwrap()
            .is_none());
        assert!(locality_check(&phi, &trees_up_to(1)).unwrap().is_some());
        let direct = convolve(&pair.minus, &phi);
        assert!(first_disagreement(&direct, &pair.plus, &forests)
            .unwrap()
            .is_none());
        let big = crate::forests::Forest::single(crate::forests::Tree::ladder(5));
        assert!(matches!(
            pair.minus.evaluate(&big),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn unit_character_is_its_own_plus_part() {
        let e = unit_map(prec());
        let pair = birkhoff_decompose(&e, 3).unwrap();
        assert!(first_disagreement(&pair.minus, &e, &forests_up_to(3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn missing_lower_value_is_reported() {
        let phi = toy_character(prec());
        let table = BTreeMap::new();
        let err = bogoliubov_bar(&phi, &table, &parse_forest("[[]]").unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingLowerDegree(_)));
    }
}

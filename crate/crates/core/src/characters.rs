//! Linear maps from the Hopf algebra to Laurent series: characters,
//! infinitesimal characters, convolution and the maps built from it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::coeff_series::{bn_series, LaurentSeries, Precision, SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};
use crate::hopf::{antipode_forest, coproduct_forest};
use crate::rational::{factorial, q, Rational};

/// How a map extends from trees to forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Multiplicative, unit to unit.
    Character,
    /// Vanishes on the unit and on products of two or more trees.
    Infinitesimal,
    /// No structure assumed; evaluated forest by forest.
    General,
}

type Evaluator = dyn Fn(&Forest) -> Result<LaurentSeries> + Send + Sync;

struct Inner {
    name: String,
    kind: MapKind,
    prec: Precision,
    eval: Box<Evaluator>,
    cache: Mutex<HashMap<Forest, LaurentSeries>>,
}

/// A memoized linear map `H → A`.
///
/// The evaluator always accepts whole forests. [`CharacterMap::evaluate`]
/// uses the declared kind to reduce forests to trees, while
/// [`CharacterMap::evaluate_direct`] always calls the evaluator, which is
/// what the multiplicativity checks compare against.
#[derive(Clone)]
pub struct CharacterMap {
    inner: Arc<Inner>,
}

impl fmt::Debug for CharacterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CharacterMap({}, {:?})",
            self.inner.name, self.inner.kind
        )
    }
}

/// The flow parameter `t` in `φ^t(x) = e^{t z |x|} φ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowParam {
    Rational(Rational),
    /// The formal symbol tau.
    Tau,
}

impl FlowParam {
    fn symbol(&self) -> SymPoly {
        match self {
            FlowParam::Rational(r) => SymPoly::constant(r.clone()),
            FlowParam::Tau => SymPoly::symbol(Symbol::Tau),
        }
    }
}

impl fmt::Display for FlowParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowParam::Rational(r) => write!(f, "{}", crate::rational::fmt_rational(r)),
            FlowParam::Tau => f.write_str("tau"),
        }
    }
}

impl CharacterMap {
    pub fn new<F>(name: impl Into<String>, kind: MapKind, prec: Precision, eval: F) -> Self
    where
        F: Fn(&Forest) -> Result<LaurentSeries> + Send + Sync + 'static,
    {
        CharacterMap {
            inner: Arc::new(Inner {
                name: name.into(),
                kind,
                prec,
                eval: Box::new(eval),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn general<F>(name: impl Into<String>, prec: Precision, eval: F) -> Self
    where
        F: Fn(&Forest) -> Result<LaurentSeries> + Send + Sync + 'static,
    {
        Self::new(name, MapKind::General, prec, eval)
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn kind(&self) -> MapKind {
        self.inner.kind
    }

    pub fn precision(&self) -> &Precision {
        &self.inner.prec
    }

    /// Same map under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let me = self.clone();
        Self::new(name, self.kind(), *self.precision(), move |f| {
            me.evaluate_direct(f)
        })
    }

    pub fn evaluate_tree(&self, t: &Tree) -> Result<LaurentSeries> {
        self.evaluate(&Forest::single(t.clone()))
    }

    pub fn evaluate(&self, f: &Forest) -> Result<LaurentSeries> {
        if let Some(hit) = self.inner.cache.lock().unwrap().get(f) {
            return Ok(hit.clone());
        }
        let value = match (self.inner.kind, f.trees().len()) {
            (MapKind::Character, 0) => LaurentSeries::one(),
            (MapKind::Infinitesimal, 0) => LaurentSeries::zero(),
            (MapKind::Infinitesimal, n) if n > 1 => LaurentSeries::zero(),
            (MapKind::Character, n) if n > 1 => {
                let mut acc = LaurentSeries::one();
                for t in f.trees() {
                    acc = acc.mul(&self.evaluate_tree(t)?);
                }
                acc
            }
            _ => (self.inner.eval)(f)?,
        };
        self.inner
            .cache
            .lock()
            .unwrap()
            .insert(f.clone(), value.clone());
        Ok(value)
    }

    /// Evaluate without the multiplicative shortcut.
    pub fn evaluate_direct(&self, f: &Forest) -> Result<LaurentSeries> {
        (self.inner.eval)(f)
    }

    /// Value on a finite linear combination of forests.
    pub fn evaluate_element(&self, x: &crate::hopf::HopfElement) -> Result<LaurentSeries> {
        let mut acc = LaurentSeries::zero();
        for (f, c) in x.terms() {
            acc = acc.add(&self.evaluate(f)?.scale(c));
        }
        Ok(acc)
    }
}

/// The convolution unit `e = ηε`.
pub fn unit_map(prec: Precision) -> CharacterMap {
    CharacterMap::new("e", MapKind::Character, prec, |f| {
        Ok(if f.is_unit() {
            LaurentSeries::one()
        } else {
            LaurentSeries::zero()
        })
    })
}

/// The zero map.
pub fn zero_map(prec: Precision) -> CharacterMap {
    CharacterMap::new("0", MapKind::Infinitesimal, prec, |_| {
        Ok(LaurentSeries::zero())
    })
}

/// `B_{w(t_v)}` over every vertex, the subtree sizes collected recursively.
fn push_subtree_sizes(t: &Tree, out: &mut Vec<u32>) {
    out.push(t.degree() as u32);
    for c in t.children() {
        push_subtree_sizes(c, out);
    }
}

/// The toy model `φ(t) = exp(−|t| z L) ∏_v B_{w(t_v)}`, evaluated on whole
/// forests from the same formula.
pub fn toy_character(prec: Precision) -> CharacterMap {
    let b_cache: Arc<Mutex<HashMap<(u32, i32), LaurentSeries>>> =
        Arc::new(Mutex::new(HashMap::new()));
    CharacterMap::new("toy", MapKind::Character, prec, move |f| {
        if f.is_unit() {
            return Ok(LaurentSeries::one());
        }
        let mut sizes = Vec::new();
        for t in f.trees() {
            push_subtree_sizes(t, &mut sizes);
        }
        let d = f.degree() as i32;
        let hi = prec.working_hi() + d;
        let mut acc = LaurentSeries::one();
        for w in sizes {
            let b = {
                let mut cache = b_cache.lock().unwrap();
                cache
                    .entry((w, hi))
                    .or_insert_with(|| bn_series(w, hi))
                    .clone()
            };
            acc = acc.mul(&b);
        }
        let arg = LaurentSeries::monomial(1, SymPoly::symbol_power(Symbol::L, 1, -q(d as i64)));
        Ok(acc.mul(&exp_matching(&arg, &acc, &prec)?))
    })
}

/// `exp(arg)` computed far enough to multiply `value` without losing its window.
pub(crate) fn exp_matching(
    arg: &LaurentSeries,
    value: &LaurentSeries,
    prec: &Precision,
) -> Result<LaurentSeries> {
    let top = value.hi().unwrap_or(prec.working_hi());
    let p = Precision {
        z_hi: (top - value.lo().min(0)).max(0),
        ..*prec
    };
    arg.exp(&p)
}

/// `(f ⋆ g)(x) = Σ f(x′) g(x″)` over the full coproduct.
/// The convolution of two characters is again a character and is tagged so.
pub fn convolve(f: &CharacterMap, g: &CharacterMap) -> CharacterMap {
    let (a, b) = (f.clone(), g.clone());
    let kind = if f.kind() == MapKind::Character && g.kind() == MapKind::Character {
        MapKind::Character
    } else {
        MapKind::General
    };
    CharacterMap::new(
        format!("({} * {})", f.name(), g.name()),
        kind,
        *f.precision(),
        move |x| {
            let mut acc = LaurentSeries::zero();
            for ((l, r), c) in coproduct_forest(x).terms() {
                let fl = a.evaluate(l)?;
                if fl.is_exact_zero() {
                    continue;
                }
                let gr = b.evaluate(r)?;
                acc = acc.add(&fl.mul(&gr).scale(c));
            }
            Ok(acc)
        },
    )
}

pub fn add(f: &CharacterMap, g: &CharacterMap) -> CharacterMap {
    let (a, b) = (f.clone(), g.clone());
    CharacterMap::general(
        format!("({} + {})", f.name(), g.name()),
        *f.precision(),
        move |x| Ok(a.evaluate(x)?.add(&b.evaluate(x)?)),
    )
}

pub fn sub(f: &CharacterMap, g: &CharacterMap) -> CharacterMap {
    let (a, b) = (f.clone(), g.clone());
    CharacterMap::general(
        format!("({} - {})", f.name(), g.name()),
        *f.precision(),
        move |x| Ok(a.evaluate(x)?.sub(&b.evaluate(x)?)),
    )
}

/// Multiply every value by a fixed series.
pub fn mul_series(f: &CharacterMap, s: &LaurentSeries) -> CharacterMap {
    let (a, s) = (f.clone(), s.clone());
    let kind = match f.kind() {
        MapKind::Infinitesimal => MapKind::Infinitesimal,
        _ => MapKind::General,
    };
    CharacterMap::new(
        format!("({s}) {}", f.name()),
        kind,
        *f.precision(),
        move |x| Ok(a.evaluate(x)?.mul(&s)),
    )
}

/// `f ∘ S`.
pub fn compose_antipode(f: &CharacterMap) -> CharacterMap {
    let a = f.clone();
    let kind = match f.kind() {
        MapKind::Character => MapKind::Character,
        _ => MapKind::General,
    };
    CharacterMap::new(
        format!("{} o S", f.name()),
        kind,
        *f.precision(),
        move |x| a.evaluate_element(&antipode_forest(x)),
    )
}

fn require_unital(f: &CharacterMap) -> Result<()> {
    let v = f.evaluate(&Forest::unit())?;
    if v.eq_within(&LaurentSeries::one())? {
        Ok(())
    } else {
        Err(Error::NotInvertible(format!(
            "{} maps the unit to {v}",
            f.name()
        )))
    }
}

fn require_vanishing_on_unit(f: &CharacterMap) -> Result<()> {
    let v = f.evaluate(&Forest::unit())?;
    if v.vanishes_on_window() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{} does not vanish on the unit",
            f.name()
        )))
    }
}

/// `g^{⋆k}(x)` by peeling one factor at a time.
fn star_power(
    g: &CharacterMap,
    k: usize,
    x: &Forest,
    memo: &mut HashMap<(usize, Forest), LaurentSeries>,
) -> Result<LaurentSeries> {
    if k == 0 {
        return Ok(if x.is_unit() {
            LaurentSeries::one()
        } else {
            LaurentSeries::zero()
        });
    }
    if let Some(hit) = memo.get(&(k, x.clone())) {
        return Ok(hit.clone());
    }
    let mut acc = LaurentSeries::zero();
    for ((l, r), c) in coproduct_forest(x).terms() {
        let gl = g.evaluate(l)?;
        if gl.is_exact_zero() {
            continue;
        }
        let rest = star_power(g, k - 1, r, memo)?;
        acc = acc.add(&gl.mul(&rest).scale(c));
    }
    memo.insert((k, x.clone()), acc.clone());
    Ok(acc)
}

/// `e + Σ_k (e − f)^{⋆k}`, which stops at the degree of the argument.
pub fn star_inverse_geometric(f: &CharacterMap) -> Result<CharacterMap> {
    require_unital(f)?;
    let g = sub(&unit_map(*f.precision()), f);
    Ok(CharacterMap::general(
        format!("{}^-1", f.name()),
        *f.precision(),
        move |x| {
            let mut memo = HashMap::new();
            let mut acc = LaurentSeries::zero();
            for k in 0..=x.degree() {
                acc = acc.add(&star_power(&g, k, x, &mut memo)?);
            }
            Ok(acc)
        },
    ))
}

/// Convolution inverse: `f ∘ S` for characters, the geometric series otherwise.
pub fn star_inverse(f: &CharacterMap) -> Result<CharacterMap> {
    require_unital(f)?;
    if f.kind() == MapKind::Character {
        Ok(compose_antipode(f).renamed(format!("{}^-1", f.name())))
    } else {
        star_inverse_geometric(f)
    }
}

/// `exp⋆(ξ) = Σ ξ^{⋆k}/k!`.
pub fn exp_star(xi: &CharacterMap) -> Result<CharacterMap> {
    require_vanishing_on_unit(xi)?;
    let g = xi.clone();
    Ok(CharacterMap::general(
        format!("exp*({})", xi.name()),
        *xi.precision(),
        move |x| {
            let mut memo = HashMap::new();
            let mut acc = LaurentSeries::zero();
            for k in 0..=x.degree() {
                let p = star_power(&g, k, x, &mut memo)?;
                acc = acc.add(&p.scale(&(Rational::from_integer(1.into()) / factorial(k))));
            }
            Ok(acc)
        },
    ))
}

/// `log⋆(f) = Σ_{k≥1} (−1)^{k+1} (f − e)^{⋆k} / k`.
pub fn log_star(f: &CharacterMap) -> Result<CharacterMap> {
    require_unital(f)?;
    let g = sub(f, &unit_map(*f.precision()));
    Ok(CharacterMap::general(
        format!("log*({})", f.name()),
        *f.precision(),
        move |x| {
            let mut memo = HashMap::new();
            let mut acc = LaurentSeries::zero();
            for k in 1..=x.degree() {
                let sign = if k % 2 == 1 { q(1) } else { q(-1) };
                let p = star_power(&g, k, x, &mut memo)?;
                acc = acc.add(&p.scale(&(sign / q(k as i64))));
            }
            Ok(acc)
        },
    ))
}

/// `f ∘ Y`.
pub fn compose_grading(f: &CharacterMap) -> CharacterMap {
    let a = f.clone();
    let kind = match f.kind() {
        MapKind::Infinitesimal => MapKind::Infinitesimal,
        _ => MapKind::General,
    };
    CharacterMap::new(
        format!("{} o Y", f.name()),
        kind,
        *f.precision(),
        move |x| {
            if x.is_unit() {
                return Ok(LaurentSeries::zero());
            }
            Ok(a.evaluate(x)?.scale(&q(x.degree() as i64)))
        },
    )
}

/// `f^t(x) = e^{t z |x|} f(x)`.
pub fn scale_flow(f: &CharacterMap, t: &FlowParam) -> CharacterMap {
    let a = f.clone();
    let sym = t.symbol();
    let prec = *f.precision();
    CharacterMap::new(format!("{}^{t}", f.name()), f.kind(), prec, move |x| {
        let v = a.evaluate(x)?;
        if x.is_unit() || v.is_exact_zero() {
            return Ok(v);
        }
        let arg = LaurentSeries::monomial(1, sym.scale(&q(x.degree() as i64)));
        Ok(v.mul(&exp_matching(&arg, &v, &prec)?))
    })
}

/// `R̃(φ) = φ^{⋆−1} ⋆ (φ ∘ Y)`.
pub fn rtilde(phi: &CharacterMap) -> Result<CharacterMap> {
    let inv = star_inverse(phi)?;
    Ok(convolve(&inv, &compose_grading(phi)).renamed(format!("Rt({})", phi.name())))
}

/// `h_t = φ^{⋆−1} ⋆ φ^t`.
pub fn h_flow(phi: &CharacterMap, t: &FlowParam) -> Result<CharacterMap> {
    let inv = star_inverse(phi)?;
    Ok(convolve(&inv, &scale_flow(phi, t)).renamed(format!("h_{t}({})", phi.name())))
}

/// `F_t = lim_{z→0} h_t`, a scalar-valued map.
pub fn renorm_group(phi: &CharacterMap, t: &Rational) -> Result<CharacterMap> {
    let h = h_flow(phi, &FlowParam::Rational(t.clone()))?;
    Ok(CharacterMap::general(
        format!("F_{}({})", crate::rational::fmt_rational(t), phi.name()),
        *phi.precision(),
        move |x| {
            let v = h.evaluate(x)?;
            v.eval_at_zero()
                .map(LaurentSeries::constant)
                .map_err(|e| match e {
                    Error::NotHolomorphic(p) => Error::NotLocal(format!(
                        "h_t({x}) has pole part {p}; the character is not local or the window is too small"
                    )),
                    other => other,
                })
        },
    ))
}

/// `x ↦ f(x)|_{z=0}` as constant series; fails on a pole.
pub fn value_at_zero(f: &CharacterMap) -> CharacterMap {
    let a = f.clone();
    CharacterMap::new(
        format!("{}(z=0)", f.name()),
        f.kind(),
        *f.precision(),
        move |x| Ok(LaurentSeries::constant(a.evaluate(x)?.eval_at_zero()?)),
    )
}

/// The three residue expressions for the scalar beta function, per tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaValues {
    pub values: BTreeMap<Tree, SymPoly>,
}

/// `β = Res R̃(φ₋^{⋆−1}) = Res(φ₋^{⋆−1} ∘ Y) = −Res(φ₋ ∘ Y)`, all three
/// computed from the counterterm `minus` and required to agree.
///
/// `Res R̃(φ)` for the unrenormalized `φ` is not in this list: it equals
/// `φ₊(0)^{⋆−1} ⋆ β ⋆ φ₊(0)`, which differs from `β` as soon as the
/// renormalized values at `z = 0` are nontrivial.
pub fn beta_scalar(minus: &CharacterMap, trees: &[Tree]) -> Result<BetaValues> {
    let inv = star_inverse(minus)?;
    let rt = rtilde(&inv)?;
    let inv_y = compose_grading(&inv);
    let minus_y = compose_grading(minus);
    let mut values = BTreeMap::new();
    for t in trees {
        let f = Forest::single(t.clone());
        let b1 = rt.evaluate(&f)?.residue()?;
        let b2 = inv_y.evaluate(&f)?.residue()?;
        let b3 = minus_y.evaluate(&f)?.residue()?.neg();
        if b1 != b2 || b2 != b3 {
            return Err(Error::Consistency(format!(
                "beta expressions disagree at {t}: Res Rt = {b1}, Res(phi_-^-1 o Y) = {b2}, -Res(phi_- o Y) = {b3}"
            )));
        }
        if b1.contains(Symbol::L) || b1.contains(Symbol::Tau) {
            return Err(Error::NotLocal(format!("beta({t}) = {b1} is not constant")));
        }
        values.insert(t.clone(), b1);
    }
    Ok(BetaValues { values })
}

/// First forest where `f` and `g` differ on their common window.
pub fn first_disagreement(
    f: &CharacterMap,
    g: &CharacterMap,
    forests: &[Forest],
) -> Result<Option<Forest>> {
    for x in forests {
        if !f.evaluate(x)?.eq_within(&g.evaluate(x)?)? {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// First forest where direct evaluation is not the product of tree values.
pub fn first_non_multiplicative(f: &CharacterMap, forests: &[Forest]) -> Result<Option<Forest>> {
    for x in forests {
        let direct = f.evaluate_direct(x)?;
        let mut prod = LaurentSeries::one();
        for t in x.trees() {
            prod = prod.mul(&f.evaluate_direct(&Forest::single(t.clone()))?);
        }
        if !direct.eq_within(&prod)? {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// First forest where an infinitesimal character should vanish but does not.
pub fn first_non_infinitesimal(f: &CharacterMap, forests: &[Forest]) -> Result<Option<Forest>> {
    for x in forests {
        if x.trees().len() == 1 {
            continue;
        }
        if !f.evaluate_direct(x)?.vanishes_on_window() {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// `x ↦ Res φ(x)` on trees and zero on the unit and on products: an
/// infinitesimal character with constant values.
pub fn residue_infinitesimal(phi: &CharacterMap) -> CharacterMap {
    let a = phi.clone();
    CharacterMap::new(
        format!("Res {}", phi.name()),
        MapKind::Infinitesimal,
        *phi.precision(),
        move |x| {
            if x.trees().len() != 1 {
                return Ok(LaurentSeries::zero());
            }
            Ok(LaurentSeries::constant(a.evaluate(x)?.residue()?))
        },
    )
}

/// `φ ↦ U_γ(δ) = γ ⋆ δ + z (δ ∘ Y)`.
pub fn u_operator(gamma: &CharacterMap, delta: &CharacterMap) -> CharacterMap {
    add(
        &convolve(gamma, delta),
        &mul_series(&compose_grading(delta), &LaurentSeries::z_pow(1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::{forests_up_to, parse_tree};

    fn prec() -> Precision {
        Precision {
            z_hi: 4,
            tau_cap: 4,
            pole_bound: 4,
        }
    }

    fn tree(s: &str) -> Forest {
        Forest::single(parse_tree(s).unwrap())
    }

    #[test]
    fn toy_value_at_dot() {
        let phi = toy_character(prec());
        let v = phi.evaluate(&tree("[]")).unwrap();
        assert_eq!(v.coeff(-1).unwrap(), SymPoly::one());
        assert_eq!(v.coeff(0).unwrap(), SymPoly::symbol(Symbol::L).neg());
    }

    #[test]
    fn toy_value_at_cherry_matches_product() {
        let p = prec();
        let phi = toy_character(p);
        let hi = p.working_hi() + 3;
        let b1 = bn_series(1, hi);
        let b3 = bn_series(3, hi);
        let e = LaurentSeries::monomial(1, SymPoly::symbol_power(Symbol::L, 1, q(-3)))
            .exp(&Precision { z_hi: hi + 3, ..p })
            .unwrap();
        let expected = e.mul(&b3).mul(&b1).mul(&b1);
        assert!(phi
            .evaluate(&tree("[[][]]"))
            .unwrap()
            .eq_within(&expected)
            .unwrap());
    }

    #[test]
    fn unit_law_and_antipode_through_characters() {
        let p = prec();
        let phi = toy_character(p);
        let e = unit_map(p);
        let forests = forests_up_to(3);
        assert!(first_disagreement(&convolve(&e, &phi), &phi, &forests)
            .unwrap()
            .is_none());
        let inv = star_inverse(&phi).unwrap();
        assert!(first_disagreement(&convolve(&phi, &inv), &e, &forests)
            .unwrap()
            .is_none());
        let ladder2 = convolve(&phi, &inv).evaluate(&tree("[[]]")).unwrap();
        assert!(ladder2.vanishes_on_window());
    }

    #[test]
    fn inversion_routes_agree() {
        let phi = toy_character(prec());
        let a = star_inverse(&phi).unwrap();
        let b = star_inverse_geometric(&phi).unwrap();
        assert!(first_disagreement(&a, &b, &forests_up_to(4))
            .unwrap()
            .is_none());
        assert!(star_inverse(&zero_map(prec())).is_err());
    }

    #[test]
    fn exp_log_round_trip() {
        let phi = toy_character(prec());
        let xi = residue_infinitesimal(&phi);
        let ex = exp_star(&xi).unwrap();
        let back = log_star(&ex).unwrap();
        let forests = forests_up_to(4);
        assert!(first_disagreement(&back, &xi, &forests).unwrap().is_none());
        assert!(first_non_multiplicative(&ex, &forests).unwrap().is_none());
    }

    #[test]
    fn grading_is_a_derivation() {
        let p = prec();
        let f = toy_character(p);
        let g = compose_antipode(&f);
        let lhs = compose_grading(&convolve(&f, &g));
        let rhs = add(
            &convolve(&compose_grading(&f), &g),
            &convolve(&f, &compose_grading(&g)),
        );
        assert!(first_disagreement(&lhs, &rhs, &forests_up_to(3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn rtilde_at_dot_is_phi() {
        let phi = toy_character(prec());
        let rt = rtilde(&phi).unwrap();
        let d = tree("[]");
        assert!(rt
            .evaluate(&d)
            .unwrap()
            .eq_within(&phi.evaluate(&d).unwrap())
            .unwrap());
        assert!(first_non_infinitesimal(&rt, &forests_up_to(3))
            .unwrap()
            .is_none());
    }

    #[test]
    fn flow_at_zero_is_identity() {
        let phi = toy_character(prec());
        let f0 = scale_flow(&phi, &FlowParam::Rational(q(0)));
        assert!(first_disagreement(&f0, &phi, &forests_up_to(3))
            .unwrap()
            .is_none());
    }
}

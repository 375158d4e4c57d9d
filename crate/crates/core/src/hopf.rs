//! The Hopf algebra of rooted trees: product, coproduct, counit, antipode
//! and the grading operator on rational linear combinations of forests.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff_series::{LaurentSeries, Precision};
use crate::error::{Error, Result};
use crate::forests::{admissible_cuts, parse_node, Forest, Tree};
use crate::rational::{fmt_rational, parse_rational, q, Rational};

/// A finite rational linear combination of forests.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HopfElement {
    terms: BTreeMap<Forest, Rational>,
}

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1` (empty forest).
    pub fn one() -> Self {
        Self::from_forest(Forest::unit())
    }

    pub fn from_forest(f: Forest) -> Self {
        Self::term(Rational::one(), f)
    }

    pub fn from_tree(t: Tree) -> Self {
        Self::from_forest(Forest::single(t))
    }

    pub fn term(c: Rational, f: Forest) -> Self {
        let mut x = Self::zero();
        x.add_term(f, c);
        x
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, f: &Forest) -> Rational {
        self.terms.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, f: Forest, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(f).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            // Re-borrow to drop the entry we just zeroed.
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HopfElement {
            terms: self.terms.iter().map(|(f, v)| (f.clone(), v * c)).collect(),
        }
    }

    /// Bilinear extension of forest concatenation.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &other.terms {
                out.add_term(fa.mul(fb), ca * cb);
            }
        }
        out
    }

    /// Coefficient of the empty forest.
    pub fn counit(&self) -> Rational {
        self.coefficient(&Forest::unit())
    }

    /// Scale each forest by its degree.
    pub fn apply_grading(&self) -> Self {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            out.add_term(f.clone(), c * q(f.degree() as i64));
        }
        out
    }

    /// `Some(n)` when every term has degree `n`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Forest::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(f, c)| {
                    json!({
                        "coeff": fmt_rational(c),
                        "forest": f.trees().iter().map(Tree::to_bracket).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl From<Tree> for HopfElement {
    fn from(t: Tree) -> Self {
        HopfElement::from_tree(t)
    }
}

impl From<Forest> for HopfElement {
    fn from(f: Forest) -> Self {
        HopfElement::from_forest(f)
    }
}

/// Renders `-[[][]] + 2 [] [[]] - [] [] []`; unit coefficients are elided.
fn write_signed_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a Rational)>,
{
    let mut first = true;
    for (body, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if body == "1" {
            f.write_str(&fmt_rational(&mag))?;
        } else if mag.is_one() {
            f.write_str(&body)?;
        } else {
            write!(f, "{} {}", fmt_rational(&mag), body)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(f, self.terms.iter().map(|(fo, c)| (fo.to_text(), c)))
    }
}

impl fmt::Debug for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HopfElement({self})")
    }
}

/// Parse the signed-sum text form, e.g. `-1 [[][]] + 2 [] [[]]` or `3 + [[]]`.
pub fn parse_element(text: &str) -> Result<HopfElement> {
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    let skip = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_whitespace() {
            p += 1;
        }
        p
    };
    let mut pos = skip(0);
    if pos >= bytes.len() {
        return Err(err(pos, "empty input"));
    }
    let mut out = HopfElement::zero();
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = Rational::one();
        match bytes[pos] {
            b'+' | b'-' => {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos = skip(pos + 1);
            }
            _ if !first => return Err(err(pos, "expected '+' or '-' between terms")),
            _ => {}
        }
        first = false;
        let mut coeff = Rational::one();
        let mut saw_number = false;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            coeff = parse_rational(&text[start..pos])
                .ok_or_else(|| err(start, "malformed coefficient"))?;
            saw_number = true;
            pos = skip(pos);
        }
        let mut trees = Vec::new();
        while bytes.get(pos) == Some(&b'[') {
            trees.push(parse_node(bytes, &mut pos)?);
            pos = skip(pos);
        }
        if !saw_number && trees.is_empty() {
            return Err(err(pos, "expected a coefficient or a tree"));
        }
        out.add_term(Forest::new(trees), sign * coeff);
    }
    Ok(out)
}

/// An element of the tensor square, stored flat by forest pairs.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Forest, Forest), Rational>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.add_term(Forest::unit(), Forest::unit(), Rational::one());
        t
    }

    pub fn add_term(&mut self, a: Forest, b: Forest, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Forest, Forest), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, a: &Forest, b: &Forest) -> Rational {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), -c.clone());
        }
        out
    }

    /// Product in the tensor-square algebra: `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                out.add_term(a.mul(c), b.mul(d), x * y);
            }
        }
        out
    }

    /// `a ⊗ b`, both elements expanded bilinearly.
    pub fn tensor(a: &HopfElement, b: &HopfElement) -> Self {
        let mut out = Self::zero();
        for (fa, ca) in a.terms() {
            for (fb, cb) in b.terms() {
                out.add_term(fa.clone(), fb.clone(), ca * cb);
            }
        }
        out
    }

    /// Apply `f ⊗ g` followed by multiplication.
    pub fn contract<F, G>(&self, f: F, g: G) -> HopfElement
    where
        F: Fn(&Forest) -> HopfElement,
        G: Fn(&Forest) -> HopfElement,
    {
        let mut out = HopfElement::zero();
        for ((a, b), c) in &self.terms {
            out = out.add(&f(a).mul(&g(b)).scale(c));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| {
                    json!({
                        "coeff": fmt_rational(c),
                        "left": a.trees().iter().map(Tree::to_bracket).collect::<Vec<_>>(),
                        "right": b.trees().iter().map(Tree::to_bracket).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms
                .iter()
                .map(|((a, b), c)| (format!("{} ⊗ {}", a.to_text(), b.to_text()), c)),
        )
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement({self})")
    }
}

/// Triple tensors, built on demand for coassociativity checks.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TripleTensor {
    terms: BTreeMap<(Forest, Forest, Forest), Rational>,
}

impl TripleTensor {
    pub fn add_term(&mut self, a: Forest, b: Forest, c: Forest, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (a, b, c);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += coeff;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `(Δ ⊗ Id) ∘ Δ`.
pub fn coproduct_left_iterated(x: &HopfElement) -> TripleTensor {
    let mut out = TripleTensor::default();
    for ((a, b), c) in coproduct(x).terms() {
        for ((a1, a2), c1) in coproduct_forest(a).terms() {
            out.add_term(a1.clone(), a2.clone(), b.clone(), c * c1);
        }
    }
    out
}

/// `(Id ⊗ Δ) ∘ Δ`.
pub fn coproduct_right_iterated(x: &HopfElement) -> TripleTensor {
    let mut out = TripleTensor::default();
    for ((a, b), c) in coproduct(x).terms() {
        for ((b1, b2), c1) in coproduct_forest(b).terms() {
            out.add_term(a.clone(), b1.clone(), b2.clone(), c * c1);
        }
    }
    out
}

static COPRODUCT_CACHE: LazyLock<Mutex<HashMap<Tree, TensorElement>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `Δ(t) = t⊗1 + 1⊗t + Σ_c P_c(t) ⊗ R_c(t)`.
pub fn coproduct_tree(t: &Tree) -> TensorElement {
    if let Some(hit) = COPRODUCT_CACHE.lock().unwrap().get(t) {
        return hit.clone();
    }
    let mut out = TensorElement::zero();
    let tf = Forest::single(t.clone());
    out.add_term(tf.clone(), Forest::unit(), Rational::one());
    out.add_term(Forest::unit(), tf, Rational::one());
    for cut in admissible_cuts(t) {
        out.add_term(cut.pruned, Forest::single(cut.cotree), Rational::one());
    }
    COPRODUCT_CACHE
        .lock()
        .unwrap()
        .insert(t.clone(), out.clone());
    out
}

/// Multiplicative extension to forests; the unit maps to `1⊗1`.
pub fn coproduct_forest(f: &Forest) -> TensorElement {
    f.trees()
        .iter()
        .fold(TensorElement::one(), |acc, t| acc.mul(&coproduct_tree(t)))
}

pub fn coproduct(x: &HopfElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (f, c) in x.terms() {
        for ((a, b), d) in coproduct_forest(f).terms() {
            out.add_term(a.clone(), b.clone(), c * d);
        }
    }
    out
}

/// `Δ(x) − x⊗1 − 1⊗x`.
pub fn reduced_coproduct(x: &HopfElement) -> TensorElement {
    let one = HopfElement::one();
    coproduct(x)
        .sub(&TensorElement::tensor(x, &one))
        .sub(&TensorElement::tensor(&one, x))
}

/// Reduced coproduct of a single forest, as a list of Sweedler terms.
pub(crate) fn sweedler_terms(f: &Forest) -> Vec<(Forest, Forest, Rational)> {
    coproduct_forest(f)
        .terms()
        .filter(|((a, b), _)| !a.is_unit() && !b.is_unit())
        .map(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
        .collect()
}

/// Which side the antipode recursion puts `S` on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AntipodeSide {
    /// `S(x) = −x − Σ S(x′) x″`
    Left,
    /// `S(x) = −x − Σ x′ S(x″)`
    Right,
}

static ANTIPODE_CACHE: LazyLock<Mutex<HashMap<Tree, HopfElement>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `S(t) = −t − Σ_c S(P_c(t)) R_c(t)`, memoized per tree.
pub fn antipode_tree(t: &Tree) -> HopfElement {
    if let Some(hit) = ANTIPODE_CACHE.lock().unwrap().get(t) {
        return hit.clone();
    }
    let mut out = HopfElement::from_tree(t.clone()).neg();
    for cut in admissible_cuts(t) {
        let s = antipode_forest(&cut.pruned);
        out = out.sub(&s.mul(&HopfElement::from_tree(cut.cotree)));
    }
    ANTIPODE_CACHE
        .lock()
        .unwrap()
        .insert(t.clone(), out.clone());
    out
}

/// The antipode is an algebra morphism on this commutative algebra.
pub fn antipode_forest(f: &Forest) -> HopfElement {
    f.trees()
        .iter()
        .fold(HopfElement::one(), |acc, t| acc.mul(&antipode_tree(t)))
}

pub fn antipode(x: &HopfElement) -> HopfElement {
    let mut out = HopfElement::zero();
    for (f, c) in x.terms() {
        out = out.add(&antipode_forest(f).scale(c));
    }
    out
}

/// The antipode from one of the two Sweedler recursions, applied to forests
/// directly rather than through multiplicativity.
pub fn antipode_recursive(x: &HopfElement, side: AntipodeSide) -> HopfElement {
    fn on_forest(
        f: &Forest,
        side: AntipodeSide,
        memo: &mut HashMap<Forest, HopfElement>,
    ) -> HopfElement {
        if f.is_unit() {
            return HopfElement::one();
        }
        if let Some(hit) = memo.get(f) {
            return hit.clone();
        }
        let mut out = HopfElement::from_forest(f.clone()).neg();
        for (a, b, c) in sweedler_terms(f) {
            let term = match side {
                AntipodeSide::Left => on_forest(&a, side, memo).mul(&HopfElement::from_forest(b)),
                AntipodeSide::Right => HopfElement::from_forest(a).mul(&on_forest(&b, side, memo)),
            };
            out = out.sub(&term.scale(&c));
        }
        memo.insert(f.clone(), out.clone());
        out
    }
    let mut memo = HashMap::new();
    let mut out = HopfElement::zero();
    for (f, c) in x.terms() {
        out = out.add(&on_forest(f, side, &mut memo).scale(c));
    }
    out
}

/// `S = Σ_n (ηε − Id)^{⋆n}`; the sum stops at the degree of each forest.
pub fn antipode_geometric(x: &HopfElement) -> HopfElement {
    // (ηε − Id)^{⋆n}(f) = Σ_{(f)} (ηε − Id)(f₁) · (ηε − Id)^{⋆(n−1)}(f₂)
    fn power(n: usize, f: &Forest) -> HopfElement {
        if n == 0 {
            return if f.is_unit() {
                HopfElement::one()
            } else {
                HopfElement::zero()
            };
        }
        if f.degree() < n {
            return HopfElement::zero();
        }
        let mut out = HopfElement::zero();
        for ((a, b), c) in coproduct_forest(f).terms() {
            if a.is_unit() {
                continue;
            }
            let rest = power(n - 1, b);
            if rest.is_zero() {
                continue;
            }
            out = out.sub(&HopfElement::from_forest(a.clone()).mul(&rest).scale(c));
        }
        out
    }
    let mut out = HopfElement::zero();
    for (f, c) in x.terms() {
        for n in 0..=f.degree() {
            out = out.add(&power(n, f).scale(c));
        }
    }
    out
}

pub fn counit(x: &HopfElement) -> Rational {
    x.counit()
}

pub fn apply_grading(x: &HopfElement) -> HopfElement {
    x.apply_grading()
}

/// `θ_s(x)` for rational `s`, kept as a base element and an exponent scale:
/// each forest `f` of `base` carries the factor `exp(|f| · scale)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaImage {
    pub base: HopfElement,
    pub scale: Rational,
}

impl ThetaImage {
    pub fn then(&self, s: &Rational) -> ThetaImage {
        ThetaImage {
            base: self.base.clone(),
            scale: &self.scale + s,
        }
    }

    /// Exponent carried by a given forest.
    pub fn exponent_of(&self, f: &Forest) -> Rational {
        &self.scale * q(f.degree() as i64)
    }
}

pub fn theta_exact(x: &HopfElement, s: &Rational) -> ThetaImage {
    ThetaImage {
        base: x.clone(),
        scale: s.clone(),
    }
}

/// `θ` with a formal argument: each forest of degree `n` is scaled by
/// `exp(n · arg)`, truncated to the working precision.
pub fn theta_formal(
    x: &HopfElement,
    arg: &LaurentSeries,
    prec: &Precision,
) -> Result<BTreeMap<Forest, LaurentSeries>> {
    let mut out = BTreeMap::new();
    for (f, c) in x.terms() {
        let e = arg.scale(&q(f.degree() as i64)).exp(prec)?;
        out.insert(f.clone(), e.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::{forests_up_to, parse_tree};

    fn el(s: &str) -> HopfElement {
        parse_element(s).unwrap()
    }

    fn dot() -> Forest {
        Forest::single(Tree::leaf())
    }

    fn dots(n: usize) -> Forest {
        Forest::new(vec![Tree::leaf(); n])
    }

    #[test]
    fn product_examples() {
        assert_eq!(el("[]").mul(&el("[]")), el("[] []"));
        assert_eq!(
            HopfElement::one().mul(&el("[[]] + 3 [][]")),
            el("[[]] + 3 [] []")
        );
        assert_eq!(el("[] + [[]]").mul(&el("[]")), el("[] [] + [] [[]]"));
    }

    #[test]
    fn coproduct_of_dot_and_cherry() {
        let d = coproduct(&el("[]"));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&dot(), &Forest::unit()), q(1));
        assert_eq!(d.coefficient(&Forest::unit(), &dot()), q(1));

        let cherry = Forest::single(Tree::corolla(3));
        let d = coproduct(&HopfElement::from_forest(cherry.clone()));
        assert_eq!(d.len(), 4);
        assert_eq!(
            d.coefficient(&dot(), &Forest::single(Tree::ladder(2))),
            q(2)
        );
        assert_eq!(d.coefficient(&dots(2), &dot()), q(1));
        assert_eq!(d.coefficient(&cherry, &Forest::unit()), q(1));

        let d = coproduct(&el("[] []"));
        assert_eq!(d.coefficient(&dot(), &dot()), q(2));
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn reduced_coproducts() {
        assert!(reduced_coproduct(&el("[]")).is_zero());
        let mut l2 = TensorElement::zero();
        l2.add_term(dot(), dot(), q(1));
        assert_eq!(reduced_coproduct(&el("[[]]")), l2);

        let mut th = TensorElement::zero();
        th.add_term(dot(), Forest::single(Tree::corolla(3)), q(3));
        th.add_term(dots(2), Forest::single(Tree::ladder(2)), q(3));
        th.add_term(dots(3), dot(), q(1));
        assert_eq!(
            reduced_coproduct(&HopfElement::from_tree(Tree::corolla(4))),
            th
        );
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&el("[]")), el("-1 []"));
        assert_eq!(antipode(&el("[[]]")), el("-[[]] + [] []"));
        assert_eq!(
            antipode(&el("[[][]]")),
            el("-[[][]] + 2 [] [[]] - [] [] []")
        );
        assert_eq!(
            antipode(&HopfElement::from_tree(Tree::corolla(4))),
            el("-[[][][]] + 3 [] [[][]] - 3 [] [] [[]] + [] [] [] []")
        );
        assert_eq!(antipode(&HopfElement::one()), HopfElement::one());
    }

    #[test]
    fn antipode_routes_agree() {
        for f in forests_up_to(5) {
            let x = HopfElement::from_forest(f);
            let s = antipode(&x);
            assert_eq!(antipode_recursive(&x, AntipodeSide::Left), s);
            assert_eq!(antipode_recursive(&x, AntipodeSide::Right), s);
            assert_eq!(antipode_geometric(&x), s);
        }
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit(&HopfElement::one()), q(1));
        assert_eq!(counit(&el("[]")), q(0));
        assert_eq!(counit(&el("3 + 5 [[][]]")), q(3));
    }

    #[test]
    fn grading_examples() {
        assert!(apply_grading(&HopfElement::one()).is_zero());
        assert_eq!(apply_grading(&el("[[][]]")), el("3 [[][]]"));
        assert_eq!(apply_grading(&el("[] []")), el("2 [] []"));
    }

    #[test]
    fn theta_composes_exactly() {
        let cherry = HopfElement::from_tree(Tree::corolla(3));
        let id = theta_exact(&cherry, &q(0));
        assert_eq!(id.base, cherry);
        assert!(id.scale.is_zero());
        let s = crate::rational::frac(1, 2);
        let t = crate::rational::frac(-2, 3);
        let lhs = theta_exact(&cherry, &t).then(&s);
        let rhs = theta_exact(&cherry, &(&s + &t));
        assert_eq!(lhs, rhs);
        assert_eq!(
            rhs.exponent_of(&Forest::single(Tree::corolla(3))),
            crate::rational::frac(-1, 2)
        );
    }

    #[test]
    fn text_form_round_trips() {
        let x = el("-1 [[][]] + 2 [] [[]]");
        assert_eq!(x.to_string(), "-[[][]] + 2 [] [[]]");
        assert_eq!(el(&x.to_string()), x);
        assert_eq!(el("1/2 [] [] - 3").to_string(), "-3 + 1/2 [] []");
        assert_eq!(HopfElement::zero().to_string(), "0");
        assert!(parse_element("2 [] +").is_err());
        assert!(parse_element("[] [[]").is_err());
        assert!(parse_element("x").is_err());
        assert!(parse_element("[] [[]] 3").is_err());
        assert_eq!(
            parse_element("[[]]").unwrap(),
            HopfElement::from_tree(parse_tree("[[]]").unwrap())
        );
    }
}

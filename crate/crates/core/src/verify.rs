//! The full identity suite as one deterministic report.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::birkhoff::{birkhoff_decompose, locality_check, BirkhoffPair};
use crate::characters::{
    add, beta_scalar, compose_antipode, compose_grading, convolve, exp_star, first_disagreement,
    first_non_infinitesimal, first_non_multiplicative, h_flow, log_star, mul_series, renorm_group,
    residue_infinitesimal, rtilde, scale_flow, star_inverse, star_inverse_geometric, toy_character,
    u_operator, unit_map, value_at_zero, CharacterMap, FlowParam,
};
use crate::coeff_series::{LaurentSeries, Precision, SymPoly, Symbol};
use crate::error::Result;
use crate::forests::{
    admissible_cuts, enumerate_trees, forests_up_to, parse_tree, tree_factorial,
    tree_factorial_by_edges, trees_up_to, Forest, Tree,
};
use crate::hopf::{
    antipode, antipode_geometric, antipode_recursive, apply_grading, coproduct,
    coproduct_left_iterated, coproduct_right_iterated, AntipodeSide, HopfElement, TensorElement,
};
use crate::matrix_rep::{
    aplus_flow_check, atkinson_factorize, atkinson_product, beta_all, coproduct_matrix,
    nonrecursive_minus, nonrecursive_plus, nonrecursive_plus_inverse, plus_from_inverse_recursion,
    psi, scattering_limit, z0_matrix, CoidealBasis, HopfMatrix, TriMatrix,
};
use crate::rational::{frac, q};

/// Known tree counts by degree, used as a fixed reference.
const TREE_COUNTS: [usize; 8] = [1, 1, 2, 4, 9, 20, 48, 115];

/// What to verify and at which precision.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_degree: usize,
    pub prec: Precision,
    /// Each seed generates one coideal for the matrix checks.
    pub seeds: Vec<Tree>,
    pub samples: usize,
    pub rng_seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_degree: 5,
            prec: Precision::default(),
            seeds: vec![
                parse_tree("[[][][]]").expect("literal"),
                parse_tree("[[[]]]").expect("literal"),
            ],
            samples: 100,
            rng_seed: 2006,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
        }
        let failed = self.failures().count();
        if failed == 0 {
            let _ = writeln!(out, "all {} identities hold", self.checks.len());
        } else {
            let _ = writeln!(out, "{failed} of {} identities failed", self.checks.len());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
            "passed": self.all_passed(),
        })
    }
}

/// `Ok(Ok(detail))` passes, `Ok(Err(why))` fails, `Err(e)` fails with the error.
type Outcome = Result<std::result::Result<String, String>>;

struct Suite {
    report: Report,
}

impl Suite {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let (passed, detail) = match f() {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let name = name.into();
        self.report.checks.push(CheckResult {
            name,
            passed,
            detail,
        });
    }
}

fn pass(detail: impl Into<String>) -> Outcome {
    Ok(Ok(detail.into()))
}

fn fail(detail: impl Into<String>) -> Outcome {
    Ok(Err(detail.into()))
}

fn agree(f: &CharacterMap, g: &CharacterMap, forests: &[Forest], what: &str) -> Outcome {
    match first_disagreement(f, g, forests)? {
        None => pass(format!("{what} on {} forests", forests.len())),
        Some(x) => fail(format!("{what} fails at {}", x.to_text())),
    }
}

/// Runs `next` only when `first` passed.
fn then(first: std::result::Result<String, String>, next: impl FnOnce() -> Outcome) -> Outcome {
    match first {
        Ok(_) => next(),
        bad => Ok(bad),
    }
}

fn matrices_agree(a: &TriMatrix, b: &TriMatrix, what: &str) -> Outcome {
    match a.first_difference(b)? {
        None => pass(format!("{what} ({0}x{0})", a.size())),
        Some((i, j)) => fail(format!("{what} fails at entry ({}, {})", i + 1, j + 1)),
    }
}

/// A random truncated series with a pole of order at most `pole_bound`.
pub fn random_series<R: Rng>(rng: &mut R, prec: &Precision) -> LaurentSeries {
    let lo = rng.gen_range(-prec.pole_bound..=1);
    let exact = rng.gen_ratio(1, 4);
    let top = if exact {
        lo + rng.gen_range(0..=3)
    } else {
        lo + rng.gen_range(1..=(prec.z_hi + prec.pole_bound).max(2))
    };
    let mut coeffs = Vec::new();
    for k in lo..=top {
        if rng.gen_ratio(1, 4) {
            continue;
        }
        let mut c = SymPoly::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let m = [rng.gen_range(0..=1), rng.gen_range(0..=2), 0, 0];
            let r = frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            c = c.add(&SymPoly::monomial(m, r));
        }
        coeffs.push((k, c));
    }
    LaurentSeries::from_coeffs(coeffs, if exact { None } else { Some(top) })
}

/// A random lower-triangular matrix of series.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, prec: &Precision) -> TriMatrix {
    TriMatrix::from_fn(n, |i, j| {
        if j > i {
            LaurentSeries::zero()
        } else {
            random_series(rng, prec)
        }
    })
}

/// `π(π(a)b + aπ(b) − ab) = π(a)π(b)`.
pub fn rota_baxter_holds(a: &LaurentSeries, b: &LaurentSeries) -> Result<bool> {
    let (pa, pb) = (a.pole_part(), b.pole_part());
    let lhs = pa.mul(b).add(&a.mul(&pb)).sub(&a.mul(b)).pole_part();
    lhs.eq_within(&pa.mul(&pb))
}

/// `R(α R̃(β)) + R̃(R(α) β) = R(α) R̃(β)`.
pub fn rota_baxter_second_holds(a: &LaurentSeries, b: &LaurentSeries) -> Result<bool> {
    let (pa, tb) = (a.pole_part(), b.regular_part());
    let lhs = a.mul(&tb).pole_part().add(&pa.mul(b).regular_part());
    lhs.eq_within(&pa.mul(&tb))
}

/// The Rota–Baxter relation lifted entrywise to matrices.
pub fn matrix_rota_baxter_holds(a: &TriMatrix, b: &TriMatrix) -> Result<bool> {
    let (ra, rb) = (a.matrix_rb(), b.matrix_rb());
    let lhs = ra.mul(b).add(&a.mul(&rb)).sub(&a.mul(b)).matrix_rb();
    lhs.eq_within(&ra.mul(&rb))
}

/// A cheaper precision that still covers poles up to `degree`.
fn light(p: &Precision, degree: usize) -> Precision {
    Precision {
        z_hi: p.z_hi.min(2),
        tau_cap: p.tau_cap,
        pole_bound: p.pole_bound.min(degree as i32),
    }
}

/// Run every check.
pub fn verify(opts: &VerifyOptions) -> Report {
    let mut s = Suite {
        report: Report::default(),
    };
    let n = opts.max_degree;
    let p = opts.prec;
    combinatorics(&mut s, n);
    hopf_axioms(&mut s, n);
    rota_baxter(&mut s, opts);

    // The convolution identities below are checked on forests of degree at
    // most 4, where a shorter window certifies the same coefficients.
    characters(&mut s, &toy_character(light(&p, n.min(4))), n);
    let phi = toy_character(p);
    let pair = birkhoff_decompose(&phi, n);
    match &pair {
        Ok(pair) => birkhoff(&mut s, &phi, pair, n),
        Err(e) => s.run("Birkhoff decomposition", || fail(format!("error: {e}"))),
    }
    for seed in &opts.seeds {
        let basis = CoidealBasis::closure(std::slice::from_ref(seed));
        if basis.elements().iter().any(|x| x.degree() > n) {
            s.run(format!("[{}] coideal", seed.to_bracket()), || {
                fail(format!("seed has degree above the working degree {n}"))
            });
            continue;
        }
        if let Ok(pair) = &pair {
            let top = basis.degrees().into_iter().max().unwrap_or(0);
            let lp = light(&p, top);
            matrices(&mut s, &toy_character(lp), pair, &basis, seed, &lp);
        }
    }
    s.report
}

fn combinatorics(s: &mut Suite, n: usize) {
    s.run("tree counts", || {
        let got: Vec<usize> = (1..=n).map(|d| enumerate_trees(d).len()).collect();
        let want: Vec<usize> = (1..=n)
            .map(|d| TREE_COUNTS.get(d - 1).copied().unwrap_or(0))
            .collect();
        if n > TREE_COUNTS.len() || got == want {
            pass(format!("{got:?}"))
        } else {
            fail(format!("got {got:?}, expected {want:?}"))
        }
    });
    let trees = trees_up_to(n);
    s.run("cut degrees add up", || {
        for t in &trees {
            for c in admissible_cuts(t) {
                if c.pruned.degree() + c.cotree.degree() != t.degree() || c.pruned.degree() == 0 {
                    return fail(format!(
                        "cut of {t} gives {} / {}",
                        c.pruned.to_text(),
                        c.cotree
                    ));
                }
            }
        }
        pass(format!("{} trees", trees.len()))
    });
    s.run("bracket round trip", || {
        for t in &trees {
            if parse_tree(&t.to_bracket())? != *t {
                return fail(format!("{t} does not round-trip"));
            }
        }
        pass(format!("{} trees", trees.len()))
    });
    s.run("tree factorial by vertices and by edges", || {
        for t in &trees {
            if tree_factorial(t) != tree_factorial_by_edges(t) {
                return fail(format!("{t}"));
            }
        }
        pass(format!("{} trees", trees.len()))
    });
}

fn hopf_axioms(s: &mut Suite, n: usize) {
    let forests = forests_up_to(n);
    let count = forests.len();
    let each = |f: &dyn Fn(&HopfElement) -> bool| -> Outcome {
        for x in &forests {
            if !f(&HopfElement::from_forest(x.clone())) {
                return fail(format!("fails at {}", x.to_text()));
            }
        }
        pass(format!("{count} forests up to degree {n}"))
    };
    s.run("coassociativity", || {
        each(&|x| coproduct_left_iterated(x) == coproduct_right_iterated(x))
    });
    s.run("counit", || {
        each(&|x| {
            let d = coproduct(x);
            let eps = |f: &Forest| {
                HopfElement::one().scale(&HopfElement::from_forest(f.clone()).counit())
            };
            let id = |f: &Forest| HopfElement::from_forest(f.clone());
            d.contract(eps, id) == *x && d.contract(id, eps) == *x
        })
    });
    s.run("antipode axiom on both sides", || {
        each(&|x| {
            let d = coproduct(x);
            let unit = HopfElement::one().scale(&x.counit());
            let sf = |f: &Forest| antipode(&HopfElement::from_forest(f.clone()));
            let id = |f: &Forest| HopfElement::from_forest(f.clone());
            d.contract(sf, id) == unit && d.contract(id, sf) == unit
        })
    });
    s.run("antipode recursions and geometric series agree", || {
        each(&|x| {
            let a = antipode(x);
            a == antipode_recursive(x, AntipodeSide::Left)
                && a == antipode_recursive(x, AntipodeSide::Right)
                && a == antipode_geometric(x)
        })
    });
    s.run("grading is a biderivation", || {
        each(&|x| {
            let lhs = coproduct(&apply_grading(x));
            let mut rhs = TensorElement::zero();
            for ((a, b), c) in coproduct(x).terms() {
                let k = q((a.degree() + b.degree()) as i64) * c;
                rhs.add_term(a.clone(), b.clone(), k);
            }
            lhs == rhs
        })
    });
}

fn rota_baxter(s: &mut Suite, opts: &VerifyOptions) {
    let p = opts.prec;
    let k = opts.samples;
    s.run("Rota-Baxter relation for pole parts", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
        for i in 0..k {
            let (a, b) = (random_series(&mut rng, &p), random_series(&mut rng, &p));
            if !rota_baxter_holds(&a, &b)? {
                return fail(format!("sample {i}: a = {a}, b = {b}"));
            }
            if !rota_baxter_second_holds(&a, &b)? {
                return fail(format!("second form, sample {i}: a = {a}, b = {b}"));
            }
            let back = a.pole_part().add(&a.regular_part());
            if !back.eq_within(&a)? || a.pole_part().pole_part() != a.pole_part() {
                return fail(format!("splitting, sample {i}: {a}"));
            }
        }
        pass(format!(
            "{k} seeded pairs, both forms, splitting and idempotence"
        ))
    });
    s.run("Rota-Baxter relation for matrices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed ^ 0x5eed);
        for i in 0..k {
            let (a, b) = (
                random_matrix(&mut rng, 4, &p),
                random_matrix(&mut rng, 4, &p),
            );
            if !matrix_rota_baxter_holds(&a, &b)? {
                return fail(format!("sample {i}"));
            }
            if a.matrix_rb().matrix_rb() != a.matrix_rb() {
                return fail(format!("idempotence, sample {i}"));
            }
        }
        pass(format!("{k} seeded 4x4 pairs"))
    });
}

fn characters(s: &mut Suite, phi: &CharacterMap, n: usize) {
    let p = *phi.precision();
    let e = unit_map(p);
    let f4 = forests_up_to(n.min(4));
    let f3 = forests_up_to(n.min(3));
    s.run("unit law for convolution", || {
        then(agree(&convolve(&e, phi), phi, &f4, "e * phi")?, || {
            agree(&convolve(phi, &e), phi, &f4, "e * phi = phi = phi * e")
        })
    });
    s.run("convolution of characters is a character", || {
        let half = scale_flow(phi, &FlowParam::Rational(frac(1, 2)));
        let prod = convolve(&compose_antipode(phi), &half);
        match first_non_multiplicative(&prod, &f4)? {
            Some(x) => fail(format!("fails at {}", x.to_text())),
            None => pass(format!("(phi o S) * phi^(1/2) on {} forests", f4.len())),
        }
    });
    s.run("inverse: antipode and geometric series agree", || {
        let a = star_inverse(phi)?;
        let b = star_inverse_geometric(phi)?;
        match agree(&a, &b, &f4, "phi o S = geometric inverse")? {
            Ok(_) => agree(&convolve(phi, &a), &e, &f4, "phi * phi^-1 = e"),
            bad => Ok(bad),
        }
    });
    s.run("exp and log are inverse", || {
        let xi = residue_infinitesimal(phi);
        let ex = exp_star(&xi)?;
        if let Some(x) = first_non_multiplicative(&ex, &f4)? {
            return fail(format!(
                "exp of an infinitesimal character is not multiplicative at {}",
                x.to_text()
            ));
        }
        agree(&log_star(&ex)?, &xi, &f4, "log(exp(xi)) = xi")
    });
    s.run("grading is a derivation of convolution", || {
        let g = compose_antipode(phi);
        let lhs = compose_grading(&convolve(phi, &g));
        let rhs = add(
            &convolve(&compose_grading(phi), &g),
            &convolve(phi, &compose_grading(&g)),
        );
        agree(&lhs, &rhs, &f4, "(f*g) o Y = (f o Y)*g + f*(g o Y)")
    });
    s.run("flow is a one-parameter group", || {
        let (a, b) = (frac(1, 2), frac(1, 3));
        let lhs = scale_flow(
            &scale_flow(phi, &FlowParam::Rational(a.clone())),
            &FlowParam::Rational(b.clone()),
        );
        let rhs = scale_flow(phi, &FlowParam::Rational(a + b));
        agree(&lhs, &rhs, &f4, "(phi^s)^t = phi^(s+t)")
    });
    s.run("flow generator is z (phi o Y)", || {
        let ft = scale_flow(phi, &FlowParam::Tau);
        let zy = mul_series(&compose_grading(phi), &LaurentSeries::z_pow(1));
        for x in &f4 {
            let d = ft
                .evaluate(x)?
                .tau_derivative()
                .substitute(Symbol::Tau, &q(0))?;
            if !d.eq_within(&zy.evaluate(x)?)? {
                return fail(format!("fails at {}", x.to_text()));
            }
        }
        pass(format!("{} forests", f4.len()))
    });
    s.run("Rt(phi) is infinitesimal", || {
        let rt = rtilde(phi)?;
        match first_non_infinitesimal(&rt, &f4)? {
            Some(x) => fail(format!("nonzero on {}", x.to_text())),
            None => agree(
                &convolve(phi, &rt),
                &compose_grading(phi),
                &f4,
                "phi * Rt(phi) = phi o Y",
            ),
        }
    });
    s.run("cocycle property of Rt", || {
        let half = scale_flow(phi, &FlowParam::Rational(frac(1, 2)));
        let third = scale_flow(phi, &FlowParam::Rational(frac(1, 3)));
        let plus = birkhoff_decompose(phi, n.min(3))?.plus;
        let pairs = [
            (phi.clone(), half),
            (third, phi.clone()),
            (phi.clone(), plus),
        ];
        for (f, g) in &pairs {
            let lhs = rtilde(&convolve(f, g))?;
            let rhs = add(
                &rtilde(g)?,
                &convolve(&convolve(&star_inverse(g)?, &rtilde(f)?), g),
            );
            if let Some(x) = first_disagreement(&lhs, &rhs, &f3)? {
                return fail(format!(
                    "pair ({}, {}) fails at {}",
                    f.name(),
                    g.name(),
                    x.to_text()
                ));
            }
        }
        pass(format!(
            "{} character pairs on {} forests",
            pairs.len(),
            f3.len()
        ))
    });
    s.run("iterated grading through U", || {
        let gamma = mul_series(&rtilde(phi)?, &LaurentSeries::z_pow(1));
        let mut lhs = phi.clone();
        let mut u = e.clone();
        for k in 0..=3 {
            if k > 0 {
                lhs = compose_grading(&lhs);
                u = u_operator(&gamma, &u);
            }
            let l = mul_series(&lhs, &LaurentSeries::z_pow(k));
            if let Some(x) = first_disagreement(&l, &convolve(phi, &u), &f4)? {
                return fail(format!("n = {k} fails at {}", x.to_text()));
            }
        }
        pass(format!("n = 0..3 on {} forests", f4.len()))
    });
    s.run("flow of h as a differential equation", || {
        let h = h_flow(phi, &FlowParam::Tau)?;
        let z = LaurentSeries::z_pow(1);
        let rhs = add(
            &convolve(&h, &mul_series(&rtilde(&h)?, &z)),
            &convolve(&mul_series(&rtilde(phi)?, &z), &h),
        );
        for x in &f3 {
            if !h
                .evaluate(x)?
                .tau_derivative()
                .eq_within(&rhs.evaluate(x)?)?
            {
                return fail(format!("fails at {}", x.to_text()));
            }
        }
        pass(format!("{} forests, tau up to {}", f3.len(), p.tau_cap))
    });
    s.run("renormalization group law", || {
        let (a, b) = (frac(1, 2), frac(1, 3));
        let lhs = convolve(&renorm_group(phi, &a)?, &renorm_group(phi, &b)?);
        let rhs = renorm_group(phi, &(a.clone() + b.clone()))?;
        match agree(&lhs, &rhs, &f3, "F_s * F_t = F_(s+t)")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        let hs = h_flow(phi, &FlowParam::Rational(a.clone()))?;
        let ht = h_flow(phi, &FlowParam::Rational(b.clone()))?;
        let lhs = h_flow(phi, &FlowParam::Rational(a.clone() + b))?;
        let rhs = convolve(&hs, &scale_flow(&ht, &FlowParam::Rational(a)));
        agree(
            &lhs,
            &rhs,
            &f3,
            "F_s * F_t = F_(s+t) and h_(s+t) = h_s * (h_t)^s",
        )
    });
}

fn birkhoff(s: &mut Suite, phi: &CharacterMap, pair: &BirkhoffPair, n: usize) {
    let forests = forests_up_to(n);
    let trees = trees_up_to(n);
    s.run("counterterm of a single vertex is -1/z", || {
        let v = pair.minus.evaluate_tree(&Tree::leaf())?;
        if v.eq_within(&LaurentSeries::monomial(-1, SymPoly::int(-1)))? {
            pass(v.to_string())
        } else {
            fail(v.to_string())
        }
    });
    s.run("counterterms are local", || {
        match locality_check(&pair.minus, &trees)? {
            None => pass(format!("{} trees, no L and only poles", trees.len())),
            Some(t) => fail(format!("{t}: {}", pair.minus.evaluate_tree(&t)?)),
        }
    });
    s.run(
        "phi itself is flagged as non-local",
        || match locality_check(phi, &trees)? {
            Some(t) => pass(format!("first offender {t}")),
            None => fail("phi passed the locality check"),
        },
    );
    s.run("Birkhoff factors are characters", || {
        for (name, m) in [("phi_-", &pair.minus), ("phi_+", &pair.plus)] {
            if let Some(x) = first_non_multiplicative(m, &forests)? {
                return fail(format!("{name} at {}", x.to_text()));
            }
        }
        pass(format!("{} forests", forests.len()))
    });
    s.run("Birkhoff reconstruction", || {
        let rebuilt = convolve(&star_inverse(&pair.minus)?, &pair.plus);
        match agree(&rebuilt, phi, &forests, "phi_-^-1 * phi_+ = phi")? {
            Ok(_) => agree(
                &convolve(&pair.minus, phi),
                &pair.plus,
                &forests,
                "phi_-^-1 * phi_+ = phi and phi_- * phi = phi_+",
            ),
            bad => Ok(bad),
        }
    });
    s.run("Birkhoff of phi_+ is trivial", || {
        let again = birkhoff_decompose(&pair.plus, n.min(4))?;
        let f = forests_up_to(n.min(4));
        agree(
            &again.minus,
            &unit_map(*phi.precision()),
            &f,
            "(phi_+)_- = e",
        )
    });
    s.run("scalar beta, three expressions", || {
        let b = beta_scalar(&pair.minus, &trees)?;
        let dot = &b.values[&Tree::leaf()];
        if *dot != SymPoly::one() {
            return fail(format!("beta of a single vertex is {dot}"));
        }
        pass(format!("{} trees, beta([]) = 1", trees.len()))
    });
    s.run("generator of F_t is beta twisted by phi_+(0)", || {
        let f3 = forests_up_to(n.min(3));
        let h = h_flow(phi, &FlowParam::Tau)?;
        let gen = CharacterMap::general("dF/dt", *phi.precision(), move |x| {
            let d = h
                .evaluate(x)?
                .tau_derivative()
                .substitute(Symbol::Tau, &q(0))?;
            Ok(LaurentSeries::constant(d.eval_at_zero()?))
        });
        let res = residue_infinitesimal(&rtilde(phi)?);
        match agree(&gen, &res, &f3, "dF/dt(0) = Res Rt(phi)")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        let p0 = value_at_zero(&pair.plus);
        let beta = residue_infinitesimal(&compose_grading(&star_inverse(&pair.minus)?));
        let twisted = convolve(&convolve(&star_inverse(&p0)?, &beta), &p0);
        agree(
            &gen,
            &twisted,
            &f3,
            "dF/dt(0) = Res Rt(phi) = phi_+(0)^-1 * beta * phi_+(0)",
        )
    });
}

fn matrices(
    s: &mut Suite,
    phi: &CharacterMap,
    pair: &BirkhoffPair,
    basis: &CoidealBasis,
    seed: &Tree,
    p: &Precision,
) {
    let tag = format!("[{}]", seed.to_bracket());
    let degrees = basis.degrees();
    let m = match coproduct_matrix(basis) {
        Ok(m) => m,
        Err(e) => {
            return s.run(format!("{tag} coproduct matrix"), || {
                fail(format!("error: {e}"))
            })
        }
    };
    s.run(
        format!("{tag} coproduct matrix is unipotent and graded"),
        || {
            if !m.is_unipotent() {
                return fail("not unipotent");
            }
            for i in 0..m.size() {
                for j in 0..=i {
                    let want = degrees[i] - degrees[j];
                    if m.get(i, j).homogeneous_degree().is_some_and(|d| d != want) {
                        return fail(format!("entry ({}, {}) has the wrong degree", i + 1, j + 1));
                    }
                }
            }
            pass(format!("{} basis elements", basis.len()))
        },
    );
    s.run(format!("{tag} coproduct of matrix entries"), || {
        for i in 0..m.size() {
            for j in 0..=i {
                let lhs = coproduct(m.get(i, j));
                let mut rhs = TensorElement::zero();
                for k in j..=i {
                    rhs = rhs.add(&TensorElement::tensor(m.get(i, k), m.get(k, j)));
                }
                if lhs != rhs {
                    return fail(format!("entry ({}, {})", i + 1, j + 1));
                }
            }
        }
        pass("Delta(M_ij) = sum_k M_ik (x) M_kj")
    });
    s.run(format!("{tag} antipode matrix is the inverse"), || {
        if m.inverse_unipotent()? == m.map(antipode) {
            pass("Psi[S] = M^-1")
        } else {
            fail("S(M_ij) differs from (M^-1)_ij")
        }
    });
    s.run(format!("{tag} Psi is multiplicative"), || {
        psi_homomorphism(phi, &m)
    });
    let ph = match psi(phi, &m) {
        Ok(ph) => ph,
        Err(e) => return s.run(format!("{tag} Psi[phi]"), || fail(format!("error: {e}"))),
    };
    s.run(format!("{tag} grading commutator"), || {
        let lhs = ph.commutator(&z0_matrix(&degrees).scale(&q(-1)));
        matrices_agree(
            &lhs,
            &psi(&compose_grading(phi), &m)?,
            "[Psi f, Psi(-Z0)] = Psi(f o Y)",
        )
    });
    let f = match atkinson_factorize(&ph) {
        Ok(f) => f,
        Err(e) => {
            return s.run(format!("{tag} matrix Birkhoff"), || {
                fail(format!("error: {e}"))
            })
        }
    };
    s.run(format!("{tag} Atkinson identity"), || {
        matrices_agree(
            &atkinson_product(&f, &ph),
            &TriMatrix::identity(ph.size()),
            "X (1 + a) Y = 1",
        )
    });
    s.run(format!("{tag} closed-form factors"), || {
        match matrices_agree(&nonrecursive_minus(&ph)?, &f.minus, "phi_-")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        match matrices_agree(&nonrecursive_plus_inverse(&ph)?, &f.plus_inv, "phi_+^-1")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        matrices_agree(
            &nonrecursive_plus(&ph)?,
            &f.plus,
            "chain sums for phi_-, phi_+^-1 and phi_+",
        )
    });
    s.run(format!("{tag} other formulas for phi_+"), || {
        let one = TriMatrix::identity(ph.size());
        match matrices_agree(
            &one.add(&f.rbar.matrix_rb_tilde()),
            &f.plus,
            "phi_+ = 1 + R~(Rbar)",
        )? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        matrices_agree(
            &plus_from_inverse_recursion(&ph)?,
            &f.plus,
            "phi_+ = 1 + R~(Rbar) and phi_+ = 1 - R~(phi_+ (phi^-1 - 1))",
        )
    });
    s.run(format!("{tag} matrix and scalar Birkhoff agree"), || {
        match matrices_agree(&psi(&pair.minus, &m)?, &f.minus, "phi_-")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        match matrices_agree(&psi(&pair.plus, &m)?, &f.plus, "phi_+")? {
            Ok(_) => {}
            bad => return Ok(bad),
        }
        let rbar = m.try_map(|x| {
            let mut acc = LaurentSeries::zero();
            for (fx, c) in x.terms() {
                if !fx.is_unit() {
                    acc = acc.add(&pair.rbar(fx)?.scale(c));
                }
            }
            Ok(acc)
        })?;
        matrices_agree(&rbar, &f.rbar, "Psi of phi_-, phi_+ and Rbar")
    });
    s.run(format!("{tag} beta: three matrix forms"), || {
        let b = beta_all(&f.minus, &degrees)?;
        let trees: Vec<Tree> = basis.elements()[1..]
            .iter()
            .filter_map(|x| x.as_tree().cloned())
            .collect();
        let scalar = beta_scalar(&pair.minus, &trees)?;
        for (i, x) in basis.elements().iter().enumerate().skip(1) {
            let t = x.as_tree().expect("tree basis");
            if b.conjugation.get(i, 0).0 != scalar.values[t] {
                return fail(format!("column 1 differs from scalar beta at {t}"));
            }
        }
        for i in 0..b.conjugation.size() {
            for j in i..b.conjugation.size() {
                if !b.conjugation.get(i, j).0.is_zero() {
                    return fail("beta is not strictly lower-triangular");
                }
            }
        }
        pass(format!(
            "constant, strictly lower; column 1 = scalar beta; beta(2,1) = {}",
            b.conjugation.get(1, 0)
        ))
    });
    s.run(format!("{tag} flow equations in tau"), || {
        let checks = aplus_flow_check(&ph, &degrees, p)?;
        let bad: Vec<String> = checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        if bad.is_empty() {
            pass(checks.iter().map(|c| c.name).collect::<Vec<_>>().join("; "))
        } else {
            fail(bad.join("; "))
        }
    });
    s.run(format!("{tag} scattering limit"), || {
        matrices_agree(
            &scattering_limit(&f.minus, &degrees)?,
            &f.minus,
            "U -> 0 limit is phi_-",
        )
    });
}

fn psi_homomorphism(phi: &CharacterMap, m: &HopfMatrix) -> Outcome {
    let p = *phi.precision();
    let maps = [
        phi.clone(),
        compose_antipode(phi),
        unit_map(p),
        exp_star(&residue_infinitesimal(phi))?,
    ];
    let images: Vec<TriMatrix> = maps.iter().map(|f| psi(f, m)).collect::<Result<_>>()?;
    let mut count = 0;
    for (a, fa) in maps.iter().zip(&images) {
        for (b, fb) in maps.iter().zip(&images) {
            let lhs = psi(&convolve(a, b), m)?;
            if let Some((i, j)) = lhs.first_difference(&fa.mul(fb))? {
                return fail(format!(
                    "({}, {}) at ({}, {})",
                    a.name(),
                    b.name(),
                    i + 1,
                    j + 1
                ));
            }
            count += 1;
        }
    }
    let inv = psi(&star_inverse(phi)?, m)?;
    if !inv.eq_within(&images[0].inverse_unipotent()?)? {
        return fail("Psi[phi^-1] differs from Psi[phi]^-1");
    }
    pass(format!("{count} pairs; Psi[phi^-1] = Psi[phi]^-1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_reports() {
        let opts = VerifyOptions {
            max_degree: 3,
            prec: Precision {
                z_hi: 3,
                tau_cap: 2,
                pole_bound: 3,
            },
            seeds: vec![parse_tree("[[[]]]").unwrap()],
            samples: 20,
            rng_seed: 1,
        };
        let r = verify(&opts);
        assert!(r.all_passed(), "{}", r.to_text());
        let text = r.to_text();
        assert!(text.ends_with(&format!("all {} identities hold\n", r.checks.len())));
        assert_eq!(r.to_json()["passed"], true);
    }

    #[test]
    fn oversized_seed_is_reported() {
        let opts = VerifyOptions {
            max_degree: 2,
            prec: Precision {
                z_hi: 2,
                tau_cap: 2,
                pole_bound: 2,
            },
            seeds: vec![parse_tree("[[[]]]").unwrap()],
            samples: 5,
            rng_seed: 1,
        };
        let r = verify(&opts);
        let bad: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(bad, ["[[[[]]]] coideal"]);
        let tail = format!("1 of {} identities failed\n", r.checks.len());
        assert!(r.to_text().ends_with(&tail));
    }
}

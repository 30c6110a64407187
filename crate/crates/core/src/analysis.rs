//! Per-degree norms, quotient norms modulo the relation ideal, the two
//! seminorm families and a growth diagnostic for truncated series.

use std::collections::BTreeMap;
use std::fmt;

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::{factorial, format_q, pow_q, to_f64, Q};
use crate::error::{AlgebraError, Result};
use crate::freealg::{word_to_json, Alphabet, Letter, Series, Word};
use crate::kohno::{normal_form_word, KohnoAlgebra, RewriteStrategy};

pub const LP_TOLERANCE: f64 = 1e-9;

/// Largest number of words of one degree the quotient-norm LP accepts.
pub const MAX_LP_WORDS: usize = 8000;

/// Spanning set of the degree-`p` part `J^{[p]}` of the two-sided ideal
/// generated by the quadratic relations.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub n: usize,
    pub degree: usize,
    pub elements: Vec<Series>,
}

impl IdealBasis {
    /// Dimension of the span, by exact row reduction.
    pub fn rank(&self) -> usize {
        rank(&self.elements)
    }
}

/// All `u ρ v` with `ρ` a relation and `deg u + 2 + deg v = p`.
pub fn ideal_graded_basis(alg: &KohnoAlgebra, p: usize) -> Result<IdealBasis> {
    if p < 2 {
        return Err(AlgebraError::InvalidArgument(format!(
            "the ideal starts in degree 2 (got p={p})"
        )));
    }
    let alphabet = Alphabet::Kohno { n: alg.n() };
    let relations = alg.relation_elements(p)?;
    let letters = alphabet.letters();
    let mut elements = Vec::new();
    for left in 0..=p - 2 {
        let lefts = all_words(&letters, left);
        let rights = all_words(&letters, p - 2 - left);
        for rho in &relations {
            for u in &lefts {
                for v in &rights {
                    let terms = rho.terms().map(|(w, c)| (u.concat(w).concat(v), c.clone()));
                    elements.push(Series::from_terms(alphabet, p, terms)?);
                }
            }
        }
    }
    Ok(IdealBasis {
        n: alg.n(),
        degree: p,
        elements,
    })
}

fn all_words(letters: &[Letter], degree: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                letters.iter().map(move |&l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
    }
    out.into_iter().map(Word::new).collect()
}

/// Rank of a family of series, by exact Gaussian elimination.
pub fn rank(rows: &[Series]) -> usize {
    let mut pivots: BTreeMap<Word, BTreeMap<Word, Q>> = BTreeMap::new();
    for s in rows {
        let mut row: BTreeMap<Word, Q> = s.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        loop {
            let Some((lead, c)) = row.iter().next().map(|(w, c)| (w.clone(), c.clone())) else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    // pivot rows are normalized to leading coefficient 1
                    for (w, x) in p {
                        let v = row.entry(w.clone()).or_insert_with(Q::zero);
                        *v -= &c * x;
                        if v.is_zero() {
                            row.remove(w);
                        }
                    }
                }
                None => {
                    for v in row.values_mut() {
                        *v /= &c;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `ℓ1` norm of each homogeneous part of the representative as given.
pub fn per_degree_norms(z: &Series) -> Vec<Q> {
    z.ell1_norm_by_degree()
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Exact(Q),
    Lp(f64),
}

impl NormValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(q) => to_f64(q),
            NormValue::Lp(v) => *v,
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(q) => write!(f, "{q}"),
            NormValue::Lp(v) => write!(f, "{v:.12}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    /// No ideal in this degree; the value is the exact `ℓ1` norm.
    Exact,
    Optimal,
    /// Solver error; no value is reported.
    Failed(String),
    /// Solver returned a value outside `[0, ℓ1]`.
    Inconsistent(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientNorm {
    pub value: Option<NormValue>,
    pub status: LpStatus,
    /// `ℓ1` norm of the input representative
    pub ell1: Q,
}

impl QuotientNorm {
    pub fn to_json_value(&self) -> Value {
        let status = match &self.status {
            LpStatus::Exact => "exact".to_string(),
            LpStatus::Optimal => "optimal".to_string(),
            LpStatus::Failed(m) => format!("failed: {m}"),
            LpStatus::Inconsistent(v) => format!("inconsistent: solver value {v}"),
        };
        json!({
            "value": self.value.as_ref().map(|v| match v {
                NormValue::Exact(q) => json!(format_q(q)),
                NormValue::Lp(x) => json!(x),
            }),
            "status": status,
            "ell1": format_q(&self.ell1),
        })
    }
}

/// `inf ‖z + j‖_1` over `j ∈ J^{[p]}` for homogeneous `z` of degree `p`.
///
/// Since the ideal is the kernel of the normal-form map, this is the
/// minimum of `Σ |x_w|` over all `x` of degree `p` with the same normal form
/// as `z`: one equality per good word, solved by the simplex method.
pub fn quotient_norm(z: &Series) -> Result<QuotientNorm> {
    let ell1: Q = z.terms().map(|(_, c)| c.abs()).sum();
    let Some(p) = z.max_degree() else {
        return Ok(QuotientNorm {
            value: Some(NormValue::Exact(Q::zero())),
            status: LpStatus::Exact,
            ell1,
        });
    };
    if !z.is_homogeneous(p) {
        return Err(AlgebraError::InvalidArgument(
            "quotient_norm needs a homogeneous series".into(),
        ));
    }
    let n = match z.alphabet() {
        Alphabet::Kohno { n } if n > 2 && p >= 2 => n,
        _ => {
            return Ok(QuotientNorm {
                value: Some(NormValue::Exact(ell1.clone())),
                status: LpStatus::Exact,
                ell1,
            })
        }
    };
    let alphabet = Alphabet::Kohno { n };
    let letters = alphabet.letters();
    let count = letters.len().checked_pow(p as u32).unwrap_or(usize::MAX);
    if count > MAX_LP_WORDS {
        return Err(AlgebraError::InvalidArgument(format!(
            "quotient norm LP too large: {count} words of degree {p} (limit {MAX_LP_WORDS})"
        )));
    }
    let words = all_words(&letters, p);
    let target = KohnoAlgebra::new(n)?.normal_form(z)?;

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut rows: BTreeMap<Word, LinearExpr> = BTreeMap::new();
    for w in &words {
        let plus = lp.add_var(1.0, (0.0, f64::INFINITY));
        let minus = lp.add_var(1.0, (0.0, f64::INFINITY));
        for (g, k) in normal_form_word(w, RewriteStrategy::default()) {
            let k = k.to_string().parse::<f64>().unwrap_or(f64::NAN);
            let row = rows.entry(g).or_insert_with(LinearExpr::empty);
            row.add(plus, k);
            row.add(minus, -k);
        }
    }
    for (g, row) in rows {
        lp.add_constraint(row, ComparisonOp::Eq, to_f64(&target.coeff(&g)));
    }
    let (value, status) = match lp.solve() {
        Ok(sol) => {
            let v = sol.objective();
            if v < -LP_TOLERANCE || v > to_f64(&ell1) + LP_TOLERANCE {
                (None, LpStatus::Inconsistent(v))
            } else {
                (Some(NormValue::Lp(v.max(0.0))), LpStatus::Optimal)
            }
        }
        Err(e) => (None, LpStatus::Failed(e.to_string())),
    };
    Ok(QuotientNorm { value, status, ell1 })
}

/// `max_{p<=N} ‖z^{[p]}‖ B^p`, with `B` a rational stand-in for `e^C`.
pub fn seminorm_family(z: &Series, base: &Q) -> Q {
    per_degree_norms(z)
        .iter()
        .enumerate()
        .map(|(p, a)| a * pow_q(base, p))
        .max()
        .unwrap_or_else(Q::zero)
}

/// `max_{p<=N} ‖z^{[p]}‖ p! a^{-p}`.
pub fn shriek_norm(z: &Series, a: &Q) -> Result<Q> {
    if !a.is_positive() {
        return Err(AlgebraError::InvalidArgument("shriek_norm needs a > 0".into()));
    }
    let inv = a.recip();
    Ok(per_degree_norms(z)
        .iter()
        .enumerate()
        .map(|(p, x)| x * Q::from_integer(factorial(p)) * pow_q(&inv, p))
        .max()
        .unwrap_or_else(Q::zero))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GrowthTag {
    /// Norms decay faster than every geometric sequence.
    UCircleCandidate,
    /// `‖z^{[p]}‖ p! a^{-p}` stays bounded for the estimated `a`.
    UShriekCandidate {
        radius: f64,
    },
    /// `‖z^{[p]}‖ p!` grows faster than any `a^p`.
    FailsUShriek {
        u_circle_candidate: bool,
    },
    Inconclusive,
}

impl GrowthTag {
    pub fn label(&self) -> String {
        match self {
            GrowthTag::UCircleCandidate => "U-circle candidate".into(),
            GrowthTag::UShriekCandidate { radius } => {
                format!("U-shriek candidate with radius estimate {radius:.4}")
            }
            GrowthTag::FailsUShriek { u_circle_candidate } => {
                if *u_circle_candidate {
                    "fails U-shriek growth; U-circle candidate".into()
                } else {
                    "fails U-shriek growth".into()
                }
            }
            GrowthTag::Inconclusive => "inconclusive".into(),
        }
    }
}

/// Least-squares fit `log(‖z^{[p]}‖ p!) ≈ c + s p + κ p log p` over the
/// nonzero degrees `p >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub intercept: f64,
    pub slope: f64,
    pub kappa: f64,
    /// `exp` of the slope of the fit with `κ = 0`
    pub radius: f64,
    pub points: usize,
}

/// Coefficients of the powers `w^k` of a tracked word.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackedPowers {
    pub word: Word,
    pub coefficients: Vec<(usize, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub truncation: usize,
    /// `‖z^{[p]}‖` for `p = 0..=N`; also the Taylor coefficients of `Φ_z`
    pub norms: Vec<Q>,
    pub fit: Option<GrowthFit>,
    pub tag: GrowthTag,
    pub tracked: Option<TrackedPowers>,
}

/// `κ` above this means `p!`-growth is not compensated by any `a^p`.
const SHRIEK_KAPPA: f64 = 0.25;
/// `κ` below this means `‖z^{[p]}‖` decays like `1/p!^{1-κ}`.
const CIRCLE_KAPPA: f64 = 0.75;

impl GrowthReport {
    pub fn summary(&self) -> String {
        format!("{} (at truncation N={})", self.tag.label(), self.truncation)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "truncation": self.truncation,
            "classification": self.tag.label(),
            "summary": self.summary(),
            "norms": self.norms.iter().map(format_q).collect::<Vec<_>>(),
            "phi_coefficients": self.norms.iter().map(to_f64).collect::<Vec<_>>(),
            "fit": self.fit.as_ref().map(|f| json!({
                "intercept": f.intercept,
                "slope": f.slope,
                "kappa": f.kappa,
                "radius": f.radius,
                "points": f.points,
            })),
            "tracked": self.tracked.as_ref().map(|t| json!({
                "word": word_to_json(&t.word),
                "powers": t.coefficients.iter().map(|(k, c)| json!({"k": k, "coeff": format_q(c)})).collect::<Vec<_>>(),
            })),
        })
    }
}

fn least_squares(xs: &[Vec<f64>], ys: &[f64]) -> Option<Vec<f64>> {
    let k = xs[0].len();
    let a = nalgebra::DMatrix::from_fn(xs.len(), k, |r, c| xs[r][c]);
    let b = nalgebra::DVector::from_column_slice(ys);
    let svd = a.svd(true, true);
    let sol = svd.solve(&b, 1e-12).ok()?;
    Some(sol.iter().copied().collect())
}

/// Fits the per-degree norms and tags the growth regime. A diagnostic at
/// truncation `N`, not a membership proof.
pub fn growth_classify(z: &Series) -> Result<GrowthReport> {
    growth_classify_tracking(z, None)
}

/// As [`growth_classify`], additionally reporting the coefficients of
/// `word^k` for every `k` with `k·deg(word) <= N`.
pub fn growth_classify_tracking(z: &Series, word: Option<&Word>) -> Result<GrowthReport> {
    let truncation = z.truncation();
    if truncation < 4 {
        return Err(AlgebraError::InvalidArgument(format!(
            "growth classification needs N >= 4 (got {truncation})"
        )));
    }
    let z = match z.alphabet() {
        Alphabet::Kohno { n } => KohnoAlgebra::new(n)?.normal_form(z)?,
        Alphabet::Free { .. } => z.clone(),
    };
    let norms = per_degree_norms(&z);
    let points: Vec<(f64, f64)> = norms
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| a.is_positive())
        .map(|(p, a)| {
            let pf = p as f64;
            let log_fact: f64 = (1..=p).map(|k| (k as f64).ln()).sum();
            (pf, to_f64(a).ln() + log_fact)
        })
        .collect();
    let (fit, tag) = if points.len() < 3 {
        (None, GrowthTag::Inconclusive)
    } else {
        let ys: Vec<f64> = points.iter().map(|(_, y)| *y).collect();
        let full: Vec<Vec<f64>> = points.iter().map(|(p, _)| vec![1.0, *p, p * p.ln()]).collect();
        let lin: Vec<Vec<f64>> = points.iter().map(|(p, _)| vec![1.0, *p]).collect();
        match (least_squares(&full, &ys), least_squares(&lin, &ys)) {
            (Some(f), Some(l)) => {
                let fit = GrowthFit {
                    intercept: f[0],
                    slope: f[1],
                    kappa: f[2],
                    radius: l[1].exp(),
                    points: points.len(),
                };
                let tag = if fit.kappa <= SHRIEK_KAPPA {
                    GrowthTag::UShriekCandidate { radius: fit.radius }
                } else {
                    GrowthTag::FailsUShriek {
                        u_circle_candidate: fit.kappa < CIRCLE_KAPPA,
                    }
                };
                (Some(fit), tag)
            }
            _ => (None, GrowthTag::Inconclusive),
        }
    };
    let tracked = word.filter(|w| !w.is_empty()).map(|w| {
        let mut coefficients = Vec::new();
        let mut power = Word::empty();
        for k in 1..=truncation / w.degree() {
            power = power.concat(w);
            coefficients.push((k, z.coeff(&power)));
        }
        TrackedPowers {
            word: w.clone(),
            coefficients,
        }
    });
    Ok(GrowthReport {
        truncation,
        norms,
        fit,
        tag,
        tracked,
    })
}

/// Exact coefficient of `(ω_1 ω_2)^k` in `log(exp ω_1 · exp ω_2)`:
/// `(-1)^{k-1} (k-1)! k! / (2k)!`.
///
/// Only the factorizations of `(ω_1 ω_2)^k` into blocks `ω_1^a ω_2^b`
/// contribute; summing `C(k,j) (-1)^{k+j-1}/(k+j)` over the `j` optional cuts
/// gives the beta integral `∫_0^1 x^{k-1} (1-x)^k dx`.
pub fn log_exp_exp_power_coefficient(k: usize) -> Q {
    assert!(k >= 1);
    let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
    sign * Q::new(factorial(k - 1) * factorial(k), factorial(2 * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q, qi};
    use crate::freelie::LieElement;
    use crate::groupcal::bch;

    const FREE2: Alphabet = Alphabet::Free { size: 2 };

    fn exp_word(w: Word, n: usize) -> Series {
        Series::monomial(FREE2, n, w, Q::one()).unwrap().exp().unwrap()
    }

    #[test]
    fn ideal_examples() {
        let a3 = KohnoAlgebra::new(3).unwrap();
        let b = ideal_graded_basis(&a3, 2).unwrap();
        assert_eq!(b.elements.len(), 3);
        assert_eq!(b.rank(), 2);
        for e in &b.elements {
            assert!(a3.normal_form(e).unwrap().is_zero());
        }
        let b3 = ideal_graded_basis(&a3, 3).unwrap();
        assert!(b3.elements.iter().all(|e| a3.normal_form(e).unwrap().is_zero()));
        // dim J^{[3]} = 27 - h_3(1,2)
        assert_eq!(b3.rank(), 27 - 15);

        let a4 = KohnoAlgebra::new(4).unwrap();
        let b = ideal_graded_basis(&a4, 2).unwrap();
        let c = Series::from_terms(
            Alphabet::Kohno { n: 4 },
            2,
            [
                (Word::pairs(&[(1, 2), (3, 4)]), qi(1)),
                (Word::pairs(&[(3, 4), (1, 2)]), qi(-1)),
            ],
        )
        .unwrap();
        assert!(b.elements.contains(&c));

        let a2 = KohnoAlgebra::new(2).unwrap();
        assert!(ideal_graded_basis(&a2, 3).unwrap().elements.is_empty());
    }

    #[test]
    fn quotient_norm_examples() {
        let free = Series::from_terms(
            FREE2,
            3,
            [(Word::free(&[1, 2]), q(-3, 2)), (Word::free(&[2, 2]), qi(2))],
        )
        .unwrap();
        let r = quotient_norm(&free).unwrap();
        assert_eq!(r.value, Some(NormValue::Exact(q(7, 2))));

        let a3 = KohnoAlgebra::new(3).unwrap();
        let r12 = a3.generator(1, 2, 2).unwrap();
        assert_eq!(quotient_norm(&r12).unwrap().value, Some(NormValue::Exact(qi(1))));

        let ideal = &a3.relation_elements(2).unwrap()[0];
        let r = quotient_norm(ideal).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(r.value.unwrap().to_f64() < LP_TOLERANCE);

        // r23 r12 = r12 r23 + r13 r12 - r12 r13 in the quotient; the norm of
        // a good word is at most 1
        let w = Series::monomial(Alphabet::Kohno { n: 3 }, 2, Word::pairs(&[(2, 3), (1, 2)]), Q::one()).unwrap();
        let v = quotient_norm(&w).unwrap().value.unwrap().to_f64();
        assert!(v > 0.0 && v <= 1.0 + LP_TOLERANCE);
    }

    #[test]
    fn seminorm_examples() {
        let e = exp_word(Word::free(&[1]), 6);
        assert_eq!(seminorm_family(&e, &Q::one()), Q::one());
        let w1 = Series::generator(FREE2, 6, Letter::free(1)).unwrap();
        assert_eq!(seminorm_family(&w1, &q(5, 3)), q(5, 3));
        assert_eq!(seminorm_family(&Series::zero(FREE2, 6), &qi(4)), Q::zero());

        assert_eq!(shriek_norm(&e, &Q::one()).unwrap(), Q::one());
        assert_eq!(shriek_norm(&w1, &Q::one()).unwrap(), Q::one());
        assert!(shriek_norm(&w1, &Q::zero()).is_err());
        // exp(ω1ω2) at N=8, a=2: (2k)!/(k! 4^k), largest at k=4
        let e12 = exp_word(Word::free(&[1, 2]), 8);
        let expect = Q::new(factorial(8), factorial(4) * num_bigint::BigInt::from(256));
        assert_eq!(shriek_norm(&e12, &qi(2)).unwrap(), expect);
        let e12_10 = exp_word(Word::free(&[1, 2]), 10);
        assert!(shriek_norm(&e12_10, &qi(2)).unwrap() > expect);
    }

    #[test]
    fn growth_examples() {
        let r = growth_classify(&exp_word(Word::free(&[1]), 12)).unwrap();
        match r.tag {
            GrowthTag::UShriekCandidate { radius } => assert!((radius - 1.0).abs() < 1e-9),
            ref t => panic!("{t:?}"),
        }
        assert!(r.summary().contains("N=12"));

        let r = growth_classify(&exp_word(Word::free(&[1, 2]), 12)).unwrap();
        assert!(matches!(r.tag, GrowthTag::FailsUShriek { .. }), "{:?}", r.fit);
        assert!(r.tag.label().starts_with("fails U-shriek growth"));

        let x = LieElement::generator(FREE2, Letter::free(1)).unwrap();
        let y = LieElement::generator(FREE2, Letter::free(2)).unwrap();
        let z = bch(&x, &y, 10).unwrap();
        let r = growth_classify_tracking(&z, Some(&Word::free(&[1, 2]))).unwrap();
        let tracked = r.tracked.unwrap();
        assert_eq!(tracked.coefficients.len(), 5);
        for (k, c) in tracked.coefficients {
            assert_eq!(c, log_exp_exp_power_coefficient(k), "k={k}");
        }
        assert_eq!(log_exp_exp_power_coefficient(1), q(1, 2));
        assert_eq!(log_exp_exp_power_coefficient(2), q(-1, 12));

        assert!(growth_classify(&Series::zero(FREE2, 3)).is_err());
        assert_eq!(
            growth_classify(&Series::zero(FREE2, 6)).unwrap().tag,
            GrowthTag::Inconclusive
        );
    }
}

//! Group calculus at finite truncation: BCH product, inverses, exact ordered
//! exponentials of polynomial paths and their block factorization.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::coeff::{format_q, parse_q, Q};
use crate::error::{AlgebraError, Result};
use crate::freealg::{
    exp_in, geometric_inverse_in, log_in, parse_alphabet, word_from_json, word_to_json, Alphabet, FreeAlgebra, Series,
    SeriesAlgebra, Word,
};
use crate::freelie::{is_grouplike, is_primitive, Bracket, LieElement};
use crate::kohno::{block_of, KohnoAlgebra};

/// The algebra a series over `alphabet` lives in.
pub fn algebra_for(alphabet: Alphabet) -> Result<Box<dyn SeriesAlgebra>> {
    Ok(match alphabet {
        Alphabet::Free { .. } => Box::new(FreeAlgebra::new(alphabet)),
        Alphabet::Kohno { n } => Box::new(KohnoAlgebra::new(n)?),
    })
}

/// `log(exp(x) exp(y))` at truncation `N`, in the free algebra.
pub fn bch(x: &LieElement, y: &LieElement, truncation: usize) -> Result<Series> {
    bch_series(&x.expand(truncation)?, &y.expand(truncation)?)
}

/// BCH product of two series without constant term, computed in the algebra
/// of their alphabet.
pub fn bch_series(x: &Series, y: &Series) -> Result<Series> {
    let alg = algebra_for(x.alphabet())?;
    let g = alg.multiply(&exp_in(&*alg, x)?, &exp_in(&*alg, y)?)?;
    log_in(&*alg, &g)
}

/// Series with constant term 1, optionally certified group-like.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    series: Series,
    verified: bool,
}

impl GroupElement {
    /// Normalizes `series`; requires constant term 1.
    pub fn new(series: Series) -> Result<GroupElement> {
        let c = series.constant_term();
        if !c.is_one() {
            return Err(AlgebraError::ConstantNotOne(format_q(&c)));
        }
        let series = algebra_for(series.alphabet())?.normalize(&series)?;
        Ok(GroupElement {
            series,
            verified: false,
        })
    }

    pub fn identity(alphabet: Alphabet, truncation: usize) -> GroupElement {
        GroupElement {
            series: Series::one(alphabet, truncation),
            verified: true,
        }
    }

    /// `exp(x)`; group-like by construction.
    pub fn exp_of(x: &LieElement, truncation: usize) -> Result<GroupElement> {
        let alg = algebra_for(x.alphabet())?;
        let series = exp_in(&*alg, &x.expand(truncation)?)?;
        Ok(GroupElement { series, verified: true })
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn into_series(self) -> Series {
        self.series
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn truncation(&self) -> usize {
        self.series.truncation()
    }

    /// Runs the group-like test and records the outcome.
    pub fn verify(&mut self) -> bool {
        self.verified = is_grouplike_any(&self.series);
        self.verified
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        let alg = algebra_for(self.series.alphabet())?;
        Ok(GroupElement {
            series: alg.multiply(&self.series, &other.series)?,
            verified: self.verified && other.verified,
        })
    }

    pub fn log(&self) -> Result<Series> {
        let alg = algebra_for(self.series.alphabet())?;
        log_in(&*alg, &self.series)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.series.fmt(f)
    }
}

/// Group-like test: the shuffle test in the free case; in the Kohno case
/// every block factor must pass it.
pub fn is_grouplike_any(s: &Series) -> bool {
    match s.alphabet() {
        Alphabet::Free { .. } => is_grouplike(s),
        Alphabet::Kohno { n } => {
            let Ok(alg) = KohnoAlgebra::new(n) else { return false };
            match alg.factorize(s) {
                Ok(factors) => factors.iter().all(is_grouplike),
                Err(_) => false,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseStatus {
    /// `σ(g)`; exact for group-like `g`.
    Antipode,
    /// Input failed the group-like test; the geometric series was used.
    GeometricFallback,
}

/// `g^{-1}`: the antipode for group-like input, the geometric inverse
/// otherwise.
pub fn group_inverse(g: &GroupElement) -> Result<(GroupElement, InverseStatus)> {
    let alg = algebra_for(g.series.alphabet())?;
    if g.verified || is_grouplike_any(&g.series) {
        let series = alg.normalize(&g.series.antipode())?;
        return Ok((GroupElement { series, verified: true }, InverseStatus::Antipode));
    }
    let series = geometric_inverse_in(&*alg, &g.series)?;
    Ok((
        GroupElement {
            series,
            verified: false,
        },
        InverseStatus::GeometricFallback,
    ))
}

/// Polynomial in `t` with series coefficients: `Σ_k c_k t^k`.
#[derive(Clone, Debug, PartialEq)]
struct TPoly(Vec<Series>);

impl TPoly {
    fn constant(s: Series) -> TPoly {
        TPoly(vec![s])
    }

    fn trim(mut self) -> TPoly {
        while self.0.len() > 1 && self.0.last().is_some_and(Series::is_zero) {
            self.0.pop();
        }
        self
    }

    fn add(&self, other: &TPoly) -> Result<TPoly> {
        let len = self.0.len().max(other.0.len());
        let zero = Series::zero(self.0[0].alphabet(), self.0[0].truncation());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.0.get(k).unwrap_or(&zero);
            let b = other.0.get(k).unwrap_or(&zero);
            out.push(a.add(b)?);
        }
        Ok(TPoly(out).trim())
    }

    fn mul(&self, other: &TPoly, alg: &dyn SeriesAlgebra) -> Result<TPoly> {
        let zero = Series::zero(self.0[0].alphabet(), self.0[0].truncation());
        let mut out = vec![zero; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&alg.multiply(a, b)?)?;
            }
        }
        Ok(TPoly(out).trim())
    }

    /// `∫_0^t`.
    fn integrate(&self) -> TPoly {
        let zero = Series::zero(self.0[0].alphabet(), self.0[0].truncation());
        let mut out = vec![zero];
        for (k, c) in self.0.iter().enumerate() {
            out.push(c.scale(&Q::new(1.into(), ((k + 1) as i64).into())));
        }
        TPoly(out).trim()
    }

    fn eval(&self, t: &Q) -> Result<Series> {
        let mut acc = Series::zero(self.0[0].alphabet(), self.0[0].truncation());
        for c in self.0.iter().rev() {
            acc = acc.scale(t).add(c)?;
        }
        Ok(acc)
    }

    fn map(&self, f: impl Fn(&Series) -> Result<Series>) -> Result<TPoly> {
        Ok(TPoly(self.0.iter().map(f).collect::<Result<_>>()?).trim())
    }

    fn homogeneous_part(&self, p: usize) -> TPoly {
        TPoly(self.0.iter().map(|c| c.homogeneous_part(p)).collect()).trim()
    }
}

/// Solves `E' = E γ`, `E(0) = 1` exactly, degree by degree:
/// `E^{[j]} = ∫ Σ_{i<j} E^{[i]} γ^{[j-i]}`.
fn solve_right(gamma: &TPoly, alg: &dyn SeriesAlgebra) -> Result<TPoly> {
    let alphabet = gamma.0[0].alphabet();
    let n = gamma.0[0].truncation();
    let parts: Vec<TPoly> = (0..=n).map(|p| gamma.homogeneous_part(p)).collect();
    let mut e = vec![TPoly::constant(Series::one(alphabet, n))];
    for j in 1..=n {
        let mut rhs = TPoly::constant(Series::zero(alphabet, n));
        for (i, ei) in e.iter().enumerate() {
            rhs = rhs.add(&ei.mul(&parts[j - i], alg)?)?;
        }
        e.push(rhs.integrate());
    }
    let mut total = TPoly::constant(Series::zero(alphabet, n));
    for ej in &e {
        total = total.add(ej)?;
    }
    Ok(total)
}

/// One polynomial piece of a path: `γ(t) = Σ_k c_k t^k` for `t ∈ [0, duration]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSegment {
    duration: Q,
    coefficients: Vec<Series>,
}

impl PathSegment {
    /// `coefficients[k]` multiplies `t^k`; none may have a constant term.
    pub fn new(duration: Q, coefficients: Vec<Series>) -> Result<PathSegment> {
        if duration <= Q::zero() {
            return Err(AlgebraError::InvalidArgument(
                "segment duration must be positive".into(),
            ));
        }
        let first = coefficients
            .first()
            .ok_or_else(|| AlgebraError::InvalidArgument("segment needs at least one coefficient".into()))?;
        for c in &coefficients {
            first.check_compatible(c)?;
            if !c.constant_term().is_zero() {
                return Err(AlgebraError::InvalidArgument("path has a degree-0 component".into()));
            }
        }
        Ok(PathSegment { duration, coefficients })
    }

    /// Constant `γ = x` on `[0, duration]`.
    pub fn constant(duration: Q, x: Series) -> Result<PathSegment> {
        PathSegment::new(duration, vec![x])
    }

    pub fn duration(&self) -> &Q {
        &self.duration
    }

    pub fn coefficients(&self) -> &[Series] {
        &self.coefficients
    }

    fn tpoly(&self, truncation: usize) -> TPoly {
        TPoly(
            self.coefficients
                .iter()
                .map(|c| c.with_truncation(truncation))
                .collect(),
        )
        .trim()
    }

    /// `t ↦ -γ(T - t)`.
    fn reversed_negated(&self) -> PathSegment {
        let d = self.coefficients.len();
        let zero = Series::zero(self.coefficients[0].alphabet(), self.coefficients[0].truncation());
        let mut out = vec![zero; d];
        // (T - t)^k = Σ_m C(k,m) T^{k-m} (-t)^m
        for (k, c) in self.coefficients.iter().enumerate() {
            let mut binom = Q::one();
            for (m, slot) in out.iter_mut().enumerate().take(k + 1) {
                let sign = if m % 2 == 0 { Q::one() } else { -Q::one() };
                let factor = -(&binom * sign * crate::coeff::pow_q(&self.duration, k - m));
                *slot = slot.add(&c.scale(&factor)).expect("same shape");
                binom = binom * Q::from_integer(((k - m) as i64).into()) / Q::from_integer(((m + 1) as i64).into());
            }
        }
        PathSegment {
            duration: self.duration.clone(),
            coefficients: TPoly(out).trim().0,
        }
    }
}

/// Concatenation of polynomial segments in a fixed alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    alphabet: Alphabet,
    segments: Vec<PathSegment>,
}

impl PiecewisePath {
    pub fn new(alphabet: Alphabet, segments: Vec<PathSegment>) -> Result<PiecewisePath> {
        for s in &segments {
            if s.coefficients[0].alphabet() != alphabet {
                return Err(AlgebraError::AlphabetMismatch {
                    left: alphabet,
                    right: s.coefficients[0].alphabet(),
                });
            }
        }
        Ok(PiecewisePath { alphabet, segments })
    }

    /// Constant `γ = x` on `[0, 1]`.
    pub fn constant(x: Series) -> Result<PiecewisePath> {
        PiecewisePath::new(x.alphabet(), vec![PathSegment::constant(Q::one(), x)?])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn max_degree(&self) -> usize {
        self.segments
            .iter()
            .flat_map(|s| s.coefficients.iter())
            .filter_map(Series::max_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn concat(&self, other: &PiecewisePath) -> Result<PiecewisePath> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        PiecewisePath::new(self.alphabet, segments)
    }

    /// The path `t ↦ -γ(T - t)`, whose ordered exponential is the inverse.
    pub fn reversed_negated(&self) -> PiecewisePath {
        PiecewisePath {
            alphabet: self.alphabet,
            segments: self.segments.iter().rev().map(PathSegment::reversed_negated).collect(),
        }
    }

    pub fn to_json_value(&self) -> Value {
        let segments: Vec<Value> = self
            .segments
            .iter()
            .map(|seg| {
                let top = seg
                    .coefficients
                    .iter()
                    .filter_map(Series::max_degree)
                    .max()
                    .unwrap_or(0);
                let components: Vec<Value> = (1..=top)
                    .filter_map(|d| {
                        let mut words: Vec<Word> = seg
                            .coefficients
                            .iter()
                            .flat_map(|c| {
                                c.homogeneous_part(d)
                                    .terms()
                                    .map(|(w, _)| w.clone())
                                    .collect::<Vec<_>>()
                            })
                            .collect();
                        words.sort();
                        words.dedup();
                        if words.is_empty() {
                            return None;
                        }
                        let terms: Vec<Value> = words
                            .iter()
                            .map(|w| {
                                let poly: Vec<String> =
                                    seg.coefficients.iter().map(|c| format_q(&c.coeff(w))).collect();
                                json!({"word": word_to_json(w), "poly": poly})
                            })
                            .collect();
                        Some(json!({"degree": d, "terms": terms}))
                    })
                    .collect();
                json!({"duration": format_q(&seg.duration), "components": components})
            })
            .collect();
        json!({
            "alphabet": serde_json::to_value(self.alphabet).expect("alphabet serializes"),
            "segments": segments,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("path serializes")
    }

    /// Parses the segment format. Each term is a `"word"` or a `"lyndon"`
    /// bracket with a `"poly"` list of coefficients of `1, t, t², …`; its
    /// degree must equal the enclosing component's `"degree"`.
    pub fn from_json_value(v: &Value) -> Result<PiecewisePath> {
        let alphabet = parse_alphabet(v.get("alphabet"))?;
        let segs = v
            .get("segments")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("segments", "missing or not an array"))?;
        let mut raw: Vec<(Q, Vec<(usize, Series)>)> = Vec::new();
        let mut top = 1;
        for (si, seg) in segs.iter().enumerate() {
            let f = format!("segments[{si}]");
            let duration = seg
                .get("duration")
                .and_then(Value::as_str)
                .ok_or_else(|| AlgebraError::parse(format!("{f}.duration"), "missing or not a string"))
                .and_then(|s| parse_q(s).map_err(|e| AlgebraError::parse(format!("{f}.duration"), e.to_string())))?;
            if duration <= Q::zero() {
                return Err(AlgebraError::parse(format!("{f}.duration"), "must be positive"));
            }
            let comps = seg
                .get("components")
                .and_then(Value::as_array)
                .ok_or_else(|| AlgebraError::parse(format!("{f}.components"), "missing or not an array"))?;
            let mut pieces = Vec::new();
            for (ci, comp) in comps.iter().enumerate() {
                let f = format!("{f}.components[{ci}]");
                let degree = comp
                    .get("degree")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| AlgebraError::parse(format!("{f}.degree"), "missing or not an integer"))?
                    as usize;
                if degree == 0 {
                    return Err(AlgebraError::parse(
                        format!("{f}.degree"),
                        "degree-0 components are not allowed",
                    ));
                }
                top = top.max(degree);
                let terms = comp
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| AlgebraError::parse(format!("{f}.terms"), "missing or not an array"))?;
                for (ti, term) in terms.iter().enumerate() {
                    let f = format!("{f}.terms[{ti}]");
                    let element = if let Some(w) = term.get("word") {
                        let w = word_from_json(w, alphabet, &format!("{f}.word"))?;
                        Series::monomial(alphabet, degree.max(w.degree()), w, Q::one())?
                    } else if let Some(b) = term.get("lyndon") {
                        let b = Bracket::from_json(b, alphabet, &format!("{f}.lyndon"))?;
                        b.expand(alphabet, degree.max(b.degree()))?
                    } else {
                        return Err(AlgebraError::parse(&f, "needs a \"word\" or \"lyndon\" entry"));
                    };
                    if !element.is_homogeneous(degree) {
                        return Err(AlgebraError::parse(&f, format!("term is not of degree {degree}")));
                    }
                    let poly = term
                        .get("poly")
                        .and_then(Value::as_array)
                        .ok_or_else(|| AlgebraError::parse(format!("{f}.poly"), "missing or not an array"))?;
                    for (k, c) in poly.iter().enumerate() {
                        let fk = format!("{f}.poly[{k}]");
                        let c = c
                            .as_str()
                            .ok_or_else(|| AlgebraError::parse(&fk, "expected a fraction string"))
                            .and_then(|s| parse_q(s).map_err(|e| AlgebraError::parse(&fk, e.to_string())))?;
                        pieces.push((k, element.scale(&c)));
                    }
                }
            }
            raw.push((duration, pieces));
        }
        let mut segments = Vec::new();
        for (duration, pieces) in raw {
            let len = pieces.iter().map(|(k, _)| k + 1).max().unwrap_or(1);
            let mut coefficients = vec![Series::zero(alphabet, top); len];
            for (k, s) in pieces {
                coefficients[k] = coefficients[k].add(&s.with_truncation(top))?;
            }
            segments.push(PathSegment::new(duration, coefficients)?);
        }
        PiecewisePath::new(alphabet, segments)
    }

    pub fn from_json(text: &str) -> Result<PiecewisePath> {
        let v: Value = serde_json::from_str(text).map_err(|e| AlgebraError::parse("json", e.to_string()))?;
        PiecewisePath::from_json_value(&v)
    }
}

/// `E(T)` for `E' = E γ`, `E(0) = 1`, exact at truncation `N`.
pub fn ordered_exp(path: &PiecewisePath, truncation: usize) -> Result<GroupElement> {
    if path.max_degree() > truncation {
        return Err(AlgebraError::DegreeExceedsTruncation {
            degree: path.max_degree(),
            truncation,
        });
    }
    let alg = algebra_for(path.alphabet)?;
    let mut acc = Series::one(path.alphabet, truncation);
    for seg in &path.segments {
        let gamma = seg.tpoly(truncation).map(|c| alg.normalize(c))?;
        let e = solve_right(&gamma, &*alg)?.eval(&seg.duration)?;
        acc = alg.multiply(&acc, &e)?;
    }
    let mut g = GroupElement::new(acc)?;
    g.verify();
    Ok(g)
}

/// `[U_1(T), …, U_{n-1}(T)]` with `E(T) = U_{n-1}(T) ⋯ U_1(T)`, where `U_j`
/// lives in the block of generators `r_{(n-j)l}` and solves
/// `U_j' = U_j · (U_{j-1} ⋯ U_1) γ_j (U_{j-1} ⋯ U_1)^{-1}`.
pub fn ordered_exp_factorize(path: &PiecewisePath, truncation: usize) -> Result<Vec<GroupElement>> {
    let n = match path.alphabet {
        Alphabet::Kohno { n } => n,
        other => {
            return Err(AlgebraError::WrongAlphabetKind {
                expected: "kohno",
                got: other,
            })
        }
    };
    if path.max_degree() > truncation {
        return Err(AlgebraError::DegreeExceedsTruncation {
            degree: path.max_degree(),
            truncation,
        });
    }
    let alg = KohnoAlgebra::new(n)?;
    let alphabet = path.alphabet;
    let one = Series::one(alphabet, truncation);
    let mut current: Vec<Series> = vec![one.clone(); n - 1];
    for seg in &path.segments {
        let gamma = seg.tpoly(truncation).map(|c| alg.normal_form(c))?;
        // γ_j collects the block-(n-j) words of the normal form
        let blocks: Vec<TPoly> = (1..n)
            .map(|j| {
                gamma.map(|c| {
                    let mut part = Series::zero(alphabet, truncation);
                    for (w, x) in c.terms() {
                        match block_of(w) {
                            Some(b) if b == n - j => part.add_term(w.clone(), x.clone()),
                            Some(_) => {}
                            None => {
                                return Err(AlgebraError::NotLie(format!(
                                    "path coefficient has the mixed-block word {w}"
                                )))
                            }
                        }
                    }
                    Ok(part)
                })
            })
            .collect::<Result<_>>()?;
        // prefix = U_{j-1}(t) ⋯ U_1(t) on this segment, and its inverse
        let mut prefix = TPoly::constant(one.clone());
        let mut prefix_inv = TPoly::constant(one.clone());
        let mut next = Vec::with_capacity(n - 1);
        for j in 1..n {
            let beta = prefix.mul(&blocks[j - 1], &alg)?.mul(&prefix_inv, &alg)?;
            let v = solve_right(&beta, &alg)?;
            let u = TPoly::constant(current[j - 1].clone()).mul(&v, &alg)?;
            let u_inv = u.map(|c| alg.normal_form(&c.antipode()))?;
            prefix = u.mul(&prefix, &alg)?;
            prefix_inv = prefix_inv.mul(&u_inv, &alg)?;
            next.push(u.eval(&seg.duration)?);
        }
        current = next;
    }
    current
        .into_iter()
        .enumerate()
        .map(|(j, s)| {
            if let Some((w, _)) = s.terms().find(|(w, _)| !w.is_empty() && block_of(w) != Some(n - 1 - j)) {
                return Err(AlgebraError::NotFactorizable(format!(
                    "U_{} contains the word {w} outside its block",
                    j + 1
                )));
            }
            let mut g = GroupElement::new(s)?;
            g.verify();
            Ok(g)
        })
        .collect()
}

/// `U_{n-1} ⋯ U_1`.
pub fn reassemble(factors: &[GroupElement]) -> Result<GroupElement> {
    let mut it = factors.iter().rev();
    let first = it
        .next()
        .ok_or_else(|| AlgebraError::InvalidArgument("no factors".into()))?
        .clone();
    it.try_fold(first, |acc, f| acc.mul(f))
}

/// `bch(x, y)` is primitive, as the BCH product of Lie elements must be.
pub fn bch_is_primitive(x: &LieElement, y: &LieElement, truncation: usize) -> Result<bool> {
    Ok(is_primitive(&bch(x, y, truncation)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q, qi};
    use crate::freealg::Letter;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FREE2: Alphabet = Alphabet::Free { size: 2 };

    fn w(ix: &[usize]) -> Word {
        Word::free(ix)
    }

    fn gen(i: usize) -> LieElement {
        LieElement::generator(FREE2, Letter::free(i)).unwrap()
    }

    #[test]
    fn bch_degree_two() {
        // oracle: exp(a)exp(b) to degree 2 is 1 + a + b + a²/2 + ab + b²/2,
        // log(1+u) = u - u²/2, so the degree-2 part is ab - (a+b)²/2 + a²/2 + b²/2
        let z = bch(&gen(1), &gen(2), 2).unwrap();
        let expect = Series::from_terms(
            FREE2,
            2,
            [
                (w(&[1]), qi(1)),
                (w(&[2]), qi(1)),
                (w(&[1, 2]), q(1, 2)),
                (w(&[2, 1]), q(-1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(z, expect);
        assert!(is_primitive(&z));
    }

    #[test]
    fn bch_degree_three() {
        let z = bch(&gen(1), &gen(2), 3).unwrap();
        let a = FREE2;
        let b = |x: Bracket| x.expand(a, 3).unwrap();
        let l = |i| Bracket::Letter(Letter::free(i));
        let third = b(Bracket::pair(l(1), Bracket::pair(l(1), l(2))))
            .add(&b(Bracket::pair(l(2), Bracket::pair(l(2), l(1)))))
            .unwrap()
            .scale(&q(1, 12));
        assert_eq!(z.homogeneous_part(3), third);
    }

    #[test]
    fn bch_inverse_and_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a3 = Alphabet::Free { size: 3 };
        for _ in 0..3 {
            let x = LieElement::random(&mut rng, a3, 2, 0.6);
            let y = LieElement::random(&mut rng, a3, 2, 0.6);
            let z = LieElement::random(&mut rng, a3, 2, 0.6);
            assert!(bch(&x, &x.neg(), 4).unwrap().is_zero());
            let xy = bch(&x, &y, 4).unwrap();
            let yz = bch(&y, &z, 4).unwrap();
            let left = bch_series(&xy, &z.expand(4).unwrap()).unwrap();
            let right = bch_series(&x.expand(4).unwrap(), &yz).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn inverse_examples() {
        let g = GroupElement::exp_of(&gen(1), 5).unwrap();
        let (inv, status) = group_inverse(&g).unwrap();
        assert_eq!(status, InverseStatus::Antipode);
        assert_eq!(inv, GroupElement::exp_of(&gen(1).neg(), 5).unwrap());
        let one = GroupElement::identity(FREE2, 3);
        assert_eq!(group_inverse(&one).unwrap().0.series(), one.series());

        let k3 = Alphabet::Kohno { n: 3 };
        let r = |i, j| LieElement::generator(k3, Letter::pair(i, j)).unwrap();
        let g = GroupElement::exp_of(&r(1, 2), 4)
            .unwrap()
            .mul(&GroupElement::exp_of(&r(2, 3), 4).unwrap())
            .unwrap();
        let (inv, status) = group_inverse(&g).unwrap();
        assert_eq!(status, InverseStatus::Antipode);
        assert_eq!(g.mul(&inv).unwrap().series(), &Series::one(k3, 4));

        let not_grouplike =
            GroupElement::new(Series::from_terms(FREE2, 3, [(Word::empty(), qi(1)), (w(&[1, 1]), qi(1))]).unwrap())
                .unwrap();
        let (inv, status) = group_inverse(&not_grouplike).unwrap();
        assert_eq!(status, InverseStatus::GeometricFallback);
        assert_eq!(not_grouplike.mul(&inv).unwrap().series(), &Series::one(FREE2, 3));
    }

    #[test]
    fn ordered_exp_examples() {
        let x = gen(1).expand(5).unwrap();
        let y = gen(2)
            .add(&gen(1).bracket(&gen(2)).unwrap())
            .unwrap()
            .expand(5)
            .unwrap();
        let e = ordered_exp(&PiecewisePath::constant(x.clone()).unwrap(), 5).unwrap();
        assert_eq!(e.series(), &x.exp().unwrap());
        assert!(e.is_verified());

        let p = PiecewisePath::constant(x.clone())
            .unwrap()
            .concat(&PiecewisePath::constant(y.clone()).unwrap())
            .unwrap();
        let e = ordered_exp(&p, 5).unwrap();
        assert_eq!(e.series(), &x.exp().unwrap().mul(&y.exp().unwrap()).unwrap());
        assert_eq!(e.log().unwrap(), bch_series(&x, &y).unwrap());

        // γ(t) = (1 + 2t) ω1 on [0, 3] integrates to 12 ω1
        let seg = PathSegment::new(qi(3), vec![x.clone(), x.scale(&qi(2))]).unwrap();
        let e = ordered_exp(&PiecewisePath::new(FREE2, vec![seg]).unwrap(), 5).unwrap();
        assert_eq!(e.series(), &x.scale(&qi(12)).exp().unwrap());
    }

    fn sample_path() -> PiecewisePath {
        let x = gen(1).expand(5).unwrap();
        let y = gen(2).expand(5).unwrap();
        let xy = gen(1).bracket(&gen(2)).unwrap().expand(5).unwrap();
        let s1 = PathSegment::new(q(1, 2), vec![x.clone(), y.clone(), xy.scale(&q(-3, 2))]).unwrap();
        let s2 = PathSegment::new(q(2, 3), vec![y.add(&xy).unwrap(), x.scale(&qi(4))]).unwrap();
        PiecewisePath::new(FREE2, vec![s1, s2]).unwrap()
    }

    #[test]
    fn concatenation_and_reversal() {
        let p = sample_path();
        let q2 = p.reversed_negated();
        let whole = ordered_exp(&p.concat(&q2).unwrap(), 5).unwrap();
        assert_eq!(whole.series(), &Series::one(FREE2, 5));
        let a = ordered_exp(&p, 5).unwrap();
        let b = ordered_exp(&q2, 5).unwrap();
        assert_eq!(a.mul(&b).unwrap().series(), &Series::one(FREE2, 5));
        assert!(a.is_verified());
    }

    #[test]
    fn path_json_round_trip() {
        let p = sample_path();
        let back = PiecewisePath::from_json(&p.to_json()).unwrap();
        assert_eq!(ordered_exp(&back, 5).unwrap(), ordered_exp(&p, 5).unwrap());
        let text = r#"{"alphabet":{"kind":"free","size":2},"segments":[{"duration":"1","components":[{"degree":2,"terms":[{"lyndon":[1,2],"poly":["1"]}]}]}]}"#;
        let p = PiecewisePath::from_json(text).unwrap();
        assert_eq!(p.max_degree(), 2);
        let bad = r#"{"alphabet":{"kind":"free","size":2},"segments":[{"duration":"1","components":[{"degree":1,"terms":[{"lyndon":[1,2],"poly":["1"]}]}]}]}"#;
        let err = PiecewisePath::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("segments[0].components[0].terms[0]"), "{err}");
    }

    #[test]
    fn factorize_examples() {
        let k3 = Alphabet::Kohno { n: 3 };
        let alg = KohnoAlgebra::new(3).unwrap();
        let r12 = alg.generator(1, 2, 4).unwrap();
        let r23 = alg.generator(2, 3, 4).unwrap();
        let r13 = alg.generator(1, 3, 4).unwrap();

        // block with first index 1 only: U_2 = exp(∫γ), U_1 = 1
        let p = PiecewisePath::constant(r12.add(&r13).unwrap()).unwrap();
        let us = ordered_exp_factorize(&p, 4).unwrap();
        assert_eq!(us[0].series(), &Series::one(k3, 4));
        assert_eq!(
            us[1].series(),
            &alg.normal_form(&exp_in(&alg, &r12.add(&r13).unwrap()).unwrap())
                .unwrap()
        );

        let p = PiecewisePath::constant(r23.clone()).unwrap();
        let us = ordered_exp_factorize(&p, 4).unwrap();
        assert_eq!(us[0].series(), &exp_in(&alg, &r23).unwrap());
        assert_eq!(us[1].series(), &Series::one(k3, 4));

        let p = PiecewisePath::constant(r12.add(&r23).unwrap()).unwrap();
        let us = ordered_exp_factorize(&p, 4).unwrap();
        let e = ordered_exp(&p, 4).unwrap();
        assert_eq!(reassemble(&us).unwrap().series(), e.series());
        assert!(us.iter().all(GroupElement::is_verified));
        // agrees with the algebraic factorization T_1 T_2 = U_2 U_1
        let ts = alg.factorize(e.series()).unwrap();
        assert_eq!(&ts[0], us[1].series());
        assert_eq!(&ts[1], us[0].series());
    }
}

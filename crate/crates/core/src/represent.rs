//! Mixed-Casimir matrix representations of `br_n`.
//!
//! For a Lie algebra `g` with basis `e_α` and dual basis `e^α` (with respect
//! to the trace form of the defining representation) and representations
//! `V_1, …, V_n`, the operators `Δ_ij = Σ_α e_α^{(i)} e^{α (j)}` on
//! `V_1 ⊗ … ⊗ V_n` satisfy the Kohno relations. All entries are exact
//! rationals; numerical integration to group elements uses complex floats.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::coeff::{format_q, parse_q, q, qi, to_f64, Q};
use crate::error::{AlgebraError, Result};
use crate::freealg::{Alphabet, Letter, Series, Word};
use crate::freelie::LieElement;

pub type QMatrix = DMatrix<Q>;
pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieType {
    Sl2,
    Sl(usize),
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::Sl2 => write!(f, "sl2"),
            LieType::Sl(m) => write!(f, "sl{m}"),
        }
    }
}

impl std::str::FromStr for LieType {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<LieType> {
        let t = s.trim().to_ascii_lowercase();
        if t == "sl2" {
            return Ok(LieType::Sl2);
        }
        if let Some(m) = t.strip_prefix("sl").and_then(|m| m.parse::<usize>().ok()) {
            if m >= 2 {
                return Ok(if m == 2 { LieType::Sl2 } else { LieType::Sl(m) });
            }
        }
        Err(AlgebraError::InvalidArgument(format!("unsupported Lie algebra {s:?}")))
    }
}

/// Irreducible representation label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irrep {
    /// `sl2` spin `twice_spin / 2`.
    Spin { twice_spin: u32 },
    /// Defining representation of `sl_m`.
    Defining,
}

impl Irrep {
    pub fn parse(label: &str, lie: LieType) -> Result<Irrep> {
        let t = label.trim();
        match lie {
            LieType::Sl2 => {
                if t == "defining" || t == "std" {
                    return Ok(Irrep::Spin { twice_spin: 1 });
                }
                let spin =
                    parse_q(t).map_err(|_| AlgebraError::InvalidArgument(format!("bad spin label {label:?}")))?;
                let twice = &spin * qi(2);
                if !twice.is_integer() || twice.is_negative() || twice > qi(3) {
                    return Err(AlgebraError::InvalidArgument(format!(
                        "unsupported sl2 spin {label:?} (supported: 0, 1/2, 1, 3/2)"
                    )));
                }
                Ok(Irrep::Spin {
                    twice_spin: twice.to_integer().to_u32().expect("small"),
                })
            }
            LieType::Sl(_) => match t {
                "defining" | "std" => Ok(Irrep::Defining),
                _ => Err(AlgebraError::InvalidArgument(format!(
                    "unsupported sl_m irrep {label:?} (supported: defining)"
                ))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            Irrep::Spin { twice_spin } => format_q(&q(*twice_spin as i64, 2)),
            Irrep::Defining => "defining".into(),
        }
    }
}

/// Squared norms of the weight vectors: `|v_{k+1}|^2 = (k+1)(t-k) |v_k|^2`.
fn irrep_gram(irrep: Irrep, d: usize) -> Vec<Q> {
    match irrep {
        Irrep::Spin { twice_spin } => {
            let t = twice_spin as i64;
            let mut g = vec![Q::one()];
            for k in 0..d as i64 - 1 {
                let next = g.last().unwrap() * qi((k + 1) * (t - k));
                g.push(next);
            }
            g
        }
        Irrep::Defining => vec![Q::one(); d],
    }
}

fn zeros(r: usize, c: usize) -> QMatrix {
    QMatrix::from_element(r, c, Q::zero())
}

pub fn identity(d: usize) -> QMatrix {
    QMatrix::from_fn(d, d, |i, j| if i == j { Q::one() } else { Q::zero() })
}

/// `(e_α, e^α)` pairs acting in one irrep.
fn casimir_pairs(lie: LieType, irrep: Irrep) -> Result<(usize, Vec<(QMatrix, QMatrix)>)> {
    match (lie, irrep) {
        (LieType::Sl2, Irrep::Spin { twice_spin }) => {
            let t = twice_spin as usize;
            let d = t + 1;
            let mut e = zeros(d, d);
            let mut f = zeros(d, d);
            let mut h = zeros(d, d);
            for k in 0..d {
                h[(k, k)] = qi(t as i64 - 2 * k as i64);
                if k + 1 < d {
                    f[(k + 1, k)] = Q::one();
                }
                if k >= 1 {
                    e[(k - 1, k)] = qi((k * (t - k + 1)) as i64);
                }
            }
            let half_h = h.map(|x| x * q(1, 2));
            Ok((d, vec![(e.clone(), f.clone()), (f, e), (h, half_h)]))
        }
        (LieType::Sl(m), Irrep::Defining) => {
            let mut pairs = Vec::with_capacity(m * m + 1);
            for a in 0..m {
                for b in 0..m {
                    let mut eab = zeros(m, m);
                    eab[(a, b)] = Q::one();
                    let mut eba = zeros(m, m);
                    eba[(b, a)] = Q::one();
                    pairs.push((eab, eba));
                }
            }
            // gl_m Casimir minus its trace part
            pairs.push((identity(m), identity(m).map(|x| -x / qi(m as i64))));
            Ok((m, pairs))
        }
        _ => Err(AlgebraError::InvalidArgument(format!(
            "irrep {irrep:?} not available for {lie}"
        ))),
    }
}

/// `a` acting on tensor factor `i`, `b` on factor `j`, identity elsewhere.
fn embed_pair(a: &QMatrix, b: &QMatrix, i: usize, j: usize, dims: &[usize]) -> QMatrix {
    let total: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut out = zeros(total, total);
    for col in 0..total {
        let ci = (col / strides[i]) % dims[i];
        let cj = (col / strides[j]) % dims[j];
        let base = col - ci * strides[i] - cj * strides[j];
        for ri in 0..dims[i] {
            let x = &a[(ri, ci)];
            if x.is_zero() {
                continue;
            }
            for rj in 0..dims[j] {
                let y = &b[(rj, cj)];
                if y.is_zero() {
                    continue;
                }
                let row = base + ri * strides[i] + rj * strides[j];
                out[(row, col)] += x * y;
            }
        }
    }
    out
}

/// Integer form `Δ_ij = M_ij / denom` used for fast exact word products.
#[derive(Clone, Debug)]
struct IntegerForm {
    denom: BigInt,
    mats: BTreeMap<Letter, DMatrix<i128>>,
    /// max absolute row sum over all `M_ij`
    row_bound: f64,
}

/// Assignment `r_ij -> Δ_ij` of exact square matrices.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    n: usize,
    dim: usize,
    deltas: BTreeMap<Letter, QMatrix>,
    lie: Option<LieType>,
    factors: Vec<String>,
    /// diagonal of an invariant Hermitian form; every `Δ_ij` is self-adjoint for it
    gram: Vec<Q>,
    int_form: Option<IntegerForm>,
}

impl MatrixRep {
    /// Mixed Casimirs for `factors.len()` tensor factors.
    pub fn casimir(lie: LieType, factors: &[Irrep]) -> Result<MatrixRep> {
        let n = factors.len();
        if n < 2 {
            return Err(AlgebraError::InvalidArgument("need at least two tensor factors".into()));
        }
        let mut dims = Vec::with_capacity(n);
        let mut pairs = Vec::with_capacity(n);
        let mut gram = vec![Q::one()];
        for f in factors {
            let (d, p) = casimir_pairs(lie, *f)?;
            let g = irrep_gram(*f, d);
            gram = gram.iter().flat_map(|a| g.iter().map(move |b| a * b)).collect();
            dims.push(d);
            pairs.push(p);
        }
        let mut deltas = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut acc: Option<QMatrix> = None;
                for ((a, _), (_, b)) in pairs[i].iter().zip(pairs[j].iter()) {
                    let term = embed_pair(a, b, i, j, &dims);
                    acc = Some(match acc {
                        Some(m) => m + term,
                        None => term,
                    });
                }
                deltas.insert(Letter::pair(i + 1, j + 1), acc.expect("nonempty basis"));
            }
        }
        let mut rep = MatrixRep::from_deltas(n, deltas)?;
        rep.lie = Some(lie);
        rep.factors = factors.iter().map(Irrep::label).collect();
        rep.gram = gram;
        Ok(rep)
    }

    /// `sl2` with the given spin labels (`"1/2"`, `"1"`, …).
    pub fn sl2_spins(labels: &[&str]) -> Result<MatrixRep> {
        let irreps = labels
            .iter()
            .map(|l| Irrep::parse(l, LieType::Sl2))
            .collect::<Result<Vec<_>>>()?;
        MatrixRep::casimir(LieType::Sl2, &irreps)
    }

    /// Arbitrary assignment; every pair `i<j<=n` must be present.
    pub fn from_deltas(n: usize, deltas: BTreeMap<Letter, QMatrix>) -> Result<MatrixRep> {
        let alphabet = Alphabet::Kohno { n };
        let letters = alphabet.letters();
        if deltas.len() != letters.len() || !letters.iter().all(|l| deltas.contains_key(l)) {
            return Err(AlgebraError::InvalidArgument(format!(
                "need exactly one matrix per generator of {alphabet}"
            )));
        }
        let dim = deltas.values().next().map(|m| m.nrows()).unwrap_or(0);
        if deltas.values().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(AlgebraError::InvalidArgument(
                "matrices must be square of equal size".into(),
            ));
        }
        let int_form = integer_form(&deltas);
        Ok(MatrixRep {
            n,
            dim,
            deltas,
            lie: None,
            factors: Vec::new(),
            gram: vec![Q::one(); dim],
            int_form,
        })
    }

    /// All `Δ_ij = 0` on a space of dimension `dim`.
    pub fn trivial(n: usize, dim: usize) -> Result<MatrixRep> {
        let deltas = Alphabet::Kohno { n }
            .letters()
            .into_iter()
            .map(|l| (l, zeros(dim, dim)))
            .collect();
        MatrixRep::from_deltas(n, deltas)
    }

    /// Copy with `Δ_ij` replaced.
    pub fn with_delta(&self, i: usize, j: usize, m: QMatrix) -> Result<MatrixRep> {
        let mut deltas = self.deltas.clone();
        deltas.insert(Letter::pair(i, j), m);
        let mut rep = MatrixRep::from_deltas(self.n, deltas)?;
        rep.lie = self.lie;
        rep.factors = self.factors.clone();
        rep.gram = self.gram.clone();
        Ok(rep)
    }

    /// Copy with every `Δ_ij` multiplied by `λ`.
    pub fn scaled(&self, lambda: &Q) -> MatrixRep {
        let deltas = self.deltas.iter().map(|(l, m)| (*l, m.map(|x| x * lambda))).collect();
        let mut rep = MatrixRep::from_deltas(self.n, deltas).expect("same shape");
        rep.lie = self.lie;
        rep.factors = self.factors.clone();
        rep.gram = self.gram.clone();
        rep
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self, i: usize, j: usize) -> &QMatrix {
        &self.deltas[&Letter::pair(i, j)]
    }

    pub fn deltas(&self) -> impl Iterator<Item = (&Letter, &QMatrix)> {
        self.deltas.iter()
    }

    pub fn lie_type(&self) -> Option<LieType> {
        self.lie
    }

    pub fn factor_labels(&self) -> &[String] {
        &self.factors
    }

    pub fn is_symmetric(&self) -> bool {
        self.deltas.values().all(|m| *m == m.transpose())
    }

    pub fn gram(&self) -> &[Q] {
        &self.gram
    }

    /// `G Δ = Δ^T G` for every generator, with `G = diag(gram)`.
    pub fn is_self_adjoint(&self) -> bool {
        self.deltas.values().all(|m| {
            (0..self.dim).all(|r| (0..self.dim).all(|c| &self.gram[r] * &m[(r, c)] == &m[(c, r)] * &self.gram[c]))
        })
    }

    /// Image of a word.
    pub fn evaluate_word(&self, w: &Word) -> Result<QMatrix> {
        let mut acc = identity(self.dim);
        for l in w.letters() {
            let m = self.deltas.get(l).ok_or_else(|| AlgebraError::InvalidLetter {
                letter: l.to_string(),
                alphabet: Alphabet::Kohno { n: self.n },
            })?;
            acc = acc * m;
        }
        Ok(acc)
    }

    /// Image of a series: substitutes `Δ_ij` for `r_ij` and sums, exactly.
    pub fn evaluate(&self, s: &Series) -> Result<QMatrix> {
        if s.alphabet() != (Alphabet::Kohno { n: self.n }) {
            return Err(AlgebraError::AlphabetMismatch {
                left: Alphabet::Kohno { n: self.n },
                right: s.alphabet(),
            });
        }
        let max_deg = s.max_degree().unwrap_or(0) as i32;
        match &self.int_form {
            Some(form) if form.row_bound.max(1.0).powi(max_deg) < 2f64.powi(120) => Ok(self.evaluate_integer(form, s)),
            _ => {
                let mut out = zeros(self.dim, self.dim);
                for (w, c) in s.terms() {
                    out += self.evaluate_word(w)?.map(|x| x * c);
                }
                Ok(out)
            }
        }
    }

    fn evaluate_integer(&self, form: &IntegerForm, s: &Series) -> QMatrix {
        let d = self.dim;
        let mut out = zeros(d, d);
        // terms come sorted, so consecutive words share prefixes
        let mut stack: Vec<DMatrix<i128>> = vec![DMatrix::identity(d, d)];
        let mut prev: Vec<Letter> = Vec::new();
        for (w, c) in s.terms() {
            let letters = w.letters();
            let common = prev.iter().zip(letters).take_while(|(a, b)| a == b).count();
            stack.truncate(common + 1);
            for l in &letters[common..] {
                let next = stack.last().unwrap() * &form.mats[l];
                stack.push(next);
            }
            prev = letters.to_vec();
            let m = stack.last().unwrap();
            let scale = c / Q::from_integer(num_traits::pow(form.denom.clone(), letters.len()));
            for (k, v) in m.iter().enumerate() {
                if *v != 0 {
                    out[k] += &scale * Q::from_integer(BigInt::from(*v));
                }
            }
        }
        out
    }

    pub fn evaluate_complex(&self, s: &Series) -> Result<CMatrix> {
        Ok(to_complex(&self.evaluate(s)?))
    }
}

fn integer_form(deltas: &BTreeMap<Letter, QMatrix>) -> Option<IntegerForm> {
    let mut denom = BigInt::one();
    for m in deltas.values() {
        for x in m.iter() {
            denom = denom.lcm(x.denom());
        }
    }
    let mut mats = BTreeMap::new();
    let mut row_bound = 0f64;
    for (l, m) in deltas {
        let scaled: Vec<i128> = m
            .iter()
            .map(|x| (x * Q::from_integer(denom.clone())).to_integer().to_i128())
            .collect::<Option<Vec<_>>>()?;
        let im = DMatrix::from_vec(m.nrows(), m.ncols(), scaled);
        for r in 0..im.nrows() {
            let s: f64 = im.row(r).iter().map(|v| v.unsigned_abs() as f64).sum();
            row_bound = row_bound.max(s);
        }
        mats.insert(*l, im);
    }
    Some(IntegerForm { denom, mats, row_bound })
}

pub fn to_complex(m: &QMatrix) -> CMatrix {
    m.map(|x| Complex64::new(to_f64(&x), 0.0))
}

pub fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a * b - b * a
}

/// One relation instance and whether it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
    /// largest absolute entry of the residual commutator
    pub max_abs: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "relation": c.relation,
                "holds": c.holds,
                "max_abs": format_q(&c.max_abs),
            })).collect::<Vec<_>>(),
        })
    }
}

fn max_abs(m: &QMatrix) -> Q {
    m.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

/// Exhaustive exact check of `[Δ_ij, Δ_kl] = 0` (disjoint pairs) and
/// `[Δ_ij, Δ_ik + Δ_jk] = 0` (every triple, every bracketed pair).
pub fn check_kohno_relations(rep: &MatrixRep) -> RelationReport {
    let n = rep.n;
    let mut checks = Vec::new();
    let letters = Alphabet::Kohno { n }.letters();
    let name = |l: Letter| {
        let (i, j) = l.indices();
        format!("D{i}{j}")
    };
    for (p, &x) in letters.iter().enumerate() {
        for &y in &letters[p + 1..] {
            let (i, j) = x.indices();
            let (k, l) = y.indices();
            if i != k && i != l && j != k && j != l {
                let r = commutator(&rep.deltas[&x], &rep.deltas[&y]);
                let m = max_abs(&r);
                checks.push(RelationCheck {
                    relation: format!("[{}, {}] = 0", name(x), name(y)),
                    holds: m.is_zero(),
                    max_abs: m,
                });
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let (ij, ik, jk) = (Letter::pair(i, j), Letter::pair(i, k), Letter::pair(j, k));
                for (a, b, c) in [(ij, ik, jk), (ik, ij, jk), (jk, ij, ik)] {
                    let sum = &rep.deltas[&b] + &rep.deltas[&c];
                    let r = commutator(&rep.deltas[&a], &sum);
                    let m = max_abs(&r);
                    checks.push(RelationCheck {
                        relation: format!("[{}, {} + {}] = 0", name(a), name(b), name(c)),
                        holds: m.is_zero(),
                        max_abs: m,
                    });
                }
            }
        }
    }
    RelationReport { checks }
}

/// `Π_k exp(ρ_twist(x_k))`, left to right, in complex floating point, where
/// `ρ_twist(r_ij) = twist · Δ_ij` extends to brackets multiplicatively.
///
/// The exponential is nalgebra's scaling-and-squaring Padé routine, accurate
/// to a few ulps times the norm of the argument.
pub fn integrate_group_element(factors: &[LieElement], rep: &MatrixRep, twist: Complex64) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(rep.dim, rep.dim);
    for x in factors {
        let top = x.max_degree().max(1);
        let s = x.expand(top)?;
        // r_ij ↦ twist·Δ_ij, so degree d picks up twist^d
        let mut m = CMatrix::zeros(rep.dim, rep.dim);
        for d in 1..=top {
            let part = s.homogeneous_part(d);
            if !part.is_zero() {
                m += rep.evaluate_complex(&part)? * twist.powu(d as u32);
            }
        }
        acc *= m.exp();
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityReport {
    pub deviation: f64,
    pub unitary: bool,
}

/// Whether `W = S U S^{-1}` satisfies `‖W*W − I‖_max < 1e-10`, where
/// `U = Π exp(ρ_twist(x_k))` and `S = diag(sqrt(gram))`.
///
/// Requires every `Δ_ij` self-adjoint for the Gram form, so that an imaginary
/// twist yields anti-Hermitian generators.
pub fn unitarity_check(factors: &[LieElement], rep: &MatrixRep, twist: Complex64) -> Result<UnitarityReport> {
    if !rep.is_self_adjoint() {
        return Err(AlgebraError::InvalidArgument(
            "unitarity check needs generators self-adjoint for the invariant form".into(),
        ));
    }
    let u = integrate_group_element(factors, rep, twist)?;
    let s: Vec<f64> = rep.gram.iter().map(|g| to_f64(g).sqrt()).collect();
    let w = CMatrix::from_fn(rep.dim, rep.dim, |r, c| u[(r, c)] * (s[r] / s[c]));
    let deviation = max_abs_complex(&(w.adjoint() * &w - CMatrix::identity(rep.dim, rep.dim)));
    Ok(UnitarityReport {
        deviation,
        unitary: deviation < 1e-10,
    })
}

pub fn max_abs_complex(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn qmatrix_to_json(m: &QMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| json!(format_q(&m[(r, c)]))).collect()))
        .collect();
    json!({"kind": "exact", "rows": m.nrows(), "cols": m.ncols(), "entries": rows})
}

pub fn cmatrix_to_json(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect()))
        .collect();
    json!({"kind": "complex", "rows": m.nrows(), "cols": m.ncols(), "entries": rows})
}

pub fn qmatrix_from_json(v: &Value) -> Result<QMatrix> {
    if v.get("kind").and_then(Value::as_str) != Some("exact") {
        return Err(AlgebraError::parse("kind", "expected \"exact\""));
    }
    let rows = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| AlgebraError::parse("entries", "missing or not an array"))?;
    let nrows = rows.len();
    let ncols = rows.first().and_then(Value::as_array).map(Vec::len).unwrap_or(0);
    let mut m = zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|a| a.len() == ncols)
            .ok_or_else(|| AlgebraError::parse(format!("entries[{r}]"), "ragged or not an array"))?;
        for (c, x) in row.iter().enumerate() {
            let field = format!("entries[{r}][{c}]");
            let s = x
                .as_str()
                .ok_or_else(|| AlgebraError::parse(&field, "expected a fraction string"))?;
            m[(r, c)] = parse_q(s).map_err(|e| AlgebraError::parse(&field, e.to_string()))?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kohno::KohnoAlgebra;

    fn spin_half(n: usize) -> MatrixRep {
        MatrixRep::sl2_spins(&vec!["1/2"; n]).unwrap()
    }

    /// Characteristic-polynomial-free eigenvalue check: `(Δ - a)(Δ - b) = 0`
    /// with the stated multiplicities read off from the trace.
    #[test]
    fn spin_half_pair_spectrum() {
        let rep = spin_half(2);
        let d = rep.delta(1, 2).clone();
        let i4 = identity(4);
        let p = (&d - i4.map(|x| x * q(1, 2))) * (&d + i4.map(|x| x * q(3, 2)));
        assert!(p.iter().all(Zero::is_zero));
        let trace: Q = (0..4).map(|k| d[(k, k)].clone()).sum();
        // 3·(1/2) + 1·(−3/2) = 0
        assert_eq!(trace, Q::zero());
        assert!(rep.is_symmetric());
    }

    #[test]
    fn casimir_values() {
        // Δ_12 = (C_12 - C_1 - C_2)/2 with C = 3/2 on spin 1/2 and 4 on spin 1
        let rep = MatrixRep::sl2_spins(&["1", "1/2"]).unwrap();
        let d = rep.delta(1, 2);
        // spin 1 ⊗ 1/2 = 3/2 ⊕ 1/2: eigenvalues (15/2 - 4 - 3/2)/2 = 1 and (3/2 - 11/2)/2 = -2
        let i6 = identity(6);
        let p = (d - i6.map(|x| x * qi(1))) * (d + i6.map(|x| x * qi(2)));
        assert!(p.iter().all(Zero::is_zero));
    }

    #[test]
    fn relations_hold_exactly() {
        for rep in [
            spin_half(3),
            spin_half(4),
            MatrixRep::sl2_spins(&["1/2", "1/2", "1"]).unwrap(),
            MatrixRep::sl2_spins(&["3/2", "1", "1/2"]).unwrap(),
            MatrixRep::casimir(LieType::Sl(3), &[Irrep::Defining; 3]).unwrap(),
        ] {
            let report = check_kohno_relations(&rep);
            assert!(report.passed(), "{:?}", report.violations().collect::<Vec<_>>());
        }
    }

    #[test]
    fn total_casimir_is_central() {
        for n in [3, 4] {
            let rep = spin_half(n);
            let total: QMatrix = rep.deltas().map(|(_, m)| m.clone()).reduce(|a, b| a + b).unwrap();
            for (_, m) in rep.deltas() {
                assert!(commutator(&total, m).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn corrupted_rep_names_relation() {
        let rep = spin_half(3);
        let mut bad = rep.delta(1, 2).clone();
        bad[(0, 1)] += q(1, 7);
        let rep = rep.with_delta(1, 2, bad).unwrap();
        let report = check_kohno_relations(&rep);
        assert!(!report.passed());
        assert!(report.violations().any(|c| c.relation.contains("D12")));
    }

    #[test]
    fn unsupported_labels() {
        assert!(MatrixRep::sl2_spins(&["2", "1/2"]).is_err());
        assert!(MatrixRep::sl2_spins(&["1/3", "1/2"]).is_err());
        assert!(Irrep::parse("adjoint", LieType::Sl(3)).is_err());
        assert!("so5".parse::<LieType>().is_err());
    }

    #[test]
    fn evaluate_examples() {
        let rep = spin_half(3);
        let a = KohnoAlgebra::new(3).unwrap();
        let r12 = a.generator(1, 2, 2).unwrap();
        assert_eq!(rep.evaluate(&r12).unwrap(), *rep.delta(1, 2));
        let one = Series::one(Alphabet::Kohno { n: 3 }, 2);
        assert_eq!(rep.evaluate(&one).unwrap(), identity(8));
        let w = Series::monomial(Alphabet::Kohno { n: 3 }, 2, Word::pairs(&[(2, 3), (1, 2)]), Q::one()).unwrap();
        assert_eq!(
            rep.evaluate(&w).unwrap(),
            rep.evaluate(&a.normal_form(&w).unwrap()).unwrap()
        );
        // integer fast path agrees with the plain rational path
        let slow: QMatrix = rep.evaluate_word(&Word::pairs(&[(2, 3), (1, 2)])).unwrap();
        assert_eq!(rep.evaluate(&w).unwrap(), slow);
    }

    #[test]
    fn integration_examples() {
        let rep = spin_half(2);
        let k = Alphabet::Kohno { n: 2 };
        let t = 0.3;
        let x = LieElement::generator(k, Letter::pair(1, 2)).unwrap().scale(&q(3, 10));
        let u = integrate_group_element(&[x.clone()], &rep, Complex64::new(1.0, 0.0)).unwrap();
        // eigenvalues e^{t/2} (triplet) and e^{-3t/2} (singlet): trace = 3e^{t/2} + e^{-3t/2}
        let tr: Complex64 = (0..4).map(|i| u[(i, i)]).sum();
        assert!((tr.re - (3.0 * (t / 2.0f64).exp() + (-1.5 * t).exp())).abs() < 1e-12);
        let id = integrate_group_element(&[], &rep, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(id, CMatrix::identity(4, 4));
        let back = integrate_group_element(&[x.clone(), x.neg()], &rep, Complex64::new(1.0, 0.0)).unwrap();
        assert!(max_abs_complex(&(back - CMatrix::identity(4, 4))) < 1e-12);

        let unit = unitarity_check(&[x.clone()], &rep, Complex64::new(0.0, 1.0)).unwrap();
        assert!(unit.unitary, "{unit:?}");
        assert!(unitarity_check(&[], &rep, Complex64::new(0.0, 1.0)).unwrap().unitary);
        assert!(!unitarity_check(&[x], &rep, Complex64::new(1.0, 0.0)).unwrap().unitary);
        let mixed = MatrixRep::sl2_spins(&["3/2", "1/2", "1"]).unwrap();
        assert!(mixed.is_self_adjoint() && !mixed.is_symmetric());
        let k3 = Alphabet::Kohno { n: 3 };
        let y = LieElement::generator(k3, Letter::pair(1, 3)).unwrap().scale(&q(7, 10));
        assert!(unitarity_check(&[y], &mixed, Complex64::new(0.0, 1.0)).unwrap().unitary);
        let mut bad = rep.delta(1, 2).clone();
        bad[(0, 1)] += Q::one();
        let bad = rep.with_delta(1, 2, bad).unwrap();
        assert!(unitarity_check(&[], &bad, Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let rep = spin_half(2);
        let v = qmatrix_to_json(rep.delta(1, 2));
        assert_eq!(v["kind"], "exact");
        assert_eq!(qmatrix_from_json(&v).unwrap(), *rep.delta(1, 2));
    }
}

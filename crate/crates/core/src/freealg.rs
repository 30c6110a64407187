//! Truncated graded series over a free associative algebra.
//!
//! A [`Series`] is a finite map from [`Word`]s to exact rational coefficients
//! together with a mandatory truncation order `N`: it stands for an element
//! of the completed algebra known modulo terms of degree `> N`. Binary
//! operations demand equal alphabets and equal truncation orders.
//!
//! Words are ordered by degree first and lexicographically second, which is
//! also the canonical order of terms in the JSON interchange format.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{self, format_q, parse_q, Q};
use crate::error::{AlgebraError, Result};

/// A generator: either a free letter `ω_i` (1-based) or a Kohno pair `r_ij`
/// stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Free(u16),
    Pair(u8, u8),
}

impl Letter {
    /// Kohno generator `r_ij`; the symmetric pair is normalised to `i < j`.
    pub fn pair(i: usize, j: usize) -> Letter {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Letter::Pair(a as u8, b as u8)
    }

    pub fn free(i: usize) -> Letter {
        Letter::Free(i as u16)
    }

    /// First index of a Kohno pair; the letter index itself for free letters.
    pub fn first_index(self) -> usize {
        match self {
            Letter::Free(i) => i as usize,
            Letter::Pair(i, _) => i as usize,
        }
    }

    pub fn indices(self) -> (usize, usize) {
        match self {
            Letter::Free(i) => (i as usize, i as usize),
            Letter::Pair(i, j) => (i as usize, j as usize),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::Free(i) => write!(f, "w{i}"),
            Letter::Pair(i, j) if i < 10 && j < 10 => write!(f, "r{i}{j}"),
            Letter::Pair(i, j) => write!(f, "r{i}_{j}"),
        }
    }
}

/// A monomial. Ordered by degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn single(letter: Letter) -> Word {
        Word(vec![letter])
    }

    pub fn free(indices: &[usize]) -> Word {
        Word(indices.iter().map(|&i| Letter::free(i)).collect())
    }

    pub fn pairs(pairs: &[(usize, usize)]) -> Word {
        Word(pairs.iter().map(|&(i, j)| Letter::pair(i, j)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The generating set a series is written over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Alphabet {
    /// Free generators `ω_1..ω_size`.
    Free { size: usize },
    /// Kohno generators `r_ij`, `1 <= i < j <= n`.
    Kohno { n: usize },
}

impl Alphabet {
    pub fn letters(&self) -> Vec<Letter> {
        match *self {
            Alphabet::Free { size } => (1..=size).map(Letter::free).collect(),
            Alphabet::Kohno { n } => {
                let mut out = Vec::new();
                for i in 1..=n {
                    for j in i + 1..=n {
                        out.push(Letter::pair(i, j));
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, letter: Letter) -> bool {
        match (*self, letter) {
            (Alphabet::Free { size }, Letter::Free(i)) => i >= 1 && (i as usize) <= size,
            (Alphabet::Kohno { n }, Letter::Pair(i, j)) => i >= 1 && i < j && (j as usize) <= n,
            _ => false,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Alphabet::Free { .. })
    }

    pub fn check_word(&self, word: &Word) -> Result<()> {
        for &l in word.letters() {
            if !self.contains(l) {
                return Err(AlgebraError::InvalidLetter {
                    letter: l.to_string(),
                    alphabet: *self,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Free { size } => write!(f, "free({size})"),
            Alphabet::Kohno { n } => write!(f, "kohno({n})"),
        }
    }
}

/// Truncated element of a completed graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    alphabet: Alphabet,
    truncation: usize,
    terms: BTreeMap<Word, Q>,
}

impl Series {
    pub fn zero(alphabet: Alphabet, truncation: usize) -> Series {
        Series {
            alphabet,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet, truncation: usize) -> Series {
        Series::constant(alphabet, truncation, Q::one())
    }

    pub fn constant(alphabet: Alphabet, truncation: usize, c: Q) -> Series {
        let mut s = Series::zero(alphabet, truncation);
        if !c.is_zero() {
            s.terms.insert(Word::empty(), c);
        }
        s
    }

    pub fn generator(alphabet: Alphabet, truncation: usize, letter: Letter) -> Result<Series> {
        Series::monomial(alphabet, truncation, Word::single(letter), Q::one())
    }

    pub fn monomial(alphabet: Alphabet, truncation: usize, word: Word, c: Q) -> Result<Series> {
        Series::from_terms(alphabet, truncation, [(word, c)])
    }

    /// Builds a series from `(word, coefficient)` pairs, summing repeated words.
    ///
    /// Words of degree above the truncation order are rejected rather than
    /// silently dropped.
    pub fn from_terms<I>(alphabet: Alphabet, truncation: usize, terms: I) -> Result<Series>
    where
        I: IntoIterator<Item = (Word, Q)>,
    {
        let mut s = Series::zero(alphabet, truncation);
        for (w, c) in terms {
            alphabet.check_word(&w)?;
            if w.degree() > truncation {
                return Err(AlgebraError::DegreeExceedsTruncation {
                    degree: w.degree(),
                    truncation,
                });
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// Builds a series and drops words beyond the truncation order.
    pub(crate) fn from_map_truncating(
        alphabet: Alphabet,
        truncation: usize,
        terms: impl IntoIterator<Item = (Word, Q)>,
    ) -> Series {
        let mut s = Series::zero(alphabet, truncation);
        for (w, c) in terms {
            if w.degree() <= truncation {
                s.add_term(w, c);
            }
        }
        s
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Terms in canonical (degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::empty())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::degree)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::degree)
    }

    /// The degree-`p` component `z^{[p]}`.
    pub fn homogeneous_part(&self, p: usize) -> Series {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.degree() == p)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Series {
            alphabet: self.alphabet,
            truncation: self.truncation,
            terms,
        }
    }

    pub fn is_homogeneous(&self, p: usize) -> bool {
        self.terms.keys().all(|w| w.degree() == p)
    }

    /// Same element viewed at a different truncation order; raising the order
    /// keeps the terms, lowering it drops the excess degrees.
    pub fn with_truncation(&self, truncation: usize) -> Series {
        Series::from_map_truncating(
            self.alphabet,
            truncation,
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Series> {
        Series::from_terms(
            alphabet,
            self.truncation,
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub(crate) fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(AlgebraError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        if self.truncation != other.truncation {
            return Err(AlgebraError::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> Series {
        if k.is_zero() {
            return Series::zero(self.alphabet, self.truncation);
        }
        Series {
            alphabet: self.alphabet,
            truncation: self.truncation,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Concatenation product; words of degree above `N` are dropped.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let n = self.truncation;
        let mut out = Series::zero(self.alphabet, n);
        for (u, a) in &self.terms {
            let room = n - u.degree();
            for (v, b) in &other.terms {
                if v.degree() > room {
                    break;
                }
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    /// The anti-automorphism `σ`: reverses each word and multiplies its
    /// coefficient by `(-1)^degree`.
    pub fn antipode(&self) -> Series {
        let mut out = Series::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            let c = if w.degree() % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(w.reversed(), c);
        }
        out
    }

    /// The grading automorphism `A_τ`: the degree-`p` part is multiplied by `τ^p`.
    pub fn grading_rescale(&self, tau: &Q) -> Series {
        let mut out = Series::zero(self.alphabet, self.truncation);
        let mut powers = vec![Q::one()];
        for (w, c) in &self.terms {
            while powers.len() <= w.degree() {
                let next = powers.last().unwrap() * tau;
                powers.push(next);
            }
            out.add_term(w.clone(), c * &powers[w.degree()]);
        }
        out
    }

    /// `‖z^{[p]}‖ = Σ |c_w|` over words of degree `p`, for `p = 0..=N`.
    pub fn ell1_norm_by_degree(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.truncation + 1];
        for (w, c) in &self.terms {
            out[w.degree()] += c.abs();
        }
        out
    }

    /// Shuffle (deconcatenation-dual) coproduct extending `δ(x) = x⊗1 + 1⊗x`
    /// multiplicatively, truncated at total degree `N`.
    pub fn shuffle_coproduct(&self) -> TensorSeries {
        let mut out = TensorSeries::zero(self.alphabet, self.truncation);
        for (w, c) in &self.terms {
            let letters = w.letters();
            let d = letters.len();
            for mask in 0u64..(1u64 << d) {
                let mut left = Vec::with_capacity(d);
                let mut right = Vec::with_capacity(d);
                for (k, &l) in letters.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        left.push(l);
                    } else {
                        right.push(l);
                    }
                }
                out.add_term(Word::new(left), Word::new(right), c.clone());
            }
        }
        out
    }

    /// `Σ_j h_j z^j` in the free (concatenation) algebra.
    pub fn apply_entire(&self, h: &[Q]) -> Result<Series> {
        apply_entire_in(&FreeAlgebra::new(self.alphabet), h, self)
    }

    pub fn exp(&self) -> Result<Series> {
        exp_in(&FreeAlgebra::new(self.alphabet), self)
    }

    pub fn log(&self) -> Result<Series> {
        log_in(&FreeAlgebra::new(self.alphabet), self)
    }

    pub fn geometric_inverse(&self) -> Result<Series> {
        geometric_inverse_in(&FreeAlgebra::new(self.alphabet), self)
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": word_to_json(w), "coeff": format_q(c)}))
            .collect();
        json!({
            "alphabet": serde_json::to_value(self.alphabet).expect("alphabet serializes"),
            "truncation": self.truncation,
            "terms": terms,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("series serializes")
    }

    pub fn from_json_value(v: &Value) -> Result<Series> {
        let alphabet = parse_alphabet(v.get("alphabet"))?;
        let truncation = v
            .get("truncation")
            .and_then(Value::as_u64)
            .ok_or_else(|| AlgebraError::parse("truncation", "missing or not a nonnegative integer"))?
            as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("terms", "missing or not an array"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for (k, t) in terms.iter().enumerate() {
            let word = t
                .get("word")
                .ok_or_else(|| AlgebraError::parse(format!("terms[{k}].word"), "missing"))
                .and_then(|w| word_from_json(w, alphabet, &format!("terms[{k}].word")))?;
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| AlgebraError::parse(format!("terms[{k}].coeff"), "missing or not a string"))
                .and_then(|s| {
                    parse_q(s).map_err(|e| AlgebraError::parse(format!("terms[{k}].coeff"), e.to_string()))
                })?;
            parsed.push((word, coeff));
        }
        Series::from_terms(alphabet, truncation, parsed)
    }

    pub fn from_json(text: &str) -> Result<Series> {
        let v: Value = serde_json::from_str(text).map_err(|e| AlgebraError::parse("json", e.to_string()))?;
        Series::from_json_value(&v)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.truncation + 1);
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({c}) {w}")?;
            }
        }
        write!(f, " + O({})", self.truncation + 1)
    }
}

pub(crate) fn parse_alphabet(v: Option<&Value>) -> Result<Alphabet> {
    let v = v.ok_or_else(|| AlgebraError::parse("alphabet", "missing"))?;
    let a: Alphabet = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::parse("alphabet", e.to_string()))?;
    match a {
        Alphabet::Free { size } if size == 0 || size > u16::MAX as usize => {
            Err(AlgebraError::parse("alphabet.size", "must be in 1..=65535"))
        }
        Alphabet::Kohno { n } if !(2..=255).contains(&n) => {
            Err(AlgebraError::parse("alphabet.n", "must be in 2..=255"))
        }
        _ => Ok(a),
    }
}

pub(crate) fn letter_to_json(l: Letter) -> Value {
    match l {
        Letter::Free(i) => json!(i),
        Letter::Pair(i, j) => json!([i, j]),
    }
}

pub(crate) fn word_to_json(w: &Word) -> Value {
    Value::Array(w.letters().iter().map(|&l| letter_to_json(l)).collect())
}

pub(crate) fn letter_from_json(v: &Value, alphabet: Alphabet, field: &str) -> Result<Letter> {
    let letter = match alphabet {
        Alphabet::Free { .. } => {
            let i = v
                .as_u64()
                .ok_or_else(|| AlgebraError::parse(field, format!("expected a free letter index, got {v}")))?;
            Letter::free(i as usize)
        }
        Alphabet::Kohno { .. } => {
            let pair = v
                .as_array()
                .filter(|a| a.len() == 2)
                .and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)))
                .ok_or_else(|| AlgebraError::parse(field, format!("expected a pair [i,j], got {v}")))?;
            if pair.0 == pair.1 || pair.0 > 255 || pair.1 > 255 {
                return Err(AlgebraError::parse(field, format!("invalid Kohno pair {v}")));
            }
            Letter::pair(pair.0 as usize, pair.1 as usize)
        }
    };
    if !alphabet.contains(letter) {
        return Err(AlgebraError::parse(field, format!("letter {v} not in {alphabet}")));
    }
    Ok(letter)
}

pub(crate) fn word_from_json(v: &Value, alphabet: Alphabet, field: &str) -> Result<Word> {
    let arr = v
        .as_array()
        .ok_or_else(|| AlgebraError::parse(field, "expected an array of letters"))?;
    arr.iter()
        .enumerate()
        .map(|(k, l)| letter_from_json(l, alphabet, &format!("{field}[{k}]")))
        .collect::<Result<Vec<_>>>()
        .map(Word::new)
}

/// Element of `Ū ⊗ Ū` truncated at total degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSeries {
    alphabet: Alphabet,
    truncation: usize,
    terms: BTreeMap<(Word, Word), Q>,
}

impl TensorSeries {
    pub fn zero(alphabet: Alphabet, truncation: usize) -> TensorSeries {
        TensorSeries {
            alphabet,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn add_term(&mut self, left: Word, right: Word, c: Q) {
        if c.is_zero() || left.degree() + right.degree() > self.truncation {
            return;
        }
        let key = (left, right);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `a ⊗ b`, truncated at total degree `N`.
    pub fn tensor(a: &Series, b: &Series) -> Result<TensorSeries> {
        a.check_compatible(b)?;
        let n = a.truncation();
        let mut out = TensorSeries::zero(a.alphabet(), n);
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                if u.degree() + v.degree() > n {
                    break;
                }
                out.add_term(u.clone(), v.clone(), x * y);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &TensorSeries) -> Result<TensorSeries> {
        if self.alphabet != other.alphabet || self.truncation != other.truncation {
            return Err(AlgebraError::InvalidArgument("tensor series mismatch".into()));
        }
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        Ok(out)
    }

    /// Componentwise concatenation product `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn mul(&self, other: &TensorSeries) -> Result<TensorSeries> {
        if self.alphabet != other.alphabet || self.truncation != other.truncation {
            return Err(AlgebraError::InvalidArgument("tensor series mismatch".into()));
        }
        let mut out = TensorSeries::zero(self.alphabet, self.truncation);
        for ((l1, r1), a) in &self.terms {
            for ((l2, r2), b) in &other.terms {
                out.add_term(l1.concat(l2), r1.concat(r2), a * b);
            }
        }
        Ok(out)
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> Q {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keys where the two tensors differ, with `(self, other)` coefficients.
    pub fn differences(&self, other: &TensorSeries) -> Vec<((Word, Word), Q, Q)> {
        let mut keys: Vec<&(Word, Word)> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by(|a, b| tensor_key_order(a, b));
        keys.dedup();
        keys.into_iter()
            .filter_map(|k| {
                let a = self.terms.get(k).cloned().unwrap_or_else(Q::zero);
                let b = other.terms.get(k).cloned().unwrap_or_else(Q::zero);
                (a != b).then(|| (k.clone(), a, b))
            })
            .collect()
    }
}

/// Orders tensor keys by total degree first.
fn tensor_key_order(a: &(Word, Word), b: &(Word, Word)) -> Ordering {
    (a.0.degree() + a.1.degree())
        .cmp(&(b.0.degree() + b.1.degree()))
        .then_with(|| a.cmp(b))
}

/// A multiplication rule on series over a fixed alphabet.
///
/// The free algebra multiplies by concatenation; quotient algebras such as
/// the Kohno algebra additionally rewrite products into a normal form.
pub trait SeriesAlgebra {
    fn alphabet(&self) -> Alphabet;

    /// Canonical representative of the class of `s`.
    fn normalize(&self, s: &Series) -> Result<Series>;

    fn multiply(&self, a: &Series, b: &Series) -> Result<Series>;
}

/// Free associative algebra on an alphabet: concatenation product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    alphabet: Alphabet,
}

impl FreeAlgebra {
    pub fn new(alphabet: Alphabet) -> FreeAlgebra {
        FreeAlgebra { alphabet }
    }

    pub fn with_generators(size: usize) -> FreeAlgebra {
        FreeAlgebra::new(Alphabet::Free { size })
    }
}

impl SeriesAlgebra for FreeAlgebra {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn normalize(&self, s: &Series) -> Result<Series> {
        Ok(s.clone())
    }

    fn multiply(&self, a: &Series, b: &Series) -> Result<Series> {
        a.mul(b)
    }
}

fn check_alphabet<A: SeriesAlgebra + ?Sized>(alg: &A, s: &Series) -> Result<()> {
    if alg.alphabet() != s.alphabet() {
        return Err(AlgebraError::AlphabetMismatch {
            left: alg.alphabet(),
            right: s.alphabet(),
        });
    }
    Ok(())
}

/// `Σ_{j<=N} h_j z^j` by Horner's rule, for `z` without constant term.
pub fn apply_entire_in<A: SeriesAlgebra + ?Sized>(alg: &A, h: &[Q], z: &Series) -> Result<Series> {
    check_alphabet(alg, z)?;
    if !z.constant_term().is_zero() {
        return Err(AlgebraError::NonzeroConstant);
    }
    let n = z.truncation();
    let top = n.min(h.len().saturating_sub(1));
    let alphabet = z.alphabet();
    if h.is_empty() {
        return Ok(Series::zero(alphabet, n));
    }
    let mut acc = Series::constant(alphabet, n, h[top].clone());
    for j in (0..top).rev() {
        acc = alg.multiply(&acc, z)?;
        acc.add_term(Word::empty(), h[j].clone());
    }
    alg.normalize(&acc)
}

pub fn exp_in<A: SeriesAlgebra + ?Sized>(alg: &A, z: &Series) -> Result<Series> {
    apply_entire_in(alg, &coeff::exp_coefficients(z.truncation()), z)
}

/// `log(g)` for `g` with constant term 1.
pub fn log_in<A: SeriesAlgebra + ?Sized>(alg: &A, g: &Series) -> Result<Series> {
    let c = g.constant_term();
    if !c.is_one() {
        return Err(AlgebraError::ConstantNotOne(format_q(&c)));
    }
    let u = g.sub(&Series::one(g.alphabet(), g.truncation()))?;
    apply_entire_in(alg, &coeff::log1p_coefficients(g.truncation()), &u)
}

/// `s^{-1} = Σ (1 - s)^j` for `s` with constant term 1.
pub fn geometric_inverse_in<A: SeriesAlgebra + ?Sized>(alg: &A, s: &Series) -> Result<Series> {
    let c = s.constant_term();
    if !c.is_one() {
        return Err(AlgebraError::ConstantNotOne(format_q(&c)));
    }
    let u = Series::one(s.alphabet(), s.truncation()).sub(s)?;
    let ones = vec![Q::one(); s.truncation() + 1];
    apply_entire_in(alg, &ones, &u)
}

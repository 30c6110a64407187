//! Free Lie algebras: Lyndon bases, bracket expansion, primitive and
//! group-like tests, and Witt dimension counts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::coeff::{format_q, parse_q, Q};
use crate::error::{AlgebraError, Result};
use crate::freealg::{letter_from_json, letter_to_json, parse_alphabet, Alphabet, Letter, Series, TensorSeries, Word};

/// A bracket expression over letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Letter(Letter),
    Pair(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn pair(a: Bracket, b: Bracket) -> Bracket {
        Bracket::Pair(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Bracket::Letter(_) => 1,
            Bracket::Pair(a, b) => a.degree() + b.degree(),
        }
    }

    /// The letters read left to right.
    pub fn foliage(&self) -> Word {
        fn walk(b: &Bracket, out: &mut Vec<Letter>) {
            match b {
                Bracket::Letter(l) => out.push(*l),
                Bracket::Pair(x, y) => {
                    walk(x, out);
                    walk(y, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        Word::new(out)
    }

    /// Expansion `[a,b] -> ab - ba` as a map from words to integer coefficients.
    fn expand_words(&self) -> BTreeMap<Word, BigInt> {
        match self {
            Bracket::Letter(l) => BTreeMap::from([(Word::single(*l), BigInt::one())]),
            Bracket::Pair(a, b) => {
                let ea = a.expand_words();
                let eb = b.expand_words();
                let mut out: BTreeMap<Word, BigInt> = BTreeMap::new();
                for (u, x) in &ea {
                    for (v, y) in &eb {
                        *out.entry(u.concat(v)).or_default() += x * y;
                        *out.entry(v.concat(u)).or_default() -= x * y;
                    }
                }
                out.retain(|_, c| !c.is_zero());
                out
            }
        }
    }

    pub fn expand(&self, alphabet: Alphabet, truncation: usize) -> Result<Series> {
        if self.degree() > truncation {
            return Err(AlgebraError::DegreeExceedsTruncation {
                degree: self.degree(),
                truncation,
            });
        }
        Series::from_terms(
            alphabet,
            truncation,
            self.expand_words().into_iter().map(|(w, c)| (w, Q::from_integer(c))),
        )
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bracket::Letter(l) => letter_to_json(*l),
            Bracket::Pair(a, b) => json!([a.to_json(), b.to_json()]),
        }
    }

    pub fn from_json(v: &Value, alphabet: Alphabet, field: &str) -> Result<Bracket> {
        let is_letter = match alphabet {
            Alphabet::Free { .. } => v.is_u64(),
            Alphabet::Kohno { .. } => v.as_array().map(|a| a.iter().all(Value::is_u64)).unwrap_or(false),
        };
        if is_letter {
            return letter_from_json(v, alphabet, field).map(Bracket::Letter);
        }
        match v.as_array() {
            Some(a) if a.len() == 2 => Ok(Bracket::pair(
                Bracket::from_json(&a[0], alphabet, &format!("{field}[0]"))?,
                Bracket::from_json(&a[1], alphabet, &format!("{field}[1]"))?,
            )),
            _ => Err(AlgebraError::parse(
                field,
                format!("expected a letter or a pair of brackets, got {v}"),
            )),
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Letter(l) => write!(f, "{l}"),
            Bracket::Pair(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// A word is Lyndon if it is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[Letter]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing: split off the longest proper Lyndon suffix.
pub fn standard_bracketing(w: &[Letter]) -> Bracket {
    debug_assert!(is_lyndon(w));
    if w.len() == 1 {
        return Bracket::Letter(w[0]);
    }
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a single letter suffix is always Lyndon");
    Bracket::pair(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

/// Lyndon words of exactly `degree` letters over the ordered `letters`, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(letters: &[Letter], degree: usize) -> Vec<Word> {
    let m = letters.len();
    let mut out = Vec::new();
    if m == 0 || degree == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        if w.len() == degree {
            out.push(Word::new(w.iter().map(|&i| letters[i]).collect()));
        }
        let period = w.len();
        while w.len() < degree {
            let c = w[w.len() - period];
            w.push(c);
        }
        while w.last() == Some(&(m - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Standard-bracketed Lyndon basis of the degree-`degree` component of the
/// free Lie algebra on `ω_1..ω_num_generators`.
pub fn lyndon_basis(num_generators: usize, degree: usize) -> Vec<Bracket> {
    lyndon_basis_over(&Alphabet::Free { size: num_generators }.letters(), degree)
}

pub fn lyndon_basis_over(letters: &[Letter], degree: usize) -> Vec<Bracket> {
    lyndon_words(letters, degree)
        .iter()
        .map(|w| standard_bracketing(w.letters()))
        .collect()
}

/// Lie polynomial in the Lyndon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    alphabet: Alphabet,
    terms: BTreeMap<Word, Q>,
}

impl LieElement {
    pub fn zero(alphabet: Alphabet) -> LieElement {
        LieElement {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(alphabet: Alphabet, letter: Letter) -> Result<LieElement> {
        LieElement::from_lyndon_terms(alphabet, [(Word::single(letter), Q::one())])
    }

    /// From coefficients on Lyndon words.
    pub fn from_lyndon_terms<I>(alphabet: Alphabet, terms: I) -> Result<LieElement>
    where
        I: IntoIterator<Item = (Word, Q)>,
    {
        let mut out = LieElement::zero(alphabet);
        for (w, c) in terms {
            alphabet.check_word(&w)?;
            if !is_lyndon(w.letters()) {
                return Err(AlgebraError::NotLie(format!("{w} is not a Lyndon word")));
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    /// From arbitrary bracket expressions, rewritten in the Lyndon basis.
    pub fn from_brackets<I>(alphabet: Alphabet, terms: I) -> Result<LieElement>
    where
        I: IntoIterator<Item = (Bracket, Q)>,
    {
        let terms: Vec<(Bracket, Q)> = terms.into_iter().collect();
        let top = terms.iter().map(|(b, _)| b.degree()).max().unwrap_or(0);
        let mut s = Series::zero(alphabet, top);
        for (b, c) in &terms {
            s = s.add(&b.expand(alphabet, top)?.scale(c))?;
        }
        LieElement::from_series(&s)
    }

    /// Recovers Lyndon coordinates of a Lie polynomial.
    ///
    /// Relies on the expansion of a standard-bracketed Lyndon word `w` being
    /// `w` plus lexicographically larger words of the same degree: the
    /// smallest surviving word of each degree must be Lyndon.
    pub fn from_series(s: &Series) -> Result<LieElement> {
        if !s.constant_term().is_zero() {
            return Err(AlgebraError::NotLie("nonzero constant term".into()));
        }
        let alphabet = s.alphabet();
        let mut rest: BTreeMap<Word, Q> = s.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = LieElement::zero(alphabet);
        while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(w.letters()) {
                return Err(AlgebraError::NotLie(format!(
                    "leading word {w} of degree {} is not Lyndon",
                    w.degree()
                )));
            }
            for (u, k) in standard_bracketing(w.letters()).expand_words() {
                let slot = rest.entry(u.clone()).or_insert_with(Q::zero);
                *slot -= &c * Q::from_integer(k);
                if slot.is_zero() {
                    rest.remove(&u);
                }
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    /// Random element: each Lyndon word of degree `<= max_degree` gets,
    /// with probability `density`, a coefficient `p/q` with `|p| <= 5`,
    /// `1 <= q <= 6`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, max_degree: usize, density: f64) -> LieElement {
        let letters = alphabet.letters();
        let mut out = LieElement::zero(alphabet);
        for d in 1..=max_degree {
            for w in lyndon_words(&letters, d) {
                if rng.gen_bool(density) {
                    let num: i64 = rng.gen_range(-5..=5);
                    let den: i64 = rng.gen_range(1..=6);
                    out.add_term(w, Q::new(num.into(), den.into()));
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &Q) -> LieElement {
        let mut out = LieElement::zero(self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&-Q::one())
    }

    pub fn add(&self, other: &LieElement) -> Result<LieElement> {
        if self.alphabet != other.alphabet {
            return Err(AlgebraError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// Lie bracket, rewritten in the Lyndon basis.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        let n = self.max_degree() + other.max_degree();
        let a = self.expand(n)?;
        let b = other.expand(n)?;
        LieElement::from_series(&a.mul(&b)?.sub(&b.mul(&a)?)?)
    }

    /// Expansion into the free associative algebra at truncation `N`.
    pub fn expand(&self, truncation: usize) -> Result<Series> {
        bracket_expand(self, truncation)
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"lyndon": standard_bracketing(w.letters()).to_json(), "coeff": format_q(c)}))
            .collect();
        json!({
            "alphabet": serde_json::to_value(self.alphabet).expect("alphabet serializes"),
            "terms": terms,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("lie element serializes")
    }

    /// Parses the `{"alphabet":..., "terms":[{"lyndon":..., "coeff":...}]}`
    /// form. Any bracket expression is accepted and rewritten in the Lyndon
    /// basis.
    pub fn from_json_value(v: &Value) -> Result<LieElement> {
        let alphabet = parse_alphabet(v.get("alphabet"))?;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| AlgebraError::parse("terms", "missing or not an array"))?;
        let mut parsed = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            let field = format!("terms[{k}].lyndon");
            let b = t
                .get("lyndon")
                .ok_or_else(|| AlgebraError::parse(&field, "missing"))
                .and_then(|b| Bracket::from_json(b, alphabet, &field))?;
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| AlgebraError::parse(format!("terms[{k}].coeff"), "missing or not a string"))
                .and_then(|s| {
                    parse_q(s).map_err(|e| AlgebraError::parse(format!("terms[{k}].coeff"), e.to_string()))
                })?;
            parsed.push((b, c));
        }
        LieElement::from_brackets(alphabet, parsed)
    }

    pub fn from_json(text: &str) -> Result<LieElement> {
        let v: Value = serde_json::from_str(text).map_err(|e| AlgebraError::parse("json", e.to_string()))?;
        LieElement::from_json_value(&v)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let b = standard_bracketing(w.letters());
            if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "({c}) {b}")?;
            }
        }
        Ok(())
    }
}

/// Expands every bracket `[a,b] -> ab - ba` into a series truncated at `N`.
pub fn bracket_expand(e: &LieElement, truncation: usize) -> Result<Series> {
    let mut out = Series::zero(e.alphabet, truncation);
    for (w, c) in &e.terms {
        let b = standard_bracketing(w.letters());
        out = out.add(&b.expand(e.alphabet, truncation)?.scale(c))?;
    }
    Ok(out)
}

/// `δ(s) = s⊗1 + 1⊗s` at truncation.
pub fn is_primitive(s: &Series) -> bool {
    let one = Series::one(s.alphabet(), s.truncation());
    let rhs = TensorSeries::tensor(s, &one)
        .and_then(|a| Ok(a.add(&TensorSeries::tensor(&one, s)?)?))
        .expect("compatible by construction");
    s.shuffle_coproduct() == rhs
}

/// One failed shuffle equation `c_v c_w = Σ_{u ∈ v ш w} c_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleViolation {
    pub v: Word,
    pub w: Word,
    /// `c_v · c_w`
    pub product: Q,
    /// `Σ_{u ∈ v ш w} c_u`
    pub shuffle_sum: Q,
}

/// All shuffle equations with `deg v + deg w <= N` that fail, ordered by
/// total degree. An empty list with constant term 1 means group-like.
///
/// For a Kohno series the words must be good words (normal form); the
/// shuffle coproduct on good words agrees with the coproduct of the
/// enveloping algebra.
pub fn shuffle_violations(s: &Series) -> Vec<ShuffleViolation> {
    let square = TensorSeries::tensor(s, s).expect("compatible by construction");
    square
        .differences(&s.shuffle_coproduct())
        .into_iter()
        .map(|((v, w), product, shuffle_sum)| ShuffleViolation {
            v,
            w,
            product,
            shuffle_sum,
        })
        .collect()
}

/// Constant term 1 and every shuffle equation up to total degree `N` holds.
pub fn is_grouplike(s: &Series) -> bool {
    s.constant_term().is_one() && shuffle_violations(s).is_empty()
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n >= 1);
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt necklace count `(1/k) Σ_{d|k} μ(d) m^{k/d}`: the dimension of the
/// degree-`k` component of the free Lie algebra on `m` generators.
pub fn lie_dimension(m: usize, k: usize) -> BigUint {
    assert!(m >= 1 && k >= 1, "lie_dimension needs m >= 1 and k >= 1");
    let mut total = BigInt::zero();
    for d in 1..=k {
        if k % d == 0 {
            let mu = mobius(d as u64);
            if mu != 0 {
                total += BigInt::from(mu) * num_traits::pow(BigInt::from(m), k / d);
            }
        }
    }
    let (quot, rem) = (&total / BigInt::from(k), &total % BigInt::from(k));
    debug_assert!(rem.is_zero() && !quot.is_negative());
    quot.to_biguint().expect("necklace count is nonnegative")
}

/// Convenience for small counts.
pub fn lie_dimension_u64(m: usize, k: usize) -> u64 {
    lie_dimension(m, k).to_u64().expect("dimension fits in u64")
}

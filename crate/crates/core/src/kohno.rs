//! The enveloping algebra of the Kohno Lie algebra `br_n`.
//!
//! Elements are kept as combinations of *good words* `w_1 w_2 … w_{n-1}`,
//! where block `w_k` only uses the letters `r_{k l}` (`l > k`): reading left
//! to right, first indices never decrease. Good words form a basis, so the
//! good-word expansion is a normal form.
//!
//! Three rewriting routes reach it:
//!
//! * [`RewriteStrategy::LeftMultiplication`] multiplies letters into a good
//!   word from the left, commuting `r_ij` across the blocks `k < i` with
//!   `[r_ij, r_ki] = r_ki r_kj - r_kj r_ki` and
//!   `[r_ij, r_kj] = r_kj r_ki - r_ki r_kj` (both follow from
//!   `[r_ki, r_kj + r_ij] = 0` and `[r_ij, r_ki + r_kj] = 0`);
//! * [`RewriteStrategy::LeftmostDisorder`] and
//!   [`RewriteStrategy::RightmostDisorder`] repeatedly fix one adjacent pair
//!   `r_ij r_kl` with `i > k`. Each step lowers the sequence of first indices
//!   lexicographically, so both terminate.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::coeff::Q;
use crate::error::{AlgebraError, Result};
use crate::freealg::{geometric_inverse_in, Alphabet, Letter, Series, SeriesAlgebra, Word};
use crate::freelie::lie_dimension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    LeftMultiplication,
    LeftmostDisorder,
    RightmostDisorder,
}

/// `U(br_n)` with the good-word normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KohnoAlgebra {
    n: usize,
}

impl KohnoAlgebra {
    pub fn new(n: usize) -> Result<KohnoAlgebra> {
        if !(2..=255).contains(&n) {
            return Err(AlgebraError::InvalidArgument(format!(
                "Kohno algebra needs 2 <= n <= 255, got {n}"
            )));
        }
        Ok(KohnoAlgebra { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> Vec<Letter> {
        self.alphabet().letters()
    }

    /// Letters `r_{k,k+1}, …, r_{k,n}` of block `k`.
    pub fn block_letters(&self, k: usize) -> Vec<Letter> {
        (k + 1..=self.n).map(|l| Letter::pair(k, l)).collect()
    }

    pub fn generator(&self, i: usize, j: usize, truncation: usize) -> Result<Series> {
        Series::generator(self.alphabet(), truncation, Letter::pair(i, j))
    }

    /// `Σ_{i<j} r_ij`, central in `U(br_n)`.
    pub fn total_generator(&self, truncation: usize) -> Result<Series> {
        Series::from_terms(
            self.alphabet(),
            truncation,
            self.generators().into_iter().map(|l| (Word::single(l), Q::one())),
        )
    }

    fn check(&self, s: &Series) -> Result<()> {
        match s.alphabet() {
            Alphabet::Kohno { n } if n == self.n => Ok(()),
            other => Err(AlgebraError::AlphabetMismatch {
                left: self.alphabet(),
                right: other,
            }),
        }
    }

    pub fn normal_form(&self, s: &Series) -> Result<Series> {
        self.normal_form_with(s, RewriteStrategy::LeftMultiplication)
    }

    pub fn normal_form_with(&self, s: &Series, strategy: RewriteStrategy) -> Result<Series> {
        self.check(s)?;
        let mut out = Series::zero(s.alphabet(), s.truncation());
        for (w, c) in s.terms() {
            for (g, k) in normal_form_word(w, strategy) {
                out.add_term(g, c * Q::from_integer(k));
            }
        }
        Ok(out)
    }

    /// Product in normal form.
    pub fn kohno_mul(&self, a: &Series, b: &Series) -> Result<Series> {
        self.check(a)?;
        a.check_compatible(b)?;
        let a = self.normal_form(a)?;
        let b = self.normal_form(b)?;
        let n = a.truncation();
        let mut out = Series::zero(a.alphabet(), n);
        for (u, x) in a.terms() {
            let room = n - u.degree();
            for (v, y) in b.terms() {
                if v.degree() > room {
                    break;
                }
                let xy = x * y;
                for (g, k) in good_product(u, v) {
                    out.add_term(g, &xy * Q::from_integer(k));
                }
            }
        }
        Ok(out)
    }

    /// The homomorphism `U(br_n) -> U(br_{n-α})` killing every `r_ij` with
    /// `i <= α` and relabelling the remaining indices down by `α`.
    pub fn project_forget(&self, s: &Series, alpha: usize) -> Result<Series> {
        if alpha == 0 || alpha + 1 >= self.n {
            return Err(AlgebraError::InvalidArgument(format!(
                "project_forget needs 1 <= alpha < n-1 (n={}, alpha={alpha})",
                self.n
            )));
        }
        let s = self.normal_form(s)?;
        let target = Alphabet::Kohno { n: self.n - alpha };
        let mut out = Series::zero(target, s.truncation());
        for (w, c) in s.terms() {
            if w.letters().iter().all(|l| l.first_index() > alpha) {
                let relabelled = w
                    .letters()
                    .iter()
                    .map(|l| {
                        let (i, j) = l.indices();
                        Letter::pair(i - alpha, j - alpha)
                    })
                    .collect();
                out.add_term(Word::new(relabelled), c.clone());
            }
        }
        Ok(out)
    }

    /// Embeds a series of `U(br_m)` into `U(br_n)` by shifting indices by
    /// `n - m`; good words stay good.
    pub fn lift(&self, s: &Series) -> Result<Series> {
        let m = match s.alphabet() {
            Alphabet::Kohno { n } if n <= self.n => n,
            other => {
                return Err(AlgebraError::AlphabetMismatch {
                    left: self.alphabet(),
                    right: other,
                })
            }
        };
        let shift = self.n - m;
        let mut out = Series::zero(self.alphabet(), s.truncation());
        for (w, c) in s.terms() {
            let shifted = w
                .letters()
                .iter()
                .map(|l| {
                    let (i, j) = l.indices();
                    Letter::pair(i + shift, j + shift)
                })
                .collect();
            out.add_term(Word::new(shifted), c.clone());
        }
        Ok(out)
    }

    /// Splits `s` (constant term 1) into `[T_1, …, T_{n-1}]` with `T_k`
    /// supported on block `k` and `s = T_1 T_2 ⋯ T_{n-1}`.
    ///
    /// The tail `T_2 ⋯ T_{n-1}` is the lift of the projection forgetting the
    /// first strand, so `T_1 = s · lift(π(s))^{-1}`; the tail is factorized
    /// recursively. Fails when some `T_k` leaves its block, which cannot
    /// happen for group-like input.
    pub fn factorize(&self, s: &Series) -> Result<Vec<Series>> {
        self.check(s)?;
        let s = self.normal_form(s)?;
        let c = s.constant_term();
        if !c.is_one() {
            return Err(AlgebraError::ConstantNotOne(c.to_string()));
        }
        if self.n == 2 {
            return Ok(vec![s]);
        }
        let projected = self.project_forget(&s, 1)?;
        let tail = self.lift(&projected)?;
        let head = self.kohno_mul(&s, &geometric_inverse_in(self, &tail)?)?;
        if let Some((w, _)) = head
            .terms()
            .find(|(w, _)| w.letters().iter().any(|l| l.first_index() != 1))
        {
            return Err(AlgebraError::NotFactorizable(format!(
                "first factor contains the word {w} outside block 1"
            )));
        }
        let lower = KohnoAlgebra::new(self.n - 1)?;
        let mut out = vec![head];
        for t in lower.factorize(&projected)? {
            out.push(self.lift(&t)?);
        }
        Ok(out)
    }

    /// Product `T_1 ⋯ T_m` in normal form.
    pub fn product(&self, factors: &[Series]) -> Result<Series> {
        let first = factors
            .first()
            .ok_or_else(|| AlgebraError::InvalidArgument("empty product".into()))?;
        let mut acc = self.normal_form(first)?;
        for f in &factors[1..] {
            acc = self.kohno_mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// Quadratic defining relations as elements of the free algebra on the
    /// `r_ij`: `[r_ij, r_kl]` for disjoint pairs and `[r_ij, r_ik + r_jk]`
    /// for every triple and every choice of the bracketed pair.
    pub fn relation_elements(&self, truncation: usize) -> Result<Vec<Series>> {
        let a = self.alphabet();
        let comm = |x: Letter, ys: &[Letter]| -> Result<Series> {
            let mut terms = Vec::new();
            for &y in ys {
                terms.push((Word::new(vec![x, y]), Q::one()));
                terms.push((Word::new(vec![y, x]), -Q::one()));
            }
            Series::from_terms(a, truncation, terms)
        };
        let n = self.n;
        let mut out = Vec::new();
        let letters = self.generators();
        for (p, &x) in letters.iter().enumerate() {
            for &y in &letters[p + 1..] {
                let (i, j) = x.indices();
                let (k, l) = y.indices();
                if i != k && i != l && j != k && j != l {
                    out.push(comm(x, &[y])?);
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let (ij, ik, jk) = (Letter::pair(i, j), Letter::pair(i, k), Letter::pair(j, k));
                    out.push(comm(ij, &[ik, jk])?);
                    out.push(comm(ik, &[ij, jk])?);
                    out.push(comm(jk, &[ij, ik])?);
                }
            }
        }
        Ok(out)
    }
}

impl SeriesAlgebra for KohnoAlgebra {
    fn alphabet(&self) -> Alphabet {
        Alphabet::Kohno { n: self.n }
    }

    fn normalize(&self, s: &Series) -> Result<Series> {
        self.normal_form(s)
    }

    fn multiply(&self, a: &Series, b: &Series) -> Result<Series> {
        self.kohno_mul(a, b)
    }
}

pub fn is_good_word(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0].first_index() <= p[1].first_index())
}

/// The block index if every letter of `w` has the same first index.
pub fn block_of(w: &Word) -> Option<usize> {
    let first = w.letters().first()?.first_index();
    w.letters().iter().all(|l| l.first_index() == first).then_some(first)
}

/// `[r_ij, r_kl]` for `k < i < j`, as block-`k` two-letter words.
fn commutator_into_block(i: usize, j: usize, letter: Letter) -> Option<[(Letter, Letter, i32); 2]> {
    let (k, l) = letter.indices();
    debug_assert!(k < i);
    let (ki, kj) = (Letter::pair(k, i), Letter::pair(k, j));
    if l == i {
        Some([(ki, kj, 1), (kj, ki, -1)])
    } else if l == j {
        Some([(kj, ki, 1), (ki, kj, -1)])
    } else {
        None
    }
}

/// `r_ij · g` for a good word `g`, as a combination of good words.
fn left_mul_letter(letter: Letter, good: &[Letter], coeff: &BigInt, out: &mut HashMap<Word, BigInt>) {
    let (i, j) = letter.indices();
    let stop = good.iter().position(|l| l.first_index() >= i).unwrap_or(good.len());
    for p in 0..stop {
        if let Some(terms) = commutator_into_block(i, j, good[p]) {
            for (a, b, sign) in terms {
                let mut w = Vec::with_capacity(good.len() + 1);
                w.extend_from_slice(&good[..p]);
                w.push(a);
                w.push(b);
                w.extend_from_slice(&good[p + 1..]);
                *out.entry(Word::new(w)).or_default() += coeff * sign;
            }
        }
    }
    let mut w = Vec::with_capacity(good.len() + 1);
    w.extend_from_slice(&good[..stop]);
    w.push(letter);
    w.extend_from_slice(&good[stop..]);
    *out.entry(Word::new(w)).or_default() += coeff;
}

/// Normal form of `u · v` for good words `u` and `v`.
fn good_product(u: &Word, v: &Word) -> Vec<(Word, BigInt)> {
    let ok = match (u.letters().last(), v.letters().first()) {
        (Some(a), Some(b)) => a.first_index() <= b.first_index(),
        _ => true,
    };
    if ok {
        return vec![(u.concat(v), BigInt::one())];
    }
    let mut current: HashMap<Word, BigInt> = HashMap::from([(v.clone(), BigInt::one())]);
    for &letter in u.letters().iter().rev() {
        let mut next = HashMap::new();
        for (g, c) in &current {
            left_mul_letter(letter, g.letters(), c, &mut next);
        }
        next.retain(|_, c| !c.is_zero());
        current = next;
    }
    current.into_iter().collect()
}

/// Good-word expansion of an arbitrary word over Kohno letters.
pub fn normal_form_word(w: &Word, strategy: RewriteStrategy) -> Vec<(Word, BigInt)> {
    let mut out: Vec<(Word, BigInt)> = match strategy {
        RewriteStrategy::LeftMultiplication => {
            let mut current: HashMap<Word, BigInt> = HashMap::from([(Word::empty(), BigInt::one())]);
            for &letter in w.letters().iter().rev() {
                let mut next = HashMap::new();
                for (g, c) in &current {
                    left_mul_letter(letter, g.letters(), c, &mut next);
                }
                next.retain(|_, c| !c.is_zero());
                current = next;
            }
            current.into_iter().collect()
        }
        RewriteStrategy::LeftmostDisorder => local_rewrite(w, true),
        RewriteStrategy::RightmostDisorder => local_rewrite(w, false),
    };
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn local_rewrite(w: &Word, leftmost: bool) -> Vec<(Word, BigInt)> {
    fn key(w: Word) -> (Vec<usize>, Word) {
        (w.letters().iter().map(|l| l.first_index()).collect(), w)
    }
    let mut pending: BTreeMap<(Vec<usize>, Word), BigInt> = BTreeMap::new();
    pending.insert(key(w.clone()), BigInt::one());
    let mut done: Vec<(Word, BigInt)> = Vec::new();
    // Rewrites only ever lower the first-index sequence, so the maximal key
    // has received all its contributions when popped.
    while let Some(((fi, word), c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let disorder = |p: &usize| fi[*p] > fi[*p + 1];
        let pos = if leftmost {
            (0..fi.len().saturating_sub(1)).find(disorder)
        } else {
            (0..fi.len().saturating_sub(1)).rev().find(disorder)
        };
        let Some(p) = pos else {
            done.push((word, c));
            continue;
        };
        let letters = word.letters();
        let (a, b) = (letters[p], letters[p + 1]);
        let (i, j) = a.indices();
        let mut replacements: Vec<([Letter; 2], i32)> = vec![([b, a], 1)];
        if let Some(extra) = commutator_into_block(i, j, b) {
            for (x, y, sign) in extra {
                replacements.push(([x, y], sign));
            }
        }
        for (pair, sign) in replacements {
            let mut v = letters.to_vec();
            v[p] = pair[0];
            v[p + 1] = pair[1];
            *pending.entry(key(Word::new(v))).or_default() += &c * sign;
        }
    }
    done
}

/// Coefficient of `t^k` in `Π_{j=1}^{n-1} (1 - j t)^{-1}`: the number of
/// good words of degree `k`.
pub fn universal_dimension(n: usize, k: usize) -> BigUint {
    assert!(n >= 2, "universal_dimension needs n >= 2");
    let mut coeffs = vec![BigUint::zero(); k + 1];
    coeffs[0] = BigUint::one();
    for j in 1..n {
        // multiply by 1/(1 - j t): c_m += j c_{m-1}
        for m in 1..=k {
            let prev = coeffs[m - 1].clone();
            coeffs[m] += prev * BigUint::from(j);
        }
    }
    coeffs.swap_remove(k)
}

/// `Σ_{m=1}^{n-1} dim fr_m^{[k]}`, from `br_n ≅ fr_{n-1} ⊕ … ⊕ fr_1` as graded
/// vector spaces.
pub fn kohno_lie_dimension(n: usize, k: usize) -> BigUint {
    assert!(n >= 2 && k >= 1, "kohno_lie_dimension needs n >= 2 and k >= 1");
    (1..n).map(|m| lie_dimension(m, k)).sum()
}

/// All good words of degree `k` in `U(br_n)`, in canonical order.
pub fn enumerate_good_words(n: usize, k: usize) -> Vec<Word> {
    assert!(n >= 2, "enumerate_good_words needs n >= 2");
    let letters = Alphabet::Kohno { n }.letters();
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::with_capacity(k);
    fn dfs(letters: &[Letter], k: usize, stack: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if stack.len() == k {
            out.push(Word::new(stack.clone()));
            return;
        }
        let floor = stack.last().map(|l| l.first_index()).unwrap_or(0);
        for &l in letters {
            if l.first_index() >= floor {
                stack.push(l);
                dfs(letters, k, stack, out);
                stack.pop();
            }
        }
    }
    dfs(&letters, k, &mut stack, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::qi;
    use crate::freealg::exp_in;

    fn br(n: usize) -> KohnoAlgebra {
        KohnoAlgebra::new(n).unwrap()
    }

    fn ws(pairs: &[(usize, usize)]) -> Word {
        Word::pairs(pairs)
    }

    fn series(n: usize, trunc: usize, terms: &[(&[(usize, usize)], i64)]) -> Series {
        Series::from_terms(Alphabet::Kohno { n }, trunc, terms.iter().map(|(w, c)| (ws(w), qi(*c)))).unwrap()
    }

    fn all_strategies() -> [RewriteStrategy; 3] {
        [
            RewriteStrategy::LeftMultiplication,
            RewriteStrategy::LeftmostDisorder,
            RewriteStrategy::RightmostDisorder,
        ]
    }

    #[test]
    fn normal_form_examples() {
        let a = br(4);
        for st in all_strategies() {
            let s = series(4, 3, &[(&[(1, 2), (2, 3)], 1)]);
            assert_eq!(a.normal_form_with(&s, st).unwrap(), s);
            let s = series(4, 3, &[(&[(2, 4), (1, 3)], 1)]);
            assert_eq!(
                a.normal_form_with(&s, st).unwrap(),
                series(4, 3, &[(&[(1, 3), (2, 4)], 1)])
            );
        }
        let a = br(3);
        let expect = series(
            3,
            2,
            &[(&[(1, 2), (2, 3)], 1), (&[(1, 2), (1, 3)], 1), (&[(1, 3), (1, 2)], -1)],
        );
        for st in all_strategies() {
            let s = series(3, 2, &[(&[(2, 3), (1, 2)], 1)]);
            assert_eq!(a.normal_form_with(&s, st).unwrap(), expect);
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let a = br(4);
        let s = series(4, 4, &[(&[(3, 4), (2, 3), (1, 4), (1, 2)], 1), (&[(2, 4), (1, 2)], 3)]);
        let once = a.normal_form(&s).unwrap();
        assert_eq!(a.normal_form(&once).unwrap(), once);
        assert!(once.terms().all(|(w, _)| is_good_word(w)));
    }

    #[test]
    fn strategies_agree_on_all_short_words() {
        let a = br(4);
        let letters = a.generators();
        for x in &letters {
            for y in &letters {
                for z in &letters {
                    let w = Word::new(vec![*x, *y, *z]);
                    let r = normal_form_word(&w, RewriteStrategy::LeftMultiplication);
                    assert_eq!(r, normal_form_word(&w, RewriteStrategy::LeftmostDisorder), "{w}");
                    assert_eq!(r, normal_form_word(&w, RewriteStrategy::RightmostDisorder), "{w}");
                }
            }
        }
    }

    #[test]
    fn mul_examples() {
        let a = br(3);
        let r12 = a.generator(1, 2, 3).unwrap();
        let r13 = a.generator(1, 3, 3).unwrap();
        let r23 = a.generator(2, 3, 3).unwrap();
        assert_eq!(
            a.kohno_mul(&r12, &r13).unwrap(),
            series(3, 3, &[(&[(1, 2), (1, 3)], 1)])
        );
        assert_eq!(
            a.kohno_mul(&r23, &r12).unwrap(),
            a.normal_form(&series(3, 3, &[(&[(2, 3), (1, 2)], 1)])).unwrap()
        );
        let total = a.total_generator(3).unwrap();
        for g in [&r12, &r13, &r23] {
            let lhs = a.kohno_mul(&total, g).unwrap();
            let rhs = a.kohno_mul(g, &total).unwrap();
            assert!(lhs.sub(&rhs).unwrap().is_zero());
        }
    }

    #[test]
    fn relations_vanish_in_normal_form() {
        for n in 2..=5 {
            let a = br(n);
            for rel in a.relation_elements(2).unwrap() {
                assert!(a.normal_form(&rel).unwrap().is_zero(), "{rel}");
            }
        }
    }

    #[test]
    fn project_forget_examples() {
        let a = br(3);
        let s = series(3, 2, &[(&[(1, 2), (2, 3)], 1), (&[(2, 3)], 1)]);
        assert_eq!(a.project_forget(&s, 1).unwrap(), series(2, 2, &[(&[(1, 2)], 1)]));
        let s = series(3, 2, &[(&[(1, 2)], 1)]);
        assert!(a.project_forget(&s, 1).unwrap().is_zero());
        let s = series(3, 2, &[(&[(2, 3), (1, 2)], 1)]);
        assert!(a.project_forget(&s, 1).unwrap().is_zero());
        let s = series(3, 2, &[(&[(2, 3), (2, 3)], 1)]);
        assert_eq!(
            a.project_forget(&s, 1).unwrap(),
            series(2, 2, &[(&[(1, 2), (1, 2)], 1)])
        );
        assert!(a.project_forget(&s, 2).is_err());
        assert!(a.project_forget(&s, 0).is_err());
    }

    #[test]
    fn factorize_examples() {
        let a = br(3);
        let n = 4;
        let e12 = exp_in(&a, &a.generator(1, 2, n).unwrap()).unwrap();
        let e23 = exp_in(&a, &a.generator(2, 3, n).unwrap()).unwrap();
        let f = a.factorize(&a.kohno_mul(&e12, &e23).unwrap()).unwrap();
        assert_eq!(f, vec![e12.clone(), e23.clone()]);

        let s = a.kohno_mul(&e23, &e12).unwrap();
        let f = a.factorize(&s).unwrap();
        let em23 = exp_in(&a, &a.generator(2, 3, n).unwrap().neg()).unwrap();
        let conj = a.product(&[e23.clone(), e12.clone(), em23]).unwrap();
        assert_eq!(f[0], conj);
        assert_eq!(f[1], e23);
        assert_eq!(a.product(&f).unwrap(), s);

        let one = Series::one(a.alphabet(), n);
        assert_eq!(a.factorize(&one).unwrap(), vec![one.clone(), one.clone()]);
        assert!(matches!(
            a.factorize(&Series::zero(a.alphabet(), n)),
            Err(AlgebraError::ConstantNotOne(_))
        ));
        let bad = series(3, 2, &[(&[], 1), (&[(1, 2), (2, 3)], 1)]);
        assert!(matches!(a.factorize(&bad), Err(AlgebraError::NotFactorizable(_))));
    }

    #[test]
    fn dimension_examples() {
        for k in 0..6 {
            assert_eq!(universal_dimension(2, k), BigUint::one());
        }
        let d3: Vec<_> = (0..4).map(|k| universal_dimension(3, k)).collect();
        assert_eq!(d3, [1u32, 3, 7, 15].map(BigUint::from));
        let d4: Vec<_> = (0..4).map(|k| universal_dimension(4, k)).collect();
        assert_eq!(d4, [1u32, 6, 25, 90].map(BigUint::from));
        let l3: Vec<_> = (1..5).map(|k| kohno_lie_dimension(3, k)).collect();
        assert_eq!(l3, [3u32, 1, 2, 3].map(BigUint::from));
        assert_eq!(kohno_lie_dimension(4, 2), BigUint::from(4u32));
    }

    #[test]
    fn good_word_enumeration() {
        let w = enumerate_good_words(3, 1);
        assert_eq!(w, vec![ws(&[(1, 2)]), ws(&[(1, 3)]), ws(&[(2, 3)])]);
        let w = enumerate_good_words(3, 2);
        let mut expect = vec![
            ws(&[(1, 2), (1, 2)]),
            ws(&[(1, 2), (1, 3)]),
            ws(&[(1, 3), (1, 2)]),
            ws(&[(1, 3), (1, 3)]),
            ws(&[(1, 2), (2, 3)]),
            ws(&[(1, 3), (2, 3)]),
            ws(&[(2, 3), (2, 3)]),
        ];
        expect.sort();
        assert_eq!(w, expect);
        assert_eq!(enumerate_good_words(2, 4), vec![ws(&[(1, 2); 4])]);
        for n in 2..=5 {
            for k in 0..=6 {
                assert_eq!(
                    BigUint::from(enumerate_good_words(n, k).len()),
                    universal_dimension(n, k)
                );
            }
        }
    }
}

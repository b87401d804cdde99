//! Words over `{F, G}`, exact evaluation, relation verification, the
//! explicit relation families, and the bounded relation search.

mod search;

pub use search::{
    search_relations, search_relations_with, ExactKeying, KeyStrategy, KeyStrategyRegistry, ModularKeying,
    SearchOptions, SearchReport, WordKey, WordKeyer,
};

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::modular::order_mod;
use crate::poly::{PolyError, Polynomial, RationalFunction};
use crate::series::{s_compose, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("invalid word `{0}`: use the letters F and G")]
    InvalidWord(String),
    #[error("degree bound {bound} is below deg F * deg G = {required}")]
    BoundTooSmall { bound: u64, required: u64 },
    #[error("generators must have degree at least 2")]
    DegreeTooSmall,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no (a, b) below the search limit satisfies the divisibility condition")]
    DivisibilityUnsatisfied,
    #[error("unknown key strategy `{0}`")]
    UnknownStrategy(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    F,
    G,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::F => 'F',
            Letter::G => 'G',
        }
    }
}

/// A nonempty word, read left to right from the outermost to the innermost
/// composition factor. Ordered lexicographically with `F < G`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word, SemigroupError> {
        if letters.is_empty() {
            return Err(SemigroupError::InvalidWord(String::new()));
        }
        Ok(Word(letters))
    }

    pub fn parse(s: &str) -> Result<Word, SemigroupError> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'F' => Ok(Letter::F),
                'G' => Ok(Letter::G),
                _ => Err(SemigroupError::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(letters).map_err(|_| SemigroupError::InvalidWord(s.to_string()))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Composed degree for generators of degrees `m` and `n`.
    pub fn degree(&self, m: u64, n: u64) -> Option<u64> {
        let a = m.checked_pow(self.count(Letter::F) as u32)?;
        let b = n.checked_pow(self.count(Letter::G) as u32)?;
        a.checked_mul(b)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|l| l.as_char()).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = SemigroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

/// Concatenation of letter powers, e.g. `[(F, 2), (G, 1)]` is `FFG`.
pub fn word_from_powers(parts: &[(Letter, u64)]) -> Result<Word, SemigroupError> {
    let mut letters = Vec::new();
    for &(l, k) in parts {
        letters.extend(std::iter::repeat_n(l, k as usize));
    }
    Word::new(letters)
}

/// An equation between two distinct words, stored with `lhs < rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
    pub degree: u64,
    pub verified: bool,
}

impl Relation {
    /// Orders the sides lexicographically; `verified` starts false.
    pub fn new(a: Word, b: Word, degree: u64) -> Relation {
        let (lhs, rhs) = if a <= b { (a, b) } else { (b, a) };
        Relation { lhs, rhs, degree, verified: false }
    }

    pub fn parse(lhs: &str, rhs: &str, m: u64, n: u64) -> Result<Relation, SemigroupError> {
        let a = Word::parse(lhs)?;
        let b = Word::parse(rhs)?;
        let d = a.degree(m, n).ok_or_else(|| SemigroupError::InvalidParameters("degree overflow".into()))?;
        if b.degree(m, n) != Some(d) {
            return Err(SemigroupError::InvalidParameters("sides have different degrees".into()));
        }
        Ok(Relation::new(a, b, d))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} (degree {})", self.lhs, self.rhs, self.degree)
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Relation", 4)?;
        st.serialize_field("lhs", &self.lhs.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("verified", &self.verified)?;
        st.end()
    }
}

/// Maps that can be composed exactly.
pub trait Composable: Clone {
    type Error;
    /// `self o inner`.
    fn compose_with(&self, inner: &Self) -> Result<Self, Self::Error>;
}

impl Composable for Polynomial {
    type Error = PolyError;
    fn compose_with(&self, inner: &Self) -> Result<Self, PolyError> {
        self.compose(inner)
    }
}

impl Composable for RationalFunction {
    type Error = PolyError;
    fn compose_with(&self, inner: &Self) -> Result<Self, PolyError> {
        self.compose(inner)
    }
}

impl Composable for TruncatedSeries {
    type Error = SeriesError;
    fn compose_with(&self, inner: &Self) -> Result<Self, SeriesError> {
        s_compose(self, inner)
    }
}

/// Evaluates `w` at `(F, G)` by folding from the innermost letter outward.
pub fn eval_word<T: Composable>(w: &Word, f: &T, g: &T) -> Result<T, T::Error> {
    let pick = |l: Letter| if l == Letter::F { f } else { g };
    let mut letters = w.letters().iter().rev();
    let mut acc = pick(*letters.next().expect("nonempty word")).clone();
    for &l in letters {
        acc = pick(l).compose_with(&acc)?;
    }
    Ok(acc)
}

/// Exact check of a relation on a polynomial pair.
pub fn verify_relation(rel: &Relation, f: &Polynomial, g: &Polynomial) -> Result<bool, SemigroupError> {
    verify_words(&rel.lhs, &rel.rhs, f, g)
}

pub fn verify_words<T: Composable + PartialEq>(a: &Word, b: &Word, f: &T, g: &T) -> Result<bool, SemigroupError>
where
    SemigroupError: From<T::Error>,
{
    if a == b {
        return Ok(true);
    }
    Ok(eval_word(a, f, g)? == eval_word(b, f, g)?)
}

/// Checks a relation on truncated series; returns the precision to which
/// both sides are known and agree, or `None` when they differ.
pub fn verify_relation_series(
    rel: &Relation,
    f: &TruncatedSeries,
    g: &TruncatedSeries,
) -> Result<Option<usize>, SemigroupError> {
    let a = eval_word(&rel.lhs, f, g)?;
    let b = eval_word(&rel.rhs, f, g)?;
    Ok(a.agrees_with(&b).then(|| a.precision().min(b.precision())))
}

/// The lexicographically least `(i, j)` with `ell | m^i (m^j - 1)`.
pub fn lemma33_params(ell: u64, m: u64) -> Result<(u32, u64), SemigroupError> {
    if ell == 0 || m < 2 {
        return Err(SemigroupError::InvalidParameters(format!("ell = {ell}, m = {m}")));
    }
    // Split ell into the part built from primes of m and the coprime rest.
    let mut coprime = ell;
    let mut shared = 1u64;
    loop {
        let g = num_integer::gcd(coprime, m);
        if g == 1 {
            break;
        }
        coprime /= g;
        shared *= g;
    }
    let mut i = 0u32;
    let mut mi = 1u128;
    while !mi.is_multiple_of(shared as u128) {
        mi *= m as u128;
        i += 1;
    }
    let j = order_mod(m % coprime, coprime);
    Ok((i, j))
}

/// The relation `F^r G^s F^j = F^(j+r) G^s`, valid on `(X^m, alpha X^n)`
/// whenever `alpha^ell = 1`, `(i, j) = lemma33_params(ell, m)` and `r >= i`.
pub fn lemma33_relation(ell: u64, m: u64, n: u64, r: u32, s: u32) -> Result<Relation, SemigroupError> {
    let (i, j) = lemma33_params(ell, m)?;
    if r < i || s == 0 {
        return Err(SemigroupError::InvalidParameters(format!("need r >= {i} and s >= 1")));
    }
    let lhs = word_from_powers(&[(Letter::F, r as u64), (Letter::G, s as u64), (Letter::F, j)])?;
    let rhs = word_from_powers(&[(Letter::F, j + r as u64), (Letter::G, s as u64)])?;
    let degree = lhs.degree(m, n).ok_or_else(|| SemigroupError::InvalidParameters("degree overflow".into()))?;
    Ok(Relation::new(lhs, rhs, degree))
}

/// Smallest positive multiple of `j` that is at least `i`: the power `r`
/// for which `F^r o G` commutes with `F^r` on `(X^m, alpha X^n)`.
pub fn commuting_power(i: u32, j: u64) -> u64 {
    let i = i as u64;
    let k = i.div_ceil(j).max(1);
    k * j
}

/// Words `F^r G F^r` and `F^(2r) G` expressing that `F^r o G` commutes with `F^r`.
pub fn commuting_relation(r: u64, m: u64, n: u64) -> Result<Relation, SemigroupError> {
    let lhs = word_from_powers(&[(Letter::F, r), (Letter::G, 1), (Letter::F, r)])?;
    let rhs = word_from_powers(&[(Letter::F, 2 * r), (Letter::G, 1)])?;
    let degree = lhs.degree(m, n).ok_or_else(|| SemigroupError::InvalidParameters("degree overflow".into()))?;
    Ok(Relation::new(lhs, rhs, degree))
}

/// Relation for `F = gamma H^{o i}`, `G = zeta H^{o j}` with
/// `H = X^r C(X^s)` and `gamma^s = zeta^s = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case3Relation {
    pub a: u64,
    pub b: u64,
    /// `F^(a + j b)`.
    pub lhs: Word,
    /// `F^a G^(i b)`.
    pub rhs: Word,
}

/// Finds the least `(a, b)` (by `a + b`, then `a`) with
/// `s | r^(i a) (1 + r^(i j) + ... + r^((b-1) i j))`.
pub fn case3_relation(i: u64, j: u64, s: u64, r: u64) -> Result<Case3Relation, SemigroupError> {
    if i == 0 || j == 0 || s == 0 {
        return Err(SemigroupError::InvalidParameters(format!("i = {i}, j = {j}, s = {s}")));
    }
    const LIMIT: u64 = 256;
    let s128 = s as u128;
    let pow_mod = |base: u128, e: u64| -> u128 {
        let mut acc = 1 % s128;
        for _ in 0..e {
            acc = acc * (base % s128) % s128;
        }
        acc
    };
    let q = pow_mod(r as u128, i * j);
    for total in 2..=2 * LIMIT {
        for a in 1..total.min(LIMIT + 1) {
            let b = total - a;
            if b == 0 || b > LIMIT {
                continue;
            }
            let lead = pow_mod(r as u128, i * a);
            let mut geo = 0u128;
            let mut qp = 1 % s128;
            for _ in 0..b {
                geo = (geo + qp) % s128;
                qp = qp * q % s128;
            }
            if (lead * geo).is_multiple_of(s128) {
                let lhs = word_from_powers(&[(Letter::F, a + j * b)])?;
                let rhs = word_from_powers(&[(Letter::F, a), (Letter::G, i * b)])?;
                return Ok(Case3Relation { a, b, lhs, rhs });
            }
        }
    }
    Err(SemigroupError::DivisibilityUnsatisfied)
}

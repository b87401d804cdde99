//! Bounded breadth-first relation search.
//!
//! Words are enumerated level by level in increasing composed degree. Each
//! word gets a key computed from the key of its inner suffix; two words of
//! the same degree with equal keys are a candidate relation, which is
//! trimmed and then verified by exact evaluation before it is reported.
//! How keys are computed is a pluggable [`KeyStrategy`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::field::modular::{add_mod, factorize, inv_mod, is_prime, mul_mod, pow_mod};
use crate::field::{Field, FieldElement, FieldKind};
use crate::poly::Polynomial;

use super::{eval_word, Letter, Relation, SemigroupError, Word};

/// A word's key: fingerprints modulo several primes, or the exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WordKey {
    Modular(Vec<u64>),
    Exact(Polynomial),
}

/// Computes keys for one generator pair.
pub trait WordKeyer: Send + Sync {
    /// Key of the one-letter word.
    fn leaf(&self, letter: Letter) -> WordKey;
    /// Key of `letter o inner`.
    fn extend(&self, letter: Letter, inner: &WordKey) -> WordKey;

    fn key_of(&self, word: &Word) -> WordKey {
        let mut it = word.letters().iter().rev();
        let mut key = self.leaf(*it.next().expect("nonempty word"));
        for &l in it {
            key = self.extend(l, &key);
        }
        key
    }
}

/// A named way of keying words, selectable at run time.
pub trait KeyStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, field: &Field) -> bool;
    fn prepare(&self, f: &Polynomial, g: &Polynomial) -> Result<Box<dyn WordKeyer>, SemigroupError>;
}

/// Keys are the exact composed polynomials.
pub struct ExactKeying;

struct ExactKeyer {
    f: Polynomial,
    g: Polynomial,
}

impl WordKeyer for ExactKeyer {
    fn leaf(&self, letter: Letter) -> WordKey {
        WordKey::Exact(if letter == Letter::F { self.f.clone() } else { self.g.clone() })
    }

    fn extend(&self, letter: Letter, inner: &WordKey) -> WordKey {
        let WordKey::Exact(p) = inner else { unreachable!("mixed key kinds") };
        let outer = if letter == Letter::F { &self.f } else { &self.g };
        WordKey::Exact(outer.compose(p).expect("same field"))
    }
}

impl KeyStrategy for ExactKeying {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn supports(&self, _field: &Field) -> bool {
        true
    }

    fn prepare(&self, f: &Polynomial, g: &Polynomial) -> Result<Box<dyn WordKeyer>, SemigroupError> {
        Ok(Box::new(ExactKeyer { f: f.clone(), g: g.clone() }))
    }
}

/// Keys are values at fixed points modulo two large primes `P = 1 mod k`,
/// through the embedding sending `zeta_k` to a primitive `k`-th root of
/// unity mod `P`. Equal polynomials always get equal keys; unequal ones
/// collide with negligible probability, and every collision is re-verified
/// exactly. Characteristic zero only.
pub struct ModularKeying;

struct Reduction {
    p: u64,
    f: Vec<(u64, u64)>,
    g: Vec<(u64, u64)>,
    point: u64,
}

struct ModularKeyer {
    reductions: Vec<Reduction>,
}

fn eval_mod(terms: &[(u64, u64)], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    let mut cur = match terms.last() {
        Some((e, _)) => *e,
        None => return 0,
    };
    for (e, c) in terms.iter().rev() {
        acc = mul_mod(acc, pow_mod(x, cur - e, p), p);
        acc = add_mod(acc, *c, p);
        cur = *e;
    }
    mul_mod(acc, pow_mod(x, cur, p), p)
}

impl WordKeyer for ModularKeyer {
    fn leaf(&self, letter: Letter) -> WordKey {
        WordKey::Modular(
            self.reductions
                .iter()
                .map(|r| eval_mod(if letter == Letter::F { &r.f } else { &r.g }, r.point, r.p))
                .collect(),
        )
    }

    fn extend(&self, letter: Letter, inner: &WordKey) -> WordKey {
        let WordKey::Modular(v) = inner else { unreachable!("mixed key kinds") };
        WordKey::Modular(
            self.reductions
                .iter()
                .zip(v)
                .map(|(r, &y)| eval_mod(if letter == Letter::F { &r.f } else { &r.g }, y, r.p))
                .collect(),
        )
    }
}

fn reduce_element(c: &FieldElement, p: u64, omega: u64) -> Option<u64> {
    let rat = |q: &num_rational::BigRational| -> Option<u64> {
        let pb = num_bigint::BigInt::from(p);
        let num = q.numer().mod_floor(&pb).to_u64()?;
        let den = q.denom().mod_floor(&pb).to_u64()?;
        Some(mul_mod(num, inv_mod(den, p)?, p))
    };
    match c.field().kind() {
        FieldKind::Rationals => rat(&c.as_rational()?),
        FieldKind::Cyclotomic { .. } => {
            let mut acc = 0u64;
            let mut w = 1u64;
            for comp in c.components()? {
                acc = add_mod(acc, mul_mod(rat(&comp.as_rational()?)?, w, p), p);
                w = mul_mod(w, omega, p);
            }
            Some(acc)
        }
        _ => None,
    }
}

fn reduce_poly(f: &Polynomial, p: u64, omega: u64) -> Option<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for (e, c) in f.terms() {
        let r = reduce_element(&c, p, omega)?;
        if r != 0 {
            out.push((e, r));
        }
    }
    // A vanishing leading coefficient would change the degree.
    (out.last().map(|t| t.0) == f.degree()).then_some(out)
}

fn primitive_root_of_order(k: u64, p: u64) -> u64 {
    if k == 1 {
        return 1;
    }
    let primes: Vec<u64> = factorize(k).into_iter().map(|(q, _)| q).collect();
    for g in 2..p {
        let w = pow_mod(g, (p - 1) / k, p);
        if primes.iter().all(|&q| pow_mod(w, k / q, p) != 1) {
            return w;
        }
    }
    unreachable!("k divides p - 1")
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl KeyStrategy for ModularKeying {
    fn name(&self) -> &'static str {
        "modular"
    }

    fn supports(&self, field: &Field) -> bool {
        matches!(field.kind(), FieldKind::Rationals | FieldKind::Cyclotomic { .. })
    }

    fn prepare(&self, f: &Polynomial, g: &Polynomial) -> Result<Box<dyn WordKeyer>, SemigroupError> {
        let field = f.field();
        let k = match field.kind() {
            FieldKind::Rationals => 1,
            FieldKind::Cyclotomic { k } => *k,
            _ => return Err(SemigroupError::UnknownStrategy("modular keying needs characteristic 0".into())),
        };
        let mut reductions = Vec::new();
        let mut t = ((1u64 << 61) - 1) / k;
        while reductions.len() < 2 && t > 1 {
            let p = k * t + 1;
            t -= 1;
            if !is_prime(p) {
                continue;
            }
            let omega = primitive_root_of_order(k, p);
            if let (Some(fr), Some(gr)) = (reduce_poly(f, p, omega), reduce_poly(g, p, omega)) {
                let point = 2 + splitmix(p) % (p - 3);
                reductions.push(Reduction { p, f: fr, g: gr, point });
            }
        }
        Ok(Box::new(ModularKeyer { reductions }))
    }
}

/// Named key strategies.
pub struct KeyStrategyRegistry {
    strategies: Vec<Arc<dyn KeyStrategy>>,
}

impl KeyStrategyRegistry {
    pub fn empty() -> Self {
        KeyStrategyRegistry { strategies: Vec::new() }
    }

    /// Registers a strategy, replacing one with the same name.
    pub fn register(&mut self, s: Arc<dyn KeyStrategy>) {
        self.strategies.retain(|x| x.name() != s.name());
        self.strategies.push(s);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn KeyStrategy>> {
        self.strategies.iter().find(|s| s.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    /// `auto` picks the first registered strategy supporting the field.
    pub fn select(&self, name: &str, field: &Field) -> Result<Arc<dyn KeyStrategy>, SemigroupError> {
        if name == "auto" {
            return self
                .strategies
                .iter()
                .find(|s| s.supports(field))
                .cloned()
                .ok_or_else(|| SemigroupError::UnknownStrategy(format!("no strategy supports {field}")));
        }
        let s = self.get(name).ok_or_else(|| SemigroupError::UnknownStrategy(name.to_string()))?;
        if !s.supports(field) {
            return Err(SemigroupError::UnknownStrategy(format!("{name} does not support {field}")));
        }
        Ok(s)
    }
}

impl Default for KeyStrategyRegistry {
    fn default() -> Self {
        let mut r = KeyStrategyRegistry::empty();
        r.register(Arc::new(ModularKeying));
        r.register(Arc::new(ExactKeying));
        r
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub bound: u64,
    /// Worker threads used to compute keys within a level.
    pub jobs: usize,
    /// Strategy name, or `auto`.
    pub strategy: String,
    /// Stop after this many verified relations.
    pub max_relations: Option<usize>,
}

impl SearchOptions {
    pub fn new(bound: u64) -> Self {
        SearchOptions { bound, jobs: 1, strategy: "auto".into(), max_relations: None }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub relations: Vec<Relation>,
    pub strategy: &'static str,
    pub words: usize,
    pub collisions: usize,
    /// Key collisions that failed exact verification.
    pub rejected: usize,
}

/// All trimmed, exactly verified relations among words of composed degree
/// at most `bound`, sorted by degree and then lexicographically.
pub fn search_relations(f: &Polynomial, g: &Polynomial, bound: u64) -> Result<Vec<Relation>, SemigroupError> {
    Ok(search_relations_with(f, g, &SearchOptions::new(bound), &KeyStrategyRegistry::default())?.relations)
}

struct Level {
    words: Vec<Word>,
    keys: Vec<WordKey>,
    index: HashMap<Word, usize>,
}

pub fn search_relations_with(
    f: &Polynomial,
    g: &Polynomial,
    opts: &SearchOptions,
    registry: &KeyStrategyRegistry,
) -> Result<SearchReport, SemigroupError> {
    let (m, n) = (f.deg(), g.deg());
    if m < 2 || n < 2 {
        return Err(SemigroupError::DegreeTooSmall);
    }
    if f.field() != g.field() {
        f.try_add(g)?;
    }
    if opts.bound < m * n {
        return Err(SemigroupError::BoundTooSmall { bound: opts.bound, required: m * n });
    }
    let strategy = registry.select(&opts.strategy, f.field())?;
    let keyer = strategy.prepare(f, g)?;
    let mut degrees = BTreeSet::new();
    let mut a = 1u64;
    while a <= opts.bound {
        let mut d = a;
        while d <= opts.bound {
            if d > 1 {
                degrees.insert(d);
            }
            match d.checked_mul(n) {
                Some(x) => d = x,
                None => break,
            }
        }
        match a.checked_mul(m) {
            Some(x) => a = x,
            None => break,
        }
    }

    let mut levels: HashMap<u64, Level> = HashMap::new();
    let mut report =
        SearchReport { relations: Vec::new(), strategy: strategy.name(), words: 0, collisions: 0, rejected: 0 };
    let mut seen: HashSet<(Word, Word)> = HashSet::new();
    'levels: for d in degrees {
        // (word, outer letter, inner level, inner index)
        let mut pending: Vec<(Word, Letter, u64, usize)> = Vec::new();
        for (letter, dl) in [(Letter::F, m), (Letter::G, n)] {
            if d % dl != 0 {
                continue;
            }
            let inner = d / dl;
            if inner == 1 {
                pending.push((Word(vec![letter]), letter, 1, 0));
            } else if let Some(level) = levels.get(&inner) {
                for (idx, w) in level.words.iter().enumerate() {
                    let mut letters = Vec::with_capacity(w.len() + 1);
                    letters.push(letter);
                    letters.extend_from_slice(w.letters());
                    pending.push((Word(letters), letter, inner, idx));
                }
            }
        }
        if pending.is_empty() {
            continue;
        }
        pending.sort_by(|x, y| x.0.cmp(&y.0));
        let keys = compute_keys(&pending, &levels, keyer.as_ref(), opts.jobs.max(1));
        report.words += pending.len();

        let mut first: HashMap<&WordKey, usize> = HashMap::with_capacity(keys.len());
        for (i, key) in keys.iter().enumerate() {
            let Some(&j) = first.get(key) else {
                first.insert(key, i);
                continue;
            };
            report.collisions += 1;
            match trim_and_verify(&pending[j].0, &pending[i].0, f, g, keyer.as_ref())? {
                Trimmed::Relation(rel) => {
                    if seen.insert((rel.lhs.clone(), rel.rhs.clone())) {
                        report.relations.push(rel);
                        if opts.max_relations.is_some_and(|k| report.relations.len() >= k) {
                            break 'levels;
                        }
                    }
                }
                Trimmed::Rejected => report.rejected += 1,
            }
        }
        drop(first);
        let words: Vec<Word> = pending.into_iter().map(|p| p.0).collect();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        levels.insert(d, Level { words, keys, index });
    }
    report.relations.sort_by(|x, y| (x.degree, &x.lhs, &x.rhs).cmp(&(y.degree, &y.lhs, &y.rhs)));
    let _ = levels.values().map(|l| l.index.len()).sum::<usize>();
    Ok(report)
}

fn compute_keys(
    pending: &[(Word, Letter, u64, usize)],
    levels: &HashMap<u64, Level>,
    keyer: &dyn WordKeyer,
    jobs: usize,
) -> Vec<WordKey> {
    let one = |item: &(Word, Letter, u64, usize)| -> WordKey {
        let (_, letter, inner, idx) = item;
        if *inner == 1 {
            keyer.leaf(*letter)
        } else {
            keyer.extend(*letter, &levels[inner].keys[*idx])
        }
    };
    if jobs <= 1 || pending.len() < 256 {
        return pending.iter().map(one).collect();
    }
    let chunk = pending.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> =
            pending.chunks(chunk).map(|part| scope.spawn(move || part.iter().map(one).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("key worker panicked")).collect()
    })
}

enum Trimmed {
    Relation(Relation),
    Rejected,
}

fn trim_and_verify(
    a: &Word,
    b: &Word,
    f: &Polynomial,
    g: &Polynomial,
    keyer: &dyn WordKeyer,
) -> Result<Trimmed, SemigroupError> {
    let (m, n) = (f.deg(), g.deg());
    let mut x = a.letters().to_vec();
    let mut y = b.letters().to_vec();
    // Right cancellation is valid for any nonconstant inner map.
    while x.len() > 1 && y.len() > 1 && x.last() == y.last() {
        x.pop();
        y.pop();
    }
    let mut verified = false;
    // Left cancellation only when the shorter equation still holds.
    while x.len() > 1 && y.len() > 1 && x[0] == y[0] {
        let (wx, wy) = (Word(x[1..].to_vec()), Word(y[1..].to_vec()));
        if keyer.key_of(&wx) != keyer.key_of(&wy) {
            break;
        }
        if eval_word(&wx, f, g)? != eval_word(&wy, f, g)? {
            break;
        }
        x.remove(0);
        y.remove(0);
        verified = true;
    }
    let (wx, wy) = (Word(x), Word(y));
    if !verified && eval_word(&wx, f, g)? != eval_word(&wy, f, g)? {
        return Ok(Trimmed::Rejected);
    }
    let degree = wx.degree(m, n).expect("degree within bound");
    let mut rel = Relation::new(wx, wy, degree);
    rel.verified = true;
    Ok(Trimmed::Relation(rel))
}

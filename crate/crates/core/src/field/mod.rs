//! Exact coefficient fields.
//!
//! A [`Field`] is a cheap, reference-counted handle describing one of:
//! the rationals, a cyclotomic field `Q(zeta_k)`, a prime field `GF(p)`, a
//! finite field `GF(p^e)` given by a monic irreducible modulus, or a simple
//! extension ring `base[t]/(t^d - value)` produced on demand when a root is
//! missing. Elements carry their field and refuse to mix with elements of a
//! different one.

mod cyclotomic;
pub(crate) mod dense;
pub(crate) mod modular;
mod roots;

pub use roots::{nth_root_or_request, root_of_unity_order, ExtensionRequest, NthRoot};

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use modular::{add_mod, inv_mod, mul_mod, sub_mod};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("zero input")]
    ZeroInput,
    #[error("{element} is a zero divisor in {field}")]
    ZeroDivisor { element: String, field: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Internal coefficient representation. Vectors have fixed length (the
/// degree of the extension) so that structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Repr {
    Rational(BigRational),
    Cyclotomic(Vec<BigRational>),
    Residue(u64),
    Residues(Vec<u64>),
    Tower(Vec<Repr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Cyclotomic {
        k: u64,
    },
    PrimeField {
        p: u64,
    },
    /// `GF(p)[z]/(modulus)`, modulus monic and listed lowest degree first.
    FiniteField {
        p: u64,
        modulus: Vec<u64>,
    },
    /// `base[t]/(t^degree - value)`.
    Extension {
        base: Field,
        degree: usize,
        value: FieldElement,
    },
}

struct FieldData {
    kind: FieldKind,
    cyclotomic_modulus: Vec<BigInt>,
    coefficients: Option<Field>,
    depth: usize,
}

#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Cyclotomic { k } => write!(f, "Q(zeta:{k})"),
            FieldKind::PrimeField { p } => write!(f, "GF({p})"),
            FieldKind::FiniteField { p, modulus } => {
                let cs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "GF({p}^{}:{})", modulus.len() - 1, cs.join(","))
            }
            FieldKind::Extension { base, degree, value } => {
                write!(f, "{base}[{}^{degree}={value}]", self.generator_name().unwrap())
            }
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Field::parse(s)
    }
}

fn gen_name(depth: usize) -> String {
    if depth <= 1 {
        "t".to_string()
    } else {
        format!("t{depth}")
    }
}

impl Field {
    fn build(kind: FieldKind, coefficients: Option<Field>, cyclotomic_modulus: Vec<BigInt>) -> Field {
        let depth = match &kind {
            FieldKind::Extension { base, .. } => base.0.depth + 1,
            _ => 0,
        };
        Field(Arc::new(FieldData { kind, cyclotomic_modulus, coefficients, depth }))
    }

    pub fn rationals() -> Field {
        Field::build(FieldKind::Rationals, None, Vec::new())
    }

    pub fn cyclotomic(k: u64) -> Result<Field, FieldError> {
        if k == 0 || k > 10_000 {
            return Err(FieldError::InvalidField(format!("cyclotomic index {k} out of range")));
        }
        let modulus = cyclotomic::cyclotomic_polynomial(k);
        Ok(Field::build(FieldKind::Cyclotomic { k }, Some(Field::rationals()), modulus))
    }

    pub fn prime_field(p: u64) -> Result<Field, FieldError> {
        if p >= 1 << 62 || !modular::is_prime(p) {
            return Err(FieldError::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::build(FieldKind::PrimeField { p }, None, Vec::new()))
    }

    /// `GF(p^e)` from a monic modulus of degree `e`, coefficients lowest
    /// degree first. The modulus is checked for irreducibility.
    pub fn finite_field(p: u64, modulus: Vec<u64>) -> Result<Field, FieldError> {
        let prime = Field::prime_field(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::InvalidField("modulus coefficients must be reduced mod p".into()));
        }
        let e = modulus.len() as u32 - 1;
        if (p as f64).powi(e as i32) > 2f64.powi(62) {
            return Err(FieldError::InvalidField("field too large".into()));
        }
        let m: Vec<Repr> = modulus.iter().map(|&c| Repr::Residue(c)).collect();
        if !is_irreducible(&prime, &m, p, e)? {
            return Err(FieldError::InvalidField(format!("modulus is reducible over GF({p})")));
        }
        Ok(Field::build(FieldKind::FiniteField { p, modulus }, Some(prime), Vec::new()))
    }

    /// The quotient ring `base[t]/(t^d - value)` named by a request.
    pub fn extend(req: &ExtensionRequest) -> Field {
        let base = req.base().clone();
        Field::build(
            FieldKind::Extension { base: base.clone(), degree: req.degree(), value: req.value().clone() },
            Some(base),
            Vec::new(),
        )
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// Base ring of an extension.
    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            FieldKind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Rationals | FieldKind::Cyclotomic { .. } => 0,
            FieldKind::PrimeField { p } | FieldKind::FiniteField { p, .. } => *p,
            FieldKind::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn char_divides(&self, n: u64) -> bool {
        let p = self.characteristic();
        p != 0 && n.is_multiple_of(p)
    }

    /// True unless this is an extension ring, which may contain zero divisors.
    pub fn is_field(&self) -> bool {
        !matches!(self.0.kind, FieldKind::Extension { .. })
    }

    /// Degree over `Q` in characteristic zero.
    pub fn absolute_degree(&self) -> Option<u64> {
        match &self.0.kind {
            FieldKind::Rationals => Some(1),
            FieldKind::Cyclotomic { .. } => Some(self.0.cyclotomic_modulus.len() as u64 - 1),
            FieldKind::Extension { base, degree, .. } => base.absolute_degree().map(|d| d * *degree as u64),
            _ => None,
        }
    }

    /// Number of elements of a finite field or ring.
    pub fn size(&self) -> Option<u128> {
        match &self.0.kind {
            FieldKind::PrimeField { p } => Some(*p as u128),
            FieldKind::FiniteField { p, modulus } => (*p as u128).checked_pow(modulus.len() as u32 - 1),
            FieldKind::Extension { base, degree, .. } => base.size().and_then(|s| s.checked_pow(*degree as u32)),
            _ => None,
        }
    }

    /// Name used for the adjoined generator (`z` or `t`, `t2`, ...).
    pub fn generator_name(&self) -> Option<String> {
        match &self.0.kind {
            FieldKind::Cyclotomic { .. } | FieldKind::FiniteField { .. } => Some("z".into()),
            FieldKind::Extension { .. } => Some(gen_name(self.0.depth)),
            _ => None,
        }
    }

    /// Looks up a generator by name through the tower.
    pub fn generator_named(&self, name: &str) -> Option<FieldElement> {
        if self.generator_name().as_deref() == Some(name) {
            return self.generator();
        }
        let base = self.base()?;
        let g = base.generator_named(name)?;
        g.coerce_into(self).ok()
    }

    /// `zeta_k`, the class of `z` modulo the finite-field modulus, or `t`.
    pub fn generator(&self) -> Option<FieldElement> {
        match &self.0.kind {
            FieldKind::Cyclotomic { .. } => {
                let m = &self.0.cyclotomic_modulus;
                let phi = m.len() - 1;
                let mut v = vec![BigRational::zero(); phi];
                if phi == 1 {
                    v[0] = BigRational::from_integer(-m[0].clone());
                } else {
                    v[1] = BigRational::one();
                }
                Some(self.elem(Repr::Cyclotomic(v)))
            }
            FieldKind::FiniteField { p, modulus } => {
                let e = modulus.len() - 1;
                let mut v = vec![0u64; e];
                if e == 1 {
                    v[0] = sub_mod(0, modulus[0], *p);
                } else {
                    v[1] = 1;
                }
                Some(self.elem(Repr::Residues(v)))
            }
            FieldKind::Extension { base, degree, .. } => {
                let mut v = vec![base.zero_repr(); *degree];
                v[1] = base.one_repr();
                Some(self.elem(Repr::Tower(v)))
            }
            _ => None,
        }
    }

    pub(crate) fn elem(&self, repr: Repr) -> FieldElement {
        FieldElement { field: self.clone(), repr }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(self.zero_repr())
    }

    pub fn one(&self) -> FieldElement {
        self.elem(self.one_repr())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        self.elem(self.int_repr(n))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        let num = self.int_repr(q.numer());
        let den = self.int_repr(q.denom());
        let inv = self.inv_r(&den)?;
        Ok(self.elem(self.mul_r(&num, &inv)))
    }

    /// Every root of unity this field contains (for extension rings, those of
    /// the base), in a fixed order starting with 1.
    pub fn torsion_elements(&self) -> Vec<FieldElement> {
        match &self.0.kind {
            FieldKind::Rationals => vec![self.one(), self.from_i64(-1)],
            FieldKind::Cyclotomic { k } => {
                let z = self.generator().unwrap();
                let (g, n) = if k % 2 == 0 { (z, *k) } else { (-&z, 2 * k) };
                let mut out = Vec::with_capacity(n as usize);
                let mut cur = self.one();
                for _ in 0..n {
                    out.push(cur.clone());
                    cur = &cur * &g;
                }
                out
            }
            FieldKind::PrimeField { .. } | FieldKind::FiniteField { .. } => {
                let q = self.size().unwrap() as u64;
                (1..q).map(|i| self.element_at(i)).collect()
            }
            FieldKind::Extension { base, .. } => {
                base.torsion_elements().into_iter().map(|x| x.coerce_into(self).expect("base embeds")).collect()
            }
        }
    }

    /// The `index`-th element of a finite field, reading `index` in base `p`.
    pub(crate) fn element_at(&self, index: u64) -> FieldElement {
        match &self.0.kind {
            FieldKind::PrimeField { p } => self.elem(Repr::Residue(index % p)),
            FieldKind::FiniteField { p, modulus } => {
                let mut v = vec![0u64; modulus.len() - 1];
                let mut i = index;
                for slot in v.iter_mut() {
                    *slot = i % p;
                    i /= p;
                }
                self.elem(Repr::Residues(v))
            }
            _ => panic!("element_at requires a finite field"),
        }
    }

    fn coefficient_field(&self) -> &Field {
        self.0.coefficients.as_ref().expect("no coefficient field")
    }

    fn modulus_reprs(&self) -> Vec<Repr> {
        match &self.0.kind {
            FieldKind::Cyclotomic { .. } => {
                self.0.cyclotomic_modulus.iter().map(|c| Repr::Rational(BigRational::from_integer(c.clone()))).collect()
            }
            FieldKind::FiniteField { modulus, .. } => modulus.iter().map(|&c| Repr::Residue(c)).collect(),
            FieldKind::Extension { base, degree, value } => {
                let mut v = vec![base.zero_repr(); degree + 1];
                v[0] = base.neg_r(&value.repr);
                v[*degree] = base.one_repr();
                v
            }
            _ => unreachable!(),
        }
    }

    fn split(&self, r: &Repr) -> Vec<Repr> {
        match r {
            Repr::Cyclotomic(v) => v.iter().cloned().map(Repr::Rational).collect(),
            Repr::Residues(v) => v.iter().map(|&c| Repr::Residue(c)).collect(),
            Repr::Tower(v) => v.clone(),
            _ => unreachable!(),
        }
    }

    fn join(&self, mut v: Vec<Repr>) -> Repr {
        let base = self.coefficient_field();
        let n = self.vector_len();
        v.resize(n, base.zero_repr());
        match &self.0.kind {
            FieldKind::Cyclotomic { .. } => Repr::Cyclotomic(
                v.into_iter()
                    .map(|c| match c {
                        Repr::Rational(q) => q,
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            FieldKind::FiniteField { .. } => Repr::Residues(
                v.into_iter()
                    .map(|c| match c {
                        Repr::Residue(x) => x,
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            _ => Repr::Tower(v),
        }
    }

    fn vector_len(&self) -> usize {
        match &self.0.kind {
            FieldKind::Cyclotomic { .. } => self.0.cyclotomic_modulus.len() - 1,
            FieldKind::FiniteField { modulus, .. } => modulus.len() - 1,
            FieldKind::Extension { degree, .. } => *degree,
            _ => 1,
        }
    }

    pub(crate) fn zero_repr(&self) -> Repr {
        match &self.0.kind {
            FieldKind::Rationals => Repr::Rational(BigRational::zero()),
            FieldKind::Cyclotomic { .. } => Repr::Cyclotomic(vec![BigRational::zero(); self.vector_len()]),
            FieldKind::PrimeField { .. } => Repr::Residue(0),
            FieldKind::FiniteField { .. } => Repr::Residues(vec![0; self.vector_len()]),
            FieldKind::Extension { base, degree, .. } => Repr::Tower(vec![base.zero_repr(); *degree]),
        }
    }

    pub(crate) fn one_repr(&self) -> Repr {
        self.int_repr(&BigInt::one())
    }

    pub(crate) fn int_repr(&self, n: &BigInt) -> Repr {
        match &self.0.kind {
            FieldKind::Rationals => Repr::Rational(BigRational::from_integer(n.clone())),
            FieldKind::Cyclotomic { .. } => {
                let mut v = vec![BigRational::zero(); self.vector_len()];
                v[0] = BigRational::from_integer(n.clone());
                Repr::Cyclotomic(v)
            }
            FieldKind::PrimeField { p } => Repr::Residue(reduce_bigint(n, *p)),
            FieldKind::FiniteField { p, .. } => {
                let mut v = vec![0; self.vector_len()];
                v[0] = reduce_bigint(n, *p);
                Repr::Residues(v)
            }
            FieldKind::Extension { base, degree, .. } => {
                let mut v = vec![base.zero_repr(); *degree];
                v[0] = base.int_repr(n);
                Repr::Tower(v)
            }
        }
    }

    pub(crate) fn is_zero_r(&self, r: &Repr) -> bool {
        match r {
            Repr::Rational(q) => q.is_zero(),
            Repr::Cyclotomic(v) => v.iter().all(|q| q.is_zero()),
            Repr::Residue(x) => *x == 0,
            Repr::Residues(v) => v.iter().all(|&x| x == 0),
            Repr::Tower(v) => {
                let base = self.coefficient_field();
                v.iter().all(|c| base.is_zero_r(c))
            }
        }
    }

    pub(crate) fn add_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Rational(x), Repr::Rational(y)) => Repr::Rational(x + y),
            (Repr::Cyclotomic(x), Repr::Cyclotomic(y)) => {
                Repr::Cyclotomic(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            (Repr::Residue(x), Repr::Residue(y)) => Repr::Residue(add_mod(*x, *y, self.characteristic())),
            (Repr::Residues(x), Repr::Residues(y)) => {
                let p = self.characteristic();
                Repr::Residues(x.iter().zip(y).map(|(u, v)| add_mod(*u, *v, p)).collect())
            }
            (Repr::Tower(x), Repr::Tower(y)) => {
                let base = self.coefficient_field();
                Repr::Tower(x.iter().zip(y).map(|(u, v)| base.add_r(u, v)).collect())
            }
            _ => unreachable!("mismatched representations"),
        }
    }

    pub(crate) fn neg_r(&self, a: &Repr) -> Repr {
        match a {
            Repr::Rational(x) => Repr::Rational(-x),
            Repr::Cyclotomic(x) => Repr::Cyclotomic(x.iter().map(|u| -u).collect()),
            Repr::Residue(x) => Repr::Residue(sub_mod(0, *x, self.characteristic())),
            Repr::Residues(x) => {
                let p = self.characteristic();
                Repr::Residues(x.iter().map(|u| sub_mod(0, *u, p)).collect())
            }
            Repr::Tower(x) => {
                let base = self.coefficient_field();
                Repr::Tower(x.iter().map(|u| base.neg_r(u)).collect())
            }
        }
    }

    pub(crate) fn sub_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Rational(x), Repr::Rational(y)) => Repr::Rational(x - y),
            (Repr::Residue(x), Repr::Residue(y)) => Repr::Residue(sub_mod(*x, *y, self.characteristic())),
            _ => self.add_r(a, &self.neg_r(b)),
        }
    }

    pub(crate) fn mul_r(&self, a: &Repr, b: &Repr) -> Repr {
        match (a, b) {
            (Repr::Rational(x), Repr::Rational(y)) => Repr::Rational(x * y),
            (Repr::Residue(x), Repr::Residue(y)) => Repr::Residue(mul_mod(*x, *y, self.characteristic())),
            (Repr::Cyclotomic(x), Repr::Cyclotomic(y)) => {
                let n = x.len();
                if n == 1 {
                    return Repr::Cyclotomic(vec![&x[0] * &y[0]]);
                }
                let mut prod = vec![BigRational::zero(); 2 * n - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !v.is_zero() {
                            prod[i + j] += u * v;
                        }
                    }
                }
                let m = &self.0.cyclotomic_modulus;
                for i in (n..prod.len()).rev() {
                    let c = std::mem::take(&mut prod[i]);
                    if c.is_zero() {
                        continue;
                    }
                    for (j, mj) in m.iter().take(n).enumerate() {
                        if !mj.is_zero() {
                            prod[i - n + j] -= &c * mj;
                        }
                    }
                }
                prod.truncate(n);
                Repr::Cyclotomic(prod)
            }
            (Repr::Residues(x), Repr::Residues(y)) => {
                let p = self.characteristic();
                let n = x.len();
                let mut prod = vec![0u64; 2 * n - 1];
                for (i, u) in x.iter().enumerate() {
                    if *u == 0 {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] = add_mod(prod[i + j], mul_mod(*u, *v, p), p);
                    }
                }
                let FieldKind::FiniteField { modulus, .. } = &self.0.kind else { unreachable!() };
                for i in (n..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    for (j, mj) in modulus.iter().take(n).enumerate() {
                        prod[i - n + j] = sub_mod(prod[i - n + j], mul_mod(c, *mj, p), p);
                    }
                }
                prod.truncate(n);
                Repr::Residues(prod)
            }
            (Repr::Tower(x), Repr::Tower(y)) => {
                let FieldKind::Extension { base, degree, value } = &self.0.kind else { unreachable!() };
                let d = *degree;
                let mut prod = dense::mul(base, x, y);
                for i in (d..prod.len()).rev() {
                    if base.is_zero_r(&prod[i]) {
                        continue;
                    }
                    let c = base.mul_r(&prod[i], &value.repr);
                    prod[i - d] = base.add_r(&prod[i - d], &c);
                }
                prod.truncate(d);
                prod.resize(d, base.zero_repr());
                Repr::Tower(prod)
            }
            _ => unreachable!("mismatched representations"),
        }
    }

    pub(crate) fn inv_r(&self, a: &Repr) -> Result<Repr, FieldError> {
        if self.is_zero_r(a) {
            return Err(FieldError::DivisionByZero);
        }
        match a {
            Repr::Rational(x) => Ok(Repr::Rational(x.recip())),
            Repr::Residue(x) => inv_mod(*x, self.characteristic()).map(Repr::Residue).ok_or(FieldError::DivisionByZero),
            _ => {
                let base = self.coefficient_field();
                let mut v = self.split(a);
                dense::trim(base, &mut v);
                let zero_divisor = || FieldError::ZeroDivisor { element: self.fmt_repr(a), field: self.to_string() };
                match dense::inverse_mod(base, &v, &self.modulus_reprs()) {
                    Ok(Some(inv)) => Ok(self.join(inv)),
                    Ok(None) => Err(zero_divisor()),
                    Err(FieldError::DivisionByZero) | Err(FieldError::ZeroDivisor { .. }) => Err(zero_divisor()),
                    Err(e) => Err(e),
                }
            }
        }
    }

    pub(crate) fn pow_r(&self, a: &Repr, mut e: u64) -> Repr {
        let mut acc = self.one_repr();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_r(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_r(&b, &b);
            }
        }
        acc
    }

    pub(crate) fn fmt_repr(&self, r: &Repr) -> String {
        match r {
            Repr::Rational(q) => fmt_rational(q),
            Repr::Residue(x) => x.to_string(),
            _ => {
                let base = self.coefficient_field();
                let parts = self.split(r);
                let var = self.generator_name().unwrap();
                let terms: Vec<(u64, String)> = parts
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !base.is_zero_r(c))
                    .map(|(i, c)| (i as u64, base.fmt_repr(c)))
                    .collect();
                render_terms(&var, &terms)
            }
        }
    }

    /// Parses `Q`, `Q(zeta:k)`, `GF(p)`, `GF(p^e:c0,...,ce)`, each optionally
    /// followed by extension suffixes `[t^d=value]`.
    pub fn parse(spec: &str) -> Result<Field, FieldError> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let head_end = s.find('[').unwrap_or(s.len());
        let (head, mut rest) = s.split_at(head_end);
        let invalid = |msg: &str| FieldError::InvalidField(format!("{msg}: `{spec}`"));
        let mut field = if head == "Q" {
            Field::rationals()
        } else if let Some(inner) = head.strip_prefix("Q(zeta:").and_then(|t| t.strip_suffix(')')) {
            let k: u64 = inner.parse().map_err(|_| invalid("bad cyclotomic index"))?;
            Field::cyclotomic(k)?
        } else if let Some(inner) = head.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
            match inner.split_once('^') {
                None => Field::prime_field(inner.parse().map_err(|_| invalid("bad prime"))?)?,
                Some((p, rest)) => {
                    let p: u64 = p.parse().map_err(|_| invalid("bad prime"))?;
                    let (e, coeffs) = rest.split_once(':').ok_or_else(|| invalid("missing modulus"))?;
                    let e: usize = e.parse().map_err(|_| invalid("bad exponent"))?;
                    let modulus: Vec<u64> = coeffs
                        .split(',')
                        .map(|c| c.parse::<u64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| invalid("bad modulus coefficient"))?;
                    if modulus.len() != e + 1 {
                        return Err(invalid("modulus must have e+1 coefficients"));
                    }
                    Field::finite_field(p, modulus)?
                }
            }
        } else {
            return Err(invalid("unknown field"));
        };
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(|| invalid("unclosed extension"))?;
            let body = rest[1..close].to_string();
            rest = &rest[close + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                return Err(invalid("trailing characters"));
            }
            let (lhs, rhs) = body.split_once('=').ok_or_else(|| invalid("extension needs `=`"))?;
            let (name, d) = lhs.split_once('^').ok_or_else(|| invalid("extension needs `t^d`"))?;
            if name != gen_name(field.0.depth + 1) {
                return Err(invalid(&format!("expected generator {}", gen_name(field.0.depth + 1))));
            }
            let d: usize = d.parse().map_err(|_| invalid("bad extension degree"))?;
            let value =
                crate::text::parse_constant(rhs, &field).map_err(|e| FieldError::InvalidField(format!("{e}")))?;
            let req = ExtensionRequest::new(field.clone(), d, value)?;
            field = Field::extend(&req);
        }
        Ok(field)
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn is_irreducible(prime: &Field, m: &[Repr], p: u64, e: u32) -> Result<bool, FieldError> {
    if e == 1 {
        return Ok(true);
    }
    let x = vec![prime.zero_repr(), prime.one_repr()];
    let mut frob = vec![x.clone()];
    for _ in 0..e {
        let next = dense::powmod(prime, frob.last().unwrap(), p, m)?;
        frob.push(next);
    }
    let mut xe = frob[e as usize].clone();
    dense::trim(prime, &mut xe);
    if xe != x {
        return Ok(false);
    }
    for (r, _) in modular::factorize(e as u64) {
        let k = (e as u64 / r) as usize;
        let mut diff = frob[k].clone();
        diff.resize(2, prime.zero_repr());
        diff[1] = prime.sub_r(&diff[1], &prime.one_repr());
        dense::trim(prime, &mut diff);
        let g = dense::gcd(prime, &diff, m)?;
        if g.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when `s` is a sum of several terms at parenthesis depth zero.
pub(crate) fn is_compound(s: &str) -> bool {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => return true,
            _ => {}
        }
    }
    false
}

/// Renders `sum c_e * var^e` from `(e, rendered c_e)` pairs ordered by
/// decreasing exponent. Compound coefficients are parenthesised.
pub(crate) fn render_terms(var: &str, terms: &[(u64, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let compound = is_compound(c);
        let (neg, body) = match c.strip_prefix('-') {
            Some(rest) if !compound => (true, rest),
            _ => (false, c.as_str()),
        };
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        let piece = if compound {
            if *e == 0 {
                format!("({body})")
            } else {
                format!("({body})*{mono}")
            }
        } else if *e == 0 {
            body.to_string()
        } else if body == "1" {
            mono
        } else {
            format!("{body}*{mono}")
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&piece);
    }
    out
}

/// An element of a [`Field`].
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    pub(crate) repr: Repr,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_repr(&self.repr))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_r(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.repr == self.field.one_repr()
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: self.field.to_string(), right: other.field.to_string() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.elem(self.field.add_r(&self.repr, &other.repr)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.elem(self.field.sub_r(&self.repr, &other.repr)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.elem(self.field.mul_r(&self.repr, &other.repr)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let inv = self.field.inv_r(&other.repr)?;
        Ok(self.field.elem(self.field.mul_r(&self.repr, &inv)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(self.field.elem(self.field.inv_r(&self.repr)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.field.elem(self.field.pow_r(&self.repr, e))
    }

    pub fn pow_signed(&self, e: i64) -> Result<Self, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// The element as a rational number, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q.clone()),
            Repr::Cyclotomic(v) if v[1..].iter().all(|c| c.is_zero()) => Some(v[0].clone()),
            _ => None,
        }
    }

    /// Canonical residue of a prime-field element.
    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(x) => Some(*x),
            _ => None,
        }
    }

    /// Coefficients over the immediate coefficient field, when this is an
    /// element of an extension (cyclotomic, `GF(p^e)` or tower).
    pub fn components(&self) -> Option<Vec<FieldElement>> {
        let base = self.field.0.coefficients.as_ref()?;
        Some(self.field.split(&self.repr).into_iter().map(|r| base.elem(r)).collect())
    }

    /// True if this is a negative rational (used for sign normalisation).
    pub fn is_negative_rational(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_negative())
    }

    /// Maps the element into `target` along the canonical inclusions
    /// `Q -> Q(zeta_k)`, `Q -> GF(q)`, `GF(p) -> GF(p^e)` and `R -> R[t]/(...)`.
    pub fn coerce_into(&self, target: &Field) -> Result<FieldElement, FieldError> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let mismatch = || FieldError::FieldMismatch { left: self.field.to_string(), right: target.to_string() };
        if let FieldKind::Extension { base, degree, .. } = &target.0.kind {
            if let Ok(x) = self.coerce_into(base) {
                let mut v = vec![base.zero_repr(); *degree];
                v[0] = x.repr;
                return Ok(target.elem(Repr::Tower(v)));
            }
        }
        match (&self.repr, &target.0.kind) {
            (Repr::Rational(q), FieldKind::Cyclotomic { .. })
            | (Repr::Rational(q), FieldKind::PrimeField { .. })
            | (Repr::Rational(q), FieldKind::FiniteField { .. }) => target.from_rational(q),
            (Repr::Residue(x), FieldKind::FiniteField { p, .. }) if *p == self.field.characteristic() => {
                Ok(target.from_i64(*x as i64))
            }
            _ => Err(mismatch()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $repr_fn:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.field == rhs.field, "field mismatch: {} vs {}", self.field, rhs.field);
                self.field.elem(self.field.$repr_fn(&self.repr, &rhs.repr))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, add_r);
binop!(Sub, sub, sub_r);
binop!(Mul, mul, mul_r);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.elem(self.field.neg_r(&self.repr))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

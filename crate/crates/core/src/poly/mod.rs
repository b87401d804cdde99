//! Sparse univariate polynomials over a [`Field`] and the structural tools
//! used by the classifier: gap form, `lcal`, scaling symmetries, Chebyshev
//! polynomials, Levi matching and compositional roots.

mod rational;
mod structure;

pub use rational::RationalFunction;
pub use structure::{
    chebyshev, compositional_root, conjugate, gap_shift, is_gap_form, lcal, levi_match, scaling_symmetry,
    CompositionalRoots,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError, Repr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial must be nonconstant")]
    ConstantInput,
    #[error("characteristic {characteristic} divides degree {degree}")]
    CharDividesDegree { degree: u64, characteristic: u64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("polynomial is not in gap form")]
    NotGapForm,
    #[error("degree {degree} is not {base}^{exponent}")]
    DegreeMismatch { degree: u64, base: u64, exponent: u32 },
}

/// A polynomial stored as its nonzero terms in increasing exponent order.
#[derive(Clone)]
pub struct Polynomial {
    field: Field,
    terms: Vec<(u64, Repr)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.field == other.field
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(u64, String)> = self.terms.iter().rev().map(|(e, c)| (*e, self.field.fmt_repr(c))).collect();
        f.write_str(&crate::field::render_terms("X", &terms))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

impl Polynomial {
    pub(crate) fn from_raw(field: Field, terms: Vec<(u64, Repr)>) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !field.is_zero_r(c)));
        Polynomial { field, terms }
    }

    pub(crate) fn raw_terms(&self) -> &[(u64, Repr)] {
        &self.terms
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial { field: field.clone(), terms: Vec::new() }
    }

    pub fn constant(c: &FieldElement) -> Polynomial {
        Polynomial::monomial(c, 0)
    }

    pub fn one(field: &Field) -> Polynomial {
        Polynomial::constant(&field.one())
    }

    /// The identity polynomial `X`.
    pub fn x(field: &Field) -> Polynomial {
        Polynomial::monomial(&field.one(), 1)
    }

    pub fn monomial(c: &FieldElement, k: u64) -> Polynomial {
        let field = c.field().clone();
        if c.is_zero() {
            return Polynomial::zero(&field);
        }
        Polynomial { field, terms: vec![(k, c.repr.clone())] }
    }

    /// From dense coefficients, lowest degree first.
    pub fn from_coeffs(field: &Field, coeffs: &[FieldElement]) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if c.field() != field {
                return Err(FieldError::FieldMismatch { left: field.to_string(), right: c.field().to_string() }.into());
            }
            if !c.is_zero() {
                terms.push((i as u64, c.repr.clone()));
            }
        }
        Ok(Polynomial { field: field.clone(), terms })
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Polynomial {
        let cs: Vec<FieldElement> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Polynomial::from_coeffs(field, &cs).unwrap()
    }

    /// From `(exponent, coefficient)` pairs in any order; repeated exponents add.
    pub fn from_terms(field: &Field, terms: &[(u64, FieldElement)]) -> Result<Polynomial, PolyError> {
        let mut map: BTreeMap<u64, Repr> = BTreeMap::new();
        for (e, c) in terms {
            if c.field() != field {
                return Err(FieldError::FieldMismatch { left: field.to_string(), right: c.field().to_string() }.into());
            }
            let slot = map.entry(*e).or_insert_with(|| field.zero_repr());
            *slot = field.add_r(slot, &c.repr);
        }
        Ok(Polynomial::from_map(field, map))
    }

    fn from_map(field: &Field, map: BTreeMap<u64, Repr>) -> Polynomial {
        let terms = map.into_iter().filter(|(_, c)| !field.is_zero_r(c)).collect();
        Polynomial { field: field.clone(), terms }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> u64 {
        self.degree().unwrap_or(0)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn is_constant(&self) -> bool {
        self.deg() == 0
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn lead(&self) -> FieldElement {
        match self.terms.last() {
            Some((_, c)) => self.field.elem(c.clone()),
            None => self.field.zero(),
        }
    }

    pub fn coeff(&self, k: u64) -> FieldElement {
        match self.terms.binary_search_by_key(&k, |(e, _)| *e) {
            Ok(i) => self.field.elem(self.terms[i].1.clone()),
            Err(_) => self.field.zero(),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, FieldElement)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, self.field.elem(c.clone())))
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: self.field.to_string(), right: other.field.to_string() }.into())
        }
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            match (a, b) {
                (Some((ea, ca)), Some((eb, cb))) if ea == eb => {
                    let c = if negate { f.sub_r(ca, cb) } else { f.add_r(ca, cb) };
                    if !f.is_zero_r(&c) {
                        out.push((*ea, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ea, ca)), Some((eb, _))) if ea < eb => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (Some((ea, ca)), None) => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (_, Some((eb, cb))) => {
                    out.push((*eb, if negate { f.neg_r(cb) } else { cb.clone() }));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Polynomial { field: f.clone(), terms: out }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(f);
        }
        if other.terms.len() == 1 {
            let (eb, cb) = &other.terms[0];
            return self.scale_shift(cb, *eb);
        }
        if self.terms.len() == 1 {
            let (ea, ca) = &self.terms[0];
            return other.scale_shift(ca, *ea);
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.deg() + other.deg();
        let span = (hi - lo + 1) as usize;
        let work = self.terms.len() * other.terms.len();
        if span <= 4 * work + 64 {
            let mut acc: Vec<Option<Repr>> = vec![None; span];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let p = f.mul_r(ca, cb);
                    let slot = &mut acc[(ea + eb - lo) as usize];
                    *slot = Some(match slot.take() {
                        Some(s) => f.add_r(&s, &p),
                        None => p,
                    });
                }
            }
            let terms = acc
                .into_iter()
                .enumerate()
                .filter_map(|(i, c)| c.filter(|c| !f.is_zero_r(c)).map(|c| (lo + i as u64, c)))
                .collect();
            Polynomial { field: f.clone(), terms }
        } else {
            let mut map: BTreeMap<u64, Repr> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let p = f.mul_r(ca, cb);
                    match map.get_mut(&(ea + eb)) {
                        Some(s) => *s = f.add_r(s, &p),
                        None => {
                            map.insert(ea + eb, p);
                        }
                    }
                }
            }
            Polynomial::from_map(f, map)
        }
    }

    fn scale_shift(&self, c: &Repr, shift: u64) -> Polynomial {
        let f = &self.field;
        let terms =
            self.terms.iter().map(|(e, x)| (e + shift, f.mul_r(x, c))).filter(|(_, x)| !f.is_zero_r(x)).collect();
        Polynomial { field: f.clone(), terms }
    }

    /// `c * self`.
    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        assert!(c.field() == &self.field, "field mismatch");
        self.scale_shift(&c.repr, 0)
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.field);
        if self.terms.len() == 1 {
            let (k, c) = &self.terms[0];
            return Polynomial::monomial(&self.field.elem(self.field.pow_r(c, e)), k * e);
        }
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `self(inner(X))`.
    pub fn compose(&self, inner: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(inner)?;
        Ok(self.compose_unchecked(inner))
    }

    fn compose_unchecked(&self, g: &Polynomial) -> Polynomial {
        let f = &self.field;
        if self.is_zero() {
            return self.clone();
        }
        if g.terms.len() <= 1 {
            let (k, c) = match g.terms.first() {
                Some((k, c)) => (*k, c.clone()),
                None => (0, f.zero_repr()),
            };
            if k == 0 {
                let v = self.eval_repr(&c);
                return Polynomial::constant(&f.elem(v));
            }
            let terms = self
                .terms
                .iter()
                .map(|(e, a)| (e * k, f.mul_r(a, &f.pow_r(&c, *e))))
                .filter(|(_, x)| !f.is_zero_r(x))
                .collect();
            return Polynomial { field: f.clone(), terms };
        }
        if self.terms.len() == 1 {
            let (e, a) = &self.terms[0];
            return g.pow(*e).scale_shift(a, 0);
        }
        // Horner over the sparse exponents, caching powers of g per gap.
        let mut powers: HashMap<u64, Polynomial> = HashMap::new();
        let mut power = |gap: u64| -> Polynomial { powers.entry(gap).or_insert_with(|| g.pow(gap)).clone() };
        let mut it = self.terms.iter().rev();
        let (mut cur_e, top) = it.next().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut acc = Polynomial { field: f.clone(), terms: vec![(0, top)] };
        for (e, c) in it {
            acc = acc.mul_unchecked(&power(cur_e - e));
            acc = acc.combine(&Polynomial { field: f.clone(), terms: vec![(0, c.clone())] }, false);
            cur_e = *e;
        }
        if cur_e > 0 {
            acc = acc.mul_unchecked(&power(cur_e));
        }
        acc
    }

    /// `self` composed with itself `n` times; `n = 0` gives `X`.
    pub fn iterate(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::x(&self.field);
        for _ in 0..n {
            acc = self.compose_unchecked(&acc);
        }
        acc
    }

    pub(crate) fn eval_repr(&self, x: &Repr) -> Repr {
        let f = &self.field;
        let mut acc = f.zero_repr();
        let mut cur_e = match self.terms.last() {
            Some((e, _)) => *e,
            None => return acc,
        };
        for (e, c) in self.terms.iter().rev() {
            acc = f.mul_r(&acc, &f.pow_r(x, cur_e - e));
            acc = f.add_r(&acc, c);
            cur_e = *e;
        }
        f.mul_r(&acc, &f.pow_r(x, cur_e))
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement, PolyError> {
        if x.field() != &self.field {
            return Err(FieldError::FieldMismatch { left: self.field.to_string(), right: x.field().to_string() }.into());
        }
        Ok(self.field.elem(self.eval_repr(&x.repr)))
    }

    pub fn derivative(&self) -> Polynomial {
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (e - 1, f.mul_r(c, &f.int_repr(&(*e).into()))))
            .filter(|(_, c)| !f.is_zero_r(c))
            .collect();
        Polynomial { field: f.clone(), terms }
    }

    /// Euclidean division; `divisor` must be nonzero with invertible leading coefficient.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(FieldError::DivisionByZero.into());
        }
        let f = &self.field;
        let db = divisor.deg();
        let lead_inv = f.inv_r(&divisor.terms.last().unwrap().1)?;
        let mut rem: BTreeMap<u64, Repr> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(u64, Repr)> = Vec::new();
        while let Some((&e, c)) = rem.iter().next_back() {
            if e < db {
                break;
            }
            let q = f.mul_r(c, &lead_inv);
            let shift = e - db;
            for (eb, cb) in &divisor.terms {
                let t = f.mul_r(&q, cb);
                let k = eb + shift;
                let v = match rem.get(&k) {
                    Some(x) => f.sub_r(x, &t),
                    None => f.neg_r(&t),
                };
                if f.is_zero_r(&v) {
                    rem.remove(&k);
                } else {
                    rem.insert(k, v);
                }
            }
            rem.remove(&e);
            quot.push((shift, q));
        }
        quot.reverse();
        Ok((Polynomial { field: f.clone(), terms: quot }, Polynomial::from_map(f, rem)))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = self.lead().inv()?;
        Ok(self.scale(&inv))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Coefficients mapped into `target` (see [`FieldElement::coerce_into`]).
    pub fn coerce_into(&self, target: &Field) -> Result<Polynomial, PolyError> {
        let terms: Vec<(u64, FieldElement)> =
            self.terms().map(|(e, c)| c.coerce_into(target).map(|c| (e, c))).collect::<Result<_, _>>()?;
        Polynomial::from_terms(target, &terms)
    }

    /// `self(X + c)`.
    pub fn translate(&self, c: &FieldElement) -> Polynomial {
        let shift = Polynomial::x(&self.field).combine(&Polynomial::constant(c), false);
        self.compose_unchecked(&shift)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::zero(&self.field).combine(self, true)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// The affine map `X -> u X + v` with `u != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub u: FieldElement,
    pub v: FieldElement,
}

impl LinearMap {
    pub fn new(u: FieldElement, v: FieldElement) -> Result<LinearMap, PolyError> {
        if u.field() != v.field() {
            return Err(FieldError::FieldMismatch { left: u.field().to_string(), right: v.field().to_string() }.into());
        }
        if u.is_zero() {
            return Err(PolyError::HypothesisViolation("linear map with zero slope".into()));
        }
        Ok(LinearMap { u, v })
    }

    pub fn identity(field: &Field) -> LinearMap {
        LinearMap { u: field.one(), v: field.zero() }
    }

    pub fn translation(v: FieldElement) -> LinearMap {
        LinearMap { u: v.field().one(), v }
    }

    pub fn field(&self) -> &Field {
        self.u.field()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(self.field(), &[(1, self.u.clone()), (0, self.v.clone())]).unwrap()
    }

    pub fn inverse(&self) -> LinearMap {
        let ui = self.u.inv().expect("slope is a unit");
        LinearMap { v: -(&self.v * &ui), u: ui }
    }

    pub fn coerce_into(&self, target: &Field) -> Result<LinearMap, PolyError> {
        Ok(LinearMap { u: self.u.coerce_into(target)?, v: self.v.coerce_into(target)? })
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_orientation() {
        let q = Field::rationals();
        let x2 = Polynomial::from_ints(&q, &[0, 0, 1]);
        let xp1 = Polynomial::from_ints(&q, &[1, 1]);
        assert_eq!(x2.compose(&xp1).unwrap().to_string(), "X^2 + 2*X + 1");
        assert_eq!(xp1.compose(&x2).unwrap().to_string(), "X^2 + 1");
    }

    #[test]
    fn sparse_products_and_powers() {
        let q = Field::rationals();
        let p = Polynomial::from_terms(&q, &[(100_000, q.one()), (0, q.one())]).unwrap();
        let sq = p.pow(2);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.coeff(100_000), q.from_i64(2));
        let x3 = Polynomial::monomial(&q.from_i64(3), 3);
        assert_eq!(x3.iterate(3).to_string(), "3^13*X^27".replace("3^13", &3i64.pow(13).to_string()));
    }

    #[test]
    fn rendering() {
        let q = Field::rationals();
        assert_eq!(Polynomial::from_ints(&q, &[0, -3, 0, 1]).to_string(), "X^3 - 3*X");
        assert_eq!(Polynomial::from_ints(&q, &[-2, 0, -1]).to_string(), "-X^2 - 2");
        assert_eq!(Polynomial::zero(&q).to_string(), "0");
        let c = Field::cyclotomic(5).unwrap();
        let z = c.generator().unwrap();
        assert_eq!(Polynomial::monomial(&z, 3).to_string(), "z*X^3");
        let zp1 = &z + &c.one();
        assert_eq!(Polynomial::monomial(&zp1, 2).to_string(), "(z + 1)*X^2");
    }

    #[test]
    fn division_and_gcd() {
        let q = Field::rationals();
        let a = Polynomial::from_ints(&q, &[-1, 0, 1]);
        let b = Polynomial::from_ints(&q, &[1, 1]);
        let (quot, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quot.to_string(), "X - 1");
        assert!(rem.is_zero());
        let c = Polynomial::from_ints(&q, &[2, 2]);
        assert_eq!(a.gcd(&c).unwrap().to_string(), "X + 1");
    }

    #[test]
    fn linear_map_inverse() {
        let q = Field::rationals();
        let l = LinearMap::new(q.from_i64(2), q.from_i64(3)).unwrap();
        let comp = l.to_polynomial().compose(&l.inverse().to_polynomial()).unwrap();
        assert_eq!(comp, Polynomial::x(&q));
    }
}

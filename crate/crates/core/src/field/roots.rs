//! Roots of unity and radicals.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{Pow, Signed};

use super::modular::{factorize, gcd, inv_mod};
use super::{Field, FieldElement, FieldError, FieldKind, Repr};

/// A request to adjoin a root `t` of `t^degree = value` to `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRequest {
    base: Field,
    degree: usize,
    value: FieldElement,
}

impl ExtensionRequest {
    pub fn new(base: Field, degree: usize, value: FieldElement) -> Result<Self, FieldError> {
        if degree < 2 {
            return Err(FieldError::InvalidField(format!("extension degree {degree} < 2")));
        }
        if value.field() != &base {
            return Err(FieldError::FieldMismatch { left: base.to_string(), right: value.field().to_string() });
        }
        if value.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(ExtensionRequest { base, degree, value })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self) -> &FieldElement {
        &self.value
    }

    /// The defining relation, e.g. `t^2 = 2`.
    pub fn relation(&self) -> String {
        let ext = Field::extend(self);
        format!("{}^{} = {}", ext.generator_name().unwrap(), self.degree, self.value)
    }

    pub fn extended_field(&self) -> Field {
        Field::extend(self)
    }
}

impl fmt::Display for ExtensionRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "adjoin {} over {}", self.relation(), self.base)
    }
}

/// Result of asking for a `d`-th root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NthRoot {
    Root(FieldElement),
    Request(ExtensionRequest),
}

impl NthRoot {
    pub fn root(self) -> Option<FieldElement> {
        match self {
            NthRoot::Root(x) => Some(x),
            NthRoot::Request(_) => None,
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// The least `n >= 1` with `a^n = 1`, or `None` when `a` is not torsion.
pub fn root_of_unity_order(a: &FieldElement) -> Result<Option<u64>, FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let field = a.field();
    match field.kind() {
        FieldKind::Rationals => {
            let q = a.as_rational().unwrap();
            Ok(if q == BigRational::from_integer(1.into()) {
                Some(1)
            } else if q == BigRational::from_integer((-1).into()) {
                Some(2)
            } else {
                None
            })
        }
        FieldKind::Cyclotomic { k } => {
            let n = lcm(2, *k);
            if !a.pow(n).is_one() {
                return Ok(None);
            }
            Ok(divisors(n).into_iter().find(|&d| a.pow(d).is_one()))
        }
        FieldKind::PrimeField { .. } | FieldKind::FiniteField { .. } => {
            let q1 = field.size().unwrap() as u64 - 1;
            let mut ord = q1;
            for (r, _) in factorize(q1) {
                while ord.is_multiple_of(r) && a.pow(ord / r).is_one() {
                    ord /= r;
                }
            }
            Ok(Some(ord))
        }
        FieldKind::Extension { .. } => {
            let limit = match field.absolute_degree() {
                Some(d) => 2 * d * d + 2,
                None => match field.size() {
                    Some(s) if s <= 1 << 24 => s as u64,
                    _ => return Err(FieldError::Unsupported("torsion order in a large finite ring".into())),
                },
            };
            let mut cur = a.clone();
            for n in 1..=limit {
                if cur.is_one() {
                    return Ok(Some(n));
                }
                cur = &cur * a;
            }
            Ok(None)
        }
    }
}

/// Exact rational `d`-th root, preferring the positive root.
fn rational_root(q: &BigRational, d: u64) -> Option<BigRational> {
    if q.is_negative() && d.is_multiple_of(2) {
        return None;
    }
    let dd = d as u32;
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(dd);
        if Pow::pow(&r, dd) == n.abs() {
            Some(r)
        } else {
            None
        }
    };
    let num = root_int(q.numer())?;
    let den = root_int(q.denom())?;
    let r = BigRational::new(num, den);
    Some(if q.is_negative() { -r } else { r })
}

/// A `d`-th root of `a` in its field, or the extension that would supply one.
///
/// Over `Q` the positive real root is preferred. Over `Q(zeta_k)` roots of the
/// form (root of unity) x (rational) are found. Over finite fields the root
/// is `g^y` for the least exponent `y`, where `g` is the first generator of
/// the unit group in enumeration order.
pub fn nth_root_or_request(a: &FieldElement, d: u64) -> Result<NthRoot, FieldError> {
    if d == 0 {
        return Err(FieldError::InvalidField("root degree must be positive".into()));
    }
    if d == 1 || a.is_zero() {
        return Ok(NthRoot::Root(a.clone()));
    }
    let field = a.field();
    let request = || -> Result<NthRoot, FieldError> {
        Ok(NthRoot::Request(ExtensionRequest::new(field.clone(), d as usize, a.clone())?))
    };
    match field.kind() {
        FieldKind::Rationals => match rational_root(&a.as_rational().unwrap(), d) {
            Some(r) => Ok(NthRoot::Root(field.from_rational(&r)?)),
            None => request(),
        },
        FieldKind::Cyclotomic { .. } => {
            let torsion = field.torsion_elements();
            let n = torsion.len() as u64;
            for (i, tau) in torsion.iter().enumerate() {
                let Some(qv) = a.try_div(tau)?.as_rational() else { continue };
                let Some(r) = rational_root(&qv, d) else { continue };
                let g0 = gcd(d, n);
                if !(i as u64).is_multiple_of(g0) {
                    continue;
                }
                let m = n / g0;
                let e = if m == 1 { 0 } else { (i as u64 / g0) * inv_mod((d / g0) % m, m).unwrap() % m };
                let rho = &torsion[e as usize];
                return Ok(NthRoot::Root(rho * &field.from_rational(&r)?));
            }
            request()
        }
        FieldKind::PrimeField { .. } | FieldKind::FiniteField { .. } => {
            let q1 = field.size().unwrap() as u64 - 1;
            if q1 > 1 << 44 {
                return Err(FieldError::Unsupported("roots in fields larger than 2^44".into()));
            }
            let g = unit_generator(field);
            let l = discrete_log(&g, a, q1);
            let g0 = gcd(d, q1);
            if !l.is_multiple_of(g0) {
                return request();
            }
            let m = q1 / g0;
            let y = if m == 1 {
                0
            } else {
                ((l / g0) as u128 * inv_mod((d / g0) % m, m).unwrap() as u128 % m as u128) as u64
            };
            Ok(NthRoot::Root(g.pow(y)))
        }
        FieldKind::Extension { base, degree, value } => {
            let comps = a.components().unwrap();
            let nonzero: Vec<usize> = (0..comps.len()).filter(|&i| !comps[i].is_zero()).collect();
            if nonzero.len() == 1 {
                let r = nonzero[0];
                let c = &comps[r];
                let t = field.generator().unwrap();
                let dg = *degree as u64;
                for j in 0..dg {
                    if (j * d) % dg != r as u64 {
                        continue;
                    }
                    let k = (j * d) / dg;
                    let Ok(target) = c.try_div(&value.pow(k)) else { continue };
                    if let NthRoot::Root(y) = nth_root_or_request(&target, d)? {
                        let x = &y.coerce_into(field)? * &t.pow(j);
                        debug_assert!(x.pow(d) == *a);
                        let _ = base;
                        return Ok(NthRoot::Root(x));
                    }
                }
            }
            request()
        }
    }
}

/// First element (in enumeration order) generating the unit group.
fn unit_generator(field: &Field) -> FieldElement {
    let q1 = field.size().unwrap() as u64 - 1;
    let primes: Vec<u64> = factorize(q1).into_iter().map(|(p, _)| p).collect();
    for idx in 1..=q1 {
        let x = field.element_at(idx);
        if primes.iter().all(|&r| !x.pow(q1 / r).is_one()) {
            return x;
        }
    }
    unreachable!("finite fields have cyclic unit groups")
}

/// Baby-step giant-step logarithm of `a` to base `g` in a group of order `n`.
fn discrete_log(g: &FieldElement, a: &FieldElement, n: u64) -> u64 {
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table: HashMap<Repr, u64> = HashMap::with_capacity(m as usize);
    let mut cur = g.field().one();
    for j in 0..m {
        table.entry(cur.repr.clone()).or_insert(j);
        cur = &cur * g;
    }
    let step = g.pow(m).inv().expect("generator is a unit");
    let mut gamma = a.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma.repr) {
            return (i * m + j) % n;
        }
        gamma = &gamma * &step;
    }
    unreachable!("element outside the unit group")
}

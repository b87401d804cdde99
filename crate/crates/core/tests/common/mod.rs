//! Random pair generators shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use semifree::field::{Field, FieldElement};
use semifree::poly::{chebyshev, conjugate, LinearMap, Polynomial};

pub fn small_rational<R: Rng>(rng: &mut R, range: i64) -> BigRational {
    let num = rng.gen_range(-range..=range);
    let den = rng.gen_range(1..=3);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A small element of `field`: a rational, plus a generator term for
/// cyclotomic fields.
pub fn small_element<R: Rng>(rng: &mut R, field: &Field, range: i64) -> FieldElement {
    let mut x = field.from_rational(&small_rational(rng, range)).unwrap();
    if let Some(z) = field.generator() {
        if rng.gen_bool(0.3) {
            x = &x + &(&z * &field.from_i64(rng.gen_range(-2..=2)));
        }
    }
    x
}

pub fn nonzero_element<R: Rng>(rng: &mut R, field: &Field, range: i64) -> FieldElement {
    loop {
        let x = small_element(rng, field, range);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_poly<R: Rng>(rng: &mut R, field: &Field, degree: u64) -> Polynomial {
    let mut coeffs: Vec<FieldElement> = (0..degree).map(|_| small_element(rng, field, 3)).collect();
    coeffs.push(nonzero_element(rng, field, 3));
    Polynomial::from_coeffs(field, &coeffs).unwrap()
}

pub fn random_linear<R: Rng>(rng: &mut R, field: &Field) -> LinearMap {
    LinearMap::new(nonzero_element(rng, field, 2), small_element(rng, field, 2)).unwrap()
}

/// `L o P o L^-1`.
pub fn conj_by(p: &Polynomial, l: &LinearMap) -> Polynomial {
    conjugate(p, &l.inverse()).unwrap()
}

pub fn random_torsion<R: Rng>(rng: &mut R, field: &Field) -> FieldElement {
    field.torsion_elements().choose(rng).unwrap().clone()
}

pub fn test_field<R: Rng>(rng: &mut R) -> Field {
    match rng.gen_range(0..5) {
        0 | 1 => Field::rationals(),
        _ => Field::cyclotomic(*[3u64, 4, 5, 6].choose(rng).unwrap()).unwrap(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Random,
    Monomial,
    NonTorsionMonomial,
    Chebyshev,
    CommonRoot,
}

/// A pair of degrees 2 to 4 from one of several families, conjugated by a
/// random affine map.
pub fn random_pair<R: Rng>(rng: &mut R, field: &Field, family: Family) -> (Polynomial, Polynomial) {
    let deg = |rng: &mut R| rng.gen_range(2..=4u64);
    let (f, g) = match family {
        Family::Random => {
            let (df, dg) = (deg(rng), deg(rng));
            (random_poly(rng, field, df), random_poly(rng, field, dg))
        }
        Family::Monomial => {
            (Polynomial::monomial(&field.one(), deg(rng)), Polynomial::monomial(&random_torsion(rng, field), deg(rng)))
        }
        Family::NonTorsionMonomial => (
            Polynomial::monomial(&field.one(), deg(rng)),
            Polynomial::monomial(&field.from_i64(rng.gen_range(2..=5)), deg(rng)),
        ),
        Family::Chebyshev => {
            let sign = |rng: &mut R| field.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
            (chebyshev(deg(rng), field).scale(&sign(rng)), chebyshev(deg(rng), field).scale(&sign(rng)))
        }
        Family::CommonRoot => {
            let c = nonzero_element(rng, field, 3);
            let a = Polynomial::from_terms(field, &[(2, field.one()), (0, c)]).unwrap();
            let i = rng.gen_range(1..=2u32);
            let j = rng.gen_range(1..=2u32);
            let gamma = random_torsion(rng, field);
            let zeta = random_torsion(rng, field);
            (a.iterate(i).scale(&gamma), a.iterate(j).scale(&zeta))
        }
    };
    let l = random_linear(rng, field);
    (conj_by(&f, &l), conj_by(&g, &l))
}

pub fn family_for(index: usize) -> Family {
    [
        Family::Random,
        Family::Monomial,
        Family::Chebyshev,
        Family::CommonRoot,
        Family::Random,
        Family::NonTorsionMonomial,
    ][index % 6]
}

use std::fmt;

use crate::field::{Field, FieldElement, FieldError};

use super::{PolyError, Polynomial};

/// A reduced quotient `num / den` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalFunction, PolyError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero.into());
        }
        let g = num.gcd(&den)?;
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        Self::normalized(num, den)
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Result<RationalFunction, PolyError> {
        let c = den.lead().inv()?;
        Ok(RationalFunction { num: num.scale(&c), den: den.scale(&c) })
    }

    pub fn from_polynomial(p: Polynomial) -> RationalFunction {
        let den = Polynomial::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// Degree as a self-map of the projective line.
    pub fn degree(&self) -> u64 {
        self.num.deg().max(self.den.deg())
    }

    /// `self(inner)`. Reduced inputs give a reduced output, so no gcd is
    /// taken: the result is the dehomogenised pair of composed forms.
    pub fn compose(&self, inner: &RationalFunction) -> Result<RationalFunction, PolyError> {
        let field = self.field();
        if inner.field() != field {
            return Err(FieldError::FieldMismatch { left: field.to_string(), right: inner.field().to_string() }.into());
        }
        let d = self.degree();
        let c_pows = powers(&inner.num, d);
        let d_pows = powers(&inner.den, d);
        let homog = |p: &Polynomial| -> Polynomial {
            let mut acc = Polynomial::zero(field);
            for (i, c) in p.terms() {
                let term = (&c_pows[i as usize] * &d_pows[(d - i) as usize]).scale(&c);
                acc = &acc + &term;
            }
            acc
        };
        Self::normalized(homog(&self.num), homog(&self.den))
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &FieldElement) -> Result<Option<FieldElement>, PolyError> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(x)?.try_div(&d)?))
    }

    pub fn coerce_into(&self, target: &Field) -> Result<RationalFunction, PolyError> {
        RationalFunction::new(self.num.coerce_into(target)?, self.den.coerce_into(target)?)
    }
}

fn powers(p: &Polynomial, n: u64) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Polynomial::one(p.field()));
    for i in 0..n as usize {
        out.push(&out[i] * p);
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Polynomial| {
            let s = p.to_string();
            if p.num_terms() > 1 || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_composes() {
        let q = Field::rationals();
        let num = Polynomial::from_ints(&q, &[-1, 0, 1]);
        let den = Polynomial::from_ints(&q, &[2, 2]);
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r.to_string(), "1/2*X - 1/2");
        let inv = RationalFunction::new(Polynomial::one(&q), Polynomial::x(&q)).unwrap();
        let x2 = RationalFunction::from_polynomial(Polynomial::from_ints(&q, &[0, 0, 1]));
        assert_eq!(inv.compose(&x2).unwrap().to_string(), "1/X^2");
        assert_eq!(inv.compose(&inv).unwrap(), RationalFunction::from_polynomial(Polynomial::x(&q)));
        let m = RationalFunction::new(Polynomial::x(&q), Polynomial::from_ints(&q, &[1, 1])).unwrap();
        let f = m.compose(&x2).unwrap();
        assert_eq!(f.to_string(), "X^2/(X^2 + 1)");
    }
}

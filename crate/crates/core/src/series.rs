//! Truncated power series `sum_{k>=1} c_k X^k + O(X^{N+1})` with precision
//! tracking, Böttcher coordinates and the `gap` statistic.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError, Repr};
use crate::poly::{PolyError, Polynomial, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("series must have zero constant term")]
    ConstantTerm,
    #[error("series is zero to its precision")]
    ZeroSeries,
    #[error("series must start in degree one")]
    NotDegreeOne,
    #[error("lowest degree {0} is below 2")]
    DegreeConditionViolated(u64),
    #[error("characteristic divides the lowest degree {0}")]
    CharDividesM(u64),
    #[error("root choice does not satisfy root^(m-1) = 1/alpha_m")]
    BadRootChoice,
    #[error("no solution: the equation in degree {degree} is inconsistent")]
    NoSolution { degree: u64 },
    #[error("point is not fixed")]
    NotFixed,
}

/// A power series with zero constant term known modulo `X^{precision+1}`.
/// When `exact` is set every coefficient beyond the precision is zero, so
/// the series is a polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Repr>,
    exact: bool,
}

/// Statistic `k_H`: distance from the lowest term to the next nonzero term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gap {
    Finite(u64),
    /// No further term. `precision_limited` when this is only known up to
    /// the precision of a truncated series.
    Infinite {
        precision_limited: bool,
    },
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(FieldElement),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

fn mul_trunc(f: &Field, a: &[Repr], b: &[Repr], n: usize) -> Vec<Repr> {
    let mut out = vec![f.zero_repr(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if f.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if f.is_zero_r(y) {
                continue;
            }
            let p = f.mul_r(x, y);
            out[i + j] = f.add_r(&out[i + j], &p);
        }
    }
    out
}

/// Power series quotient `a / b` to degree `n`; `b[0]` must be invertible.
fn div_trunc(f: &Field, a: &[Repr], b: &[Repr], n: usize) -> Result<Vec<Repr>, FieldError> {
    let inv0 = f.inv_r(&b[0])?;
    let mut q = vec![f.zero_repr(); n + 1];
    for k in 0..=n {
        let mut acc = a.get(k).cloned().unwrap_or_else(|| f.zero_repr());
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            if f.is_zero_r(&b[j]) || f.is_zero_r(&q[k - j]) {
                continue;
            }
            acc = f.sub_r(&acc, &f.mul_r(&b[j], &q[k - j]));
        }
        q[k] = f.mul_r(&acc, &inv0);
    }
    Ok(q)
}

fn dense(p: &Polynomial, n: usize) -> Vec<Repr> {
    let f = p.field();
    let mut v = vec![f.zero_repr(); n + 1];
    for (e, c) in p.raw_terms() {
        if (*e as usize) <= n {
            v[*e as usize] = c.clone();
        }
    }
    v
}

impl TruncatedSeries {
    /// From coefficients `c_0, ..., c_N`; `c_0` must vanish.
    pub fn new(field: &Field, coeffs: &[FieldElement], exact: bool) -> Result<TruncatedSeries, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::ConstantTerm);
        }
        let mut reprs = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.field() != field {
                return Err(FieldError::FieldMismatch { left: field.to_string(), right: c.field().to_string() }.into());
            }
            reprs.push(c.repr.clone());
        }
        if !field.is_zero_r(&reprs[0]) {
            return Err(SeriesError::ConstantTerm);
        }
        Ok(TruncatedSeries { field: field.clone(), coeffs: reprs, exact })
    }

    /// The polynomial `p` viewed as a series; exact when `deg p <= precision`.
    pub fn from_polynomial(p: &Polynomial, precision: usize) -> Result<TruncatedSeries, SeriesError> {
        if !p.coeff(0).is_zero() {
            return Err(SeriesError::ConstantTerm);
        }
        let exact = p.deg() as usize <= precision;
        Ok(TruncatedSeries { field: p.field().clone(), coeffs: dense(p, precision), exact })
    }

    /// Expansion at 0 of a rational function vanishing at 0.
    pub fn from_rational(r: &RationalFunction, precision: usize) -> Result<TruncatedSeries, SeriesError> {
        if let Some(p) = r.as_polynomial() {
            let p = p.scale(&r.denominator().lead().inv()?);
            return Self::from_polynomial(&p, precision);
        }
        let f = r.field();
        let den0 = r.denominator().coeff(0);
        if den0.is_zero() {
            return Err(SeriesError::NotFixed);
        }
        if !r.numerator().coeff(0).is_zero() {
            return Err(SeriesError::ConstantTerm);
        }
        let a = dense(r.numerator(), precision);
        let b = dense(r.denominator(), precision);
        let coeffs = div_trunc(f, &a, &b, precision)?;
        Ok(TruncatedSeries { field: f.clone(), coeffs, exact: false })
    }

    pub(crate) fn from_raw(field: &Field, coeffs: Vec<Repr>, exact: bool) -> TruncatedSeries {
        TruncatedSeries { field: field.clone(), coeffs, exact }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        match self.coeffs.get(k) {
            Some(c) => self.field.elem(c.clone()),
            None => self.field.zero(),
        }
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|c| self.field.elem(c.clone())).collect()
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.field.is_zero_r(c))
    }

    fn highest_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !self.field.is_zero_r(c))
    }

    /// Number of nonzero coefficients up to the precision.
    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !self.field.is_zero_r(c)).count()
    }

    /// The known coefficients as a polynomial.
    pub fn to_polynomial(&self) -> Polynomial {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero_r(c))
            .map(|(i, c)| (i as u64, c.clone()))
            .collect();
        Polynomial::from_raw(self.field.clone(), terms)
    }

    /// Lowers the precision to `n` (no-op when already lower).
    pub fn truncate(&self, n: usize) -> TruncatedSeries {
        if n >= self.precision() {
            return self.clone();
        }
        let exact = self.exact && self.highest_degree().is_none_or(|h| h <= n);
        TruncatedSeries { field: self.field.clone(), coeffs: self.coeffs[..=n].to_vec(), exact }
    }

    /// Coefficient-wise equality up to the smaller precision.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        let n = self.precision().min(other.precision());
        self.field == other.field && self.coeffs[..=n] == other.coeffs[..=n]
    }

    pub fn coerce_into(&self, target: &Field) -> Result<TruncatedSeries, SeriesError> {
        let cs: Vec<FieldElement> =
            self.coefficients().iter().map(|c| c.coerce_into(target)).collect::<Result<_, _>>()?;
        Self::new(target, &cs, self.exact)
    }

    fn check(&self, other: &TruncatedSeries) -> Result<(), SeriesError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: self.field.to_string(), right: other.field.to_string() }.into())
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_polynomial();
        if self.exact {
            return write!(f, "{p}");
        }
        let o = format!("O(X^{})", self.precision() + 1);
        if p.is_zero() {
            write!(f, "{o}")
        } else {
            write!(f, "{p} + {o}")
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

/// `F o G` to the largest precision the inputs determine.
pub fn s_compose(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    f.check(g)?;
    let field = &f.field;
    let (nf, ng) = (f.precision(), g.precision());
    let Some(r) = g.lowest_degree() else {
        if g.exact {
            return Ok(TruncatedSeries::from_raw(field, vec![field.zero_repr(); nf.max(ng) + 1], f.exact));
        }
        // G = O(X^{ng+1}): F o G = O(X^{m_F (ng+1)}).
        let m = f.lowest_degree().unwrap_or(nf + 1);
        let n = if f.exact && f.lowest_degree().is_none() { nf.max(ng) } else { m * (ng + 1) - 1 };
        return Ok(TruncatedSeries::from_raw(field, vec![field.zero_repr(); n + 1], false));
    };
    let mf = f.lowest_degree().unwrap_or(nf + 1);
    let b1 = (!f.exact).then(|| (nf + 1) * r - 1);
    let b2 = (!g.exact).then(|| ng + (mf - 1) * r);
    let n = match (b1, b2) {
        (None, None) => nf.max(ng),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => a.min(b),
    };
    let exact = f.exact && g.exact && {
        let df = f.highest_degree().unwrap_or(0);
        let dg = g.highest_degree().unwrap_or(0);
        df * dg <= n
    };
    let top = f.highest_degree().unwrap_or(0).min(n / r.max(1));
    let mut out = vec![field.zero_repr(); n + 1];
    if g.num_terms() == 1 {
        let c = &g.coeffs[r];
        let mut cp = field.one_repr();
        for i in 1..=top {
            cp = field.mul_r(&cp, c);
            if i * r <= n {
                out[i * r] = field.mul_r(&f.coeffs[i], &cp);
            }
        }
        return Ok(TruncatedSeries::from_raw(field, out, exact));
    }
    let gv: Vec<Repr> = (0..=n).map(|k| g.coeffs.get(k).cloned().unwrap_or_else(|| field.zero_repr())).collect();
    for i in (1..=top).rev() {
        out[0] = field.add_r(&out[0], &f.coeffs[i]);
        out = mul_trunc(field, &out, &gv, n);
    }
    Ok(TruncatedSeries::from_raw(field, out, exact))
}

/// Compositional inverse of a series `c_1 X + ...` with `c_1 != 0`.
pub fn s_invert(l: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let field = &l.field;
    let n = l.precision();
    if n == 0 || field.is_zero_r(&l.coeffs[1]) {
        return Err(SeriesError::NotDegreeOne);
    }
    if l.exact && l.num_terms() == 1 {
        let mut out = vec![field.zero_repr(); n + 1];
        out[1] = field.inv_r(&l.coeffs[1])?;
        return Ok(TruncatedSeries::from_raw(field, out, true));
    }
    // Solve sum_j m_j L^j = X using the powers of L.
    let mut powers: Vec<Vec<Repr>> = vec![Vec::new(), l.coeffs.clone()];
    for j in 2..=n {
        let next = mul_trunc(field, &powers[j - 1], &l.coeffs, n);
        powers.push(next);
    }
    let c1_inv = field.inv_r(&l.coeffs[1])?;
    let mut m = vec![field.zero_repr(); n + 1];
    let mut lead_inv = field.one_repr();
    for k in 1..=n {
        lead_inv = field.mul_r(&lead_inv, &c1_inv);
        let mut acc = if k == 1 { field.one_repr() } else { field.zero_repr() };
        for j in 1..k {
            if field.is_zero_r(&m[j]) {
                continue;
            }
            acc = field.sub_r(&acc, &field.mul_r(&m[j], &powers[j][k]));
        }
        m[k] = field.mul_r(&acc, &lead_inv);
    }
    Ok(TruncatedSeries::from_raw(field, m, false))
}

#[allow(clippy::needless_range_loop)]
fn boettcher_impl(f: &TruncatedSeries, root: &FieldElement, forced: bool) -> Result<TruncatedSeries, SeriesError> {
    let field = &f.field;
    if root.field() != field {
        return Err(FieldError::FieldMismatch { left: field.to_string(), right: root.field().to_string() }.into());
    }
    let m = f.lowest_degree().ok_or(SeriesError::ZeroSeries)?;
    if m < 2 {
        return Err(SeriesError::DegreeConditionViolated(m as u64));
    }
    let char_divides = field.char_divides(m as u64);
    if char_divides && !forced {
        return Err(SeriesError::CharDividesM(m as u64));
    }
    let alpha = f.coeff(m);
    if root.is_zero() || !(&root.pow(m as u64 - 1) * &alpha).is_one() {
        return Err(SeriesError::BadRootChoice);
    }
    let nf = f.precision();
    let n_out = if f.exact { nf } else { nf + 1 - m };
    let m_inv = if char_divides { None } else { Some(field.from_i64(m as i64).inv()?) };
    let top = (m..=nf).rev().find(|&i| !field.is_zero_r(&f.coeffs[i])).unwrap_or(m);
    let width = n_out + m + 1;
    let mut beta = vec![field.zero_repr(); n_out + 1];
    beta[1] = root.repr.clone();
    // p[i][k] = [X^k] L^i, filled one diagonal k - i = r at a time: that
    // diagonal is the first to involve beta_{r+1}, and only through the
    // term i beta_1^{i-1} beta_{r+1}.
    let mut p = vec![vec![field.zero_repr(); width]; top + 1];
    let mut b1_pow = vec![field.one_repr(); top + 1];
    for i in 1..=top {
        b1_pow[i] = field.mul_r(&b1_pow[i - 1], &beta[1]);
        if i < width {
            p[i][i] = b1_pow[i].clone();
        }
    }
    let mut rest = vec![field.zero_repr(); top + 1];
    for r in 1..n_out {
        // rest[i]: diagonal entry of L^i without its beta_{r+1} term.
        for i in 2..=top {
            let mut acc = field.mul_r(&beta[1], &rest[i - 1]);
            for j in 2..=r {
                let k = r + i - j;
                if !field.is_zero_r(&beta[j]) && k < width && !field.is_zero_r(&p[i - 1][k]) {
                    acc = field.add_r(&acc, &field.mul_r(&beta[j], &p[i - 1][k]));
                }
            }
            rest[i] = acc;
        }
        let deg = m + r;
        let mut lhs = field.mul_r(&f.coeffs[m], &rest[m]);
        for i in m + 1..=top.min(deg) {
            if !field.is_zero_r(&f.coeffs[i]) {
                lhs = field.add_r(&lhs, &field.mul_r(&f.coeffs[i], &p[i][deg]));
            }
        }
        let rhs = if deg % m == 0 { beta[deg / m].clone() } else { field.zero_repr() };
        let residual = field.sub_r(&rhs, &lhs);
        match &m_inv {
            Some(inv) => beta[r + 1] = field.mul_r(&residual, &inv.repr),
            None => {
                if !field.is_zero_r(&residual) {
                    return Err(SeriesError::NoSolution { degree: deg as u64 });
                }
            }
        }
        for i in 1..=top {
            if r + i < width {
                let lin = field.mul_r(&field.from_i64(i as i64).repr, &field.mul_r(&b1_pow[i - 1], &beta[r + 1]));
                p[i][r + i] = field.add_r(&rest[i], &lin);
            }
        }
    }
    Ok(TruncatedSeries::from_raw(field, beta, false))
}

/// The Böttcher coordinate `L = root X + ...` with `F o L = L o X^m`, where
/// `m` is the lowest degree of `F` and `root^(m-1) = 1/alpha_m`.
///
/// For a truncated `F` known to precision `N` the result has precision
/// `N - m + 1`; an exact `F` yields precision `N`.
pub fn boettcher(f: &TruncatedSeries, root: &FieldElement) -> Result<TruncatedSeries, SeriesError> {
    boettcher_impl(f, root, false)
}

/// Runs the Böttcher recursion even when the characteristic divides `m`,
/// choosing 0 for unconstrained coefficients and reporting the first
/// inconsistent degree as [`SeriesError::NoSolution`].
pub fn boettcher_forced(f: &TruncatedSeries, root: &FieldElement) -> Result<TruncatedSeries, SeriesError> {
    boettcher_impl(f, root, true)
}

pub fn gap_stat(h: &TruncatedSeries) -> Gap {
    let Some(r) = h.lowest_degree() else {
        return Gap::Infinite { precision_limited: !h.exact };
    };
    match (r + 1..=h.precision()).find(|&k| !h.field.is_zero_r(&h.coeffs[k])) {
        Some(k) => Gap::Finite((k - r) as u64),
        None => Gap::Infinite { precision_limited: !h.exact },
    }
}

/// `1 / F(1/X)` as a series at 0, for `F = A/B` with `deg A - deg B >= 2`.
pub fn reciprocal_conjugate(f: &RationalFunction, precision: usize) -> Result<TruncatedSeries, SeriesError> {
    let a = f.numerator();
    let b = f.denominator();
    let (da, db) = (a.deg(), b.deg());
    if da < db + 2 {
        return Err(SeriesError::DegreeConditionViolated(da.saturating_sub(db)));
    }
    reciprocal_series(f, precision)
}

fn reciprocal_series(f: &RationalFunction, precision: usize) -> Result<TruncatedSeries, SeriesError> {
    let field = f.field();
    let a = f.numerator();
    let b = f.denominator();
    let (da, db) = (a.deg() as usize, b.deg() as usize);
    let m = da - db;
    let rev = |p: &Polynomial, d: usize| -> Vec<Repr> {
        let mut v = vec![field.zero_repr(); d + 1];
        for (e, c) in p.raw_terms() {
            v[d - *e as usize] = c.clone();
        }
        v
    };
    let ra = rev(a, da);
    let rb = rev(b, db);
    let mut coeffs = vec![field.zero_repr(); precision + 1];
    if m <= precision {
        let q = div_trunc(field, &rb, &ra, precision - m)?;
        for (k, c) in q.into_iter().enumerate() {
            coeffs[k + m] = c;
        }
    }
    let exact = a.is_monomial() && da <= precision;
    Ok(TruncatedSeries::from_raw(field, coeffs, exact))
}

/// Moves a fixed point `beta` of `F` to 0: `F(X + beta) - beta`, or
/// `1/F(1/X)` when `beta` is infinity.
pub fn moebius_to_zero(f: &RationalFunction, beta: &Point, precision: usize) -> Result<TruncatedSeries, SeriesError> {
    match beta {
        Point::Infinity => {
            if f.numerator().deg() <= f.denominator().deg() {
                return Err(SeriesError::NotFixed);
            }
            reciprocal_series(f, precision)
        }
        Point::Finite(b) => {
            match f.eval(b)? {
                Some(v) if &v == b => {}
                _ => return Err(SeriesError::NotFixed),
            }
            let field = f.field();
            let shift = RationalFunction::from_polynomial(Polynomial::x(field).try_add(&Polynomial::constant(b))?);
            let moved = f.compose(&shift)?;
            let num = moved.numerator().try_sub(&moved.denominator().scale(b))?;
            let g = RationalFunction::new(num, moved.denominator().clone())?;
            TruncatedSeries::from_rational(&g, precision)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn series(coeffs: &[i64], exact: bool) -> TruncatedSeries {
        let f = q();
        let cs: Vec<FieldElement> = coeffs.iter().map(|&c| f.from_i64(c)).collect();
        TruncatedSeries::new(&f, &cs, exact).unwrap()
    }

    #[test]
    fn composition_examples() {
        let a = series(&[0, 1, 1, 0, 0], true);
        let b = series(&[0, 0, 1, 0, 0], true);
        assert_eq!(s_compose(&a, &b).unwrap().to_string(), "X^4 + X^2");
        assert_eq!(s_compose(&b, &a).unwrap().to_string(), "X^4 + 2*X^3 + X^2");
    }

    #[test]
    fn composition_precision() {
        let f = series(&[0, 0, 1, 1], false);
        let g = series(&[0, 1, 1, 0, 0, 0], false);
        let h = s_compose(&f, &g).unwrap();
        // min((3+1)*1 - 1, 5 + (2-1)*1) = 3
        assert_eq!(h.precision(), 3);
        let x2 = series(&[0, 0, 1], true);
        assert_eq!(s_compose(&f, &x2).unwrap().precision(), 7);
    }

    #[test]
    fn inversion() {
        let l = series(&[0, 1, 1, 0, 0, 0, 0], false);
        let m = s_invert(&l).unwrap();
        let id = s_compose(&l, &m).unwrap();
        assert_eq!(id.to_string(), "X + O(X^7)");
        assert_eq!(m.coeff(2), q().from_i64(-1));
        assert_eq!(m.coeff(3), q().from_i64(2));
        assert_eq!(m.coeff(4), q().from_i64(-5));
    }

    #[test]
    fn boettcher_of_monomial_is_scaling() {
        let f = series(&[0, 0, 4, 0, 0, 0], true);
        let root = q().from_rational(&num_rational::BigRational::new(1.into(), 4.into())).unwrap();
        let l = boettcher(&f, &root).unwrap();
        assert_eq!(l.to_polynomial(), Polynomial::monomial(&root, 1));
        assert_eq!(boettcher(&f, &q().one()), Err(SeriesError::BadRootChoice));
    }

    #[test]
    fn boettcher_conjugates() {
        let f = series(&[0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0], true);
        let l = boettcher(&f, &q().one()).unwrap();
        assert_eq!(l.precision(), 10);
        let lhs = s_compose(&f, &l).unwrap();
        let rhs = s_compose(&l, &series(&[0, 0, 1], true)).unwrap();
        assert!(lhs.agrees_with(&rhs));
        assert!(lhs.precision() >= 10);
    }

    #[test]
    fn char_p_obstruction() {
        let f2 = Field::prime_field(2).unwrap();
        let p = Polynomial::from_ints(&f2, &[0, 0, 1, 1]);
        let s = TruncatedSeries::from_polynomial(&p, 8).unwrap();
        assert_eq!(boettcher(&s, &f2.one()), Err(SeriesError::CharDividesM(2)));
        assert_eq!(boettcher_forced(&s, &f2.one()), Err(SeriesError::NoSolution { degree: 3 }));
    }

    #[test]
    fn gaps() {
        assert_eq!(gap_stat(&series(&[0, 0, 1, 0, 1], true)), Gap::Finite(2));
        assert_eq!(gap_stat(&series(&[0, 0, 1, 0, 0], true)), Gap::Infinite { precision_limited: false });
        assert_eq!(gap_stat(&series(&[0, 0, 1, 0, 0], false)), Gap::Infinite { precision_limited: true });
    }

    #[test]
    fn reciprocal_of_polynomial() {
        let f = RationalFunction::from_polynomial(Polynomial::from_ints(&q(), &[0, 0, 1, 1]));
        let u = reciprocal_conjugate(&f, 6).unwrap();
        // 1/(X^-3 + X^-2) = X^3/(1 + X)
        assert_eq!(u.to_string(), "-X^6 + X^5 - X^4 + X^3 + O(X^7)");
        let lin = RationalFunction::from_polynomial(Polynomial::from_ints(&q(), &[0, 1]));
        assert!(reciprocal_conjugate(&lin, 6).is_err());
    }

    #[test]
    fn moebius_moves_fixed_point() {
        let f = RationalFunction::from_polynomial(Polynomial::from_ints(&q(), &[0, 0, 1]));
        let s = moebius_to_zero(&f, &Point::Finite(q().one()), 4).unwrap();
        assert_eq!(s.to_string(), "X^2 + 2*X");
        assert_eq!(moebius_to_zero(&f, &Point::Finite(q().from_i64(2)), 4), Err(SeriesError::NotFixed));
    }
}

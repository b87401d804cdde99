use crate::field::{nth_root_or_request, ExtensionRequest, Field, FieldElement, FieldError, NthRoot};

use super::{LinearMap, PolyError, Polynomial};

fn nonconstant_degree(f: &Polynomial) -> Result<u64, PolyError> {
    match f.degree() {
        Some(m) if m >= 1 => Ok(m),
        _ => Err(PolyError::ConstantInput),
    }
}

fn require_char_coprime(field: &Field, m: u64) -> Result<(), PolyError> {
    if field.char_divides(m) {
        Err(PolyError::CharDividesDegree { degree: m, characteristic: field.characteristic() })
    } else {
        Ok(())
    }
}

/// Whether the coefficient of `X^(deg - 1)` vanishes.
pub fn is_gap_form(f: &Polynomial) -> bool {
    match f.degree() {
        Some(m) if m >= 1 => f.coeff(m - 1).is_zero(),
        _ => false,
    }
}

/// Returns `(c, F(X + c) - c)`, the translate of `F` in gap form, with
/// `c = -a_{m-1} / (m a_m)`.
pub fn gap_shift(f: &Polynomial) -> Result<(FieldElement, Polynomial), PolyError> {
    let m = nonconstant_degree(f)?;
    let field = f.field();
    require_char_coprime(field, m)?;
    let denom = &field.from_i64(m as i64) * &f.lead();
    let c = -f.coeff(m - 1).try_div(&denom)?;
    let shifted = f.translate(&c) - Polynomial::constant(&c);
    Ok((c, shifted))
}

/// Gcd of the pairwise exponent differences of the nonzero terms; 0 for
/// monomials.
pub fn lcal(f: &Polynomial) -> u64 {
    let mut exps = f.raw_terms().iter().map(|(e, _)| *e);
    let Some(first) = exps.next() else { return 0 };
    exps.fold(0, |g, e| num_integer::gcd(g, e - first))
}

/// The degree-`m` Chebyshev polynomial normalised so that
/// `T_m(X + 1/X) = X^m + X^-m`.
pub fn chebyshev(m: u64, field: &Field) -> Polynomial {
    let x = Polynomial::x(field);
    let mut prev = Polynomial::constant(&field.from_i64(2));
    if m == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..m {
        let next = &(&x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The `beta` with `beta F(X) = F(alpha X)`, if any.
pub fn scaling_symmetry(f: &Polynomial, alpha: &FieldElement) -> Result<Option<FieldElement>, PolyError> {
    let m = nonconstant_degree(f)?;
    if alpha.field() != f.field() {
        return Err(FieldError::FieldMismatch { left: f.field().to_string(), right: alpha.field().to_string() }.into());
    }
    if alpha.is_zero() {
        return Err(FieldError::ZeroInput.into());
    }
    if alpha.pow(lcal(f)).is_one() {
        Ok(Some(alpha.pow(m)))
    } else {
        Ok(None)
    }
}

/// Given `A o B = F o G` with `deg A = deg F`, the degree-one `L` with
/// `F = A o L^-1` and `G = L o B`.
pub fn levi_match(a: &Polynomial, b: &Polynomial, f: &Polynomial, g: &Polynomial) -> Result<LinearMap, PolyError> {
    let m = nonconstant_degree(a)?;
    nonconstant_degree(b)?;
    if f.degree() != Some(m) {
        return Err(PolyError::HypothesisViolation("deg A != deg F".into()));
    }
    require_char_coprime(a.field(), m)?;
    if a.compose(b)? != f.compose(g)? {
        return Err(PolyError::HypothesisViolation("A o B != F o G".into()));
    }
    let u = g.lead().try_div(&b.lead())?;
    let rest = g - &b.scale(&u);
    if !rest.is_constant() {
        return Err(PolyError::HypothesisViolation("G is not a linear image of B".into()));
    }
    let l = LinearMap::new(u, rest.coeff(0))?;
    if &f.compose(&l.to_polynomial())? != a {
        return Err(PolyError::HypothesisViolation("F o L != A".into()));
    }
    Ok(l)
}

/// `L^-1 o F o L`.
pub fn conjugate(f: &Polynomial, l: &LinearMap) -> Result<Polynomial, PolyError> {
    let lp = l.to_polynomial();
    let inv = l.inverse().to_polynomial();
    inv.compose(&f.compose(&lp)?)
}

/// Outcome of [`compositional_root`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompositionalRoots {
    /// All `(gamma, A)` with `A` of degree `h` in gap form, `gamma` a root of
    /// unity and `F = gamma A^{o s}`. May be empty.
    Found(Vec<(FieldElement, Polynomial)>),
    /// No root in the working field, but one could exist after adjoining this.
    NeedsExtension(ExtensionRequest),
}

/// Solves `F = gamma A^{o s}` for gap-form `A` of degree `h`.
///
/// The leading coefficient of `A` is a root of `a^N = lead(F)/gamma` with
/// `N = (h^s - 1)/(h - 1)`; the remaining coefficients are determined top
/// down because each one enters the matching coefficient of `F` affinely.
/// Only roots of unity lying in the working field are tried for `gamma`.
pub fn compositional_root(f: &Polynomial, h: u64, s: u32) -> Result<CompositionalRoots, PolyError> {
    let m = nonconstant_degree(f)?;
    let field = f.field();
    if h < 2 || s == 0 || h.checked_pow(s) != Some(m) {
        return Err(PolyError::DegreeMismatch { degree: m, base: h, exponent: s });
    }
    require_char_coprime(field, h)?;
    if !is_gap_form(f) {
        return Err(PolyError::NotGapForm);
    }
    let n = (m - 1) / (h - 1);
    let torsion = field.torsion_elements();
    let mut found = Vec::new();
    let mut pending = None;
    for gamma in &torsion {
        let c = f.lead().try_div(gamma)?;
        let a0 = match nth_root_or_request(&c, n)? {
            NthRoot::Root(a0) => a0,
            NthRoot::Request(r) => {
                pending.get_or_insert(r);
                continue;
            }
        };
        let mut leads: Vec<FieldElement> = Vec::new();
        for omega in &torsion {
            if omega.pow(n).is_one() {
                let a = &a0 * omega;
                if !leads.contains(&a) {
                    leads.push(a);
                }
            }
        }
        for a in leads {
            if let Some(root) = solve_root(f, gamma, &a, h, s)? {
                found.push((gamma.clone(), root));
            }
        }
    }
    match (found.is_empty(), pending) {
        (true, Some(r)) => Ok(CompositionalRoots::NeedsExtension(r)),
        _ => Ok(CompositionalRoots::Found(found)),
    }
}

fn solve_root(
    f: &Polynomial,
    gamma: &FieldElement,
    a: &FieldElement,
    h: u64,
    s: u32,
) -> Result<Option<Polynomial>, PolyError> {
    let field = f.field();
    let m = f.deg();
    let mut coeffs = vec![field.zero(); h as usize + 1];
    coeffs[h as usize] = a.clone();
    let build = |cs: &[FieldElement]| Polynomial::from_coeffs(field, cs);
    for k in 2..=h {
        let idx = (h - k) as usize;
        let e = m - k;
        coeffs[idx] = field.zero();
        let p0 = build(&coeffs)?.iterate(s).scale(gamma).coeff(e);
        coeffs[idx] = field.one();
        let p1 = build(&coeffs)?.iterate(s).scale(gamma).coeff(e);
        let slope = &p1 - &p0;
        if slope.is_zero() {
            return Ok(None);
        }
        coeffs[idx] = (&f.coeff(e) - &p0).try_div(&slope)?;
    }
    let root = build(&coeffs)?;
    if &root.iterate(s).scale(gamma) == f {
        Ok(Some(root))
    } else {
        Ok(None)
    }
}

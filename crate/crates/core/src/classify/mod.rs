//! Freeness verdicts for polynomial, power-series and rational-function
//! pairs.
//!
//! Polynomial pairs are decided exactly by a registry of [`CaseDetector`]s,
//! one per canonical family of non-free pairs; a pair matched by none is
//! free. Series pairs are moved to Böttcher coordinates for `F`, where the
//! shape of the conjugated `G` decides. Rational pairs are reduced to
//! series at a supplied common fixed point.

mod detectors;

pub use detectors::{
    detect_chebyshev_conjugacy, detect_common_root, detect_monomial_conjugacy, monomial_pair_test, CaseDetector,
    ChebyshevConjugacy, ChebyshevDetector, CommonRoot, CommonRootDetector, CommonRootOutcome, Detection,
    DetectorOutcome, DetectorRegistry, MonomialDetector, TorsionCertificate,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::modular::factorize;
use crate::field::{nth_root_or_request, root_of_unity_order, ExtensionRequest, Field, FieldError, FieldKind, NthRoot};
use crate::poly::{LinearMap, PolyError, Polynomial, RationalFunction};
use crate::semigroup::{
    commuting_power, commuting_relation, lemma33_params, lemma33_relation, verify_relation_series, verify_words,
    Relation, SemigroupError,
};
use crate::series::{
    boettcher, gap_stat, moebius_to_zero, s_compose, s_invert, Gap, Point, SeriesError, TruncatedSeries,
};

use detectors::same_field;

/// Largest precision `classify_rational` escalates to.
pub const MAX_RATIONAL_PRECISION: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("unknown detector `{0}`")]
    UnknownDetector(String),
    #[error("internal check failed: {0}")]
    WitnessFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Free,
    NotFree,
    NeedsExtension,
    InconclusiveAtPrecision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    Monomial,
    Chebyshev,
    CommonRoot,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub enum Normalizer {
    Linear(LinearMap),
    Series(TruncatedSeries),
}

/// A verdict with the evidence behind it.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub case: Option<Case>,
    pub canonical: Option<(Polynomial, Polynomial)>,
    pub normalizer: Option<Normalizer>,
    pub witness: Option<Relation>,
    /// An `r > 0` with `F^r o G` commuting with `F^r`.
    pub commuting_power: Option<u64>,
    pub extension: Option<ExtensionRequest>,
    pub precision: Option<usize>,
    pub common_root: Option<CommonRoot>,
    pub notes: Vec<String>,
    pub field: Field,
}

impl Classification {
    fn new(verdict: Verdict, field: &Field) -> Classification {
        Classification {
            verdict,
            case: None,
            canonical: None,
            normalizer: None,
            witness: None,
            commuting_power: None,
            extension: None,
            precision: None,
            common_root: None,
            notes: Vec::new(),
            field: field.clone(),
        }
    }

    fn from_detection(d: Detection, field: &Field) -> Classification {
        Classification {
            verdict: Verdict::NotFree,
            case: Some(d.case),
            canonical: Some(d.canonical),
            normalizer: Some(Normalizer::Linear(d.normalizer)),
            witness: Some(d.witness),
            commuting_power: d.commuting_power,
            extension: d.extension,
            precision: None,
            common_root: d.common_root,
            notes: d.notes,
            field: field.clone(),
        }
    }

    fn needs_extension(req: ExtensionRequest, field: &Field) -> Classification {
        let mut c = Classification::new(Verdict::NeedsExtension, field);
        c.notes.push(format!("rerun over {}", req.extended_field()));
        c.extension = Some(req);
        c
    }

    pub fn is_free(&self) -> bool {
        self.verdict == Verdict::Free
    }
}

struct AsStr<T>(T);

impl<T: fmt::Display> Serialize for AsStr<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

struct NormalizerJson<'a>(&'a Normalizer);

impl Serialize for NormalizerJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self.0 {
            Normalizer::Linear(l) => {
                m.serialize_entry("u", &l.u.to_string())?;
                m.serialize_entry("v", &l.v.to_string())?;
            }
            Normalizer::Series(l) => m.serialize_entry("series", &l.to_string())?,
        }
        m.end()
    }
}

struct ExtensionJson<'a>(&'a ExtensionRequest);

impl Serialize for ExtensionJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Extension", 3)?;
        st.serialize_field("base", &self.0.base().to_string())?;
        st.serialize_field("relation", &self.0.relation())?;
        st.serialize_field("field", &self.0.extended_field().to_string())?;
        st.end()
    }
}

struct RootJson<'a>(&'a CommonRoot);

impl Serialize for RootJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CommonRoot", 5)?;
        st.serialize_field("A", &self.0.a.to_string())?;
        st.serialize_field("gamma", &self.0.gamma.to_string())?;
        st.serialize_field("zeta", &self.0.zeta.to_string())?;
        st.serialize_field("i", &self.0.i)?;
        st.serialize_field("j", &self.0.j)?;
        st.end()
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("verdict", &AsStr(self.verdict))?;
        if let Some(c) = self.case {
            m.serialize_entry("case", &AsStr(c))?;
        }
        if let Some((f, g)) = &self.canonical {
            m.serialize_entry("canonical", &[f.to_string(), g.to_string()])?;
        }
        if let Some(n) = &self.normalizer {
            m.serialize_entry("normalizer", &NormalizerJson(n))?;
        }
        if let Some(w) = &self.witness {
            m.serialize_entry("witness", w)?;
        }
        if let Some(r) = self.commuting_power {
            m.serialize_entry("commuting_power", &r)?;
        }
        if let Some(e) = &self.extension {
            m.serialize_entry("extension", &ExtensionJson(e))?;
        }
        if let Some(p) = self.precision {
            m.serialize_entry("precision", &p)?;
        }
        if let Some(r) = &self.common_root {
            m.serialize_entry("common_root", &RootJson(r))?;
        }
        if !self.notes.is_empty() {
            m.serialize_entry("notes", &self.notes)?;
        }
        m.serialize_entry("field", &self.field.to_string())?;
        m.end()
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verdict: {}", self.verdict)?;
        if let Some(c) = self.case {
            write!(f, "\ncase: {c}")?;
        }
        if let Some((a, b)) = &self.canonical {
            write!(f, "\ncanonical pair: F = {a}, G = {b}")?;
        }
        match &self.normalizer {
            Some(Normalizer::Linear(l)) => write!(f, "\nnormalizer: L = {l}")?,
            Some(Normalizer::Series(l)) => write!(f, "\nnormalizer: L = {l}")?,
            None => {}
        }
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}{}", if w.verified { ", verified" } else { "" })?;
        }
        if let Some(r) = self.commuting_power {
            write!(f, "\ncommuting power: {r}")?;
        }
        if let Some(e) = &self.extension {
            write!(f, "\nextension: {e}")?;
        }
        if let Some(p) = self.precision {
            write!(f, "\nprecision: {p}")?;
        }
        for n in &self.notes {
            write!(f, "\nnote: {n}")?;
        }
        write!(f, "\nfield: {}", self.field)
    }
}

fn check_pair(f: &Polynomial, g: &Polynomial) -> Result<Field, ClassifyError> {
    let field = same_field(f, g)?;
    for p in [f, g] {
        let d = p.deg();
        if d < 2 {
            return Err(SemigroupError::DegreeTooSmall.into());
        }
        if field.char_divides(d) {
            return Err(PolyError::CharDividesDegree { degree: d, characteristic: field.characteristic() }.into());
        }
    }
    Ok(field)
}

/// Decides freeness of the semigroup generated by two polynomials of
/// degree at least 2 under composition.
pub fn classify_poly(f: &Polynomial, g: &Polynomial) -> Result<Classification, ClassifyError> {
    classify_poly_with(f, g, &DetectorRegistry::default())
}

/// As [`classify_poly`], trying the detectors of `registry` in order. The
/// verdict is only complete for the default registry.
pub fn classify_poly_with(
    f: &Polynomial,
    g: &Polynomial,
    registry: &DetectorRegistry,
) -> Result<Classification, ClassifyError> {
    let field = check_pair(f, g)?;
    let mut pending = None;
    for d in registry.detectors() {
        match d.detect(f, g)? {
            DetectorOutcome::Detected(det) => return Ok(Classification::from_detection(*det, &field)),
            DetectorOutcome::NeedsExtension(req) => {
                pending.get_or_insert(req);
            }
            DetectorOutcome::Absent => {}
        }
    }
    let mut c = match pending {
        Some(req) => Classification::needs_extension(req, &field),
        None => Classification::new(Verdict::Free, &field),
    };
    let ran = registry.names();
    let skipped: Vec<&str> = DetectorRegistry::default().names().into_iter().filter(|n| !ran.contains(n)).collect();
    if !skipped.is_empty() {
        c.notes.push(format!("detectors skipped: {}; the verdict only covers the cases tried", skipped.join(", ")));
    }
    Ok(c)
}

enum SeriesShape {
    Extension(ExtensionRequest),
    /// `B` is zero to the available precision.
    TooShort(usize),
    TwoTerms,
    NonTorsion,
    Torsion(u64),
}

struct SeriesAnalysis {
    l: Option<TruncatedSeries>,
    precision: usize,
    shape: SeriesShape,
    m: u64,
    n: u64,
}

fn series_degrees(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<(u64, u64), ClassifyError> {
    if f.field() != g.field() {
        return Err(FieldError::FieldMismatch { left: f.field().to_string(), right: g.field().to_string() }.into());
    }
    let mut out = [0u64; 2];
    for (k, s) in [f, g].into_iter().enumerate() {
        let d = s.lowest_degree().ok_or(SeriesError::ZeroSeries)? as u64;
        if d < 2 {
            return Err(SeriesError::DegreeConditionViolated(d).into());
        }
        if s.field().char_divides(d) {
            return Err(SeriesError::CharDividesM(d).into());
        }
        out[k] = d;
    }
    Ok((out[0], out[1]))
}

/// Conjugates `G` into the Böttcher coordinate of `F` and reads off the shape.
fn analyse_series(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<SeriesAnalysis, ClassifyError> {
    let (m, n) = series_degrees(f, g)?;
    let alpha = f.coeff(m as usize);
    let root = match nth_root_or_request(&alpha.inv()?, m - 1)? {
        NthRoot::Root(r) => r,
        NthRoot::Request(req) => {
            return Ok(SeriesAnalysis { l: None, precision: 0, shape: SeriesShape::Extension(req), m, n })
        }
    };
    let l = boettcher(f, &root)?;
    let linv = s_invert(&l)?;
    let b = s_compose(&linv, &s_compose(g, &l)?)?;
    let precision = b.precision();
    let shape = match b.lowest_degree() {
        None => SeriesShape::TooShort(precision),
        Some(low) => match gap_stat(&b) {
            Gap::Finite(_) => SeriesShape::TwoTerms,
            Gap::Infinite { .. } => match root_of_unity_order(&b.coeff(low))? {
                None => SeriesShape::NonTorsion,
                Some(ell) => SeriesShape::Torsion(ell),
            },
        },
    };
    Ok(SeriesAnalysis { l: Some(l), precision, shape, m, n })
}

fn series_verdict(a: &SeriesAnalysis, field: &Field) -> Option<Classification> {
    let mut c = match &a.shape {
        SeriesShape::Extension(req) => return Some(Classification::needs_extension(req.clone(), field)),
        SeriesShape::TooShort(p) => {
            let mut c = Classification::new(Verdict::InconclusiveAtPrecision, field);
            c.notes.push(format!("conjugated G vanishes to precision {p}"));
            c
        }
        SeriesShape::TwoTerms => {
            let mut c = Classification::new(Verdict::Free, field);
            c.notes.push("conjugated G has at least two terms".into());
            c
        }
        SeriesShape::NonTorsion => {
            let mut c = Classification::new(Verdict::Free, field);
            c.notes.push("conjugated G is a monomial whose coefficient has infinite order".into());
            c
        }
        SeriesShape::Torsion(_) => return None,
    };
    c.normalizer = a.l.clone().map(Normalizer::Series);
    c.precision = Some(a.precision);
    Some(c)
}

/// Decides freeness for two power series whose lowest terms have degree
/// at least 2. Exact (polynomial) inputs that land in the torsion case are
/// handed to [`classify_poly`]; truncated ones yield
/// `InconclusiveAtPrecision` with a witness checked to precision.
pub fn classify_series(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Classification, ClassifyError> {
    let field = f.field().clone();
    let a = analyse_series(f, g)?;
    let exact = f.is_exact() && g.is_exact();
    if let Some(c) = series_verdict(&a, &field) {
        let escalate = exact && matches!(a.shape, SeriesShape::Extension(_) | SeriesShape::TooShort(_));
        if !escalate {
            return Ok(c);
        }
    }
    if exact {
        match classify_poly(&f.to_polynomial(), &g.to_polynomial()) {
            Ok(mut c) => {
                c.notes.push("exact inputs: decided by the polynomial classifier".into());
                return Ok(c);
            }
            Err(ClassifyError::Poly(PolyError::CharDividesDegree { .. })) => {}
            Err(e) => return Err(e),
        }
    }
    let SeriesShape::Torsion(ell) = a.shape else {
        return Ok(series_verdict(&a, &field).expect("non-torsion shapes have verdicts"));
    };
    let (i, j) = lemma33_params(ell, a.m)?;
    let rel = lemma33_relation(ell, a.m, a.n, i, 1)?;
    let mut c = Classification::new(Verdict::InconclusiveAtPrecision, &field);
    c.normalizer = a.l.map(Normalizer::Series);
    match verify_relation_series(&rel, f, g)? {
        Some(p) => {
            c.notes.push(format!("witness holds modulo X^{}; inputs are truncated", p + 1));
            c.precision = Some(p);
            c.commuting_power = Some(commuting_power(i, j));
            c.witness = Some(rel);
        }
        None => {
            c.precision = Some(a.precision);
            c.notes.push("conjugated G is a torsion monomial to precision but the witness fails".into());
        }
    }
    Ok(c)
}

/// Decides freeness for rational functions sharing the fixed point `beta`
/// at which both have local degree at least 2. Starts at `precision` and
/// doubles it while the conjugated `G` looks like a torsion monomial but
/// the corresponding relation does not hold exactly.
pub fn classify_rational(
    f: &RationalFunction,
    g: &RationalFunction,
    beta: &Point,
    precision: usize,
) -> Result<Classification, ClassifyError> {
    let field = f.field().clone();
    if g.field() != &field {
        return Err(FieldError::FieldMismatch { left: field.to_string(), right: g.field().to_string() }.into());
    }
    if let (Point::Infinity, Some(fp), Some(gp)) = (beta, f.as_polynomial(), g.as_polynomial()) {
        let mut c = classify_poly(&fp, &gp)?;
        if c.verdict == Verdict::NotFree && c.commuting_power.is_none() {
            c.commuting_power = commuting_witness(f, g)?;
        }
        c.notes.push("polynomial pair at infinity: decided by the polynomial classifier".into());
        return Ok(c);
    }
    let mut n = precision.max(4);
    loop {
        let sf = moebius_to_zero(f, beta, n)?;
        let sg = moebius_to_zero(g, beta, n)?;
        let a = analyse_series(&sf, &sg)?;
        if let Some(c) = series_verdict(&a, &field) {
            if !matches!(a.shape, SeriesShape::TooShort(_)) || n >= MAX_RATIONAL_PRECISION {
                return Ok(c);
            }
        }
        if let SeriesShape::Torsion(ell) = a.shape {
            let (i, j) = lemma33_params(ell, a.m)?;
            let rel = lemma33_relation(ell, a.m, a.n, i, 1)?;
            if verify_words(&rel.lhs, &rel.rhs, f, g)? {
                let r = commuting_power(i, j);
                let comm = commuting_relation(r, a.m, a.n)?;
                if !verify_words(&comm.lhs, &comm.rhs, f, g)? {
                    return Err(ClassifyError::WitnessFailed(comm.to_string()));
                }
                let mut c = Classification::new(Verdict::NotFree, &field);
                let (gm, gn) = (f.degree(), g.degree());
                let degree = rel.lhs.degree(gm, gn).unwrap_or(0);
                c.witness = Some(Relation { verified: true, degree, ..rel });
                c.commuting_power = Some(r);
                c.normalizer = a.l.map(Normalizer::Series);
                c.precision = Some(a.precision);
                c.notes.push(format!(
                    "local degrees ({}, {}) at {beta}; order of the conjugated coefficient {ell}",
                    a.m, a.n
                ));
                return Ok(c);
            }
            if n >= MAX_RATIONAL_PRECISION {
                let mut c = Classification::new(Verdict::InconclusiveAtPrecision, &field);
                c.normalizer = a.l.map(Normalizer::Series);
                c.precision = Some(a.precision);
                c.notes.push("conjugated G is a torsion monomial to precision but the witness fails exactly".into());
                return Ok(c);
            }
        }
        n *= 2;
    }
}

/// Smallest small `r` with `F^r o G` commuting with `F^r`, checked exactly.
fn commuting_witness(f: &RationalFunction, g: &RationalFunction) -> Result<Option<u64>, ClassifyError> {
    let (m, n) = (f.degree(), g.degree());
    for r in 1..=4u64 {
        let rel = commuting_relation(r, m, n)?;
        if rel.degree > 1 << 14 {
            break;
        }
        if verify_words(&rel.lhs, &rel.rhs, f, g)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn divisors_of(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for d in &divs {
            let mut x = *d;
            for _ in 0..=e {
                next.push(x);
                x = x.saturating_mul(p);
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return None;
        }
    }
    Some(divs)
}

/// Common fixed points of `F` and `G` found without leaving the working
/// field: infinity, rational candidates from the rational root test over
/// `Q` and `Q(zeta_k)`, and every element of a small finite field. Roots
/// outside the working field are not reported.
pub fn common_fixed_points(f: &RationalFunction, g: &RationalFunction) -> Result<Vec<Point>, ClassifyError> {
    let field = f.field().clone();
    if g.field() != &field {
        return Err(FieldError::FieldMismatch { left: field.to_string(), right: g.field().to_string() }.into());
    }
    let mut out = Vec::new();
    if f.numerator().deg() > f.denominator().deg() && g.numerator().deg() > g.denominator().deg() {
        out.push(Point::Infinity);
    }
    let x = Polynomial::x(&field);
    let p = f.numerator().try_sub(&f.denominator().try_mul(&x)?)?;
    if p.is_zero() {
        return Ok(out);
    }
    let mut candidates = Vec::new();
    match field.kind() {
        FieldKind::Rationals | FieldKind::Cyclotomic { .. } => {
            let Some(coeffs) = p.terms().map(|(e, c)| c.as_rational().map(|q| (e, q))).collect::<Option<Vec<_>>>()
            else {
                return Ok(out);
            };
            if coeffs.first().is_some_and(|(e, _)| *e > 0) {
                candidates.push(field.zero());
            }
            let lcm = coeffs.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
            let ints: Vec<BigInt> = coeffs.iter().map(|(_, q)| (q * &lcm).to_integer()).collect();
            let (lo, hi) = (ints.first().unwrap(), ints.last().unwrap());
            if let (Some(ps), Some(qs)) = (divisors_of(lo), divisors_of(hi)) {
                for &a in &ps {
                    for &b in &qs {
                        if num_integer::gcd(a, b) != 1 {
                            continue;
                        }
                        for sign in [1i64, -1] {
                            let q = num_rational::BigRational::new(BigInt::from(a) * sign, BigInt::from(b));
                            candidates.push(field.from_rational(&q)?);
                        }
                    }
                }
            }
        }
        _ => {
            if let Some(size) = field.size().filter(|&s| s <= 1 << 16) {
                candidates.extend((0..size as u64).map(|i| field.element_at(i)));
            }
        }
    }
    for c in candidates {
        let fixed = |r: &RationalFunction| -> Result<bool, ClassifyError> { Ok(r.eval(&c)?.as_ref() == Some(&c)) };
        if fixed(f)? && fixed(g)? && !out.contains(&Point::Finite(c.clone())) {
            out.push(Point::Finite(c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;
    use crate::semigroup::search_relations;

    #[test]
    fn golden_verdicts() {
        let c5 = Field::cyclotomic(5).unwrap();
        let f = Polynomial::monomial(&c5.one(), 2);
        let g = Polynomial::monomial(&c5.generator().unwrap(), 3);
        let c = classify_poly(&f, &g).unwrap();
        assert_eq!((c.verdict, c.case), (Verdict::NotFree, Some(Case::Monomial)));
        let w = c.witness.as_ref().unwrap();
        assert_eq!((w.lhs.to_string(), w.rhs.to_string(), w.verified), ("FFFFG".into(), "GFFFF".into(), true));
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"verdict":"NotFree","case":"Monomial","canonical":["X^2","z*X^3"],"normalizer":{"u":"1","v":"0"},"witness":{"lhs":"FFFFG""#), "{json}");

        let q = Field::rationals();
        let c = classify_poly(&chebyshev(2, &q), &-chebyshev(3, &q)).unwrap();
        assert_eq!((c.verdict, c.case), (Verdict::NotFree, Some(Case::Chebyshev)));
        let w = c.witness.unwrap();
        assert_eq!((w.lhs.to_string(), w.rhs.to_string()), ("FFG".into(), "FGF".into()));

        let h = Polynomial::from_ints(&q, &[0, 1, 0, 1]);
        let c = classify_poly(&-&h, &h.compose(&h).unwrap()).unwrap();
        assert_eq!((c.verdict, c.case), (Verdict::NotFree, Some(Case::CommonRoot)));
        assert!(c.witness.unwrap().verified);

        let f = Polynomial::monomial(&q.from_i64(2), 2);
        let g = Polynomial::monomial(&q.from_i64(3), 3);
        assert_eq!(classify_poly(&f, &g).unwrap().verdict, Verdict::Free);
        assert!(search_relations(&f, &g, 10_000).unwrap().is_empty());
    }

    #[test]
    fn monomial_normalizer_in_extension() {
        // 2X^3 is conjugate to X^3 only over Q(sqrt 2).
        let q = Field::rationals();
        let f = Polynomial::monomial(&q.from_i64(2), 3);
        let g = Polynomial::monomial(&q.from_i64(-2), 3);
        let c = classify_poly(&f, &g).unwrap();
        assert_eq!(c.verdict, Verdict::NotFree);
        assert!(c.extension.is_some());
        assert!(c.witness.unwrap().verified);
    }

    #[test]
    fn series_examples() {
        let q = Field::rationals();
        let s = |coeffs: &[i64], exact: bool| {
            let cs: Vec<_> = coeffs.iter().map(|&c| q.from_i64(c)).collect();
            TruncatedSeries::new(&q, &cs, exact).unwrap()
        };
        let f = s(&[0, 0, 1, 0, 0, 0, 0, 0, 0], true);
        let g = s(&[0, 0, 0, 1, 1, 0, 0, 0, 0], true);
        assert_eq!(classify_series(&f, &g).unwrap().verdict, Verdict::Free);

        let c5 = Field::cyclotomic(5).unwrap();
        let f = TruncatedSeries::from_polynomial(&Polynomial::monomial(&c5.one(), 2), 16).unwrap();
        let g = TruncatedSeries::from_polynomial(&Polynomial::monomial(&c5.generator().unwrap(), 3), 16).unwrap();
        let c = classify_series(&f, &g).unwrap();
        assert_eq!(c.verdict, Verdict::NotFree);
        assert!(c.witness.unwrap().verified);

        let f = s(&[0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0], false);
        let l = boettcher(&f, &q.one()).unwrap();
        let x3 = TruncatedSeries::from_polynomial(&Polynomial::monomial(&q.one(), 3), l.precision()).unwrap();
        let g = s_compose(&l, &s_compose(&x3, &s_invert(&l).unwrap()).unwrap()).unwrap();
        let c = classify_series(&f, &g).unwrap();
        assert_eq!(c.verdict, Verdict::InconclusiveAtPrecision);
        assert!(c.witness.is_some());
    }

    #[test]
    fn rational_examples() {
        let q = Field::rationals();
        let f = RationalFunction::new(Polynomial::monomial(&q.one(), 3), Polynomial::from_ints(&q, &[1, 1])).unwrap();
        let g = RationalFunction::from_polynomial(Polynomial::monomial(&q.from_i64(2), 2));
        assert_eq!(classify_rational(&f, &g, &Point::Infinity, 32).unwrap().verdict, Verdict::Free);
        assert_eq!(classify_rational(&f, &g, &Point::Finite(q.zero()), 32).unwrap().verdict, Verdict::Free);

        let x2 = RationalFunction::from_polynomial(Polynomial::monomial(&q.one(), 2));
        let c = classify_rational(&x2, &x2, &Point::Infinity, 32).unwrap();
        assert_eq!(c.verdict, Verdict::NotFree);
        let w = c.witness.unwrap();
        assert_eq!((w.lhs.to_string(), w.rhs.to_string()), ("FG".into(), "GF".into()));

        // 1/X^2 o ... : X^2/(1 + X^3) and its square have 0 as a fixed point of local degree 2.
        let r =
            RationalFunction::new(Polynomial::monomial(&q.one(), 2), Polynomial::from_ints(&q, &[1, 0, 0, 1])).unwrap();
        let r2 = r.compose(&r).unwrap();
        let c = classify_rational(&r, &r2, &Point::Finite(q.zero()), 16).unwrap();
        assert_eq!(c.verdict, Verdict::NotFree);
        assert!(c.commuting_power.is_some());
    }

    #[test]
    fn fixed_point_helper() {
        let q = Field::rationals();
        let f = RationalFunction::from_polynomial(Polynomial::from_ints(&q, &[0, 0, 1]));
        let g = RationalFunction::new(Polynomial::from_ints(&q, &[0, 0, 0, 1]), Polynomial::from_ints(&q, &[1, 0, 0]))
            .unwrap();
        let pts = common_fixed_points(&f, &g).unwrap();
        assert!(pts.contains(&Point::Infinity));
        assert!(pts.contains(&Point::Finite(q.zero())));
        assert!(pts.contains(&Point::Finite(q.one())));
    }
}

use std::sync::Arc;

use crate::field::{nth_root_or_request, root_of_unity_order, ExtensionRequest, Field, FieldElement, NthRoot};
use crate::poly::{
    chebyshev, compositional_root, conjugate, gap_shift, is_gap_form, lcal, CompositionalRoots, LinearMap, PolyError,
    Polynomial,
};
use crate::semigroup::{
    case3_relation, commuting_power, commuting_relation, lemma33_params, lemma33_relation, verify_relation, Letter,
    Relation, Word,
};

use super::{Case, ClassifyError};

/// Witnesses of at most this degree are also checked on the input pair,
/// not only on the canonical pair. Beyond it, coefficient growth under a
/// nontrivial normaliser makes the second check far costlier than the
/// first, and the exact conjugacy check already transfers the relation.
const ORIGINAL_CHECK_DEGREE: u64 = 128;

/// How many successive root adjunctions the common-root search attempts.
const MAX_ADJUNCTIONS: usize = 3;

/// A positive case detection with its evidence.
#[derive(Clone, Debug)]
pub struct Detection {
    pub case: Case,
    /// The pair after normalisation, over the field of the normaliser.
    pub canonical: (Polynomial, Polynomial),
    pub normalizer: LinearMap,
    pub witness: Relation,
    pub commuting_power: Option<u64>,
    /// Set when the normaliser needed a root outside the working field.
    pub extension: Option<ExtensionRequest>,
    pub common_root: Option<CommonRoot>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum DetectorOutcome {
    Detected(Box<Detection>),
    Absent,
    NeedsExtension(ExtensionRequest),
}

/// One canonical family of non-free pairs.
pub trait CaseDetector: Send + Sync {
    fn name(&self) -> &'static str;
    fn case(&self) -> Case;
    fn detect(&self, f: &Polynomial, g: &Polynomial) -> Result<DetectorOutcome, ClassifyError>;
}

/// Detectors in the order they are tried.
#[derive(Clone)]
pub struct DetectorRegistry {
    detectors: Vec<Arc<dyn CaseDetector>>,
}

impl DetectorRegistry {
    pub fn empty() -> Self {
        DetectorRegistry { detectors: Vec::new() }
    }

    pub fn register(&mut self, d: Arc<dyn CaseDetector>) {
        self.detectors.retain(|x| x.name() != d.name());
        self.detectors.push(d);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn CaseDetector>> {
        self.detectors.iter().find(|d| d.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.detectors.iter().map(|d| d.name()).collect()
    }

    pub fn detectors(&self) -> &[Arc<dyn CaseDetector>] {
        &self.detectors
    }

    /// A registry holding only the named detectors, in the given order.
    pub fn subset(&self, names: &[&str]) -> Result<DetectorRegistry, ClassifyError> {
        let mut out = DetectorRegistry::empty();
        for name in names {
            out.register(self.get(name).ok_or_else(|| ClassifyError::UnknownDetector(name.to_string()))?);
        }
        Ok(out)
    }
}

impl Default for DetectorRegistry {
    fn default() -> Self {
        let mut r = DetectorRegistry::empty();
        r.register(Arc::new(MonomialDetector));
        r.register(Arc::new(ChebyshevDetector));
        r.register(Arc::new(CommonRootDetector));
        r
    }
}

fn check_degree(f: &Polynomial) -> Result<u64, PolyError> {
    let m = f.deg();
    if m < 2 {
        return Err(PolyError::HypothesisViolation(format!("degree {m} is below 2")));
    }
    if f.field().char_divides(m) {
        return Err(PolyError::CharDividesDegree { degree: m, characteristic: f.field().characteristic() });
    }
    Ok(m)
}

/// A `d`-th root of `x`, adjoining one when the field has none.
fn root_somewhere(x: &FieldElement, d: u64) -> Result<(FieldElement, Option<ExtensionRequest>), ClassifyError> {
    match nth_root_or_request(x, d)? {
        NthRoot::Root(r) => Ok((r, None)),
        NthRoot::Request(req) => {
            let ext = req.extended_field();
            let t = ext.generator().expect("extensions have a generator");
            Ok((t, Some(req)))
        }
    }
}

fn verified(rel: Relation, f: &Polynomial, g: &Polynomial) -> Result<Relation, ClassifyError> {
    if !verify_relation(&rel, f, g)? {
        return Err(ClassifyError::WitnessFailed(rel.to_string()));
    }
    Ok(Relation { verified: true, ..rel })
}

/// `(v, a)` with `F = a (X - v)^m + v`, when `F` is linearly conjugate to `X^m`.
pub fn detect_monomial_conjugacy(f: &Polynomial) -> Result<Option<(FieldElement, FieldElement)>, PolyError> {
    let m = check_degree(f)?;
    let field = f.field();
    let a = f.lead();
    let v = -f.coeff(m - 1).try_div(&(&field.from_i64(m as i64) * &a))?;
    let shifted = Polynomial::from_terms(field, &[(1, field.one()), (0, -&v)])?;
    let expect = &shifted.pow(m).scale(&a) + &Polynomial::constant(&v);
    Ok((&expect == f).then_some((v, a)))
}

/// `t = lead(G)^(m-1) / a^(n-1)` and its multiplicative order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCertificate {
    pub t: FieldElement,
    pub order: u64,
}

/// For `F` conjugate to `X^m` by `X -> uX + v`: whether the same map
/// carries `G` to `alpha X^n` with `alpha` a root of unity.
pub fn monomial_pair_test(f: &Polynomial, g: &Polynomial) -> Result<Option<TorsionCertificate>, PolyError> {
    let Some((v, a)) = detect_monomial_conjugacy(f)? else { return Ok(None) };
    let (m, n) = (f.deg(), check_degree(g)?);
    let field = f.field();
    let b = g.lead();
    let shifted = Polynomial::from_terms(field, &[(1, field.one()), (0, -&v)])?;
    if g != &(&shifted.pow(n).scale(&b) + &Polynomial::constant(&v)) {
        return Ok(None);
    }
    let t = b.pow(m - 1).try_div(&a.pow(n - 1))?;
    Ok(root_of_unity_order(&t)?.map(|order| TorsionCertificate { t, order }))
}

pub struct MonomialDetector;

impl CaseDetector for MonomialDetector {
    fn name(&self) -> &'static str {
        "monomial"
    }

    fn case(&self) -> Case {
        Case::Monomial
    }

    fn detect(&self, f: &Polynomial, g: &Polynomial) -> Result<DetectorOutcome, ClassifyError> {
        let Some(cert) = monomial_pair_test(f, g)? else { return Ok(DetectorOutcome::Absent) };
        let (v, a) = detect_monomial_conjugacy(f)?.expect("certificate implies conjugacy");
        let (m, n) = (f.deg(), g.deg());
        let (u, extension) = root_somewhere(&a.inv()?, m - 1)?;
        let wf = u.field().clone();
        let l = LinearMap::new(u, v.coerce_into(&wf)?)?;
        let cf = conjugate(&f.coerce_into(&wf)?, &l)?;
        let cg = conjugate(&g.coerce_into(&wf)?, &l)?;
        if cf != Polynomial::monomial(&wf.one(), m) || !cg.is_monomial() {
            return Err(ClassifyError::WitnessFailed("monomial normal form".into()));
        }
        let alpha = cg.lead();
        let ell = root_of_unity_order(&alpha)?.unwrap_or((m - 1) * cert.order);
        let (i, j) = lemma33_params(ell, m)?;
        let mut witness = verified(lemma33_relation(ell, m, n, i, 1)?, &cf, &cg)?;
        if extension.is_none() && witness.degree <= ORIGINAL_CHECK_DEGREE {
            witness = verified(witness, f, g)?;
        }
        let r = commuting_power(i, j);
        verified(commuting_relation(r, m, n)?, &cf, &cg)?;
        let mut notes = vec![format!("alpha has order {ell}; (i, j) = ({i}, {j})")];
        if let Some(req) = &extension {
            notes.push(format!("normalizer needs {req}"));
        }
        Ok(DetectorOutcome::Detected(Box::new(Detection {
            case: Case::Monomial,
            canonical: (cf, cg),
            normalizer: l,
            witness,
            commuting_power: Some(r),
            extension,
            common_root: None,
            notes,
        })))
    }
}

/// `L = uX + v` and `eps = +-1` with `L^-1 o F o L = eps T_m`. `w = u^2`
/// lies in the working field; `u` may need the recorded adjunction.
#[derive(Clone, Debug)]
pub struct ChebyshevConjugacy {
    pub map: LinearMap,
    pub eps: FieldElement,
    pub w: FieldElement,
    pub extension: Option<ExtensionRequest>,
}

/// Whether `p(uX)/u = +-T_k` for `u^2 = w`, checked without `u`.
fn chebyshev_shape(p: &Polynomial, w: &FieldElement) -> bool {
    let k = p.deg();
    let c = p.lead();
    let t = chebyshev(k, p.field());
    if !(&c.pow(2) * &w.pow(k - 1)).is_one() {
        return false;
    }
    (0..=k).all(|e| {
        let expect =
            if (k - e).is_multiple_of(2) { &(&t.coeff(e) * &c) * &w.pow((k - e) / 2) } else { p.field().zero() };
        p.coeff(e) == expect
    })
}

pub fn detect_chebyshev_conjugacy(f: &Polynomial) -> Result<Option<ChebyshevConjugacy>, ClassifyError> {
    let m = check_degree(f)?;
    let field = f.field();
    let (v, f1) = gap_shift(f)?;
    let w = -f1.coeff(m - 2).try_div(&(&field.from_i64(m as i64) * &f1.lead()))?;
    if w.is_zero() || !chebyshev_shape(&f1, &w) {
        return Ok(None);
    }
    let (u, extension) = root_somewhere(&w, 2)?;
    let wf = u.field().clone();
    let eps = &f1.lead().coerce_into(&wf)? * &u.pow(m - 1);
    let map = LinearMap::new(u, v.coerce_into(&wf)?)?;
    if conjugate(&f.coerce_into(&wf)?, &map)? != chebyshev(m, &wf).scale(&eps) {
        return Err(ClassifyError::WitnessFailed("Chebyshev normal form".into()));
    }
    Ok(Some(ChebyshevConjugacy { map, eps, w, extension }))
}

pub struct ChebyshevDetector;

impl CaseDetector for ChebyshevDetector {
    fn name(&self) -> &'static str {
        "chebyshev"
    }

    fn case(&self) -> Case {
        Case::Chebyshev
    }

    fn detect(&self, f: &Polynomial, g: &Polynomial) -> Result<DetectorOutcome, ClassifyError> {
        let Some(conj) = detect_chebyshev_conjugacy(f)? else { return Ok(DetectorOutcome::Absent) };
        let (m, n) = (f.deg(), check_degree(g)?);
        let v = conj.map.v.clone();
        let v_base = gap_shift(f)?.0;
        let g1 = &g.translate(&v_base) - &Polynomial::constant(&v_base);
        if !chebyshev_shape(&g1, &conj.w) {
            return Ok(DetectorOutcome::Absent);
        }
        let wf = v.field().clone();
        let cf = conjugate(&f.coerce_into(&wf)?, &conj.map)?;
        let cg = conjugate(&g.coerce_into(&wf)?, &conj.map)?;
        if cg != chebyshev(n, &wf).scale(&cg.lead()) {
            return Err(ClassifyError::WitnessFailed("Chebyshev normal form".into()));
        }
        use Letter::{F, G};
        let (a, b) = if m % 2 == 0 {
            (vec![F, F, G], vec![F, G, F])
        } else if n % 2 == 0 {
            (vec![G, G, F], vec![G, F, G])
        } else {
            (vec![F, G], vec![G, F])
        };
        let (a, b) = (Word::new(a)?, Word::new(b)?);
        let degree = a.degree(m, n).expect("small degree");
        let witness = verified(Relation::new(a, b, degree), f, g)?;
        let mut notes = Vec::new();
        if let Some(req) = &conj.extension {
            notes.push(format!("normalizer needs {req}"));
        }
        Ok(DetectorOutcome::Detected(Box::new(Detection {
            case: Case::Chebyshev,
            canonical: (cf, cg),
            normalizer: conj.map,
            witness,
            commuting_power: None,
            extension: conj.extension,
            common_root: None,
            notes,
        })))
    }
}

/// `F = gamma A^{o i}`, `G = zeta A^{o j}` in the shared gap frame, with
/// `gamma^s = zeta^s = 1` for `s = lcal(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonRoot {
    pub a: Polynomial,
    pub gamma: FieldElement,
    pub zeta: FieldElement,
    pub i: u64,
    pub j: u64,
}

#[derive(Clone, Debug)]
pub enum CommonRootOutcome {
    Found {
        root: Box<CommonRoot>,
        /// The gap-forming translation shared by both inputs.
        shift: FieldElement,
        extension: Option<ExtensionRequest>,
    },
    Absent,
    NeedsExtension(ExtensionRequest),
}

fn exact_log(x: u64, h: u64) -> Option<u32> {
    let mut k = 0u32;
    let mut p = 1u64;
    while p < x {
        p = p.checked_mul(h)?;
        k += 1;
    }
    (p == x).then_some(k)
}

/// Roots the input with fewer iterates and checks the other against the
/// candidate directly, so that only the smaller root extraction can need
/// an extension.
fn matching_root(
    f1: &Polynomial,
    g1: &Polynomial,
    h: u64,
    p: u32,
    q: u32,
) -> Result<Result<Option<CommonRoot>, ExtensionRequest>, ClassifyError> {
    let swap = q < p;
    let (small, other, ps, po) = if swap { (g1, f1, q, p) } else { (f1, g1, p, q) };
    let roots = match compositional_root(small, h, ps)? {
        CompositionalRoots::Found(v) => v,
        CompositionalRoots::NeedsExtension(req) => return Ok(Err(req)),
    };
    // Prefer monic roots, so that signs show up in gamma and zeta.
    let ordered =
        roots.iter().filter(|(_, a)| a.lead().is_one()).chain(roots.iter().filter(|(_, a)| !a.lead().is_one()));
    for (c_small, a) in ordered {
        let s = lcal(a);
        if !c_small.pow(s).is_one() {
            continue;
        }
        let it = a.iterate(po);
        let c_other = other.lead().try_div(&it.lead())?;
        if !c_other.pow(s).is_one() || root_of_unity_order(&c_other)?.is_none() || *other != it.scale(&c_other) {
            continue;
        }
        let (gamma, zeta) = if swap { (c_other, c_small.clone()) } else { (c_small.clone(), c_other) };
        return Ok(Ok(Some(CommonRoot { a: a.clone(), gamma, zeta, i: p as u64, j: q as u64 })));
    }
    Ok(Ok(None))
}

/// Searches for a common compositional root, smallest degree first.
pub fn detect_common_root(f: &Polynomial, g: &Polynomial) -> Result<CommonRootOutcome, ClassifyError> {
    let (m, n) = (check_degree(f)?, check_degree(g)?);
    let (c, f1) = gap_shift(f)?;
    let g1 = &g.translate(&c) - &Polynomial::constant(&c);
    if !is_gap_form(&g1) {
        return Ok(CommonRootOutcome::Absent);
    }
    let mut pending = None;
    for h in 2..=m.min(n) {
        let (Some(p), Some(q)) = (exact_log(m, h), exact_log(n, h)) else { continue };
        // Necessary: F1^{o q} and G1^{o p} differ by a root-of-unity factor.
        let fq = f1.iterate(q);
        let gp = g1.iterate(p);
        let ratio = fq.lead().try_div(&gp.lead())?;
        if root_of_unity_order(&ratio)?.is_none() || fq != gp.scale(&ratio) {
            continue;
        }
        let (mut wf1, mut wg1) = (f1.clone(), g1.clone());
        let mut extension: Option<ExtensionRequest> = None;
        for _ in 0..=MAX_ADJUNCTIONS {
            match matching_root(&wf1, &wg1, h, p, q) {
                Ok(Ok(Some(root))) => {
                    let shift = c.coerce_into(wf1.field())?;
                    return Ok(CommonRootOutcome::Found { root: Box::new(root), shift, extension });
                }
                Ok(Ok(None)) => break,
                Ok(Err(req)) => {
                    let ext = req.extended_field();
                    wf1 = wf1.coerce_into(&ext)?;
                    wg1 = wg1.coerce_into(&ext)?;
                    if extension.is_none() {
                        extension = Some(req.clone());
                    }
                    pending = Some(req);
                }
                // Arithmetic in a ring that is not a field can fail.
                Err(_) if extension.is_some() => break,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(match pending {
        Some(req) => CommonRootOutcome::NeedsExtension(req),
        None => CommonRootOutcome::Absent,
    })
}

pub struct CommonRootDetector;

impl CaseDetector for CommonRootDetector {
    fn name(&self) -> &'static str {
        "common-root"
    }

    fn case(&self) -> Case {
        Case::CommonRoot
    }

    fn detect(&self, f: &Polynomial, g: &Polynomial) -> Result<DetectorOutcome, ClassifyError> {
        let (root, shift, extension) = match detect_common_root(f, g)? {
            CommonRootOutcome::Found { root, shift, extension } => (*root, shift, extension),
            CommonRootOutcome::Absent => return Ok(DetectorOutcome::Absent),
            CommonRootOutcome::NeedsExtension(req) => return Ok(DetectorOutcome::NeedsExtension(req)),
        };
        let s = lcal(&root.a);
        if s == 0 {
            // A monomial root makes both inputs conjugate to monomials.
            return match MonomialDetector.detect(f, g)? {
                DetectorOutcome::Detected(mut d) => {
                    d.case = Case::CommonRoot;
                    d.common_root = Some(root);
                    Ok(DetectorOutcome::Detected(d))
                }
                other => Ok(other),
            };
        }
        let r = root.a.low_degree().unwrap_or(0);
        let c3 = case3_relation(root.i, root.j, s, r)?;
        let (m, n) = (f.deg(), g.deg());
        let degree = c3.lhs.degree(m, n).ok_or_else(|| ClassifyError::WitnessFailed("degree overflow".into()))?;
        let wf = shift.field().clone();
        let normalizer = LinearMap::translation(shift);
        let cf = conjugate(&f.coerce_into(&wf)?, &normalizer)?;
        let cg = conjugate(&g.coerce_into(&wf)?, &normalizer)?;
        let mut witness = verified(Relation::new(c3.lhs, c3.rhs, degree), &cf, &cg)?;
        if extension.is_none() && degree <= ORIGINAL_CHECK_DEGREE {
            witness = verified(witness, f, g)?;
        }
        let mut notes = vec![format!(
            "A = {}, gamma = {}, zeta = {}, (i, j) = ({}, {}); the decomposition need not be unique, the root of least degree is reported",
            root.a, root.gamma, root.zeta, root.i, root.j
        )];
        if let Some(req) = &extension {
            notes.push(format!("root found after {req}"));
        }
        Ok(DetectorOutcome::Detected(Box::new(Detection {
            case: Case::CommonRoot,
            canonical: (cf, cg),
            normalizer,
            witness,
            commuting_power: None,
            extension,
            common_root: Some(root),
            notes,
        })))
    }
}

pub(crate) fn same_field(f: &Polynomial, g: &Polynomial) -> Result<Field, ClassifyError> {
    if f.field() != g.field() {
        f.try_add(g)?;
    }
    Ok(f.field().clone())
}

//! End-to-end acceptance criteria, one line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semifree::classify::{classify_poly, Case, Verdict};
use semifree::field::{Field, FieldElement};
use semifree::poly::{chebyshev, is_gap_form, lcal, levi_match, Polynomial};
use semifree::semigroup::{
    lemma33_params, lemma33_relation, search_relations, search_relations_with, verify_relation, KeyStrategyRegistry,
    Letter, Relation, SearchOptions, Word,
};
use semifree::series::{boettcher, boettcher_forced, gap_stat, s_compose, Gap, SeriesError, TruncatedSeries};
use semifree::text::parse_polynomial;

use common::{conj_by, family_for, random_linear, random_pair, random_poly, small_rational, test_field, Family};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Seeds are fixed; `ACCEPTANCE_SEED` offsets them for exploratory runs.
fn rng_for(criterion: u64) -> ChaCha8Rng {
    let offset = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0u64);
    ChaCha8Rng::seed_from_u64(criterion.wrapping_add(offset.wrapping_mul(1000)))
}

fn q() -> Field {
    Field::rationals()
}

fn poly(s: &str, field: &Field) -> Polynomial {
    parse_polynomial(s, field).unwrap()
}

const NINE: [(&str, &str, u64); 9] = [
    ("GFFG", "FGGF", 36),
    ("FGFG", "GGFF", 36),
    ("FGGGG", "GGGGF", 162),
    ("FFGGG", "GGFGF", 108),
    ("FFFGG", "GFGFF", 72),
    ("FFFFG", "GFFFF", 48),
    ("FGFFFG", "GFFFGF", 144),
    ("FGGGFG", "GFGGGF", 324),
    ("FFGGFG", "GGGFFF", 216),
];

fn ac1() -> Outcome {
    let field = Field::cyclotomic(5).unwrap();
    let f = poly("X^2", &field);
    let g = poly("z*X^3", &field);
    let mut expected = Vec::new();
    for (a, b, d) in NINE {
        let rel = Relation::parse(a, b, 2, 3).map_err(|e| e.to_string())?;
        ensure(rel.degree == d, || format!("{a} = {b} has degree {}, listed {d}", rel.degree))?;
        ensure(verify_relation(&rel, &f, &g).unwrap(), || format!("{a} = {b} fails"))?;
        expected.push(rel);
    }
    let found = search_relations(&f, &g, 100_000).map_err(|e| e.to_string())?;
    let pairs: Vec<(&Word, &Word)> = found.iter().map(|r| (&r.lhs, &r.rhs)).collect();
    for rel in &expected {
        ensure(pairs.contains(&(&rel.lhs, &rel.rhs)), || format!("search missed {} = {}", rel.lhs, rel.rhs))?;
    }
    ensure(found.iter().all(|r| r.verified), || "unverified relation in search output".into())?;
    Ok(format!("9/9 verified; search(1e5) found {} relations including all nine", found.len()))
}

/// `zeta^e X^d` as `(e mod ell, d)`.
fn monomial_word(w: &Word, ell: u64, m: u64, n: u64) -> (u64, u128) {
    let mut acc = (0u64, 1u128);
    for &l in w.letters().iter().rev() {
        let (e, d) = if l == Letter::F { (0, m as u128) } else { (1, n as u128) };
        // (zeta^e X^d) o (zeta^e' X^d') = zeta^(e + e' d) X^(d d')
        acc = ((e + acc.0 * (d % ell as u128) as u64) % ell, d * acc.1);
    }
    acc
}

fn ac2() -> Outcome {
    let mut checked = 0;
    for (m, n, ell) in [(2u64, 3u64, 5u64), (3, 2, 4), (2, 2, 3)] {
        let field = Field::cyclotomic(ell).unwrap();
        let f = Polynomial::monomial(&field.one(), m);
        let g = Polynomial::monomial(&field.generator().unwrap(), n);
        let (i, _j) = lemma33_params(ell, m).unwrap();
        for r in [i, i + 1] {
            for s in [1, 2] {
                let rel = lemma33_relation(ell, m, n, r, s).unwrap();
                let lib = verify_relation(&rel, &f, &g).unwrap();
                let oracle = monomial_word(&rel.lhs, ell, m, n) == monomial_word(&rel.rhs, ell, m, n);
                ensure(lib && oracle, || format!("({m},{n},{ell}) r={r} s={s}: {} = {}", rel.lhs, rel.rhs))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} relations exact (library and exponent oracle)"))
}

type Dense = Vec<BigRational>;

fn dense_mul(a: &Dense, b: &Dense, n: usize) -> Dense {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn dense_compose(f: &Dense, l: &Dense, n: usize) -> Dense {
    let mut out = vec![BigRational::zero(); n + 1];
    let mut pow = vec![BigRational::zero(); n + 1];
    pow[0] = BigRational::one();
    let top = f.iter().take(n + 1).rposition(|c| !c.is_zero()).unwrap_or(0);
    for c in &f[..=top] {
        for k in 0..=n {
            out[k] += c * &pow[k];
        }
        pow = dense_mul(&pow, l, n);
    }
    out
}

fn to_dense(s: &TruncatedSeries, n: usize) -> Dense {
    (0..=n).map(|k| s.coeff(k).as_rational().expect("rational coefficient")).collect()
}

fn scaled(l: &TruncatedSeries, gamma: &FieldElement) -> Vec<FieldElement> {
    l.coefficients().iter().enumerate().map(|(k, c)| c * &gamma.pow(k as u64)).collect()
}

fn ac3() -> Outcome {
    const N: usize = 32;
    let mut rng = rng_for(3);
    let q3 = Field::cyclotomic(3).unwrap();
    let mut pairs_checked = 0;
    for case in 0..50 {
        let m = 2 + (case % 3) as u64;
        let extra: usize = rng.gen_range(1..=5);
        let mut coeffs = vec![q().zero(); m as usize];
        coeffs.push(q().one());
        for _ in 0..extra {
            coeffs.push(q().from_rational(&small_rational(&mut rng, 4)).unwrap());
        }
        let f = Polynomial::from_coeffs(&q(), &coeffs).unwrap();
        let fs = TruncatedSeries::from_polynomial(&f, N).unwrap();
        let l = boettcher(&fs, &q().one()).map_err(|e| e.to_string())?;
        ensure(l.precision() == N, || format!("precision {} for exact input", l.precision()))?;
        let fd = to_dense(&fs, N);
        let ld = to_dense(&l, N);
        let mut xm = vec![BigRational::zero(); N + 1];
        xm[m as usize] = BigRational::one();
        ensure(dense_compose(&fd, &ld, N) == dense_compose(&ld, &xm, N), || format!("F o L != L o X^{m} for {f}"))?;

        match m {
            2 => {
                let bad = boettcher(&fs, &q().from_i64(-1));
                ensure(bad == Err(SeriesError::BadRootChoice), || format!("root -1 accepted for m = 2: {bad:?}"))?;
            }
            3 => {
                let l2 = boettcher(&fs, &q().from_i64(-1)).map_err(|e| e.to_string())?;
                ensure(l2.coefficients() == scaled(&l, &q().from_i64(-1)), || "m = 3: L(-X) mismatch".into())?;
                pairs_checked += 1;
            }
            _ => {
                let fz = fs.coerce_into(&q3).unwrap();
                let lz = l.coerce_into(&q3).unwrap();
                let z = q3.generator().unwrap();
                for gamma in [z.clone(), &z * &z] {
                    ensure(gamma.pow(3).is_one(), || "gamma^(m-1) != 1".into())?;
                    let l2 = boettcher(&fz, &gamma).map_err(|e| e.to_string())?;
                    ensure(l2.coefficients() == scaled(&lz, &gamma), || {
                        format!("m = 4: L(gamma X) mismatch, {gamma}")
                    })?;
                    pairs_checked += 1;
                }
            }
        }
    }
    Ok(format!("50 series verified to X^32 by dense oracle; {pairs_checked} root-choice pairs related by gamma X"))
}

fn ac4() -> Outcome {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let field = Field::prime_field(p).unwrap();
        let f = Polynomial::from_terms(&field, &[(p, field.one()), (p + 1, field.one())]).unwrap();
        let fs = TruncatedSeries::from_polynomial(&f, 16).unwrap();
        let plain = boettcher(&fs, &field.one());
        ensure(plain == Err(SeriesError::CharDividesM(p)), || format!("GF({p}): boettcher gave {plain:?}"))?;
        let forced = boettcher_forced(&fs, &field.one());
        let Err(SeriesError::NoSolution { degree }) = forced else {
            return Err(format!("GF({p}): forced recursion gave {forced:?}"));
        };
        out.push(format!("GF({p}) inconsistent at degree {degree}"));
    }
    Ok(out.join("; "))
}

/// `P(X + 1/X)` as exponent -> coefficient, computed from integer coefficients.
fn laurent_eval(p: &Polynomial) -> BTreeMap<i64, BigInt> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut pow: BTreeMap<i64, BigInt> = BTreeMap::from([(0, BigInt::one())]);
    for k in 0..=p.deg() {
        let c = p.coeff(k).as_rational().unwrap();
        assert!(c.is_integer());
        for (e, v) in &pow {
            *out.entry(*e).or_default() += c.to_integer() * v;
        }
        let mut next: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, v) in &pow {
            *next.entry(e + 1).or_default() += v;
            *next.entry(e - 1).or_default() += v;
        }
        pow = next;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn ac5() -> Outcome {
    let field = q();
    for i in 0..=12u64 {
        for j in 0..=12u64 {
            let lhs = chebyshev(i, &field).compose(&chebyshev(j, &field)).unwrap();
            ensure(lhs == chebyshev(i * j, &field), || format!("T_{i} o T_{j} != T_{}", i * j))?;
        }
    }
    for m in 1..=12u64 {
        let expected = BTreeMap::from([(m as i64, BigInt::one()), (-(m as i64), BigInt::one())]);
        ensure(laurent_eval(&chebyshev(m, &field)) == expected, || format!("T_{m}(X + 1/X) identity fails"))?;
    }
    for m in 2..=12u64 {
        let t = chebyshev(m, &field);
        ensure(is_gap_form(&t) && lcal(&t) == 2, || format!("T_{m}: gap form or lcal fails"))?;
    }
    Ok("169 compositions, 12 Laurent identities, gap form and lcal = 2 for m = 2..12".into())
}

fn ac6() -> Outcome {
    let q5 = Field::cyclotomic(5).unwrap();
    let c = classify_poly(&poly("X^2", &q5), &poly("z*X^3", &q5)).unwrap();
    ensure(c.verdict == Verdict::NotFree && c.case == Some(Case::Monomial), || format!("monomial: {c}"))?;
    ensure(c.witness.as_ref().is_some_and(|w| w.verified), || "monomial witness unverified".into())?;

    let (f, g) = (chebyshev(2, &q()), -chebyshev(3, &q()));
    let c = classify_poly(&f, &g).unwrap();
    ensure(c.verdict == Verdict::NotFree && c.case == Some(Case::Chebyshev), || format!("chebyshev: {c}"))?;
    let w = c.witness.ok_or("chebyshev: no witness")?;
    let sides = [w.lhs.to_string(), w.rhs.to_string()];
    ensure(sides == ["FFG", "FGF"], || format!("chebyshev witness {} = {}", sides[0], sides[1]))?;
    ensure(verify_relation(&w, &f, &g).unwrap(), || "chebyshev witness fails".into())?;

    let a = poly("X^3 + X", &q());
    let (f, g) = (-&a, a.iterate(2));
    let c = classify_poly(&f, &g).unwrap();
    ensure(c.verdict == Verdict::NotFree && c.case == Some(Case::CommonRoot), || format!("common root: {c}"))?;
    let w = c.witness.ok_or("common root: no witness")?;
    ensure(verify_relation(&w, &f, &g).unwrap(), || "common root witness fails".into())?;

    let (f, g) = (poly("2*X^2", &q()), poly("3*X^3", &q()));
    let c = classify_poly(&f, &g).unwrap();
    ensure(c.verdict == Verdict::Free, || format!("(2X^2, 3X^3): {c}"))?;
    let found = search_relations(&f, &g, 10_000).unwrap();
    ensure(found.is_empty(), || format!("(2X^2, 3X^3) has {} relations below 10^4", found.len()))?;
    Ok(format!("4 golden verdicts; common-root witness {} = {}", w.lhs, w.rhs))
}

fn random_gap_poly<R: Rng>(rng: &mut R, field: &Field, degree: u64, gap: bool) -> Polynomial {
    let mut p = random_poly(rng, field, degree);
    if gap && degree >= 1 {
        let top = p.coeff(degree - 1);
        p = &p - &Polynomial::monomial(&top, degree - 1);
    }
    p
}

/// `X^r C(X^s)` with a few random terms.
fn structured_poly<R: Rng>(rng: &mut R, field: &Field) -> Polynomial {
    let s = rng.gen_range(1..=3u64);
    let r = rng.gen_range(0..=2u64);
    let mut terms = vec![(r + s * rng.gen_range(1..=2u64), common::nonzero_element(rng, field, 3))];
    for _ in 0..rng.gen_range(0..=2) {
        terms.push((r + s * rng.gen_range(0..=1u64), common::nonzero_element(rng, field, 3)));
    }
    let p = Polynomial::from_terms(field, &terms).unwrap();
    if p.deg() >= 2 {
        p
    } else {
        structured_poly(rng, field)
    }
}

fn gap_value(g: Gap) -> u64 {
    match g {
        Gap::Finite(k) => k,
        Gap::Infinite { .. } => u64::MAX,
    }
}

fn exact_series(p: &Polynomial) -> TruncatedSeries {
    TruncatedSeries::from_polynomial(p, p.deg() as usize).unwrap()
}

fn ac7() -> Outcome {
    const CASES: usize = 120;
    let mut rng = rng_for(7);

    // gap form equivalence
    for _ in 0..CASES {
        let field = test_field(&mut rng);
        let mf = rng.gen_range(1..=4u64);
        let f_gap = mf == 1 || rng.gen_bool(0.5);
        let f = random_gap_poly(&mut rng, &field, mf, f_gap);
        let ng = if is_gap_form(&f) { rng.gen_range(1..=4u64) } else { rng.gen_range(2..=4u64) };
        let g_gap = rng.gen_bool(0.5);
        let g = random_gap_poly(&mut rng, &field, ng, g_gap);
        let fg = f.compose(&g).unwrap();
        ensure(is_gap_form(&fg) == is_gap_form(&g), || format!("gap form: F = {f}, G = {g}"))?;
    }

    // lcal is invariant under iteration
    for _ in 0..CASES {
        let field = test_field(&mut rng);
        let f = structured_poly(&mut rng, &field);
        let i = rng.gen_range(1..=3u32);
        ensure(lcal(&f.iterate(i)) == lcal(&f), || format!("lcal: F = {f}, i = {i}"))?;
    }
    let one_minus_x = poly("1 - X", &q());
    ensure(lcal(&one_minus_x) == 1 && lcal(&one_minus_x.iterate(2)) == 0, || "1 - X counterexample".into())?;
    for p in [2u64, 3] {
        let field = Field::prime_field(p).unwrap();
        let f = Polynomial::from_terms(&field, &[(p, field.one()), (1, field.one())]).unwrap();
        let it = f.iterate(p as u32);
        ensure(lcal(&f) == p - 1 && lcal(&it) == p.pow(p as u32) - 1, || format!("X^{p} + X over GF({p})"))?;
    }

    // Levi matching round trip
    for _ in 0..CASES {
        let field = test_field(&mut rng);
        let (da, db) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let a = random_poly(&mut rng, &field, da);
        let b = random_poly(&mut rng, &field, db);
        let l = random_linear(&mut rng, &field);
        let f = a.compose(&l.inverse().to_polynomial()).unwrap();
        let g = l.to_polynomial().compose(&b).unwrap();
        let got = levi_match(&a, &b, &f, &g).map_err(|e| e.to_string())?;
        ensure(got == l, || format!("levi: A = {a}, B = {b}"))?;
    }

    // gap statistic laws
    for _ in 0..CASES {
        let field = test_field(&mut rng);
        let r = rng.gen_range(2..=3u64);
        let dh = r + rng.gen_range(0..=3);
        let mut h = random_poly(&mut rng, &field, dh);
        for k in 0..r {
            h = &h - &Polynomial::monomial(&h.coeff(k), k);
        }
        let gp = {
            let dg = rng.gen_range(1..=3);
            let g = random_poly(&mut rng, &field, dg);
            &g - &Polynomial::constant(&g.coeff(0))
        };
        if gp.is_zero() {
            continue;
        }
        let m = rng.gen_range(2..=3u64);
        let xm = Polynomial::monomial(&field.one(), m);
        let gh = gap_value(gap_stat(&exact_series(&h)));
        let gg = gap_value(gap_stat(&exact_series(&gp)));
        let stat = |p: Polynomial| gap_value(gap_stat(&exact_series(&p)));
        ensure(stat(h.compose(&xm).unwrap()) == gh.saturating_mul(m), || format!("gap(H o X^m): H = {h}"))?;
        ensure(stat(xm.compose(&h).unwrap()) == gh, || format!("gap(X^m o H): H = {h}"))?;
        let bound = gh.min((h.low_degree().unwrap()).saturating_mul(gg));
        let lhs = stat(gp.compose(&h).unwrap());
        ensure(lhs >= bound, || format!("gap(G o H) below bound: G = {gp}, H = {h}"))?;
        if gh != h.low_degree().unwrap().saturating_mul(gg) {
            ensure(lhs == bound, || format!("gap(G o H) not equal: G = {gp}, H = {h}"))?;
        }
        // series composition agrees with exact composition to its precision
        let sc = s_compose(&exact_series(&gp), &exact_series(&h)).unwrap();
        ensure(sc.agrees_with(&exact_series(&gp.compose(&h).unwrap())), || "s_compose disagrees".into())?;
    }

    // conjugation invariance of the classifier
    let mut not_free = 0;
    for idx in 0..CASES {
        let field = test_field(&mut rng);
        let (f, g) = random_pair(&mut rng, &field, family_for(idx));
        let l = random_linear(&mut rng, &field);
        let a = classify_poly(&f, &g).map_err(|e| e.to_string())?;
        let b = classify_poly(&conj_by(&f, &l), &conj_by(&g, &l)).map_err(|e| e.to_string())?;
        ensure(a.verdict == b.verdict && a.case == b.case, || {
            format!("conjugation changed verdict over {field}: F = {f}, G = {g}")
        })?;
        not_free += usize::from(a.verdict == Verdict::NotFree);
    }
    Ok(format!("5 suites x {CASES} cases plus 3 counterexamples; {not_free} non-free pairs in the conjugation suite"))
}

fn ac8() -> Outcome {
    let mut rng = rng_for(8);
    let registry = KeyStrategyRegistry::default();
    let (mut free, mut not_free) = (0, 0);
    for idx in 0..100 {
        let field = test_field(&mut rng);
        let family = family_for(idx);
        let (f, g) = random_pair(&mut rng, &field, family);
        let c = classify_poly(&f, &g).map_err(|e| e.to_string())?;
        let mut opts = SearchOptions::new(10_000);
        match c.verdict {
            Verdict::NotFree => {
                opts.max_relations = Some(1);
                let rep = search_relations_with(&f, &g, &opts, &registry).map_err(|e| e.to_string())?;
                ensure(!rep.relations.is_empty(), || format!("{family:?} NotFree but no relation: F = {f}, G = {g}"))?;
                not_free += 1;
            }
            Verdict::Free => {
                let rep = search_relations_with(&f, &g, &opts, &registry).map_err(|e| e.to_string())?;
                ensure(rep.relations.is_empty(), || {
                    format!(
                        "Free but {} = {} over {field}: F = {f}, G = {g}",
                        rep.relations[0].lhs, rep.relations[0].rhs
                    )
                })?;
                free += 1;
            }
            other => return Err(format!("{other} for {family:?} pair over {field}: F = {f}, G = {g}")),
        }
        if family == Family::NonTorsionMonomial {
            ensure(c.verdict == Verdict::Free, || format!("non-torsion monomial pair not Free: {c}"))?;
        }
    }
    Ok(format!("100 pairs agree: {not_free} NotFree with relation found, {free} Free with none below 10^4"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1", "nine-relation golden set", ac1, Duration::from_secs(120)),
        ("AC2", "torsion monomial relation family", ac2, Duration::from_secs(60)),
        ("AC3", "Böttcher suite", ac3, Duration::from_secs(60)),
        ("AC4", "characteristic-p negative control", ac4, Duration::from_secs(60)),
        ("AC5", "Chebyshev identities", ac5, Duration::from_secs(60)),
        ("AC6", "classification golden verdicts", ac6, Duration::from_secs(120)),
        ("AC7", "property suites", ac7, Duration::from_secs(300)),
        ("AC8", "cross-oracle agreement", ac8, Duration::from_secs(600)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with("AC")).collect();
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("over the {}s limit; {detail}", limit.as_secs())),
            r => r,
        };
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {id} {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

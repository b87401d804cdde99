//! Dense polynomial helpers over a coefficient field, used to reduce, invert
//! and validate elements of simple extensions.

use super::{Field, FieldError, Repr};

pub(crate) fn trim(f: &Field, v: &mut Vec<Repr>) {
    while v.last().is_some_and(|c| f.is_zero_r(c)) {
        v.pop();
    }
}

pub(crate) fn mul(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero_repr(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero_r(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = f.mul_r(x, y);
            out[i + j] = f.add_r(&out[i + j], &prod);
        }
    }
    out
}

fn sub(f: &Field, a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| f.zero_repr());
        let y = b.get(i).cloned().unwrap_or_else(|| f.zero_repr());
        out.push(f.sub_r(&x, &y));
    }
    trim(f, &mut out);
    out
}

/// Division with remainder; `b` must be trimmed and nonzero.
pub(crate) fn divrem(f: &Field, a: &[Repr], b: &[Repr]) -> Result<(Vec<Repr>, Vec<Repr>), FieldError> {
    let mut rem = a.to_vec();
    trim(f, &mut rem);
    let db = b.len() - 1;
    let lead_inv = f.inv_r(&b[db])?;
    if rem.len() < b.len() {
        return Ok((Vec::new(), rem));
    }
    let mut q = vec![f.zero_repr(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = f.mul_r(rem.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            let t = f.mul_r(&c, bj);
            rem[shift + j] = f.sub_r(&rem[shift + j], &t);
        }
        q[shift] = c;
        rem.pop();
        trim(f, &mut rem);
    }
    trim(f, &mut q);
    Ok((q, rem))
}

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m)` is not constant.
pub(crate) fn inverse_mod(f: &Field, a: &[Repr], m: &[Repr]) -> Result<Option<Vec<Repr>>, FieldError> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(f, &mut r1);
    let mut s0: Vec<Repr> = Vec::new();
    let mut s1: Vec<Repr> = vec![f.one_repr()];
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1)?;
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return Ok(None);
    }
    let c = f.inv_r(&r0[0])?;
    let mut inv: Vec<Repr> = s0.iter().map(|x| f.mul_r(x, &c)).collect();
    let (_, red) = divrem(f, &inv, m)?;
    inv = red;
    Ok(Some(inv))
}

pub(crate) fn gcd(f: &Field, a: &[Repr], b: &[Repr]) -> Result<Vec<Repr>, FieldError> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(f, &mut r0);
    trim(f, &mut r1);
    while !r1.is_empty() {
        let (_, r) = divrem(f, &r0, &r1)?;
        r0 = std::mem::replace(&mut r1, r);
    }
    if let Some(lead) = r0.last() {
        let c = f.inv_r(lead)?;
        r0 = r0.iter().map(|x| f.mul_r(x, &c)).collect();
    }
    Ok(r0)
}

pub(crate) fn powmod(f: &Field, base: &[Repr], mut e: u64, m: &[Repr]) -> Result<Vec<Repr>, FieldError> {
    let mut acc = vec![f.one_repr()];
    let (_, mut b) = divrem(f, base, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(f, &mul(f, &acc, &b), m)?.1;
        }
        e >>= 1;
        if e > 0 {
            b = divrem(f, &mul(f, &b, &b), m)?.1;
        }
    }
    Ok(acc)
}

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[cfg(test)]
fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the k-th cyclotomic polynomial, lowest degree first.
pub(crate) fn cyclotomic_polynomial(k: u64) -> Vec<BigInt> {
    // X^k - 1 divided by every Phi_d with d | k, d < k.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); k as usize + 1];
    num[0] = -BigInt::one();
    num[k as usize] = BigInt::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            num = exact_divide(&num, &divisor);
        }
    }
    num
}

fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = num.len() - dn;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

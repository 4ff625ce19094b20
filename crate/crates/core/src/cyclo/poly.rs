//! Dense polynomials over the rationals and the integers, lowest degree first.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn sub_scaled_shift(a: &mut QPoly, b: &[BigRational], c: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        if !bi.is_zero() {
            a[i + shift] -= c * bi;
        }
    }
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    let lead_inv = b.last().unwrap().recip();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() * &lead_inv;
        sub_scaled_shift(&mut r, &b, &c, shift);
        q[shift] = c;
        // the leading term cancels exactly
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `modulus` via the extended Euclidean algorithm, or
/// `None` when they are not coprime.
pub(crate) fn inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Option<QPoly> {
    // invariant: old_r = old_s * a (mod modulus), r = s * a (mod modulus)
    let mut old_r: QPoly = a.to_vec();
    trim(&mut old_r);
    let mut r: QPoly = modulus.to_vec();
    let mut old_s: QPoly = vec![BigRational::one()];
    let mut s: QPoly = Vec::new();
    if old_r.is_empty() {
        return None;
    }
    while !r.is_empty() {
        let (q, rem) = divrem(&old_r, &r);
        old_r = std::mem::replace(&mut r, rem);
        let next_s = sub(&old_s, &mul(&q, &s));
        old_s = std::mem::replace(&mut s, next_s);
    }
    if old_r.len() != 1 {
        return None;
    }
    let c = old_r[0].recip();
    let mut inv: QPoly = old_s.into_iter().map(|x| x * &c).collect();
    let (_, reduced) = divrem(&inv, modulus);
    inv = reduced;
    Some(inv)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut high: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&d| d * d != n).collect();
    out.append(&mut high);
    out
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div_monic(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; r.len() - db];
    for shift in (0..q.len()).rev() {
        let c = r[shift + db];
        q[shift] = c;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                r[i + shift] -= c * bi;
            }
        }
    }
    assert!(r.iter().all(|&x| x == 0), "division was not exact");
    q
}

/// The `m`-th cyclotomic polynomial, lowest degree first, obtained by dividing
/// `X^m - 1` by `Phi_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic_poly needs a positive conductor");
    let mut cache: BTreeMap<u64, Vec<i128>> = BTreeMap::new();
    for d in divisors(m) {
        let mut poly = vec![0i128; d as usize + 1];
        poly[0] = -1;
        poly[d as usize] = 1;
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            poly = exact_div_monic(&poly, &cache[&e]);
        }
        cache.insert(d, poly);
    }
    cache[&m]
        .iter()
        .map(|&c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

pub(crate) fn to_rational(p: &[i64]) -> QPoly {
    p.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
}

//! Small-integer helpers shared by the other modules.

use alloc::format;

use crate::{Error, Result};

/// Largest modulus `p^d` accepted anywhere in the crate. Residues then fit in
/// `u32` and sums of up to 2^32 of them fit in `u64`.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// Trial division; moduli here are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// `p^d`, rejecting anything above [`MAX_MODULUS`].
pub fn prime_power(p: u64, d: u32) -> Result<u64> {
    p.checked_pow(d)
        .filter(|&q| q <= MAX_MODULUS)
        .ok_or_else(|| Error::CapExceeded(format!("{p}^{d} exceeds {MAX_MODULUS}")))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Canonical representative of `a` modulo `modulus`, in `[0, modulus)`.
pub fn canonical(a: i64, modulus: u64) -> u64 {
    (a as i128).rem_euclid(modulus as i128) as u64
}

/// Exponent of `p` in `n`; `None` for `n = 0`.
pub fn valuation(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Base-`p` digit of `c` at position `r` (position 0 is the unit digit).
pub fn digit(c: u64, p: u64, r: u32) -> u64 {
    let mut c = c;
    for _ in 0..r {
        c /= p;
    }
    c % p
}

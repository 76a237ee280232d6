//! Integer-valued univariate polynomials.
//!
//! Two representations are used: the binomial basis `Σ α_r·C(x, r)` with
//! integer `α_r`, and a scaled product `Π (x − q_i) / p^δ` whose integrality
//! is checked when the value is built.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::ensure_prime;
use crate::{Error, Result};

/// Anything that can be evaluated at an integer to give an integer.
pub trait IntegerValued {
    fn value_at(&self, t: &BigInt) -> BigInt;

    fn degree(&self) -> usize;

    /// `true` iff `p` does not divide the value at 0.
    fn is_unit_at_zero(&self, p: u64) -> bool {
        !(self.value_at(&BigInt::zero()) % BigInt::from(p)).is_zero()
    }
}

/// Generalized binomial coefficient `C(t, r) = t(t−1)…(t−r+1)/r!`, valid for
/// every integer `t`.
pub fn binomial(t: &BigInt, r: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= t - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `Σ α_r·C(x, r)`. Trailing zero coefficients are trimmed, so the zero
/// polynomial has an empty coefficient list and degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IvPoly {
    coeffs: Vec<BigInt>,
}

impl IvPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IvPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    /// `C(x, r)`.
    pub fn binomial_basis(r: usize) -> Self {
        let mut coeffs = alloc::vec![BigInt::zero(); r + 1];
        coeffs[r] = BigInt::one();
        IvPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `α_r`, zero past the degree.
    pub fn coeff(&self, r: usize) -> BigInt {
        self.coeffs.get(r).cloned().unwrap_or_default()
    }

    /// Evaluates `Σ α_r·C(t, r)` exactly.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut sum = BigInt::zero();
        let mut c = BigInt::one();
        for (r, alpha) in self.coeffs.iter().enumerate() {
            if r > 0 {
                c *= t - BigInt::from(r - 1);
                c /= BigInt::from(r);
            }
            sum += alpha * &c;
        }
        sum
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }
}

impl IntegerValued for IvPoly {
    fn value_at(&self, t: &BigInt) -> BigInt {
        self.eval(t)
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl fmt::Display for IvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = a.abs();
            match (r, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "C(x,{r})")?,
                _ => write!(f, "{mag}*C(x,{r})")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Π (x − q_i) / p^δ`, guaranteed integer-valued.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredIvp {
    roots: Vec<i64>,
    p: u64,
    delta: u32,
}

impl FactoredIvp {
    /// Fails with [`Error::NonIntegralResult`] when some integer `T` makes
    /// `Π (T − q_i)` not divisible by `p^δ`.
    pub fn new(roots: Vec<i64>, p: u64, delta: u32) -> Result<Self> {
        ensure_prime(p)?;
        let min = min_product_valuation(&roots, p);
        if min < u64::from(delta) {
            let witness = min_valuation_witness(&roots, p);
            let value: BigInt = roots
                .iter()
                .map(|&q| BigInt::from(witness) - BigInt::from(q))
                .product();
            return Err(Error::NonIntegralResult {
                value: value.to_string(),
                divisor: num_traits::pow(BigInt::from(p), delta as usize).to_string(),
            });
        }
        Ok(FactoredIvp { roots, p, delta })
    }

    pub fn roots(&self) -> &[i64] {
        &self.roots
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    fn divisor(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.delta as usize)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        let prod: BigInt = self.roots.iter().map(|&q| t - BigInt::from(q)).product();
        let (quot, rem) = prod.div_rem(&self.divisor());
        debug_assert!(rem.is_zero(), "constructor guarantees integrality");
        quot
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }

    /// Gregory–Newton expansion: `α_r` is the `r`-th forward difference at 0.
    pub fn to_binomial_basis(&self) -> IvPoly {
        let k = self.roots.len();
        let mut diffs: Vec<BigInt> = (0..=k as i64).map(|t| self.eval_i64(t)).collect();
        let mut coeffs = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            coeffs.push(diffs[0].clone());
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        IvPoly::new(coeffs)
    }
}

impl IntegerValued for FactoredIvp {
    fn value_at(&self, t: &BigInt) -> BigInt {
        self.eval(t)
    }

    fn degree(&self) -> usize {
        self.roots.len()
    }
}

impl fmt::Display for FactoredIvp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            f.write_str("1")?;
        }
        for q in &self.roots {
            match q.signum() {
                0 => f.write_str("(T)")?,
                1 => write!(f, "(T-{q})")?,
                _ => write!(f, "(T+{})", q.unsigned_abs())?,
            }
        }
        if self.delta > 0 {
            write!(f, "/{}^{}", self.p, self.delta)?;
        }
        Ok(())
    }
}

/// `min_T v_p(Π (T − q_i))` over integers `T` that are not roots.
///
/// `v_p` of the product at `T` equals `Σ_{j≥1} #{i : q_i ≡ T mod p^j}`, so the
/// minimum is found by walking the p-adic classes that contain roots. A class
/// with an empty child contributes nothing further.
fn min_product_valuation(roots: &[i64], p: u64) -> u64 {
    let roots: Vec<i128> = roots.iter().map(|&q| q as i128).collect();
    min_below(&roots, p as i128, 1).0
}

fn min_valuation_witness(roots: &[i64], p: u64) -> i128 {
    let roots: Vec<i128> = roots.iter().map(|&q| q as i128).collect();
    min_below(&roots, p as i128, 1).1
}

/// `roots` all lie in one class modulo `modulus / p`; returns the minimum
/// extra valuation over the `p` child classes modulo `modulus`, together with
/// an integer attaining it.
fn min_below(roots: &[i128], p: i128, modulus: i128) -> (u64, i128) {
    let base = roots.first().copied().unwrap_or(0).rem_euclid(modulus);
    let child_mod = modulus * p;
    let mut children: BTreeMap<i128, Vec<i128>> = BTreeMap::new();
    for &q in roots {
        children.entry(q.rem_euclid(child_mod)).or_default().push(q);
    }
    if (children.len() as i128) < p {
        let free = (0..p)
            .map(|k| base + k * modulus)
            .find(|c| !children.contains_key(c))
            .unwrap_or(base);
        return (0, free);
    }
    children
        .values()
        .map(|cls| {
            let (v, w) = min_below(cls, p, child_mod);
            (v + cls.len() as u64, w)
        })
        .min_by_key(|&(v, _)| v)
        .unwrap_or((0, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn eval_binomial_examples() {
        assert_eq!(IvPoly::from_i64s(&[0, 0, 1]).eval_i64(5), b(10));
        assert_eq!(IvPoly::from_i64s(&[1, -1, 1]).eval_i64(4), b(3));
        let h = IvPoly::from_i64s(&[7, 3, -2, 9]);
        assert_eq!(h.eval_i64(0), b(7));
    }

    #[test]
    fn binomial_negative_argument() {
        // C(-1, r) = (-1)^r
        for r in 0..6 {
            let expect = if r % 2 == 0 { 1 } else { -1 };
            assert_eq!(binomial(&b(-1), r), b(expect));
        }
        assert_eq!(binomial(&b(-3), 2), b(6));
        assert_eq!(IvPoly::binomial_basis(2).eval_i64(-3), b(6));
    }

    #[test]
    fn eval_factored_examples() {
        assert_eq!(FactoredIvp::new(vec![1, 2], 2, 1).unwrap().eval_i64(0), b(1));
        assert_eq!(FactoredIvp::new(vec![2, 3], 2, 1).unwrap().eval_i64(2), b(0));
        assert_eq!(FactoredIvp::new(vec![1, 2], 3, 0).unwrap().eval_i64(4), b(6));
    }

    #[test]
    fn non_integral_is_rejected() {
        // (T-1)(T-3)/2 is not integral at T = 0
        let err = FactoredIvp::new(vec![1, 3], 2, 1).unwrap_err();
        assert!(matches!(err, Error::NonIntegralResult { .. }));
        assert!(FactoredIvp::new(vec![], 2, 1).is_err());
        assert!(FactoredIvp::new(vec![1, 2], 4, 0).is_err());
    }

    #[test]
    fn to_binomial_examples() {
        let h = FactoredIvp::new(vec![1, 2], 2, 1).unwrap();
        assert_eq!(h.to_binomial_basis(), IvPoly::from_i64s(&[1, -1, 1]));
        let one = FactoredIvp::new(vec![], 5, 0).unwrap();
        assert_eq!(one.to_binomial_basis(), IvPoly::from_i64s(&[1]));
        let id = FactoredIvp::new(vec![0], 3, 0).unwrap();
        assert_eq!(id.to_binomial_basis(), IvPoly::from_i64s(&[0, 1]));
    }

    #[test]
    fn unit_at_zero() {
        assert!(FactoredIvp::new(vec![2, 3], 2, 1).unwrap().is_unit_at_zero(2));
        assert!(!IvPoly::binomial_basis(1).is_unit_at_zero(5));
        for p in [2, 3, 7] {
            assert!(IvPoly::constant(1).is_unit_at_zero(p));
        }
    }

    #[test]
    fn degree_of_zero_polynomial() {
        assert_eq!(IvPoly::new(vec![b(0), b(0)]).degree(), 0);
        assert_eq!(IvPoly::from_i64s(&[0, 0, 4, 0]).degree(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(IvPoly::from_i64s(&[1, -1, 2]).to_string(), "1 - C(x,1) + 2*C(x,2)");
        let h = FactoredIvp::new(vec![1, 2], 2, 1).unwrap();
        assert_eq!(h.to_string(), "(T-1)(T-2)/2^1");
    }
}

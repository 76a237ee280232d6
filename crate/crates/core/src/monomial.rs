use core::fmt;

use alloc::vec::Vec;

use crate::{Error, Result};

/// Hard limit on the number of variables of any polynomial in the crate.
pub const MAX_VARS: usize = 64;

/// A multilinear monomial, stored as a bit set: bit `j` is the variable
/// `x_{j+1}`. The empty monomial is the constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    /// From 1-based variable indices. Repeats collapse (`x^t = x` on {0,1}).
    pub fn from_vars(vars: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &v in vars {
            if v == 0 || v > MAX_VARS {
                return Err(Error::InvalidArgument(alloc::format!(
                    "variable index {v} outside 1..={MAX_VARS}"
                )));
            }
            bits |= 1 << (v - 1);
        }
        Ok(Monomial(bits))
    }

    /// `x_1 x_2 … x_m`.
    pub fn full(m: usize) -> Self {
        Monomial(full_mask(m))
    }

    pub fn var(index: usize) -> Self {
        Monomial(1 << (index - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }


    pub fn contains(self, index: usize) -> bool {
        self.0 >> (index - 1) & 1 == 1
    }

    /// Value at the 0/1 point whose bit `j` is `x_{j+1}`.
    pub fn eval(self, point: u64) -> bool {
        self.0 & !point == 0
    }

    /// 1-based indices in increasing order.
    pub fn vars(self) -> Vec<usize> {
        (0..64).filter(|j| self.0 >> j & 1 == 1).map(|j| j + 1).collect()
    }

    pub fn fits(self, m: usize) -> bool {
        self.0 & !full_mask(m) == 0
    }
}

pub(crate) fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Product on {0,1} inputs.
impl core::ops::Mul for Monomial {
    type Output = Monomial;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, v) in self.vars().into_iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

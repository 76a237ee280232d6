//! Multilinear polynomials written as sums of coefficient-1 monomials, their
//! Ψ lifts, and the Nullstellensatz polynomial assembled from covering
//! families.
//!
//! Points of `{0,1}^m` are `u64` masks with bit `j` holding `x_{j+1}`. Where a
//! "smallest" point is asked for, points are compared as these integers, so
//! `x_1` is the least significant coordinate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::covering::{CoveringFamily, ResidueSet};
use crate::ivpoly::{IntegerValued, IvPoly};
use crate::monomial::{full_mask, Monomial, MAX_VARS};
use crate::ppa::{ExplicitPoly, GeneralFormPoly};
use crate::{Error, Result};

/// Largest `m` for which anything is expanded over the whole cube.
pub const MAX_DENSE_VARS: usize = 24;

/// `Σ p_i` with every `p_i` a coefficient-1 monomial. Repeated terms encode
/// integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitSumPoly {
    m: usize,
    terms: Vec<Monomial>,
}

impl UnitSumPoly {
    pub fn new(m: usize, terms: Vec<Monomial>) -> Result<Self> {
        check_vars(m)?;
        if let Some(t) = terms.iter().find(|t| !t.fits(m)) {
            return Err(Error::InvalidArgument(format!("term {t} uses a variable beyond x{m}")));
        }
        Ok(UnitSumPoly { m, terms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    /// Number of terms equal to 1 at `point`.
    pub fn eval(&self, point: u64) -> u64 {
        self.terms.iter().filter(|t| t.eval(point)).count() as u64
    }
}

/// Integer-coefficient multilinear polynomial; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMultiPoly {
    m: usize,
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl IntMultiPoly {
    pub fn zero(m: usize) -> Self {
        IntMultiPoly { m, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(m);
        p.add_term(Monomial::ONE, c.into());
        p
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Result<Self> {
        check_vars(m)?;
        let mut p = Self::zero(m);
        for (mono, c) in terms {
            if !mono.fits(m) {
                return Err(Error::InvalidArgument(format!("term {mono} uses a variable beyond x{m}")));
            }
            p.add_term(mono, c);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mono: Monomial) -> BigInt {
        self.coeffs.get(&mono).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|t| t.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(mono).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&mono);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &IntMultiPoly, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (mono, c) in &other.coeffs {
            self.add_term(*mono, c * scale);
        }
    }

    pub fn mul(&self, other: &IntMultiPoly) -> IntMultiPoly {
        let mut out = IntMultiPoly::zero(self.m.max(other.m));
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(*a * *b, ca * cb);
            }
        }
        out
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> IntMultiPoly {
        let p = BigInt::from(p);
        IntMultiPoly {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|(mono, c)| (*mono, c.mod_floor(&p)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn eval(&self, point: u64) -> BigInt {
        self.coeffs
            .iter()
            .filter(|(mono, _)| mono.eval(point))
            .map(|(_, c)| c)
            .sum()
    }

    /// Monomials with odd coefficient, as a listed F2 polynomial.
    pub fn to_f2(&self) -> ExplicitPoly {
        let two = BigInt::from(2);
        ExplicitPoly::new(
            self.coeffs
                .iter()
                .filter(|(_, c)| c.mod_floor(&two).is_one())
                .map(|(mono, _)| *mono)
                .collect(),
        )
    }
}

impl fmt::Display for IntMultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if mono.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn check_vars(m: usize) -> Result<()> {
    if m > MAX_VARS {
        return Err(Error::CapExceeded(format!("{m} variables, at most {MAX_VARS} supported")));
    }
    Ok(())
}

/// `Σ a_j x_j` written as unit monomials, each `a_j` first reduced into
/// `[0, modulus)`.
pub fn expand_to_unit_monomials(coefs: &[i64], modulus: u64) -> Result<UnitSumPoly> {
    if modulus == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let mut terms = Vec::new();
    for (j, &a) in coefs.iter().enumerate() {
        let reps = crate::arith::canonical(a, modulus);
        terms.extend(core::iter::repeat_n(Monomial::var(j + 1), reps as usize));
    }
    UnitSumPoly::new(coefs.len(), terms)
}

/// `Ψ_0(f), …, Ψ_top(f)` by one pass over the terms: `Ψ_j` gains `p·Ψ_{j-1}`
/// for each new term `p`.
pub fn psi_all(f: &UnitSumPoly, top: usize) -> Vec<IntMultiPoly> {
    let mut levels: Vec<IntMultiPoly> = (0..=top).map(|_| IntMultiPoly::zero(f.m)).collect();
    levels[0] = IntMultiPoly::constant(f.m, 1);
    for (seen, &term) in f.terms.iter().enumerate() {
        for j in (1..=top.min(seen + 1)).rev() {
            let (lower, upper) = levels.split_at_mut(j);
            let prev = &lower[j - 1];
            for (mono, c) in &prev.coeffs {
                upper[0].add_term(*mono * term, c.clone());
            }
        }
    }
    levels
}

/// `Ψ_r(f) = Σ_{i_1<…<i_r} p_{i_1}⋯p_{i_r}`, multilinear-reduced.
pub fn psi_r(f: &UnitSumPoly, r: usize) -> IntMultiPoly {
    psi_all(f, r).pop().unwrap_or_else(|| IntMultiPoly::zero(f.m))
}

/// `Ψ^h(f) = Σ α_r Ψ_r(f)`; agrees with `h(f(s))` on every `s ∈ {0,1}^m`.
pub fn psi_h(f: &UnitSumPoly, h: &IvPoly) -> IntMultiPoly {
    let levels = psi_all(f, h.degree());
    let mut out = IntMultiPoly::zero(f.m);
    for (r, level) in levels.iter().enumerate() {
        out.add_assign_scaled(level, &h.coeff(r));
    }
    out
}

/// `Σ_i deg(f_i)·(total degree of H_i)`.
fn covering_product_degree(fs: &[UnitSumPoly], hs: &[CoveringFamily]) -> usize {
    fs.iter().zip(hs).map(|(f, h)| f.degree() * h.total_degree()).sum()
}

fn check_aligned(m: usize, fs: &[UnitSumPoly], hs: &[CoveringFamily]) -> Result<()> {
    check_vars(m)?;
    if fs.len() != hs.len() {
        return Err(Error::InvalidArgument(format!(
            "{} constraint polynomials but {} covering families",
            fs.len(),
            hs.len()
        )));
    }
    if let Some(f) = fs.iter().find(|f| f.m != m) {
        return Err(Error::InvalidArgument(format!("polynomial in {} variables, expected {m}", f.m)));
    }
    let degree = covering_product_degree(fs, hs);
    if degree >= m {
        return Err(Error::DegreeBoundViolated { m, degree });
    }
    Ok(())
}

/// The Nullstellensatz polynomial over `F_p`:
/// `Π_i Π_{h∈H_i} Ψ^h(f_i) − c·Π_j (1 − x_j)` with `c` the value of the
/// product at 0. Returns the polynomial (coefficients in `[0, p)`) and `c`.
///
/// Nonzero points of the result are exactly the nonzero `s` at which no
/// covering polynomial of `H_i` vanishes modulo `p` at `f_i(s)`, for every `i`.
pub fn build_main_polynomial(
    m: usize,
    fs: &[UnitSumPoly],
    hs: &[CoveringFamily],
    p: u64,
) -> Result<(IntMultiPoly, u64)> {
    crate::arith::ensure_prime(p)?;
    check_aligned(m, fs, hs)?;
    if let Some(h) = hs.iter().find(|h| h.p() != p) {
        return Err(Error::InvalidArgument(format!("covering family over p = {}, expected {p}", h.p())));
    }
    if m > MAX_DENSE_VARS {
        return Err(Error::CapExceeded(format!("dense expansion in {m} > {MAX_DENSE_VARS} variables")));
    }
    let mut product = vec![1u64; 1 << m];
    for (f, family) in fs.iter().zip(hs) {
        for h in family.polys() {
            let lifted = psi_h(f, &h.to_binomial_basis()).reduce_mod(p);
            let values = values_mod(&lifted, m, p);
            for (acc, v) in product.iter_mut().zip(values) {
                *acc = *acc * v % p;
            }
        }
    }
    let c = product[0];
    if c == 0 {
        return Err(Error::ZeroUnitViolated);
    }
    // c·Π(1 − x_j) is c at the origin and 0 elsewhere on the cube.
    product[0] = 0;
    Ok((coefficients_mod(product, m, p), c))
}

/// The Nullstellensatz polynomial over `F_2` in block form, without
/// expanding it: one block holding every `Ψ^h(f_i) mod 2`, and one block
/// `Π_j (x_j + 1)`, whose single full-monomial term is the designated
/// leftover.
pub fn build_main_general_form(
    m: usize,
    fs: &[UnitSumPoly],
    hs: &[CoveringFamily],
) -> Result<GeneralFormPoly> {
    check_aligned(m, fs, hs)?;
    if let Some(h) = hs.iter().find(|h| h.p() != 2) {
        return Err(Error::EngineUnsupported(h.p()));
    }
    let mut covering_block = Vec::new();
    for (f, family) in fs.iter().zip(hs) {
        for h in family.polys() {
            covering_block.push(psi_h(f, &h.to_binomial_basis()).to_f2());
        }
    }
    if covering_block.iter().any(|p| !p.eval(0)) {
        return Err(Error::ZeroUnitViolated);
    }
    let origin_block: Vec<ExplicitPoly> = (1..=m)
        .map(|j| ExplicitPoly::new(vec![Monomial::var(j), Monomial::ONE]))
        .collect();
    GeneralFormPoly::with_consecutive_full_pairing(m, vec![covering_block, origin_block])
}

/// Values on the whole cube, modulo `p`, by the subset-sum transform.
fn values_mod(poly: &IntMultiPoly, m: usize, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut table = vec![0u64; 1 << m];
    for (mono, c) in poly.terms() {
        let c = c.mod_floor(&pb).to_u64().unwrap_or(0);
        let slot = &mut table[mono.bits() as usize];
        *slot = (*slot + c) % p;
    }
    for j in 0..m {
        let bit = 1usize << j;
        for s in 0..table.len() {
            if s & bit != 0 {
                table[s] = (table[s] + table[s ^ bit]) % p;
            }
        }
    }
    table
}

/// Inverse of [`values_mod`].
fn coefficients_mod(mut table: Vec<u64>, m: usize, p: u64) -> IntMultiPoly {
    for j in 0..m {
        let bit = 1usize << j;
        for s in 0..table.len() {
            if s & bit != 0 {
                table[s] = (table[s] + p - table[s ^ bit]) % p;
            }
        }
    }
    IntMultiPoly {
        m,
        coeffs: table
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(s, c)| (Monomial::from_bits(s as u64), BigInt::from(c)))
            .collect(),
    }
}

/// Multilinear interpolation modulo `p` of a function on the cube.
pub fn interpolate_mod(m: usize, p: u64, value: impl Fn(u64) -> u64) -> Result<IntMultiPoly> {
    check_vars(m)?;
    if m > MAX_DENSE_VARS {
        return Err(Error::CapExceeded(format!("dense expansion in {m} > {MAX_DENSE_VARS} variables")));
    }
    let table = (0..1u64 << m).map(|s| value(s) % p).collect();
    Ok(coefficients_mod(table, m, p))
}

/// Finds `s` with `f(s) ≠ 0` over `F_2` by fixing `x_1, x_2, …` in turn, each
/// time keeping the coefficient of the product of the remaining variables odd.
pub fn solve_explicit_cn(f: &IntMultiPoly) -> Result<u64> {
    let m = f.m;
    let two = BigInt::from(2);
    let mut live: alloc::collections::BTreeSet<u64> = f
        .coeffs
        .iter()
        .filter(|(_, c)| c.mod_floor(&two).is_one())
        .map(|(mono, _)| mono.bits())
        .collect();
    if !live.contains(&full_mask(m)) {
        return Err(Error::FullCoefficientZero);
    }
    let mut point = 0u64;
    for j in 0..m {
        let bit = 1u64 << j;
        let rest = full_mask(m) & !full_mask(j + 1);
        if live.contains(&rest) {
            live.retain(|mono| mono & bit == 0);
        } else {
            point |= bit;
            let mut next = alloc::collections::BTreeSet::new();
            for mono in live {
                let reduced = mono & !bit;
                if !next.remove(&reduced) {
                    next.insert(reduced);
                }
            }
            live = next;
        }
    }
    debug_assert!(live.contains(&0));
    Ok(point)
}

/// Smallest nonzero `s ∈ {0,1}^m` with `f_i(s) mod p^{d_i} ∈ Q_i` for all `i`.
pub fn brute_force_cn(m: usize, fs: &[UnitSumPoly], qs: &[ResidueSet]) -> Result<u64> {
    if m > MAX_DENSE_VARS {
        return Err(Error::CapExceeded(format!("enumeration over {m} > {MAX_DENSE_VARS} variables")));
    }
    if fs.len() != qs.len() {
        return Err(Error::InvalidArgument("constraints and target sets differ in number".into()));
    }
    if let Some(f) = fs.iter().find(|f| f.m != m) {
        return Err(Error::InvalidArgument(format!("polynomial in {} variables, expected {m}", f.m)));
    }
    (1..1u64 << m)
        .find(|&s| {
            fs.iter()
                .zip(qs)
                .all(|(f, q)| q.contains(f.eval(s) % q.modulus()))
        })
        .ok_or(Error::NoSolution)
}

//! Residue sets modulo `p^d`, the κ bound on the covering price, and the
//! polynomial families that realise it.
//!
//! A family `H` covers `B ⊆ Z_{p^d}` when every `b ∈ B` has some `h ∈ H` with
//! `p | h(b)`, each `h` being a `p`-unit at 0. Divisibility is always tested at
//! the canonical representative `b ∈ [0, p^d)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{digit, ensure_prime, prime_power};
use crate::ivpoly::{FactoredIvp, IntegerValued};
use crate::{Error, Result};

/// A subset of `Z_{p^d}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    p: u64,
    d: u32,
    modulus: u64,
    elems: BTreeSet<u64>,
}

impl ResidueSet {
    /// Elements must be distinct and lie in `[0, p^d)`. `d = 0` is allowed and
    /// gives the trivial ring `Z_1 = {0}`.
    pub fn new(p: u64, d: u32, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        ensure_prime(p)?;
        let modulus = prime_power(p, d)?;
        let mut set = BTreeSet::new();
        for e in elems {
            if e >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "{e} is not a canonical residue modulo {modulus}"
                )));
            }
            if !set.insert(e) {
                return Err(Error::InvalidArgument(format!("{e} listed twice")));
            }
        }
        Ok(ResidueSet { p, d, modulus, elems: set })
    }

    /// Reduces arbitrary integers into `[0, p^d)`, merging duplicates.
    pub fn from_integers(p: u64, d: u32, elems: &[i64]) -> Result<Self> {
        ensure_prime(p)?;
        let modulus = prime_power(p, d)?;
        let canon: BTreeSet<u64> = elems
            .iter()
            .map(|&e| crate::arith::canonical(e, modulus))
            .collect();
        Self::new(p, d, canon)
    }

    pub fn empty(p: u64, d: u32) -> Result<Self> {
        Self::new(p, d, [])
    }

    /// All of `Z_{p^d}`.
    pub fn full(p: u64, d: u32) -> Result<Self> {
        let modulus = prime_power(p, d)?;
        Self::new(p, d, 0..modulus)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Membership of an arbitrary integer, read modulo `p^d`.
    pub fn contains_residue(&self, value: i64) -> bool {
        self.elems.contains(&crate::arith::canonical(value, self.modulus))
    }

    pub fn contains(&self, value: u64) -> bool {
        self.elems.contains(&value)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    pub fn complement(&self) -> ResidueSet {
        ResidueSet {
            p: self.p,
            d: self.d,
            modulus: self.modulus,
            elems: (0..self.modulus).filter(|e| !self.elems.contains(e)).collect(),
        }
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elems.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} mod {}^{}", self.p, self.d)
    }
}

/// Polynomials that are all `p`-units at 0, used together to cover a subset
/// of `Z_{p^d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringFamily {
    p: u64,
    d: u32,
    polys: Vec<FactoredIvp>,
}

impl CoveringFamily {
    pub fn new(p: u64, d: u32, polys: Vec<FactoredIvp>) -> Result<Self> {
        ensure_prime(p)?;
        prime_power(p, d)?;
        for h in &polys {
            if h.p() != p {
                return Err(Error::InvalidArgument(format!(
                    "member {h} is scaled by powers of {} instead of {p}",
                    h.p()
                )));
            }
            if !h.is_unit_at_zero(p) {
                return Err(Error::ZeroUnitViolated);
            }
        }
        Ok(CoveringFamily { p, d, polys })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn polys(&self) -> &[FactoredIvp] {
        &self.polys
    }

    pub fn total_degree(&self) -> usize {
        self.polys.iter().map(IntegerValued::degree).sum()
    }

    /// Does some member vanish modulo `p` at `value`?
    pub fn covers_value(&self, value: u64) -> bool {
        let t = BigInt::from(value);
        let p = BigInt::from(self.p);
        self.polys.iter().any(|h| (h.eval(&t) % &p).is_zero())
    }

    /// Every canonical residue the family covers.
    pub fn covered_set(&self) -> ResidueSet {
        let modulus = self.modulus();
        ResidueSet {
            p: self.p,
            d: self.d,
            modulus,
            elems: (0..modulus).filter(|&b| self.covers_value(b)).collect(),
        }
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.d)
    }
}

/// κ(B), computed level by level: at modulus `p^e` count the `k` elements
/// divisible by `p^{e-1}`, then keep the residues modulo `p^{e-1}` that occur
/// strictly more than `k` times.
pub fn kappa(b: &ResidueSet) -> u64 {
    let mut total = 0;
    let mut current: BTreeSet<u64> = b.elems.clone();
    for e in (1..=b.d).rev() {
        let unit = b.p.pow(e - 1);
        let k = current.iter().filter(|&&x| x % unit == 0).count() as u64;
        total += k * unit;
        current = frequent_residues(&current, unit, k);
    }
    total
}

fn frequent_residues(set: &BTreeSet<u64>, unit: u64, k: u64) -> BTreeSet<u64> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in set {
        *counts.entry(x % unit).or_default() += 1;
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c > k)
        .map(|(r, _)| r)
        .collect()
}

/// Number of distinct residues modulo `p` in `Q`.
pub fn card_p(q: &ResidueSet) -> Result<u64> {
    if q.is_empty() {
        return Err(Error::EmptySet);
    }
    let residues: BTreeSet<u64> = q.iter().map(|x| x % q.p).collect();
    Ok(residues.len() as u64)
}

/// `Π (T − q_i) / p^δ` with `δ = Σ_{j<r} p^j`, for a complete residue system
/// `q` modulo `p^r`. Divisible by `p` exactly when `T ≡ q_i (mod p^{r+1})`
/// for some `i`.
pub fn residue_system_cover(q: &[i64], p: u64, r: u32) -> Result<FactoredIvp> {
    ensure_prime(p)?;
    let modulus = prime_power(p, r)?;
    let next = prime_power(p, r + 1)?;
    if q.len() as u64 != modulus {
        return Err(Error::NotAResidueSystem { modulus });
    }
    let classes: BTreeSet<u64> = q
        .iter()
        .map(|&x| crate::arith::canonical(x, modulus))
        .collect();
    if classes.len() as u64 != modulus {
        return Err(Error::NotAResidueSystem { modulus });
    }
    if let Some(&root) = q.iter().find(|&&x| crate::arith::canonical(x, next) == 0) {
        return Err(Error::CoversZero { root, modulus: next });
    }
    let delta: u64 = (0..r).map(|j| p.pow(j)).sum();
    FactoredIvp::new(q.to_vec(), p, delta as u32)
}

/// `Π_{q ∉ Q'} (T − q) / p^δ` with `δ = Σ_{r<d} (p^r − 1)`. Covers exactly
/// the complement of `Q'`.
pub fn alon_cover(kept: &ResidueSet) -> Result<FactoredIvp> {
    if !kept.contains(0) {
        return Err(Error::ZeroMissing);
    }
    let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
    for x in kept.iter() {
        if let Some(&prev) = seen.get(&(x % kept.p)) {
            return Err(Error::NotDistinctModP(prev, x));
        }
        seen.insert(x % kept.p, x);
    }
    let roots: Vec<i64> = kept.complement().iter().map(|x| x as i64).collect();
    let delta: u64 = (0..kept.d).map(|r| kept.p.pow(r) - 1).sum();
    FactoredIvp::new(roots, kept.p, delta as u32)
}

/// A covering family of `B` whose total degree is exactly κ(B).
///
/// At modulus `p^e`, each of the `k` elements divisible by `p^{e-1}` becomes the
/// class-0 root of one residue-system polynomial. The other roots of the `t`-th
/// polynomial are the `t`-th smallest members of `B` in each class, or the
/// class representative itself when the class has fewer members. Classes that
/// still have members left are handled one level down.
pub fn build_kappa_covering(b: &ResidueSet) -> Result<CoveringFamily> {
    if b.contains(0) {
        return Err(Error::ZeroInSet);
    }
    let p = b.p;
    let mut polys = Vec::new();
    let mut current: BTreeSet<u64> = b.elems.clone();
    for e in (1..=b.d).rev() {
        let unit = p.pow(e - 1);
        let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &x in &current {
            classes.entry(x % unit).or_default().push(x);
        }
        let anchors = classes.get(&0).cloned().unwrap_or_default();
        let k = anchors.len() as u64;
        for (t, &anchor) in anchors.iter().enumerate() {
            let mut roots = Vec::with_capacity(unit as usize);
            roots.push(anchor as i64);
            for c in 1..unit {
                let lift = classes
                    .get(&c)
                    .and_then(|members| members.get(t))
                    .copied()
                    .unwrap_or(c);
                roots.push(lift as i64);
            }
            roots.sort_unstable();
            polys.push(residue_system_cover(&roots, p, e - 1)?);
        }
        current = frequent_residues(&current, unit, k);
    }
    CoveringFamily::new(p, b.d, polys)
}

/// `true` iff every element of `B` is covered by some member of `H`.
pub fn covers(h: &CoveringFamily, b: &ResidueSet) -> bool {
    b.iter().all(|x| h.covers_value(x))
}

/// `σ(R) = (p − 1)·Σ_{r∈R} p^r`.
pub fn sigma(positions: &[u32], p: u64) -> u64 {
    let distinct: BTreeSet<u32> = positions.iter().copied().collect();
    (p - 1) * distinct.iter().map(|&r| p.pow(r)).sum::<u64>()
}

/// Residues modulo `p^d` whose base-`p` digits vanish at every position in `R`.
pub fn r_zero_set(positions: &[u32], p: u64, d: u32) -> Result<ResidueSet> {
    if let Some(&position) = positions.iter().find(|&&r| r >= d) {
        return Err(Error::RangeViolation { position, d });
    }
    let modulus = prime_power(p, d)?;
    ResidueSet::new(
        p,
        d,
        (0..modulus).filter(|&c| positions.iter().all(|&r| digit(c, p, r) == 0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(p: u64, d: u32, elems: &[u64]) -> ResidueSet {
        ResidueSet::new(p, d, elems.iter().copied()).unwrap()
    }

    const WORKED_EXAMPLE: [u64; 20] = [
        1, 2, 5, 6, 13, 20, 40, 42, 50, 51, 52, 56, 69, 70, 87, 95, 100, 101, 102, 112,
    ];

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&set(5, 3, &[])), 0);
        assert_eq!(kappa(&set(2, 2, &[1, 2, 3])), 3);
        assert_eq!(kappa(&set(2, 1, &[1])), 1);
        assert_eq!(kappa(&set(3, 1, &[0, 2])), 2);
    }

    #[test]
    fn kappa_of_worked_example_set() {
        // Residue 12 mod 25 occurs twice (87, 112), not more than k = 2 times,
        // so the second level keeps {1, 2, 20} and the last level is empty.
        let b = set(5, 3, &WORKED_EXAMPLE);
        assert_eq!(kappa(&b), 2 * 25 + 5);
        let family = build_kappa_covering(&b).unwrap();
        assert!(covers(&family, &b));
        assert_eq!(family.total_degree(), 55);
        // With 12 in place of 13, residue 12 occurs three times: 2·25 + 5 + 1.
        let mut corrected = WORKED_EXAMPLE;
        corrected[4] = 12;
        assert_eq!(kappa(&set(5, 3, &corrected)), 56);
    }

    #[test]
    fn card_p_examples() {
        assert_eq!(card_p(&set(2, 1, &[0])), Ok(1));
        assert_eq!(card_p(&set(2, 2, &[0, 2])), Ok(1));
        assert_eq!(card_p(&set(3, 2, &[1, 2, 5])), Ok(2));
        assert_eq!(card_p(&set(5, 1, &[0])), Ok(1));
        assert_eq!(card_p(&set(5, 1, &[])), Err(Error::EmptySet));
    }

    #[test]
    fn residue_system_examples() {
        let h = residue_system_cover(&[1, 2], 2, 1).unwrap();
        let vals: Vec<BigInt> = (0..4).map(|t| h.eval_i64(t)).collect();
        assert_eq!(vals, [1, 0, 0, 1].map(BigInt::from));
        let fam = CoveringFamily::new(2, 2, vec![h]).unwrap();
        assert_eq!(fam.covered_set(), set(2, 2, &[1, 2]));

        let h = residue_system_cover(&[1], 3, 0).unwrap();
        assert_eq!(h.delta(), 0);
        assert_eq!(CoveringFamily::new(3, 1, vec![h]).unwrap().covered_set(), set(3, 1, &[1]));

        let h = residue_system_cover(&[1, 2, 3, 4], 2, 2).unwrap();
        assert_eq!((h.delta(), h.degree()), (3, 4));
        for t in 0..8 {
            let prod: i64 = [1, 2, 3, 4].iter().map(|q| t - q).product();
            assert_eq!(prod % 8, 0);
        }
        let fam = CoveringFamily::new(2, 3, vec![h]).unwrap();
        assert_eq!(fam.covered_set(), set(2, 3, &[1, 2, 3, 4]));
    }

    #[test]
    fn residue_system_errors() {
        assert_eq!(
            residue_system_cover(&[1, 3], 2, 1),
            Err(Error::NotAResidueSystem { modulus: 2 })
        );
        assert_eq!(
            residue_system_cover(&[1], 2, 1),
            Err(Error::NotAResidueSystem { modulus: 2 })
        );
        assert_eq!(
            residue_system_cover(&[4, 1], 2, 1),
            Err(Error::CoversZero { root: 4, modulus: 4 })
        );
    }

    #[test]
    fn alon_cover_examples() {
        let h = alon_cover(&set(2, 2, &[0, 1])).unwrap();
        assert_eq!((h.roots(), h.delta()), (&[2, 3][..], 1));
        let vals: Vec<BigInt> = (0..4).map(|t| h.eval_i64(t)).collect();
        assert_eq!(vals, [3, 1, 0, 0].map(BigInt::from));

        let h = alon_cover(&set(3, 1, &[0])).unwrap();
        assert_eq!((h.roots(), h.delta()), (&[1, 2][..], 0));

        let h = alon_cover(&set(2, 1, &[0])).unwrap();
        assert_eq!(h.roots(), &[1]);
        let fam = CoveringFamily::new(2, 1, vec![h]).unwrap();
        assert_eq!(fam.covered_set(), set(2, 1, &[1]));

        assert_eq!(alon_cover(&set(2, 2, &[1])), Err(Error::ZeroMissing));
        assert_eq!(alon_cover(&set(2, 2, &[0, 2])), Err(Error::NotDistinctModP(0, 2)));
    }

    #[test]
    fn kappa_covering_examples() {
        let fam = build_kappa_covering(&set(2, 2, &[2])).unwrap();
        assert_eq!(fam.polys().len(), 1);
        assert_eq!(fam.polys()[0].roots(), &[1, 2]);
        assert_eq!(fam.total_degree(), 2);

        let fam = build_kappa_covering(&set(3, 1, &[1, 2])).unwrap();
        let roots: Vec<&[i64]> = fam.polys().iter().map(|h| h.roots()).collect();
        assert_eq!(roots, [&[1][..], &[2][..]]);

        let b = set(2, 2, &[1, 3]);
        let fam = build_kappa_covering(&b).unwrap();
        assert_eq!(fam.polys().len(), 1);
        assert_eq!(fam.polys()[0].roots(), &[1]);
        assert_eq!(fam.covered_set(), b);

        assert_eq!(build_kappa_covering(&set(2, 2, &[0, 1])), Err(Error::ZeroInSet));
    }

    #[test]
    fn covers_examples() {
        let t1 = CoveringFamily::new(2, 1, vec![FactoredIvp::new(vec![1], 2, 0).unwrap()]).unwrap();
        assert!(covers(&t1, &set(2, 1, &[1])));
        assert!(!covers(&t1, &set(2, 1, &[0])));
        let h = FactoredIvp::new(vec![2, 3], 2, 1).unwrap();
        let fam = CoveringFamily::new(2, 2, vec![h]).unwrap();
        assert!(covers(&fam, &set(2, 2, &[2, 3])));
    }

    #[test]
    fn family_rejects_non_units() {
        let h = FactoredIvp::new(vec![0], 2, 0).unwrap();
        assert_eq!(CoveringFamily::new(2, 1, vec![h]), Err(Error::ZeroUnitViolated));
    }

    #[test]
    fn sigma_and_r_zero_sets() {
        assert_eq!(sigma(&[0, 2], 3), 20);
        assert_eq!(sigma(&[], 7), 0);
        assert_eq!(r_zero_set(&[0], 2, 2).unwrap(), set(2, 2, &[0, 2]));
        assert_eq!(r_zero_set(&[], 3, 2).unwrap(), ResidueSet::full(3, 2).unwrap());
        assert_eq!(
            r_zero_set(&[2], 2, 2),
            Err(Error::RangeViolation { position: 2, d: 2 })
        );
    }
}

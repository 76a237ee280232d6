//! Olson-type subset problems: find a nonempty column set `J` with
//! `Σ_{j∈J} a_ij mod p^{d_i} ∈ Q_i` for every row `i`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{canonical, ensure_prime, prime_power};
use crate::covering::{build_kappa_covering, kappa, r_zero_set, sigma, ResidueSet};
use crate::lift::{build_main_general_form, expand_to_unit_monomials, UnitSumPoly};
use crate::ppa::{default_step_cap, edge_count_bound, follow_path, GeneralFormPoly};
use crate::{Error, Result};

/// Most columns the brute-force engine enumerates.
pub const MAX_BRUTE_COLUMNS: usize = 24;
/// Largest `Π p^{d_i}` accepted by [`f_exact`].
pub const MAX_EXACT_GROUP: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Enumerate subsets in increasing mask order.
    #[default]
    Brute,
    /// Build the Nullstellensatz polynomial from κ-coverings and follow the
    /// End-of-the-Line path (p = 2 only).
    Ppa,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OlsonInstance {
    p: u64,
    d: Vec<u32>,
    a: Vec<Vec<i64>>,
    q: Vec<ResidueSet>,
    m: usize,
}

impl OlsonInstance {
    /// Rows are `a[i]`; `q[i]` must be a set modulo `p^{d[i]}` containing 0.
    pub fn new(p: u64, d: Vec<u32>, a: Vec<Vec<i64>>, q: Vec<ResidueSet>) -> Result<Self> {
        ensure_prime(p)?;
        let n = d.len();
        if n == 0 {
            return Err(Error::InvalidArgument("at least one row is required".into()));
        }
        if a.len() != n || q.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{n} exponents, {} rows and {} target sets",
                a.len(),
                q.len()
            )));
        }
        if d.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("exponents must be nonincreasing".into()));
        }
        let m = a[0].len();
        if a.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidArgument("rows differ in length".into()));
        }
        for (i, (qi, &di)) in q.iter().zip(&d).enumerate() {
            prime_power(p, di)?;
            if qi.p() != p || qi.d() != di {
                return Err(Error::InvalidArgument(format!(
                    "target set {} is modulo {}^{}, expected {p}^{di}",
                    i + 1,
                    qi.p(),
                    qi.d()
                )));
            }
            if !qi.contains(0) {
                return Err(Error::ZeroMissing);
            }
        }
        Ok(OlsonInstance { p, d, a, q, m })
    }

    /// All targets `{0}`.
    pub fn zero_sum(p: u64, d: Vec<u32>, a: Vec<Vec<i64>>) -> Result<Self> {
        let q = d
            .iter()
            .map(|&di| ResidueSet::new(p, di, [0]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, d, a, q)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> &[u32] {
        &self.d
    }

    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn q(&self) -> &[ResidueSet] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self, row: usize) -> u64 {
        self.q[row].modulus()
    }

    /// `Σ_{j∈J} a_ij mod p^{d_i}` for each row; `J` is 1-based.
    pub fn residues(&self, j: &[usize]) -> Vec<u64> {
        (0..self.n())
            .map(|i| {
                let modulus = self.modulus(i);
                j.iter()
                    .fold(0, |acc, &col| (acc + canonical(self.a[i][col - 1], modulus)) % modulus)
            })
            .collect()
    }

    /// `true` iff `J` is a nonempty set of valid columns meeting every target.
    pub fn is_solution(&self, j: &[usize]) -> bool {
        let mut sorted = j.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        !j.is_empty()
            && sorted.len() == j.len()
            && j.iter().all(|&c| (1..=self.m).contains(&c))
            && self.residues(j).iter().zip(&self.q).all(|(&r, q)| q.contains(r))
    }

    /// `Σ_i κ(Z_{p^{d_i}} \ Q_i)`; every instance with more columns than this
    /// has a solution.
    pub fn kappa_bound(&self) -> u64 {
        self.q.iter().map(|q| kappa(&q.complement())).sum()
    }

    /// Row `i` as a sum of `x_j`, each repeated `a_ij mod p^{d_i}` times.
    pub fn row_polynomials(&self) -> Result<Vec<UnitSumPoly>> {
        (0..self.n())
            .map(|i| expand_to_unit_monomials(&self.a[i], self.modulus(i)))
            .collect()
    }
}

/// Finds a nonempty solution.
///
/// The brute engine returns the solution with the smallest mask, where column
/// `j` is bit `j − 1`. The ppa engine requires `p = 2` and more columns than
/// `Σ deg(f_i)·κ_i`.
pub fn solve_olson(inst: &OlsonInstance, engine: Engine) -> Result<Vec<usize>> {
    let j = match engine {
        Engine::Brute => solve_brute(inst)?,
        Engine::Ppa => solve_ppa(inst)?,
    };
    if !inst.is_solution(&j) {
        return Err(Error::PreconditionViolated(format!(
            "solver returned {j:?}, which fails the constraints"
        )));
    }
    Ok(j)
}

/// Largest modulus given a dense membership table.
const MAX_TABLE: u64 = 1 << 20;

/// Membership table for one row, when the modulus is small enough.
fn target_table(q: &ResidueSet) -> Option<Vec<bool>> {
    (q.modulus() <= MAX_TABLE).then(|| {
        let mut table = vec![false; q.modulus() as usize];
        for x in q.iter() {
            table[x as usize] = true;
        }
        table
    })
}

/// Row sums of every subset of `cols`, row-major per subset.
fn subset_sums(inst: &OlsonInstance, cols: core::ops::Range<usize>) -> Vec<u64> {
    let n = inst.n();
    let width = cols.len();
    let mut sums = vec![0u64; n << width];
    for s in 1..1usize << width {
        let low = s.trailing_zeros() as usize;
        let prev = s & (s - 1);
        for i in 0..n {
            let modulus = inst.modulus(i);
            let a = canonical(inst.a[i][cols.start + low], modulus);
            sums[s * n + i] = (sums[prev * n + i] + a) % modulus;
        }
    }
    sums
}

fn solve_brute(inst: &OlsonInstance) -> Result<Vec<usize>> {
    let m = inst.m;
    if m > MAX_BRUTE_COLUMNS {
        return Err(Error::CapExceeded(format!("{m} columns, brute force handles {MAX_BRUTE_COLUMNS}")));
    }
    let n = inst.n();
    let half = m / 2;
    let low = subset_sums(inst, 0..half);
    let high = subset_sums(inst, half..m);
    let tables: Vec<Option<Vec<bool>>> = inst.q.iter().map(target_table).collect();
    let moduli: Vec<u64> = (0..n).map(|i| inst.modulus(i)).collect();
    let hit = |i: usize, r: u64| match &tables[i] {
        Some(table) => table[r as usize],
        None => inst.q[i].contains(r),
    };
    let low_mask = (1usize << half) - 1;
    (1..1usize << m)
        .find(|&s| {
            let (l, h) = (s & low_mask, s >> half);
            (0..n).all(|i| hit(i, (low[l * n + i] + high[h * n + i]) % moduli[i]))
        })
        .map(|s| mask_to_set(s as u64))
        .ok_or(Error::NoSolution)
}

/// The general-form polynomial whose nonzero points are the solutions:
/// κ-coverings of every `Z_{2^{d_i}} \ Q_i`, lifted through the rows.
pub fn ppa_instance(inst: &OlsonInstance) -> Result<GeneralFormPoly> {
    if inst.p != 2 {
        return Err(Error::EngineUnsupported(inst.p));
    }
    if inst.m == 0 {
        return Err(Error::NoSolution);
    }
    let fs = inst.row_polynomials()?;
    let hs = inst
        .q
        .iter()
        .map(|q| build_kappa_covering(&q.complement()))
        .collect::<Result<Vec<_>>>()?;
    build_main_general_form(inst.m, &fs, &hs)
}

/// Step cap for paths on reduction instances. These carry far more terms
/// than points, so the default is too tight; no path outlasts the edge count.
pub fn ppa_step_cap(poly: &GeneralFormPoly) -> u64 {
    edge_count_bound(poly).max(default_step_cap(poly.m()))
}

fn solve_ppa(inst: &OlsonInstance) -> Result<Vec<usize>> {
    let poly = ppa_instance(inst)?;
    let report = follow_path(&poly, Some(ppa_step_cap(&poly)))?;
    Ok(mask_to_set(report.solution))
}

/// Column set of a point; column `j` is bit `j − 1`.
pub fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect()
}

/// Replaces the last row by the column sums divided by `p` and lowers its
/// exponent by one. All targets must be `{0}`.
///
/// A solution of the result solves the original: the first `n − 1` rows are
/// unchanged, and their sums together with the last row's sum give
/// `Σ_i Σ_J a_ij = p·Σ_J b_nj ≡ 0 (mod p^{d_n})`.
pub fn reduce_even_sum(inst: &OlsonInstance) -> Result<OlsonInstance> {
    if inst.q.iter().any(|q| q.len() != 1) {
        return Err(Error::InvalidArgument("every target set must be {0}".into()));
    }
    let p = inst.p as i64;
    let n = inst.n();
    let mut last = Vec::with_capacity(inst.m);
    for column in 0..inst.m {
        let sum: i64 = inst.a.iter().map(|row| row[column]).sum();
        if sum % p != 0 {
            return Err(Error::ColumnSumNotDivisible { column: column + 1, sum, p: inst.p });
        }
        last.push(sum / p);
    }
    let mut a = inst.a.clone();
    a[n - 1] = last;
    let mut d = inst.d.clone();
    d[n - 1] = d[n - 1].saturating_sub(1);
    OlsonInstance::zero_sum(inst.p, d, a)
}

/// Solves a zero-sum instance through [`reduce_even_sum`] and checks the
/// answer against the original rows.
pub fn solve_even_sum(inst: &OlsonInstance, engine: Engine) -> Result<Vec<usize>> {
    let reduced = reduce_even_sum(inst)?;
    let j = solve_olson(&reduced, engine)?;
    if !inst.is_solution(&j) {
        return Err(Error::PreconditionViolated(format!(
            "{j:?} solves the reduced instance but not the original"
        )));
    }
    Ok(j)
}

/// The instance with `σ(R_i)` columns of `−1` in row `i` (block diagonal) and
/// targets `Q_i = r_zero_set(R_i)`. It has no solution.
pub fn extremal_sequence(rs: &[Vec<u32>], p: u64, d: &[u32]) -> Result<OlsonInstance> {
    if rs.len() != d.len() {
        return Err(Error::InvalidArgument("one digit set per exponent is required".into()));
    }
    let widths: Vec<usize> = rs.iter().map(|r| sigma(r, p) as usize).collect();
    let m: usize = widths.iter().sum();
    let mut a = vec![vec![0i64; m]; rs.len()];
    let mut start = 0;
    for (row, &w) in a.iter_mut().zip(&widths) {
        row[start..start + w].iter_mut().for_each(|x| *x = -1);
        start += w;
    }
    let q = rs
        .iter()
        .zip(d)
        .map(|(r, &di)| r_zero_set(r, p, di))
        .collect::<Result<Vec<_>>>()?;
    OlsonInstance::new(p, d.to_vec(), a, q)
}

/// Elements of `Π Z_{p^{d_i}}` packed into one index, mixed radix.
struct Group {
    moduli: Vec<u64>,
    order: u64,
}

impl Group {
    fn add(&self, x: u64, y: u64) -> u64 {
        let (mut x, mut y, mut out, mut scale) = (x, y, 0, 1);
        for &q in &self.moduli {
            out += (x % q + y % q) % q * scale;
            x /= q;
            y /= q;
            scale *= q;
        }
        out
    }

    /// Bitset of `s + c` for every `s` in `set`.
    fn shift(&self, set: u64, c: u64) -> u64 {
        (0..self.order)
            .filter(|&x| set >> x & 1 == 1)
            .fold(0, |acc, x| acc | 1 << self.add(x, c))
    }
}

/// Exact `F(d, Q)`: the longest column sequence over `Π Z_{p^{d_i}}` with no
/// nonempty subset sum in `Π Q_i`, capped at `m_cap`.
///
/// The only thing a prefix passes on to its extensions is its set of nonempty
/// subset sums, so the search memoises on that set. Requires
/// `Π p^{d_i} ≤ 64`.
pub fn f_exact(p: u64, d: &[u32], q: &[ResidueSet], m_cap: usize) -> Result<usize> {
    ensure_prime(p)?;
    if d.len() != q.len() || d.is_empty() {
        return Err(Error::InvalidArgument("one target set per exponent is required".into()));
    }
    let mut moduli = Vec::with_capacity(d.len());
    let mut order = 1u64;
    for (&di, qi) in d.iter().zip(q) {
        let modulus = prime_power(p, di)?;
        if qi.p() != p || qi.d() != di {
            return Err(Error::InvalidArgument("target set modulus differs from p^d".into()));
        }
        if !qi.contains(0) {
            return Err(Error::ZeroMissing);
        }
        order = order
            .checked_mul(modulus)
            .filter(|&o| o <= MAX_EXACT_GROUP)
            .ok_or_else(|| Error::CapExceeded(format!("group order above {MAX_EXACT_GROUP}")))?;
        moduli.push(modulus);
    }
    let group = Group { moduli, order };
    let mut target = 0u64;
    for x in 0..order {
        let (mut rest, mut hit) = (x, true);
        for (&modulus, qi) in group.moduli.iter().zip(q) {
            hit &= qi.contains(rest % modulus);
            rest /= modulus;
        }
        if hit {
            target |= 1 << x;
        }
    }
    let mut memo = BTreeMap::new();
    Ok(longest(&group, target, 0, m_cap, &mut memo))
}

fn longest(group: &Group, target: u64, sums: u64, budget: usize, memo: &mut BTreeMap<u64, usize>) -> usize {
    if budget == 0 {
        return 0;
    }
    // Stored values were not truncated by the budget.
    if let Some(&best) = memo.get(&sums) {
        return best.min(budget);
    }
    let mut best = 0;
    for c in 0..group.order {
        let next = sums | 1 << c | group.shift(sums, c);
        if next & target == 0 {
            best = best.max(1 + longest(group, target, next, budget - 1, memo));
            if best == budget {
                break;
            }
        }
    }
    if best < budget {
        memo.insert(sums, best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(p: u64, d: u32) -> ResidueSet {
        ResidueSet::new(p, d, [0]).unwrap()
    }

    #[test]
    fn solve_examples() {
        let inst = OlsonInstance::zero_sum(2, vec![1], vec![vec![1, 1]]).unwrap();
        assert_eq!(solve_olson(&inst, Engine::Brute), Ok(vec![1, 2]));
        assert_eq!(solve_olson(&inst, Engine::Ppa), Ok(vec![1, 2]));

        let inst = OlsonInstance::zero_sum(2, vec![2], vec![vec![3, 3, 3]]).unwrap();
        assert_eq!(solve_olson(&inst, Engine::Brute), Err(Error::NoSolution));
        assert!(matches!(
            solve_olson(&inst, Engine::Ppa),
            Err(Error::DegreeBoundViolated { m: 3, degree: 3 })
        ));

        let inst = OlsonInstance::zero_sum(2, vec![2], vec![vec![1, 1, 1, 1]]).unwrap();
        assert_eq!(solve_olson(&inst, Engine::Brute), Ok(vec![1, 2, 3, 4]));
        assert_eq!(solve_olson(&inst, Engine::Ppa), Ok(vec![1, 2, 3, 4]));
    }

    #[test]
    fn ppa_needs_p_two() {
        let inst = OlsonInstance::zero_sum(3, vec![1], vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(solve_olson(&inst, Engine::Ppa), Err(Error::EngineUnsupported(3)));
        assert_eq!(solve_olson(&inst, Engine::Brute), Ok(vec![1, 2, 3]));
    }

    #[test]
    fn instance_validation() {
        assert!(OlsonInstance::zero_sum(2, vec![1, 2], vec![vec![1], vec![1]]).is_err());
        assert!(OlsonInstance::zero_sum(2, vec![1, 1], vec![vec![1], vec![1, 2]]).is_err());
        let q = vec![ResidueSet::new(2, 1, [1]).unwrap()];
        assert_eq!(OlsonInstance::new(2, vec![1], vec![vec![1]], q), Err(Error::ZeroMissing));
    }

    #[test]
    fn reduce_triangle() {
        let a = vec![vec![1, 0, 1], vec![1, 1, 0], vec![0, 1, 1]];
        let inst = OlsonInstance::zero_sum(2, vec![1, 1, 1], a).unwrap();
        let reduced = reduce_even_sum(&inst).unwrap();
        assert_eq!(reduced.a(), [vec![1, 0, 1], vec![1, 1, 0], vec![1, 1, 1]]);
        assert_eq!(reduced.d(), [1, 1, 0]);
        assert_eq!(solve_even_sum(&inst, Engine::Brute), Ok(vec![1, 2, 3]));
        assert_eq!(solve_even_sum(&inst, Engine::Ppa), Ok(vec![1, 2, 3]));
    }

    #[test]
    fn reduce_small_cases() {
        let inst = OlsonInstance::zero_sum(2, vec![1, 1], vec![vec![2], vec![2]]).unwrap();
        assert_eq!(reduce_even_sum(&inst).unwrap().a(), [vec![2], vec![2]]);
        let inst = OlsonInstance::zero_sum(2, vec![1, 1], vec![vec![1], vec![2]]).unwrap();
        assert_eq!(
            reduce_even_sum(&inst),
            Err(Error::ColumnSumNotDivisible { column: 1, sum: 3, p: 2 })
        );
    }

    #[test]
    fn extremal_examples() {
        let inst = extremal_sequence(&[vec![0, 1]], 2, &[2]).unwrap();
        assert_eq!(inst.a(), [vec![-1, -1, -1]]);
        assert_eq!(inst.q()[0], zero(2, 2));
        assert_eq!(solve_olson(&inst, Engine::Brute), Err(Error::NoSolution));

        let inst = extremal_sequence(&[vec![0], vec![0]], 2, &[1, 1]).unwrap();
        assert_eq!(inst.a(), [vec![-1, 0], vec![0, -1]]);
        assert_eq!(solve_olson(&inst, Engine::Brute), Err(Error::NoSolution));

        let inst = extremal_sequence(&[vec![]], 3, &[1]).unwrap();
        assert_eq!(inst.m(), 0);
        assert_eq!(solve_olson(&inst, Engine::Brute), Err(Error::NoSolution));
    }

    #[test]
    fn f_exact_examples() {
        assert_eq!(f_exact(2, &[1], &[zero(2, 1)], 10), Ok(1));
        assert_eq!(f_exact(2, &[2], &[zero(2, 2)], 10), Ok(3));
        let q = ResidueSet::new(2, 2, [0, 2]).unwrap();
        assert_eq!(f_exact(2, &[2], &[q], 10), Ok(1));
        assert_eq!(f_exact(3, &[1], &[zero(3, 1)], 10), Ok(2));
        assert_eq!(f_exact(2, &[1, 1], &[zero(2, 1), zero(2, 1)], 10), Ok(2));
        assert_eq!(f_exact(2, &[2], &[zero(2, 2)], 2), Ok(2));
        assert!(matches!(
            f_exact(3, &[4], &[zero(3, 4)], 10),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn kappa_bound_of_instance() {
        let inst = OlsonInstance::zero_sum(2, vec![2, 1], vec![vec![1], vec![1]]).unwrap();
        assert_eq!(inst.kappa_bound(), 4);
        assert_eq!(inst.residues(&[1]), [1, 1]);
        assert!(!inst.is_solution(&[]));
        assert!(!inst.is_solution(&[2]));
    }
}

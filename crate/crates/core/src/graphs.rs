//! Divisible and degree-constrained subgraphs of multigraphs.
//!
//! Vertices are `1..=n`; edge subsets are 1-based edge indices in increasing
//! order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{ensure_prime, next_prime_above, prime_power};
use crate::covering::{kappa, ResidueSet};
use crate::olson::{solve_even_sum, solve_olson, Engine, OlsonInstance};
use crate::{Error, Result};

/// A multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            if !(1..=n).contains(&u) || !(1..=n).contains(&v) {
                return Err(Error::InvalidArgument(format!("edge {u}-{v} leaves 1..={n}")));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Degree of every vertex in the subgraph made of `subset`, indexed
    /// `0..n`.
    pub fn degrees(&self, subset: &[usize]) -> Vec<u64> {
        let mut deg = vec![0u64; self.n];
        for &e in subset {
            let (u, v) = self.edges[e - 1];
            deg[u - 1] += 1;
            deg[v - 1] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> u64 {
        let all: Vec<usize> = (1..=self.m()).collect();
        self.degrees(&all).into_iter().max().unwrap_or(0)
    }

    /// Vertex-by-edge incidence matrix.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.m()]; self.n];
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            a[u - 1][j] = 1;
            a[v - 1][j] = 1;
        }
        a
    }

    fn check_subset(&self, subset: &[usize]) -> bool {
        !subset.is_empty() && subset.iter().all(|&e| (1..=self.m()).contains(&e))
    }
}

/// `f(n, p^d)`: for `p = 2`, `(2^d − 1)·n − 2^{d−1}`; otherwise `(p^d − 1)·n`.
pub fn threshold(n: u64, p: u64, d: u32) -> u64 {
    let q = p.pow(d);
    if p == 2 {
        (q - 1) * n - q / 2
    } else {
        (q - 1) * n
    }
}

/// `true` iff `subset` is nonempty and every degree in it is divisible by
/// `modulus`.
pub fn is_divisible_subgraph(g: &Graph, subset: &[usize], modulus: u64) -> bool {
    g.check_subset(subset) && g.degrees(subset).iter().all(|deg| deg % modulus == 0)
}

/// A nonempty edge set in which every degree is divisible by `2^d`. Requires
/// more than `f(n, 2^d)` edges.
pub fn divisible_subgraph(g: &Graph, d: u32, engine: Engine) -> Result<Vec<usize>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let modulus = prime_power(2, d)?;
    let bound = threshold(g.n as u64, 2, d);
    if g.m() as u64 <= bound || g.n == 0 {
        return Err(Error::PreconditionViolated(format!(
            "{} edges do not exceed the threshold {bound}",
            g.m()
        )));
    }
    let inst = OlsonInstance::zero_sum(2, vec![d; g.n], g.incidence())?;
    let subset = solve_even_sum(&inst, engine)?;
    if !is_divisible_subgraph(g, &subset, modulus) {
        return Err(Error::PreconditionViolated(format!("{subset:?} is not {modulus}-divisible")));
    }
    Ok(subset)
}

/// `true` iff `subset` is nonempty and no vertex degree lies in its
/// forbidden residues.
pub fn is_f_avoiding(g: &Graph, subset: &[usize], forbidden: &[ResidueSet]) -> bool {
    g.check_subset(subset)
        && forbidden.len() == g.n
        && g
            .degrees(subset)
            .iter()
            .zip(forbidden)
            .all(|(&deg, f)| !f.contains(deg % f.modulus()))
}

/// A nonempty edge set whose degrees avoid `F(v)` modulo `p^d`.
///
/// `Σ κ(F(v)) < |E|` guarantees a solution and is required by the ppa engine.
/// The brute engine searches regardless and reports `NoSolution` when none
/// exists.
pub fn f_avoiding_mod(
    g: &Graph,
    forbidden: &[ResidueSet],
    p: u64,
    d: u32,
    engine: Engine,
) -> Result<Vec<usize>> {
    ensure_prime(p)?;
    if forbidden.len() != g.n || g.n == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} forbidden sets for {} vertices",
            forbidden.len(),
            g.n
        )));
    }
    if let Some(f) = forbidden.iter().find(|f| f.p() != p || f.d() != d) {
        return Err(Error::InvalidArgument(format!(
            "forbidden set modulo {}^{}, expected {p}^{d}",
            f.p(),
            f.d()
        )));
    }
    if forbidden.iter().any(|f| f.contains(0)) {
        return Err(Error::ZeroInSet);
    }
    let bound: u64 = forbidden.iter().map(kappa).sum();
    if engine == Engine::Ppa && bound >= g.m() as u64 {
        return Err(Error::PreconditionViolated(format!(
            "{} edges do not exceed the bound {bound}",
            g.m()
        )));
    }
    let q = forbidden.iter().map(ResidueSet::complement).collect();
    let inst = OlsonInstance::new(p, vec![d; g.n], g.incidence(), q)?;
    let subset = solve_olson(&inst, engine)?;
    if !is_f_avoiding(g, &subset, forbidden) {
        return Err(Error::PreconditionViolated(format!("{subset:?} hits a forbidden degree")));
    }
    Ok(subset)
}

/// A nonempty edge set whose degrees avoid `F(v)` as natural numbers.
/// Requires `0 ∉ F(v)` and `Σ |F(v)| < |E|`.
///
/// Works modulo the smallest prime `p` above the maximum degree, where every
/// degree is its own residue. Forbidden values of `p` or more can never occur
/// and are dropped.
pub fn f_avoiding_natural(g: &Graph, forbidden: &[Vec<u64>], engine: Engine) -> Result<Vec<usize>> {
    if forbidden.len() != g.n || g.n == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} forbidden sets for {} vertices",
            forbidden.len(),
            g.n
        )));
    }
    if forbidden.iter().any(|f| f.contains(&0)) {
        return Err(Error::ZeroInSet);
    }
    let total: usize = forbidden
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            f.len()
        })
        .sum();
    if total >= g.m() {
        return Err(Error::PreconditionViolated(format!(
            "{} edges do not exceed Σ|F(v)| = {total}",
            g.m()
        )));
    }
    let p = next_prime_above(g.max_degree());
    let sets = forbidden
        .iter()
        .map(|f| ResidueSet::new(p, 1, f.iter().copied().filter(|&x| x < p)))
        .collect::<Result<Vec<_>>>()?;
    let subset = f_avoiding_mod(g, &sets, p, 1, engine)?;
    let ok = g
        .degrees(&subset)
        .iter()
        .zip(forbidden)
        .all(|(deg, f)| !f.contains(deg));
    if !ok {
        return Err(Error::PreconditionViolated(format!("{subset:?} hits a forbidden degree")));
    }
    Ok(subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn star() -> Graph {
        Graph::new(4, vec![(1, 2), (1, 3), (1, 4)]).unwrap()
    }

    fn none(n: usize, p: u64, d: u32) -> Vec<ResidueSet> {
        (0..n).map(|_| ResidueSet::empty(p, d).unwrap()).collect()
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(3, 2, 1), 2);
        assert_eq!(threshold(3, 3, 1), 6);
        assert_eq!(threshold(2, 2, 2), 4);
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(2, vec![(1, 1)]).is_err());
        assert!(Graph::new(2, vec![(1, 3)]).is_err());
        assert_eq!(Graph::new(2, vec![(1, 2), (2, 1)]).unwrap().max_degree(), 2);
    }

    #[test]
    fn divisible_examples() {
        for engine in [Engine::Brute, Engine::Ppa] {
            assert_eq!(divisible_subgraph(&triangle(), 1, engine), Ok(vec![1, 2, 3]));
            let fan = Graph::new(2, vec![(1, 2); 5]).unwrap();
            let f = divisible_subgraph(&fan, 2, engine).unwrap();
            assert_eq!(f.len(), 4);
            let path = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
            assert!(matches!(
                divisible_subgraph(&path, 1, engine),
                Err(Error::PreconditionViolated(_))
            ));
        }
    }

    #[test]
    fn f_avoiding_mod_examples() {
        let mut f = none(4, 2, 1);
        f[0] = ResidueSet::new(2, 1, [1]).unwrap();
        let e = f_avoiding_mod(&star(), &f, 2, 1, Engine::Brute).unwrap();
        assert_eq!(e.len(), 2);

        assert_eq!(f_avoiding_mod(&star(), &none(4, 2, 1), 2, 1, Engine::Brute), Ok(vec![1]));

        let odd: Vec<ResidueSet> = (0..3).map(|_| ResidueSet::new(2, 1, [1]).unwrap()).collect();
        assert_eq!(f_avoiding_mod(&triangle(), &odd, 2, 1, Engine::Brute), Ok(vec![1, 2, 3]));
        assert!(matches!(
            f_avoiding_mod(&triangle(), &odd, 2, 1, Engine::Ppa),
            Err(Error::PreconditionViolated(_))
        ));
        let path = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        assert_eq!(f_avoiding_mod(&path, &odd, 2, 1, Engine::Brute), Err(Error::NoSolution));

        let mut bad = none(3, 2, 1);
        bad[0] = ResidueSet::new(2, 1, [0]).unwrap();
        assert_eq!(f_avoiding_mod(&triangle(), &bad, 2, 1, Engine::Brute), Err(Error::ZeroInSet));
    }

    #[test]
    fn f_avoiding_natural_examples() {
        let e = f_avoiding_natural(&star(), &[vec![1], vec![], vec![], vec![]], Engine::Brute).unwrap();
        let center = star().degrees(&e)[0];
        assert!(center == 2 || center == 3);

        let edge = Graph::new(2, vec![(1, 2)]).unwrap();
        assert_eq!(f_avoiding_natural(&edge, &[vec![], vec![]], Engine::Brute), Ok(vec![1]));

        let e = f_avoiding_natural(&triangle(), &[vec![2], vec![], vec![]], Engine::Brute).unwrap();
        assert!(triangle().degrees(&e)[0] <= 1);

        assert!(matches!(
            f_avoiding_natural(&edge, &[vec![1], vec![]], Engine::Brute),
            Err(Error::PreconditionViolated(_))
        ));
    }
}

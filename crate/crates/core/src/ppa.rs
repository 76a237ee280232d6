//! End-of-the-Line graph for `f = Σ_i Π_j p_ij` over `F_2`.
//!
//! The graph is bipartite. One side holds every point of `{0,1}^m` plus the
//! standard leaf `w`; the other side holds every term occurrence, written as a
//! tuple `(i, a_i1, …, a_im_i)` choosing one monomial of each `p_ij` in block
//! `i`. A point and a term are adjacent when the term is 1 at the point; `w` is
//! adjacent to the occurrences of `x_1⋯x_m`. Odd-degree nodes are `w` and the
//! points where `f ≠ 0`.
//!
//! [`mate`] pairs the edges at a node, leaving exactly one edge unmatched at
//! odd-degree nodes. All unspecified sub-pairings pair the relevant indices
//! consecutively in increasing order (1st with 2nd, 3rd with 4th, …), the last
//! one being left over when the count is odd.
//!
//! Indices are 0-based in memory and 1-based when displayed or parsed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lift::{interpolate_mod, IntMultiPoly};
use crate::monomial::{full_mask, Monomial, MAX_VARS};
use crate::{Error, Result};

/// Most blocks in one instance.
pub const MAX_BLOCKS: usize = 1 << 12;
/// Most polynomials in one block.
pub const MAX_FACTORS: usize = 1 << 12;
/// Most listed monomials in one polynomial.
pub const MAX_MONOMIALS: usize = 1 << 16;
/// Largest `m` accepted by [`enumerate_graph`] and [`neighbors`].
pub const MAX_ENUM_VARS: usize = 12;
/// Most term occurrences [`enumerate_graph`] will list.
pub const MAX_ENUM_TERMS: usize = 1 << 20;

/// An explicitly listed polynomial over `F_2`. Listing order fixes the
/// monomial indices; repeats are allowed and count as separate monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExplicitPoly {
    monomials: Vec<Monomial>,
}

impl ExplicitPoly {
    pub fn new(monomials: Vec<Monomial>) -> Self {
        ExplicitPoly { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: u64) -> bool {
        self.monomials.iter().filter(|t| t.eval(point)).count() % 2 == 1
    }

    /// Indices of the monomials equal to 1 at `point`, increasing.
    fn ones_at(&self, point: u64) -> Vec<usize> {
        (0..self.monomials.len())
            .filter(|&k| self.monomials[k].eval(point))
            .collect()
    }
}

impl fmt::Display for ExplicitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.monomials.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// One term occurrence: block index and the chosen monomial of each factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermTuple {
    pub block: usize,
    pub choice: Vec<usize>,
}

impl TermTuple {
    pub fn new(block: usize, choice: Vec<usize>) -> Self {
        TermTuple { block, choice }
    }

    /// From the 1-based notation `(i, a_i1, …)`.
    pub fn from_one_based(block: usize, choice: &[usize]) -> Result<Self> {
        if block == 0 || choice.contains(&0) {
            return Err(Error::MalformedNode("tuple indices are 1-based".into()));
        }
        Ok(TermTuple {
            block: block - 1,
            choice: choice.iter().map(|a| a - 1).collect(),
        })
    }
}

impl fmt::Display for TermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.block + 1)?;
        for a in &self.choice {
            write!(f, ",{}", a + 1)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// The standard leaf `w`.
    Leaf,
    /// A point of `{0,1}^m`; bit `j` is `x_{j+1}`.
    Vector(u64),
    Term(TermTuple),
}

impl Node {
    /// Renders vectors as `(x_1,…,x_m)`, terms as their tuple and the leaf as
    /// `w`.
    pub fn display(&self, m: usize) -> String {
        match self {
            Node::Leaf => "w".into(),
            Node::Vector(point) => {
                let coords: Vec<String> =
                    (0..m).map(|j| format!("{}", point >> j & 1)).collect();
                format!("({})", coords.join(","))
            }
            Node::Term(t) => format!("{t}"),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Node::Leaf => "leaf",
            Node::Vector(_) => "vector",
            Node::Term(_) => "term",
        }
    }
}

/// `x_1 … x_m` as a bit string, `x_1` first.
pub fn bit_string(point: u64, m: usize) -> String {
    (0..m).map(|j| if point >> j & 1 == 1 { '1' } else { '0' }).collect()
}

/// How the occurrences of `x_1⋯x_m` are paired at the standard leaf.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FullPairing {
    pub pairs: Vec<(TermTuple, TermTuple)>,
    pub leftover: Option<TermTuple>,
}

/// Why an instance is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `Σ_j deg(p_ij) > m` in this block.
    BlockDegree { block: usize, degree: usize, m: usize },
    /// Two occurrences of the full monomial the pairing does not handle.
    PairingFails { first: TermTuple, second: TermTuple },
    /// The pairing lists a tuple that is not an occurrence of the full
    /// monomial.
    NotFullOccurrence(TermTuple),
    /// The pairing lists the same occurrence twice.
    RepeatedInPairing(TermTuple),
    /// No occurrence is designated as unmatched.
    MissingLeftover,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::BlockDegree { block, degree, m } => {
                write!(f, "block {} has degree {degree} > {m}", block + 1)
            }
            Certificate::PairingFails { first, second } => {
                write!(f, "occurrences {first} and {second} of the full monomial are unpaired")
            }
            Certificate::NotFullOccurrence(t) => {
                write!(f, "{t} is not an occurrence of the full monomial")
            }
            Certificate::RepeatedInPairing(t) => write!(f, "{t} appears twice in the pairing"),
            Certificate::MissingLeftover => f.write_str("no unmatched full-monomial occurrence"),
        }
    }
}

/// `f = Σ_i Π_j p_ij` over `F_2` with its full-monomial pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralFormPoly {
    m: usize,
    blocks: Vec<Vec<ExplicitPoly>>,
    pairing: FullPairing,
}

impl GeneralFormPoly {
    /// Checks shapes and size caps only; the degree and pairing conditions
    /// are reported by [`validate_instance`].
    pub fn new(m: usize, blocks: Vec<Vec<ExplicitPoly>>, pairing: FullPairing) -> Result<Self> {
        if m == 0 || m > MAX_VARS {
            return Err(Error::InvalidArgument(format!("m = {m} outside 1..={MAX_VARS}")));
        }
        if blocks.len() > MAX_BLOCKS {
            return Err(Error::CapExceeded(format!("{} blocks", blocks.len())));
        }
        for block in &blocks {
            if block.len() > MAX_FACTORS {
                return Err(Error::CapExceeded(format!("{} factors in a block", block.len())));
            }
            for p in block {
                if p.monomials.len() > MAX_MONOMIALS {
                    return Err(Error::CapExceeded(format!("{} monomials", p.monomials.len())));
                }
                if let Some(t) = p.monomials.iter().find(|t| !t.fits(m)) {
                    return Err(Error::InvalidArgument(format!("{t} uses a variable beyond x{m}")));
                }
            }
        }
        Ok(GeneralFormPoly { m, blocks, pairing })
    }

    /// Pairs the full-monomial occurrences consecutively in tuple order and
    /// designates the last one as the leftover.
    pub fn with_consecutive_full_pairing(m: usize, blocks: Vec<Vec<ExplicitPoly>>) -> Result<Self> {
        let mut inst = Self::new(m, blocks, FullPairing::default())?;
        if let Some(cert) = inst.degree_certificate() {
            return Err(Error::InvalidInstance(cert));
        }
        let occ = inst.full_occurrences();
        if occ.len() % 2 == 0 {
            return Err(Error::InvalidInstance(match occ.as_slice() {
                [] => Certificate::MissingLeftover,
                [first, second, ..] => Certificate::PairingFails {
                    first: first.clone(),
                    second: second.clone(),
                },
                _ => unreachable!(),
            }));
        }
        let mut it = occ.into_iter();
        let mut pairs = Vec::new();
        let leftover = loop {
            match (it.next(), it.next()) {
                (Some(a), Some(b)) => pairs.push((a, b)),
                (last, _) => break last,
            }
        };
        inst.pairing = FullPairing { pairs, leftover };
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<ExplicitPoly>] {
        &self.blocks
    }

    pub fn pairing(&self) -> &FullPairing {
        &self.pairing
    }

    pub fn block_value(&self, block: usize, point: u64) -> bool {
        self.blocks[block].iter().all(|p| p.eval(point))
    }

    pub fn eval(&self, point: u64) -> bool {
        (0..self.blocks.len()).filter(|&i| self.block_value(i, point)).count() % 2 == 1
    }

    fn full(&self) -> Monomial {
        Monomial::full(self.m)
    }

    fn check_tuple(&self, t: &TermTuple) -> Result<()> {
        let block = self
            .blocks
            .get(t.block)
            .ok_or_else(|| Error::MalformedNode(format!("{t}: no block {}", t.block + 1)))?;
        if block.len() != t.choice.len() {
            return Err(Error::MalformedNode(format!(
                "{t}: block {} has {} factors",
                t.block + 1,
                block.len()
            )));
        }
        for (p, &a) in block.iter().zip(&t.choice) {
            if a >= p.monomials.len() {
                return Err(Error::MalformedNode(format!("{t}: index {} out of range", a + 1)));
            }
        }
        Ok(())
    }

    fn check_node(&self, node: &Node) -> Result<()> {
        match node {
            Node::Leaf => Ok(()),
            Node::Vector(point) if point & !full_mask(self.m) == 0 => Ok(()),
            Node::Vector(point) => Err(Error::MalformedNode(format!(
                "vector {point:#x} has more than {} coordinates",
                self.m
            ))),
            Node::Term(t) => self.check_tuple(t),
        }
    }

    /// Product of the chosen monomials.
    pub fn term_monomial(&self, t: &TermTuple) -> Result<Monomial> {
        self.check_tuple(t)?;
        Ok(self.monomial_of(t))
    }

    fn monomial_of(&self, t: &TermTuple) -> Monomial {
        self.blocks[t.block]
            .iter()
            .zip(&t.choice)
            .fold(Monomial::ONE, |acc, (p, &a)| acc * p.monomials[a])
    }

    fn degree_certificate(&self) -> Option<Certificate> {
        self.blocks.iter().enumerate().find_map(|(block, ps)| {
            let degree: usize = ps.iter().map(ExplicitPoly::degree).sum();
            (degree > self.m).then_some(Certificate::BlockDegree { block, degree, m: self.m })
        })
    }

    /// Every tuple whose monomial is `x_1⋯x_m`, in increasing tuple order.
    ///
    /// Assumes every block has degree at most `m`: a full occurrence then needs
    /// a top-degree monomial from each factor, pairwise disjoint, which keeps
    /// the search small.
    pub fn full_occurrences(&self) -> Vec<TermTuple> {
        let mut out = Vec::new();
        for (i, block) in self.blocks.iter().enumerate() {
            let degree: usize = block.iter().map(ExplicitPoly::degree).sum();
            if degree != self.m {
                continue;
            }
            let candidates: Vec<Vec<usize>> = block
                .iter()
                .map(|p| {
                    let top = p.degree();
                    (0..p.monomials.len())
                        .filter(|&k| p.monomials[k].degree() == top)
                        .collect()
                })
                .collect();
            let mut choice = Vec::with_capacity(block.len());
            self.disjoint_choices(i, &candidates, 0, &mut choice, &mut out);
        }
        out
    }

    fn disjoint_choices(
        &self,
        block: usize,
        candidates: &[Vec<usize>],
        used: u64,
        choice: &mut Vec<usize>,
        out: &mut Vec<TermTuple>,
    ) {
        let j = choice.len();
        if j == candidates.len() {
            out.push(TermTuple::new(block, choice.clone()));
            return;
        }
        for &k in &candidates[j] {
            let bits = self.blocks[block][j].monomials[k].bits();
            if bits & used == 0 {
                choice.push(k);
                self.disjoint_choices(block, candidates, used | bits, choice, out);
                choice.pop();
            }
        }
    }

    /// Expands `f` into an explicit multilinear polynomial with coefficients
    /// in `{0, 1}`.
    pub fn expand(&self) -> Result<IntMultiPoly> {
        interpolate_mod(self.m, 2, |s| u64::from(self.eval(s)))
    }
}

/// Checks the block degree condition and that the full-monomial pairing is a
/// perfect pairing of all occurrences but one.
pub fn validate_instance(inst: &GeneralFormPoly) -> core::result::Result<(), Certificate> {
    if let Some(cert) = inst.degree_certificate() {
        return Err(cert);
    }
    let occurrences: BTreeSet<TermTuple> = inst.full_occurrences().into_iter().collect();
    let mut seen = BTreeSet::new();
    let listed = inst
        .pairing
        .pairs
        .iter()
        .flat_map(|(a, b)| [a, b])
        .chain(inst.pairing.leftover.iter());
    for t in listed {
        if !occurrences.contains(t) {
            return Err(Certificate::NotFullOccurrence(t.clone()));
        }
        if !seen.insert(t.clone()) {
            return Err(Certificate::RepeatedInPairing(t.clone()));
        }
    }
    let mut unpaired = occurrences.difference(&seen);
    match (unpaired.next(), unpaired.next(), &inst.pairing.leftover) {
        (Some(a), Some(b), _) => Err(Certificate::PairingFails {
            first: a.clone(),
            second: b.clone(),
        }),
        (Some(a), None, Some(left)) => Err(Certificate::PairingFails {
            first: a.clone(),
            second: left.clone(),
        }),
        (_, _, None) => Err(Certificate::MissingLeftover),
        (None, _, Some(_)) => Ok(()),
    }
}

/// Adjacency in the End-of-the-Line graph.
pub fn is_edge(inst: &GeneralFormPoly, u: &Node, v: &Node) -> Result<bool> {
    inst.check_node(u)?;
    inst.check_node(v)?;
    Ok(match (u, v) {
        (Node::Vector(x), Node::Term(t)) | (Node::Term(t), Node::Vector(x)) => {
            inst.monomial_of(t).eval(*x)
        }
        (Node::Leaf, Node::Term(t)) | (Node::Term(t), Node::Leaf) => inst.monomial_of(t) == inst.full(),
        _ => false,
    })
}

/// The pairing function: the neighbour of `v` paired with `w`, or `None` when
/// the edge `vw` is the unmatched edge of `v`.
pub fn mate(inst: &GeneralFormPoly, v: &Node, w: &Node) -> Result<Option<Node>> {
    if !is_edge(inst, v, w)? {
        return Err(Error::NotIncident);
    }
    match (v, w) {
        (Node::Term(t), _) => Ok(Some(mate_at_term(inst, t, w))),
        (Node::Leaf, Node::Term(t)) => mate_at_leaf(inst, t),
        (Node::Vector(x), Node::Term(t)) => Ok(mate_at_vector(inst, *x, t)),
        _ => Err(Error::NotIncident),
    }
}

fn mate_at_term(inst: &GeneralFormPoly, t: &TermTuple, w: &Node) -> Node {
    let mono = inst.monomial_of(t);
    let full = inst.full();
    if mono == full {
        return match w {
            Node::Leaf => Node::Vector(full.bits()),
            _ => Node::Leaf,
        };
    }
    let Node::Vector(x) = w else {
        unreachable!("a term that is not the full monomial only meets vectors")
    };
    let l = (0..inst.m).find(|&j| mono.bits() >> j & 1 == 0).unwrap_or(0);
    Node::Vector(x ^ (1 << l))
}

fn mate_at_leaf(inst: &GeneralFormPoly, t: &TermTuple) -> Result<Option<Node>> {
    if inst.pairing.leftover.as_ref() == Some(t) {
        return Ok(None);
    }
    for (a, b) in &inst.pairing.pairs {
        if a == t {
            return Ok(Some(Node::Term(b.clone())));
        }
        if b == t {
            return Ok(Some(Node::Term(a.clone())));
        }
    }
    Err(Error::InvalidInstance(match &inst.pairing.leftover {
        Some(left) => Certificate::PairingFails { first: t.clone(), second: left.clone() },
        None => Certificate::MissingLeftover,
    }))
}

/// Consecutive partner of `a` within the increasing list `ones`.
fn consecutive_mate(ones: &[usize], a: usize) -> Option<usize> {
    let pos = ones.iter().position(|&k| k == a)?;
    ones.get(pos ^ 1).copied()
}

/// The unmatched monomial of each factor of a block that is 1 at `x`.
fn omega(inst: &GeneralFormPoly, block: usize, x: u64) -> Vec<usize> {
    inst.blocks[block]
        .iter()
        .map(|p| *p.ones_at(x).last().expect("factor is 1 at x"))
        .collect()
}

fn mate_at_vector(inst: &GeneralFormPoly, x: u64, t: &TermTuple) -> Option<Node> {
    let block = &inst.blocks[t.block];
    let replace = |j: usize, k: usize| {
        let mut choice = t.choice.clone();
        choice[j] = k;
        Some(Node::Term(TermTuple::new(t.block, choice)))
    };

    // Block is 0 at x: pair within the first factor that vanishes.
    if let Some(j) = block.iter().position(|p| !p.eval(x)) {
        let ones = block[j].ones_at(x);
        let k = consecutive_mate(&ones, t.choice[j]).expect("even number of ones");
        return replace(j, k);
    }

    // Block is 1 at x: pair within the first factor off its leftover, else
    // jump to the partner block's leftover tuple.
    let omegas = omega(inst, t.block, x);
    if let Some(j) = (0..block.len()).find(|&j| t.choice[j] != omegas[j]) {
        let ones = block[j].ones_at(x);
        let k = consecutive_mate(&ones, t.choice[j]).expect("index is not the leftover");
        return replace(j, k);
    }
    let live: Vec<usize> = (0..inst.blocks.len()).filter(|&i| inst.block_value(i, x)).collect();
    let partner = consecutive_mate(&live, t.block)?;
    Some(Node::Term(TermTuple::new(partner, omega(inst, partner, x))))
}

/// Result of [`follow_path`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReport {
    /// The terminal point, with `f ≠ 0` there.
    pub solution: u64,
    /// Every node visited, starting at the standard leaf.
    pub nodes: Vec<Node>,
}

impl PathReport {
    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }
}

/// `2^{m+4}`, saturating.
pub fn default_step_cap(m: usize) -> u64 {
    1u64.checked_shl((m + 4) as u32).unwrap_or(u64::MAX)
}

/// `(number of term tuples)·(2^m + 1)`, saturating. Each term meets at most
/// `2^m` vectors and the leaf, and a path uses every edge at most once.
pub fn edge_count_bound(inst: &GeneralFormPoly) -> u64 {
    let terms = inst.blocks.iter().fold(0u64, |acc, block| {
        let count = block
            .iter()
            .fold(1u64, |c, p| c.saturating_mul(p.monomials.len() as u64));
        acc.saturating_add(count)
    });
    let per_term = 1u64.checked_shl(inst.m as u32).unwrap_or(u64::MAX).saturating_add(1);
    terms.saturating_mul(per_term)
}

/// Walks from the standard leaf along its unmatched edge, leaving each node by
/// the mate of the edge it arrived on, until an unmatched edge ends the walk.
pub fn follow_path(inst: &GeneralFormPoly, step_cap: Option<u64>) -> Result<PathReport> {
    follow_path_with(inst, step_cap, |_, _, _| {})
}

/// [`follow_path`], reporting every `(node, arrived from, departs to)` step.
pub fn follow_path_with(
    inst: &GeneralFormPoly,
    step_cap: Option<u64>,
    mut on_step: impl FnMut(&Node, &Node, Option<&Node>),
) -> Result<PathReport> {
    validate_instance(inst).map_err(Error::InvalidInstance)?;
    let cap = step_cap.unwrap_or_else(|| default_step_cap(inst.m));
    let start = inst
        .pairing
        .leftover
        .clone()
        .ok_or(Error::InvalidInstance(Certificate::MissingLeftover))?;
    let mut nodes = vec![Node::Leaf, Node::Term(start)];
    let mut steps = 1u64;
    loop {
        let [.., prev, cur] = nodes.as_slice() else { unreachable!() };
        let next = mate(inst, cur, prev)?;
        on_step(cur, prev, next.as_ref());
        let Some(next) = next else {
            return match cur {
                Node::Vector(x) => Ok(PathReport { solution: *x, nodes }),
                _ => Err(Error::PairingBroken(steps)),
            };
        };
        // The walk can only revisit an arrival state if the pairing fails
        // to be an involution.
        if mate(inst, cur, &next)?.as_ref() != Some(prev) {
            return Err(Error::PairingBroken(steps));
        }
        steps += 1;
        if steps > cap {
            return Err(Error::StepCapExceeded(cap));
        }
        nodes.push(next);
    }
}

/// Degrees of every node, by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCensus {
    pub m: usize,
    /// Indexed by the point mask.
    pub vector_degrees: Vec<u64>,
    pub terms: Vec<(TermTuple, u64)>,
    pub leaf_degree: u64,
}

impl GraphCensus {
    pub fn degree(&self, node: &Node) -> Option<u64> {
        match node {
            Node::Leaf => Some(self.leaf_degree),
            Node::Vector(x) => self.vector_degrees.get(*x as usize).copied(),
            Node::Term(t) => self.terms.iter().find(|(u, _)| u == t).map(|(_, d)| *d),
        }
    }

    /// Leaf first, then vectors by mask, then terms in tuple order.
    pub fn odd_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        if self.leaf_degree % 2 == 1 {
            out.push(Node::Leaf);
        }
        out.extend(
            self.vector_degrees
                .iter()
                .enumerate()
                .filter(|(_, d)| *d % 2 == 1)
                .map(|(x, _)| Node::Vector(x as u64)),
        );
        out.extend(
            self.terms
                .iter()
                .filter(|(_, d)| d % 2 == 1)
                .map(|(t, _)| Node::Term(t.clone())),
        );
        out
    }
}

/// Every term occurrence, in increasing tuple order.
pub fn all_terms(inst: &GeneralFormPoly) -> Result<Vec<TermTuple>> {
    let mut out = Vec::new();
    for (i, block) in inst.blocks.iter().enumerate() {
        let count = block
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.monomials.len()))
            .filter(|&c| out.len() + c <= MAX_ENUM_TERMS)
            .ok_or_else(|| Error::CapExceeded(format!("more than {MAX_ENUM_TERMS} terms")))?;
        for mut index in 0..count {
            let mut choice = vec![0; block.len()];
            for (j, p) in block.iter().enumerate().rev() {
                choice[j] = index % p.monomials.len();
                index /= p.monomials.len();
            }
            out.push(TermTuple::new(i, choice));
        }
    }
    Ok(out)
}

/// Counts every edge of the graph; an oracle for the pairing.
pub fn enumerate_graph(inst: &GeneralFormPoly) -> Result<GraphCensus> {
    let m = inst.m;
    if m > MAX_ENUM_VARS {
        return Err(Error::CapExceeded(format!("m = {m} > {MAX_ENUM_VARS}")));
    }
    let full = inst.full();
    let mut per_monomial = vec![0u64; 1 << m];
    let mut terms = Vec::new();
    let mut leaf_degree = 0;
    for t in all_terms(inst)? {
        let mono = inst.monomial_of(&t);
        per_monomial[mono.bits() as usize] += 1;
        let mut degree = 1u64 << (m - mono.degree());
        if mono == full {
            degree += 1;
            leaf_degree += 1;
        }
        terms.push((t, degree));
    }
    // A vector meets every term whose monomial it contains.
    let mut vector_degrees = per_monomial;
    for j in 0..m {
        for s in 0..vector_degrees.len() {
            if s >> j & 1 == 1 {
                vector_degrees[s] += vector_degrees[s ^ (1 << j)];
            }
        }
    }
    Ok(GraphCensus { m, vector_degrees, terms, leaf_degree })
}

/// Every neighbour of `node`, by enumeration.
pub fn neighbors(inst: &GeneralFormPoly, node: &Node) -> Result<Vec<Node>> {
    inst.check_node(node)?;
    if inst.m > MAX_ENUM_VARS {
        return Err(Error::CapExceeded(format!("m = {} > {MAX_ENUM_VARS}", inst.m)));
    }
    let full = inst.full();
    Ok(match node {
        Node::Leaf => inst.full_occurrences().into_iter().map(Node::Term).collect(),
        Node::Term(t) => {
            let mono = inst.monomial_of(t);
            let mut out: Vec<Node> = (0..1u64 << inst.m)
                .filter(|&x| mono.eval(x))
                .map(Node::Vector)
                .collect();
            if mono == full {
                out.push(Node::Leaf);
            }
            out
        }
        Node::Vector(x) => {
            let mut out = Vec::new();
            for (i, block) in inst.blocks.iter().enumerate() {
                let ones: Vec<Vec<usize>> = block.iter().map(|p| p.ones_at(*x)).collect();
                if ones.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut idx = vec![0usize; block.len()];
                loop {
                    let choice = idx.iter().zip(&ones).map(|(&k, o)| o[k]).collect();
                    out.push(Node::Term(TermTuple::new(i, choice)));
                    let Some(j) = (0..idx.len()).rev().find(|&j| idx[j] + 1 < ones[j].len()) else {
                        break;
                    };
                    idx[j] += 1;
                    idx[j + 1..].iter_mut().for_each(|k| *k = 0);
                }
            }
            out
        }
    })
}

/// Groups full occurrences by block; handy for reports.
pub fn full_occurrences_by_block(inst: &GeneralFormPoly) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for t in inst.full_occurrences() {
        *out.entry(t.block).or_default() += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars).unwrap()
    }

    fn tuple(block: usize, choice: &[usize]) -> TermTuple {
        TermTuple::from_one_based(block, choice).unwrap()
    }

    fn term(block: usize, choice: &[usize]) -> Node {
        Node::Term(tuple(block, choice))
    }

    /// One block: x1 · (x2 + 1).
    fn worked() -> GeneralFormPoly {
        let blocks = vec![vec![
            ExplicitPoly::new(vec![x(&[1])]),
            ExplicitPoly::new(vec![x(&[2]), Monomial::ONE]),
        ]];
        let pairing = FullPairing { pairs: vec![], leftover: Some(tuple(1, &[1, 1])) };
        GeneralFormPoly::new(2, blocks, pairing).unwrap()
    }

    #[test]
    fn edges_of_worked_example() {
        let g = worked();
        assert_eq!(g.term_monomial(&tuple(1, &[1, 1])), Ok(x(&[1, 2])));
        assert_eq!(is_edge(&g, &term(1, &[1, 1]), &Node::Vector(0b11)), Ok(true));
        assert_eq!(is_edge(&g, &term(1, &[1, 2]), &Node::Vector(0b10)), Ok(false));
        assert_eq!(is_edge(&g, &term(1, &[1, 1]), &Node::Leaf), Ok(true));
        assert_eq!(is_edge(&g, &term(1, &[1, 2]), &Node::Leaf), Ok(false));
        assert!(matches!(
            is_edge(&g, &term(1, &[1, 3]), &Node::Leaf),
            Err(Error::MalformedNode(_))
        ));
        assert!(matches!(
            is_edge(&g, &term(2, &[1, 1]), &Node::Leaf),
            Err(Error::MalformedNode(_))
        ));
    }

    #[test]
    fn mates_of_worked_example() {
        let g = worked();
        assert_eq!(
            mate(&g, &Node::Vector(0b11), &term(1, &[1, 1])),
            Ok(Some(term(1, &[1, 2])))
        );
        assert_eq!(
            mate(&g, &term(1, &[1, 2]), &Node::Vector(0b11)),
            Ok(Some(Node::Vector(0b01)))
        );
        assert_eq!(mate(&g, &Node::Vector(0b01), &term(1, &[1, 2])), Ok(None));
        assert_eq!(mate(&g, &Node::Leaf, &term(1, &[1, 1])), Ok(None));
        assert_eq!(
            mate(&g, &Node::Vector(0b10), &term(1, &[1, 2])),
            Err(Error::NotIncident)
        );
    }

    #[test]
    fn worked_example_path() {
        let report = follow_path(&worked(), None).unwrap();
        assert_eq!(report.solution, 0b01);
        assert_eq!(report.len(), 4);
        let shown: Vec<String> = report.nodes.iter().map(|n| n.display(2)).collect();
        assert_eq!(shown, ["w", "(1,1,1)", "(1,1)", "(1,1,2)", "(1,0)"]);
    }

    #[test]
    fn single_variable_path() {
        let blocks = vec![vec![ExplicitPoly::new(vec![x(&[1])])]];
        let g = GeneralFormPoly::with_consecutive_full_pairing(1, blocks).unwrap();
        assert_eq!(follow_path(&g, None).unwrap().solution, 1);
    }

    #[test]
    fn validation_certificates() {
        assert_eq!(validate_instance(&worked()), Ok(()));

        let blocks = vec![vec![
            ExplicitPoly::new(vec![x(&[1, 2])]),
            ExplicitPoly::new(vec![x(&[1, 2])]),
        ]];
        let g = GeneralFormPoly::new(2, blocks, FullPairing::default()).unwrap();
        assert_eq!(
            validate_instance(&g),
            Err(Certificate::BlockDegree { block: 0, degree: 4, m: 2 })
        );
        assert!(matches!(follow_path(&g, None), Err(Error::InvalidInstance(_))));

        // x1x2 + x1x2 in two blocks, nothing paired.
        let blocks = vec![
            vec![ExplicitPoly::new(vec![x(&[1, 2])])],
            vec![ExplicitPoly::new(vec![x(&[1]), x(&[2])]), ExplicitPoly::new(vec![x(&[2])])],
        ];
        let g = GeneralFormPoly::new(2, blocks.clone(), FullPairing::default()).unwrap();
        assert_eq!(
            validate_instance(&g),
            Err(Certificate::PairingFails { first: tuple(1, &[1]), second: tuple(2, &[1, 1]) })
        );
        let g = GeneralFormPoly::new(
            2,
            blocks,
            FullPairing { pairs: vec![], leftover: Some(tuple(2, &[2, 1])) },
        )
        .unwrap();
        assert_eq!(
            validate_instance(&g),
            Err(Certificate::NotFullOccurrence(tuple(2, &[2, 1])))
        );
    }

    #[test]
    fn census_of_worked_example() {
        let g = worked();
        let census = enumerate_graph(&g).unwrap();
        assert_eq!(census.odd_nodes(), [Node::Leaf, Node::Vector(0b01)]);
        assert_eq!(census.degree(&term(1, &[1, 1])), Some(2));
        assert_eq!(census.degree(&term(1, &[1, 2])), Some(2));
    }

    #[test]
    fn census_of_product() {
        let blocks = vec![vec![ExplicitPoly::new(vec![x(&[1])]), ExplicitPoly::new(vec![x(&[2])])]];
        let g = GeneralFormPoly::with_consecutive_full_pairing(2, blocks).unwrap();
        let census = enumerate_graph(&g).unwrap();
        assert_eq!(census.odd_nodes(), [Node::Leaf, Node::Vector(0b11)]);
    }

    #[test]
    fn pairing_is_an_involution_on_worked_example() {
        let g = worked();
        let census = enumerate_graph(&g).unwrap();
        let mut nodes = vec![Node::Leaf];
        nodes.extend((0..4).map(Node::Vector));
        nodes.extend(all_terms(&g).unwrap().into_iter().map(Node::Term));
        for v in &nodes {
            let mut unmatched = 0;
            for w in neighbors(&g, v).unwrap() {
                match mate(&g, v, &w).unwrap() {
                    Some(u) => assert_eq!(mate(&g, v, &u).unwrap(), Some(w)),
                    None => unmatched += 1,
                }
            }
            assert_eq!(unmatched, census.degree(v).unwrap() % 2);
        }
    }

    #[test]
    fn expand_worked_example() {
        let f = worked().expand().unwrap();
        // x1(x2 + 1) = x1x2 + x1
        assert_eq!(f.term_count(), 2);
        assert_eq!(f.coeff(x(&[1, 2])), 1.into());
        assert_eq!(f.coeff(x(&[1])), 1.into());
    }

    #[test]
    fn step_cap() {
        assert!(matches!(
            follow_path(&worked(), Some(2)),
            Err(Error::StepCapExceeded(2))
        ));
        assert_eq!(default_step_cap(2), 64);
        assert_eq!(bit_string(0b01, 2), "10");
    }
}

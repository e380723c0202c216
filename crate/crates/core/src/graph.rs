//! Weighted social graphs.
//!
//! Edge weights are stored as integers scaled by `10^k`, where `k` is the
//! largest number of decimal digits among the input weights. Every cut and
//! cutwidth comparison is therefore exact.

use std::collections::BTreeSet;
use std::fmt;

use rust_decimal::Decimal;

use crate::error::{check_limit, Error, Result};
use crate::rational::{decimal_parts, pow10, Rational, MAX_DECIMAL_DIGITS};

/// Profiles and vertex sets are `u64` masks.
pub const MAX_PLAYERS: usize = 64;

/// Default vertex limit for the `2^n` cutwidth table.
pub const DEFAULT_CUTWIDTH_LIMIT: usize = 20;

/// An undirected edge `u < v` with a weight scaled by `10^precision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: i64,
}

/// Connected weighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    n: usize,
    edges: Vec<Edge>,
    precision: u32,
    adjacency: Vec<Vec<(usize, i64)>>,
}

impl SocialGraph {
    /// Builds a graph from decimal weights.
    pub fn new(n: usize, edges: &[(usize, usize, Decimal)]) -> Result<Self> {
        let mut precision = 0u32;
        for (idx, &(_, _, w)) in edges.iter().enumerate() {
            let (m, s) = decimal_parts(w);
            if m <= 0 {
                return Err(Error::InvalidGraph(format!(
                    "edges[{idx}]: weight {w} must be positive"
                )));
            }
            precision = precision.max(s);
        }
        if precision > MAX_DECIMAL_DIGITS {
            return Err(Error::InvalidGraph(format!(
                "weights use {precision} decimal digits, at most {MAX_DECIMAL_DIGITS} supported"
            )));
        }
        let scaled = edges
            .iter()
            .enumerate()
            .map(|(idx, &(u, v, w))| {
                let (m, s) = decimal_parts(w);
                let value = m * pow10(precision - s);
                i64::try_from(value)
                    .map(|weight| (u, v, weight))
                    .map_err(|_| Error::InvalidGraph(format!("edges[{idx}]: weight {w} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_scaled(n, &scaled, precision)
    }

    /// Builds a graph from weights already multiplied by `10^precision`.
    ///
    /// The stored precision is reduced when every weight is divisible by ten,
    /// so equal graphs compare equal regardless of how they were written.
    pub fn from_scaled(n: usize, edges: &[(usize, usize, i64)], precision: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        check_limit("players", n, MAX_PLAYERS)?;
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (idx, &(a, b, w)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edges[{idx}]: endpoint out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "edges[{idx}]: self-loop at {a}"
                )));
            }
            if w <= 0 {
                return Err(Error::InvalidGraph(format!(
                    "edges[{idx}]: weight must be positive"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!(
                    "edges[{idx}]: duplicate edge ({u}, {v})"
                )));
            }
            normalized.push(Edge { u, v, weight: w });
        }

        let mut precision = precision;
        while precision > 0 && normalized.iter().all(|e| e.weight % 10 == 0) {
            for e in &mut normalized {
                e.weight /= 10;
            }
            precision -= 1;
        }

        let mut adjacency = vec![Vec::new(); n];
        for e in &normalized {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let graph = SocialGraph {
            n,
            edges: normalized,
            precision,
            adjacency,
        };
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of decimal digits `k` of the weights.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `10^k`, the weight denominator.
    pub fn scale(&self) -> i128 {
        pow10(self.precision)
    }

    /// Neighbors of `i` with scaled weights, sorted by neighbor index.
    pub fn neighbors(&self, i: usize) -> &[(usize, i64)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// Scaled total weight incident on `i`.
    pub fn weighted_degree(&self, i: usize) -> i64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Scaled sum of all edge weights.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Scaled largest edge weight (0 for the one-vertex graph).
    pub fn max_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    /// Scaled smallest edge weight (0 for the one-vertex graph).
    pub fn min_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).min().unwrap_or(0)
    }

    /// Converts a scaled weight back to an exact rational.
    pub fn unscale(&self, scaled: i64) -> Rational {
        Rational::new(scaled as i128, self.scale())
    }

    /// Converts a scaled weight back to a decimal.
    pub fn unscale_decimal(&self, scaled: i64) -> Decimal {
        Decimal::from_i128_with_scale(scaled as i128, self.precision).normalize()
    }

    pub fn weight_between(&self, i: usize, j: usize) -> Option<i64> {
        self.adjacency[i]
            .binary_search_by_key(&j, |&(v, _)| v)
            .ok()
            .map(|pos| self.adjacency[i][pos].1)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Mask with the low `n` bits set.
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Scaled weight of the edges with exactly one endpoint in `set`.
    pub fn cut_weight(&self, set: u64) -> i64 {
        self.edges
            .iter()
            .filter(|e| ((set >> e.u) & 1) != ((set >> e.v) & 1))
            .map(|e| e.weight)
            .sum()
    }

    /// Exact weighted cutwidth with the default vertex limit.
    pub fn cutwidth(&self) -> Result<CutwidthResult> {
        self.cutwidth_with_limit(DEFAULT_CUTWIDTH_LIMIT)
    }

    /// Exact weighted cutwidth by dynamic programming over vertex subsets.
    ///
    /// `best[S]` is the smallest possible maximum prefix cut of an ordering
    /// whose first `|S|` vertices are `S`. Among minimizing last vertices the
    /// smallest index wins, which fixes the reconstructed ordering.
    pub fn cutwidth_with_limit(&self, limit: usize) -> Result<CutwidthResult> {
        check_limit("cutwidth vertices", self.n, limit.min(30))?;
        let n = self.n;
        let size = 1usize << n;
        let mut cut = vec![0i64; size];
        for set in 1..size {
            let v = set.trailing_zeros() as usize;
            let rest = set & (set - 1);
            let mut inside = 0i64;
            let mut total = 0i64;
            for &(u, w) in &self.adjacency[v] {
                total += w;
                if (rest >> u) & 1 == 1 {
                    inside += w;
                }
            }
            cut[set] = cut[rest] + total - 2 * inside;
        }

        let mut best = vec![0i64; size];
        for set in 1..size {
            let mut value = i64::MAX;
            let mut bits = set;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                value = value.min(best[set & !(1 << v)]);
            }
            best[set] = value.max(cut[set]);
        }

        // Cuts are symmetric, so a prefix S extends to an optimal ordering
        // iff the complement has an ordering within the optimum. Picking
        // the smallest feasible vertex each time gives the lexicographically
        // first optimal ordering.
        let full = size - 1;
        let width = best[full];
        let mut ordering = Vec::with_capacity(n);
        let mut set = 0usize;
        while set != full {
            let v = (0..n)
                .find(|&v| (set >> v) & 1 == 0 && best[full & !(set | 1 << v)] <= width)
                .expect("an optimal completion exists");
            ordering.push(v);
            set |= 1 << v;
        }
        Ok(CutwidthResult {
            value: best[size - 1],
            precision: self.precision,
            ordering,
        })
    }

    /// Largest prefix cut of `ordering` (scaled).
    pub fn ordering_width(&self, ordering: &[usize]) -> i64 {
        let mut set = 0u64;
        let mut width = 0;
        for &v in ordering.iter().take(ordering.len().saturating_sub(1)) {
            set |= 1 << v;
            width = width.max(self.cut_weight(set));
        }
        width
    }
}

/// Vertex mask from a list of vertices.
pub fn vertex_mask(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | (1u64 << v))
}

/// Optimal cutwidth value and an ordering attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutwidthResult {
    /// Scaled by `10^precision`.
    pub value: i64,
    pub precision: u32,
    pub ordering: Vec<usize>,
}

impl CutwidthResult {
    pub fn value_rational(&self) -> Rational {
        Rational::new(self.value as i128, pow10(self.precision))
    }

    pub fn value_decimal(&self) -> Decimal {
        Decimal::from_i128_with_scale(self.value as i128, self.precision).normalize()
    }
}

fn check_weight(w: Decimal) -> Result<()> {
    if w <= Decimal::ZERO {
        return Err(Error::InvalidArgument(format!(
            "weight {w} must be positive"
        )));
    }
    Ok(())
}

/// Complete graph `K_n` with uniform weight.
pub fn make_clique(n: usize, w: Decimal) -> Result<SocialGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "clique needs n >= 2, got {n}"
        )));
    }
    check_weight(w)?;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, w));
        }
    }
    SocialGraph::new(n, &edges)
}

/// `K_{m,m}` with sides `0..m` and `m..2m`.
pub fn make_complete_bipartite(m: usize, w: Decimal) -> Result<SocialGraph> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "bipartite side size must be >= 1".into(),
        ));
    }
    check_weight(w)?;
    let mut edges = Vec::new();
    for a in 0..m {
        for b in m..2 * m {
            edges.push((a, b, w));
        }
    }
    SocialGraph::new(2 * m, &edges)
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn make_star(leaves: usize, w: Decimal) -> Result<SocialGraph> {
    if leaves < 1 {
        return Err(Error::InvalidArgument(
            "star needs at least one leaf".into(),
        ));
    }
    check_weight(w)?;
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i, w)).collect();
    SocialGraph::new(leaves + 1, &edges)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize, w: Decimal) -> Result<SocialGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "path needs n >= 2, got {n}"
        )));
    }
    check_weight(w)?;
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, w)).collect();
    SocialGraph::new(n, &edges)
}

/// Role of a player inside a 6-gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Role {
    pub const ALL: [Role; 6] = [Role::A, Role::B, Role::C, Role::D, Role::E, Role::F];

    fn offset(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Player label in a gadget chain. The initial switch is `(0, Role::A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayerLabel {
    pub gadget: usize,
    pub role: Role,
}

/// A chain of 6-gadgets where `A` of gadget `i - 1` switches gadget `i`.
#[derive(Debug, Clone)]
pub struct GadgetChain {
    pub graph: SocialGraph,
    pub gadgets: usize,
    pub labels: Vec<PlayerLabel>,
    /// `epsilons[i - 1]` is the base weight of gadget `i`.
    pub epsilons: Vec<Decimal>,
}

impl GadgetChain {
    /// Vertex of `role` in gadget `gadget` (1-based). `(0, A)` is the switch.
    pub fn player(&self, gadget: usize, role: Role) -> usize {
        if gadget == 0 {
            assert_eq!(role, Role::A, "gadget 0 only has the switch player");
            return 0;
        }
        assert!(gadget <= self.gadgets);
        1 + 6 * (gadget - 1) + role.offset()
    }
}

/// Builds `g` gadgets with `eps_g = eps_last` and `eps_i = ratio * eps_{i+1}`.
///
/// Inside gadget `i`: `(A,B)`, `(B,C)`, `(C,D)` weigh `eps, 2eps, 3eps` and
/// `(D,E)`, `(B,F)`, `(D,F)` weigh `4eps`. The switch of gadget `i` is joined
/// to its `B` and `D` with weight `4eps_i`.
pub fn make_gadget_chain(g: usize, eps_last: Decimal, ratio: u32) -> Result<GadgetChain> {
    if g < 1 {
        return Err(Error::InvalidArgument("gadget chain needs g >= 1".into()));
    }
    if ratio <= 8 {
        return Err(Error::InvalidArgument(format!(
            "gadget weight ratio must exceed 8, got {ratio}"
        )));
    }
    check_weight(eps_last)?;
    let mut epsilons = vec![eps_last; g];
    for i in (0..g - 1).rev() {
        epsilons[i] = epsilons[i + 1]
            .checked_mul(Decimal::from(ratio))
            .ok_or_else(|| Error::InvalidArgument("gadget weights overflow".into()))?;
    }

    let n = 6 * g + 1;
    let mut labels = vec![PlayerLabel {
        gadget: 0,
        role: Role::A,
    }];
    let mut edges = Vec::new();
    for gadget in 1..=g {
        let base = 1 + 6 * (gadget - 1);
        for role in Role::ALL {
            labels.push(PlayerLabel { gadget, role });
        }
        let eps = epsilons[gadget - 1];
        let at = |r: Role| base + r.offset();
        let four = eps * Decimal::from(4);
        edges.push((at(Role::A), at(Role::B), eps));
        edges.push((at(Role::B), at(Role::C), eps * Decimal::from(2)));
        edges.push((at(Role::C), at(Role::D), eps * Decimal::from(3)));
        edges.push((at(Role::D), at(Role::E), four));
        edges.push((at(Role::B), at(Role::F), four));
        edges.push((at(Role::D), at(Role::F), four));
        let switch = if gadget == 1 { 0 } else { base - 6 };
        edges.push((switch, at(Role::B), four));
        edges.push((switch, at(Role::D), four));
    }
    let graph = SocialGraph::new(n, &edges)?;
    Ok(GadgetChain {
        graph,
        gadgets: g,
        labels,
        epsilons,
    })
}

//! Opinion games: utilities, exact potential and social cost.
//!
//! Every quantity is evaluated exactly. Beliefs share a denominator `B`
//! that is a multiple of `4 * 10^k`, so a player's cost is an integer
//! number of *cost units* `1 / B^2`. [`OpinionGame::potential_units`] and
//! friends expose those integers for tight loops; the `Rational`
//! accessors are the convenient form.

mod beliefs;
mod nash;

pub use beliefs::{threshold_beliefs_with_cap, IntegerVersion, DEFAULT_DEGREE_CAP};
pub use nash::{EquilibriumReport, NashCheck, PriceRatio, DEFAULT_ENUMERATION_LIMIT};

use std::fmt;

use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::graph::SocialGraph;
use crate::rational::{decimal_parts, is_between_01, lcm, pow10, Rational};

/// A pure strategy, `0` or `1`.
pub type Strategy = u8;

/// Strategy profile as a bitmask: bit `i` is player `i`'s opinion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Profile(pub u64);

impl Profile {
    pub fn zeros() -> Self {
        Profile(0)
    }

    pub fn ones(n: usize) -> Self {
        Profile(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    /// Profile from a slice of `0/1` opinions, player 0 first.
    pub fn from_opinions(opinions: &[Strategy]) -> Self {
        Profile(
            opinions
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &s)| m | ((s as u64 & 1) << i)),
        )
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn get(self, i: usize) -> Strategy {
        ((self.0 >> i) & 1) as Strategy
    }

    #[inline]
    pub fn with(self, i: usize, s: Strategy) -> Self {
        Profile((self.0 & !(1u64 << i)) | ((s as u64 & 1) << i))
    }

    #[inline]
    pub fn flip(self, i: usize) -> Self {
        Profile(self.0 ^ (1u64 << i))
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    pub fn hamming(self, other: Profile) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// Opinions of the first `n` players.
    pub fn opinions(self, n: usize) -> Vec<Strategy> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// Lowercase hex with a `0x` prefix.
    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches("0x");
        u64::from_str_radix(digits, 16)
            .map(Profile)
            .map_err(|_| Error::InvalidArgument(format!("not a hex profile {s:?}")))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

/// An opinion game: a social graph plus one internal belief per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpinionGame {
    graph: SocialGraph,
    /// `b_i = belief_num[i] / belief_den`.
    belief_num: Vec<i128>,
    belief_den: i128,
    /// Cost units per unit of scaled edge weight, `B^2 / 10^k`.
    weight_units: i128,
    /// Per-player neighbor lists with weights in cost units.
    neighbor_units: Vec<Vec<(usize, i128)>>,
    /// Per-player total incident weight in cost units.
    degree_units: Vec<i128>,
}

impl OpinionGame {
    /// Builds a game from decimal beliefs.
    pub fn new(graph: SocialGraph, beliefs: &[Decimal]) -> Result<Self> {
        let rationals = beliefs
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let (m, s) = decimal_parts(b);
                if s > crate::rational::MAX_DECIMAL_DIGITS {
                    return Err(Error::InvalidGame(format!(
                        "beliefs[{i}]: {b} has too many decimal digits"
                    )));
                }
                Ok(Rational::new(m, pow10(s)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_rational_beliefs(graph, &rationals)
    }

    /// Builds a game from exact rational beliefs in `[0, 1]`.
    ///
    /// The common denominator is the least multiple of `4 * 10^k` that
    /// expresses every belief.
    pub fn with_rational_beliefs(graph: SocialGraph, beliefs: &[Rational]) -> Result<Self> {
        if beliefs.len() != graph.n() {
            return Err(Error::InvalidGame(format!(
                "expected {} beliefs, got {}",
                graph.n(),
                beliefs.len()
            )));
        }
        let mut den = 4 * graph.scale();
        for (i, b) in beliefs.iter().enumerate() {
            if !is_between_01(b) {
                return Err(Error::InvalidGame(format!(
                    "beliefs[{i}]: {b} is outside [0, 1]"
                )));
            }
            den = lcm(den, *b.denom());
            if den > 4 * pow10(12) {
                return Err(Error::InvalidGame(format!(
                    "beliefs[{i}]: common belief denominator too large"
                )));
            }
        }
        let nums = beliefs
            .iter()
            .map(|b| b.numer() * (den / b.denom()))
            .collect();
        Ok(Self::from_parts(graph, nums, den))
    }

    fn from_parts(graph: SocialGraph, belief_num: Vec<i128>, belief_den: i128) -> Self {
        let weight_units = belief_den * belief_den / graph.scale();
        let neighbor_units: Vec<Vec<(usize, i128)>> = (0..graph.n())
            .map(|i| {
                graph
                    .neighbors(i)
                    .iter()
                    .map(|&(j, w)| (j, w as i128 * weight_units))
                    .collect()
            })
            .collect();
        let degree_units = neighbor_units
            .iter()
            .map(|l| l.iter().map(|&(_, w)| w).sum())
            .collect();
        OpinionGame {
            graph,
            belief_num,
            belief_den,
            weight_units,
            neighbor_units,
            degree_units,
        }
    }

    /// Every player gets the same belief.
    pub fn uniform(graph: SocialGraph, belief: Rational) -> Result<Self> {
        let beliefs = vec![belief; graph.n()];
        Self::with_rational_beliefs(graph, &beliefs)
    }

    pub fn graph(&self) -> &SocialGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn belief(&self, i: usize) -> Rational {
        Rational::new(self.belief_num[i], self.belief_den)
    }

    pub fn beliefs(&self) -> Vec<Rational> {
        (0..self.n()).map(|i| self.belief(i)).collect()
    }

    /// The common belief denominator `B`.
    pub fn belief_denominator(&self) -> i128 {
        self.belief_den
    }

    /// Denominator of every `*_units` value, `B^2`.
    pub fn cost_denominator(&self) -> i128 {
        self.belief_den * self.belief_den
    }

    /// Converts cost units into an exact rational.
    pub fn units_to_rational(&self, units: i128) -> Rational {
        Rational::new(units, self.cost_denominator())
    }

    pub fn units_to_f64(&self, units: i128) -> f64 {
        units as f64 / self.cost_denominator() as f64
    }

    /// `(s - b_i)^2` in cost units.
    #[inline]
    pub fn belief_term_units(&self, i: usize, s: Strategy) -> i128 {
        let d = s as i128 * self.belief_den - self.belief_num[i];
        d * d
    }

    /// Scaled edge weight expressed in cost units.
    pub fn weight_units(&self, scaled: i64) -> i128 {
        scaled as i128 * self.weight_units
    }

    /// `W_i^s(x)`: weight towards neighbors playing `s`, in cost units.
    #[inline]
    pub fn weight_towards_units(&self, x: Profile, i: usize, s: Strategy) -> i128 {
        self.neighbor_units[i]
            .iter()
            .filter(|&&(j, _)| x.get(j) == s)
            .map(|&(_, w)| w)
            .sum()
    }

    /// `W_i` in cost units.
    pub fn incident_units(&self, i: usize) -> i128 {
        self.degree_units[i]
    }

    /// `D_i(x)`: weight of discording edges at `i`, in cost units.
    #[inline]
    pub fn discord_at_units(&self, x: Profile, i: usize) -> i128 {
        self.weight_towards_units(x, i, 1 - x.get(i))
    }

    /// `c_i(x) = (x_i - b_i)^2 + D_i(x)` in cost units.
    #[inline]
    pub fn cost_units(&self, x: Profile, i: usize) -> i128 {
        self.belief_term_units(i, x.get(i)) + self.discord_at_units(x, i)
    }

    /// `c_i(x) - c_i(x with i flipped)` in cost units. Positive means the
    /// flip strictly improves player `i`.
    #[inline]
    pub fn flip_gain_units(&self, x: Profile, i: usize) -> i128 {
        let s = x.get(i);
        let discord = self.discord_at_units(x, i);
        let after = self.degree_units[i] - discord;
        self.belief_term_units(i, s) - self.belief_term_units(i, 1 - s) + discord - after
    }

    /// `b(x) = sum_i (x_i - b_i)^2` in cost units.
    pub fn belief_distance_units(&self, x: Profile) -> i128 {
        (0..self.n())
            .map(|i| self.belief_term_units(i, x.get(i)))
            .sum()
    }

    /// `D(x)`: total weight of discording edges, in cost units.
    pub fn discord_units(&self, x: Profile) -> i128 {
        self.weight_units(self.graph.cut_weight(x.bits()))
    }

    /// `Phi(x) = b(x) + D(x)` in cost units.
    pub fn potential_units(&self, x: Profile) -> i128 {
        self.belief_distance_units(x) + self.discord_units(x)
    }

    /// `SC(x) = b(x) + 2 D(x)` in cost units.
    pub fn social_cost_units(&self, x: Profile) -> i128 {
        self.belief_distance_units(x) + 2 * self.discord_units(x)
    }

    /// `u_i(x) = -((x_i - b_i)^2 + sum_j w_ij (x_i - x_j)^2)`.
    pub fn utility(&self, x: Profile, i: usize) -> Rational {
        -self.cost(x, i)
    }

    /// `c_i(x) = -u_i(x)`.
    pub fn cost(&self, x: Profile, i: usize) -> Rational {
        self.units_to_rational(self.cost_units(x, i))
    }

    /// The exact potential `Phi(x)`.
    pub fn potential(&self, x: Profile) -> Rational {
        self.units_to_rational(self.potential_units(x))
    }

    pub fn social_cost(&self, x: Profile) -> Rational {
        self.units_to_rational(self.social_cost_units(x))
    }

    /// `D(x)`.
    pub fn discord(&self, x: Profile) -> Rational {
        self.units_to_rational(self.discord_units(x))
    }

    /// `b(x)`.
    pub fn belief_distance(&self, x: Profile) -> Rational {
        self.units_to_rational(self.belief_distance_units(x))
    }

    /// The four values `[alpha, beta, gamma, delta]` of the per-edge
    /// potential, indexed by `2 * x_u + x_v`.
    ///
    /// Each endpoint's belief term is spread evenly over its incident edges.
    pub fn edge_potential_table(&self, edge: usize) -> [Rational; 4] {
        let e = self.graph.edges()[edge];
        let share = |i: usize, s: Strategy| {
            Rational::new(
                self.belief_term_units(i, s),
                self.cost_denominator() * self.graph.degree(i) as i128,
            )
        };
        let w = self.graph.unscale(e.weight);
        [
            share(e.u, 0) + share(e.v, 0),
            share(e.u, 0) + share(e.v, 1) + w,
            share(e.u, 1) + share(e.v, 0) + w,
            share(e.u, 1) + share(e.v, 1),
        ]
    }

    /// `Phi_e(x)` for the edge at index `edge`.
    pub fn edge_potential(&self, edge: usize, x: Profile) -> Rational {
        let e = self.graph.edges()[edge];
        self.edge_potential_table(edge)[(2 * x.get(e.u) + x.get(e.v)) as usize]
    }

    /// `B_i`: the integer opinion nearest the belief, ties going to 0.
    pub fn nearest_opinion(&self, i: usize) -> Strategy {
        if 2 * self.belief_num[i] <= self.belief_den {
            0
        } else {
            1
        }
    }

    /// Upper bound on the potential used by the convergence bounds,
    /// `sum_e w_e + n`.
    pub fn potential_ceiling(&self) -> Rational {
        self.graph.unscale(self.graph.total_weight()) + Rational::from_integer(self.n() as i128)
    }

    /// Number of profiles `2^n`, or an error above `limit` players.
    pub(crate) fn profile_count(&self, what: &'static str, limit: usize) -> Result<usize> {
        crate::error::check_limit(what, self.n(), limit)?;
        Ok(1usize << self.n())
    }
}

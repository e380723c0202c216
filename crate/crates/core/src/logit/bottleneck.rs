//! Bottleneck ratios and the potential-bounded region around a consensus.

use std::collections::VecDeque;

use super::chain::{neumaier_sum, LogitChain};
use crate::error::{check_limit, Error, Result};
use crate::game::Profile;
use crate::graph::DEFAULT_CUTWIDTH_LIMIT;
use crate::rational::Rational;

/// Players up to which the region is built.
pub const BOTTLENECK_LIMIT: usize = 20;

/// `pi(L)`, the escape flow `Q(L, S \ L)` and `B(L) = Q / pi(L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottleneckRatio {
    pub pi: f64,
    pub q_out: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckReport {
    /// Cutwidth of the social graph.
    pub cutwidth: Rational,
    /// Smallest `b(x)` among profiles with discording weight `CW`.
    pub b_star: Rational,
    /// False when no profile has discording weight exactly `CW` and
    /// `b_star` was taken over weights in `[CW, CW + w_max)`.
    pub b_star_exact: bool,
    /// The consensus profile the region grows from.
    pub endpoint: Profile,
    /// `b(endpoint)`.
    pub b_endpoint: Rational,
    /// Profiles reachable from `endpoint` through profiles with
    /// `Phi < b_star + CW`, sorted.
    pub region: Vec<Profile>,
    /// Region profiles with a Hamming neighbor outside the region.
    pub boundary: Vec<Profile>,
    /// Hamming edges leaving the region, inner end first.
    pub boundary_edges: Vec<(Profile, Profile)>,
    pub pi_region: f64,
    pub q_out: f64,
    /// `B(R)`.
    pub ratio: f64,
    /// `1 / (4 B(R))`, a lower bound on `t_mix(1/4)`.
    pub lower_bound: f64,
    /// `n |boundary| e^{-beta (CW + b_star - b(endpoint))}`, an upper bound
    /// on `B(R)`.
    pub lemma_bound: f64,
}

fn membership(chain: &LogitChain, set: &[Profile]) -> Result<Vec<bool>> {
    let count = chain.state_count("bottleneck players", BOTTLENECK_LIMIT)?;
    let mut inside = vec![false; count];
    for x in set {
        let b = x.bits() as usize;
        if b >= count {
            return Err(Error::InvalidArgument(format!(
                "profile {x} has bits beyond {} players",
                chain.n()
            )));
        }
        inside[b] = true;
    }
    Ok(inside)
}

fn ratio_of(chain: &LogitChain, pi: &[f64], inside: &[bool]) -> BottleneckRatio {
    let n = chain.n();
    let scale = 1.0 / n as f64;
    let mut flows = Vec::new();
    let mut masses = Vec::new();
    for (x, &is_in) in inside.iter().enumerate() {
        if !is_in {
            continue;
        }
        masses.push(pi[x]);
        for i in 0..n {
            if !inside[x ^ (1 << i)] {
                flows.push(pi[x] * scale * chain.switch_prob(Profile(x as u64), i));
            }
        }
    }
    let pi_set = neumaier_sum(masses);
    let q_out = neumaier_sum(flows);
    BottleneckRatio {
        pi: pi_set,
        q_out,
        ratio: q_out / pi_set,
    }
}

/// Bottleneck ratio of an arbitrary non-empty profile set.
pub fn bottleneck_ratio(chain: &LogitChain, set: &[Profile]) -> Result<BottleneckRatio> {
    let inside = membership(chain, set)?;
    if !inside.contains(&true) {
        return Err(Error::InvalidArgument("the profile set is empty".into()));
    }
    let pi = chain.gibbs()?;
    Ok(ratio_of(chain, pi.probs(), &inside))
}

/// `1 / (4 B(L))`, valid when `pi(L) <= 1/2`.
pub fn bottleneck_lower_bound(chain: &LogitChain, set: &[Profile]) -> Result<f64> {
    let r = bottleneck_ratio(chain, set)?;
    if r.pi > 0.5 {
        return Err(Error::InvalidArgument(format!(
            "the set has stationary mass {} > 1/2",
            r.pi
        )));
    }
    Ok(1.0 / (4.0 * r.ratio))
}

/// `(b_star, exact)` in cost units.
fn b_star_units(chain: &LogitChain, cw: i64) -> (i128, bool) {
    let game = chain.game();
    let graph = game.graph();
    let count = 1u64 << chain.n();
    let exact = (0..count)
        .filter(|&b| graph.cut_weight(b) == cw)
        .map(|b| game.belief_distance_units(Profile(b)))
        .min();
    if let Some(v) = exact {
        return (v, true);
    }
    let w_max = graph.max_weight();
    let fallback = (0..count)
        .filter(|&b| {
            let c = graph.cut_weight(b);
            c >= cw && c < cw + w_max
        })
        .map(|b| game.belief_distance_units(Profile(b)))
        .min()
        .expect("a prefix cut of an optimal ordering has weight in range");
    (fallback, false)
}

/// Profiles reachable from `start` with potential below `threshold`.
fn grow(chain: &LogitChain, start: u64, threshold: i128) -> Vec<bool> {
    let game = chain.game();
    let n = chain.n();
    let mut seen = vec![false; 1 << n];
    if game.potential_units(Profile(start)) >= threshold {
        return seen;
    }
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let y = x ^ (1 << i);
            if !seen[y as usize] && game.potential_units(Profile(y)) < threshold {
                seen[y as usize] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Builds `R_0` and `R_1`, picks the one with mass at most `1/2` (`R_0` on
/// a tie iff `Phi(0) <= Phi(1)`) and reports its bottleneck.
pub fn build_r(chain: &LogitChain) -> Result<BottleneckReport> {
    let n = chain.n();
    check_limit("bottleneck players", n, BOTTLENECK_LIMIT)?;
    let game = chain.game();
    let graph = game.graph();
    let cw = graph.cutwidth_with_limit(DEFAULT_CUTWIDTH_LIMIT.max(BOTTLENECK_LIMIT))?;
    let (b_star, b_star_exact) = b_star_units(chain, cw.value);
    let threshold = b_star + game.weight_units(cw.value);
    let pi = chain.gibbs()?;
    let pi = pi.probs();

    let ones = Profile::ones(n).bits();
    let candidates: Vec<(u64, Vec<bool>, f64)> = [0, ones]
        .into_iter()
        .map(|start| {
            let set = grow(chain, start, threshold);
            let mass = neumaier_sum(
                set.iter()
                    .enumerate()
                    .filter(|(_, &s)| s)
                    .map(|(x, _)| pi[x]),
            );
            (start, set, mass)
        })
        .collect();
    let eligible = |c: &(u64, Vec<bool>, f64)| c.1.contains(&true) && c.2 <= 0.5;
    let prefer_zero = game.potential_units(Profile(0)) <= game.potential_units(Profile(ones));
    let chosen = match (eligible(&candidates[0]), eligible(&candidates[1])) {
        (true, true) => &candidates[if prefer_zero { 0 } else { 1 }],
        (true, false) => &candidates[0],
        (false, true) => &candidates[1],
        (false, false) => {
            return Err(Error::InvalidArgument(
                "neither consensus region has stationary mass at most 1/2".into(),
            ))
        }
    };
    let (start, inside, _) = chosen;

    let mut region = Vec::new();
    let mut boundary = Vec::new();
    let mut boundary_edges = Vec::new();
    for (x, &is_in) in inside.iter().enumerate() {
        if !is_in {
            continue;
        }
        region.push(Profile(x as u64));
        let before = boundary_edges.len();
        for i in 0..n {
            let y = x ^ (1 << i);
            if !inside[y] {
                boundary_edges.push((Profile(x as u64), Profile(y as u64)));
            }
        }
        if boundary_edges.len() > before {
            boundary.push(Profile(x as u64));
        }
    }
    let r = ratio_of(chain, pi, inside);
    let b_endpoint = game.belief_distance_units(Profile(*start));
    let exponent = game.units_to_f64(game.weight_units(cw.value) + b_star - b_endpoint);
    Ok(BottleneckReport {
        cutwidth: cw.value_rational(),
        b_star: game.units_to_rational(b_star),
        b_star_exact,
        endpoint: Profile(*start),
        b_endpoint: game.units_to_rational(b_endpoint),
        lemma_bound: n as f64 * boundary.len() as f64 * (-chain.beta() * exponent).exp(),
        region,
        boundary,
        boundary_edges,
        pi_region: r.pi,
        q_out: r.q_out,
        ratio: r.ratio,
        lower_bound: 1.0 / (4.0 * r.ratio),
    })
}

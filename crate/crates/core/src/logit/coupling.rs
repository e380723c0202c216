//! The maximal one-step coupling of two logit chains and path coupling.

use rand::{Rng, RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::chain::LogitChain;
use crate::error::{check_limit, Result};
use crate::game::{Profile, Strategy};
use crate::graph::SocialGraph;

/// Players up to which [`contraction_check`] enumerates adjacent pairs.
pub const CONTRACTION_LIMIT: usize = 12;

/// One joint outcome of a coupled step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOutcome {
    pub player: usize,
    pub x: Profile,
    pub y: Profile,
    pub prob: f64,
}

/// The four joint opinion probabilities for player `i`, in the order
/// `(0,0), (1,1), (0,1), (1,0)`.
fn joint_table(
    chain: &LogitChain,
    x: Profile,
    y: Profile,
    i: usize,
) -> [(Strategy, Strategy, f64); 4] {
    let x0 = chain.update_prob(x, i, 0);
    let y0 = chain.update_prob(y, i, 0);
    let x1 = chain.update_prob(x, i, 1);
    let y1 = chain.update_prob(y, i, 1);
    let same0 = x0.min(y0);
    let same1 = x1.min(y1);
    [
        (0, 0, same0),
        (1, 1, same1),
        (0, 1, (x0 - same0).max(0.0)),
        (1, 0, (x1 - same1).max(0.0)),
    ]
}

/// Every joint outcome with positive probability, players chosen
/// uniformly.
pub fn coupling_kernel(chain: &LogitChain, x: Profile, y: Profile) -> Vec<JointOutcome> {
    let n = chain.n();
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        for (sx, sy, p) in joint_table(chain, x, y, i) {
            if p > 0.0 {
                out.push(JointOutcome {
                    player: i,
                    x: x.with(i, sx),
                    y: y.with(i, sy),
                    prob: p / n as f64,
                });
            }
        }
    }
    out
}

/// Coupled update of player `i` driven by one uniform `u` in `[0, 1)`.
pub fn coupling_step_with(
    chain: &LogitChain,
    x: Profile,
    y: Profile,
    i: usize,
    u: f64,
) -> (Profile, Profile) {
    let mut acc = 0.0;
    let table = joint_table(chain, x, y, i);
    for &(sx, sy, p) in &table {
        acc += p;
        if u < acc {
            return (x.with(i, sx), y.with(i, sy));
        }
    }
    // rounding left u above the total: take the last outcome with mass
    let &(sx, sy, _) = table
        .iter()
        .rev()
        .find(|t| t.2 > 0.0)
        .expect("probabilities sum to one");
    (x.with(i, sx), y.with(i, sy))
}

/// Coupled step with a uniformly chosen player.
pub fn coupling_step<R: Rng + ?Sized>(
    chain: &LogitChain,
    x: Profile,
    y: Profile,
    rng: &mut R,
) -> (Profile, Profile) {
    let i = rng.random_range(0..chain.n());
    let u: f64 = rng.random();
    coupling_step_with(chain, x, y, i, u)
}

/// Steps until coupled copies started at `x` and `y` meet, or `None` after
/// `max_steps`, driven by `seed_from_u64(seed)`.
pub fn coalescence_time(
    chain: &LogitChain,
    x: Profile,
    y: Profile,
    max_steps: u64,
    seed: u64,
) -> Option<u64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let (mut a, mut b) = (x, y);
    for t in 0..=max_steps {
        if a == b {
            return Some(t);
        }
        if t < max_steps {
            (a, b) = coupling_step(chain, a, b, &mut rng);
        }
    }
    None
}

/// `E[rho(X_1, Y_1)]` from the joint kernel, `rho` the Hamming distance.
pub fn expected_distance(chain: &LogitChain, x: Profile, y: Profile) -> f64 {
    coupling_kernel(chain, x, y)
        .iter()
        .map(|o| o.prob * o.x.hamming(o.y) as f64)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    /// Largest expected distance after one step over adjacent pairs.
    pub max_expected: f64,
    pub pair: (Profile, Profile),
}

impl Contraction {
    /// `alpha = -ln(max_expected)`, positive when the coupling contracts.
    pub fn alpha(&self) -> f64 {
        -self.max_expected.ln()
    }
}

/// Worst one-step contraction over all Hamming-adjacent pairs.
pub fn contraction_check(chain: &LogitChain) -> Result<Contraction> {
    check_limit("contraction players", chain.n(), CONTRACTION_LIMIT)?;
    let n = chain.n();
    let mut worst = Contraction {
        max_expected: f64::NEG_INFINITY,
        pair: (Profile(0), Profile(1)),
    };
    for b in 0..1u64 << n {
        for j in 0..n {
            if (b >> j) & 1 == 1 {
                continue;
            }
            let (x, y) = (Profile(b), Profile(b | 1 << j));
            let e = expected_distance(chain, x, y);
            if e > worst.max_expected {
                worst = Contraction {
                    max_expected: e,
                    pair: (x, y),
                };
            }
        }
    }
    Ok(worst)
}

/// `1 / (w_max * Delta_max)`, the rationality below which the coupling
/// contracts.
pub fn small_beta_threshold(graph: &SocialGraph) -> f64 {
    let w_max = crate::rational::to_f64(&graph.unscale(graph.max_weight()));
    1.0 / (w_max * graph.max_degree() as f64)
}

/// Path-coupling bound `(ln n + ln(1/eps)) / alpha` on the Hamming cube
/// of diameter `n`; `None` without contraction.
pub fn path_coupling_bound(n: usize, contraction: &Contraction, eps: f64) -> Option<f64> {
    let alpha = contraction.alpha();
    (alpha > 0.0).then(|| ((n as f64).ln() + (1.0 / eps).ln()) / alpha)
}

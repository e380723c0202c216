use rand::{Rng, RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::chain::{Distribution, LogitChain, GIBBS_LIMIT};
use crate::error::{check_limit, Error, Result};
use crate::game::Profile;

/// A simulated run: `states[0]` is the start, one entry per step after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub seed: u64,
    pub states: Vec<Profile>,
    /// Player selected at each step.
    pub movers: Vec<usize>,
}

impl Trajectory {
    pub fn last(&self) -> Profile {
        *self.states.last().expect("trajectory has its start")
    }

    /// Fraction of time spent in each profile, start included.
    pub fn empirical_distribution(&self, n: usize) -> Result<Distribution> {
        check_limit("empirical distribution players", n, GIBBS_LIMIT)?;
        let mut counts = vec![0u64; 1 << n];
        for x in &self.states {
            counts[x.bits() as usize] += 1;
        }
        let total = self.states.len() as f64;
        Distribution::new(counts.into_iter().map(|c| c as f64 / total).collect())
    }
}

/// One logit step: a uniform player redraws its opinion from `sigma_i`.
pub fn logit_step<R: Rng + ?Sized>(
    chain: &LogitChain,
    x: Profile,
    rng: &mut R,
) -> (usize, Profile) {
    let i = rng.random_range(0..chain.n());
    let u: f64 = rng.random();
    let s = if u < chain.update_prob(x, i, 1) { 1 } else { 0 };
    (i, x.with(i, s))
}

/// Runs `steps` logit steps from `start` with a xoshiro256++ stream seeded
/// by `seed_from_u64(seed)`.
pub fn simulate(chain: &LogitChain, start: Profile, steps: usize, seed: u64) -> Result<Trajectory> {
    let n = chain.n();
    if n < 64 && start.bits() >> n != 0 {
        return Err(Error::InvalidArgument(format!(
            "start profile {start} has bits beyond {n} players"
        )));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut states = Vec::with_capacity(steps + 1);
    let mut movers = Vec::with_capacity(steps);
    let mut x = start;
    states.push(x);
    for _ in 0..steps {
        let (i, y) = logit_step(chain, x, &mut rng);
        movers.push(i);
        states.push(y);
        x = y;
    }
    Ok(Trajectory {
        seed,
        states,
        movers,
    })
}

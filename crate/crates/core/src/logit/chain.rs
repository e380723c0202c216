use crate::error::{check_limit, Error, Result};
use crate::game::{OpinionGame, Profile, Strategy};

/// Players up to which the transition matrix is built.
pub const TRANSITION_LIMIT: usize = 14;
/// Players up to which the stationary vector is built.
pub const GIBBS_LIMIT: usize = 22;
/// Players up to which a dense `2^n x 2^n` copy is handed out.
pub const DENSE_LIMIT: usize = 12;

const SUM_TOLERANCE: f64 = 1e-12;

/// Numerically stable `1 / (1 + e^{-z})`.
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Compensated sum.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Logit dynamics with inverse noise `beta` on an opinion game.
#[derive(Debug, Clone)]
pub struct LogitChain {
    game: OpinionGame,
    beta: f64,
}

impl LogitChain {
    pub fn new(game: OpinionGame, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beta must be a finite non-negative number, got {beta}"
            )));
        }
        Ok(LogitChain { game, beta })
    }

    pub fn game(&self) -> &OpinionGame {
        &self.game
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n(&self) -> usize {
        self.game.n()
    }

    /// `2^n`, or an error above `limit` players.
    pub fn state_count(&self, what: &'static str, limit: usize) -> Result<usize> {
        check_limit(what, self.n(), limit)?;
        Ok(1usize << self.n())
    }

    /// `sigma_i(s | x_{-i})`.
    pub fn update_prob(&self, x: Profile, i: usize, s: Strategy) -> f64 {
        // flip gain at (x_{-i}, s) is c_i(s) - c_i(1 - s) = u_i(1 - s) - u_i(s)
        let gain = self.game.flip_gain_units(x.with(i, s), i);
        logistic(-self.beta * self.game.units_to_f64(gain))
    }

    /// Probability that an update of player `i` changes its opinion.
    pub fn switch_prob(&self, x: Profile, i: usize) -> f64 {
        self.update_prob(x, i, 1 - x.get(i))
    }

    /// `Phi(x) - min Phi` over all profiles, as floats, together with the
    /// minimum and maximum of `Phi`.
    pub(crate) fn relative_potentials(&self, limit: usize) -> Result<(Vec<f64>, f64, f64)> {
        let count = self.state_count("potential table players", limit)?;
        let units: Vec<i128> = (0..count as u64)
            .map(|b| self.game.potential_units(Profile(b)))
            .collect();
        let min = *units.iter().min().expect("non-empty");
        let max = *units.iter().max().expect("non-empty");
        let rel = units
            .iter()
            .map(|&u| self.game.units_to_f64(u - min))
            .collect();
        Ok((
            rel,
            self.game.units_to_f64(min),
            self.game.units_to_f64(max),
        ))
    }

    /// Gibbs measure `pi(x) ~ e^{-beta Phi(x)}`.
    pub fn gibbs(&self) -> Result<Distribution> {
        let (rel, _, _) = self.relative_potentials(GIBBS_LIMIT)?;
        let weights: Vec<f64> = rel.iter().map(|p| (-self.beta * p).exp()).collect();
        let z = neumaier_sum(weights.iter().copied());
        Distribution::new(weights.into_iter().map(|w| w / z).collect())
    }

    pub fn transition_matrix(&self) -> Result<TransitionMatrix> {
        let count = self.state_count("transition matrix players", TRANSITION_LIMIT)?;
        let n = self.n();
        let scale = 1.0 / n as f64;
        let mut switch = Vec::with_capacity(count * n);
        let mut leave = Vec::with_capacity(count);
        for b in 0..count as u64 {
            let x = Profile(b);
            let row = switch.len();
            switch.extend((0..n).map(|i| scale * self.switch_prob(x, i)));
            leave.push(neumaier_sum(switch[row..].iter().copied()));
        }
        Ok(TransitionMatrix { n, switch, leave })
    }

    /// Largest `|pi(x) P(x, y) - pi(y) P(y, x)|` over all pairs.
    pub fn check_reversibility(&self) -> Result<f64> {
        let p = self.transition_matrix()?;
        let pi = self.gibbs()?;
        let mut worst = 0.0f64;
        for x in 0..p.states() {
            for i in 0..p.players() {
                let y = x ^ (1 << i);
                let v = (pi.probs[x] * p.switch(x, i) - pi.probs[y] * p.switch(y, i)).abs();
                worst = worst.max(v);
            }
        }
        Ok(worst)
    }
}

/// Logit transition matrix stored by locality: for each state the `n`
/// single-coordinate switch probabilities. Every other off-diagonal entry
/// is zero and the diagonal is `1 - ` the row's off-diagonal mass.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    /// `switch[x * n + i] = P(x, x ^ e_i)`.
    switch: Vec<f64>,
    /// `leave[x] = 1 - P(x, x)`, summed from the off-diagonal entries.
    leave: Vec<f64>,
}

impl TransitionMatrix {
    pub fn players(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> usize {
        self.leave.len()
    }

    /// `P(x, x ^ e_i)`.
    #[inline]
    pub fn switch(&self, x: usize, i: usize) -> f64 {
        self.switch[x * self.n + i]
    }

    /// `1 - P(x, x)`, free of cancellation.
    #[inline]
    pub fn leave(&self, x: usize) -> f64 {
        self.leave[x]
    }

    #[inline]
    pub fn diagonal(&self, x: usize) -> f64 {
        1.0 - self.leave[x]
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        let diff = x ^ y;
        if diff == 0 {
            self.diagonal(x)
        } else if diff.is_power_of_two() {
            self.switch(x, diff.trailing_zeros() as usize)
        } else {
            0.0
        }
    }

    /// `out = mu P`.
    pub fn apply_left(&self, mu: &[f64], out: &mut [f64]) {
        let n = self.n;
        for (y, slot) in out.iter_mut().enumerate() {
            let mut acc = mu[y] * self.diagonal(y);
            for i in 0..n {
                let x = y ^ (1 << i);
                acc += mu[x] * self.switch[x * n + i];
            }
            *slot = acc;
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        check_limit("dense matrix players", self.n, DENSE_LIMIT)?;
        let count = self.states();
        let mut dense = vec![0.0; count * count];
        for x in 0..count {
            dense[x * count + x] = self.diagonal(x);
            for i in 0..self.n {
                dense[x * count + (x ^ (1 << i))] = self.switch(x, i);
            }
        }
        Ok(dense)
    }

    /// Largest `|row sum - 1|`.
    pub fn max_row_error(&self) -> f64 {
        (0..self.states())
            .map(|x| {
                let row = &self.switch[x * self.n..(x + 1) * self.n];
                (self.diagonal(x) + row.iter().sum::<f64>() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Largest detailed-balance violation of a dense row-major matrix.
pub fn detailed_balance_violation(pi: &[f64], dense: &[f64]) -> Result<f64> {
    let count = pi.len();
    if dense.len() != count * count {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} entries for {count} states",
            dense.len()
        )));
    }
    let mut worst = 0.0f64;
    for x in 0..count {
        for y in x + 1..count {
            let v = (pi[x] * dense[x * count + y] - pi[y] * dense[y * count + x]).abs();
            worst = worst.max(v);
        }
    }
    Ok(worst)
}

/// A probability vector over the `2^n` profiles, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Checks non-negativity and that the total is 1 within `1e-12`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some(i) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "probs[{i}] = {} is not a probability",
                probs[i]
            )));
        }
        let total = neumaier_sum(probs.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Distribution { probs })
    }

    pub fn uniform(len: usize) -> Self {
        Distribution {
            probs: vec![1.0 / len as f64; len],
        }
    }

    pub fn point(len: usize, at: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[at] = 1.0;
        Distribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, x: Profile) -> f64 {
        self.probs[x.bits() as usize]
    }

    /// Total probability of a set of profiles.
    pub fn mass<I: IntoIterator<Item = Profile>>(&self, set: I) -> f64 {
        neumaier_sum(set.into_iter().map(|x| self.prob(x)))
    }

    /// Most likely profile; ties go to the smallest bitmask.
    pub fn mode(&self) -> Profile {
        let mut best = 0;
        for (x, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = x;
            }
        }
        Profile(best as u64)
    }
}

impl AsRef<[f64]> for Distribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

fn same_length(mu: &[f64], nu: &[f64]) -> Result<()> {
    if mu.len() != nu.len() {
        return Err(Error::InvalidArgument(format!(
            "distributions have lengths {} and {}",
            mu.len(),
            nu.len()
        )));
    }
    Ok(())
}

/// Total variation distance, `1/2 sum |mu - nu|`.
pub fn tv_distance(mu: &[f64], nu: &[f64]) -> Result<f64> {
    same_length(mu, nu)?;
    Ok(0.5 * neumaier_sum(mu.iter().zip(nu).map(|(a, b)| (a - b).abs())))
}

/// Total variation distance as `sum (mu - nu)^+`, the mass of the set where
/// `mu` exceeds `nu`.
pub fn tv_distance_positive_part(mu: &[f64], nu: &[f64]) -> Result<f64> {
    same_length(mu, nu)?;
    Ok(neumaier_sum(
        mu.iter().zip(nu).map(|(a, b)| (a - b).max(0.0)),
    ))
}

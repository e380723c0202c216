use super::chain::LogitChain;
use crate::eigen::symmetric_eigenvalues;
use crate::error::{check_limit, Error, Result};
use crate::game::{OpinionGame, Profile};
use crate::rational::Rational;

/// Players up to which spectral quantities are computed.
pub const SPECTRAL_LIMIT: usize = 12;
/// Players up to which canonical paths are enumerated.
pub const CANONICAL_PATH_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub t_rel: f64,
    pub lambda_2: f64,
    pub lambda_min: f64,
    /// `max(|lambda_2|, |lambda_min|)`.
    pub lambda_star: f64,
    /// `1 - lambda_star`, computed without forming `lambda_star`.
    pub absolute_gap: f64,
    /// Eigenvalues of `P` in decreasing order.
    pub eigenvalues: Vec<f64>,
}

/// Eigenvalues of `P` through the symmetric matrix
/// `I - D^{1/2} P D^{-1/2}`, `D = diag(pi)`.
///
/// By reversibility its off-diagonal entries are `-sqrt(P(x,y) P(y,x))`
/// and its diagonal is the leave mass `1 - P(x,x)`, so nothing is computed
/// as a difference of nearly equal numbers.
pub fn relaxation_time(chain: &LogitChain) -> Result<Relaxation> {
    check_limit("spectral players", chain.n(), SPECTRAL_LIMIT)?;
    let p = chain.transition_matrix()?;
    let size = p.states();
    let mut l = vec![0.0; size * size];
    for x in 0..size {
        l[x * size + x] = p.leave(x);
        for i in 0..p.players() {
            let y = x ^ (1 << i);
            if y > x {
                let v = -(p.switch(x, i) * p.switch(y, i)).sqrt();
                l[x * size + y] = v;
                l[y * size + x] = v;
            }
        }
    }
    let mu = symmetric_eigenvalues(&l, size)?;
    if mu[0] < -1e-9 {
        return Err(Error::Invariant(format!(
            "symmetrized generator has eigenvalue {} < 0",
            mu[0]
        )));
    }
    let eigenvalues: Vec<f64> = mu.iter().map(|m| 1.0 - m).collect();
    let gap_2 = mu[1];
    let gap_min = 2.0 - mu[size - 1];
    let absolute_gap = gap_2.min(gap_min);
    Ok(Relaxation {
        t_rel: 1.0 / absolute_gap,
        lambda_2: eigenvalues[1],
        lambda_min: eigenvalues[size - 1],
        lambda_star: eigenvalues[1].abs().max(eigenvalues[size - 1].abs()),
        absolute_gap,
        eigenvalues,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationBounds {
    pub t_rel: f64,
    pub pi_min: f64,
    pub phi_max: f64,
    /// `(t_rel - 1) ln 2`.
    pub lower: f64,
    /// `ln(4 / pi_min) t_rel`.
    pub upper: f64,
    /// `t_rel (n + 2 + beta Phi_max)`, which dominates `upper`.
    pub surrogate_upper: f64,
}

/// Mixing-time bounds implied by the relaxation time.
pub fn mixing_bounds_from_relaxation(chain: &LogitChain) -> Result<RelaxationBounds> {
    let relax = relaxation_time(chain)?;
    let pi = chain.gibbs()?;
    let (_, _, phi_max) = chain.relative_potentials(SPECTRAL_LIMIT)?;
    let pi_min = pi.probs().iter().copied().fold(f64::INFINITY, f64::min);
    let t_rel = relax.t_rel;
    Ok(RelaxationBounds {
        t_rel,
        pi_min,
        phi_max,
        lower: (t_rel - 1.0) * std::f64::consts::LN_2,
        upper: (4.0 / pi_min).ln() * t_rel,
        surrogate_upper: t_rel * (chain.n() as f64 + 2.0 + chain.beta() * phi_max),
    })
}

fn check_ordering(ordering: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if ordering.len() != n {
        return Err(Error::InvalidArgument(format!(
            "ordering has {} entries for {n} players",
            ordering.len()
        )));
    }
    for (pos, &v) in ordering.iter().enumerate() {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidArgument(format!(
                "ordering[{pos}] = {v} is out of range or repeated"
            )));
        }
    }
    Ok(())
}

/// Path from `x` to `y` flipping the differing players in `ordering`
/// order. Starts at `x`, ends at `y`.
pub fn canonical_path(x: Profile, y: Profile, ordering: &[usize]) -> Vec<Profile> {
    let mut path = vec![x];
    let mut z = x;
    for &v in ordering {
        if x.get(v) != y.get(v) {
            z = z.flip(v);
            path.push(z);
        }
    }
    path
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongestionBound {
    /// `2n max_e (1/min pi) sum_{paths through e} pi(x) pi(y) |path|`.
    pub bound: f64,
    /// Endpoints of a maximizing edge, lower-`pi` end first.
    pub edge: (Profile, Profile),
}

/// Evaluates the canonical-path bound on `t_rel` for the given ordering.
pub fn congestion_upper_bound(chain: &LogitChain, ordering: &[usize]) -> Result<CongestionBound> {
    let n = chain.n();
    check_limit("canonical path players", n, CANONICAL_PATH_LIMIT)?;
    check_ordering(ordering, n)?;
    let pi = chain.gibbs()?;
    let pi = pi.probs();
    let size = pi.len();
    // edge {z, z ^ e_i} stored at (z with bit i cleared) * n + i
    let mut load = vec![0.0; size * n];
    for x in 0..size {
        for y in 0..size {
            let diff = x ^ y;
            if diff == 0 {
                continue;
            }
            let w = pi[x] * pi[y] * diff.count_ones() as f64;
            let mut z = x;
            for &v in ordering {
                if (diff >> v) & 1 == 1 {
                    load[(z & !(1 << v)) * n + v] += w;
                    z ^= 1 << v;
                }
            }
        }
    }
    let mut best = (0.0, 0, 0);
    for low in 0..size {
        for i in 0..n {
            if (low >> i) & 1 == 1 {
                continue;
            }
            let high = low | 1 << i;
            let ratio = load[low * n + i] / pi[low].min(pi[high]);
            if ratio > best.0 {
                best = (ratio, low, high);
            }
        }
    }
    let (ratio, a, b) = best;
    let (z, w) = if pi[a] <= pi[b] { (a, b) } else { (b, a) };
    Ok(CongestionBound {
        bound: 2.0 * n as f64 * ratio,
        edge: (Profile(z as u64), Profile(w as u64)),
    })
}

/// Smallest `Phi(x) + Phi(y) - Phi(bot) - Phi(Lambda)` over all pairs and
/// all edges of their canonical paths, in exact arithmetic.
///
/// On the edge that flips the player at position `p`, `bot` is the path
/// endpoint with the larger potential and `Lambda` takes the complementary
/// coordinates: `x` before `p` and `y` from `p` on when `bot` is the earlier
/// endpoint, `x` up to `p` and `y` after it otherwise.
pub fn potential_path_slack(game: &OpinionGame, ordering: &[usize]) -> Result<Rational> {
    let n = game.n();
    check_limit("canonical path players", n, CANONICAL_PATH_LIMIT)?;
    check_ordering(ordering, n)?;
    let size = 1usize << n;
    let phi: Vec<i128> = (0..size as u64)
        .map(|b| game.potential_units(Profile(b)))
        .collect();
    // before[p]: players at positions < p
    let mut before = vec![0usize; n + 1];
    for (p, &v) in ordering.iter().enumerate() {
        before[p + 1] = before[p] | 1 << v;
    }
    let mut worst = i128::MAX;
    for x in 0..size {
        for y in 0..size {
            let diff = x ^ y;
            if diff == 0 {
                continue;
            }
            for (p, &v) in ordering.iter().enumerate() {
                if (diff >> v) & 1 == 0 {
                    continue;
                }
                let upto = before[p + 1];
                let from = (y & before[p]) | (x & !before[p]);
                let to = (y & upto) | (x & !upto);
                let (bot, lambda) = if phi[from] >= phi[to] {
                    (from, (x & before[p]) | (y & !before[p]))
                } else {
                    (to, (x & upto) | (y & !upto))
                };
                worst = worst.min(phi[x] + phi[y] - phi[bot] - phi[lambda]);
            }
        }
    }
    if worst == i128::MAX {
        worst = 0;
    }
    Ok(game.units_to_rational(worst))
}

/// `2 n^2 e^{2 beta CW}` for a cutwidth in real units.
pub fn cutwidth_relaxation_bound(n: usize, beta: f64, cutwidth: f64) -> f64 {
    2.0 * (n * n) as f64 * (2.0 * beta * cutwidth).exp()
}

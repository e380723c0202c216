//! Exact mixing times.
//!
//! Short horizons iterate each row `P^t(x, .)` until it is `eps`-close to
//! `pi`; `d_x(t)` never increases, so the mixing time is the largest
//! per-row hitting time. Horizons past the row budget switch to repeated
//! squaring of dense powers followed by a binary descent over the powers
//! of two, which reaches times far beyond anything iterable.
//!
//! Dense powers are stored as their off-diagonal part plus the diagonal
//! written as `1 - ` the off-diagonal row mass. Products of such matrices
//! only add non-negative terms, so entries stay relatively accurate even
//! when the chain leaves a state with probability far below machine
//! precision.

use super::chain::{neumaier_sum, LogitChain, TransitionMatrix};
use crate::error::{check_limit, Error, Result};

pub const DEFAULT_EPS: f64 = 0.25;
/// Players up to which exact mixing times are computed.
pub const MIXING_LIMIT: usize = 12;
/// Players up to which dense doubling is available.
pub const DOUBLING_LIMIT: usize = 8;
/// Steps per row before switching to doubling.
pub const ROW_STEP_BUDGET: u64 = 1000;

const MAX_DOUBLINGS: u32 = 62;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    Ok(())
}

/// `t_mix(eps) = min { t : max_x ||P^t(x, .) - pi||_TV <= eps }`.
pub fn mixing_time_exact(chain: &LogitChain, eps: f64) -> Result<u64> {
    mixing_time_with_budget(chain, eps, ROW_STEP_BUDGET)
}

/// [`mixing_time_exact`] with an explicit per-row step budget.
pub fn mixing_time_with_budget(chain: &LogitChain, eps: f64, budget: u64) -> Result<u64> {
    check_eps(eps)?;
    check_limit("mixing time players", chain.n(), MIXING_LIMIT)?;
    let p = chain.transition_matrix()?;
    let pi = chain.gibbs()?;
    match by_rows(&p, pi.probs(), eps, budget) {
        Some(t) => Ok(t),
        None => {
            if chain.n() > DOUBLING_LIMIT {
                return Err(Error::LimitExceeded {
                    what: "mixing time steps per row",
                    size: budget as usize + 1,
                    limit: budget as usize,
                });
            }
            by_doubling(&p, pi.probs(), eps)
        }
    }
}

fn row_distance(row: &[f64], pi: &[f64]) -> f64 {
    0.5 * neumaier_sum(row.iter().zip(pi).map(|(a, b)| (a - b).abs()))
}

fn by_rows(p: &TransitionMatrix, pi: &[f64], eps: f64, budget: u64) -> Option<u64> {
    let count = p.states();
    let mut row = vec![0.0; count];
    let mut next = vec![0.0; count];
    let mut worst = 0;
    for x in 0..count {
        row.iter_mut().for_each(|v| *v = 0.0);
        row[x] = 1.0;
        let mut t = 0;
        while row_distance(&row, pi) > eps {
            if t == budget {
                return None;
            }
            p.apply_left(&row, &mut next);
            std::mem::swap(&mut row, &mut next);
            t += 1;
        }
        worst = worst.max(t);
    }
    Some(worst)
}

/// `d(t)` for `t = 0..=t_max`, stepping all rows together.
pub fn distance_curve(chain: &LogitChain, t_max: usize) -> Result<Vec<f64>> {
    check_limit("distance curve players", chain.n(), 10)?;
    let p = chain.transition_matrix()?;
    let pi = chain.gibbs()?;
    let count = p.states();
    let mut rows: Vec<Vec<f64>> = (0..count)
        .map(|x| {
            let mut r = vec![0.0; count];
            r[x] = 1.0;
            r
        })
        .collect();
    let mut next = vec![0.0; count];
    let mut curve = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        curve.push(
            rows.iter()
                .map(|r| row_distance(r, pi.probs()))
                .fold(0.0, f64::max),
        );
        if t < t_max {
            for r in rows.iter_mut() {
                p.apply_left(r, &mut next);
                std::mem::swap(r, &mut next);
            }
        }
    }
    Ok(curve)
}

/// A dense stochastic matrix kept as off-diagonal entries and row leave
/// masses.
#[derive(Clone)]
struct OffDiagonal {
    size: usize,
    off: Vec<f64>,
    leave: Vec<f64>,
}

impl OffDiagonal {
    fn from_sparse(p: &TransitionMatrix) -> Self {
        let size = p.states();
        let mut off = vec![0.0; size * size];
        for x in 0..size {
            for i in 0..p.players() {
                off[x * size + (x ^ (1 << i))] = p.switch(x, i);
            }
        }
        let leave = (0..size).map(|x| p.leave(x)).collect();
        OffDiagonal { size, off, leave }
    }

    fn stay(&self, x: usize) -> f64 {
        1.0 - self.leave[x]
    }

    fn product(&self, other: &OffDiagonal) -> OffDiagonal {
        let size = self.size;
        let mut off = vec![0.0; size * size];
        for x in 0..size {
            let out = &mut off[x * size..(x + 1) * size];
            let stay_x = self.stay(x);
            let own = &self.off[x * size..(x + 1) * size];
            let theirs = &other.off[x * size..(x + 1) * size];
            for (y, o) in out.iter_mut().enumerate() {
                *o = stay_x * theirs[y] + own[y] * other.stay(y);
            }
            for z in 0..size {
                let a = self.off[x * size + z];
                if a == 0.0 {
                    continue;
                }
                let row = &other.off[z * size..(z + 1) * size];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
            out[x] = 0.0;
        }
        let leave = (0..size)
            .map(|x| neumaier_sum(off[x * size..(x + 1) * size].iter().copied()))
            .collect();
        OffDiagonal { size, off, leave }
    }

    fn distance(&self, pi: &[f64]) -> f64 {
        let size = self.size;
        (0..size)
            .map(|x| {
                let row = &self.off[x * size..(x + 1) * size];
                let terms = row.iter().zip(pi).enumerate().map(|(y, (a, b))| {
                    if y == x {
                        (self.stay(x) - b).abs()
                    } else {
                        (a - b).abs()
                    }
                });
                0.5 * neumaier_sum(terms)
            })
            .fold(0.0, f64::max)
    }
}

fn by_doubling(p: &TransitionMatrix, pi: &[f64], eps: f64) -> Result<u64> {
    let mut powers = vec![OffDiagonal::from_sparse(p)];
    while powers.last().expect("non-empty").distance(pi) > eps {
        if powers.len() as u32 > MAX_DOUBLINGS {
            return Err(Error::LimitExceeded {
                what: "mixing time doublings",
                size: powers.len(),
                limit: MAX_DOUBLINGS as usize,
            });
        }
        let last = powers.last().expect("non-empty");
        powers.push(last.product(last));
    }
    let top = powers.len() - 1;
    if top == 0 {
        return Ok(1);
    }
    // d(2^(top-1)) > eps >= d(2^top): descend below 2^top
    let mut t: u64 = 1 << (top - 1);
    let mut current = powers[top - 1].clone();
    for j in (0..top - 1).rev() {
        let candidate = current.product(&powers[j]);
        if candidate.distance(pi) > eps {
            current = candidate;
            t += 1 << j;
        }
    }
    Ok(t + 1)
}

//! Reference implementations written straight from the definitions.
//!
//! Only the edge list and the beliefs are read from the library; every
//! derived quantity is recomputed here with plain rationals and dense
//! floating-point matrices.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{ToPrimitive, Zero};
use opinion_games::{OpinionGame, Rational, SocialGraph};

pub fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

pub fn edges_of(graph: &SocialGraph) -> Vec<(usize, usize, Rational)> {
    graph
        .edges()
        .iter()
        .map(|e| (e.u, e.v, graph.unscale(e.weight)))
        .collect()
}

fn bit(x: u64, i: usize) -> i128 {
    ((x >> i) & 1) as i128
}

/// A game rebuilt from its inputs.
#[derive(Debug, Clone)]
pub struct Game {
    pub n: usize,
    pub edges: Vec<(usize, usize, Rational)>,
    pub beliefs: Vec<Rational>,
    adj: Vec<Vec<(usize, Rational)>>,
}

impl Game {
    pub fn new(n: usize, edges: Vec<(usize, usize, Rational)>, beliefs: Vec<Rational>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Game {
            n,
            edges,
            beliefs,
            adj,
        }
    }

    pub fn of(game: &OpinionGame) -> Self {
        let beliefs = (0..game.n()).map(|i| game.belief(i)).collect();
        Game::new(game.n(), edges_of(game.graph()), beliefs)
    }

    pub fn states(&self) -> u64 {
        1u64 << self.n
    }

    /// `(x_i - b_i)^2 + sum_j w_ij (x_i - x_j)^2`.
    pub fn cost(&self, x: u64, i: usize) -> Rational {
        let d = Rational::from_integer(bit(x, i)) - self.beliefs[i];
        let mut c = d * d;
        for &(j, w) in &self.adj[i] {
            if bit(x, i) != bit(x, j) {
                c += w;
            }
        }
        c
    }

    pub fn belief_distance(&self, x: u64) -> Rational {
        (0..self.n)
            .map(|i| {
                let d = Rational::from_integer(bit(x, i)) - self.beliefs[i];
                d * d
            })
            .sum()
    }

    pub fn cut(&self, x: u64) -> Rational {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| bit(x, u) != bit(x, v))
            .map(|&(_, _, w)| w)
            .sum()
    }

    pub fn potential(&self, x: u64) -> Rational {
        self.belief_distance(x) + self.cut(x)
    }

    pub fn social_cost(&self, x: u64) -> Rational {
        (0..self.n).map(|i| self.cost(x, i)).sum()
    }

    pub fn is_stable(&self, x: u64) -> bool {
        (0..self.n).all(|i| self.cost(x ^ (1 << i), i) >= self.cost(x, i))
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn max_weight(&self) -> Rational {
        self.edges
            .iter()
            .map(|e| e.2)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Logit probability that player `i` picks 1 against `x_{-i}`.
    pub fn sigma1(&self, x: u64, i: usize, beta: f64) -> f64 {
        let c0 = f(&self.cost(x & !(1 << i), i));
        let c1 = f(&self.cost(x | (1 << i), i));
        // e^{-beta c1} / (e^{-beta c0} + e^{-beta c1})
        1.0 / (1.0 + (beta * (c1 - c0)).exp())
    }

    pub fn sigma(&self, x: u64, i: usize, s: u64, beta: f64) -> f64 {
        let own = f(&self.cost((x & !(1 << i)) | (s << i), i));
        let other = f(&self.cost((x & !(1 << i)) | ((1 - s) << i), i));
        1.0 / (1.0 + (beta * (own - other)).exp())
    }

    /// Dense logit transition matrix, row-major.
    pub fn transition(&self, beta: f64) -> Vec<f64> {
        let size = self.states() as usize;
        let n = self.n as f64;
        let mut p = vec![0.0; size * size];
        for x in 0..size {
            for i in 0..self.n {
                let y = x ^ (1 << i);
                let away = self.sigma(x as u64, i, bit(y as u64, i) as u64, beta);
                p[x * size + y] += away / n;
                p[x * size + x] += (1.0 - away) / n;
            }
        }
        p
    }

    /// `pi(x) ~ e^{-beta Phi(x)}`.
    pub fn gibbs(&self, beta: f64) -> Vec<f64> {
        let phi: Vec<f64> = (0..self.states()).map(|x| f(&self.potential(x))).collect();
        let low = phi.iter().cloned().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = phi.iter().map(|p| (-beta * (p - low)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|v| v / z).collect()
    }

    /// Largest cut over prefixes of `ordering`.
    pub fn ordering_width(&self, ordering: &[usize]) -> Rational {
        let mut set = 0u64;
        let mut worst = Rational::zero();
        for &v in ordering {
            set |= 1 << v;
            worst = worst.max(self.cut(set));
        }
        worst
    }

    /// Cutwidth by trying every ordering.
    pub fn brute_cutwidth(&self) -> Rational {
        let mut order: Vec<usize> = (0..self.n).collect();
        let mut best = self.ordering_width(&order);
        permute(&mut order, 0, &mut |o| {
            best = best.min(self.ordering_width(o))
        });
        best
    }

    /// Profiles reachable from `start` through profiles with potential
    /// below `threshold`.
    pub fn region(&self, start: u64, threshold: Rational) -> BTreeSet<u64> {
        let mut seen = BTreeSet::new();
        if self.potential(start) >= threshold {
            return seen;
        }
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.n {
                let y = x ^ (1 << i);
                if !seen.contains(&y) && self.potential(y) < threshold {
                    seen.insert(y);
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

fn permute(order: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == order.len() {
        visit(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, visit);
        order.swap(k, i);
    }
}

/// Total variation as the mass of the best separating set.
pub fn tv(mu: &[f64], nu: &[f64]) -> f64 {
    let a: Vec<usize> = (0..mu.len()).filter(|&x| mu[x] > nu[x]).collect();
    a.iter().map(|&x| mu[x]).sum::<f64>() - a.iter().map(|&x| nu[x]).sum::<f64>()
}

pub fn matmul(a: &[f64], b: &[f64], size: usize) -> Vec<f64> {
    let mut c = vec![0.0; size * size];
    for i in 0..size {
        for k in 0..size {
            let aik = a[i * size + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..size {
                c[i * size + j] += aik * b[k * size + j];
            }
        }
    }
    c
}

/// First `t` with `max_x ||P^t(x, .) - pi|| <= eps`, by powering the full
/// matrix.
pub fn mixing_by_powers(p: &[f64], pi: &[f64], eps: f64, t_max: u64) -> Option<u64> {
    let size = pi.len();
    let d = |m: &[f64]| {
        (0..size)
            .map(|x| tv(&m[x * size..(x + 1) * size], pi))
            .fold(0.0, f64::max)
    };
    let mut power = p.to_vec();
    for t in 1..=t_max {
        if d(&power) <= eps {
            return Some(t);
        }
        power = matmul(&power, p, size);
    }
    None
}

/// `max_x ||P^t(x, .) - pi||` with `P^t` formed by repeated squaring.
pub fn distance_at(p: &[f64], pi: &[f64], t: u64) -> f64 {
    let size = pi.len();
    let mut result: Vec<f64> = (0..size * size)
        .map(|k| if k / size == k % size { 1.0 } else { 0.0 })
        .collect();
    let mut base = p.to_vec();
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            result = matmul(&result, &base, size);
        }
        base = matmul(&base, &base, size);
        e >>= 1;
    }
    (0..size)
        .map(|x| tv(&result[x * size..(x + 1) * size], pi))
        .fold(0.0, f64::max)
}

/// Mixing time of the row started at `x`, iterating `mu P`.
pub fn mixing_of_row(p: &[f64], pi: &[f64], x: usize, eps: f64, t_max: u64) -> Option<u64> {
    let size = pi.len();
    let mut mu = vec![0.0; size];
    mu[x] = 1.0;
    for t in 0..=t_max {
        if tv(&mu, pi) <= eps {
            return Some(t);
        }
        let mut next = vec![0.0; size];
        for (y, &m) in mu.iter().enumerate() {
            if m != 0.0 {
                for (z, out) in next.iter_mut().enumerate() {
                    *out += m * p[y * size + z];
                }
            }
        }
        mu = next;
    }
    None
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Krawtchouk polynomial `K_j(w)` for the `n`-cube.
fn krawtchouk(n: usize, j: usize, w: usize) -> f64 {
    (0..=j)
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let a = if l <= w { binomial(w, l) } else { 0.0 };
            let b = if j - l <= n - w {
                binomial(n - w, j - l)
            } else {
                0.0
            };
            sign * a * b
        })
        .sum()
}

/// `d(t)` of the lazy walk on the `n`-cube that resamples a uniform
/// coordinate uniformly, from its eigen-expansion `(1 - j/n)^t`.
pub fn cube_distance(n: usize, t: u64) -> f64 {
    let states = 2f64.powi(n as i32);
    0.5 * (0..=n)
        .map(|w| {
            let p: f64 = (0..=n)
                .map(|j| {
                    krawtchouk(n, j, 0) * krawtchouk(n, j, w) / binomial(n, j)
                        * (1.0 - j as f64 / n as f64).powi(t as i32)
                })
                .sum::<f64>()
                / states;
            binomial(n, w) * (p - 1.0 / states).abs()
        })
        .sum::<f64>()
}

pub fn cube_mixing_time(n: usize, eps: f64) -> u64 {
    (0..).find(|&t| cube_distance(n, t) <= eps).unwrap()
}

/// Canonical-path congestion: `2n max_e load(e) / min(pi(z), pi(w))` over
/// Hamming edges `e = {z, w}`, where paths fix differing coordinates in
/// `ordering` and each pair contributes `pi(x) pi(y) |path|`.
pub fn congestion(n: usize, pi: &[f64], ordering: &[usize]) -> f64 {
    let size = pi.len();
    let mut load: HashMap<(usize, usize), f64> = HashMap::new();
    for x in 0..size {
        for y in 0..size {
            if x == y {
                continue;
            }
            let len = (x ^ y).count_ones() as f64;
            let mut cur = x;
            for &v in ordering {
                if (cur >> v) & 1 != (y >> v) & 1 {
                    let next = cur ^ (1 << v);
                    *load.entry((cur.min(next), cur.max(next))).or_default() += pi[x] * pi[y] * len;
                    cur = next;
                }
            }
        }
    }
    let worst = load
        .iter()
        .map(|(&(z, w), &l)| l / pi[z].min(pi[w]))
        .fold(0.0, f64::max);
    2.0 * n as f64 * worst
}

/// Least `Phi(x) + Phi(y) - Phi(bot) - Phi(Lambda)` over every edge of every
/// canonical path, with `bot` the lighter end of the edge under `pi` and
/// `Lambda` the profile built from the complementary coordinates.
pub fn path_slack(game: &Game, ordering: &[usize]) -> Rational {
    let size = game.states();
    let phi: Vec<Rational> = (0..size).map(|x| game.potential(x)).collect();
    let mut worst: Option<Rational> = None;
    // positions are taken in ordering order
    let take = |a: u64, b: u64, first: usize| -> u64 {
        // entries at positions < first from a, the rest from b
        let mut out = 0u64;
        for (pos, &v) in ordering.iter().enumerate() {
            let src = if pos < first { a } else { b };
            out |= src & (1 << v);
        }
        out
    };
    for x in 0..size {
        for y in 0..size {
            if x == y {
                continue;
            }
            let mut cur = x;
            for (pos, &v) in ordering.iter().enumerate() {
                if (x >> v) & 1 == (y >> v) & 1 {
                    continue;
                }
                let next = cur ^ (1 << v);
                // pi(cur) <= pi(next) iff Phi(cur) >= Phi(next)
                let (bot, lambda) = if phi[cur as usize] >= phi[next as usize] {
                    (cur, take(x, y, pos))
                } else {
                    (next, take(x, y, pos + 1))
                };
                let s =
                    phi[x as usize] + phi[y as usize] - phi[bot as usize] - phi[lambda as usize];
                worst = Some(worst.map_or(s, |w: Rational| w.min(s)));
                cur = next;
            }
        }
    }
    worst.unwrap_or_else(Rational::zero)
}

/// Bottleneck ratio `Q(L, S \ L) / pi(L)` from dense `P` and `pi`.
pub fn bottleneck(set: &BTreeSet<u64>, p: &[f64], pi: &[f64]) -> (f64, f64) {
    let size = pi.len();
    let mass: f64 = set.iter().map(|&x| pi[x as usize]).sum();
    let mut q = 0.0;
    for &x in set {
        for y in 0..size as u64 {
            if !set.contains(&y) {
                q += pi[x as usize] * p[x as usize * size + y as usize];
            }
        }
    }
    (mass, q / mass)
}

/// `b*` and the region selected by the consensus rule, or `None` when no
/// candidate has mass at most one half.
pub struct Region {
    pub cutwidth: Rational,
    pub b_star: Rational,
    pub endpoint: u64,
    pub set: BTreeSet<u64>,
}

pub fn consensus_region(game: &Game, pi: &[f64]) -> Option<Region> {
    let cw = game.brute_cutwidth();
    let b_star = (0..game.states())
        .filter(|&x| game.cut(x) == cw)
        .map(|x| game.belief_distance(x))
        .min()?;
    let ones = game.states() - 1;
    let candidates: Vec<(u64, BTreeSet<u64>)> = [0, ones]
        .into_iter()
        .map(|s| (s, game.region(s, b_star + cw)))
        .collect();
    let light = |c: &(u64, BTreeSet<u64>)| {
        !c.1.is_empty() && c.1.iter().map(|&x| pi[x as usize]).sum::<f64>() <= 0.5
    };
    let pick = match (light(&candidates[0]), light(&candidates[1])) {
        (true, true) => {
            if game.potential(0) <= game.potential(ones) {
                0
            } else {
                1
            }
        }
        (true, false) => 0,
        (false, true) => 1,
        (false, false) => return None,
    };
    let (endpoint, set) = candidates.into_iter().nth(pick).unwrap();
    Some(Region {
        cutwidth: cw,
        b_star,
        endpoint,
        set,
    })
}

/// Region profiles with a Hamming neighbor outside.
pub fn inner_boundary(game: &Game, set: &BTreeSet<u64>) -> usize {
    set.iter()
        .filter(|&&x| (0..game.n).any(|i| !set.contains(&(x ^ (1 << i)))))
        .count()
}

/// One-step expected Hamming distance of the maximal coupling for `x, y`
/// differing only at `j`: the chosen player `j` always merges them, any
/// other player `i` splits them with probability `|sigma_i(0|x) -
/// sigma_i(0|y)|`.
pub fn adjacent_expectation(game: &Game, x: u64, j: usize, beta: f64) -> f64 {
    let y = x ^ (1 << j);
    let n = game.n as f64;
    let split: f64 = (0..game.n)
        .filter(|&i| i != j)
        .map(|i| (game.sigma(x, i, 0, beta) - game.sigma(y, i, 0, beta)).abs())
        .sum();
    (n - 1.0) / n + split / n
}

pub fn max_adjacent_expectation(game: &Game, beta: f64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for x in 0..game.states() {
        for j in 0..game.n {
            worst = worst.max(adjacent_expectation(game, x, j, beta));
        }
    }
    worst
}

/// A small deterministic stream for test parameters.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
}

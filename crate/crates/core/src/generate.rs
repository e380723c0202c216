//! Seeded random instances and the named game families.

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::game::OpinionGame;
use crate::graph::{make_star, SocialGraph};
use crate::rational::{pow10, rational_to_decimal, Rational};

/// Parameters of a random connected game.
///
/// The graph is a random recursive tree plus every other pair independently
/// with probability `edge_prob`. Weights are uniform multiples of
/// `10^-weight_digits` in `(0, max_weight]`; beliefs are uniform multiples
/// of `10^-belief_digits` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGame {
    pub n: usize,
    pub edge_prob: f64,
    pub weight_digits: u32,
    pub max_weight: u32,
    pub belief_digits: u32,
}

impl RandomGame {
    /// Unit weights with beliefs on a `1/100` grid.
    pub fn unit(n: usize, edge_prob: f64) -> Self {
        RandomGame {
            n,
            edge_prob,
            weight_digits: 0,
            max_weight: 1,
            belief_digits: 2,
        }
    }

    pub fn generate(&self, seed: u64) -> Result<OpinionGame> {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let graph = self.graph(&mut rng)?;
        let steps = pow10(self.belief_digits) as i64;
        let beliefs: Vec<Decimal> = (0..self.n)
            .map(|_| Decimal::new(rng.random_range(0..=steps), self.belief_digits))
            .collect();
        OpinionGame::new(graph, &beliefs)
    }

    fn graph(&self, rng: &mut Xoshiro256PlusPlus) -> Result<SocialGraph> {
        if !(0.0..=1.0).contains(&self.edge_prob) {
            return Err(Error::InvalidArgument(format!(
                "edge probability {} outside [0, 1]",
                self.edge_prob
            )));
        }
        if self.max_weight == 0 {
            return Err(Error::InvalidArgument("max weight must be positive".into()));
        }
        let top = self.max_weight as i64 * pow10(self.weight_digits) as i64;
        let mut edges = Vec::new();
        let mut tree = vec![None; self.n];
        for (v, parent) in tree.iter_mut().enumerate().skip(1) {
            *parent = Some(rng.random_range(0..v));
        }
        for (v, parent) in tree.iter().enumerate() {
            if let Some(u) = parent {
                edges.push((*u, v, weight_with(rng, top, self.weight_digits)));
            }
        }
        for u in 0..self.n {
            for (v, parent) in tree.iter().enumerate().skip(u + 1) {
                if *parent != Some(u) && rng.random::<f64>() < self.edge_prob {
                    edges.push((u, v, weight_with(rng, top, self.weight_digits)));
                }
            }
        }
        SocialGraph::new(self.n, &edges)
    }
}

fn weight_with(rng: &mut Xoshiro256PlusPlus, top: i64, digits: u32) -> Decimal {
    Decimal::new(rng.random_range(1..=top), digits)
}

/// The price-of-stability star: `leaves` leaves joined to the center with
/// weight `1/leaves`; the center and leaf 1 believe 0, the other leaves
/// believe 1.
pub fn pos_star_game(leaves: usize) -> Result<OpinionGame> {
    if leaves < 2 {
        return Err(Error::InvalidArgument(
            "the star needs at least two leaves".into(),
        ));
    }
    let w = rational_to_decimal(&Rational::new(1, leaves as i128)).ok_or_else(|| {
        Error::InvalidArgument(format!("1/{leaves} has no finite decimal expansion"))
    })?;
    let graph = make_star(leaves, w)?;
    let beliefs: Vec<Decimal> = (0..=leaves)
        .map(|i| if i <= 1 { Decimal::ZERO } else { Decimal::ONE })
        .collect();
    OpinionGame::new(graph, &beliefs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_game() {
        let spec = RandomGame {
            n: 7,
            edge_prob: 0.3,
            weight_digits: 2,
            max_weight: 2,
            belief_digits: 1,
        };
        let a = spec.generate(11).unwrap();
        assert_eq!(a, spec.generate(11).unwrap());
        assert_ne!(a, spec.generate(12).unwrap());
        assert!(a.graph().edges().len() >= 6);
    }

    #[test]
    fn unit_games_have_unit_weights() {
        for seed in 0..20 {
            let g = RandomGame::unit(6, 0.5).generate(seed).unwrap();
            assert_eq!(g.graph().precision(), 0);
            assert!(g.graph().edges().iter().all(|e| e.weight == 1));
        }
    }

    #[test]
    fn trees_when_no_extra_edges() {
        let g = RandomGame::unit(9, 0.0).generate(5).unwrap();
        assert_eq!(g.graph().edges().len(), 8);
    }

    #[test]
    fn star_needs_a_decimal_weight() {
        let g = pos_star_game(5).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.belief(1), Rational::from_integer(0));
        assert_eq!(g.belief(2), Rational::from_integer(1));
        assert!(pos_star_game(3).is_err());
    }
}

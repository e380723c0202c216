//! Threshold beliefs and best-response-preserving belief rewrites.

use std::collections::BTreeSet;

use super::{OpinionGame, Profile, Strategy};
use crate::error::{check_limit, Result};
use crate::rational::{pow10, Rational};

/// Degree above which threshold enumeration refuses to run.
pub const DEFAULT_DEGREE_CAP: usize = 20;

/// Beliefs in `[0, 1]` at which player `i` is indifferent for some
/// opponent profile: `1/2 - W_i/2 + s` with `s` an achievable `W_i^0`.
pub fn threshold_beliefs_with_cap(
    game: &OpinionGame,
    i: usize,
    degree_cap: usize,
) -> Result<BTreeSet<Rational>> {
    let graph = game.graph();
    check_limit("threshold degree", graph.degree(i), degree_cap)?;
    // subset sums of the scaled incident weights
    let mut sums: BTreeSet<i64> = BTreeSet::from([0]);
    for &(_, w) in graph.neighbors(i) {
        let shifted: Vec<i64> = sums.iter().map(|s| s + w).collect();
        sums.extend(shifted);
    }
    let scale = graph.scale();
    let total = graph.weighted_degree(i) as i128;
    // 2 * 10^k * b = 10^k - W' + 2 s'
    let den = 2 * scale;
    Ok(sums
        .into_iter()
        .map(|s| scale - total + 2 * s as i128)
        .filter(|&num| num >= 0 && num <= den)
        .map(|num| Rational::new(num, den))
        .collect())
}

impl OpinionGame {
    /// Threshold beliefs of player `i` with the default degree cap.
    pub fn threshold_beliefs(&self, i: usize) -> Result<BTreeSet<Rational>> {
        threshold_beliefs_with_cap(self, i, DEFAULT_DEGREE_CAP)
    }

    /// `{0, 1}` together with every threshold belief of player `i`.
    pub fn breakpoints(&self, i: usize) -> Result<Vec<Rational>> {
        let mut set = self.threshold_beliefs(i)?;
        set.insert(Rational::from_integer(0));
        set.insert(Rational::from_integer(1));
        Ok(set.into_iter().collect())
    }

    /// Same game with every non-threshold belief moved to the midpoint of
    /// the two consecutive breakpoints around it.
    ///
    /// The best-response correspondence does not change, and all new
    /// beliefs are multiples of `1 / (4 * 10^k)`.
    pub fn canonicalize_beliefs(&self) -> Result<OpinionGame> {
        let beliefs = (0..self.n())
            .map(|i| {
                let b = self.belief(i);
                let points = self.breakpoints(i)?;
                Ok(match points.binary_search(&b) {
                    Ok(_) => b,
                    Err(pos) => (points[pos - 1] + points[pos]) / Rational::from_integer(2),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OpinionGame::with_rational_beliefs(self.graph().clone(), &beliefs)
    }

    /// Best responses of player `i` against `x_{-i}`: the strategies of
    /// least cost (one or both).
    pub fn best_responses(&self, x: Profile, i: usize) -> Vec<Strategy> {
        let c0 = self.cost_units(x.with(i, 0), i);
        let c1 = self.cost_units(x.with(i, 1), i);
        match c0.cmp(&c1) {
            std::cmp::Ordering::Less => vec![0],
            std::cmp::Ordering::Greater => vec![1],
            std::cmp::Ordering::Equal => vec![0, 1],
        }
    }

    /// The integer version: utilities and potential multiplied by `10^k`.
    pub fn integer_version(&self) -> IntegerVersion {
        IntegerVersion {
            game: self.clone(),
            factor: pow10(self.graph().precision()),
        }
    }
}

/// A game whose utilities are `10^k` times the original ones, so that the
/// scaled edge weights `w' = 10^k w` are integers.
#[derive(Debug, Clone)]
pub struct IntegerVersion {
    game: OpinionGame,
    factor: i128,
}

impl IntegerVersion {
    pub fn game(&self) -> &OpinionGame {
        &self.game
    }

    /// `10^k`.
    pub fn factor(&self) -> i128 {
        self.factor
    }

    /// Integer weights `w'_e`, in edge order.
    pub fn weights(&self) -> Vec<i64> {
        self.game.graph().edges().iter().map(|e| e.weight).collect()
    }

    pub fn utility(&self, x: Profile, i: usize) -> Rational {
        self.game.utility(x, i) * self.factor
    }

    pub fn potential(&self, x: Profile) -> Rational {
        self.game.potential(x) * self.factor
    }

    /// Upper bound on the scaled potential, `10^k (sum w + n)`.
    pub fn potential_ceiling(&self) -> Rational {
        self.game.potential_ceiling() * self.factor
    }

    /// Strategies maximizing the scaled utility of player `i`.
    pub fn best_responses(&self, x: Profile, i: usize) -> Vec<Strategy> {
        let u0 = self.utility(x.with(i, 0), i);
        let u1 = self.utility(x.with(i, 1), i);
        match u0.cmp(&u1) {
            std::cmp::Ordering::Greater => vec![0],
            std::cmp::Ordering::Less => vec![1],
            std::cmp::Ordering::Equal => vec![0, 1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_path, SocialGraph};
    use rust_decimal::Decimal;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    fn r(n: i128, den: i128) -> Rational {
        Rational::new(n, den)
    }

    #[test]
    fn odd_unit_degree_has_only_endpoint_thresholds() {
        let game = OpinionGame::uniform(make_clique(4, d("1")).unwrap(), r(3, 10)).unwrap();
        let t = game.threshold_beliefs(0).unwrap();
        assert!(t.iter().all(|b| *b == r(0, 1) || *b == r(1, 1)));
        assert_eq!(game.breakpoints(0).unwrap(), vec![r(0, 1), r(1, 1)]);
    }

    #[test]
    fn even_unit_degree_threshold_is_half() {
        let game = OpinionGame::uniform(make_path(3, d("1")).unwrap(), r(0, 1)).unwrap();
        let t = game.threshold_beliefs(1).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![r(1, 2)]);
        assert_eq!(
            game.breakpoints(1).unwrap(),
            vec![r(0, 1), r(1, 2), r(1, 1)]
        );
    }

    #[test]
    fn fractional_single_edge_thresholds() {
        let g = SocialGraph::new(2, &[(0, 1, d("0.3"))]).unwrap();
        let game = OpinionGame::new(g, &[d("0"), d("0")]).unwrap();
        let t: Vec<_> = game.threshold_beliefs(0).unwrap().into_iter().collect();
        assert_eq!(t, vec![r(35, 100), r(65, 100)]);
    }

    #[test]
    fn canonical_beliefs() {
        // center of a 3-path has even degree: 0.3 lands on 1/4
        let path = make_path(3, d("1")).unwrap();
        let game = OpinionGame::new(path, &[d("0.9"), d("0.3"), d("0.5")]).unwrap();
        let canon = game.canonicalize_beliefs().unwrap();
        assert_eq!(canon.belief(1), r(1, 4));
        // leaves have odd degree: (0, 1) midpoint
        assert_eq!(canon.belief(0), r(1, 2));
        // 0.5 is not a threshold for a degree-1 unit player
        assert_eq!(canon.belief(2), r(1, 2));
        assert_eq!(canon.belief_denominator() % 4, 0);

        let k3 = make_clique(3, d("1")).unwrap();
        let game = OpinionGame::new(k3, &[d("0.5"), d("0.5"), d("0.9")]).unwrap();
        let canon = game.canonicalize_beliefs().unwrap();
        assert_eq!(canon.belief(0), r(1, 2));
    }

    #[test]
    fn integer_version_scales_potential() {
        let g = SocialGraph::new(2, &[(0, 1, d("0.5"))]).unwrap();
        let game = OpinionGame::new(g, &[d("0.2"), d("0.7")]).unwrap();
        let iv = game.integer_version();
        assert_eq!(iv.factor(), 10);
        assert_eq!(iv.weights(), vec![5]);
        for b in 0..4 {
            let x = Profile(b);
            assert_eq!(iv.potential(x), game.potential(x) * 10);
            for i in 0..2 {
                assert_eq!(iv.best_responses(x, i), game.best_responses(x, i));
            }
        }
        let unit = OpinionGame::uniform(make_clique(3, d("1")).unwrap(), r(1, 2)).unwrap();
        let iv = unit.integer_version();
        assert_eq!(iv.factor(), 1);
        assert_eq!(iv.potential(Profile(3)), unit.potential(Profile(3)));
    }
}

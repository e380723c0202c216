use num_traits::Zero;

use super::{OpinionGame, Profile, Strategy};
use crate::error::Result;
use crate::rational::Rational;

/// Players up to which the `2^n` profile space is enumerated.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 22;

/// Outcome of a Nash test with the first player who can strictly improve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NashCheck {
    pub is_nash: bool,
    pub witness: Option<usize>,
}

/// A price of anarchy or stability: finite, or unbounded when the optimum
/// costs nothing but the equilibrium does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceRatio {
    Finite(Rational),
    Infinite,
}

impl PriceRatio {
    fn of(cost: Rational, optimum: Rational) -> Self {
        if optimum.is_zero() {
            if cost.is_zero() {
                PriceRatio::Finite(Rational::from_integer(1))
            } else {
                PriceRatio::Infinite
            }
        } else {
            PriceRatio::Finite(cost / optimum)
        }
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            PriceRatio::Finite(r) => Some(*r),
            PriceRatio::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub nash_profiles: Vec<Profile>,
    pub optimum: Profile,
    pub optimum_cost: Rational,
    pub best_nash_cost: Rational,
    pub worst_nash_cost: Rational,
    pub poa: PriceRatio,
    pub pos: PriceRatio,
}

impl OpinionGame {
    /// True when player `i` strictly lowers its cost by flipping.
    #[inline]
    pub fn can_improve(&self, x: Profile, i: usize) -> bool {
        self.flip_gain_units(x, i) > 0
    }

    /// One-flip stability check.
    pub fn is_nash(&self, x: Profile) -> NashCheck {
        let witness = (0..self.n()).find(|&i| self.can_improve(x, i));
        NashCheck {
            is_nash: witness.is_none(),
            witness,
        }
    }

    /// The threshold characterization for player `i`.
    ///
    /// With `B_i` the nearest opinion and `delta = 1/2 - |B_i - b_i|`, player
    /// `i` must play `B_i` when `W_i^{B_i}(x) > W_i / 2 - delta`, must play
    /// `1 - B_i` when it is smaller, and may play either on equality.
    pub fn threshold_condition_holds(&self, x: Profile, i: usize) -> bool {
        let nearest = self.nearest_opinion(i);
        // Everything doubled and in cost units: 2 W^B  vs  W - 2 delta.
        let lhs = 2 * self.weight_towards_units(x, i, nearest);
        let den = self.belief_den;
        let distance = (nearest as i128 * den - self.belief_num[i]).abs();
        let two_delta = den * den - 2 * den * distance;
        let rhs = self.incident_units(i) - two_delta;
        let played = x.get(i);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => played == nearest,
            std::cmp::Ordering::Less => played == 1 - nearest,
            std::cmp::Ordering::Equal => true,
        }
    }

    /// Nash test through the threshold characterization.
    pub fn is_nash_by_thresholds(&self, x: Profile) -> NashCheck {
        let witness = (0..self.n()).find(|&i| !self.threshold_condition_holds(x, i));
        NashCheck {
            is_nash: witness.is_none(),
            witness,
        }
    }

    /// Greedy equilibrium: start from everyone playing `fill` and switch
    /// players who strictly prefer `1 - fill` until nobody does.
    ///
    /// Players are rescanned in index order each round. The result is the
    /// equilibrium with the most players on `fill`.
    pub fn greedy_nash(&self, fill: Strategy) -> Profile {
        let n = self.n();
        let mut x = if fill == 0 {
            Profile::zeros()
        } else {
            Profile::ones(n)
        };
        loop {
            let mut changed = false;
            for i in 0..n {
                if x.get(i) == fill && self.can_improve(x, i) {
                    x = x.flip(i);
                    changed = true;
                }
            }
            if !changed {
                return x;
            }
        }
    }

    /// Every pure Nash equilibrium, in increasing bitmask order.
    pub fn enumerate_nash(&self) -> Result<Vec<Profile>> {
        self.enumerate_nash_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn enumerate_nash_with_limit(&self, limit: usize) -> Result<Vec<Profile>> {
        let count = self.profile_count("nash enumeration players", limit)?;
        Ok((0..count as u64)
            .map(Profile)
            .filter(|&x| self.is_nash(x).is_nash)
            .collect())
    }

    /// Profile of least social cost by exhaustive search; ties go to the
    /// smallest bitmask.
    pub fn optimum_profile(&self) -> Result<(Profile, Rational)> {
        self.optimum_profile_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn optimum_profile_with_limit(&self, limit: usize) -> Result<(Profile, Rational)> {
        let count = self.profile_count("optimum search players", limit)?;
        let (best, units) = (0..count as u64)
            .map(|b| (Profile(b), self.social_cost_units(Profile(b))))
            .min_by_key(|&(p, c)| (c, p))
            .expect("at least one profile");
        Ok((best, self.units_to_rational(units)))
    }

    /// Equilibria, optimum and the prices of anarchy and stability.
    pub fn poa_pos(&self) -> Result<EquilibriumReport> {
        self.poa_pos_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn poa_pos_with_limit(&self, limit: usize) -> Result<EquilibriumReport> {
        let nash_profiles = self.enumerate_nash_with_limit(limit)?;
        let (optimum, optimum_cost) = self.optimum_profile_with_limit(limit)?;
        let costs = nash_profiles.iter().map(|&x| self.social_cost_units(x));
        let best = costs
            .clone()
            .min()
            .expect("potential games have an equilibrium");
        let worst = costs.max().expect("potential games have an equilibrium");
        let best_nash_cost = self.units_to_rational(best);
        let worst_nash_cost = self.units_to_rational(worst);
        Ok(EquilibriumReport {
            poa: PriceRatio::of(worst_nash_cost, optimum_cost),
            pos: PriceRatio::of(best_nash_cost, optimum_cost),
            nash_profiles,
            optimum,
            optimum_cost,
            best_nash_cost,
            worst_nash_cost,
        })
    }
}

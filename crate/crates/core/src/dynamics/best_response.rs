use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::game::{IntegerVersion, OpinionGame, Profile, Strategy};
use crate::rational::Rational;

/// Who gets to move next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheduler {
    /// Players `0, 1, ..., n-1, 0, ...`.
    RoundRobin,
    /// Uniform player choice from a xoshiro256++ stream seeded with
    /// `seed_from_u64(seed)`.
    UniformRandom { seed: u64 },
    /// An explicit player sequence, played once.
    FixedSequence(Vec<usize>),
}

impl Scheduler {
    fn validate(&self, n: usize) -> Result<()> {
        if let Scheduler::FixedSequence(seq) = self {
            if let Some((pos, &p)) = seq.iter().enumerate().find(|(_, &p)| p >= n) {
                return Err(Error::InvalidArgument(format!(
                    "sequence[{pos}]: player {p} out of range for n = {n}"
                )));
            }
        }
        Ok(())
    }
}

/// One strict improvement.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    /// 1-based flip counter.
    pub t: usize,
    pub mover: usize,
    pub old: Strategy,
    pub new: Strategy,
    /// Potential after the flip.
    pub potential: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub start: Profile,
    pub steps: Vec<Step>,
    pub converged: bool,
    pub final_profile: Profile,
}

impl Trace {
    pub fn flips(&self) -> usize {
        self.steps.len()
    }

    /// Profiles visited, starting with `start`.
    pub fn profiles(&self) -> Vec<Profile> {
        let mut x = self.start;
        let mut out = vec![x];
        for s in &self.steps {
            x = x.with(s.mover, s.new);
            out.push(x);
        }
        out
    }
}

/// The strictly improving strategy for `i`, or `None` to stay.
///
/// At exact indifference the player stays.
pub fn best_response(game: &OpinionGame, x: Profile, i: usize) -> Option<Strategy> {
    game.can_improve(x, i).then(|| 1 - x.get(i))
}

/// Runs best-response dynamics for at most `max_steps` flips.
///
/// Only actual flips count as steps. Round robin stops after a full pass
/// without a flip. The random scheduler and an exhausted fixed sequence
/// stop when an explicit check over all players finds no improvement.
pub fn run_best_response(
    game: &OpinionGame,
    start: Profile,
    scheduler: &Scheduler,
    max_steps: usize,
) -> Result<Trace> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    let n = game.n();
    scheduler.validate(n)?;
    let mut x = start;
    let mut steps = Vec::new();
    let mut potential = game.potential_units(x);

    let mut apply = |x: &mut Profile, i: usize, steps: &mut Vec<Step>| -> bool {
        match best_response(game, *x, i) {
            Some(s) => {
                let old = x.get(i);
                potential -= game.flip_gain_units(*x, i);
                *x = x.with(i, s);
                steps.push(Step {
                    t: steps.len() + 1,
                    mover: i,
                    old,
                    new: s,
                    potential: game.units_to_rational(potential),
                });
                true
            }
            None => false,
        }
    };

    let converged = match scheduler {
        Scheduler::RoundRobin => {
            let mut idle = 0;
            let mut i = 0;
            loop {
                if idle == n {
                    break true;
                }
                if steps.len() == max_steps {
                    break game.is_nash(x).is_nash;
                }
                if apply(&mut x, i, &mut steps) {
                    idle = 0;
                } else {
                    idle += 1;
                }
                i = (i + 1) % n;
            }
        }
        Scheduler::UniformRandom { seed } => {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(*seed);
            loop {
                if steps.len() == max_steps {
                    break game.is_nash(x).is_nash;
                }
                let i = rng.random_range(0..n);
                if !apply(&mut x, i, &mut steps) && game.is_nash(x).is_nash {
                    break true;
                }
            }
        }
        Scheduler::FixedSequence(seq) => {
            for &i in seq {
                if steps.len() == max_steps {
                    break;
                }
                apply(&mut x, i, &mut steps);
            }
            game.is_nash(x).is_nash
        }
    };

    Ok(Trace {
        start,
        steps,
        converged,
        final_profile: x,
    })
}

fn drops_at_least_half(game: &OpinionGame, trace: &Trace, factor: i128) -> bool {
    let half = Rational::new(1, 2);
    let mut previous = game.potential(trace.start);
    for step in &trace.steps {
        if (previous - step.potential) * factor < half {
            return false;
        }
        previous = step.potential;
    }
    true
}

/// True when every flip lowered the potential by at least `1/2`.
///
/// Meaningful on games whose beliefs were canonicalized.
pub fn certify_drop(game: &OpinionGame, trace: &Trace) -> bool {
    drops_at_least_half(game, trace, 1)
}

impl IntegerVersion {
    /// Same certificate in the scaled units of the integer version.
    pub fn certify_drop(&self, trace: &Trace) -> bool {
        drops_at_least_half(self.game(), trace, self.factor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, SocialGraph};
    use rust_decimal::Decimal;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn single_edge_response() {
        let g = SocialGraph::new(2, &[(0, 1, d("1"))]).unwrap();
        let game = OpinionGame::new(g, &[d("0"), d("0")]).unwrap();
        let x = Profile::from_opinions(&[0, 1]);
        assert_eq!(best_response(&game, x, 1), Some(0));
        assert_eq!(best_response(&game, x, 0), None);
    }

    #[test]
    fn indifferent_player_stays() {
        // belief 1/2 and one neighbor on each side
        let g = SocialGraph::new(3, &[(0, 1, d("1")), (1, 2, d("1"))]).unwrap();
        let game = OpinionGame::uniform(g, Rational::new(1, 2)).unwrap();
        let x = Profile::from_opinions(&[0, 1, 1]);
        assert_eq!(game.flip_gain_units(x, 1), 0);
        assert_eq!(best_response(&game, x, 1), None);
    }

    #[test]
    fn starting_at_equilibrium_takes_no_flips() {
        let game = OpinionGame::uniform(make_clique(4, d("1")).unwrap(), Rational::from_integer(0))
            .unwrap();
        for sched in [
            Scheduler::RoundRobin,
            Scheduler::UniformRandom { seed: 3 },
            Scheduler::FixedSequence(vec![0, 1, 2, 3]),
        ] {
            let t = run_best_response(&game, Profile::ones(4), &sched, 100).unwrap();
            assert_eq!(t.flips(), 0);
            assert!(t.converged);
        }
    }

    #[test]
    fn potential_decreases_and_ends_in_nash() {
        let game = OpinionGame::new(
            make_clique(5, d("1")).unwrap(),
            &[d("0.9"), d("0.1"), d("0.2"), d("0.8"), d("0.6")],
        )
        .unwrap();
        let t = run_best_response(&game, Profile(0b01010), &Scheduler::RoundRobin, 100).unwrap();
        assert!(t.converged);
        assert!(game.is_nash(t.final_profile).is_nash);
        let mut prev = game.potential(t.start);
        for s in &t.steps {
            assert!(s.potential < prev);
            prev = s.potential;
        }
        assert_eq!(*t.profiles().last().unwrap(), t.final_profile);
    }

    #[test]
    fn random_scheduler_is_reproducible() {
        let game = OpinionGame::new(
            make_clique(6, d("0.5")).unwrap(),
            &[d("0.9"), d("0.1"), d("0.2"), d("0.8"), d("0.6"), d("0.3")],
        )
        .unwrap();
        let a = run_best_response(
            &game,
            Profile(0b101010),
            &Scheduler::UniformRandom { seed: 9 },
            50,
        );
        let b = run_best_response(
            &game,
            Profile(0b101010),
            &Scheduler::UniformRandom { seed: 9 },
            50,
        );
        assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn max_steps_cuts_the_run() {
        let game = OpinionGame::uniform(make_clique(4, d("1")).unwrap(), Rational::from_integer(1))
            .unwrap();
        let start = Profile::from_opinions(&[1, 1, 0, 0]);
        let t = run_best_response(&game, start, &Scheduler::RoundRobin, 1).unwrap();
        assert_eq!(t.flips(), 1);
        assert!(!t.converged);
        assert!(run_best_response(&game, Profile::zeros(), &Scheduler::RoundRobin, 0).is_err());
        let bad = Scheduler::FixedSequence(vec![7]);
        assert!(run_best_response(&game, Profile::zeros(), &bad, 5).is_err());
    }

    #[test]
    fn empty_trace_certifies() {
        let game = OpinionGame::uniform(make_clique(3, d("1")).unwrap(), Rational::from_integer(0))
            .unwrap();
        let t = run_best_response(&game, Profile::zeros(), &Scheduler::RoundRobin, 10).unwrap();
        assert!(certify_drop(&game, &t));
    }

    #[test]
    fn uncanonicalized_beliefs_can_drop_less_than_half() {
        // Unit triangle, player 0 believes 0.49 and sees one neighbor on each
        // side: flipping 1 -> 0 gains only 2 * 0.51 - 1 = 0.02.
        let g = make_clique(3, d("1")).unwrap();
        let game = OpinionGame::new(g, &[d("0.49"), d("0"), d("1")]).unwrap();
        let start = Profile::from_opinions(&[1, 0, 1]);
        let t = run_best_response(&game, start, &Scheduler::FixedSequence(vec![0]), 5).unwrap();
        assert_eq!(t.flips(), 1);
        assert_eq!(
            game.potential(start) - t.steps[0].potential,
            Rational::new(2, 100)
        );
        assert!(!certify_drop(&game, &t));

        let canon = game.canonicalize_beliefs().unwrap();
        let t = run_best_response(&canon, start, &Scheduler::FixedSequence(vec![0]), 5).unwrap();
        assert!(certify_drop(&canon, &t));
    }
}

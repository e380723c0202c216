//! Exponentially long best-response schedules on gadget chains.
//!
//! A 6-gadget toggles between `(A..F) = (0,0,0,0,0,1)` and `(0,1,0,1,0,1)`.
//! With its switch at 1 it runs the 2-move switch-on cycle; with the switch
//! at 0 it runs the 10-move switch-off cycle, during which its own `A`
//! moves `0 -> 1 -> 0 -> 1 -> 0`. Each of those `A` moves drives one full
//! cycle of the next gadget, which doubles the work per level.

use super::best_response::{Step, Trace};
use crate::error::{Error, Result};
use crate::game::{OpinionGame, Profile, Strategy};
use crate::graph::{GadgetChain, Role};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    SwitchOn,
    SwitchOff,
}

/// Role moves of the switch-on cycle.
pub const SWITCH_ON: [(Role, Strategy); 2] = [(Role::B, 1), (Role::D, 1)];

/// Role moves of the switch-off cycle, as `(role, new opinion)`.
pub const SWITCH_OFF: [(Role, Strategy); 10] = [
    (Role::A, 1),
    (Role::B, 0),
    (Role::A, 0),
    (Role::C, 1),
    (Role::B, 1),
    (Role::A, 1),
    (Role::D, 0),
    (Role::C, 0),
    (Role::B, 0),
    (Role::A, 0),
];

/// One scheduled move with its place in the cycle grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledMove {
    pub player: usize,
    pub gadget: usize,
    pub role: Role,
    pub new: Strategy,
    pub cycle: CycleKind,
}

/// An adversarial schedule and the profile it starts from.
#[derive(Debug, Clone)]
pub struct AdversarialSchedule {
    pub start: Profile,
    pub moves: Vec<ScheduledMove>,
}

impl AdversarialSchedule {
    /// Player order for a fixed-sequence scheduler.
    pub fn sequence(&self) -> Vec<usize> {
        self.moves.iter().map(|m| m.player).collect()
    }

    /// Number of moves made inside each gadget, index 0 being the switch.
    pub fn flips_per_gadget(&self, gadgets: usize) -> Vec<usize> {
        let mut counts = vec![0; gadgets + 1];
        for m in &self.moves {
            counts[m.gadget] += 1;
        }
        counts
    }

    /// Cycles of each kind run by each gadget, `(switch_on, switch_off)`.
    pub fn cycles_per_gadget(&self, gadgets: usize) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); gadgets + 1];
        for m in &self.moves {
            // count cycle starts: first move of each cycle
            let entry = &mut counts[m.gadget];
            match m.cycle {
                CycleKind::SwitchOn if m.role == SWITCH_ON[0].0 => entry.0 += 1,
                CycleKind::SwitchOff if (m.role, m.new) == SWITCH_OFF[0] => {
                    // A -> 1 occurs twice per switch-off cycle
                    entry.1 += 1;
                }
                _ => {}
            }
        }
        for entry in &mut counts {
            entry.1 /= 2;
        }
        counts
    }
}

fn push_cycle(chain: &GadgetChain, gadget: usize, kind: CycleKind, out: &mut Vec<ScheduledMove>) {
    let moves: &[(Role, Strategy)] = match kind {
        CycleKind::SwitchOn => &SWITCH_ON,
        CycleKind::SwitchOff => &SWITCH_OFF,
    };
    for &(role, new) in moves {
        out.push(ScheduledMove {
            player: chain.player(gadget, role),
            gadget,
            role,
            new,
            cycle: kind,
        });
        if role == Role::A && gadget < chain.gadgets {
            let next = if new == 1 {
                CycleKind::SwitchOn
            } else {
                CycleKind::SwitchOff
            };
            push_cycle(chain, gadget + 1, next, out);
        }
    }
}

/// The recursive schedule: the switch-off cycle of gadget 1, with every
/// `A_i` move expanded into a cycle of gadget `i + 1`.
///
/// The starting profile has `B_1 = D_1 = 1` and every `F_i = 1`. The
/// initial opinion of the switch `A_0` is found by replaying the schedule
/// with both values and keeping the one under which every move is a strict
/// best response.
pub fn gadget_adversarial_sequence(
    chain: &GadgetChain,
    game: &OpinionGame,
) -> Result<AdversarialSchedule> {
    let half = Rational::new(1, 2);
    if game.graph() != &chain.graph {
        return Err(Error::InvalidArgument(
            "game is not played on the gadget chain".into(),
        ));
    }
    if let Some(i) = (0..game.n()).find(|&i| game.belief(i) != half) {
        return Err(Error::InvalidGame(format!(
            "beliefs[{i}]: gadget schedules need every belief equal to 1/2"
        )));
    }
    let mut moves = Vec::new();
    push_cycle(chain, 1, CycleKind::SwitchOff, &mut moves);

    let mut base = Profile::zeros()
        .with(chain.player(1, Role::B), 1)
        .with(chain.player(1, Role::D), 1);
    for gadget in 1..=chain.gadgets {
        base = base.with(chain.player(gadget, Role::F), 1);
    }

    let mut last_err = None;
    for switch in [0, 1] {
        let schedule = AdversarialSchedule {
            start: base.with(0, switch),
            moves: moves.clone(),
        };
        match validate_schedule(game, &schedule) {
            Ok(_) => return Ok(schedule),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::Invariant(format!(
        "no switch setting makes the gadget schedule valid: {}",
        last_err.expect("two attempts were made")
    )))
}

/// Replays `schedule`, requiring every move to be the scheduled player's
/// strict best response and to land on the scheduled opinion.
pub fn validate_schedule(game: &OpinionGame, schedule: &AdversarialSchedule) -> Result<Trace> {
    let mut x = schedule.start;
    let mut potential = game.potential_units(x);
    let mut steps = Vec::with_capacity(schedule.moves.len());
    for (idx, m) in schedule.moves.iter().enumerate() {
        let old = x.get(m.player);
        if old == m.new || !game.can_improve(x, m.player) {
            return Err(Error::NotBestResponse {
                step: idx + 1,
                player: m.player,
            });
        }
        potential -= game.flip_gain_units(x, m.player);
        x = x.flip(m.player);
        steps.push(Step {
            t: idx + 1,
            mover: m.player,
            old,
            new: m.new,
            potential: game.units_to_rational(potential),
        });
    }
    let converged = game.is_nash(x).is_nash;
    Ok(Trace {
        start: schedule.start,
        steps,
        converged,
        final_profile: x,
    })
}

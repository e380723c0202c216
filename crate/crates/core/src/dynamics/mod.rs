//! Best-response dynamics.

mod best_response;
mod gadget;

pub use best_response::{best_response, certify_drop, run_best_response, Scheduler, Step, Trace};
pub use gadget::{
    gadget_adversarial_sequence, validate_schedule, AdversarialSchedule, CycleKind, ScheduledMove,
    SWITCH_OFF, SWITCH_ON,
};

//! Logit dynamics: a uniformly chosen player redraws its opinion with
//! probability proportional to `e^{beta u_i}`.

mod bottleneck;
mod chain;
mod coupling;
mod mixing;
mod simulate;
mod spectral;

pub use bottleneck::{
    bottleneck_lower_bound, bottleneck_ratio, build_r, BottleneckRatio, BottleneckReport,
    BOTTLENECK_LIMIT,
};
pub use chain::{
    detailed_balance_violation, logistic, tv_distance, tv_distance_positive_part, Distribution,
    LogitChain, TransitionMatrix, DENSE_LIMIT, GIBBS_LIMIT, TRANSITION_LIMIT,
};
pub use coupling::{
    coalescence_time, contraction_check, coupling_kernel, coupling_step, coupling_step_with,
    expected_distance, path_coupling_bound, small_beta_threshold, Contraction, JointOutcome,
    CONTRACTION_LIMIT,
};
pub use mixing::{
    distance_curve, mixing_time_exact, mixing_time_with_budget, DEFAULT_EPS, DOUBLING_LIMIT,
    MIXING_LIMIT, ROW_STEP_BUDGET,
};
pub use simulate::{logit_step, simulate, Trajectory};
pub use spectral::{
    canonical_path, congestion_upper_bound, cutwidth_relaxation_bound,
    mixing_bounds_from_relaxation, potential_path_slack, relaxation_time, CongestionBound,
    Relaxation, RelaxationBounds, CANONICAL_PATH_LIMIT, SPECTRAL_LIMIT,
};

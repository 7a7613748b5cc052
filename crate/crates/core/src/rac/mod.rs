//! Binary random access codes on a qubit.

pub mod decoding;
mod lemmas;
mod optimize;
mod region;
mod report;
mod strategies;
mod task;

pub use lemmas::{
    rac2_closed_form, rac2_epsilon_encodings, rac2_single_magic_encodings,
    rac2_stabilizer_encodings, rac2_strategy, rac3_case_strategies, rac3_closed_form,
    rac3_majority_x_encodings, rac3_stabilizer_encodings, LemmaReport, Rac3Case, RAC2_DECODING,
};
pub use optimize::{
    optimize_one_magic, optimize_unrestricted, reference_one_magic, reference_optimum,
    OptimizeReport, DEFAULT_REFINE_TOL,
};
pub use region::{
    advantage_region, region_csv, region_point, region_point_born, region_point_strategy,
    RegionClass, RegionSample, RegionTask, BOUNDARY_BAND, CLASSICAL_VALUE, DEFAULT_STEP,
};
pub use report::{rac_success, StrategyReport, StrategyTag, SuccessValue};
pub use strategies::{
    canonical_uplift_string, enmq_strategy, majority_prefix, meid_report, meid_strategy,
    onmq_strategy, optimal_uplift, profile, single_magic_uplift, stabilizer_report,
    uplift_bloch, uplift_coefficient, uplift_gain, uplift_per_string, Profile, UpliftBase,
    UpliftReport,
};
pub use task::{RacTask, MAX_N};

//! Fast transform engines: plan construction and execution.

mod drivers;
mod plan;

pub use drivers::{
    default_beta, gl_dft, plan_double, plan_engine, plan_general, plan_ldu, plan_single, plan_solvable,
    prepare_linear, sl2_dft, sl_dft, subgroup_irreps, EngineConfig, EngineKind, BETA_MAX,
};
pub use plan::{
    double_subgroup_dft, lift_pairs, single_subgroup_dft, tensor_dft, translated_hk_dft, DftPlan, DoubleStep,
    EngineResult, PlanNode, SingleStep, Strategy,
};

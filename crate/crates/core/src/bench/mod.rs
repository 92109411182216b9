//! Styblinski-Tang benchmark family and experiment harness.

pub mod experiment;
pub mod oracle;
pub mod styblinski;

pub use experiment::{
    build_meta_dataset, compare_on, draw_test_functions, run_baselines, run_comparison,
    run_comparison_with, run_limit_case, run_seed, run_sensitivity, AggregateRow, ComparisonReport,
    ExperimentConfig, LimitCaseRun, Method, WarmStartCheck, SensitivityEntry, SensitivityReport,
    SummaryRow, SweepParam, TestFunction,
};
pub use oracle::{brute_force_feasible_min, brute_force_unconstrained_min, grid_min};
pub use styblinski::{
    g1, g2, sample_perturbed_family, st_domain, st_objective, st_problem, st_problem_unconstrained,
    StFamilyParams,
};

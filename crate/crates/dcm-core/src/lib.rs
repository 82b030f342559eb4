//! Coordinative demand charge mitigation engine.
//!
//! Utilities that buy wholesale power pay a demand charge on their draw
//! during the supplier's single monthly peak hour. This crate models the
//! resources an operator can throw at that hour (a discharge-only battery,
//! a diesel generator, conservation voltage reduction, and two controllable
//! HVAC fleets with payback), five ways of picking which hours to defend
//! from two kinds of forecasts, an exact dispatch optimizer over those
//! resources, and a year-long billing simulation with strategy comparison
//! and resource-sizing sweeps.
//!
//! All types are plain immutable data and every function is deterministic,
//! so repeated runs over the same inputs reproduce byte-identical results.

pub mod calendar;
pub mod cvr;
pub mod dispatch;
pub mod domain;
pub mod error;
pub mod fleet;
pub mod resources;
pub mod sim;
pub mod strategy;
pub mod synthetic;
pub mod tcl;

pub use calendar::{Date, HourStamp, MonthId};
pub use cvr::{apply_cvr_option, build_cvr_options, cvr_reduction, CvrSpec};
pub use dispatch::{
    evaluate_on_actual, objective_f1, objective_f2, optimize, DayOutcome, DispatchSchedule,
    ObjectiveConfig, ObjectiveKind,
};
pub use domain::{
    top_x_hours, validate_day_context, DayContext, HourlyProfile, OptionMatrix, TargetHourSet,
    Violation, HOURS_PER_DAY,
};
pub use error::DcmError;
pub use fleet::ResourceFleet;
pub use resources::{bess_max_feasible, bess_step, dg_cost, BessSpec, BessState, DgSpec};
pub use sim::{
    compare_strategies, monthly_demand_charge, sensitivity_sweep, simulate_year, AnnualReport,
    MonthReport, SimConfig, StrategyComparison, SweepReport, SweepResource, SweepRow, Tariff,
};
pub use strategy::{
    gate, select_hours, update_ledger, DayCosts, GateConfig, GateDecision, MonthLedger,
    StrategyChoice, StrategyKind,
};
pub use synthetic::{generate_synthetic_scenario, ScenarioSpec};
pub use tcl::{
    build_tcl_options, dr_profile, duty_cycle, hvac_normal_profile, tcl_dr_hour_count,
    total_tcl_reduction, DrProfile, TclGroupKind, TclGroupSpec, TclOptionSet,
};

//! The daily execution gate, the five targeted-hour selection strategies,
//! and the monthly billing ledger.
//!
//! Each morning the gate decides whether mitigation is worth running: the
//! forecast peak (inflated by an error margin) must beat the month's running
//! peak, and the peak-day probability must clear a threshold. When it runs,
//! one of five strategies picks which hours to defend, reconciling the
//! day-ahead load forecast with the peak-hour probability forecast.

use crate::calendar::MonthId;
use crate::domain::{top_x_hours, DayContext, HourlyProfile, TargetHourSet, HOURS_PER_DAY};
use crate::error::DcmError;

/// Gate thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateConfig {
    /// Forecast error margin applied to the forecast peak (e.g. 0.10).
    pub error_margin: f64,
    /// Minimum peak-day probability required to run.
    pub peak_day_prob_threshold: f64,
}

impl GateConfig {
    pub fn new(error_margin: f64, peak_day_prob_threshold: f64) -> Result<Self, DcmError> {
        if !(error_margin >= 0.0) {
            return Err(DcmError::invalid("gate config", "error margin must be >= 0"));
        }
        if !(0.0..=1.0).contains(&peak_day_prob_threshold) {
            return Err(DcmError::invalid("gate config", "threshold must be in [0, 1]"));
        }
        Ok(Self { error_margin, peak_day_prob_threshold })
    }
}

impl Default for GateConfig {
    fn default() -> Self {
        Self { error_margin: 0.10, peak_day_prob_threshold: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateDecision {
    Run,
    Skip,
}

/// Runs iff `max(forecast) * (1 + K_error) > historical_peak` (strict) and
/// the peak-day probability is at or above the threshold. On the first day
/// of a month the historical peak is zero, so any positive forecast passes
/// the peak test.
pub fn gate(ctx: &DayContext, ledger: &MonthLedger, cfg: &GateConfig) -> GateDecision {
    let peak_test = ctx.forecast_load.max_value() * (1.0 + cfg.error_margin)
        > ledger.historical_peak_mw;
    let prob_test = ctx.peak_day_probability >= cfg.peak_day_prob_threshold;
    if peak_test && prob_test {
        GateDecision::Run
    } else {
        GateDecision::Skip
    }
}

/// The five targeted-hour selection strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Top-X hours by peak-hour probability.
    S1ProbTopX,
    /// Top-X hours by day-ahead load forecast.
    S2DalfTopX,
    /// Contiguous span covering the top-X probability hours.
    S3ProbHorizon,
    /// Contiguous span covering the top-X forecast hours.
    S4DalfHorizon,
    /// Contiguous span covering both top-X sets.
    S5CombinedHorizon,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::S1ProbTopX,
        StrategyKind::S2DalfTopX,
        StrategyKind::S3ProbHorizon,
        StrategyKind::S4DalfHorizon,
        StrategyKind::S5CombinedHorizon,
    ];

    pub fn is_horizon(&self) -> bool {
        matches!(
            self,
            StrategyKind::S3ProbHorizon
                | StrategyKind::S4DalfHorizon
                | StrategyKind::S5CombinedHorizon
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            StrategyKind::S1ProbTopX => "s1",
            StrategyKind::S2DalfTopX => "s2",
            StrategyKind::S3ProbHorizon => "s3",
            StrategyKind::S4DalfHorizon => "s4",
            StrategyKind::S5CombinedHorizon => "s5",
        }
    }

    pub fn parse(s: &str) -> Result<Self, DcmError> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(StrategyKind::S1ProbTopX),
            "s2" => Ok(StrategyKind::S2DalfTopX),
            "s3" => Ok(StrategyKind::S3ProbHorizon),
            "s4" => Ok(StrategyKind::S4DalfHorizon),
            "s5" => Ok(StrategyKind::S5CombinedHorizon),
            other => Err(DcmError::invalid("strategy", format!("unknown strategy {other:?}"))),
        }
    }
}

/// A strategy with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyChoice {
    pub kind: StrategyKind,
    /// How many top hours seed the selection.
    pub x: usize,
    /// Horizon strategies only: add one hour past the span end so DR payback
    /// participates in the peak constraint.
    pub append_payback_hour: bool,
}

impl StrategyChoice {
    pub fn new(kind: StrategyKind, x: usize, append_payback_hour: bool) -> Result<Self, DcmError> {
        if x == 0 || x > HOURS_PER_DAY {
            return Err(DcmError::invalid("strategy", format!("x={x} out of range 1..=24")));
        }
        if append_payback_hour && !kind.is_horizon() {
            return Err(DcmError::invalid(
                "strategy",
                "append_payback_hour applies to horizon strategies (s3-s5) only",
            ));
        }
        Ok(Self { kind, x, append_payback_hour })
    }
}

impl Default for StrategyChoice {
    fn default() -> Self {
        Self { kind: StrategyKind::S1ProbTopX, x: 2, append_payback_hour: false }
    }
}

fn span_of(hours: &TargetHourSet) -> Result<TargetHourSet, DcmError> {
    TargetHourSet::span(hours.hours()[0], *hours.hours().last().unwrap())
}

/// Selects the targeted demand-reduction hours for the day.
pub fn select_hours(choice: &StrategyChoice, ctx: &DayContext) -> Result<TargetHourSet, DcmError> {
    let prob_top = || top_x_hours(&ctx.peak_hour_probabilities, choice.x);
    let pred_top = || top_x_hours(ctx.forecast_load.values(), choice.x);
    let hours = match choice.kind {
        StrategyKind::S1ProbTopX => prob_top()?,
        StrategyKind::S2DalfTopX => pred_top()?,
        StrategyKind::S3ProbHorizon => span_of(&prob_top()?)?,
        StrategyKind::S4DalfHorizon => span_of(&pred_top()?)?,
        StrategyKind::S5CombinedHorizon => {
            let a = prob_top()?;
            let b = pred_top()?;
            let first = a.hours()[0].min(b.hours()[0]);
            let last = (*a.hours().last().unwrap()).max(*b.hours().last().unwrap());
            TargetHourSet::span(first, last)?
        }
    };
    if choice.append_payback_hour && choice.kind.is_horizon() {
        Ok(hours.with_appended_payback_hour())
    } else {
        Ok(hours)
    }
}

/// Per-day accumulations added to the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DayCosts {
    /// Net generator running cost ($).
    pub dg_cost_dollars: f64,
    /// HVAC group-hours deployed.
    pub dr_hours: u32,
    /// Battery cycles consumed (storage drawn / usable band).
    pub battery_cycles: f64,
}

/// Running record of one billing month: coincident peaks for the mitigated
/// and unmitigated load plus accumulated operating figures. Crossing into a
/// new month starts a fresh record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonthLedger {
    pub month: MonthId,
    /// Running max of the mitigated hourly load (the gate's reference).
    pub historical_peak_mw: f64,
    /// Running max of the unmitigated hourly load.
    pub baseline_peak_mw: f64,
    pub operating_cost_dollars: f64,
    pub dr_hours: u32,
    pub battery_cycles: f64,
    pub days_observed: u32,
}

impl MonthLedger {
    pub fn start(month: MonthId) -> Self {
        Self {
            month,
            historical_peak_mw: 0.0,
            baseline_peak_mw: 0.0,
            operating_cost_dollars: 0.0,
            dr_hours: 0,
            battery_cycles: 0.0,
            days_observed: 0,
        }
    }

    /// Folds one day into the ledger. A day from a later month starts a new
    /// ledger seeded with that day (peaks reset to the day's maxima).
    pub fn update(
        &self,
        mitigated_day: &HourlyProfile,
        baseline_day: &HourlyProfile,
        costs: &DayCosts,
    ) -> MonthLedger {
        let month = mitigated_day.start().date.month_id();
        let base = if month == self.month { *self } else { MonthLedger::start(month) };
        MonthLedger {
            month,
            historical_peak_mw: base.historical_peak_mw.max(mitigated_day.max_value()),
            baseline_peak_mw: base.baseline_peak_mw.max(baseline_day.max_value()),
            operating_cost_dollars: base.operating_cost_dollars + costs.dg_cost_dollars,
            dr_hours: base.dr_hours + costs.dr_hours,
            battery_cycles: base.battery_cycles + costs.battery_cycles,
            days_observed: base.days_observed + 1,
        }
    }
}

/// Convenience wrapper matching the ledger-update operation shape.
pub fn update_ledger(
    ledger: &MonthLedger,
    mitigated_day: &HourlyProfile,
    baseline_day: &HourlyProfile,
    costs: &DayCosts,
) -> MonthLedger {
    ledger.update(mitigated_day, baseline_day, costs)
}

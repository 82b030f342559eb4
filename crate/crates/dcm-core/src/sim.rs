//! Year-long daily simulation: gate, select, optimize, evaluate, bill.
//!
//! Each day runs the execution gate against the month's running mitigated
//! peak; on run days the configured strategy picks targeted hours and the
//! dispatcher commits a plan, which is then applied to the realized load.
//! Months are billed on their coincident peak. Strategy comparison and
//! resource-sizing sweeps are thin loops over this core.

use crate::calendar::MonthId;
use crate::dispatch::{
    evaluate_on_actual, optimize, DispatchSchedule, ObjectiveConfig, ObjectiveKind,
};
use crate::domain::{validate_day_context, DayContext};
use crate::error::DcmError;
use crate::fleet::ResourceFleet;
use crate::resources::{BessSpec, DgSpec};
use crate::strategy::{
    gate, select_hours, DayCosts, GateConfig, GateDecision, MonthLedger, StrategyChoice,
    StrategyKind,
};

/// Demand-charge tariff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tariff {
    /// $ per kW of coincident monthly peak.
    pub demand_rate_per_kw_month: f64,
}

impl Tariff {
    pub fn new(demand_rate_per_kw_month: f64) -> Result<Self, DcmError> {
        if !(demand_rate_per_kw_month >= 0.0) {
            return Err(DcmError::invalid("tariff", "demand rate must be >= 0"));
        }
        Ok(Self { demand_rate_per_kw_month })
    }
}

impl Default for Tariff {
    fn default() -> Self {
        Self { demand_rate_per_kw_month: 20.0 }
    }
}

/// Demand charge for one month: `peak_mw * 1000 * rate`.
pub fn monthly_demand_charge(peak_mw: f64, tariff: &Tariff) -> f64 {
    peak_mw * 1000.0 * tariff.demand_rate_per_kw_month
}

/// Simulation-wide knobs shared by every strategy run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub gate: GateConfig,
    /// Peak-value weight for the probability-weighted objective.
    pub beta_f1_dollars_per_mw: f64,
    /// Peak-value weight for the peak-reduction objective.
    pub beta_f2_dollars_per_mw: f64,
    pub tcl_hour_penalty_dollars: f64,
    pub enumeration_budget: usize,
    pub search_node_budget: usize,
    /// Forces one objective for every strategy instead of the per-strategy
    /// default (probability weighting for s1, peak reduction otherwise).
    pub objective_override: Option<ObjectiveKind>,
}

impl Default for SimConfig {
    fn default() -> Self {
        let f1 = ObjectiveConfig::f1();
        Self {
            gate: GateConfig::default(),
            beta_f1_dollars_per_mw: f1.beta_dollars_per_mw,
            beta_f2_dollars_per_mw: f1.beta_dollars_per_mw,
            tcl_hour_penalty_dollars: f1.tcl_hour_penalty_dollars,
            enumeration_budget: f1.enumeration_budget,
            search_node_budget: f1.search_node_budget,
            objective_override: None,
        }
    }
}

impl SimConfig {
    fn objective_for(&self, strategy: StrategyKind) -> ObjectiveConfig {
        let mut cfg = ObjectiveConfig::for_strategy(strategy);
        if let Some(kind) = self.objective_override {
            cfg.kind = kind;
        }
        cfg.beta_dollars_per_mw = match cfg.kind {
            ObjectiveKind::F1ProbabilityWeighted => self.beta_f1_dollars_per_mw,
            ObjectiveKind::F2PeakReduction => self.beta_f2_dollars_per_mw,
        };
        cfg.tcl_hour_penalty_dollars = self.tcl_hour_penalty_dollars;
        cfg.enumeration_budget = self.enumeration_budget;
        cfg.search_node_budget = self.search_node_budget;
        cfg
    }
}

/// One billed month.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthReport {
    pub month: MonthId,
    pub baseline_peak_mw: f64,
    pub mitigated_peak_mw: f64,
    pub demand_charge_baseline: f64,
    pub demand_charge_mitigated: f64,
    pub operating_cost: f64,
    pub dr_hours: u32,
    pub battery_cycles: f64,
    /// `(baseline peak - mitigated peak) * rate * 1000 - operating cost`.
    pub savings: f64,
    /// Mitigation pushed the monthly peak above the baseline (payback shift).
    pub payback_shift: bool,
    pub negative_savings: bool,
}

/// One simulated day, kept for dispatch dumps and debugging.
#[derive(Debug, Clone, PartialEq)]
pub struct DayRecord {
    pub date: crate::calendar::Date,
    pub ran: bool,
    pub schedule: Option<DispatchSchedule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnualReport {
    pub strategy: StrategyChoice,
    pub months: Vec<MonthReport>,
    pub days: Vec<DayRecord>,
    pub run_days: u32,
    pub total_savings: f64,
    pub total_operating_cost: f64,
    pub total_demand_charge_baseline: f64,
    pub total_demand_charge_mitigated: f64,
}

impl AnnualReport {
    pub fn payback_shift_months(&self) -> Vec<MonthId> {
        self.months.iter().filter(|m| m.payback_shift).map(|m| m.month).collect()
    }
}

fn finalize_month(ledger: &MonthLedger, tariff: &Tariff) -> MonthReport {
    let charge_baseline = monthly_demand_charge(ledger.baseline_peak_mw, tariff);
    let charge_mitigated = monthly_demand_charge(ledger.historical_peak_mw, tariff);
    let savings = charge_baseline - charge_mitigated - ledger.operating_cost_dollars;
    MonthReport {
        month: ledger.month,
        baseline_peak_mw: ledger.baseline_peak_mw,
        mitigated_peak_mw: ledger.historical_peak_mw,
        demand_charge_baseline: charge_baseline,
        demand_charge_mitigated: charge_mitigated,
        operating_cost: ledger.operating_cost_dollars,
        dr_hours: ledger.dr_hours,
        battery_cycles: ledger.battery_cycles,
        savings,
        payback_shift: ledger.historical_peak_mw > ledger.baseline_peak_mw + 1e-9,
        negative_savings: savings < 0.0,
    }
}

/// Runs the daily loop over consecutive day contexts and bills each month.
/// Purely a function of its inputs: identical inputs produce identical
/// reports.
pub fn simulate_year(
    days: &[DayContext],
    fleet: &ResourceFleet,
    strategy: &StrategyChoice,
    tariff: &Tariff,
    cfg: &SimConfig,
) -> Result<AnnualReport, DcmError> {
    if days.is_empty() {
        return Err(DcmError::MissingDayData("no days supplied".into()));
    }
    for pair in days.windows(2) {
        if pair[0].date.next_day() != pair[1].date {
            return Err(DcmError::MissingDayData(format!(
                "days are not consecutive: {} then {}",
                pair[0].date, pair[1].date
            )));
        }
    }
    for ctx in days {
        let violations = validate_day_context(ctx);
        if !violations.is_empty() {
            return Err(DcmError::MissingDayData(format!(
                "{}: {}",
                ctx.date,
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            )));
        }
    }

    let usable_mwh = fleet.bess.as_ref().map(|b| b.usable_energy_mwh());
    let mut ledger = MonthLedger::start(days[0].date.month_id());
    let mut months = Vec::new();
    let mut day_records = Vec::with_capacity(days.len());
    let mut run_days = 0u32;

    for ctx in days {
        if ctx.date.month_id() != ledger.month {
            months.push(finalize_month(&ledger, tariff));
            ledger = MonthLedger::start(ctx.date.month_id());
        }
        let decision = gate(ctx, &ledger, &cfg.gate);
        let (mitigated, costs, record) = match decision {
            GateDecision::Run => {
                run_days += 1;
                let hours = select_hours(strategy, ctx)?;
                let ocfg = cfg.objective_for(strategy.kind);
                let schedule = optimize(ctx, &hours, fleet, &ocfg)?;
                let outcome =
                    evaluate_on_actual(&schedule, &ctx.actual_load, &ctx.temperature, fleet)?;
                let costs = DayCosts {
                    dg_cost_dollars: outcome.dg_cost_dollars,
                    dr_hours: outcome.dr_hours,
                    battery_cycles: usable_mwh
                        .map_or(0.0, |u| outcome.bess_storage_drawn_mwh / u),
                };
                (
                    outcome.mitigated,
                    costs,
                    DayRecord { date: ctx.date, ran: true, schedule: Some(schedule) },
                )
            }
            GateDecision::Skip => (
                ctx.actual_load.clone(),
                DayCosts::default(),
                DayRecord { date: ctx.date, ran: false, schedule: None },
            ),
        };
        ledger = ledger.update(&mitigated, &ctx.actual_load, &costs);
        day_records.push(record);
    }
    months.push(finalize_month(&ledger, tariff));

    let total_savings = months.iter().map(|m| m.savings).sum();
    let total_operating_cost = months.iter().map(|m| m.operating_cost).sum();
    let total_demand_charge_baseline = months.iter().map(|m| m.demand_charge_baseline).sum();
    let total_demand_charge_mitigated = months.iter().map(|m| m.demand_charge_mitigated).sum();
    Ok(AnnualReport {
        strategy: *strategy,
        months,
        days: day_records,
        run_days,
        total_savings,
        total_operating_cost,
        total_demand_charge_baseline,
        total_demand_charge_mitigated,
    })
}

/// Side-by-side run of the five strategies over the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyComparison {
    pub reports: Vec<AnnualReport>,
    /// Annual savings divided by the best strategy's savings; all zero (and
    /// flagged) when no strategy saves anything.
    pub normalized_savings: Vec<f64>,
    /// Winning strategy per month (ties to the lower strategy index).
    pub monthly_winners: Vec<(MonthId, StrategyKind)>,
    pub degenerate: bool,
}

pub fn compare_strategies(
    days: &[DayContext],
    fleet: &ResourceFleet,
    tariff: &Tariff,
    cfg: &SimConfig,
    x: usize,
    append_payback_hour: bool,
) -> Result<StrategyComparison, DcmError> {
    let mut reports = Vec::with_capacity(StrategyKind::ALL.len());
    for kind in StrategyKind::ALL {
        let choice = StrategyChoice::new(kind, x, append_payback_hour && kind.is_horizon())?;
        reports.push(simulate_year(days, fleet, &choice, tariff, cfg)?);
    }
    let best = reports.iter().map(|r| r.total_savings).fold(f64::NEG_INFINITY, f64::max);
    let degenerate = !(best > 0.0);
    let normalized_savings = reports
        .iter()
        .map(|r| if degenerate { 0.0 } else { r.total_savings / best })
        .collect();

    let mut monthly_winners = Vec::new();
    for (mi, month) in reports[0].months.iter().enumerate() {
        let mut winner = 0usize;
        for si in 1..reports.len() {
            if reports[si].months[mi].savings > reports[winner].months[mi].savings {
                winner = si;
            }
        }
        monthly_winners.push((month.month, StrategyKind::ALL[winner]));
    }
    Ok(StrategyComparison { reports, normalized_savings, monthly_winners, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepResource {
    Bess,
    Dg,
}

impl SweepResource {
    pub fn label(&self) -> &'static str {
        match self {
            SweepResource::Bess => "bess",
            SweepResource::Dg => "dg",
        }
    }

    pub fn parse(s: &str) -> Result<Self, DcmError> {
        match s.to_ascii_lowercase().as_str() {
            "bess" => Ok(SweepResource::Bess),
            "dg" => Ok(SweepResource::Dg),
            other => Err(DcmError::invalid("resource", format!("unknown resource {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rating_mw: f64,
    pub annual_savings: f64,
    /// Savings gained per MW over the previous grid point (from zero for
    /// the first row).
    pub marginal_savings_per_mw: f64,
    pub battery_cycles: f64,
    /// Savings per battery cycle (None for the generator sweep or when no
    /// cycles accrued).
    pub savings_per_cycle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub resource: SweepResource,
    pub strategy: StrategyChoice,
    pub rows: Vec<SweepRow>,
}

/// Single-resource fleet at the given rating; the battery carries
/// `storage_hours` of energy per MW of power.
fn fleet_for_rating(
    resource: SweepResource,
    rating_mw: f64,
    storage_hours: f64,
) -> Result<ResourceFleet, DcmError> {
    let mut fleet = ResourceFleet::empty();
    if rating_mw > 0.0 {
        match resource {
            SweepResource::Bess => {
                fleet.bess = Some(BessSpec::new(rating_mw, storage_hours * rating_mw, 0.0, 0.95)?);
            }
            SweepResource::Dg => {
                let d = DgSpec::default();
                fleet.dg =
                    Some(DgSpec::new(rating_mw, d.fuel_cost_per_kwh, d.energy_price_per_kwh)?);
            }
        }
    }
    Ok(fleet)
}

/// Annual savings and marginal benefit over a strictly increasing rating
/// grid for a single-resource fleet.
pub fn sensitivity_sweep(
    days: &[DayContext],
    resource: SweepResource,
    ratings_mw: &[f64],
    strategy: &StrategyChoice,
    tariff: &Tariff,
    cfg: &SimConfig,
    storage_hours: f64,
) -> Result<SweepReport, DcmError> {
    if ratings_mw.is_empty() {
        return Err(DcmError::invalid("sweep", "ratings list is empty"));
    }
    if ratings_mw.windows(2).any(|w| w[0] >= w[1]) || ratings_mw[0] < 0.0 {
        return Err(DcmError::invalid("sweep", "ratings must be strictly increasing and >= 0"));
    }
    if !(storage_hours > 0.0) {
        return Err(DcmError::invalid("sweep", "storage hours must be positive"));
    }
    let mut rows: Vec<SweepRow> = Vec::with_capacity(ratings_mw.len());
    let mut prev = (0.0, 0.0); // (rating, savings)
    for &rating in ratings_mw {
        let (savings, cycles) = if rating == 0.0 {
            (0.0, 0.0)
        } else {
            let fleet = fleet_for_rating(resource, rating, storage_hours)?;
            let report = simulate_year(days, &fleet, strategy, tariff, cfg)?;
            let cycles = report.months.iter().map(|m| m.battery_cycles).sum();
            (report.total_savings, cycles)
        };
        let marginal = if rating > prev.0 { (savings - prev.1) / (rating - prev.0) } else { 0.0 };
        rows.push(SweepRow {
            rating_mw: rating,
            annual_savings: savings,
            marginal_savings_per_mw: marginal,
            battery_cycles: cycles,
            savings_per_cycle: match resource {
                SweepResource::Bess if cycles > 0.0 => Some(savings / cycles),
                _ => None,
            },
        });
        prev = (rating, savings);
    }
    Ok(SweepReport { resource, strategy: *strategy, rows })
}

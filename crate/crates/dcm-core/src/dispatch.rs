//! The dispatch coordinator: selects one deployment option per categorical
//! resource (CVR and each TCL group) and a continuous battery/generator
//! schedule maximizing the configured objective.
//!
//! Two objectives exist. `F1` pays for probability-weighted reduction at the
//! targeted hours; its continuous part separates per hour and is solved by a
//! greedy allocation. `F2` pays for expected peak reduction; its continuous
//! part is a min-max problem solved exactly by scanning the breakpoints of
//! the piecewise-linear cost-versus-peak curve.
//!
//! The discrete space (one column per categorical resource) is searched by
//! exhaustive enumeration while the combination count fits the configured
//! budget, and otherwise by depth-first search with an optimistic completion
//! bound (per-hour shed envelope, payback and comfort cost ignored). Both
//! searches visit combinations in ascending index order and keep the first
//! best, so results are identical and deterministic.

use std::collections::HashMap;

use crate::cvr;
use crate::domain::{DayContext, HourlyProfile, TargetHourSet, HOURS_PER_DAY};
use crate::error::DcmError;
use crate::fleet::ResourceFleet;
use crate::resources::dg_cost;
use crate::strategy::StrategyKind;
use crate::tcl;

/// Widest targeted-hour set a non-collapsed categorical resource may span.
const MAX_RESOURCE_HOURS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Probability-weighted reduction over the targeted hours.
    F1ProbabilityWeighted,
    /// Expected peak-load reduction.
    F2PeakReduction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveConfig {
    pub kind: ObjectiveKind,
    /// Value of one MW of (weighted or peak) reduction; defaults to the
    /// demand-charge rate expressed per MW-month.
    pub beta_dollars_per_mw: f64,
    /// Comfort cost per TCL group-hour deployed.
    pub tcl_hour_penalty_dollars: f64,
    /// Combination count up to which the discrete space is enumerated.
    pub enumeration_budget: usize,
    /// Node cap for the bounded search above the enumeration budget.
    pub search_node_budget: usize,
}

impl ObjectiveConfig {
    pub fn f1() -> Self {
        Self {
            kind: ObjectiveKind::F1ProbabilityWeighted,
            beta_dollars_per_mw: 20_000.0,
            tcl_hour_penalty_dollars: 500.0,
            enumeration_budget: 100_000,
            search_node_budget: 2_000_000,
        }
    }

    pub fn f2() -> Self {
        Self { kind: ObjectiveKind::F2PeakReduction, ..Self::f1() }
    }

    /// The objective each strategy uses by default: probability weighting
    /// for the probability-driven top-X strategy, peak reduction otherwise.
    pub fn for_strategy(kind: StrategyKind) -> Self {
        match kind {
            StrategyKind::S1ProbTopX => Self::f1(),
            _ => Self::f2(),
        }
    }

    pub fn validate(&self) -> Result<(), DcmError> {
        if !(self.beta_dollars_per_mw >= 0.0) || !(self.tcl_hour_penalty_dollars >= 0.0) {
            return Err(DcmError::invalid("objective", "beta and penalty must be >= 0"));
        }
        if self.enumeration_budget == 0 || self.search_node_budget == 0 {
            return Err(DcmError::invalid("objective", "budgets must be >= 1"));
        }
        Ok(())
    }
}

/// One day's committed dispatch plan.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchSchedule {
    pub hours: TargetHourSet,
    /// Battery discharge per targeted hour (MW), aligned with `hours.hours()`.
    pub bess_mw: Vec<f64>,
    /// Generator output per targeted hour (MW).
    pub dg_mw: Vec<f64>,
    /// Selected CVR option index (column of the option matrix), if CVR exists.
    pub cvr_option: Option<usize>,
    pub cvr_column: Option<Vec<bool>>,
    /// Selected option index per TCL group, in fleet order.
    pub tcl_options: Vec<usize>,
    pub tcl_columns: Vec<Vec<bool>>,
    /// Total planned load delta for all 24 hours (positive = reduction,
    /// negative = TCL payback), including battery/generator dispatch.
    pub planned_delta_mw: [f64; HOURS_PER_DAY],
    /// Forecast minus planned delta at each targeted hour.
    pub predicted_residual_mw: Vec<f64>,
    /// Max predicted residual over the targeted (and appended) hours.
    pub predicted_peak_mw: f64,
    /// Net generator running cost of this plan ($).
    pub dg_cost_dollars: f64,
    pub objective_value: f64,
    /// True when all targeted-hour probabilities were zero and uniform
    /// weights were substituted (F1 only).
    pub uniform_weight_fallback: bool,
}

impl DispatchSchedule {
    /// Total TCL group-hours deployed.
    pub fn tcl_deployment_hours(&self) -> u32 {
        tcl::tcl_dr_hour_count(&self.tcl_columns)
    }

    pub fn bess_discharged_mwh(&self) -> f64 {
        self.bess_mw.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bess_mw.iter().all(|&v| v == 0.0)
            && self.dg_mw.iter().all(|&v| v == 0.0)
            && self.cvr_column.iter().flatten().all(|&b| !b)
            && self.tcl_columns.iter().flatten().all(|&b| !b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveScore {
    pub value: f64,
    pub uniform_weight_fallback: bool,
}

/// Probability weights over the targeted hours, normalized to sum to one.
/// An appended payback hour always weighs zero. Falls back to uniform
/// weights when every targeted-hour probability is zero.
fn f1_weights(probs: &[f64], hours: &TargetHourSet) -> (Vec<f64>, bool) {
    let deploy = hours.deployment_hours();
    let sum: f64 = deploy.iter().map(|&h| probs[h as usize]).sum();
    let fallback = !(sum > 0.0);
    let mut mu = vec![0.0; hours.len()];
    for (i, &h) in deploy.iter().enumerate() {
        mu[i] = if fallback { 1.0 / deploy.len() as f64 } else { probs[h as usize] / sum };
    }
    (mu, fallback)
}

fn c_od(schedule: &DispatchSchedule, cfg: &ObjectiveConfig) -> f64 {
    schedule.dg_cost_dollars
        + cfg.tcl_hour_penalty_dollars * schedule.tcl_deployment_hours() as f64
}

/// Probability-weighted reduction score:
/// `beta * sum(mu_t * delta_t) - (dg cost + tcl hour penalty)`.
pub fn objective_f1(
    schedule: &DispatchSchedule,
    ctx: &DayContext,
    cfg: &ObjectiveConfig,
) -> Result<ObjectiveScore, DcmError> {
    if ctx.peak_hour_probabilities.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("need 24 peak-hour probabilities".into()));
    }
    let (mu, fallback) = f1_weights(&ctx.peak_hour_probabilities, &schedule.hours);
    let weighted: f64 = schedule
        .hours
        .hours()
        .iter()
        .enumerate()
        .map(|(i, &h)| mu[i] * schedule.planned_delta_mw[h as usize])
        .sum();
    Ok(ObjectiveScore {
        value: cfg.beta_dollars_per_mw * weighted - c_od(schedule, cfg),
        uniform_weight_fallback: fallback,
    })
}

/// Expected peak-reduction score: `beta * (forecast value at the forecast
/// peak hour - max targeted residual) - (dg cost + tcl hour penalty)`.
pub fn objective_f2(
    schedule: &DispatchSchedule,
    ctx: &DayContext,
    cfg: &ObjectiveConfig,
) -> Result<f64, DcmError> {
    if ctx.forecast_load.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("need a 24-hour forecast".into()));
    }
    let (_, forecast_peak) = ctx.forecast_load.peak();
    let peak_reduction = forecast_peak - schedule.predicted_peak_mw;
    Ok(cfg.beta_dollars_per_mw * peak_reduction - c_od(schedule, cfg))
}

// ---------------------------------------------------------------------------
// Continuous inner problems
// ---------------------------------------------------------------------------

/// Battery parameters for the inner problems: (power cap MW, total grid-side
/// discharge budget MWh).
type BessCaps = (f64, f64);
/// Generator parameters: (power cap MW, net cost $/MWh).
type DgCaps = (f64, f64);

#[derive(Debug, Clone, Copy)]
struct InnerF2 {
    peak_mw: f64,
    /// `beta * (forecast peak - peak) - dg energy cost`.
    score_part: f64,
}

/// Smallest p with `sum_t (keys_t - p)^+ <= budget` (piecewise-linear solve).
fn min_peak_for_budget(keys: &[f64], budget: f64) -> f64 {
    let mut ks = keys.to_vec();
    ks.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = 0.0;
    for i in 0..ks.len() {
        prefix += ks[i];
        let p = (prefix - budget) / (i + 1) as f64;
        let lower = if i + 1 < ks.len() { ks[i + 1] } else { f64::NEG_INFINITY };
        if p >= lower {
            return p;
        }
    }
    f64::NEG_INFINITY
}

/// The p at which the battery budget starts binding:
/// `sum_t min((r_t - p)^+, power) = budget`, if such a point exists.
fn budget_crossing(residuals: &[f64], power: f64, budget: f64) -> Option<f64> {
    if power <= 0.0 {
        return None;
    }
    let usage =
        |p: f64| residuals.iter().map(|&r| (r - p).max(0.0).min(power)).sum::<f64>();
    let mut bps: Vec<f64> = residuals.iter().flat_map(|&r| [r, r - power]).collect();
    bps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    bps.dedup();
    let mut hi = bps[0];
    let mut usage_hi = usage(hi); // zero at the max residual
    if usage_hi >= budget {
        return Some(hi);
    }
    for &lo in &bps[1..] {
        let usage_lo = usage(lo);
        if usage_lo >= budget {
            let denom = usage_lo - usage_hi;
            let p = if denom <= 0.0 { lo } else { hi - (budget - usage_hi) * (hi - lo) / denom };
            return Some(p);
        }
        hi = lo;
        usage_hi = usage_lo;
    }
    None
}

/// Exact solve of the peak-targeting inner problem: choose the residual peak
/// p maximizing `beta * (f_peak - p) - cost_dg * dg_energy(p)` subject to the
/// power caps and the battery energy budget. The curve is piecewise linear
/// in p, so the optimum sits on one of the breakpoints collected here; the
/// battery (free) is always used before the generator. Ties prefer the
/// larger p, i.e. the least dispatch.
fn solve_f2(residuals: &[f64], f_peak: f64, bess: Option<BessCaps>, dg: Option<DgCaps>, beta: f64) -> InnerF2 {
    let p0 = residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (pb, eb) = bess.unwrap_or((0.0, 0.0));
    let (pg, cg) = dg.unwrap_or((0.0, 0.0));
    if pb <= 0.0 && pg <= 0.0 {
        return InnerF2 { peak_mw: p0, score_part: beta * (f_peak - p0) };
    }

    let p_power = residuals.iter().map(|r| r - pb - pg).fold(f64::NEG_INFINITY, f64::max);
    let mandatory_keys: Vec<f64> = residuals.iter().map(|r| r - pg).collect();
    let p_mandatory = min_peak_for_budget(&mandatory_keys, eb);
    let p_lo = p_power.max(p_mandatory).min(p0);

    let mut candidates = vec![p0, p_lo];
    for &r in residuals {
        for step in [0.0, pb, pg, pb + pg] {
            let c = r - step;
            if c > p_lo && c < p0 {
                candidates.push(c);
            }
        }
    }
    if let Some(pe) = budget_crossing(residuals, pb, eb) {
        if pe > p_lo && pe < p0 {
            candidates.push(pe);
        }
    }
    candidates.sort_by(|a, b| b.partial_cmp(a).unwrap());
    candidates.dedup();

    let mut best = InnerF2 { peak_mw: p0, score_part: f64::NEG_INFINITY };
    for &p in &candidates {
        let mut need_sum = 0.0;
        let mut bess_capable = 0.0;
        for &r in residuals {
            let need = (r - p).max(0.0);
            need_sum += need;
            bess_capable += need.min(pb);
        }
        let dg_energy = (need_sum - bess_capable.min(eb)).max(0.0);
        let score = beta * (f_peak - p) - cg * dg_energy;
        if score > best.score_part {
            best = InnerF2 { peak_mw: p, score_part: score };
        }
    }
    best
}

/// Splits the per-hour need at the chosen peak into battery and generator
/// shares: mandatory battery first (need above the generator cap), then the
/// remaining battery budget earliest hour first, generator for the rest.
fn realize_f2(
    residuals: &[f64],
    p: f64,
    bess: Option<BessCaps>,
    dg: Option<DgCaps>,
) -> (Vec<f64>, Vec<f64>) {
    let n = residuals.len();
    let (pb, eb) = bess.unwrap_or((0.0, 0.0));
    let (pg, _) = dg.unwrap_or((0.0, 0.0));
    let needs: Vec<f64> = residuals.iter().map(|&r| (r - p).max(0.0)).collect();
    let mut battery = vec![0.0; n];
    let mut budget = {
        let capable: f64 = needs.iter().map(|&v| v.min(pb)).sum();
        capable.min(eb)
    };
    for i in 0..n {
        let mandatory = (needs[i] - pg).max(0.0).min(pb);
        battery[i] = mandatory.min(budget);
        budget -= battery[i];
    }
    for i in 0..n {
        let extra = (needs[i].min(pb) - battery[i]).min(budget).max(0.0);
        battery[i] += extra;
        budget -= extra;
    }
    let generator: Vec<f64> = needs.iter().zip(&battery).map(|(&v, &b)| (v - b).max(0.0)).collect();
    (battery, generator)
}

/// Greedy solve of the probability-weighted inner problem: the generator
/// runs flat out wherever its weighted value beats its cost, the battery
/// budget goes to the highest weights first (ties to the earlier hour).
fn solve_f1(mu: &[f64], bess: Option<BessCaps>, dg: Option<DgCaps>, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let n = mu.len();
    let (pb, eb) = bess.unwrap_or((0.0, 0.0));
    let (pg, cg) = dg.unwrap_or((0.0, 0.0));
    let mut generator = vec![0.0; n];
    if pg > 0.0 {
        for i in 0..n {
            if beta * mu[i] > cg {
                generator[i] = pg;
            }
        }
    }
    let mut battery = vec![0.0; n];
    if pb > 0.0 && eb > 0.0 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| mu[b].partial_cmp(&mu[a]).unwrap().then(a.cmp(&b)));
        let mut budget = eb;
        for &i in &order {
            if mu[i] <= 0.0 || budget <= 0.0 {
                continue;
            }
            let amount = pb.min(budget);
            battery[i] = amount;
            budget -= amount;
        }
    }
    (battery, generator)
}

// ---------------------------------------------------------------------------
// Discrete search over categorical options
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum CatKind {
    Cvr,
    Tcl(usize),
}

struct Categorical {
    kind: CatKind,
    masks: Vec<u32>,
    /// Materialized net deltas (enumeration mode only).
    deltas: Option<Vec<[f64; HOURS_PER_DAY]>>,
    /// Comfort cost per deployed hour.
    penalty_per_hour: f64,
    /// Optimistic per-hour shed from any column (payback ignored).
    envelope: [f64; HOURS_PER_DAY],
}

struct SearchContext<'a> {
    ctx: &'a DayContext,
    hours: &'a TargetHourSet,
    fleet: &'a ResourceFleet,
}

fn column_delta(cat: &Categorical, mask: u32, sc: &SearchContext) -> Result<[f64; HOURS_PER_DAY], DcmError> {
    match cat.kind {
        CatKind::Cvr => {
            let mut delta = [0.0; HOURS_PER_DAY];
            for (i, &h) in sc.hours.deployment_hours().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    delta[h as usize] = cat.envelope[h as usize];
                }
            }
            Ok(delta)
        }
        CatKind::Tcl(group) => {
            let column = mask_to_column(mask, sc.hours.deployment_hours().len());
            let profile = tcl::dr_profile(
                &column,
                sc.hours,
                &sc.ctx.temperature,
                &sc.fleet.tcl_groups[group],
            )?;
            Ok(profile.net_mw())
        }
    }
}

fn mask_to_column(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn build_categoricals(sc: &SearchContext, cfg: &ObjectiveConfig) -> Result<Vec<Categorical>, DcmError> {
    let deploy = sc.hours.deployment_hours();
    let mut cats = Vec::new();
    if let Some(spec) = &sc.fleet.cvr {
        let mut envelope = [0.0; HOURS_PER_DAY];
        for &h in deploy {
            envelope[h as usize] =
                cvr::cvr_reduction(sc.ctx.forecast_load.value(h as usize), true, spec);
        }
        let masks = masks_or_collapse(&envelope, deploy, || {
            cvr::feasible_masks(deploy, spec.max_run_hours, spec.recovery_hours)
        })?;
        cats.push(Categorical { kind: CatKind::Cvr, masks, deltas: None, penalty_per_hour: 0.0, envelope });
    }
    for (gi, spec) in sc.fleet.tcl_groups.iter().enumerate() {
        let mut envelope = [0.0; HOURS_PER_DAY];
        for &h in deploy {
            let duty = tcl::duty_cycle(sc.ctx.temperature.value(h as usize), spec);
            envelope[h as usize] = spec.shed_at_duty(duty);
        }
        let masks = masks_or_collapse(&envelope, deploy, || {
            tcl::feasible_masks(deploy, spec.max_consecutive_hours)
        })?;
        cats.push(Categorical {
            kind: CatKind::Tcl(gi),
            masks,
            deltas: None,
            penalty_per_hour: cfg.tcl_hour_penalty_dollars,
            envelope,
        });
    }
    Ok(cats)
}

/// A resource whose shed is zero at every targeted hour can only produce the
/// all-zero delta; every non-empty column costs the same or more, so only
/// the do-nothing option (index 0) can win and the rest are dropped. This
/// keeps cool-season days cheap no matter how wide the horizon is.
fn masks_or_collapse(
    envelope: &[f64; HOURS_PER_DAY],
    deploy: &[u8],
    enumerate: impl FnOnce() -> Vec<u32>,
) -> Result<Vec<u32>, DcmError> {
    if envelope.iter().all(|&v| v == 0.0) {
        return Ok(vec![0]);
    }
    if deploy.len() > MAX_RESOURCE_HOURS {
        return Err(DcmError::SearchSpaceTooLarge { combinations: 1u128 << deploy.len() });
    }
    Ok(enumerate())
}

struct Evaluator {
    kind: ObjectiveKind,
    beta: f64,
    /// Forecast at each targeted hour.
    forecast_at: Vec<f64>,
    hour_idx: Vec<usize>,
    forecast_peak: f64,
    bess: Option<BessCaps>,
    dg: Option<DgCaps>,
    /// F1: weights plus the combo-independent battery/generator score part.
    mu: Vec<f64>,
    f1_const: f64,
    memo: HashMap<Vec<u64>, f64>,
}

impl Evaluator {
    fn new(sc: &SearchContext<'_>, cfg: &ObjectiveConfig) -> Result<Self, DcmError> {
        let hour_idx: Vec<usize> = sc.hours.hours().iter().map(|&h| h as usize).collect();
        let forecast_at: Vec<f64> = hour_idx.iter().map(|&h| sc.ctx.forecast_load.value(h)).collect();
        let (_, forecast_peak) = sc.ctx.forecast_load.peak();
        let bess = sc
            .fleet
            .bess
            .as_ref()
            .map(|b| (b.power_max_mw, b.max_grid_discharge_mwh()));
        let dg = sc.fleet.dg.as_ref().map(|d| (d.power_max_mw, d.net_cost_per_mwh()));
        let (mu, f1_const) = if cfg.kind == ObjectiveKind::F1ProbabilityWeighted {
            if sc.ctx.peak_hour_probabilities.len() != HOURS_PER_DAY {
                return Err(DcmError::DimensionMismatch("need 24 peak-hour probabilities".into()));
            }
            let (mu, _) = f1_weights(&sc.ctx.peak_hour_probabilities, sc.hours);
            let (b, g) = solve_f1(&mu, bess, dg, cfg.beta_dollars_per_mw);
            let weighted: f64 = mu.iter().zip(b.iter().zip(&g)).map(|(m, (x, y))| m * (x + y)).sum();
            let cost = dg.map_or(0.0, |(_, c)| c * g.iter().sum::<f64>());
            (mu, cfg.beta_dollars_per_mw * weighted - cost)
        } else {
            (Vec::new(), 0.0)
        };
        Ok(Self {
            kind: cfg.kind,
            beta: cfg.beta_dollars_per_mw,
            forecast_at,
            hour_idx,
            forecast_peak,
            bess,
            dg,
            mu,
            f1_const,
            memo: HashMap::new(),
        })
    }

    /// Exact score of a fully assigned combination.
    fn leaf(&mut self, delta: &[f64; HOURS_PER_DAY], penalty_dollars: f64) -> f64 {
        match self.kind {
            ObjectiveKind::F1ProbabilityWeighted => {
                let weighted: f64 = self
                    .hour_idx
                    .iter()
                    .zip(&self.mu)
                    .map(|(&h, &m)| m * delta[h])
                    .sum();
                self.f1_const + self.beta * weighted - penalty_dollars
            }
            ObjectiveKind::F2PeakReduction => {
                let residuals: Vec<f64> = self
                    .hour_idx
                    .iter()
                    .zip(&self.forecast_at)
                    .map(|(&h, &f)| f - delta[h])
                    .collect();
                let key: Vec<u64> = residuals.iter().map(|v| v.to_bits()).collect();
                if let Some(&cached) = self.memo.get(&key) {
                    return cached - penalty_dollars;
                }
                let inner = solve_f2(&residuals, self.forecast_peak, self.bess, self.dg, self.beta);
                self.memo.insert(key, inner.score_part);
                inner.score_part - penalty_dollars
            }
        }
    }
}

struct SearchBest {
    score: f64,
    combo: Vec<usize>,
}

fn enumerate_combinations(cats: &[Categorical], eval: &mut Evaluator) -> Result<SearchBest, DcmError> {
    let k = cats.len();
    let mut best = SearchBest { score: f64::NEG_INFINITY, combo: vec![0; k] };
    let mut combo = vec![0usize; k];
    loop {
        let mut delta = [0.0; HOURS_PER_DAY];
        let mut penalty = 0.0;
        for (ci, cat) in cats.iter().enumerate() {
            let d = &cat.deltas.as_ref().expect("deltas materialized")[combo[ci]];
            for h in 0..HOURS_PER_DAY {
                delta[h] += d[h];
            }
            penalty += cat.penalty_per_hour * cat.masks[combo[ci]].count_ones() as f64;
        }
        let score = eval.leaf(&delta, penalty);
        if score > best.score {
            best = SearchBest { score, combo: combo.clone() };
        }
        // Advance the odometer, last resource fastest (ascending combo index).
        let mut level = k;
        loop {
            if level == 0 {
                return Ok(best);
            }
            level -= 1;
            combo[level] += 1;
            if combo[level] < cats[level].masks.len() {
                break;
            }
            combo[level] = 0;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_level(
    level: usize,
    delta: [f64; HOURS_PER_DAY],
    penalty: f64,
    cats: &[Categorical],
    suffix_env: &[[f64; HOURS_PER_DAY]],
    eval: &mut Evaluator,
    sc: &SearchContext,
    combo: &mut Vec<usize>,
    best: &mut SearchBest,
    nodes: &mut usize,
    node_budget: usize,
) -> Result<(), DcmError> {
    for (j, &mask) in cats[level].masks.iter().enumerate() {
        *nodes += 1;
        if *nodes > node_budget {
            return Err(DcmError::SearchBudgetExceeded { nodes: *nodes });
        }
        combo[level] = j;
        let col_delta = column_delta(&cats[level], mask, sc)?;
        let mut d = delta;
        for h in 0..HOURS_PER_DAY {
            d[h] += col_delta[h];
        }
        let pen = penalty + cats[level].penalty_per_hour * mask.count_ones() as f64;
        if level + 1 == cats.len() {
            let score = eval.leaf(&d, pen);
            if score > best.score {
                *best = SearchBest { score, combo: combo.clone() };
            }
        } else {
            // Optimistic completion: every remaining resource sheds its
            // envelope at no comfort cost and with no payback.
            let mut optimistic = d;
            for h in 0..HOURS_PER_DAY {
                optimistic[h] += suffix_env[level + 1][h];
            }
            if eval.leaf(&optimistic, pen) > best.score {
                dfs_level(
                    level + 1,
                    d,
                    pen,
                    cats,
                    suffix_env,
                    eval,
                    sc,
                    combo,
                    best,
                    nodes,
                    node_budget,
                )?;
            }
        }
    }
    Ok(())
}

fn search(
    cats: &mut [Categorical],
    eval: &mut Evaluator,
    sc: &SearchContext,
    cfg: &ObjectiveConfig,
) -> Result<SearchBest, DcmError> {
    if cats.is_empty() {
        let score = eval.leaf(&[0.0; HOURS_PER_DAY], 0.0);
        return Ok(SearchBest { score, combo: Vec::new() });
    }
    let product: u128 = cats.iter().map(|c| c.masks.len() as u128).product();
    if product <= cfg.enumeration_budget as u128 {
        for cat in cats.iter_mut() {
            let deltas: Result<Vec<_>, DcmError> =
                cat.masks.iter().map(|&m| column_delta(cat, m, sc)).collect();
            cat.deltas = Some(deltas?);
        }
        enumerate_combinations(cats, eval)
    } else {
        let k = cats.len();
        let mut suffix_env = vec![[0.0; HOURS_PER_DAY]; k + 1];
        for i in (0..k).rev() {
            for h in 0..HOURS_PER_DAY {
                suffix_env[i][h] = suffix_env[i + 1][h] + cats[i].envelope[h];
            }
        }
        let mut best = SearchBest { score: f64::NEG_INFINITY, combo: vec![0; k] };
        let mut combo = vec![0usize; k];
        let mut nodes = 0usize;
        dfs_level(
            0,
            [0.0; HOURS_PER_DAY],
            0.0,
            cats,
            &suffix_env,
            eval,
            sc,
            &mut combo,
            &mut best,
            &mut nodes,
            cfg.search_node_budget,
        )?;
        Ok(best)
    }
}

// ---------------------------------------------------------------------------
// Optimize and evaluate
// ---------------------------------------------------------------------------

/// Finds the dispatch plan maximizing the configured objective over every
/// feasible combination of categorical options and the exact continuous
/// battery/generator optimum for each. Deterministic: among equal scores the
/// lowest combination index wins.
pub fn optimize(
    ctx: &DayContext,
    hours: &TargetHourSet,
    fleet: &ResourceFleet,
    cfg: &ObjectiveConfig,
) -> Result<DispatchSchedule, DcmError> {
    cfg.validate()?;
    if ctx.forecast_load.len() != HOURS_PER_DAY || ctx.temperature.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("day context profiles must cover 24 hours".into()));
    }
    let sc = SearchContext { ctx, hours, fleet };
    let mut cats = build_categoricals(&sc, cfg)?;
    let mut eval = Evaluator::new(&sc, cfg)?;
    let best = search(&mut cats, &mut eval, &sc, cfg)?;

    // Re-build the winning combination into a full schedule.
    let mut planned = [0.0; HOURS_PER_DAY];
    let mut cvr_option = None;
    let mut cvr_column = None;
    let mut tcl_options = Vec::new();
    let mut tcl_columns = Vec::new();
    let deploy_len = hours.deployment_hours().len();
    for (cat, &j) in cats.iter().zip(&best.combo) {
        let mask = cat.masks[j];
        let delta = column_delta(cat, mask, &sc)?;
        for h in 0..HOURS_PER_DAY {
            planned[h] += delta[h];
        }
        match cat.kind {
            CatKind::Cvr => {
                cvr_option = Some(j);
                cvr_column = Some(mask_to_column(mask, deploy_len));
            }
            CatKind::Tcl(_) => {
                tcl_options.push(j);
                tcl_columns.push(mask_to_column(mask, deploy_len));
            }
        }
    }

    let hour_idx: Vec<usize> = hours.hours().iter().map(|&h| h as usize).collect();
    let residuals: Vec<f64> =
        hour_idx.iter().map(|&h| ctx.forecast_load.value(h) - planned[h]).collect();
    let bess = fleet.bess.as_ref().map(|b| (b.power_max_mw, b.max_grid_discharge_mwh()));
    let dg = fleet.dg.as_ref().map(|d| (d.power_max_mw, d.net_cost_per_mwh()));
    let mut uniform_weight_fallback = false;
    let (bess_mw, dg_mw) = match cfg.kind {
        ObjectiveKind::F1ProbabilityWeighted => {
            let (mu, fallback) = f1_weights(&ctx.peak_hour_probabilities, hours);
            uniform_weight_fallback = fallback;
            solve_f1(&mu, bess, dg, cfg.beta_dollars_per_mw)
        }
        ObjectiveKind::F2PeakReduction => {
            let (_, forecast_peak) = ctx.forecast_load.peak();
            let inner = solve_f2(&residuals, forecast_peak, bess, dg, cfg.beta_dollars_per_mw);
            realize_f2(&residuals, inner.peak_mw, bess, dg)
        }
    };
    for (i, &h) in hour_idx.iter().enumerate() {
        planned[h] += bess_mw[i] + dg_mw[i];
    }
    let predicted_residual_mw: Vec<f64> =
        hour_idx.iter().map(|&h| ctx.forecast_load.value(h) - planned[h]).collect();
    let predicted_peak_mw =
        predicted_residual_mw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let dg_cost_dollars = match &fleet.dg {
        Some(spec) => dg_cost(&dg_mw, spec, 1.0)?,
        None => 0.0,
    };

    let mut schedule = DispatchSchedule {
        hours: hours.clone(),
        bess_mw,
        dg_mw,
        cvr_option,
        cvr_column,
        tcl_options,
        tcl_columns,
        planned_delta_mw: planned,
        predicted_residual_mw,
        predicted_peak_mw,
        dg_cost_dollars,
        objective_value: 0.0,
        uniform_weight_fallback,
    };
    schedule.objective_value = match cfg.kind {
        ObjectiveKind::F1ProbabilityWeighted => objective_f1(&schedule, ctx, cfg)?.value,
        ObjectiveKind::F2PeakReduction => objective_f2(&schedule, ctx, cfg)?,
    };
    debug_assert!(
        (schedule.objective_value - best.score).abs()
            <= 1e-6 * schedule.objective_value.abs().max(1.0),
        "search score {} disagrees with realized objective {}",
        best.score,
        schedule.objective_value
    );
    Ok(schedule)
}

/// One day's realized result after applying a committed schedule to actuals.
#[derive(Debug, Clone, PartialEq)]
pub struct DayOutcome {
    /// Actual load minus all committed reductions (plus TCL payback),
    /// floored at zero; full 24 hours.
    pub mitigated: HourlyProfile,
    pub dg_cost_dollars: f64,
    /// TCL group-hours deployed.
    pub dr_hours: u32,
    /// Grid-side battery discharge (MWh).
    pub bess_discharged_mwh: f64,
    /// Storage-side battery depletion (MWh), the cycle-count basis.
    pub bess_storage_drawn_mwh: f64,
}

/// Applies the committed schedule to the realized load: battery and
/// generator subtract as planned, CVR reduction is recomputed against the
/// actual load, and TCL shed/payback is recomputed against the temperature
/// profile. Payback lands wherever it falls, including hours outside the
/// targeted set.
pub fn evaluate_on_actual(
    schedule: &DispatchSchedule,
    actual: &HourlyProfile,
    temperature: &HourlyProfile,
    fleet: &ResourceFleet,
) -> Result<DayOutcome, DcmError> {
    if actual.len() != HOURS_PER_DAY || temperature.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("evaluation needs 24-hour profiles".into()));
    }
    if schedule.tcl_columns.len() != fleet.tcl_groups.len() {
        return Err(DcmError::DimensionMismatch(format!(
            "schedule has {} TCL columns for {} groups",
            schedule.tcl_columns.len(),
            fleet.tcl_groups.len()
        )));
    }
    if schedule.cvr_column.is_some() != fleet.cvr.is_some() {
        return Err(DcmError::DimensionMismatch(
            "schedule and fleet disagree on CVR presence".into(),
        ));
    }
    let mut delta = [0.0; HOURS_PER_DAY];
    for (i, &h) in schedule.hours.hours().iter().enumerate() {
        delta[h as usize] += schedule.bess_mw[i] + schedule.dg_mw[i];
    }
    if let (Some(spec), Some(column)) = (&fleet.cvr, &schedule.cvr_column) {
        let reductions = cvr::apply_cvr_option(column, actual, &schedule.hours, spec)?;
        for (i, &h) in schedule.hours.deployment_hours().iter().enumerate() {
            delta[h as usize] += reductions[i];
        }
    }
    let mut dr_hours = 0u32;
    for (spec, column) in fleet.tcl_groups.iter().zip(&schedule.tcl_columns) {
        let profile = tcl::dr_profile(column, &schedule.hours, temperature, spec)?;
        for h in 0..HOURS_PER_DAY {
            delta[h] += profile.delta_at(h);
        }
        dr_hours += column.iter().filter(|&&b| b).count() as u32;
    }
    let mitigated_values: Vec<f64> =
        (0..HOURS_PER_DAY).map(|h| (actual.value(h) - delta[h]).max(0.0)).collect();
    let mitigated = HourlyProfile::new(actual.start(), mitigated_values)?;
    let dg_cost_dollars = match &fleet.dg {
        Some(spec) => dg_cost(&schedule.dg_mw, spec, 1.0)?,
        None => 0.0,
    };
    let bess_discharged_mwh = schedule.bess_discharged_mwh();
    let bess_storage_drawn_mwh = match &fleet.bess {
        Some(spec) => bess_discharged_mwh / spec.discharge_efficiency,
        None => 0.0,
    };
    Ok(DayOutcome {
        mitigated,
        dg_cost_dollars,
        dr_hours,
        bess_discharged_mwh,
        bess_storage_drawn_mwh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::Date;
    use crate::resources::{BessSpec, DgSpec};
    use crate::tcl::TclGroupSpec;

    fn date() -> Date {
        Date::new(2021, 7, 15).unwrap()
    }

    fn ctx_from(forecast: Vec<f64>, probs: Vec<f64>, temp_c: f64) -> DayContext {
        DayContext {
            date: date(),
            forecast_load: HourlyProfile::single_day(date(), forecast.clone()).unwrap(),
            actual_load: HourlyProfile::single_day(date(), forecast).unwrap(),
            temperature: HourlyProfile::single_day(date(), vec![temp_c; 24]).unwrap(),
            peak_day_probability: 1.0,
            peak_hour_probabilities: probs,
        }
    }

    fn two_hour_ctx() -> DayContext {
        let mut forecast = vec![50.0; 24];
        forecast[16] = 100.0;
        forecast[17] = 98.0;
        ctx_from(forecast, vec![0.0; 24], 20.0)
    }

    #[test]
    fn empty_fleet_yields_zero_schedule() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let s = optimize(&ctx, &hours, &ResourceFleet::empty(), &ObjectiveConfig::f2()).unwrap();
        assert!(s.is_zero());
        assert!(s.objective_value.abs() < 1e-9);
        assert_eq!(s.predicted_peak_mw, 100.0);
    }

    #[test]
    fn bess_only_flattens_to_power_cap() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(10.0, 20.0, 0.0, 1.0).unwrap()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        assert!((s.bess_mw[0] - 10.0).abs() < 1e-9);
        assert!((s.bess_mw[1] - 8.0).abs() < 1e-9);
        assert!((s.predicted_peak_mw - 90.0).abs() < 1e-9);
    }

    #[test]
    fn dg_only_runs_flat_out_when_beta_dominates() {
        let mut forecast = vec![50.0; 24];
        forecast[17] = 100.0;
        let ctx = ctx_from(forecast, vec![0.0; 24], 20.0);
        let hours = TargetHourSet::new([17u8]).unwrap();
        let fleet = ResourceFleet { dg: Some(DgSpec::default()), ..ResourceFleet::empty() };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        // 20000 $/MW of peak value against 215 $/MWh of net fuel: full output.
        assert!((s.dg_mw[0] - 40.0).abs() < 1e-9);
        assert!((s.predicted_peak_mw - 60.0).abs() < 1e-9);
        let expected = 20_000.0 * 40.0 - 215.0 * 40.0;
        assert!((s.objective_value - expected).abs() < 1e-6);
    }

    #[test]
    fn f1_single_hour_full_probability() {
        let mut probs = vec![0.0; 24];
        probs[17] = 1.0;
        let mut forecast = vec![50.0; 24];
        forecast[17] = 100.0;
        let ctx = ctx_from(forecast, probs, 20.0);
        let hours = TargetHourSet::new([17u8]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(10.0, 20.0, 0.0, 1.0).unwrap()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f1()).unwrap();
        assert!((s.bess_mw[0] - 10.0).abs() < 1e-9);
        assert!((s.objective_value - 200_000.0).abs() < 1e-6);
        assert!(!s.uniform_weight_fallback);
    }

    #[test]
    fn f1_normalizes_probability_weights() {
        // p = (0.5, 0.25) over two hours, battery energy for one hour only:
        // mu = (2/3, 1/3), the battery goes to the 2/3 hour, score = beta*20/3.
        let mut probs = vec![0.0; 24];
        probs[16] = 0.5;
        probs[17] = 0.25;
        let mut forecast = vec![50.0; 24];
        forecast[16] = 100.0;
        forecast[17] = 98.0;
        let ctx = ctx_from(forecast, probs, 20.0);
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(10.0, 10.0, 0.0, 1.0).unwrap()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f1()).unwrap();
        assert!((s.bess_mw[0] - 10.0).abs() < 1e-9);
        assert_eq!(s.bess_mw[1], 0.0);
        let expected = 20_000.0 * 20.0 / 3.0;
        assert!((s.objective_value - expected).abs() < 1e-6);
    }

    #[test]
    fn f1_all_zero_probabilities_fall_back_to_uniform() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(10.0, 10.0, 0.0, 1.0).unwrap()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f1()).unwrap();
        assert!(s.uniform_weight_fallback);
        // Uniform weights tie; the earlier hour wins the energy.
        assert!((s.bess_mw[0] - 10.0).abs() < 1e-9);
        assert_eq!(s.bess_mw[1], 0.0);
    }

    #[test]
    fn f2_residuals_equalize_or_hit_power_cap() {
        let mut forecast = vec![50.0; 24];
        forecast[15] = 95.0;
        forecast[16] = 100.0;
        forecast[17] = 93.0;
        let ctx = ctx_from(forecast, vec![0.0; 24], 20.0);
        let hours = TargetHourSet::new([15u8, 16, 17]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(50.0, 200.0, 0.0, 1.0).unwrap()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        let p = s.predicted_peak_mw;
        for (i, &r) in s.predicted_residual_mw.iter().enumerate() {
            let equalized = (r - p).abs() < 1e-9;
            let capped = (s.bess_mw[i] - 50.0).abs() < 1e-9;
            let slack = s.bess_mw[i] == 0.0 && r <= p + 1e-9;
            assert!(equalized || capped || slack, "hour {i}: residual {r} vs peak {p}");
        }
    }

    #[test]
    fn adding_capacity_never_hurts_the_objective() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let mut last = f64::NEG_INFINITY;
        for power in [2.0, 5.0, 10.0, 20.0] {
            let fleet = ResourceFleet {
                bess: Some(BessSpec::new(power, 2.0 * power, 0.0, 0.95).unwrap()),
                dg: Some(DgSpec::new(power, 0.245, 0.03).unwrap()),
                ..ResourceFleet::empty()
            };
            let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
            assert!(s.objective_value >= last - 1e-9);
            last = s.objective_value;
        }
    }

    #[test]
    fn categorical_enumeration_picks_the_best_cvr_column() {
        // Three near-equal hours: the peak only drops if all three are
        // reduced together, and the all-on column is ruled out by the 3-hour
        // run limit, so the unique optimum covers hours 15-17 and leaves the
        // cheap hour 18 alone.
        let mut forecast = vec![400.0; 24];
        forecast[15] = 1000.0;
        forecast[16] = 999.0;
        forecast[17] = 998.0;
        forecast[18] = 500.0;
        let ctx = ctx_from(forecast, vec![0.0; 24], 20.0);
        let hours = TargetHourSet::span(15, 18).unwrap();
        let fleet =
            ResourceFleet { cvr: Some(crate::cvr::CvrSpec::default()), ..ResourceFleet::empty() };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        assert_eq!(s.cvr_column.clone().unwrap(), vec![true, true, true, false]);
        assert!((s.predicted_peak_mw - 996.0).abs() < 1e-9);
    }

    #[test]
    fn equal_scores_resolve_to_the_lowest_combination_index() {
        // Hour 15 towers over the rest: reducing any other hour changes
        // nothing, so every winning tie resolves to the least deployment.
        let mut forecast = vec![400.0; 24];
        forecast[15] = 1000.0;
        forecast[16] = 500.0;
        forecast[17] = 500.0;
        let ctx = ctx_from(forecast, vec![0.0; 24], 20.0);
        let hours = TargetHourSet::span(15, 17).unwrap();
        let fleet =
            ResourceFleet { cvr: Some(crate::cvr::CvrSpec::default()), ..ResourceFleet::empty() };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        assert_eq!(s.cvr_column.clone().unwrap(), vec![true, false, false]);
    }

    #[test]
    fn evaluate_identity_for_zero_schedule() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let fleet = ResourceFleet::empty();
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        let out = evaluate_on_actual(&s, &ctx.actual_load, &ctx.temperature, &fleet).unwrap();
        assert_eq!(out.mitigated.values(), ctx.actual_load.values());
        assert_eq!(out.dg_cost_dollars, 0.0);
        assert_eq!(out.dr_hours, 0);
    }

    #[test]
    fn evaluate_matches_prediction_under_perfect_forecast() {
        let ctx = two_hour_ctx();
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let fleet = ResourceFleet {
            bess: Some(BessSpec::new(10.0, 20.0, 0.0, 1.0).unwrap()),
            dg: Some(DgSpec::default()),
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        let out = evaluate_on_actual(&s, &ctx.actual_load, &ctx.temperature, &fleet).unwrap();
        for (i, &h) in hours.hours().iter().enumerate() {
            assert!(
                (out.mitigated.value(h as usize) - s.predicted_residual_mw[i]).abs() < 1e-9,
                "hour {h}"
            );
        }
    }

    #[test]
    fn payback_bump_appears_after_dr_block() {
        let mut forecast = vec![8_000.0; 24];
        for (h, v) in [(17, 9_500.0), (18, 9_700.0), (19, 9_600.0), (20, 8_800.0)] {
            forecast[h] = v;
        }
        let ctx = ctx_from(forecast, vec![0.0; 24], 36.0);
        let hours = TargetHourSet::span(17, 19).unwrap();
        let fleet = ResourceFleet {
            tcl_groups: vec![TclGroupSpec::cycling(60_000, 5.0), TclGroupSpec::full_off(60_000, 5.0)],
            ..ResourceFleet::empty()
        };
        let s = optimize(&ctx, &hours, &fleet, &ObjectiveConfig::f2()).unwrap();
        assert!(!s.is_zero(), "hot day with big fleet should deploy");
        let out = evaluate_on_actual(&s, &ctx.actual_load, &ctx.temperature, &fleet).unwrap();
        assert!(
            out.mitigated.value(20) > ctx.actual_load.value(20),
            "payback should raise hour 20 above the baseline"
        );
    }

    #[test]
    fn appended_hour_exposes_payback_to_the_peak_constraint() {
        let mut forecast = vec![8_000.0; 24];
        for (h, v) in [(17, 9_500.0), (18, 9_700.0), (19, 9_600.0), (20, 9_100.0)] {
            forecast[h] = v;
        }
        let ctx = ctx_from(forecast, vec![0.0; 24], 36.0);
        let fleet = ResourceFleet {
            tcl_groups: vec![TclGroupSpec::cycling(60_000, 5.0), TclGroupSpec::full_off(60_000, 5.0)],
            ..ResourceFleet::empty()
        };
        let blind = TargetHourSet::span(17, 19).unwrap();
        let aware = TargetHourSet::span(17, 19).unwrap().with_appended_payback_hour();
        let s_blind = optimize(&ctx, &blind, &fleet, &ObjectiveConfig::f2()).unwrap();
        let s_aware = optimize(&ctx, &aware, &fleet, &ObjectiveConfig::f2()).unwrap();
        let metric = |s: &DispatchSchedule| {
            (17..=20)
                .map(|h| ctx.forecast_load.value(h) - s.planned_delta_mw[h])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        assert!(metric(&s_aware) <= metric(&s_blind) + 1e-9);
    }

    #[test]
    fn objective_f2_goes_negative_when_payback_creates_a_higher_peak() {
        // Hand-built schedule: shed 10 at the peak hour, pay back 50 at the
        // appended hour where the forecast is nearly as high.
        let mut forecast = vec![50.0; 24];
        forecast[17] = 100.0;
        forecast[18] = 95.0;
        let ctx = ctx_from(forecast, vec![0.0; 24], 30.0);
        let hours = TargetHourSet::span(17, 17).unwrap().with_appended_payback_hour();
        let mut planned = [0.0; HOURS_PER_DAY];
        planned[17] = 10.0;
        planned[18] = -50.0;
        let schedule = DispatchSchedule {
            hours: hours.clone(),
            bess_mw: vec![0.0; 2],
            dg_mw: vec![0.0; 2],
            cvr_option: None,
            cvr_column: None,
            tcl_options: vec![],
            tcl_columns: vec![],
            planned_delta_mw: planned,
            predicted_residual_mw: vec![90.0, 145.0],
            predicted_peak_mw: 145.0,
            dg_cost_dollars: 0.0,
            objective_value: 0.0,
            uniform_weight_fallback: false,
        };
        let cfg = ObjectiveConfig::f2();
        let v = objective_f2(&schedule, &ctx, &cfg).unwrap();
        assert!(v < 0.0);
    }

    #[test]
    fn solver_helpers_solve_piecewise_boundaries() {
        // min_peak_for_budget: two hours at 100 and 98, budget 20 -> p = 89.
        let p = min_peak_for_budget(&[100.0, 98.0], 20.0);
        assert!((p - 89.0).abs() < 1e-9);
        // Budget 0 pins p at the max key.
        assert!((min_peak_for_budget(&[100.0, 98.0], 0.0) - 100.0).abs() < 1e-12);
        // budget_crossing: power 10, budget 20 binds at p = 88.
        let pe = budget_crossing(&[100.0, 98.0], 10.0, 20.0).unwrap();
        assert!((pe - 88.0).abs() < 1e-9);
        assert!(budget_crossing(&[100.0, 98.0], 10.0, 1_000.0).is_none());
    }
}

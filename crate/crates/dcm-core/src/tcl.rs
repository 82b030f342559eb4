//! Aggregate HVAC fleet model for thermostatically-controlled-load demand
//! response, including the post-event payback (rebound) of deferred energy.
//!
//! Two control group kinds exist: a cycling group (compressors forced off 10
//! minutes out of every 30, so at most 2/3 duty survives) and a full-off
//! group (everything off, limited to short runs). Fleet consumption follows
//! a linear duty-cycle model between a balance temperature and a design
//! temperature. Energy shed during an event is deferred, not avoided: after
//! each run it returns as extra load, limited hour by hour to the fleet's
//! idle headroom. Whatever remains unpaid at the end of the day is absorbed
//! in hour 23 so that deferred energy is conserved exactly.

use crate::domain::{HourlyProfile, OptionMatrix, TargetHourSet, HOURS_PER_DAY};
use crate::error::DcmError;

/// Duty fraction the cycling rule leaves available for shedding.
const CYCLING_DUTY_CAP: f64 = 2.0 / 3.0;

/// Largest hour count the eager option builder will materialize (2^16 options).
const MAX_BUILD_HOURS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TclGroupKind {
    /// 10 minutes off in every 30: sheds only duty above 2/3, no run limit.
    Cycling10In30,
    /// Compressors fully off: sheds the whole group load, short runs only.
    FullOff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TclGroupSpec {
    pub kind: TclGroupKind,
    /// Number of HVAC units in the group.
    pub unit_count: u32,
    /// Rated compressor power per unit (kW).
    pub rated_power_kw: f64,
    /// Scale factor from simulated typical units to the field population.
    pub scale_factor: f64,
    /// Longest allowed consecutive deployment (None = unlimited).
    pub max_consecutive_hours: Option<u8>,
    /// Temperature at which the fleet draws nothing (C).
    pub balance_temp_c: f64,
    /// Temperature at which the fleet runs continuously (C).
    pub design_temp_c: f64,
    /// Fraction of shed energy that returns as payback.
    pub payback_recovery_fraction: f64,
}

impl TclGroupSpec {
    pub fn new(
        kind: TclGroupKind,
        unit_count: u32,
        rated_power_kw: f64,
        scale_factor: f64,
        max_consecutive_hours: Option<u8>,
        balance_temp_c: f64,
        design_temp_c: f64,
        payback_recovery_fraction: f64,
    ) -> Result<Self, DcmError> {
        if unit_count == 0 {
            return Err(DcmError::invalid("tcl spec", "unit_count must be positive"));
        }
        if !(rated_power_kw > 0.0) || !(scale_factor > 0.0) {
            return Err(DcmError::invalid("tcl spec", "rated power and scale must be positive"));
        }
        if !(balance_temp_c < design_temp_c) {
            return Err(DcmError::invalid("tcl spec", "balance temp must be below design temp"));
        }
        if !(0.9..=1.1).contains(&payback_recovery_fraction) {
            return Err(DcmError::invalid("tcl spec", "recovery fraction must be in [0.9, 1.1]"));
        }
        if max_consecutive_hours == Some(0) {
            return Err(DcmError::invalid("tcl spec", "run limit must be >= 1 when set"));
        }
        Ok(Self {
            kind,
            unit_count,
            rated_power_kw,
            scale_factor,
            max_consecutive_hours,
            balance_temp_c,
            design_temp_c,
            payback_recovery_fraction,
        })
    }

    /// Cycling group with the default 30,000 x 5 kW fleet and 18/40 C band.
    pub fn cycling(unit_count: u32, rated_power_kw: f64) -> Self {
        Self {
            kind: TclGroupKind::Cycling10In30,
            unit_count,
            rated_power_kw,
            scale_factor: 1.0,
            max_consecutive_hours: None,
            balance_temp_c: 18.0,
            design_temp_c: 40.0,
            payback_recovery_fraction: 1.0,
        }
    }

    /// Full-off group limited to 2 consecutive hours.
    pub fn full_off(unit_count: u32, rated_power_kw: f64) -> Self {
        Self {
            kind: TclGroupKind::FullOff,
            unit_count,
            rated_power_kw,
            scale_factor: 1.0,
            max_consecutive_hours: Some(2),
            balance_temp_c: 18.0,
            design_temp_c: 40.0,
            payback_recovery_fraction: 1.0,
        }
    }

    /// Field-scale connected capacity (MW).
    pub fn capacity_mw(&self) -> f64 {
        self.unit_count as f64 * self.rated_power_kw * self.scale_factor / 1000.0
    }

    /// Shed available at the given duty when deployed (MW).
    pub fn shed_at_duty(&self, duty: f64) -> f64 {
        match self.kind {
            TclGroupKind::Cycling10In30 => (duty - CYCLING_DUTY_CAP).max(0.0) * self.capacity_mw(),
            TclGroupKind::FullOff => duty * self.capacity_mw(),
        }
    }
}

/// Fraction of the hour the fleet's compressors run at the given ambient
/// temperature: linear between the balance and design temperatures.
pub fn duty_cycle(temp_c: f64, spec: &TclGroupSpec) -> f64 {
    ((temp_c - spec.balance_temp_c) / (spec.design_temp_c - spec.balance_temp_c)).clamp(0.0, 1.0)
}

/// Uncontrolled fleet consumption from the ambient temperature profile (MW).
pub fn hvac_normal_profile(
    temperature: &HourlyProfile,
    spec: &TclGroupSpec,
) -> Result<HourlyProfile, DcmError> {
    if temperature.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("temperature profile must cover 24 hours".into()));
    }
    let cap = spec.capacity_mw();
    let values = temperature.values().iter().map(|&t| duty_cycle(t, spec) * cap).collect();
    HourlyProfile::new(temperature.start(), values)
}

/// One deployment option's effect on system load over the whole day.
///
/// `shed` holds the reduction during deployed hours, `payback` the extra
/// load while deferred energy returns; both are non-negative and the net
/// load delta at hour h is `shed[h] - payback[h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrProfile {
    shed_mw: [f64; HOURS_PER_DAY],
    payback_mw: [f64; HOURS_PER_DAY],
}

impl DrProfile {
    pub fn zero() -> Self {
        Self { shed_mw: [0.0; HOURS_PER_DAY], payback_mw: [0.0; HOURS_PER_DAY] }
    }

    pub fn shed_mw(&self) -> &[f64; HOURS_PER_DAY] {
        &self.shed_mw
    }

    pub fn payback_mw(&self) -> &[f64; HOURS_PER_DAY] {
        &self.payback_mw
    }

    /// Net load delta at the given hour (positive = reduction).
    pub fn delta_at(&self, hour: usize) -> f64 {
        self.shed_mw[hour] - self.payback_mw[hour]
    }

    /// Net load delta for all 24 hours.
    pub fn net_mw(&self) -> [f64; HOURS_PER_DAY] {
        let mut out = [0.0; HOURS_PER_DAY];
        for h in 0..HOURS_PER_DAY {
            out[h] = self.shed_mw[h] - self.payback_mw[h];
        }
        out
    }

    pub fn shed_energy_mwh(&self) -> f64 {
        self.shed_mw.iter().sum()
    }

    pub fn payback_energy_mwh(&self) -> f64 {
        self.payback_mw.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.shed_mw.iter().all(|&v| v == 0.0) && self.payback_mw.iter().all(|&v| v == 0.0)
    }
}

/// Simulates one deployment column (bit per deployment hour) and returns the
/// full-day load delta including payback.
///
/// Deferred energy accumulates as `kappa * shed` while deployed. At every
/// non-deployed hour it flows back, limited to the fleet's idle headroom
/// `(1 - duty) * capacity`; any remainder at the end of the day is absorbed
/// in hour 23 regardless of headroom so the energy balance closes.
pub fn dr_profile(
    column: &[bool],
    hours: &TargetHourSet,
    temperature: &HourlyProfile,
    spec: &TclGroupSpec,
) -> Result<DrProfile, DcmError> {
    let deploy_hours = hours.deployment_hours();
    if column.len() != deploy_hours.len() {
        return Err(DcmError::DimensionMismatch(format!(
            "column has {} entries for {} deployment hours",
            column.len(),
            deploy_hours.len()
        )));
    }
    if temperature.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("temperature profile must cover 24 hours".into()));
    }
    let mut deployed = [false; HOURS_PER_DAY];
    for (&h, &on) in deploy_hours.iter().zip(column) {
        deployed[h as usize] = on;
    }
    if let Some(limit) = spec.max_consecutive_hours {
        let mut run = 0u8;
        for &on in &deployed {
            run = if on { run + 1 } else { 0 };
            if run > limit {
                return Err(DcmError::invalid(
                    "tcl deployment",
                    format!("run exceeds the {limit}-hour limit"),
                ));
            }
        }
    }

    let cap = spec.capacity_mw();
    let kappa = spec.payback_recovery_fraction;
    let mut out = DrProfile::zero();
    let mut pending_mwh = 0.0;
    for h in 0..HOURS_PER_DAY {
        let duty = duty_cycle(temperature.value(h), spec);
        if deployed[h] {
            let shed = spec.shed_at_duty(duty);
            out.shed_mw[h] = shed;
            pending_mwh += kappa * shed;
        } else if pending_mwh > 0.0 {
            let headroom = (1.0 - duty) * cap;
            let take = pending_mwh.min(headroom.max(0.0));
            out.payback_mw[h] = take;
            pending_mwh -= take;
        }
    }
    if pending_mwh > 0.0 {
        // Day-end closure: the deferred energy has nowhere else to go.
        out.payback_mw[HOURS_PER_DAY - 1] += pending_mwh;
    }
    Ok(out)
}

/// Feasible deployment masks over the given hours, ascending; runs are
/// counted on the 24-hour clock.
pub(crate) fn feasible_masks(hours: &[u8], max_consecutive: Option<u8>) -> Vec<u32> {
    let n = hours.len();
    match max_consecutive {
        None => (0u32..1 << n).collect(),
        Some(limit) => (0u32..1 << n)
            .filter(|&mask| {
                let mut on = [false; HOURS_PER_DAY];
                for (i, &h) in hours.iter().enumerate() {
                    on[h as usize] = mask >> i & 1 == 1;
                }
                let mut run = 0u8;
                on.iter().all(|&bit| {
                    run = if bit { run + 1 } else { 0 };
                    run <= limit
                })
            })
            .collect(),
    }
}

/// Deployment options for one group plus their load-delta profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct TclOptionSet {
    pub deployment: OptionMatrix,
    pub reduction: Vec<DrProfile>,
}

impl TclOptionSet {
    pub fn option_count(&self) -> usize {
        self.deployment.option_count()
    }
}

/// Enumerates every deployment option for a group, with its full load-delta
/// profile. Exponential in the hour count; callers keep targeted horizons
/// small (the dispatcher enforces its own budget).
///
/// # Panics
///
/// Panics when asked to materialize more than 2^16 options.
pub fn build_tcl_options(
    hours: &TargetHourSet,
    temperature: &HourlyProfile,
    spec: &TclGroupSpec,
) -> Result<TclOptionSet, DcmError> {
    let deploy = TargetHourSet::new(hours.deployment_hours().iter().copied())?;
    assert!(
        deploy.len() <= MAX_BUILD_HOURS,
        "refusing to materialize 2^{} deployment options",
        deploy.len()
    );
    let masks = feasible_masks(deploy.hours(), spec.max_consecutive_hours);
    let deployment = OptionMatrix::from_masks(deploy, masks)?;
    let reduction: Result<Vec<DrProfile>, DcmError> = (0..deployment.option_count())
        .map(|j| dr_profile(&deployment.column(j), deployment.hours(), temperature, spec))
        .collect();
    Ok(TclOptionSet { deployment, reduction: reduction? })
}

/// Elementwise sum of the selected groups' load deltas (scale factors are
/// already inside each profile). Positive = reduction, negative = payback.
pub fn total_tcl_reduction(selected: &[&DrProfile]) -> [f64; HOURS_PER_DAY] {
    let mut out = [0.0; HOURS_PER_DAY];
    for profile in selected {
        for h in 0..HOURS_PER_DAY {
            out[h] += profile.delta_at(h);
        }
    }
    out
}

/// Total deployed hours across groups (the comfort-cost driver).
pub fn tcl_dr_hour_count(columns: &[Vec<bool>]) -> u32 {
    columns.iter().flatten().filter(|&&b| b).count() as u32
}

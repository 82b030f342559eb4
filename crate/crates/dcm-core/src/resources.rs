//! Battery energy storage and diesel generator models.
//!
//! The battery is a discharge-only day-ahead resource: it starts each day
//! fully charged and only discharges during targeted hours. The generator
//! has a flat energy-proportional cost, net of the avoided energy purchase.

use crate::error::DcmError;

/// Energy tolerance (MWh) absorbing float round-off in feasibility checks.
const ENERGY_EPS: f64 = 1e-9;

/// Battery energy storage system ratings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BessSpec {
    /// Maximum discharge power (MW).
    pub power_max_mw: f64,
    /// Maximum stored energy (MWh).
    pub energy_max_mwh: f64,
    /// Minimum stored energy (MWh).
    pub energy_min_mwh: f64,
    /// Discharging efficiency, in (0, 1].
    pub discharge_efficiency: f64,
}

impl BessSpec {
    pub fn new(
        power_max_mw: f64,
        energy_max_mwh: f64,
        energy_min_mwh: f64,
        discharge_efficiency: f64,
    ) -> Result<Self, DcmError> {
        if !(power_max_mw > 0.0) || !power_max_mw.is_finite() {
            return Err(DcmError::invalid("bess spec", "power_max must be positive"));
        }
        if !(energy_min_mwh >= 0.0 && energy_min_mwh < energy_max_mwh) {
            return Err(DcmError::invalid("bess spec", "need 0 <= energy_min < energy_max"));
        }
        if !(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0) {
            return Err(DcmError::invalid("bess spec", "efficiency must be in (0, 1]"));
        }
        Ok(Self { power_max_mw, energy_max_mwh, energy_min_mwh, discharge_efficiency })
    }

    /// Storage band available for cycling (MWh).
    pub fn usable_energy_mwh(&self) -> f64 {
        self.energy_max_mwh - self.energy_min_mwh
    }

    /// Maximum total grid-side discharge from a full battery (MWh).
    pub fn max_grid_discharge_mwh(&self) -> f64 {
        self.discharge_efficiency * self.usable_energy_mwh()
    }
}

impl Default for BessSpec {
    /// 2 hours at 10 MW, full usable band, 95% discharge efficiency.
    fn default() -> Self {
        Self {
            power_max_mw: 10.0,
            energy_max_mwh: 20.0,
            energy_min_mwh: 0.0,
            discharge_efficiency: 0.95,
        }
    }
}

/// Battery state of charge at the end of an hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BessState {
    energy_mwh: f64,
}

impl BessState {
    /// Fully charged, the assumed start-of-day state.
    pub fn full(spec: &BessSpec) -> Self {
        Self { energy_mwh: spec.energy_max_mwh }
    }

    pub fn with_energy(energy_mwh: f64, spec: &BessSpec) -> Result<Self, DcmError> {
        if energy_mwh < spec.energy_min_mwh - ENERGY_EPS
            || energy_mwh > spec.energy_max_mwh + ENERGY_EPS
        {
            return Err(DcmError::invalid("bess state", "energy outside [E_min, E_max]"));
        }
        Ok(Self { energy_mwh })
    }

    pub fn energy_mwh(&self) -> f64 {
        self.energy_mwh
    }
}

/// Discharges for `dt_hours` at `discharge_mw`, draining `discharge/eta * dt`
/// from storage. Fails when the power cap or the minimum-energy bound would
/// be violated.
pub fn bess_step(
    state: BessState,
    discharge_mw: f64,
    spec: &BessSpec,
    dt_hours: f64,
) -> Result<BessState, DcmError> {
    if !(discharge_mw >= 0.0) {
        return Err(DcmError::InfeasibleStep(format!("negative discharge {discharge_mw} MW")));
    }
    if discharge_mw > spec.power_max_mw {
        return Err(DcmError::InfeasibleStep(format!(
            "discharge {discharge_mw} MW above power cap {} MW",
            spec.power_max_mw
        )));
    }
    let energy = state.energy_mwh - discharge_mw / spec.discharge_efficiency * dt_hours;
    if energy < spec.energy_min_mwh - ENERGY_EPS {
        return Err(DcmError::InfeasibleStep(format!(
            "energy would fall to {energy} MWh, below minimum {} MWh",
            spec.energy_min_mwh
        )));
    }
    Ok(BessState { energy_mwh: energy.max(spec.energy_min_mwh) })
}

/// Largest discharge for which [`bess_step`] succeeds:
/// `min(power_max, (energy - energy_min) * eta / dt)`.
pub fn bess_max_feasible(state: BessState, spec: &BessSpec, dt_hours: f64) -> f64 {
    let energy_limited =
        (state.energy_mwh - spec.energy_min_mwh).max(0.0) * spec.discharge_efficiency / dt_hours;
    spec.power_max_mw.min(energy_limited)
}

/// Diesel generator ratings and tariff constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgSpec {
    /// Maximum output (MW).
    pub power_max_mw: f64,
    /// Fuel cost ($/kWh).
    pub fuel_cost_per_kwh: f64,
    /// Avoided wholesale energy price ($/kWh).
    pub energy_price_per_kwh: f64,
}

impl DgSpec {
    pub fn new(
        power_max_mw: f64,
        fuel_cost_per_kwh: f64,
        energy_price_per_kwh: f64,
    ) -> Result<Self, DcmError> {
        if !(power_max_mw >= 0.0) || !power_max_mw.is_finite() {
            return Err(DcmError::invalid("dg spec", "power_max must be non-negative"));
        }
        if !(fuel_cost_per_kwh >= 0.0) || !(energy_price_per_kwh >= 0.0) {
            return Err(DcmError::invalid("dg spec", "tariffs must be non-negative"));
        }
        Ok(Self { power_max_mw, fuel_cost_per_kwh, energy_price_per_kwh })
    }

    /// Net running cost per grid-side MWh: (fuel - energy price) * 1000.
    pub fn net_cost_per_mwh(&self) -> f64 {
        (self.fuel_cost_per_kwh - self.energy_price_per_kwh) * 1000.0
    }
}

impl Default for DgSpec {
    /// 40 MW at 0.245 $/kWh fuel, 0.03 $/kWh avoided energy.
    fn default() -> Self {
        Self { power_max_mw: 40.0, fuel_cost_per_kwh: 0.245, energy_price_per_kwh: 0.03 }
    }
}

/// Generation cost over a per-hour MW schedule, net of the avoided energy
/// purchase: `(fuel - price) * sum(P_t * dt) * 1000`.
pub fn dg_cost(schedule_mw: &[f64], spec: &DgSpec, dt_hours: f64) -> Result<f64, DcmError> {
    for (t, &p) in schedule_mw.iter().enumerate() {
        if !(0.0..=spec.power_max_mw + 1e-9).contains(&p) {
            return Err(DcmError::invalid(
                "dg schedule",
                format!("entry {p} MW at position {t} outside [0, {}]", spec.power_max_mw),
            ));
        }
    }
    let energy_mwh: f64 = schedule_mw.iter().map(|p| p * dt_hours).sum();
    Ok(spec.net_cost_per_mwh() * energy_mwh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: f64, emax: f64, emin: f64, eta: f64) -> BessSpec {
        BessSpec::new(p, emax, emin, eta).unwrap()
    }

    #[test]
    fn step_drains_energy() {
        let s = spec(10.0, 20.0, 0.0, 1.0);
        let st = bess_step(BessState::full(&s), 10.0, &s, 1.0).unwrap();
        assert!((st.energy_mwh() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn step_identity_at_zero_discharge() {
        let s = spec(10.0, 20.0, 0.0, 1.0);
        let st = bess_step(BessState::full(&s), 0.0, &s, 1.0).unwrap();
        assert!((st.energy_mwh() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn step_accounts_for_efficiency() {
        let s = spec(10.0, 20.0, 0.0, 0.95);
        let st = bess_step(BessState::full(&s), 10.0, &s, 1.0).unwrap();
        assert!((st.energy_mwh() - (20.0 - 10.0 / 0.95)).abs() < 1e-12);
        assert!((st.energy_mwh() - 9.4737).abs() < 1e-4);
    }

    #[test]
    fn step_rejects_invalid_discharge() {
        let s = spec(10.0, 20.0, 0.0, 1.0);
        assert!(bess_step(BessState::full(&s), -1.0, &s, 1.0).is_err());
        assert!(bess_step(BessState::full(&s), 10.5, &s, 1.0).is_err());
        let low = BessState::with_energy(2.0, &s).unwrap();
        assert!(bess_step(low, 5.0, &s, 1.0).is_err());
    }

    #[test]
    fn max_feasible_power_limited() {
        let s = spec(10.0, 25.0, 0.0, 1.0);
        let st = BessState::with_energy(20.0, &s).unwrap();
        assert!((bess_max_feasible(st, &s, 1.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn max_feasible_energy_limited() {
        let s = spec(10.0, 25.0, 0.0, 1.0);
        let st = BessState::with_energy(5.0, &s).unwrap();
        assert!((bess_max_feasible(st, &s, 1.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn max_feasible_empty_battery() {
        let s = spec(10.0, 25.0, 5.0, 1.0);
        let st = BessState::with_energy(5.0, &s).unwrap();
        assert_eq!(bess_max_feasible(st, &s, 1.0), 0.0);
    }

    #[test]
    fn max_feasible_step_succeeds_but_larger_fails() {
        let s = spec(10.0, 20.0, 3.0, 0.9);
        for energy in [3.0, 4.5, 11.0, 20.0] {
            let st = BessState::with_energy(energy, &s).unwrap();
            let m = bess_max_feasible(st, &s, 1.0);
            assert!(bess_step(st, m, &s, 1.0).is_ok(), "max feasible step failed at E={energy}");
            assert!(
                m + 1e-6 > s.power_max_mw || bess_step(st, m + 1e-6, &s, 1.0).is_err(),
                "over-discharge accepted at E={energy}"
            );
        }
    }

    #[test]
    fn dg_cost_matches_constants() {
        let d = DgSpec::default();
        let cost = dg_cost(&[40.0, 40.0], &d, 1.0).unwrap();
        assert!((cost - 17_200.0).abs() < 1e-6);
    }

    #[test]
    fn dg_cost_zero_schedule() {
        let d = DgSpec::default();
        assert_eq!(dg_cost(&[0.0, 0.0, 0.0], &d, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn dg_cost_single_hour() {
        let d = DgSpec::default();
        let cost = dg_cost(&[10.0], &d, 1.0).unwrap();
        assert!((cost - 2_150.0).abs() < 1e-6);
    }

    #[test]
    fn dg_cost_is_linear() {
        let d = DgSpec::default();
        let a = [5.0, 12.0, 0.0];
        let b = [7.5, 3.0, 20.0];
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = dg_cost(&sum, &d, 1.0).unwrap();
        let rhs = dg_cost(&a, &d, 1.0).unwrap() + dg_cost(&b, &d, 1.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn dg_cost_rejects_out_of_bounds() {
        let d = DgSpec::default();
        assert!(dg_cost(&[41.0], &d, 1.0).is_err());
        assert!(dg_cost(&[-1.0], &d, 1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(BessSpec::new(0.0, 20.0, 0.0, 1.0).is_err());
        assert!(BessSpec::new(10.0, 20.0, 20.0, 1.0).is_err());
        assert!(BessSpec::new(10.0, 20.0, 0.0, 1.5).is_err());
        assert!(DgSpec::new(-1.0, 0.2, 0.03).is_err());
    }
}

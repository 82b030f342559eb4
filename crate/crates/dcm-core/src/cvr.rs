//! Conservation voltage reduction: feasible on/off pattern generation over
//! the targeted hours and the resulting load reduction.
//!
//! One aggregated CVR resource is assumed. A deployment may run at most
//! `max_run_hours` consecutively and needs `recovery_hours` fully-off hours
//! before it can run again; runs are evaluated on the 24-hour clock, so a
//! non-targeted hour between two targeted hours counts as off time.

use crate::domain::{HourlyProfile, OptionMatrix, TargetHourSet, HOURS_PER_DAY};
use crate::error::DcmError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvrSpec {
    /// Fraction of total load eligible for CVR.
    pub k1: f64,
    /// Load reduction factor on the eligible share.
    pub k2: f64,
    /// Longest allowed consecutive on-run (hours).
    pub max_run_hours: u8,
    /// Minimum off-hours between two on-runs.
    pub recovery_hours: u8,
}

impl CvrSpec {
    pub fn new(k1: f64, k2: f64, max_run_hours: u8, recovery_hours: u8) -> Result<Self, DcmError> {
        if !(0.0..=1.0).contains(&k1) || !(0.0..=1.0).contains(&k2) {
            return Err(DcmError::invalid("cvr spec", "k1 and k2 must be in [0, 1]"));
        }
        if max_run_hours == 0 || recovery_hours == 0 {
            return Err(DcmError::invalid("cvr spec", "run and recovery limits must be >= 1"));
        }
        Ok(Self { k1, k2, max_run_hours, recovery_hours })
    }
}

impl Default for CvrSpec {
    /// 40% of load eligible, 1% reduction, 3-hour runs, 1-hour recovery.
    fn default() -> Self {
        Self { k1: 0.40, k2: 0.01, max_run_hours: 3, recovery_hours: 1 }
    }
}

/// Checks a deployment pattern (bit i = deployment_hours[i] on) against the
/// run-length and recovery rules on the 24-hour clock.
pub(crate) fn mask_feasible(mask: u32, hours: &[u8], max_run: u8, recovery: u8) -> bool {
    let mut on = [false; HOURS_PER_DAY];
    for (i, &h) in hours.iter().enumerate() {
        on[h as usize] = mask >> i & 1 == 1;
    }
    let mut run = 0u8;
    let mut gap = u8::MAX; // off-hours seen since the previous run ended
    for &bit in &on {
        if bit {
            if run == 0 && gap < recovery {
                return false;
            }
            run += 1;
            if run > max_run {
                return false;
            }
            gap = 0;
        } else {
            if run > 0 {
                gap = 0;
            }
            run = 0;
            gap = gap.saturating_add(1);
        }
    }
    true
}

/// All feasible deployment masks over the given hours, ascending. Mask 0
/// (deploy nothing) is always feasible.
pub(crate) fn feasible_masks(hours: &[u8], max_run: u8, recovery: u8) -> Vec<u32> {
    let n = hours.len();
    (0u32..1 << n).filter(|&m| mask_feasible(m, hours, max_run, recovery)).collect()
}

/// Enumerates every feasible CVR deployment option over the targeted hours.
pub fn build_cvr_options(hours: &TargetHourSet, spec: &CvrSpec) -> Result<OptionMatrix, DcmError> {
    let deploy = TargetHourSet::new(hours.deployment_hours().iter().copied())?;
    let masks = feasible_masks(deploy.hours(), spec.max_run_hours, spec.recovery_hours);
    OptionMatrix::from_masks(deploy, masks)
}

/// Load reduction when CVR is on: `k1 * k2 * load`.
pub fn cvr_reduction(load_mw: f64, on: bool, spec: &CvrSpec) -> f64 {
    if on {
        spec.k1 * spec.k2 * load_mw
    } else {
        0.0
    }
}

/// Per-targeted-hour MW reduction for one deployment column, using the given
/// load profile (forecast during optimization, actuals for ex-post checks).
pub fn apply_cvr_option(
    column: &[bool],
    load: &HourlyProfile,
    hours: &TargetHourSet,
    spec: &CvrSpec,
) -> Result<Vec<f64>, DcmError> {
    let deploy = hours.deployment_hours();
    if column.len() != deploy.len() {
        return Err(DcmError::DimensionMismatch(format!(
            "column has {} entries for {} targeted hours",
            column.len(),
            deploy.len()
        )));
    }
    if load.len() != HOURS_PER_DAY {
        return Err(DcmError::DimensionMismatch("load profile must cover 24 hours".into()));
    }
    Ok(deploy
        .iter()
        .zip(column)
        .map(|(&h, &on)| cvr_reduction(load.value(h as usize), on, spec))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::Date;

    fn hours(hs: &[u8]) -> TargetHourSet {
        TargetHourSet::new(hs.iter().copied()).unwrap()
    }

    /// Reference rule check written directly against the 24-hour day, used to
    /// cross-validate the mask enumeration.
    fn reference_feasible(subset: &[u8], max_run: u8, recovery: u8) -> bool {
        let mut on = [false; 24];
        for &h in subset {
            on[h as usize] = true;
        }
        let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, len)
        let mut i = 0;
        while i < 24 {
            if on[i] {
                let start = i;
                while i < 24 && on[i] {
                    i += 1;
                }
                runs.push((start, i - start));
            } else {
                i += 1;
            }
        }
        runs.iter().all(|&(_, len)| len <= max_run as usize)
            && runs.windows(2).all(|w| w[1].0 - (w[0].0 + w[0].1) >= recovery as usize)
    }

    #[test]
    fn sixteen_options_when_gap_hour_breaks_runs() {
        let m = build_cvr_options(&hours(&[15, 16, 17, 19]), &CvrSpec::default()).unwrap();
        assert_eq!(m.option_count(), 16);
    }

    #[test]
    fn contiguous_four_hours_drop_the_all_on_option() {
        let spec = CvrSpec::default();
        let hs = [15u8, 16, 17, 18];
        // Independent enumeration: check all 2^4 subsets against the rules.
        let mut expected = 0;
        for mask in 0u32..16 {
            let subset: Vec<u8> =
                hs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &h)| h).collect();
            if reference_feasible(&subset, spec.max_run_hours, spec.recovery_hours) {
                expected += 1;
            }
        }
        assert_eq!(expected, 15);
        let m = build_cvr_options(&hours(&hs), &spec).unwrap();
        assert_eq!(m.option_count(), 15);
        assert_eq!(m.find_column(&[true, true, true, true]), None);
    }

    #[test]
    fn single_hour_has_on_and_off() {
        let m = build_cvr_options(&hours(&[15]), &CvrSpec::default()).unwrap();
        assert_eq!(m.option_count(), 2);
    }

    #[test]
    fn every_generated_column_obeys_run_and_recovery_rules() {
        let spec = CvrSpec::new(0.4, 0.01, 2, 2).unwrap();
        let hs = [6u8, 7, 8, 9, 11, 12];
        let m = build_cvr_options(&hours(&hs), &spec).unwrap();
        assert!(m.option_count() < 1 << hs.len());
        for j in 0..m.option_count() {
            let col = m.column(j);
            let subset: Vec<u8> =
                hs.iter().zip(&col).filter(|(_, &on)| on).map(|(&h, _)| h).collect();
            assert!(reference_feasible(&subset, 2, 2), "column {j} violates rules");
        }
        // And nothing feasible is missing.
        let expected = (0u32..1 << hs.len())
            .filter(|&mask| {
                let subset: Vec<u8> = hs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &h)| h)
                    .collect();
                reference_feasible(&subset, 2, 2)
            })
            .count();
        assert_eq!(m.option_count(), expected);
    }

    #[test]
    fn reduction_uses_both_factors() {
        let spec = CvrSpec::default();
        assert!((cvr_reduction(1000.0, true, &spec) - 4.0).abs() < 1e-9);
        assert_eq!(cvr_reduction(1000.0, false, &spec), 0.0);
        assert!((cvr_reduction(12_000.0, true, &spec) - 48.0).abs() < 1e-9);
    }

    #[test]
    fn apply_option_reduces_selected_hours_only() {
        let spec = CvrSpec::default();
        let hs = hours(&[15, 16, 17, 19]);
        let mut vals = vec![1000.0; 24];
        vals[16] = 2000.0;
        let load = HourlyProfile::single_day(Date::new(2021, 7, 1).unwrap(), vals).unwrap();

        let zero = apply_cvr_option(&[false; 4], &load, &hs, &spec).unwrap();
        assert_eq!(zero, vec![0.0; 4]);

        let picked = apply_cvr_option(&[true, false, true, true], &load, &hs, &spec).unwrap();
        assert!((picked[0] - 4.0).abs() < 1e-9);
        assert_eq!(picked[1], 0.0);
        assert!((picked[2] - 4.0).abs() < 1e-9);
        assert!((picked[3] - 4.0).abs() < 1e-9);

        let all_on = apply_cvr_option(&[true; 4], &load, &hs, &spec).unwrap();
        assert!((all_on[1] - 8.0).abs() < 1e-9);
    }

    #[test]
    fn apply_option_rejects_dimension_mismatch() {
        let spec = CvrSpec::default();
        let hs = hours(&[15, 16]);
        let load = HourlyProfile::single_day(Date::new(2021, 7, 1).unwrap(), vec![1.0; 24]).unwrap();
        assert!(apply_cvr_option(&[true], &load, &hs, &spec).is_err());
    }
}

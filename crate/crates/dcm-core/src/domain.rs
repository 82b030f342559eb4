//! Shared domain types: hourly time series, targeted-hour sets, day-ahead
//! context, and the binary option matrix used by categorical resources.

use std::fmt;

use crate::calendar::{Date, HourStamp};
use crate::error::DcmError;

pub const HOURS_PER_DAY: usize = 24;

/// An hourly time series: MW for load/power series, degrees C for temperature.
///
/// The series starts at `start` and advances one hour per value. Values are
/// validated finite at construction; sign constraints (load >= 0) are checked
/// where the series is known to be a load, see [`validate_day_context`].
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyProfile {
    start: HourStamp,
    values: Vec<f64>,
}

impl HourlyProfile {
    pub fn new(start: HourStamp, values: Vec<f64>) -> Result<Self, DcmError> {
        if values.is_empty() {
            return Err(DcmError::invalid("profile", "must contain at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DcmError::invalid("profile", format!("non-finite value at index {i}")));
        }
        Ok(Self { start, values })
    }

    /// A 24-value profile covering one calendar day starting at hour 0.
    pub fn single_day(date: Date, values: Vec<f64>) -> Result<Self, DcmError> {
        if values.len() != HOURS_PER_DAY {
            return Err(DcmError::invalid(
                "profile",
                format!("day profile needs {HOURS_PER_DAY} values, got {}", values.len()),
            ));
        }
        Self::new(HourStamp { date, hour: 0 }, values)
    }

    pub fn start(&self) -> HourStamp {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one value
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Timestamp of the idx-th value; (day, hour-of-day) and absolute-hour
    /// indexing agree by construction.
    pub fn stamp(&self, idx: usize) -> HourStamp {
        let total = self.start.hour as usize + idx;
        let mut date = self.start.date;
        for _ in 0..total / HOURS_PER_DAY {
            date = date.next_day();
        }
        HourStamp { date, hour: (total % HOURS_PER_DAY) as u8 }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Earliest index attaining the maximum, with its value.
    pub fn peak(&self) -> (usize, f64) {
        let mut best = (0, self.values[0]);
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }

    /// True when the series starts at hour 0 and covers whole days.
    pub fn is_day_aligned(&self) -> bool {
        self.start.hour == 0 && self.values.len() % HOURS_PER_DAY == 0
    }

    pub fn day_count(&self) -> usize {
        self.values.len() / HOURS_PER_DAY
    }

    pub fn day_slice(&self, day: usize) -> &[f64] {
        &self.values[day * HOURS_PER_DAY..(day + 1) * HOURS_PER_DAY]
    }
}

/// The set of targeted demand-reduction hours for one day.
///
/// Horizon strategies produce a contiguous block and may append one extra
/// hour past the block end to expose DR payback to the peak constraint. The
/// appended hour is excluded from [`TargetHourSet::deployment_hours`]:
/// categorical resources are never scheduled there, only battery and diesel
/// dispatch and the peak constraint see it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetHourSet {
    hours: Vec<u8>,
    horizonal: bool,
    payback_hour_appended: bool,
}

impl TargetHourSet {
    pub fn new(hours: impl IntoIterator<Item = u8>) -> Result<Self, DcmError> {
        let mut hours: Vec<u8> = hours.into_iter().collect();
        hours.sort_unstable();
        hours.dedup();
        if hours.is_empty() {
            return Err(DcmError::invalid("target hours", "empty hour set"));
        }
        if *hours.last().unwrap() > 23 {
            return Err(DcmError::invalid("target hours", "hour index above 23"));
        }
        let horizonal = hours.windows(2).all(|w| w[1] == w[0] + 1);
        Ok(Self { hours, horizonal, payback_hour_appended: false })
    }

    /// Contiguous block `first..=last`, marked horizonal.
    pub fn span(first: u8, last: u8) -> Result<Self, DcmError> {
        if first > last {
            return Err(DcmError::invalid("target hours", "span first > last"));
        }
        Self::new(first..=last)
    }

    /// Appends the hour after the block end for payback tracking. An hour
    /// past 23 cannot exist, so a block ending at 23 is returned unchanged.
    pub fn with_appended_payback_hour(mut self) -> Self {
        let last = *self.hours.last().unwrap();
        if last < 23 {
            self.hours.push(last + 1);
            self.payback_hour_appended = true;
        }
        self
    }

    /// All hours, including an appended payback hour.
    pub fn hours(&self) -> &[u8] {
        &self.hours
    }

    /// Hours eligible for resource deployment (appended payback hour stripped).
    pub fn deployment_hours(&self) -> &[u8] {
        if self.payback_hour_appended {
            &self.hours[..self.hours.len() - 1]
        } else {
            &self.hours
        }
    }

    pub fn len(&self) -> usize {
        self.hours.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one hour
    }

    pub fn is_horizonal(&self) -> bool {
        self.horizonal
    }

    pub fn has_appended_payback_hour(&self) -> bool {
        self.payback_hour_appended
    }

    pub fn contains(&self, hour: u8) -> bool {
        self.hours.binary_search(&hour).is_ok()
    }

    pub fn position(&self, hour: u8) -> Option<usize> {
        self.hours.binary_search(&hour).ok()
    }
}

impl fmt::Display for TargetHourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.hours.iter().map(|h| h.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))?;
        if self.payback_hour_appended {
            write!(f, " (+payback hour)")?;
        }
        Ok(())
    }
}

/// Everything known about one day before dispatch: forecasts, actuals,
/// temperature, and the two probability feeds.
#[derive(Debug, Clone, PartialEq)]
pub struct DayContext {
    pub date: Date,
    /// Day-ahead load forecast, 24 values (MW).
    pub forecast_load: HourlyProfile,
    /// Realized load, 24 values (MW); used only for ex-post evaluation.
    pub actual_load: HourlyProfile,
    /// Ambient temperature, 24 values (C); drives the HVAC fleet model.
    pub temperature: HourlyProfile,
    /// Probability that this day is the monthly peak day.
    pub peak_day_probability: f64,
    /// Per-hour probability of being the daily peak hour (24 values).
    pub peak_hour_probabilities: Vec<f64>,
}

/// A named invariant violation. Violations are data, not errors: validation
/// reports all of them instead of stopping at the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

/// Checks every `DayContext` invariant and returns the violations found.
pub fn validate_day_context(ctx: &DayContext) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check_profile = |field: &'static str, p: &HourlyProfile, load: bool| {
        if p.len() != HOURS_PER_DAY {
            out.push(Violation {
                field,
                rule: format!("must have exactly {HOURS_PER_DAY} entries, has {}", p.len()),
            });
        }
        if p.start().date != ctx.date || p.start().hour != 0 {
            out.push(Violation {
                field,
                rule: format!("must start at {}T00, starts at {}", ctx.date, p.start()),
            });
        }
        if load {
            if let Some(i) = p.values().iter().position(|&v| v < 0.0) {
                out.push(Violation { field, rule: format!("load value at hour {i} is negative") });
            }
        }
    };
    check_profile("forecast_load", &ctx.forecast_load, true);
    check_profile("actual_load", &ctx.actual_load, true);
    check_profile("temperature", &ctx.temperature, false);

    let p = ctx.peak_day_probability;
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        out.push(Violation {
            field: "peak_day_probability",
            rule: format!("must be in [0,1], is {p}"),
        });
    }
    if ctx.peak_hour_probabilities.len() != HOURS_PER_DAY {
        out.push(Violation {
            field: "peak_hour_probabilities",
            rule: format!(
                "must have exactly {HOURS_PER_DAY} entries, has {}",
                ctx.peak_hour_probabilities.len()
            ),
        });
    }
    for (h, &q) in ctx.peak_hour_probabilities.iter().enumerate() {
        if !q.is_finite() || !(0.0..=1.0).contains(&q) {
            out.push(Violation {
                field: "peak_hour_probabilities",
                rule: format!("entry at hour {h} must be in [0,1], is {q}"),
            });
        }
    }
    let sum: f64 = ctx.peak_hour_probabilities.iter().sum();
    if sum > 1.0 + 1e-9 {
        out.push(Violation {
            field: "peak_hour_probabilities",
            rule: format!("entries must sum to at most 1, sum to {sum}"),
        });
    }
    out
}

/// Binary feasibility matrix for a categorical resource: one column per
/// deployment option over the targeted hours. Columns are stored as bit
/// masks (bit i = hours()[i] on) in ascending mask order, so column 0 is
/// always the all-off "do nothing" option.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptionMatrix {
    hours: TargetHourSet,
    masks: Vec<u32>,
}

impl OptionMatrix {
    pub(crate) fn from_masks(hours: TargetHourSet, masks: Vec<u32>) -> Result<Self, DcmError> {
        let n = hours.deployment_hours().len();
        if n != hours.len() {
            return Err(DcmError::invalid(
                "option matrix",
                "hours must not carry an appended payback hour",
            ));
        }
        if masks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DcmError::invalid("option matrix", "columns must be distinct and ordered"));
        }
        if masks.first() != Some(&0) {
            return Err(DcmError::invalid("option matrix", "missing the all-zero option"));
        }
        if let Some(&m) = masks.iter().find(|&&m| m >> n != 0) {
            return Err(DcmError::invalid(
                "option matrix",
                format!("column {m:#b} sets bits beyond the {n} targeted hours"),
            ));
        }
        Ok(Self { hours, masks })
    }

    pub fn hours(&self) -> &TargetHourSet {
        &self.hours
    }

    pub fn option_count(&self) -> usize {
        self.masks.len()
    }

    pub fn mask(&self, option: usize) -> u32 {
        self.masks[option]
    }

    /// The option as a binary column over the targeted hours.
    pub fn column(&self, option: usize) -> Vec<bool> {
        let n = self.hours.len();
        (0..n).map(|i| self.masks[option] >> i & 1 == 1).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        (0..self.masks.len()).map(|j| self.column(j))
    }

    /// Index of the all-off option (always present).
    pub fn zero_option(&self) -> usize {
        0
    }

    /// Finds the option matching the given on/off pattern.
    pub fn find_column(&self, bits: &[bool]) -> Option<usize> {
        if bits.len() != self.hours.len() {
            return None;
        }
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| if b { m | 1 << i } else { m });
        self.masks.binary_search(&mask).ok()
    }

    /// Number of on-hours in the given option.
    pub fn on_hours(&self, option: usize) -> u32 {
        self.masks[option].count_ones()
    }
}

/// The x hours with the largest values; ties go to the earlier hour.
/// Adding a constant to all values never changes the result.
pub fn top_x_hours(values: &[f64], x: usize) -> Result<TargetHourSet, DcmError> {
    if values.len() != HOURS_PER_DAY {
        return Err(DcmError::invalid(
            "top_x_hours",
            format!("expected {HOURS_PER_DAY} values, got {}", values.len()),
        ));
    }
    if x == 0 || x > values.len() {
        return Err(DcmError::invalid("top_x_hours", format!("x={x} out of range 1..=24")));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(DcmError::invalid("top_x_hours", format!("non-finite value at hour {i}")));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap().then(a.cmp(&b)));
    TargetHourSet::new(order[..x].iter().map(|&h| h as u8))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date() -> Date {
        Date::new(2021, 7, 1).unwrap()
    }

    fn flat_day(v: f64) -> HourlyProfile {
        HourlyProfile::single_day(date(), vec![v; 24]).unwrap()
    }

    fn valid_ctx() -> DayContext {
        DayContext {
            date: date(),
            forecast_load: flat_day(0.0),
            actual_load: flat_day(0.0),
            temperature: flat_day(0.0),
            peak_day_probability: 0.0,
            peak_hour_probabilities: vec![0.0; 24],
        }
    }

    #[test]
    fn degenerate_all_zero_context_is_valid() {
        assert!(validate_day_context(&valid_ctx()).is_empty());
    }

    #[test]
    fn short_forecast_names_length_rule() {
        let mut ctx = valid_ctx();
        ctx.forecast_load =
            HourlyProfile::new(HourStamp { date: date(), hour: 0 }, vec![0.0; 23]).unwrap();
        let violations = validate_day_context(&ctx);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "forecast_load");
        assert!(violations[0].rule.contains("24"));
    }

    #[test]
    fn out_of_range_probability_names_range_rule() {
        let mut ctx = valid_ctx();
        ctx.peak_day_probability = 1.2;
        let violations = validate_day_context(&ctx);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "peak_day_probability");
        assert!(violations[0].rule.contains("[0,1]"));
    }

    #[test]
    fn negative_load_flagged() {
        let mut ctx = valid_ctx();
        let mut vals = vec![0.0; 24];
        vals[5] = -1.0;
        ctx.actual_load = HourlyProfile::single_day(date(), vals).unwrap();
        let violations = validate_day_context(&ctx);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "actual_load");
    }

    #[test]
    fn top_x_picks_maxima() {
        let mut vals = vec![1.0; 24];
        vals[16] = 5.0;
        vals[17] = 4.0;
        let hours = top_x_hours(&vals, 2).unwrap();
        assert_eq!(hours.hours(), &[16, 17]);
    }

    #[test]
    fn top_x_breaks_ties_toward_earlier_hours() {
        let vals = vec![3.0; 24];
        let hours = top_x_hours(&vals, 2).unwrap();
        assert_eq!(hours.hours(), &[0, 1]);
    }

    #[test]
    fn top_one_strict_maximum() {
        let mut vals = vec![0.0; 24];
        vals[19] = 2.0;
        let hours = top_x_hours(&vals, 1).unwrap();
        assert_eq!(hours.hours(), &[19]);
    }

    #[test]
    fn top_x_rejects_bad_x() {
        assert!(top_x_hours(&[0.0; 24], 0).is_err());
        assert!(top_x_hours(&[0.0; 24], 25).is_err());
    }

    #[test]
    fn span_is_horizonal_and_appends_payback_hour() {
        let hours = TargetHourSet::span(15, 17).unwrap().with_appended_payback_hour();
        assert!(hours.is_horizonal());
        assert!(hours.has_appended_payback_hour());
        assert_eq!(hours.hours(), &[15, 16, 17, 18]);
        assert_eq!(hours.deployment_hours(), &[15, 16, 17]);
    }

    #[test]
    fn payback_hour_clipped_at_day_end() {
        let hours = TargetHourSet::span(21, 23).unwrap().with_appended_payback_hour();
        assert!(!hours.has_appended_payback_hour());
        assert_eq!(hours.hours(), &[21, 22, 23]);
        assert_eq!(hours.deployment_hours(), &[21, 22, 23]);
    }

    #[test]
    fn scattered_hours_are_not_horizonal() {
        let hours = TargetHourSet::new([19u8, 15, 17]).unwrap();
        assert_eq!(hours.hours(), &[15, 17, 19]);
        assert!(!hours.is_horizonal());
    }

    #[test]
    fn option_matrix_requires_zero_column_and_distinct_masks() {
        let hours = TargetHourSet::new([15u8, 16]).unwrap();
        assert!(OptionMatrix::from_masks(hours.clone(), vec![1, 2]).is_err());
        assert!(OptionMatrix::from_masks(hours.clone(), vec![0, 1, 1]).is_err());
        let m = OptionMatrix::from_masks(hours, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(m.option_count(), 4);
        assert_eq!(m.column(1), vec![true, false]);
        assert_eq!(m.find_column(&[true, true]), Some(3));
        assert_eq!(m.zero_option(), 0);
    }

    #[test]
    fn stamp_indexing_is_consistent() {
        let p = HourlyProfile::new(
            HourStamp { date: date(), hour: 0 },
            (0..48).map(|i| i as f64).collect(),
        )
        .unwrap();
        assert_eq!(p.stamp(0).to_string(), "2021-07-01T00");
        assert_eq!(p.stamp(23).to_string(), "2021-07-01T23");
        assert_eq!(p.stamp(24).to_string(), "2021-07-02T00");
        assert!(p.is_day_aligned());
        assert_eq!(p.day_count(), 2);
        assert_eq!(p.day_slice(1)[0], 24.0);
    }
}

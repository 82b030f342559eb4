//! Deterministic synthetic scenario generation: a year of hourly load,
//! forecasts, temperature, and the two probability feeds.
//!
//! Load shapes follow the seasonal pattern of a summer-peaking system:
//! summer months carry one broad afternoon peak, winter months a morning
//! and an evening peak, shoulder months a mild evening peak. The forecast
//! is the actual plus zero-mean noise; peak-hour probabilities blend a
//! one-hot indicator of the true peak hour with a softmax over the noisy
//! forecast, controlled by a fidelity parameter; the peak-day probability
//! is the day's rank among the month's daily maxima.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calendar::{days_in_month, Date};
use crate::domain::{DayContext, HourlyProfile, HOURS_PER_DAY};
use crate::error::DcmError;

/// Everything that determines a generated scenario. Equal specs generate
/// bit-identical series.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub seed: u64,
    pub start_year: i32,
    pub years: u32,
    /// Std-dev of the day-ahead load forecast error (MW).
    pub forecast_noise_sigma_mw: f64,
    /// 1.0 puts all probability mass on the true peak hour; lower values
    /// blend toward a softmax over the noisy forecast.
    pub probability_fidelity: f64,
    /// Std-dev of the per-day load scale factor.
    pub day_variation: f64,
    /// Multiplier on the built-in load magnitudes.
    pub load_scale: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            seed: 1,
            start_year: 2021,
            years: 1,
            forecast_noise_sigma_mw: 150.0,
            probability_fidelity: 0.9,
            day_variation: 0.035,
            load_scale: 1.0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), DcmError> {
        if self.years == 0 {
            return Err(DcmError::invalid("scenario", "years must be >= 1"));
        }
        if !(self.forecast_noise_sigma_mw >= 0.0) {
            return Err(DcmError::invalid("scenario", "noise sigma must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.probability_fidelity) {
            return Err(DcmError::invalid("scenario", "fidelity must be in [0, 1]"));
        }
        if !(self.day_variation >= 0.0) || !(self.load_scale > 0.0) {
            return Err(DcmError::invalid("scenario", "bad variation or scale"));
        }
        Ok(())
    }
}

/// Month-shape archetypes.
#[derive(Debug, Clone, Copy)]
enum ShapeKind {
    SummerSingle,
    WinterDouble,
    MildDouble,
    EveningSingle,
    SpringSingle,
}

/// Per-month parameters: (shape, base MW, peak amplitude MW, mean temp C,
/// diurnal temperature swing C).
const MONTHS: [(ShapeKind, f64, f64, f64, f64); 12] = [
    (ShapeKind::WinterDouble, 8_600.0, 2_800.0, 4.0, 6.0),   // Jan
    (ShapeKind::WinterDouble, 8_500.0, 2_600.0, 5.0, 6.0),   // Feb
    (ShapeKind::MildDouble, 8_000.0, 2_100.0, 10.0, 7.0),    // Mar
    (ShapeKind::EveningSingle, 7_700.0, 1_800.0, 15.0, 7.0), // Apr
    (ShapeKind::SpringSingle, 7_900.0, 2_300.0, 21.0, 8.0),  // May
    (ShapeKind::SummerSingle, 8_700.0, 3_000.0, 27.0, 8.0),  // Jun
    (ShapeKind::SummerSingle, 8_900.0, 3_600.0, 30.0, 8.0),  // Jul
    (ShapeKind::SummerSingle, 8_850.0, 3_500.0, 29.0, 8.0),  // Aug
    (ShapeKind::SummerSingle, 8_500.0, 2_700.0, 25.0, 8.0),  // Sep
    (ShapeKind::EveningSingle, 7_800.0, 1_900.0, 17.0, 7.0), // Oct
    (ShapeKind::MildDouble, 8_100.0, 2_100.0, 10.0, 6.0),    // Nov
    (ShapeKind::WinterDouble, 8_500.0, 2_700.0, 5.0, 6.0),   // Dec
];

fn bell(h: f64, center: f64, width: f64) -> f64 {
    (-((h - center) / width).powi(2) / 2.0).exp()
}

fn shape_value(kind: ShapeKind, hour: usize) -> f64 {
    let h = hour as f64;
    match kind {
        ShapeKind::SummerSingle => bell(h, 16.5, 2.6),
        ShapeKind::WinterDouble => 0.85 * bell(h, 7.5, 2.0) + bell(h, 19.0, 2.2),
        ShapeKind::MildDouble => 0.8 * bell(h, 8.0, 2.2) + 0.9 * bell(h, 18.5, 2.4),
        ShapeKind::EveningSingle => bell(h, 18.5, 2.4),
        ShapeKind::SpringSingle => bell(h, 17.0, 2.5),
    }
}

/// Standard normal via Box-Muller; two uniform draws per sample keeps the
/// stream layout independent of the platform's float rounding.
fn randn(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Generates one or more consecutive calendar years of day contexts.
/// Leap years produce 366 days so the series stays gap-free.
pub fn generate_synthetic_scenario(spec: &ScenarioSpec) -> Result<Vec<DayContext>, DcmError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut days = Vec::new();
    for year_offset in 0..spec.years {
        let year = spec.start_year + year_offset as i32;
        for month in 1..=12u8 {
            let (kind, base, amp, temp_mean, temp_swing) = MONTHS[(month - 1) as usize];
            let n_days = days_in_month(year, month);
            let mut month_days = Vec::with_capacity(n_days as usize);
            for day in 1..=n_days {
                let date = Date::new(year, month, day)?;
                let day_factor = (1.0 + spec.day_variation * randn(&mut rng)).clamp(0.85, 1.15);
                let temp_offset = 2.5 * randn(&mut rng);

                let mut actual = Vec::with_capacity(HOURS_PER_DAY);
                let mut temperature = Vec::with_capacity(HOURS_PER_DAY);
                for h in 0..HOURS_PER_DAY {
                    let load = (base + amp * shape_value(kind, h)) * day_factor
                        + 40.0 * randn(&mut rng);
                    actual.push((load * spec.load_scale).max(100.0));
                    temperature
                        .push(temp_mean + temp_swing * (bell(h as f64, 15.0, 3.5) - 0.5) + temp_offset);
                }
                let forecast: Vec<f64> = actual
                    .iter()
                    .map(|&v| (v + spec.forecast_noise_sigma_mw * randn(&mut rng)).max(0.0))
                    .collect();

                // Peak-hour probabilities: fidelity-weighted blend of the
                // true peak indicator and a softmax over the forecast.
                let true_peak = argmax(&actual);
                let fmax = forecast.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = forecast.iter().map(|&v| ((v - fmax) / 300.0).exp()).collect();
                let wsum: f64 = weights.iter().sum();
                let phi = spec.probability_fidelity;
                let probs: Vec<f64> = (0..HOURS_PER_DAY)
                    .map(|h| {
                        let hot = if h == true_peak { 1.0 } else { 0.0 };
                        phi * hot + (1.0 - phi) * weights[h] / wsum
                    })
                    .collect();

                month_days.push(DayContext {
                    date,
                    forecast_load: HourlyProfile::single_day(date, forecast)?,
                    actual_load: HourlyProfile::single_day(date, actual)?,
                    temperature: HourlyProfile::single_day(date, temperature)?,
                    peak_day_probability: 0.0, // filled from month ranks below
                    peak_hour_probabilities: probs,
                });
            }
            // Peak-day probability: rank of the day's maximum within the
            // month, scaled so the month's top day gets 1.0.
            let mut order: Vec<usize> = (0..month_days.len()).collect();
            order.sort_by(|&a, &b| {
                month_days[a]
                    .actual_load
                    .max_value()
                    .partial_cmp(&month_days[b].actual_load.max_value())
                    .unwrap()
                    .then(a.cmp(&b))
            });
            for (rank, &idx) in order.iter().enumerate() {
                month_days[idx].peak_day_probability = (rank + 1) as f64 / month_days.len() as f64;
            }
            days.append(&mut month_days);
        }
    }
    Ok(days)
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

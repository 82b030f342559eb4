//! CSV ingestion and emission for hourly series and scenario directories.
//!
//! Timeseries files carry a `timestamp,value` header with `YYYY-MM-DDTHH`
//! timestamps; rows must be contiguous hours. All files are UTF-8 with LF
//! line endings and full-precision floats, so a generated scenario reloads
//! bit-identically.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dcm_core::{
    validate_day_context, Date, DayContext, HourStamp, HourlyProfile, HOURS_PER_DAY,
};

pub const ACTUAL_FILE: &str = "actual.csv";
pub const FORECAST_FILE: &str = "forecast.csv";
pub const TEMPERATURE_FILE: &str = "temperature.csv";
pub const PEAK_DAY_FILE: &str = "peak_day_probability.csv";
pub const PEAK_HOUR_FILE: &str = "peak_hour_probability.csv";

/// Loads one contiguous hourly series. Rejects gaps, duplicates, and
/// non-monotone timestamps, naming the offending line.
pub fn load_timeseries_csv(path: &Path) -> Result<HourlyProfile> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.display();
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
    if header != "timestamp,value" {
        bail!("{name}: line 1: expected header \"timestamp,value\", got {header:?}");
    }
    let mut start: Option<HourStamp> = None;
    let mut prev: Option<HourStamp> = None;
    let mut values = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (ts, val) = line
            .split_once(',')
            .ok_or_else(|| anyhow!("{name}: line {line_no}: expected \"timestamp,value\""))?;
        let stamp = HourStamp::parse(ts.trim())
            .map_err(|e| anyhow!("{name}: line {line_no}: {e}"))?;
        let value: f64 = val
            .trim()
            .parse()
            .map_err(|_| anyhow!("{name}: line {line_no}: bad value {val:?}"))?;
        if !value.is_finite() {
            bail!("{name}: line {line_no}: non-finite value");
        }
        if let Some(p) = prev {
            if stamp == p {
                bail!("{name}: line {line_no}: duplicated timestamp {stamp}");
            }
            if stamp < p {
                bail!("{name}: line {line_no}: non-monotone timestamp {stamp}");
            }
            if stamp != p.next() {
                bail!("{name}: line {line_no}: gap detected before {stamp} (expected {})", p.next());
            }
        } else {
            start = Some(stamp);
        }
        prev = Some(stamp);
        values.push(value);
    }
    let start = start.ok_or_else(|| anyhow!("{name}: no data rows"))?;
    HourlyProfile::new(start, values).map_err(|e| anyhow!("{name}: {e}"))
}

/// Loads a `date,value` file (one row per day).
pub fn load_daily_csv(path: &Path) -> Result<Vec<(Date, f64)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.display();
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
    if header != "date,value" {
        bail!("{name}: line 1: expected header \"date,value\", got {header:?}");
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (d, val) = line
            .split_once(',')
            .ok_or_else(|| anyhow!("{name}: line {line_no}: expected \"date,value\""))?;
        let date =
            Date::parse(d.trim()).map_err(|e| anyhow!("{name}: line {line_no}: {e}"))?;
        let value: f64 = val
            .trim()
            .parse()
            .map_err(|_| anyhow!("{name}: line {line_no}: bad value {val:?}"))?;
        if let Some((p, _)) = rows.last() {
            if date != Date::next_day(p) {
                bail!("{name}: line {line_no}: dates must be consecutive, got {date} after {p}");
            }
        }
        rows.push((date, value));
    }
    if rows.is_empty() {
        bail!("{name}: no data rows");
    }
    Ok(rows)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    f.write_all(body.as_bytes())?;
    Ok(())
}

pub fn write_timeseries_csv(path: &Path, profile: &HourlyProfile) -> Result<()> {
    let mut body = String::from("timestamp,value\n");
    for i in 0..profile.len() {
        body.push_str(&format!("{},{}\n", profile.stamp(i), profile.value(i)));
    }
    write_file(path, &body)
}

pub fn write_daily_csv(path: &Path, rows: &[(Date, f64)]) -> Result<()> {
    let mut body = String::from("date,value\n");
    for (date, value) in rows {
        body.push_str(&format!("{date},{value}\n"));
    }
    write_file(path, &body)
}

/// Writes a scenario directory: three hourly series plus the two
/// probability feeds.
pub fn write_scenario_dir(dir: &Path, days: &[DayContext]) -> Result<()> {
    if days.is_empty() {
        bail!("scenario has no days");
    }
    let series = |pick: fn(&DayContext) -> &HourlyProfile| -> Result<HourlyProfile> {
        let mut values = Vec::with_capacity(days.len() * HOURS_PER_DAY);
        for d in days {
            values.extend_from_slice(pick(d).values());
        }
        Ok(HourlyProfile::new(HourStamp { date: days[0].date, hour: 0 }, values)?)
    };
    write_timeseries_csv(&dir.join(ACTUAL_FILE), &series(|d| &d.actual_load)?)?;
    write_timeseries_csv(&dir.join(FORECAST_FILE), &series(|d| &d.forecast_load)?)?;
    write_timeseries_csv(&dir.join(TEMPERATURE_FILE), &series(|d| &d.temperature)?)?;
    let pday: Vec<(Date, f64)> = days.iter().map(|d| (d.date, d.peak_day_probability)).collect();
    write_daily_csv(&dir.join(PEAK_DAY_FILE), &pday)?;
    let mut phour = Vec::with_capacity(days.len() * HOURS_PER_DAY);
    for d in days {
        phour.extend_from_slice(&d.peak_hour_probabilities);
    }
    let phour_profile = HourlyProfile::new(HourStamp { date: days[0].date, hour: 0 }, phour)?;
    write_timeseries_csv(&dir.join(PEAK_HOUR_FILE), &phour_profile)?;
    Ok(())
}

fn split_day_profile(series: &HourlyProfile, day: usize, date: Date) -> Result<HourlyProfile> {
    Ok(HourlyProfile::single_day(date, series.day_slice(day).to_vec())?)
}

/// Loads a scenario directory back into day contexts, checking alignment
/// between all five files and every per-day invariant.
pub fn load_scenario_dir(dir: &Path) -> Result<Vec<DayContext>> {
    let actual = load_timeseries_csv(&dir.join(ACTUAL_FILE))?;
    let forecast = load_timeseries_csv(&dir.join(FORECAST_FILE))?;
    let temperature = load_timeseries_csv(&dir.join(TEMPERATURE_FILE))?;
    let phour = load_timeseries_csv(&dir.join(PEAK_HOUR_FILE))?;
    let pday = load_daily_csv(&dir.join(PEAK_DAY_FILE))?;

    for (name, p) in [
        (ACTUAL_FILE, &actual),
        (FORECAST_FILE, &forecast),
        (TEMPERATURE_FILE, &temperature),
        (PEAK_HOUR_FILE, &phour),
    ] {
        if !p.is_day_aligned() {
            bail!("{name}: series must start at hour 0 and cover whole days");
        }
        if p.start() != actual.start() || p.len() != actual.len() {
            bail!("{name}: does not align with {ACTUAL_FILE}");
        }
    }
    let day_count = actual.day_count();
    if pday.len() != day_count {
        bail!("{PEAK_DAY_FILE}: {} rows for {day_count} days", pday.len());
    }

    let mut days = Vec::with_capacity(day_count);
    let mut date = actual.start().date;
    for i in 0..day_count {
        let (pd_date, pd_value) = pday[i];
        if pd_date != date {
            bail!("{PEAK_DAY_FILE}: row {} is {pd_date}, expected {date}", i + 1);
        }
        let ctx = DayContext {
            date,
            forecast_load: split_day_profile(&forecast, i, date)?,
            actual_load: split_day_profile(&actual, i, date)?,
            temperature: split_day_profile(&temperature, i, date)?,
            peak_day_probability: pd_value,
            peak_hour_probabilities: phour.day_slice(i).to_vec(),
        };
        let violations = validate_day_context(&ctx);
        if !violations.is_empty() {
            bail!(
                "{date}: invalid day data: {}",
                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
            );
        }
        days.push(ctx);
        date = date.next_day();
    }
    Ok(days)
}

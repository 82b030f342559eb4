//! Plain Gregorian calendar arithmetic at day and hour resolution.
//!
//! No time zones and no DST: a day is always 24 hours and timestamps are
//! formatted as `YYYY-MM-DDTHH`.

use std::fmt;

use crate::error::DcmError;

const DAYS_IN_MONTH: [u8; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// A calendar date (year, month, day).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date {
    year: i32,
    month: u8,
    day: u8,
}

impl Date {
    pub fn new(year: i32, month: u8, day: u8) -> Result<Self, DcmError> {
        if !(1..=12).contains(&month) {
            return Err(DcmError::invalid("date", format!("month {month} out of range")));
        }
        let max_day = days_in_month(year, month);
        if day == 0 || day > max_day {
            return Err(DcmError::invalid(
                "date",
                format!("day {day} out of range for {year}-{month:02}"),
            ));
        }
        Ok(Self { year, month, day })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    pub fn day(&self) -> u8 {
        self.day
    }

    pub fn month_id(&self) -> MonthId {
        MonthId { year: self.year, month: self.month }
    }

    /// The next calendar day, rolling over month and year boundaries.
    pub fn next_day(&self) -> Date {
        if self.day < days_in_month(self.year, self.month) {
            Date { day: self.day + 1, ..*self }
        } else if self.month < 12 {
            Date { year: self.year, month: self.month + 1, day: 1 }
        } else {
            Date { year: self.year + 1, month: 1, day: 1 }
        }
    }

    /// Parses `YYYY-MM-DD`.
    pub fn parse(s: &str) -> Result<Self, DcmError> {
        let bad = || DcmError::invalid("date", format!("expected YYYY-MM-DD, got {s:?}"));
        let mut parts = s.splitn(3, '-');
        let year: i32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let month: u8 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let day: u8 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        Date::new(year, month, day)
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

/// A billing month (year + month), the demand-charge accounting period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthId {
    pub year: i32,
    pub month: u8,
}

impl fmt::Display for MonthId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// A date plus an hour of day (0-23).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HourStamp {
    pub date: Date,
    pub hour: u8,
}

impl HourStamp {
    pub fn new(date: Date, hour: u8) -> Result<Self, DcmError> {
        if hour > 23 {
            return Err(DcmError::invalid("hour", format!("hour {hour} out of range")));
        }
        Ok(Self { date, hour })
    }

    /// The next hour, rolling over day boundaries.
    pub fn next(&self) -> HourStamp {
        if self.hour < 23 {
            HourStamp { date: self.date, hour: self.hour + 1 }
        } else {
            HourStamp { date: self.date.next_day(), hour: 0 }
        }
    }

    /// Parses `YYYY-MM-DDTHH`.
    pub fn parse(s: &str) -> Result<Self, DcmError> {
        let bad = || DcmError::invalid("timestamp", format!("expected YYYY-MM-DDTHH, got {s:?}"));
        let (date_part, hour_part) = s.split_once('T').ok_or_else(bad)?;
        let date = Date::parse(date_part)?;
        let hour: u8 = hour_part.parse().map_err(|_| bad())?;
        HourStamp::new(date, hour)
    }
}

impl fmt::Display for HourStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}T{:02}", self.date, self.hour)
    }
}

pub fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u8) -> u8 {
    if month == 2 && is_leap_year(year) {
        29
    } else {
        DAYS_IN_MONTH[(month - 1) as usize]
    }
}

pub fn days_in_year(year: i32) -> u16 {
    if is_leap_year(year) {
        366
    } else {
        365
    }
}

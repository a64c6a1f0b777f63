use std::fmt;

use chrono::{DateTime, Datelike, NaiveDateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use super::ModelError;

/// Zone abbreviations accepted in display strings, with their UTC offset in seconds.
const ZONES: &[(&str, i32)] = &[
    ("UTC", 0),
    ("GMT", 0),
    ("WET", 0),
    ("WEST", 3600),
    ("CET", 3600),
    ("CEST", 7200),
    ("EET", 7200),
    ("EEST", 10800),
    ("EST", -18000),
    ("EDT", -14400),
    ("CST", -21600),
    ("CDT", -18000),
    ("PST", -28800),
    ("PDT", -25200),
];

/// A point in time kept both as epoch seconds and as the display string it was read from.
///
/// Display strings look like `Sat Nov 12 07:34:44 EET 2005`. The string is what gets
/// exported; the epoch value is only used for ordering checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(i64, String)", into = "(i64, String)")]
pub struct Timestamp {
    epoch: i64,
    display: String,
}

impl Timestamp {
    pub fn parse(display: &str) -> Result<Self, ModelError> {
        let bad = || ModelError::InvalidTimestamp(display.to_owned());
        let fields: Vec<&str> = display.split_whitespace().collect();
        let [weekday, month, day, time, zone, year] = fields[..] else {
            return Err(bad());
        };
        let offset = ZONES
            .iter()
            .find(|(name, _)| *name == zone)
            .map(|(_, offset)| *offset)
            .ok_or_else(bad)?;
        let naive = NaiveDateTime::parse_from_str(
            &format!("{month} {day} {time} {year}"),
            "%b %d %H:%M:%S %Y",
        )
        .map_err(|_| bad())?;
        if naive.weekday().to_string() != weekday {
            return Err(bad());
        }
        let epoch = naive.and_utc().timestamp() - i64::from(offset);
        Ok(Self {
            epoch,
            display: display.to_owned(),
        })
    }

    /// Renders a UTC timestamp in the display format.
    pub fn from_epoch(epoch: i64) -> Self {
        let at: DateTime<Utc> = Utc.timestamp_opt(epoch, 0).single().unwrap_or_default();
        Self {
            epoch: at.timestamp(),
            display: at.format("%a %b %d %H:%M:%S UTC %Y").to_string(),
        }
    }

    pub fn now() -> Self {
        Self::from_epoch(Utc::now().timestamp())
    }

    pub fn epoch(&self) -> i64 {
        self.epoch
    }

    pub fn display(&self) -> &str {
        &self.display
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

impl TryFrom<(i64, String)> for Timestamp {
    type Error = ModelError;

    fn try_from((epoch, display): (i64, String)) -> Result<Self, Self::Error> {
        let parsed = Self::parse(&display)?;
        if parsed.epoch != epoch {
            return Err(ModelError::InvalidTimestamp(format!(
                "{display} (stored epoch {epoch}, expected {})",
                parsed.epoch
            )));
        }
        Ok(parsed)
    }
}

impl From<Timestamp> for (i64, String) {
    fn from(ts: Timestamp) -> Self {
        (ts.epoch, ts.display)
    }
}

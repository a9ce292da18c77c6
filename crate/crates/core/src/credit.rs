//! PJM-style capacity credit: the capacity factor inside a peak-load window,
//! averaged over a rolling three-year horizon, plus the firm replacement
//! capacity it implies.

use std::collections::BTreeSet;
use std::io::Read;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};

use crate::error::{Error, Result};
use crate::wind::{HOURS, MONTHS, MONTH_NAMES};

/// Years averaged by the rolling credit.
pub const ROLLING_YEARS: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakWindow {
    /// 1–12
    pub months: BTreeSet<u32>,
    /// Hour-beginning, 0–23
    pub hours: BTreeSet<u32>,
}

impl PeakWindow {
    pub fn new(months: impl IntoIterator<Item = u32>, hours: impl IntoIterator<Item = u32>) -> Result<Self> {
        let w = Self {
            months: months.into_iter().collect(),
            hours: hours.into_iter().collect(),
        };
        w.validate()?;
        Ok(w)
    }

    /// Egyptian grid peak: 5–8 PM, May through August.
    pub fn egypt() -> Self {
        Self {
            months: (5..=8).collect(),
            hours: (17..=20).collect(),
        }
    }

    /// PJM's own window: 3–7 PM, June through August.
    pub fn pjm() -> Self {
        Self {
            months: (6..=8).collect(),
            hours: (15..=19).collect(),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "egypt" => Some(Self::egypt()),
            "pjm" => Some(Self::pjm()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.months.is_empty() || self.hours.is_empty() {
            return Err(Error::invalid("peak window", "months and hours must be non-empty"));
        }
        if self.months.iter().any(|m| !(1..=12).contains(m)) {
            return Err(Error::invalid("peak window", "months must lie in 1..=12"));
        }
        if self.hours.iter().any(|&h| h > 23) {
            return Err(Error::invalid("peak window", "hours must lie in 0..=23"));
        }
        Ok(())
    }

    pub fn contains(&self, month: u32, hour: u32) -> bool {
        self.months.contains(&month) && self.hours.contains(&hour)
    }
}

/// Output data for one year.
#[derive(Debug, Clone, PartialEq)]
pub enum YearData {
    /// Time-stamped hourly output fractions.
    Hourly(Vec<(NaiveDateTime, f64)>),
    /// Month×hour mean output fractions, `values[month-1][hour]`. Each value
    /// stands for every day of its month.
    Climatology(Box<[[f64; HOURS]; MONTHS]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationHistory {
    years: Vec<(i32, YearData)>,
}

impl GenerationHistory {
    pub fn new(mut years: Vec<(i32, YearData)>) -> Result<Self> {
        if years.is_empty() {
            return Err(Error::invalid("history", "at least one year is required"));
        }
        years.sort_by_key(|(y, _)| *y);
        if years.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("history", "duplicate year"));
        }
        for (y, d) in &years {
            let bad = match d {
                YearData::Hourly(v) => v.iter().any(|(_, f)| !(0.0..=1.0).contains(f)),
                YearData::Climatology(m) => m.iter().flatten().any(|f| !(0.0..=1.0).contains(f)),
            };
            if bad {
                return Err(Error::invalid("history", format!("year {y}: fractions must lie in [0, 1]")));
            }
        }
        Ok(Self { years })
    }

    pub fn years(&self) -> &[(i32, YearData)] {
        &self.years
    }

    /// Same history with every fraction multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let years = self
            .years
            .iter()
            .map(|(y, d)| {
                let d = match d {
                    YearData::Hourly(v) => YearData::Hourly(v.iter().map(|(t, f)| (*t, f * s)).collect()),
                    YearData::Climatology(m) => {
                        let mut m = m.clone();
                        m.iter_mut().flatten().for_each(|f| *f *= s);
                        YearData::Climatology(m)
                    }
                };
                (*y, d)
            })
            .collect();
        Self::new(years)
    }
}

fn days_in_month(year: i32, month: u32) -> u32 {
    let (ny, nm) = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
    let first = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    let next = NaiveDate::from_ymd_opt(ny, nm, 1).expect("valid month");
    (next - first).num_days() as u32
}

/// Sum and sample count of window samples, per (month, hour) cell.
fn window_cells(year: i32, data: &YearData, window: &PeakWindow) -> Vec<(u32, u32, f64, f64)> {
    let mut cells = Vec::new();
    for &m in &window.months {
        for &h in &window.hours {
            let (sum, count) = match data {
                YearData::Hourly(v) => v
                    .iter()
                    .filter(|(t, _)| t.year() == year && t.month() == m && t.hour() == h)
                    .fold((0.0, 0.0), |(s, c), (_, f)| (s + f, c + 1.0)),
                YearData::Climatology(mat) => {
                    let d = f64::from(days_in_month(year, m));
                    (mat[m as usize - 1][h as usize] * d, d)
                }
            };
            cells.push((m, h, sum, count));
        }
    }
    cells
}

/// Mean output fraction over every sample inside the window.
pub fn window_capacity_factor(year: i32, data: &YearData, window: &PeakWindow) -> Result<f64> {
    window.validate()?;
    let (sum, count) = window_cells(year, data, window)
        .iter()
        .fold((0.0, 0.0), |(s, c), &(_, _, cs, cc)| (s + cs, c + cc));
    if count == 0.0 {
        return Err(Error::EmptyWindow);
    }
    Ok(sum / count)
}

/// Window capacity factor per (month, hour) cell of the window.
pub fn window_cell_factors(year: i32, data: &YearData, window: &PeakWindow) -> Result<Vec<(u32, u32, f64)>> {
    window.validate()?;
    let cells = window_cells(year, data, window);
    if cells.iter().all(|c| c.3 == 0.0) {
        return Err(Error::EmptyWindow);
    }
    Ok(cells
        .into_iter()
        .map(|(m, h, s, c)| (m, h, if c > 0.0 { s / c } else { f64::NAN }))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RollingCredit {
    pub year: i32,
    pub credit: f64,
    /// Years actually averaged.
    pub years_used: Vec<i32>,
    /// Set when fewer than three years were available.
    pub provisional: bool,
}

/// For each year, the mean of that year's and the two preceding years'
/// window capacity factors, using whichever of those years are present.
pub fn pjm_rolling_credit(history: &GenerationHistory, window: &PeakWindow) -> Result<Vec<RollingCredit>> {
    let factors = history
        .years()
        .iter()
        .map(|(y, d)| window_capacity_factor(*y, d, window).map(|cf| (*y, cf)))
        .collect::<Result<Vec<_>>>()?;
    Ok(factors
        .iter()
        .map(|&(year, _)| {
            let used: Vec<(i32, f64)> = factors
                .iter()
                .copied()
                .filter(|(y, _)| (year - ROLLING_YEARS + 1..=year).contains(y))
                .collect();
            RollingCredit {
                year,
                credit: used.iter().map(|(_, c)| c).sum::<f64>() / used.len() as f64,
                years_used: used.iter().map(|(y, _)| *y).collect(),
                provisional: used.len() < ROLLING_YEARS as usize,
            }
        })
        .collect())
}

/// Rolling credit per window cell for the latest year, as laid out in a
/// month×hour credit table, plus the overall average.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditTable {
    pub label: String,
    pub cells: Vec<(u32, u32, f64)>,
    pub average: f64,
    pub provisional: bool,
}

pub fn credit_table(label: &str, history: &GenerationHistory, window: &PeakWindow) -> Result<CreditTable> {
    let (last_year, _) = history.years().last().expect("history is non-empty");
    let recent: Vec<&(i32, YearData)> = history
        .years()
        .iter()
        .filter(|(y, _)| *y > last_year - ROLLING_YEARS)
        .collect();
    let per_year = recent
        .iter()
        .map(|(y, d)| window_cell_factors(*y, d, window))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(u32, u32, f64)> = (0..per_year[0].len())
        .map(|k| {
            let (m, h, _) = per_year[0][k];
            let vals: Vec<f64> = per_year.iter().map(|c| c[k].2).filter(|v| !v.is_nan()).collect();
            (m, h, vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();
    let rolling = pjm_rolling_credit(history, window)?;
    let last = rolling.last().expect("non-empty");
    Ok(CreditTable {
        label: label.to_string(),
        cells,
        average: last.credit,
        provisional: last.provisional,
    })
}

fn hour_label(h: u32) -> String {
    match h {
        0 => "12 AM".into(),
        1..=11 => format!("{h} AM"),
        12 => "12 PM".into(),
        _ => format!("{} PM", h - 12),
    }
}

/// CSV with one row per window cell (`"May, 5 PM"` style) and one column per
/// table, followed by an `Average` row. Values in percent.
pub fn credit_report_csv(tables: &[CreditTable]) -> String {
    let mut s = String::from("month_hour");
    for t in tables {
        s.push(',');
        s.push_str(&t.label);
    }
    s.push('\n');
    if let Some(first) = tables.first() {
        for (k, &(m, h, _)) in first.cells.iter().enumerate() {
            s.push_str(&format!("\"{}, {}\"", MONTH_NAMES[m as usize - 1], hour_label(h)));
            for t in tables {
                s.push_str(&format!(",{}", t.cells[k].2 * 100.0));
            }
            s.push('\n');
        }
    }
    s.push_str("Average");
    for t in tables {
        s.push_str(&format!(",{}", t.average * 100.0));
    }
    s.push('\n');
    s
}

/// Firm capacity (MW) a planner may count for `installed_mw` of wind.
pub fn replacement_capacity(installed_mw: f64, credit: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&credit) {
        return Err(Error::invalid("credit", "must lie in [0, 1]"));
    }
    if !(installed_mw >= 0.0) {
        return Err(Error::invalid("installed_mw", "must be non-negative"));
    }
    Ok(installed_mw * credit)
}

const TIMESTAMP_FORMATS: [&str; 4] = ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"];

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

/// Reads `timestamp,output_fraction` rows (local ISO-8601 time) and groups
/// them by calendar year.
pub fn read_hourly_history<R: Read>(reader: R) -> Result<GenerationHistory> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse {
        row: 1,
        column: "-".into(),
        reason: e.to_string(),
    })?;
    if headers.get(0) != Some("timestamp") || headers.get(1) != Some("output_fraction") {
        return Err(Error::Parse {
            row: 1,
            column: "-".into(),
            reason: "expected header `timestamp,output_fraction`".into(),
        });
    }
    let mut by_year: std::collections::BTreeMap<i32, Vec<(NaiveDateTime, f64)>> = Default::default();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: "-".into(),
            reason: e.to_string(),
        })?;
        let ts = rec.get(0).unwrap_or("");
        let t = parse_timestamp(ts).ok_or_else(|| Error::Parse {
            row,
            column: "timestamp".into(),
            reason: format!("`{ts}` is not an ISO-8601 local timestamp"),
        })?;
        let fs = rec.get(1).unwrap_or("");
        let f: f64 = fs.parse().map_err(|_| Error::Parse {
            row,
            column: "output_fraction".into(),
            reason: format!("`{fs}` is not numeric"),
        })?;
        by_year.entry(t.year()).or_default().push((t, f));
    }
    GenerationHistory::new(by_year.into_iter().map(|(y, v)| (y, YearData::Hourly(v))).collect())
}

/// Published El-Zayt capacity credits (%) for turbine scenarios 1–3 at
/// May–Aug, 5–8 PM. Reference display data only: the underlying hourly
/// records are not available, so these cannot be recomputed.
pub const EL_ZAYT_REFERENCE: [(&str, [f64; 3]); 17] = [
    ("May, 5 PM", [77.1, 68.3, 63.3]),
    ("May, 6 PM", [70.4, 59.6, 53.8]),
    ("May, 7 PM", [64.0, 53.8, 48.5]),
    ("May, 8 PM", [62.7, 55.2, 51.3]),
    ("June, 5 PM", [85.7, 77.2, 71.7]),
    ("June, 6 PM", [81.6, 73.2, 68.2]),
    ("June, 7 PM", [80.7, 74.2, 70.9]),
    ("June, 8 PM", [84.0, 78.4, 74.9]),
    ("July, 5 PM", [73.5, 60.0, 52.4]),
    ("July, 6 PM", [64.2, 52.3, 46.5]),
    ("July, 7 PM", [63.7, 55.0, 51.1]),
    ("July, 8 PM", [71.4, 64.7, 61.2]),
    ("Aug, 5 PM", [80.1, 62.7, 53.7]),
    ("Aug, 6 PM", [71.5, 55.6, 48.5]),
    ("Aug, 7 PM", [71.2, 59.8, 53.8]),
    ("Aug, 8 PM", [79.2, 69.9, 64.2]),
    ("Average", [73.8, 63.7, 58.4]),
];

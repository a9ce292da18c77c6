//! Geographic smoothing of aggregated wind output.
//!
//! Site climatologies become 288-sample generation series (month-major,
//! hour-minor), portfolios are capacity-weighted means of their components,
//! and smoothing is measured by the range of sample-to-sample variations.

use crate::error::{Error, Result};
use crate::wind::{power_fraction, shear_correct, SiteProfile, TurbinePowerCurve, HOURS, SAMPLES};

/// Output as a fraction of installed capacity for each month-hour sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationSeries {
    values: Vec<f64>,
    pub installed_capacity: f64,
}

impl GenerationSeries {
    pub fn new(values: Vec<f64>, installed_capacity: f64) -> Result<Self> {
        if values.len() != SAMPLES {
            return Err(Error::invalid(
                "series",
                format!("expected {SAMPLES} samples, got {}", values.len()),
            ));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("series", "fractions must lie in [0, 1]"));
        }
        Ok(Self {
            values,
            installed_capacity,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean output fraction, i.e. the capacity factor of the climatology.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// CSV with `index,month,hour,fraction` (index 1-based, month 1–12).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,month,hour,fraction\n");
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{},{},{},{v}\n", i + 1, i / HOURS + 1, i % HOURS));
        }
        s
    }
}

/// One plant of a portfolio.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioComponent {
    pub site: SiteProfile,
    pub curve: TurbinePowerCurve,
    pub installed_mw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioCase {
    pub label: String,
    pub components: Vec<PortfolioComponent>,
}

/// Lifts every climatology speed to hub height and maps it through the
/// power curve.
pub fn series_from_site(site: &SiteProfile, curve: &TurbinePowerCurve) -> Result<GenerationSeries> {
    curve.validate()?;
    let table = &site.wind_table;
    let values = table
        .samples()
        .map(|(_, _, v)| {
            shear_correct(v, table.reference_height, curve.hub_height, site.shear_exponent)
                .map(|vt| power_fraction(vt, curve))
        })
        .collect::<Result<Vec<_>>>()?;
    GenerationSeries::new(values, curve.rated_power)
}

/// Capacity-weighted mean of the component series.
pub fn aggregate_portfolio(case: &PortfolioCase) -> Result<GenerationSeries> {
    if case.components.is_empty() {
        return Err(Error::invalid("portfolio", "no components"));
    }
    let total: f64 = case.components.iter().map(|c| c.installed_mw).sum();
    if case.components.iter().any(|c| !(c.installed_mw > 0.0)) {
        return Err(Error::invalid("installed_mw", "capacities must be positive"));
    }
    let mut acc = vec![0.0; SAMPLES];
    for c in &case.components {
        let s = series_from_site(&c.site, &c.curve)?;
        let w = c.installed_mw / total;
        for (a, v) in acc.iter_mut().zip(s.values()) {
            *a += w * v;
        }
    }
    // Rounding in the weighted sum can push a unit sample a hair above one.
    for a in &mut acc {
        *a = a.clamp(0.0, 1.0);
    }
    GenerationSeries::new(acc, total)
}

/// Change from the previous sample; the first sample wraps to the last.
pub fn delta_series(s: &GenerationSeries) -> Vec<f64> {
    let v = s.values();
    let n = v.len();
    (0..n).map(|i| v[i] - v[(i + n - 1) % n]).collect()
}

/// Stable descending sort.
pub fn duration_curve(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Extremes of the sample-to-sample variation, in percentage points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationRange {
    pub max: f64,
    pub min: f64,
}

impl VariationRange {
    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    /// True when `self` lies strictly inside `other` at both ends.
    pub fn strictly_within(&self, other: &VariationRange) -> bool {
        self.max < other.max && self.min > other.min
    }
}

pub fn variation_range(s: &GenerationSeries) -> VariationRange {
    let d = delta_series(s);
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    VariationRange {
        max: max * 100.0,
        min: min * 100.0,
    }
}

/// Writes one fraction per line under a `rank,fraction` header.
pub fn duration_csv(values: &[f64]) -> String {
    let mut s = String::from("rank,fraction\n");
    for (i, v) in duration_curve(values).iter().enumerate() {
        s.push_str(&format!("{},{v}\n", i + 1));
    }
    s
}

pub fn delta_csv(s: &GenerationSeries) -> String {
    let mut out = String::from("index,month,hour,delta\n");
    for (i, d) in delta_series(s).iter().enumerate() {
        out.push_str(&format!("{},{},{},{d}\n", i + 1, i / HOURS + 1, i % HOURS));
    }
    out
}

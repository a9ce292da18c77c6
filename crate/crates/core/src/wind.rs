//! Wind statistics and turbine energy conversion.
//!
//! Covers the two-parameter Weibull wind-speed distribution, power-law
//! vertical shear correction, the quadratic turbine power curve and
//! ingestion of month×hour wind climatologies.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MONTHS: usize = 12;
pub const HOURS: usize = 24;
/// Number of month×hour samples in a climatology.
pub const SAMPLES: usize = MONTHS * HOURS;

/// Power-law shear exponent used for both Egyptian sites.
pub const DEFAULT_SHEAR_EXPONENT: f64 = 0.1429;

pub const MONTH_NAMES: [&str; MONTHS] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

/// Month×hour climatology of mean wind speeds (m/s) measured at one height.
#[derive(Debug, Clone, PartialEq)]
pub struct WindSpeedTable {
    pub site_name: String,
    pub reference_height: f64,
    values: [[f64; HOURS]; MONTHS],
}

impl WindSpeedTable {
    /// `values[month][hour]`, month 0 = January.
    pub fn new(
        site_name: impl Into<String>,
        reference_height: f64,
        values: [[f64; HOURS]; MONTHS],
    ) -> Result<Self> {
        if !(reference_height > 0.0) {
            return Err(Error::invalid("reference_height", "must be positive"));
        }
        for (m, row) in values.iter().enumerate() {
            for (h, &v) in row.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::invalid(
                        "wind speed",
                        format!("{} hour {h}: {v} is not a non-negative speed", MONTH_NAMES[m]),
                    ));
                }
            }
        }
        Ok(Self {
            site_name: site_name.into(),
            reference_height,
            values,
        })
    }

    /// Speed for `month` in 1..=12 and `hour` in 0..=23.
    pub fn get(&self, month: usize, hour: usize) -> f64 {
        self.values[month - 1][hour]
    }

    /// Samples in month-major order (Jan 0..23, Feb 0..23, ...).
    pub fn samples(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(m, row)| row.iter().enumerate().map(move |(h, &v)| (m + 1, h, v)))
    }

    pub fn matrix(&self) -> &[[f64; HOURS]; MONTHS] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeibullParams {
    pub shape: f64,
    pub scale: f64,
}

impl WeibullParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        let w = Self { shape, scale };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shape > 0.0) {
            return Err(Error::invalid("weibull.shape", "must be positive"));
        }
        if !(self.scale > 0.0) {
            return Err(Error::invalid("weibull.scale", "must be positive"));
        }
        Ok(())
    }

    /// P(V > v).
    pub fn exceedance(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return 0.0;
        }
        (-(v / self.scale).powf(self.shape)).exp()
    }

    /// P(V ≤ v).
    pub fn cdf(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return 1.0;
        }
        -(-(v / self.scale).powf(self.shape)).exp_m1()
    }

    pub fn pdf(&self, v: f64) -> f64 {
        let (k, c) = (self.shape, self.scale);
        if v < 0.0 {
            return 0.0;
        }
        k / c * (v / c).powf(k - 1.0) * (-(v / c).powf(k)).exp()
    }
}

/// Site climatology plus the shear exponent used to lift it to hub height.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteProfile {
    pub wind_table: WindSpeedTable,
    pub shear_exponent: f64,
    pub weibull: Option<WeibullParams>,
}

impl SiteProfile {
    pub fn new(
        wind_table: WindSpeedTable,
        shear_exponent: f64,
        weibull: Option<WeibullParams>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&shear_exponent) {
            return Err(Error::invalid("shear_exponent", "must lie in [0, 1]"));
        }
        if let Some(w) = &weibull {
            w.validate()?;
        }
        Ok(Self {
            wind_table,
            shear_exponent,
            weibull,
        })
    }
}

/// Turbine power curve: zero below cut-in, quadratic up to rated, flat to cut-out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbinePowerCurve {
    pub cut_in: f64,
    pub rated_speed: f64,
    pub cut_out: f64,
    /// MW
    pub rated_power: f64,
    /// m
    pub hub_height: f64,
}

/// Coefficients of the quadratic power-curve branch `a + b·v + c·v²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticCoeffs {
    pub fn eval(&self, v: f64) -> f64 {
        self.a + self.b * v + self.c * v * v
    }
}

impl TurbinePowerCurve {
    pub fn new(
        cut_in: f64,
        rated_speed: f64,
        cut_out: f64,
        rated_power: f64,
        hub_height: f64,
    ) -> Result<Self> {
        let c = Self {
            cut_in,
            rated_speed,
            cut_out,
            rated_power,
            hub_height,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cut_in == self.rated_speed {
            return Err(Error::SingularCurve(self.cut_in));
        }
        if !(0.0 < self.cut_in && self.cut_in < self.rated_speed && self.rated_speed < self.cut_out)
        {
            return Err(Error::invalid(
                "power curve",
                format!(
                    "need 0 < cut_in < rated < cut_out, got {}/{}/{}",
                    self.cut_in, self.rated_speed, self.cut_out
                ),
            ));
        }
        if !(self.rated_power > 0.0) {
            return Err(Error::invalid("rated_power", "must be positive"));
        }
        if !(self.hub_height > 0.0) {
            return Err(Error::invalid("hub_height", "must be positive"));
        }
        Ok(())
    }

    /// Same curve with a different cut-in speed.
    pub fn with_cut_in(&self, cut_in: f64) -> Self {
        Self { cut_in, ..*self }
    }
}

/// Power-law shear: `v · (h_hub / h_ref)^alpha`.
pub fn shear_correct(v: f64, h_ref: f64, h_hub: f64, alpha: f64) -> Result<f64> {
    if !(h_ref > 0.0) {
        return Err(Error::invalid("h_ref", "height must be positive"));
    }
    if !(h_hub > 0.0) {
        return Err(Error::invalid("h_hub", "height must be positive"));
    }
    if !(v >= 0.0) {
        return Err(Error::invalid("v", "wind speed must be non-negative"));
    }
    Ok(v * (h_hub / h_ref).powf(alpha))
}

/// Quadratic coefficients that make the power curve pass through zero at
/// cut-in and one at rated speed.
pub fn power_curve_coeffs(curve: &TurbinePowerCurve) -> Result<QuadraticCoeffs> {
    let (vi, vr) = (curve.cut_in, curve.rated_speed);
    if vi == vr {
        return Err(Error::SingularCurve(vi));
    }
    let denom = (vi - vr).powi(2);
    let cube = ((vi + vr) / (2.0 * vr)).powi(3);
    Ok(QuadraticCoeffs {
        a: (vi * (vi + vr) - 4.0 * vi * vr * cube) / denom,
        b: (4.0 * (vi + vr) * cube - (3.0 * vi + vr)) / denom,
        c: (2.0 - 4.0 * cube) / denom,
    })
}

/// Output as a fraction of rated power at hub-height speed `v`.
///
/// The rated interval is half-open: `v == cut_out` already yields zero.
pub fn power_fraction(v: f64, curve: &TurbinePowerCurve) -> f64 {
    if v < curve.cut_in || v >= curve.cut_out {
        return 0.0;
    }
    if v >= curve.rated_speed {
        return 1.0;
    }
    match power_curve_coeffs(curve) {
        Ok(q) => q.eval(v).clamp(0.0, 1.0),
        Err(_) => 0.0,
    }
}

/// Farm output in MW for `n_turbines` identical machines.
pub fn farm_power(v: f64, curve: &TurbinePowerCurve, n_turbines: u32) -> Result<f64> {
    if n_turbines == 0 {
        return Err(Error::invalid("n_turbines", "must be at least 1"));
    }
    Ok(f64::from(n_turbines) * (curve.rated_power * power_fraction(v, curve)))
}

/// P(lo < V < hi) under the Weibull distribution, in closed form. `hi` may be
/// `f64::INFINITY`.
pub fn weibull_prob_range(lo: f64, hi: f64, w: &WeibullParams) -> Result<f64> {
    if !(lo >= 0.0) {
        return Err(Error::invalid("lo", "must be non-negative"));
    }
    if lo > hi {
        return Err(Error::invalid("lo", format!("{lo} exceeds hi = {hi}")));
    }
    w.validate()?;
    if lo == 0.0 {
        return Ok(w.cdf(hi));
    }
    Ok(w.exceedance(lo) - w.exceedance(hi))
}

/// Reads a month×hour wind table from CSV.
///
/// Accepted headers are `site,hour,Jan,...,Dec` or `hour,Jan,...,Dec`, with an
/// optional trailing `Mean`/`Year` column. Exactly 24 hour rows are required;
/// a final `Mean` row is skipped.
pub fn ingest_wind_table<R: Read>(reader: R, reference_height: f64) -> Result<WindSpeedTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = rdr.records();
    let parse_err = |row: usize, column: &str, reason: String| Error::Parse {
        row,
        column: column.to_string(),
        reason,
    };

    let header = match records.next() {
        Some(r) => r.map_err(|e| parse_err(1, "-", e.to_string()))?,
        None => return Err(parse_err(1, "-", "empty input".into())),
    };
    let header: Vec<String> = header.iter().map(str::to_string).collect();
    let has_site = header
        .first()
        .is_some_and(|h| h.eq_ignore_ascii_case("site"));
    let first_month = if has_site { 2 } else { 1 };
    let hour_col = first_month - 1;
    if header.get(hour_col).map(|h| h.to_ascii_lowercase()) != Some("hour".into()) {
        return Err(parse_err(1, "hour", "expected `hour` column".into()));
    }
    for (i, name) in MONTH_NAMES.iter().enumerate() {
        match header.get(first_month + i) {
            Some(h) if h.get(..3).is_some_and(|p| p.eq_ignore_ascii_case(name)) => {}
            other => {
                return Err(parse_err(
                    1,
                    name,
                    format!("expected month header `{name}`, found {other:?}"),
                ))
            }
        }
    }
    let extra = header.len() - (first_month + MONTHS);
    if extra > 1
        || (extra == 1
            && !matches!(
                header[first_month + MONTHS].to_ascii_lowercase().as_str(),
                "mean" | "year"
            ))
    {
        return Err(parse_err(
            1,
            &header[first_month + MONTHS],
            "unexpected trailing column".into(),
        ));
    }

    let mut site_name = String::new();
    let mut values = [[0.0; HOURS]; MONTHS];
    let mut hours_seen = 0usize;
    for (idx, rec) in records.enumerate() {
        let row = idx + 2;
        let rec = rec.map_err(|e| parse_err(row, "-", e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let hour_field = rec.get(hour_col).unwrap_or("");
        if hour_field.eq_ignore_ascii_case("mean") {
            continue;
        }
        if hours_seen == HOURS {
            return Err(parse_err(row, "hour", "more than 24 hour rows".into()));
        }
        let hour: usize = hour_field.parse().map_err(|_| {
            parse_err(row, "hour", format!("`{hour_field}` is not an hour number"))
        })?;
        if hour != hours_seen {
            return Err(parse_err(
                row,
                "hour",
                format!("expected hour {hours_seen}, found {hour}"),
            ));
        }
        if has_site && site_name.is_empty() {
            site_name = rec.get(0).unwrap_or("").to_string();
        }
        for (m, name) in MONTH_NAMES.iter().enumerate() {
            let cell = rec
                .get(first_month + m)
                .filter(|c| !c.is_empty())
                .ok_or_else(|| parse_err(row, name, "missing cell".into()))?;
            let v: f64 = cell
                .parse()
                .map_err(|_| parse_err(row, name, format!("`{cell}` is not numeric")))?;
            if !(v >= 0.0) || !v.is_finite() {
                return Err(parse_err(row, name, format!("{v} is not a valid speed")));
            }
            values[m][hour] = v;
        }
        hours_seen += 1;
    }
    if hours_seen != HOURS {
        return Err(parse_err(
            hours_seen + 2,
            "hour",
            format!("expected 24 hour rows, found {hours_seen}"),
        ));
    }
    WindSpeedTable::new(site_name, reference_height, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn curve(vi: f64, vr: f64, vo: f64) -> TurbinePowerCurve {
        TurbinePowerCurve::new(vi, vr, vo, 2.0, 80.0).unwrap()
    }

    #[test]
    fn shear_examples() {
        assert_abs_diff_eq!(
            shear_correct(6.0, 24.5, 80.0, 0.1429).unwrap(),
            7.106,
            epsilon = 1e-3
        );
        assert_eq!(shear_correct(5.0, 50.0, 50.0, 0.1429).unwrap(), 5.0);
        assert_eq!(shear_correct(0.0, 10.0, 80.0, 0.1429).unwrap(), 0.0);
        assert!(shear_correct(5.0, 0.0, 80.0, 0.1).is_err());
        assert!(shear_correct(5.0, 10.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn coefficients_for_4_10() {
        let q = power_curve_coeffs(&curve(4.0, 10.0, 23.0)).unwrap();
        assert_abs_diff_eq!(q.a, 0.031111, epsilon = 1e-6);
        assert_abs_diff_eq!(q.b, -0.077556, epsilon = 1e-6);
        assert_abs_diff_eq!(q.c, 0.017444, epsilon = 1e-6);
    }

    #[test]
    fn singular_curve_rejected() {
        let c = TurbinePowerCurve {
            cut_in: 5.0,
            rated_speed: 5.0,
            cut_out: 20.0,
            rated_power: 1.0,
            hub_height: 50.0,
        };
        assert_eq!(power_curve_coeffs(&c), Err(Error::SingularCurve(5.0)));
        assert!(matches!(c.validate(), Err(Error::SingularCurve(_))));
    }

    #[test]
    fn power_fraction_branches() {
        let c = curve(4.0, 10.0, 23.0);
        assert_abs_diff_eq!(power_fraction(7.0, &c), 0.343, epsilon = 1e-3);
        assert_eq!(power_fraction(3.0, &c), 0.0);
        assert_eq!(power_fraction(15.0, &c), 1.0);
        assert_eq!(power_fraction(10.0, &c), 1.0);
        assert_eq!(power_fraction(23.0, &c), 0.0);
        assert_eq!(power_fraction(30.0, &c), 0.0);
    }

    #[test]
    fn farm_power_examples() {
        let c = curve(4.0, 10.0, 23.0);
        assert_eq!(farm_power(12.0, &c, 100).unwrap(), 200.0);
        assert_eq!(farm_power(2.0, &c, 100).unwrap(), 0.0);
        assert_abs_diff_eq!(farm_power(7.0, &c, 250).unwrap(), 171.5, epsilon = 0.5);
        assert!(farm_power(7.0, &c, 0).is_err());
    }

    #[test]
    fn weibull_examples() {
        let w = WeibullParams::new(11.05, 5.64).unwrap();
        assert_eq!(weibull_prob_range(0.0, f64::INFINITY, &w).unwrap(), 1.0);
        assert_abs_diff_eq!(weibull_prob_range(0.0, 3.0, &w).unwrap(), 9.35e-4, epsilon = 1e-5);
        assert!(weibull_prob_range(12.0, f64::INFINITY, &w).unwrap() < 1e-100);
        assert!(weibull_prob_range(5.0, 3.0, &w).is_err());
    }

    /// Composite Simpson quadrature of the pdf as an independent check on the
    /// closed-form CDF difference.
    #[test]
    fn weibull_closed_form_matches_quadrature() {
        let w = WeibullParams::new(2.0, 7.0).unwrap();
        let (lo, hi) = (3.0, 12.0);
        let n = 2000;
        let h = (hi - lo) / n as f64;
        let mut s = w.pdf(lo) + w.pdf(hi);
        for i in 1..n {
            let x = lo + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * w.pdf(x);
        }
        let quad = s * h / 3.0;
        assert_abs_diff_eq!(weibull_prob_range(lo, hi, &w).unwrap(), quad, epsilon = 1e-10);
    }

    const GALALA: &str = include_str!("../data/el_galala.csv");
    const ZAFARANA: &str = include_str!("../data/zafarana.csv");

    #[test]
    fn ingest_builtin_tables() {
        let g = ingest_wind_table(GALALA.as_bytes(), 24.5).unwrap();
        assert_eq!(g.get(1, 0), 7.1);
        assert_eq!(g.site_name, "El Galala");
        let z = ingest_wind_table(ZAFARANA.as_bytes(), 24.5).unwrap();
        assert_eq!(z.get(6, 21), 12.5);
        assert_eq!(z.get(12, 23), 7.0);
    }

    #[test]
    fn ingest_without_site_column() {
        let mut text = String::from("hour,Jan,Feb,Mar,Apr,May,Jun,Jul,Aug,Sep,Oct,Nov,Dec\n");
        for h in 0..24 {
            text.push_str(&format!("{h},1,2,3,4,5,6,7,8,9,10,11,{h}\n"));
        }
        let t = ingest_wind_table(text.as_bytes(), 10.0).unwrap();
        assert_eq!(t.get(12, 17), 17.0);
        assert_eq!(t.get(3, 5), 3.0);
    }

    #[test]
    fn ingest_rejects_23_rows() {
        let text: String = ZAFARANA
            .lines()
            .filter(|l| !l.starts_with("Zafarana,23,"))
            .collect::<Vec<_>>()
            .join("\n");
        let err = ingest_wind_table(text.as_bytes(), 24.5).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn ingest_names_bad_cell() {
        let text = ZAFARANA.replacen("Zafarana,5,7,6.8", "Zafarana,5,7,abc", 1);
        match ingest_wind_table(text.as_bytes(), 24.5).unwrap_err() {
            Error::Parse { row, column, .. } => {
                assert_eq!(row, 7);
                assert_eq!(column, "Feb");
            }
            e => panic!("unexpected {e}"),
        }
        let text = ZAFARANA.replacen("Zafarana,5,7,6.8,", "Zafarana,5,7,,", 1);
        assert!(matches!(
            ingest_wind_table(text.as_bytes(), 24.5),
            Err(Error::Parse { .. })
        ));
    }

    fn valid_curve() -> impl Strategy<Value = TurbinePowerCurve> {
        (0.5f64..8.0, 0.5f64..12.0, 0.5f64..15.0)
            .prop_map(|(vi, d1, d2)| curve(vi, vi + d1, vi + d1 + d2))
    }

    proptest! {
        #[test]
        fn curve_identities(c in valid_curve()) {
            let q = power_curve_coeffs(&c).unwrap();
            prop_assert!((q.eval(c.rated_speed) - 1.0).abs() < 1e-9);
            prop_assert!(q.eval(c.cut_in).abs() < 1e-9);
            prop_assert!(power_fraction(c.cut_in, &c).abs() < 1e-9);
            prop_assert_eq!(power_fraction(c.rated_speed, &c), 1.0);
        }

        #[test]
        fn fraction_bounded(c in valid_curve(), v in 0.0f64..40.0) {
            let p = power_fraction(v, &c);
            prop_assert!((0.0..=1.0).contains(&p));
            if v < c.cut_in || v >= c.cut_out { prop_assert_eq!(p, 0.0); }
        }

        #[test]
        fn weibull_complement(k in 0.5f64..15.0, c in 1.0f64..15.0, x in 0.0f64..40.0) {
            let w = WeibullParams::new(k, c).unwrap();
            let total = weibull_prob_range(0.0, x, &w).unwrap()
                + weibull_prob_range(x, f64::INFINITY, &w).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn shear_is_multiplicative(v in 0.0f64..30.0, s in 0.0f64..3.0, h in 1.0f64..150.0) {
            let a = shear_correct(v * s, 24.5, h, 0.1429).unwrap();
            let b = s * shear_correct(v, 24.5, h, 0.1429).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            prop_assert_eq!(shear_correct(v, h, h, 0.3).unwrap(), v);
        }

        #[test]
        fn farm_is_linear(c in valid_curve(), v in 0.0f64..30.0, n in 1u32..500) {
            let farm = farm_power(v, &c, n).unwrap();
            let single = farm_power(v, &c, 1).unwrap();
            prop_assert_eq!(farm, f64::from(n) * single);
        }
    }
}

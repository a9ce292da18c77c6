//! Grid-point characterization and voltage-quality assessment of wind
//! turbines at a point of common coupling (PCC), following the IEC 61400-21
//! style formulas: steady-state voltage change, continuous flicker, switching
//! voltage change and switching flicker.
//!
//! All quantities are per-unit. Every assessed value carries a `1/S_sc`
//! factor, so scaling the short-circuit power scales every output inversely.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Steady-state voltage change limit at the PCC (per-unit of nominal).
pub const DEFAULT_DSS_LIMIT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    /// kV
    pub nominal_voltage: f64,
    /// MVA
    pub short_circuit_power: f64,
    /// degrees
    pub impedance_angle: f64,
}

impl GridPoint {
    pub fn new(nominal_voltage: f64, short_circuit_power: f64, impedance_angle: f64) -> Result<Self> {
        let g = Self {
            nominal_voltage,
            short_circuit_power,
            impedance_angle,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.short_circuit_power > 0.0) {
            return Err(Error::invalid("short_circuit_power", "must be positive"));
        }
        if !(0.0..=90.0).contains(&self.impedance_angle) {
            return Err(Error::invalid("impedance_angle", "must lie in [0°, 90°]"));
        }
        Ok(())
    }

    /// Same point with the short-circuit power multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            short_circuit_power: self.short_circuit_power * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridStrength {
    Strong,
    Intermediate,
    Weak,
}

/// `√3 · U · I` in MVA from kV and kA.
pub fn short_circuit_power(line_voltage_kv: f64, sc_current_ka: f64) -> Result<f64> {
    if !(line_voltage_kv > 0.0) {
        return Err(Error::invalid("line_voltage", "must be positive"));
    }
    if !(sc_current_ka > 0.0) {
        return Err(Error::invalid("sc_current", "must be positive"));
    }
    Ok(3f64.sqrt() * line_voltage_kv * sc_current_ka)
}

/// Short-circuit ratio and its classification: strong above 20, weak below 10.
pub fn short_circuit_ratio(s_sc: f64, equipment_capacity: f64) -> Result<(f64, GridStrength)> {
    if !(equipment_capacity > 0.0) {
        return Err(Error::invalid("equipment_capacity", "must be positive"));
    }
    let ratio = s_sc / equipment_capacity;
    let class = if ratio > 20.0 {
        GridStrength::Strong
    } else if ratio < 10.0 {
        GridStrength::Weak
    } else {
        GridStrength::Intermediate
    };
    Ok((ratio, class))
}

/// Grid impedance angle `atan(X/R)` in degrees.
pub fn impedance_angle(r: f64, x: f64) -> Result<f64> {
    if r == 0.0 && x == 0.0 {
        return Err(Error::invalid("impedance", "R and X are both zero"));
    }
    Ok(x.atan2(r).to_degrees())
}

/// Apparent power S_60 (MVA) and phase angle φ (degrees) from the 60-second
/// peak active and reactive powers.
pub fn apparent_power_and_phase(p60: f64, q60: f64) -> Result<(f64, f64)> {
    if !(p60 > 0.0) {
        return Err(Error::invalid("p60", "must be positive"));
    }
    Ok((p60.hypot(q60), q60.atan2(p60).to_degrees()))
}

/// Steady-state voltage change for one turbine and for `n_turbines`.
///
/// Only defined when `cos(Ψ_k + φ) > 0.1`; otherwise a validity-domain error
/// is returned.
pub fn steady_state_voltage_change(
    s60: f64,
    phi_deg: f64,
    grid: &GridPoint,
    n_turbines: u32,
) -> Result<(f64, f64)> {
    grid.validate()?;
    let cos = (grid.impedance_angle + phi_deg).to_radians().cos();
    if !(cos > 0.1) {
        return Err(Error::ValidityDomain {
            formula: "steady-state voltage change",
            reason: format!(
                "cos(Ψ_k + φ) = cos({}° + {}°) = {cos:.4} is not above 0.1",
                grid.impedance_angle, phi_deg
            ),
        });
    }
    let d = s60 / grid.short_circuit_power * cos;
    Ok((d, f64::from(n_turbines) * d))
}

/// Long-term flicker for continuous operation; farm value sums as √N.
pub fn continuous_flicker(c: f64, s_n: f64, grid: &GridPoint, n_turbines: u32) -> Result<(f64, f64)> {
    grid.validate()?;
    if !(c >= 0.0) {
        return Err(Error::invalid("flicker coefficient", "must be non-negative"));
    }
    let p = c * s_n / grid.short_circuit_power;
    Ok((p, f64::from(n_turbines).sqrt() * p))
}

/// Relative voltage change caused by a single turbine's cut-in. Farm controls
/// never switch two turbines at once, so there is no farm aggregate.
pub fn switching_voltage_change(k_u: f64, s_n: f64, grid: &GridPoint) -> Result<f64> {
    grid.validate()?;
    if !(k_u >= 0.0) {
        return Err(Error::invalid("k_u", "must be non-negative"));
    }
    Ok(k_u * s_n / grid.short_circuit_power)
}

/// Flicker caused by switching, `8·N120^0.31·k_f·S_n/S_sc`. The farm value is
/// aggregated linearly in the number of turbines.
pub fn switching_flicker(
    n120: u32,
    k_f: f64,
    s_n: f64,
    grid: &GridPoint,
    n_turbines: u32,
) -> Result<(f64, f64)> {
    grid.validate()?;
    if !(k_f >= 0.0) {
        return Err(Error::invalid("k_f", "must be non-negative"));
    }
    let p = 8.0 * f64::from(n120).powf(0.31) * k_f * s_n / grid.short_circuit_power;
    Ok((p, f64::from(n_turbines) * p))
}

/// Result of a table lookup; `clamped` is set when the query fell outside the
/// tabulated grid and the nearest edge value was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interpolated {
    pub value: f64,
    pub clamped: bool,
}

/// Coefficient tabulated over grid impedance angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleTable {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
}

/// Coefficient tabulated over impedance angle × annual mean wind speed.
/// `values[i][j]` belongs to `va[i]` and `angles[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleSpeedTable {
    pub angles: Vec<f64>,
    pub va: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name}: empty table")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config(format!("{name}: grid must be strictly increasing")));
    }
    Ok(())
}

/// Bracketing index and weight for `x`; weight applies to the upper node.
fn locate(grid: &[f64], x: f64) -> (usize, f64, bool) {
    let last = grid.len() - 1;
    if x <= grid[0] {
        return (0, 0.0, x < grid[0]);
    }
    if x >= grid[last] {
        return (last, 0.0, x > grid[last]);
    }
    let i = grid.partition_point(|&g| g <= x) - 1;
    let w = (x - grid[i]) / (grid[i + 1] - grid[i]);
    (i, w, false)
}

fn lerp_row(row: &[f64], i: usize, w: f64) -> f64 {
    if w == 0.0 {
        row[i]
    } else {
        row[i] + w * (row[i + 1] - row[i])
    }
}

impl AngleTable {
    pub fn validate(&self) -> Result<()> {
        check_grid("angle table", &self.angles)?;
        if self.values.len() != self.angles.len() {
            return Err(Error::Config("angle table: values/angles length mismatch".into()));
        }
        Ok(())
    }

    pub fn lookup(&self, psi_k: f64) -> Result<Interpolated> {
        self.validate()?;
        let (i, w, clamped) = locate(&self.angles, psi_k);
        Ok(Interpolated {
            value: lerp_row(&self.values, i, w),
            clamped,
        })
    }
}

impl AngleSpeedTable {
    pub fn validate(&self) -> Result<()> {
        check_grid("flicker table angles", &self.angles)?;
        check_grid("flicker table wind speeds", &self.va)?;
        if self.values.len() != self.va.len()
            || self.values.iter().any(|r| r.len() != self.angles.len())
        {
            return Err(Error::Config("flicker table: values shape mismatch".into()));
        }
        Ok(())
    }

    /// Bilinear lookup over (Ψ_k, V_a).
    pub fn lookup(&self, psi_k: f64, v_a: f64) -> Result<Interpolated> {
        self.validate()?;
        let (j, wa, ca) = locate(&self.angles, psi_k);
        let (i, wv, cv) = locate(&self.va, v_a);
        let lo = lerp_row(&self.values[i], j, wa);
        let value = if wv == 0.0 {
            lo
        } else {
            lo + wv * (lerp_row(&self.values[i + 1], j, wa) - lo)
        };
        Ok(Interpolated {
            value,
            clamped: ca || cv,
        })
    }
}

/// One-dimensional or two-dimensional power-quality coefficient table.
#[derive(Debug, Clone, Copy)]
pub enum PqTable<'a> {
    Angle(&'a AngleTable),
    AngleSpeed(&'a AngleSpeedTable),
}

/// Looks up a datasheet coefficient; `v_a` is ignored for angle-only tables.
pub fn interp_pq_coefficient(table: PqTable<'_>, psi_k: f64, v_a: f64) -> Result<Interpolated> {
    match table {
        PqTable::Angle(t) => t.lookup(psi_k),
        PqTable::AngleSpeed(t) => t.lookup(psi_k, v_a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchingKind {
    #[serde(rename = "cut-in-at-cut-in")]
    CutInAtCutIn,
    #[serde(rename = "cut-in-at-rated")]
    CutInAtRated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingData {
    pub case: SwitchingKind,
    pub n10: u32,
    pub n120: u32,
    pub kf: AngleTable,
    pub ku: AngleTable,
}

/// Power-quality datasheet of a turbine type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbinePQData {
    pub sn_mva: f64,
    pub p60_mw: f64,
    pub q60_mvar: f64,
    pub flicker_coefficients: AngleSpeedTable,
    pub switching: Vec<SwitchingData>,
}

impl TurbinePQData {
    pub fn from_toml(text: &str) -> Result<Self> {
        let d: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sn_mva > 0.0) {
            return Err(Error::invalid("sn_mva", "must be positive"));
        }
        self.flicker_coefficients.validate()?;
        for s in &self.switching {
            s.kf.validate()?;
            s.ku.validate()?;
            if s.n120 < s.n10 {
                return Err(Error::invalid("n120", "must be at least n10"));
            }
        }
        for kind in [SwitchingKind::CutInAtCutIn, SwitchingKind::CutInAtRated] {
            if self.switching(kind).is_none() {
                return Err(Error::Config(format!("missing switching case {kind:?}")));
            }
        }
        Ok(())
    }

    pub fn switching(&self, kind: SwitchingKind) -> Option<&SwitchingData> {
        self.switching.iter().find(|s| s.case == kind)
    }
}

/// Switching-flicker results for one switching case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingFlicker {
    pub n120: u32,
    pub k_f: f64,
    pub p_lt: f64,
    pub p_lt_farm: f64,
}

/// One full column of a voltage-quality assessment.
#[derive(Debug, Clone, PartialEq)]
pub struct PQAssessment {
    pub v_a: f64,
    pub s60: f64,
    pub s_n: f64,
    pub s_sc: f64,
    pub phi_deg: f64,
    pub psi_k_deg: f64,
    pub n_turbines: u32,
    pub d_ss: f64,
    pub d_ss_farm: f64,
    pub flicker_coefficient: f64,
    pub p_lt_continuous: f64,
    pub p_lt_continuous_farm: f64,
    pub k_u: f64,
    pub d_so: f64,
    pub switch_cut_in: SwitchingFlicker,
    pub switch_rated: SwitchingFlicker,
    pub dss_limit: f64,
    pub dss_compliant: bool,
    pub warnings: Vec<String>,
}

/// Evaluates every voltage-quality quantity for one turbine type at one PCC.
pub fn assess_scenario(
    pq: &TurbinePQData,
    grid: &GridPoint,
    v_a: f64,
    n_turbines: u32,
    dss_limit: f64,
) -> Result<PQAssessment> {
    pq.validate()?;
    grid.validate()?;
    let psi = grid.impedance_angle;
    let mut warnings = Vec::new();
    let mut note = |what: &str, i: Interpolated| {
        if i.clamped {
            warnings.push(format!("{what}: query outside tabulated grid, clamped to edge"));
        }
        i.value
    };

    let (s60, phi) =
        apparent_power_and_phase(pq.p60_mw, pq.q60_mvar).map_err(|e| e.context("S_60"))?;
    let (d_ss, d_ss_farm) = steady_state_voltage_change(s60, phi, grid, n_turbines)
        .map_err(|e| e.context("steady-state voltage change"))?;

    let c = note(
        "flicker coefficient",
        pq.flicker_coefficients
            .lookup(psi, v_a)
            .map_err(|e| e.context("flicker coefficient"))?,
    );
    let (p_lt, p_lt_farm) = continuous_flicker(c, pq.sn_mva, grid, n_turbines)
        .map_err(|e| e.context("continuous flicker"))?;

    let mut switching = |kind: SwitchingKind, label: &'static str| -> Result<(f64, SwitchingFlicker)> {
        let data = pq
            .switching(kind)
            .ok_or_else(|| Error::Config(format!("missing switching case {label}")))?;
        let k_f = note(label, data.kf.lookup(psi)?);
        let k_u = note(label, data.ku.lookup(psi)?);
        let (p, pf) = switching_flicker(data.n120, k_f, pq.sn_mva, grid, n_turbines)
            .map_err(|e| e.context(label))?;
        Ok((
            k_u,
            SwitchingFlicker {
                n120: data.n120,
                k_f,
                p_lt: p,
                p_lt_farm: pf,
            },
        ))
    };
    let (_, switch_cut_in) = switching(SwitchingKind::CutInAtCutIn, "switching at cut-in speed")?;
    let (k_u, switch_rated) = switching(SwitchingKind::CutInAtRated, "switching at rated speed")?;
    let d_so = switching_voltage_change(k_u, pq.sn_mva, grid)
        .map_err(|e| e.context("switching voltage change"))?;

    Ok(PQAssessment {
        v_a,
        s60,
        s_n: pq.sn_mva,
        s_sc: grid.short_circuit_power,
        phi_deg: phi,
        psi_k_deg: psi,
        n_turbines,
        d_ss,
        d_ss_farm,
        flicker_coefficient: c,
        p_lt_continuous: p_lt,
        p_lt_continuous_farm: p_lt_farm,
        k_u,
        d_so,
        switch_cut_in,
        switch_rated,
        dss_limit,
        dss_compliant: d_ss_farm <= dss_limit,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;

    fn grid(ssc: f64, psi: f64) -> GridPoint {
        GridPoint::new(500.0, ssc, psi).unwrap()
    }

    #[test]
    fn short_circuit_power_examples() {
        assert_relative_eq!(short_circuit_power(1.0 / 3f64.sqrt(), 1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!((short_circuit_power(500.0, 1.1547).unwrap() - 1000.0).abs() < 0.1);
        assert!((short_circuit_power(220.0, 1.5746).unwrap() - 600.0).abs() < 0.1);
        assert!(short_circuit_power(0.0, 1.0).is_err());
    }

    #[test]
    fn scr_classification() {
        assert_eq!(short_circuit_ratio(1000.0, 200.0).unwrap(), (5.0, GridStrength::Weak));
        assert_eq!(short_circuit_ratio(2000.0, 100.0).unwrap(), (20.0, GridStrength::Intermediate));
        assert_eq!(short_circuit_ratio(2100.0, 100.0).unwrap(), (21.0, GridStrength::Strong));
        assert!(short_circuit_ratio(2100.0, 0.0).is_err());
    }

    #[test]
    fn impedance_angle_examples() {
        assert_relative_eq!(impedance_angle(1.0, 1.0).unwrap(), 45.0, epsilon = 1e-12);
        assert_eq!(impedance_angle(1.0, 0.0).unwrap(), 0.0);
        assert!((impedance_angle(0.0875, 1.0).unwrap() - 85.0).abs() < 0.1);
        assert!(impedance_angle(0.0, 0.0).is_err());
    }

    #[test]
    fn apparent_power_examples() {
        let (s, phi) = apparent_power_and_phase(0.645, 0.114).unwrap();
        assert!((s - 0.655).abs() < 1e-3 && (phi - 10.0).abs() < 0.1);
        let (s, phi) = apparent_power_and_phase(2.011, 0.0143).unwrap();
        assert!((s - 2.01105).abs() < 1e-5 && (phi - 0.41).abs() < 0.01);
        assert_eq!(apparent_power_and_phase(1.0, 0.0).unwrap(), (1.0, 0.0));
        assert!(apparent_power_and_phase(0.0, 1.0).is_err());
    }

    #[test]
    fn steady_state_examples() {
        let (s, phi) = (0.655, 10.0);
        let (d, f) = steady_state_voltage_change(s, phi, &grid(1000.0, 70.0), 333).unwrap();
        assert_relative_eq!(d, 1.14e-4, max_relative = 0.01);
        assert_relative_eq!(f, 0.0379, max_relative = 0.01);
        let (d, f) = steady_state_voltage_change(s, phi, &grid(600.0, 50.0), 333).unwrap();
        assert_relative_eq!(d, 5.46e-4, max_relative = 0.01);
        assert_relative_eq!(f, 0.1818, max_relative = 0.01);
        let (d, f) = steady_state_voltage_change(s, phi, &grid(600.0, 50.0), 1).unwrap();
        assert_eq!(d, f);
    }

    #[test]
    fn steady_state_validity_is_hard_error() {
        let err = steady_state_voltage_change(1.0, 10.0, &grid(1000.0, 85.0), 1).unwrap_err();
        assert!(matches!(err, Error::ValidityDomain { .. }));
    }

    #[test]
    fn flicker_examples() {
        let (p, f) = continuous_flicker(5.2, 0.607, &grid(1000.0, 70.0), 333).unwrap();
        assert_relative_eq!(p, 0.00316, max_relative = 0.01);
        assert_relative_eq!(f, 0.0576, max_relative = 0.01);
        let (p, f) = continuous_flicker(2.0, 2.0, &grid(1000.0, 70.0), 100).unwrap();
        assert_relative_eq!(p, 0.004, max_relative = 0.01);
        assert_relative_eq!(f, 0.040, max_relative = 0.01);
        let (p, f) = continuous_flicker(3.3, 2.0, &grid(1000.0, 70.0), 1).unwrap();
        assert_eq!(p, f);
    }

    #[test]
    fn switching_examples() {
        assert!((switching_voltage_change(1.05, 0.607, &grid(1000.0, 70.0)).unwrap() - 6.374e-4).abs() < 1e-6);
        assert!((switching_voltage_change(0.7, 2.0, &grid(600.0, 50.0)).unwrap() - 2.333e-3).abs() < 1e-6);
        assert_eq!(switching_voltage_change(0.0, 2.0, &grid(600.0, 50.0)).unwrap(), 0.0);

        let (p, f) = switching_flicker(30, 0.38, 0.607, &grid(1000.0, 70.0), 333).unwrap();
        assert_relative_eq!(p, 0.00530, max_relative = 0.01);
        assert_relative_eq!(f, 1.764, max_relative = 0.01);
        let (p, f) = switching_flicker(120, 0.1, 2.0, &grid(1000.0, 70.0), 100).unwrap();
        assert_relative_eq!(p, 0.00706, max_relative = 0.01);
        assert_relative_eq!(f, 0.706, max_relative = 0.01);
        let (p, f) = switching_flicker(8, 0.34, 0.607, &grid(600.0, 50.0), 333).unwrap();
        assert_relative_eq!(p, 0.00524, max_relative = 0.01);
        assert_relative_eq!(f, 1.746, max_relative = 0.01);
    }

    #[test]
    fn table_lookups() {
        let a = presets::type_a_pq();
        let d = presets::type_d_pq();
        let c = interp_pq_coefficient(PqTable::AngleSpeed(&a.flicker_coefficients), 70.0, 7.5).unwrap();
        assert_eq!(c, Interpolated { value: 5.2, clamped: false });
        let c = interp_pq_coefficient(PqTable::AngleSpeed(&a.flicker_coefficients), 60.0, 7.5).unwrap();
        assert!((c.value - 5.6).abs() < 1e-12);
        for va in [3.0, 4.2, 9.0, 14.9] {
            let c = interp_pq_coefficient(PqTable::AngleSpeed(&d.flicker_coefficients), 50.0, va).unwrap();
            assert_eq!(c.value, 3.0);
        }
        let ku = &a.switching(SwitchingKind::CutInAtRated).unwrap().ku;
        assert_eq!(interp_pq_coefficient(PqTable::Angle(ku), 70.0, 0.0).unwrap().value, 1.05);
        let out = interp_pq_coefficient(PqTable::Angle(ku), 20.0, 0.0).unwrap();
        assert!(out.clamped);
        assert_eq!(out.value, 1.30);
    }

    #[test]
    fn empty_table_is_config_error() {
        let t = AngleTable { angles: vec![], values: vec![] };
        assert!(matches!(t.lookup(30.0), Err(Error::Config(_))));
        let t = AngleTable { angles: vec![50.0, 30.0], values: vec![1.0, 2.0] };
        assert!(matches!(t.lookup(30.0), Err(Error::Config(_))));
    }

    #[test]
    fn grid_points_reproduce_table_exactly() {
        let a = presets::type_a_pq();
        let t = &a.flicker_coefficients;
        for (i, &va) in t.va.iter().enumerate() {
            for (j, &ang) in t.angles.iter().enumerate() {
                assert_eq!(t.lookup(ang, va).unwrap().value, t.values[i][j]);
            }
        }
    }

    #[test]
    fn assessment_scales_inversely_with_ssc() {
        let a = presets::type_a_pq();
        let g = grid(600.0, 50.0);
        let base = assess_scenario(&a, &g, 8.5, 333, DEFAULT_DSS_LIMIT).unwrap();
        let big = assess_scenario(&a, &g.scaled(10.0), 8.5, 333, DEFAULT_DSS_LIMIT).unwrap();
        let pairs = [
            (base.d_ss, big.d_ss),
            (base.d_ss_farm, big.d_ss_farm),
            (base.p_lt_continuous, big.p_lt_continuous),
            (base.p_lt_continuous_farm, big.p_lt_continuous_farm),
            (base.d_so, big.d_so),
            (base.switch_cut_in.p_lt, big.switch_cut_in.p_lt),
            (base.switch_cut_in.p_lt_farm, big.switch_cut_in.p_lt_farm),
            (base.switch_rated.p_lt, big.switch_rated.p_lt),
            (base.switch_rated.p_lt_farm, big.switch_rated.p_lt_farm),
        ];
        for (b, s) in pairs {
            assert_relative_eq!(b, 10.0 * s, max_relative = 1e-12);
        }
    }

    #[test]
    fn farm_aggregation_rules() {
        let d = presets::type_d_pq();
        let r = assess_scenario(&d, &grid(1000.0, 70.0), 7.5, 100, DEFAULT_DSS_LIMIT).unwrap();
        assert_eq!(r.d_ss_farm, 100.0 * r.d_ss);
        assert_eq!(r.p_lt_continuous_farm, 10.0 * r.p_lt_continuous);
        assert_eq!(r.switch_cut_in.p_lt_farm, 100.0 * r.switch_cut_in.p_lt);
        assert!(r.dss_compliant == (r.d_ss_farm <= 0.02));
    }

    #[test]
    fn assessment_names_failing_quantity() {
        let a = presets::type_a_pq();
        let err = assess_scenario(&a, &grid(1000.0, 85.0), 7.5, 1, DEFAULT_DSS_LIMIT).unwrap_err();
        assert!(err.to_string().starts_with("steady-state voltage change"), "{err}");
    }
}

//! Built-in data sets: site climatologies, turbine power-quality sheets,
//! turbine scenarios and the reference scenarios built from them.

use crate::aggregation::{PortfolioCase, PortfolioComponent};
use crate::voltage::{GridPoint, TurbinePQData};
use crate::wind::{ingest_wind_table, SiteProfile, TurbinePowerCurve, WeibullParams, DEFAULT_SHEAR_EXPONENT};

pub const GALALA_CSV: &str = include_str!("../data/el_galala.csv");
pub const ZAFARANA_CSV: &str = include_str!("../data/zafarana.csv");
pub const TYPE_A_PQ_TOML: &str = include_str!("../data/type_a_pq.toml");
pub const TYPE_D_PQ_TOML: &str = include_str!("../data/type_d_pq.toml");

/// Measurement height of both climatologies, m.
pub const CLIMATOLOGY_HEIGHT: f64 = 24.5;
pub const SCENARIO_HUB_HEIGHT: f64 = 80.0;
/// Unit rating of the scenario turbines, MW.
pub const SCENARIO_UNIT_MW: f64 = 2.0;
/// Capacity of each plant in the smoothing cases, MW.
pub const PLANT_MW: f64 = 500.0;

pub fn type_a_pq() -> TurbinePQData {
    TurbinePQData::from_toml(TYPE_A_PQ_TOML).expect("builtin Type A sheet is valid")
}

pub fn type_d_pq() -> TurbinePQData {
    TurbinePQData::from_toml(TYPE_D_PQ_TOML).expect("builtin Type D sheet is valid")
}

pub fn pq_by_name(name: &str) -> Option<TurbinePQData> {
    match name {
        "type-a" => Some(type_a_pq()),
        "type-d" => Some(type_d_pq()),
        _ => None,
    }
}

/// El Galala climatology, standing in for El Dabaa.
pub fn galala_site() -> SiteProfile {
    let t = ingest_wind_table(GALALA_CSV.as_bytes(), CLIMATOLOGY_HEIGHT).expect("builtin table is valid");
    SiteProfile::new(t, DEFAULT_SHEAR_EXPONENT, Some(dabaa_weibull())).expect("valid site")
}

pub fn zafarana_site() -> SiteProfile {
    let t = ingest_wind_table(ZAFARANA_CSV.as_bytes(), CLIMATOLOGY_HEIGHT).expect("builtin table is valid");
    SiteProfile::new(t, DEFAULT_SHEAR_EXPONENT, None).expect("valid site")
}

pub fn site_by_name(name: &str) -> Option<SiteProfile> {
    match name {
        "el-galala" | "el-dabaa" => Some(galala_site()),
        "zafarana" => Some(zafarana_site()),
        _ => None,
    }
}

/// El Dabaa Weibull fit, shape 11.05 and scale 5.64 m/s.
pub fn dabaa_weibull() -> WeibullParams {
    WeibullParams { shape: 11.05, scale: 5.64 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    I,
    II,
    III,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::I, Scenario::II, Scenario::III];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::I => "I",
            Scenario::II => "II",
            Scenario::III => "III",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "I" | "1" | "i" => Some(Scenario::I),
            "II" | "2" | "ii" => Some(Scenario::II),
            "III" | "3" | "iii" => Some(Scenario::III),
            _ => None,
        }
    }
}

/// Turbine fitted to the new plants of a smoothing scenario.
pub fn scenario_curve(s: Scenario) -> TurbinePowerCurve {
    let (vi, vr, vo) = match s {
        Scenario::I => (4.0, 10.0, 23.0),
        Scenario::II => (4.0, 12.0, 25.0),
        Scenario::III => (4.0, 13.0, 25.0),
    };
    TurbinePowerCurve {
        cut_in: vi,
        rated_speed: vr,
        cut_out: vo,
        rated_power: SCENARIO_UNIT_MW,
        hub_height: SCENARIO_HUB_HEIGHT,
    }
}

/// The fleet already operating at Zafarana.
pub fn old_zafarana_curve() -> TurbinePowerCurve {
    scenario_curve(Scenario::I)
}

/// Turbine of the wind–diesel reliability study.
pub fn reliability_curve() -> TurbinePowerCurve {
    TurbinePowerCurve {
        cut_in: 3.0,
        rated_speed: 12.0,
        cut_out: 25.0,
        rated_power: SCENARIO_UNIT_MW,
        hub_height: SCENARIO_HUB_HEIGHT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    /// Existing Zafarana plant plus a new plant at El Dabaa.
    A,
    /// Existing Zafarana plant plus a new plant at Zafarana.
    B,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
        }
    }
}

pub fn case_portfolio(case: Case, s: Scenario) -> PortfolioCase {
    let old = PortfolioComponent {
        site: zafarana_site(),
        curve: old_zafarana_curve(),
        installed_mw: PLANT_MW,
    };
    let new_site = match case {
        Case::A => galala_site(),
        Case::B => zafarana_site(),
    };
    let new = PortfolioComponent {
        site: new_site,
        curve: scenario_curve(s),
        installed_mw: PLANT_MW,
    };
    PortfolioCase {
        label: format!("Case-{}/Scenario-{}", case.label(), s.label()),
        components: vec![old, new],
    }
}

/// Published variation ranges (max, min) in percentage points for
/// Case A and Case B per scenario.
pub const VARIATION_RANGE_REFERENCE: [(Scenario, (f64, f64), (f64, f64)); 3] = [
    (Scenario::I, (16.0, -18.0), (28.0, -31.0)),
    (Scenario::II, (12.0, -16.0), (24.0, -37.0)),
    (Scenario::III, (11.0, -15.0), (22.0, -34.0)),
];

/// One voltage-quality scenario: a turbine type at a connection point.
#[derive(Debug, Clone, PartialEq)]
pub struct PqScenario {
    pub name: &'static str,
    pub site: &'static str,
    pub turbine: &'static str,
    pub grid: GridPoint,
    pub annual_mean_speed: f64,
    pub n_turbines: u32,
}

/// El Dabaa 500 kV connection. The impedance angle is the one used in the
/// published voltage-quality results, not the site sheet's 85°.
pub fn dabaa_grid() -> GridPoint {
    GridPoint {
        nominal_voltage: 500.0,
        short_circuit_power: 1000.0,
        impedance_angle: 70.0,
    }
}

pub fn zafarana_grid() -> GridPoint {
    GridPoint {
        nominal_voltage: 220.0,
        short_circuit_power: 600.0,
        impedance_angle: 50.0,
    }
}

/// The four reference scenarios, in column order 1–4.
pub fn pq_scenarios() -> Vec<PqScenario> {
    vec![
        PqScenario {
            name: "scenario-1",
            site: "El Dabaa",
            turbine: "type-a",
            grid: dabaa_grid(),
            annual_mean_speed: 7.5,
            n_turbines: 333,
        },
        PqScenario {
            name: "scenario-2",
            site: "Zafarana",
            turbine: "type-a",
            grid: zafarana_grid(),
            annual_mean_speed: 8.5,
            n_turbines: 333,
        },
        PqScenario {
            name: "scenario-3",
            site: "El Dabaa",
            turbine: "type-d",
            grid: dabaa_grid(),
            annual_mean_speed: 7.5,
            n_turbines: 100,
        },
        PqScenario {
            name: "scenario-4",
            site: "Zafarana",
            turbine: "type-d",
            grid: zafarana_grid(),
            annual_mean_speed: 8.5,
            n_turbines: 100,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        assert_eq!(galala_site().wind_table.get(1, 0), 7.1);
        assert_eq!(zafarana_site().wind_table.get(6, 21), 12.5);
        assert_eq!(type_a_pq().sn_mva, 0.607);
        assert_eq!(type_d_pq().sn_mva, 2.0);
        for s in Scenario::ALL {
            scenario_curve(s).validate().unwrap();
            assert_eq!(Scenario::parse(s.label()), Some(s));
        }
        reliability_curve().validate().unwrap();
        dabaa_weibull().validate().unwrap();
    }

    #[test]
    fn case_portfolios_total_1000_mw() {
        for c in [Case::A, Case::B] {
            let p = case_portfolio(c, Scenario::II);
            assert_eq!(p.components.iter().map(|c| c.installed_mw).sum::<f64>(), 1000.0);
        }
    }
}

//! 2030 green ammonia supply capacity against sector demand.
//!
//! Supply is the ammonia that a share of wind and solar generation can make.
//! Demand comes from four sectors (conventional ammonia, coal power
//! co-firing, shipping fuel, fuel-cell mobility), each scaled by a
//! penetration rate.

use serde::Serialize;

use crate::data::{DemandLevel, ParameterSet, SupplyLevel};
use crate::error::{Error, Result};
use crate::units::{GJ_PER_MWH, GJ_PER_TCE, H2_HHV_MJ_PER_KG, H2_LHV_MJ_PER_KG, HEATING_OIL_LHV_GJ_PER_T, NH3_PER_H2};

/// Heating value used to turn electrolyser efficiency into kWh per kg H2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatingValueBasis {
    Hhv,
    Lhv,
}

impl HeatingValueBasis {
    pub fn mj_per_kg(self) -> f64 {
        match self {
            HeatingValueBasis::Hhv => H2_HHV_MJ_PER_KG,
            HeatingValueBasis::Lhv => H2_LHV_MJ_PER_KG,
        }
    }
}

impl std::str::FromStr for HeatingValueBasis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hhv" => Ok(HeatingValueBasis::Hhv),
            "lhv" => Ok(HeatingValueBasis::Lhv),
            other => Err(Error::input(format!("heating value basis must be hhv or lhv, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupplyAssumptions {
    pub wind_capacity_gw: f64,
    pub solar_capacity_gw: f64,
    pub wind_hours: f64,
    pub solar_hours: f64,
    /// Fraction.
    pub electrolyser_efficiency: f64,
    /// Fraction of hydrogen fed to synthesis that ends up in ammonia.
    pub synthesis_conversion: f64,
    /// Heating value of hydrogen used for electrolysis energy, MJ/kg.
    pub h2_heating_value: f64,
}

impl SupplyAssumptions {
    pub fn from_params(p: &ParameterSet) -> Result<Self> {
        let s = SupplyAssumptions {
            wind_capacity_gw: p.get("wind_capacity")?,
            solar_capacity_gw: p.get("solar_capacity")?,
            wind_hours: p.get("wind_hours")?,
            solar_hours: p.get("solar_hours")?,
            electrolyser_efficiency: p.get("electrolyser_efficiency")? / 100.0,
            synthesis_conversion: p.get("synthesis_conversion")? / 100.0,
            h2_heating_value: p.get("electrolysis_heating_value")?,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_basis(mut self, basis: HeatingValueBasis) -> Self {
        self.h2_heating_value = basis.mj_per_kg();
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("wind_capacity", self.wind_capacity_gw),
            ("solar_capacity", self.solar_capacity_gw),
            ("wind_hours", self.wind_hours),
            ("solar_hours", self.solar_hours),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::input(format!("{name} must be nonnegative, got {v}")));
            }
        }
        for (name, v) in [
            ("electrolyser_efficiency", self.electrolyser_efficiency),
            ("synthesis_conversion", self.synthesis_conversion),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::input(format!("{name} must be in (0, 1], got {v}")));
            }
        }
        if !(self.h2_heating_value > 0.0 && self.h2_heating_value.is_finite()) {
            return Err(Error::input("hydrogen heating value must be positive"));
        }
        Ok(())
    }

    /// Electrolysis electricity per tonne of ammonia, MWh/t.
    pub fn electricity_per_t_nh3(&self) -> f64 {
        let h2_t_per_t_nh3 = 1.0 / NH3_PER_H2 / self.synthesis_conversion;
        let mwh_per_t_h2 = self.h2_heating_value / GJ_PER_MWH / self.electrolyser_efficiency;
        h2_t_per_t_nh3 * mwh_per_t_h2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemandAssumptions {
    /// Mt NH3/yr.
    pub conventional_ammonia_mt: f64,
    /// Mt heating oil/yr.
    pub shipping_fuel_mt: f64,
    pub thermal_capacity_gw: f64,
    /// Fraction of thermal capacity that burns coal.
    pub coal_share: f64,
    pub coal_hours: f64,
    /// tce/MWh.
    pub coal_consumption: f64,
    pub hrs_count: f64,
    /// kg H2/d per station.
    pub hrs_capacity: f64,
    /// MJ/kg.
    pub lhv_nh3: f64,
}

impl DemandAssumptions {
    pub fn from_params(p: &ParameterSet) -> Result<Self> {
        let d = DemandAssumptions {
            conventional_ammonia_mt: p.get("conventional_ammonia_2030")?,
            shipping_fuel_mt: p.get("shipping_fuel_2030")?,
            thermal_capacity_gw: p.get("thermal_capacity")?,
            coal_share: p.get("coal_share")? / 100.0,
            coal_hours: p.get("coal_hours")?,
            coal_consumption: p.get("coal_consumption")?,
            hrs_count: p.get("hrs_count")?,
            hrs_capacity: p.get("hrs_capacity")?,
            lhv_nh3: p.get("ammonia_lhv")?,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("conventional_ammonia", self.conventional_ammonia_mt),
            ("shipping_fuel", self.shipping_fuel_mt),
            ("thermal_capacity", self.thermal_capacity_gw),
            ("coal_hours", self.coal_hours),
            ("coal_consumption", self.coal_consumption),
            ("hrs_count", self.hrs_count),
            ("hrs_capacity", self.hrs_capacity),
            ("lhv_nh3", self.lhv_nh3),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.coal_share > 0.0 && self.coal_share <= 1.0) {
            return Err(Error::input("coal share must be in (0, 1]"));
        }
        Ok(())
    }
}

fn check_share(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::input(format!("{name} must be in [0, 1], got {v}")))
    }
}

/// Annual wind and solar generation, TWh.
pub fn renewable_generation(s: &SupplyAssumptions) -> f64 {
    (s.wind_capacity_gw * s.wind_hours + s.solar_capacity_gw * s.solar_hours) / 1000.0
}

/// Ammonia made from `share` of renewable generation, Mt/yr.
pub fn supply_capacity(s: &SupplyAssumptions, share: f64) -> Result<f64> {
    check_share("renewable share", share)?;
    // TWh ÷ MWh/t gives Mt directly.
    Ok(renewable_generation(s) * share / s.electricity_per_t_nh3())
}

/// Ammonia needed to co-fire `rate` of the coal fleet's fuel energy, Mt/yr.
pub fn power_sector_demand(d: &DemandAssumptions, rate: f64) -> Result<f64> {
    check_share("co-firing rate", rate)?;
    let generation_twh = d.thermal_capacity_gw * d.coal_share * d.coal_hours / 1000.0;
    let fuel_pj = generation_twh * d.coal_consumption * GJ_PER_TCE;
    Ok(rate * fuel_pj / d.lhv_nh3)
}

/// Ammonia replacing `pr` of shipping heating oil by energy, Mt/yr.
pub fn shipping_demand(d: &DemandAssumptions, pr: f64) -> Result<f64> {
    check_share("shipping penetration rate", pr)?;
    Ok(pr * d.shipping_fuel_mt * HEATING_OIL_LHV_GJ_PER_T / d.lhv_nh3)
}

/// Ammonia carrying hydrogen to refuelling stations, Mt/yr, with the
/// penetration rate given as station utilization × share shipped as ammonia.
pub fn mobility_demand(d: &DemandAssumptions, utilization: f64, ammonia_share: f64) -> Result<f64> {
    check_share("station utilization", utilization)?;
    check_share("ammonia share of station supply", ammonia_share)?;
    mobility_demand_pr(d, utilization * ammonia_share)
}

/// Mobility demand from an already combined penetration rate.
pub fn mobility_demand_pr(d: &DemandAssumptions, pr: f64) -> Result<f64> {
    check_share("mobility penetration rate", pr)?;
    let h2_kg = d.hrs_count * d.hrs_capacity * 365.0;
    Ok(pr * h2_kg * NH3_PER_H2 / 1.0e9)
}

pub fn ammonia_sector_demand(d: &DemandAssumptions, pr: f64) -> Result<f64> {
    check_share("ammonia sector penetration rate", pr)?;
    Ok(pr * d.conventional_ammonia_mt)
}

/// Share of renewable generation needed to make `demand_mt` of ammonia.
pub fn required_renewable_share(s: &SupplyAssumptions, demand_mt: f64) -> Result<f64> {
    if !(demand_mt >= 0.0 && demand_mt.is_finite()) {
        return Err(Error::input(format!("demand must be nonnegative, got {demand_mt}")));
    }
    let generation = renewable_generation(s);
    if generation <= 0.0 {
        return Err(Error::input("no renewable generation to supply from"));
    }
    Ok(demand_mt * s.electricity_per_t_nh3() / generation)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorDemand {
    pub level: u32,
    pub ammonia: f64,
    pub power: f64,
    pub shipping: f64,
    pub mobility: f64,
}

impl SectorDemand {
    pub fn total(&self) -> f64 {
        self.ammonia + self.power + self.shipping + self.mobility
    }

    pub fn sectors(&self) -> [(&'static str, f64); 4] {
        [
            ("ammonia", self.ammonia),
            ("power", self.power),
            ("shipping", self.shipping),
            ("mobility", self.mobility),
        ]
    }
}

pub fn level_demand(d: &DemandAssumptions, level: &DemandLevel) -> Result<SectorDemand> {
    Ok(SectorDemand {
        level: level.level,
        ammonia: ammonia_sector_demand(d, level.ammonia_pr)?,
        power: power_sector_demand(d, level.power_pr)?,
        shipping: shipping_demand(d, level.shipping_pr)?,
        mobility: mobility_demand_pr(d, level.mobility_pr)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupplyRow {
    pub level: u32,
    pub renewable_share: f64,
    /// Mt NH3/yr.
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coverage {
    pub supply_level: u32,
    pub demand_level: u32,
    /// Supply ÷ demand.
    pub ratio: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub supply: Vec<SupplyRow>,
    pub demand: Vec<SectorDemand>,
    pub coverage: Vec<Coverage>,
}

impl BalanceReport {
    pub fn coverage(&self, supply_level: u32, demand_level: u32) -> Option<&Coverage> {
        self.coverage
            .iter()
            .find(|c| c.supply_level == supply_level && c.demand_level == demand_level)
    }
}

/// Every supply level against every demand level.
pub fn balance_report(
    s: &SupplyAssumptions,
    d: &DemandAssumptions,
    supply_levels: &[SupplyLevel],
    demand_levels: &[DemandLevel],
) -> Result<BalanceReport> {
    s.validate()?;
    d.validate()?;
    let supply = supply_levels
        .iter()
        .map(|l| {
            Ok(SupplyRow {
                level: l.level,
                renewable_share: l.renewable_share,
                capacity: supply_capacity(s, l.renewable_share)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let demand = demand_levels
        .iter()
        .map(|l| level_demand(d, l))
        .collect::<Result<Vec<_>>>()?;
    let mut coverage = Vec::with_capacity(supply.len() * demand.len());
    for sr in &supply {
        for dr in &demand {
            let total = dr.total();
            let ratio = if total > 0.0 { sr.capacity / total } else { f64::INFINITY };
            coverage.push(Coverage {
                supply_level: sr.level,
                demand_level: dr.level,
                ratio,
                covered: sr.capacity >= total,
            });
        }
    }
    Ok(BalanceReport {
        supply,
        demand,
        coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn supply() -> SupplyAssumptions {
        SupplyAssumptions {
            wind_capacity_gw: 780.0,
            solar_capacity_gw: 840.0,
            wind_hours: 2246.0,
            solar_hours: 1163.0,
            electrolyser_efficiency: 0.7,
            synthesis_conversion: 0.95,
            h2_heating_value: H2_HHV_MJ_PER_KG,
        }
    }

    fn demand() -> DemandAssumptions {
        DemandAssumptions {
            conventional_ammonia_mt: 52.0,
            shipping_fuel_mt: 20.0,
            thermal_capacity_gw: 1450.0,
            coal_share: 0.87,
            coal_hours: 4000.0,
            coal_consumption: 0.31,
            hrs_count: 1000.0,
            hrs_capacity: 1000.0,
            lhv_nh3: 18.6,
        }
    }

    #[test]
    fn generation() {
        assert_abs_diff_eq!(renewable_generation(&supply()), 2728.8, epsilon = 1e-9);
        let solar_only = SupplyAssumptions {
            wind_capacity_gw: 0.0,
            ..supply()
        };
        assert_abs_diff_eq!(renewable_generation(&solar_only), 976.92, epsilon = 1e-9);
        let none = SupplyAssumptions {
            solar_capacity_gw: 0.0,
            ..solar_only
        };
        assert_eq!(renewable_generation(&none), 0.0);
        assert!(required_renewable_share(&none, 1.0).is_err());
    }

    #[test]
    fn electricity_basis() {
        let hhv = supply().electricity_per_t_nh3();
        assert_abs_diff_eq!(hhv, 10.4526, epsilon = 1e-4);
        let lhv = supply().with_basis(HeatingValueBasis::Lhv).electricity_per_t_nh3();
        assert_abs_diff_eq!(lhv / hhv, 120.0 / 141.8, epsilon = 1e-12);
        assert_eq!("LHV".parse::<HeatingValueBasis>().unwrap(), HeatingValueBasis::Lhv);
        assert!("xhv".parse::<HeatingValueBasis>().is_err());
    }

    #[test]
    fn sector_examples() {
        let d = demand();
        assert_abs_diff_eq!(ammonia_sector_demand(&d, 0.5).unwrap(), 26.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ammonia_sector_demand(&d, 0.1).unwrap(), 5.2, epsilon = 1e-12);
        let p3 = power_sector_demand(&d, 0.03).unwrap();
        let p5 = power_sector_demand(&d, 0.05).unwrap();
        assert_abs_diff_eq!(p5, p3 * 5.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(shipping_demand(&d, 0.03).unwrap(), 1.3506, epsilon = 1e-3);
        assert_abs_diff_eq!(mobility_demand_pr(&d, 0.1).unwrap(), 0.2068, epsilon = 1e-3);
        assert_abs_diff_eq!(
            mobility_demand(&d, 0.8, 0.5).unwrap(),
            mobility_demand_pr(&d, 0.4).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_rates_zero_demand() {
        let d = demand();
        let zero = DemandLevel {
            level: 0,
            ammonia_pr: 0.0,
            power_pr: 0.0,
            shipping_pr: 0.0,
            mobility_pr: 0.0,
        };
        assert_eq!(level_demand(&d, &zero).unwrap().total(), 0.0);
        assert_eq!(supply_capacity(&supply(), 0.0).unwrap(), 0.0);
        assert_eq!(required_renewable_share(&supply(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_shares() {
        assert!(supply_capacity(&supply(), 1.5).is_err());
        assert!(shipping_demand(&demand(), -0.1).is_err());
        assert!(mobility_demand(&demand(), 1.2, 0.5).is_err());
        assert!(required_renewable_share(&supply(), -1.0).is_err());
    }
}

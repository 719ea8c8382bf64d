//! Physical and monetary quantities with the handful of units the models need.
//!
//! Every [`Unit`] belongs to one [`Dimension`] and carries a fixed factor to the
//! SI-ish base of that dimension (J, kg, USD, and their ratios). Conversions are
//! exact multiplications by those factors; there is no general dimensional
//! algebra.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const J_PER_GJ: f64 = 1.0e9;
pub const GJ_PER_TCE: f64 = 29.3076;
pub const GJ_PER_TOE: f64 = 41.868;
pub const J_PER_BTU: f64 = 1055.06;
pub const GJ_PER_MWH: f64 = 3.6;
pub const J_PER_KCAL: f64 = 4186.8;

/// Hydrogen lower heating value, MJ/kg.
pub const H2_LHV_MJ_PER_KG: f64 = 120.0;
/// Hydrogen higher heating value, MJ/kg.
pub const H2_HHV_MJ_PER_KG: f64 = 141.8;
/// Heating oil for shipping, taken as one toe per tonne.
pub const HEATING_OIL_LHV_GJ_PER_T: f64 = GJ_PER_TOE;
/// Mass of ammonia carrying one unit mass of hydrogen (NH3 : 3 H).
pub const NH3_PER_H2: f64 = 17.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Mass,
    Money,
    PricePerMass,
    PricePerEnergy,
    EmissionPerEnergy,
    MassPerMoney,
    EnergyPerMoney,
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    GJ,
    MJ,
    MWh,
    kWh,
    TWh,
    tce,
    toe,
    Btu,
    kBtu,
    kcal,
    t,
    kt,
    Mt,
    kg,
    USD,
    kUSD,
    B_USD,
    USD_per_t,
    USD_per_tce,
    USD_per_MWh,
    USD_per_kgH2,
    kgCO2_per_MWh,
    kg_per_USD,
    kBtu_per_USD,
}

impl Unit {
    pub const ALL: [Unit; 24] = [
        Unit::GJ,
        Unit::MJ,
        Unit::MWh,
        Unit::kWh,
        Unit::TWh,
        Unit::tce,
        Unit::toe,
        Unit::Btu,
        Unit::kBtu,
        Unit::kcal,
        Unit::t,
        Unit::kt,
        Unit::Mt,
        Unit::kg,
        Unit::USD,
        Unit::kUSD,
        Unit::B_USD,
        Unit::USD_per_t,
        Unit::USD_per_tce,
        Unit::USD_per_MWh,
        Unit::USD_per_kgH2,
        Unit::kgCO2_per_MWh,
        Unit::kg_per_USD,
        Unit::kBtu_per_USD,
    ];

    pub fn dimension(self) -> Dimension {
        use Unit::*;
        match self {
            GJ | MJ | MWh | kWh | TWh | tce | toe | Btu | kBtu | kcal => Dimension::Energy,
            t | kt | Mt | kg => Dimension::Mass,
            USD | kUSD | B_USD => Dimension::Money,
            USD_per_t | USD_per_kgH2 => Dimension::PricePerMass,
            USD_per_tce | USD_per_MWh => Dimension::PricePerEnergy,
            kgCO2_per_MWh => Dimension::EmissionPerEnergy,
            kg_per_USD => Dimension::MassPerMoney,
            kBtu_per_USD => Dimension::EnergyPerMoney,
        }
    }

    /// Multiplier taking a value in this unit to the dimension's base unit
    /// (J, kg, USD, USD/kg, USD/J, kg/J, kg/USD, J/USD).
    fn to_base(self) -> f64 {
        use Unit::*;
        let j_per_mwh = GJ_PER_MWH * J_PER_GJ;
        match self {
            GJ => J_PER_GJ,
            MJ => 1.0e6,
            MWh => j_per_mwh,
            kWh => j_per_mwh / 1.0e3,
            TWh => j_per_mwh * 1.0e6,
            tce => GJ_PER_TCE * J_PER_GJ,
            toe => GJ_PER_TOE * J_PER_GJ,
            Btu => J_PER_BTU,
            kBtu => J_PER_BTU * 1.0e3,
            kcal => J_PER_KCAL,
            t => 1.0e3,
            kt => 1.0e6,
            Mt => 1.0e9,
            kg => 1.0,
            USD => 1.0,
            kUSD => 1.0e3,
            B_USD => 1.0e9,
            USD_per_t => 1.0e-3,
            USD_per_kgH2 => 1.0,
            USD_per_tce => 1.0 / (GJ_PER_TCE * J_PER_GJ),
            USD_per_MWh => 1.0 / j_per_mwh,
            kgCO2_per_MWh => 1.0 / j_per_mwh,
            kg_per_USD => 1.0,
            kBtu_per_USD => J_PER_BTU * 1.0e3,
        }
    }

    pub fn as_str(self) -> &'static str {
        use Unit::*;
        match self {
            GJ => "GJ",
            MJ => "MJ",
            MWh => "MWh",
            kWh => "kWh",
            TWh => "TWh",
            tce => "tce",
            toe => "toe",
            Btu => "Btu",
            kBtu => "kBtu",
            kcal => "kcal",
            t => "t",
            kt => "kt",
            Mt => "Mt",
            kg => "kg",
            USD => "USD",
            kUSD => "kUSD",
            B_USD => "B_USD",
            USD_per_t => "USD_per_t",
            USD_per_tce => "USD_per_tce",
            USD_per_MWh => "USD_per_MWh",
            USD_per_kgH2 => "USD_per_kgH2",
            kgCO2_per_MWh => "kgCO2_per_MWh",
            kg_per_USD => "kg_per_USD",
            kBtu_per_USD => "kBtu_per_USD",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Unit::ALL
            .iter()
            .copied()
            .find(|u| u.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown unit `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::input(format!("non-finite quantity {value} {unit}")));
        }
        Ok(Quantity { value, unit })
    }

    pub fn convert(self, target: Unit) -> Result<Quantity> {
        convert(self, target)
    }

    /// Value expressed in `target`; shorthand for `convert(..)?.value`.
    pub fn value_in(self, target: Unit) -> Result<f64> {
        Ok(convert(self, target)?.value)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

pub fn convert(q: Quantity, target: Unit) -> Result<Quantity> {
    if q.unit.dimension() != target.dimension() {
        return Err(Error::DimensionMismatch {
            from: q.unit,
            to: target,
        });
    }
    if q.unit == target {
        return Ok(q);
    }
    Quantity::new(q.value * q.unit.to_base() / target.to_base(), target)
}

/// A fuel characterised by its lower heating value.
#[derive(Debug, Clone, PartialEq)]
pub struct FuelSpec {
    pub name: String,
    lhv_j_per_kg: f64,
}

impl FuelSpec {
    pub fn new(name: impl Into<String>, lhv_mj_per_kg: f64) -> Result<Self> {
        let name = name.into();
        if !(lhv_mj_per_kg.is_finite() && lhv_mj_per_kg > 0.0) {
            return Err(Error::input(format!(
                "fuel `{name}`: lower heating value must be positive, got {lhv_mj_per_kg}"
            )));
        }
        Ok(FuelSpec {
            name,
            lhv_j_per_kg: lhv_mj_per_kg * 1.0e6,
        })
    }

    pub fn ammonia() -> Self {
        FuelSpec::new("ammonia", 18.6).expect("positive constant")
    }

    /// Thermal coal at 5500 kcal/kg.
    pub fn thermal_coal() -> Self {
        FuelSpec::new("thermal_coal", 5500.0 * J_PER_KCAL / 1.0e6).expect("positive constant")
    }

    pub fn hydrogen() -> Self {
        FuelSpec::new("hydrogen", H2_LHV_MJ_PER_KG).expect("positive constant")
    }

    pub fn heating_oil() -> Self {
        FuelSpec::new("heating_oil", HEATING_OIL_LHV_GJ_PER_T).expect("positive constant")
    }

    /// Looks up one of the built-in fuels.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "ammonia" | "NH3" => Ok(Self::ammonia()),
            "thermal_coal" | "coal" => Ok(Self::thermal_coal()),
            "hydrogen" | "H2" => Ok(Self::hydrogen()),
            "heating_oil" => Ok(Self::heating_oil()),
            other => Err(Error::UnknownFuel(other.to_string())),
        }
    }

    pub fn lhv_mj_per_kg(&self) -> f64 {
        self.lhv_j_per_kg / 1.0e6
    }

    /// Same as MJ/kg, spelled per tonne.
    pub fn lhv_gj_per_t(&self) -> f64 {
        self.lhv_mj_per_kg()
    }
}

/// Heat content of `mass` of `fuel`, returned in GJ.
pub fn fuel_energy(mass: Quantity, fuel: &FuelSpec) -> Result<Quantity> {
    let kg = mass.value_in(Unit::kg)?;
    if kg < 0.0 {
        return Err(Error::input(format!("fuel mass must be nonnegative, got {mass}")));
    }
    Quantity::new(kg * fuel.lhv_j_per_kg / J_PER_GJ, Unit::GJ)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(v: f64, u: Unit) -> Quantity {
        Quantity::new(v, u).unwrap()
    }

    #[test]
    fn tce_to_gj() {
        assert_relative_eq!(q(1.0, Unit::tce).value_in(Unit::GJ).unwrap(), 29.3076);
    }

    #[test]
    fn mwh_to_gj() {
        assert_relative_eq!(q(1.0, Unit::MWh).value_in(Unit::GJ).unwrap(), 3.6);
    }

    #[test]
    fn tce_in_million_btu() {
        let kbtu = q(1.0, Unit::tce).value_in(Unit::kBtu).unwrap();
        assert!((kbtu / 1.0e3 - 27.778).abs() < 5e-4, "{kbtu}");
    }

    #[test]
    fn price_per_tce_to_per_mwh() {
        // 29.3076 GJ per tce, 3.6 GJ per MWh.
        let v = q(29.3076, Unit::USD_per_tce).value_in(Unit::USD_per_MWh).unwrap();
        assert_relative_eq!(v, 3.6, max_relative = 1e-12);
    }

    #[test]
    fn dimension_mismatch_names_both_units() {
        let err = q(1.0, Unit::t).convert(Unit::GJ).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("t") && msg.contains("GJ"), "{msg}");
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                from: Unit::t,
                to: Unit::GJ
            }
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Quantity::new(f64::NAN, Unit::GJ).is_err());
        assert!(Quantity::new(f64::INFINITY, Unit::GJ).is_err());
    }

    #[test]
    fn unit_tags_parse_back() {
        for u in Unit::ALL {
            assert_eq!(u.as_str().parse::<Unit>().unwrap(), u);
        }
        assert!("furlong".parse::<Unit>().is_err());
    }

    #[test]
    fn ammonia_energy_per_tonne() {
        let e = fuel_energy(q(1.0, Unit::t), &FuelSpec::ammonia()).unwrap();
        assert_eq!(e.unit, Unit::GJ);
        assert_relative_eq!(e.value, 18.6, max_relative = 1e-12);
    }

    #[test]
    fn coal_energy_per_tonne() {
        let e = fuel_energy(q(1.0, Unit::t), &FuelSpec::thermal_coal()).unwrap();
        // 5500 kcal/kg * 4186.8 J/kcal * 1000 kg
        assert_relative_eq!(e.value, 23.0274, max_relative = 1e-12);
    }

    #[test]
    fn zero_mass_zero_energy() {
        let e = fuel_energy(q(0.0, Unit::t), &FuelSpec::hydrogen()).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn unknown_fuel() {
        assert!(matches!(
            FuelSpec::by_name("peat"),
            Err(Error::UnknownFuel(_))
        ));
        assert!(FuelSpec::new("bad", 0.0).is_err());
    }

    #[test]
    fn fuel_energy_rejects_energy_input() {
        assert!(fuel_energy(q(1.0, Unit::GJ), &FuelSpec::ammonia()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use proptest::sample::select;

        fn same_dim_pair() -> impl Strategy<Value = (Unit, Unit)> {
            (select(Unit::ALL.to_vec()), select(Unit::ALL.to_vec()))
                .prop_filter("same dimension", |(a, b)| a.dimension() == b.dimension())
        }

        proptest! {
            #[test]
            fn round_trip((from, to) in same_dim_pair(), v in -1.0e9f64..1.0e9) {
                let x = q(v, from);
                let back = x.convert(to).unwrap().convert(from).unwrap();
                prop_assert!((back.value - v).abs() <= 1e-12 * v.abs().max(f64::MIN_POSITIVE));
            }

            #[test]
            fn composition_gj_btu_kbtu(v in 1.0e-6f64..1.0e9) {
                let direct = q(v, Unit::GJ).value_in(Unit::kBtu).unwrap();
                let via = q(v, Unit::GJ).convert(Unit::Btu).unwrap().value_in(Unit::kBtu).unwrap();
                prop_assert!((direct - via).abs() <= 1e-12 * direct.abs());
            }
        }
    }
}

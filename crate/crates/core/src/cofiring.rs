//! Fuel cost, electricity cost and emission intensity of ammonia/coal
//! co-firing in coal power plants.

use serde::Serialize;

use crate::data::ParameterSet;
use crate::error::{Error, Result};
use crate::units::{FuelSpec, GJ_PER_TCE};

/// Co-firing rates evaluated by default, as fractions.
pub const STANDARD_RATES: [f64; 6] = [0.0, 0.03, 0.05, 0.10, 0.15, 0.20];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CofiringParams {
    /// FE^c, USD/tce.
    pub coal_price: f64,
    /// USD/t NH3.
    pub ammonia_production_cost: f64,
    /// Fraction.
    pub gross_margin: f64,
    /// MJ/kg.
    pub lhv_nh3: f64,
    /// tce/MWh.
    pub coal_consumption: f64,
    /// kg CO2/MWh.
    pub base_emission: f64,
    /// EP^c, fraction of the coal plant's LCOE spent on fuel.
    pub fuel_cost_share: f64,
    /// `(rate, loss)` pairs sorted by rate, both fractions.
    pub efficiency_loss: Vec<(f64, f64)>,
}

impl CofiringParams {
    pub fn from_params(p: &ParameterSet) -> Result<Self> {
        let pct = |k: &str| p.get(k).map(|v| v / 100.0);
        let mut efficiency_loss = Vec::new();
        for rate in [3, 5, 10, 15, 20] {
            efficiency_loss.push((rate as f64 / 100.0, pct(&format!("efficiency_loss_{rate}"))?));
        }
        let params = CofiringParams {
            coal_price: p.get("coal_price")?,
            ammonia_production_cost: p.get("ammonia_production_cost")?,
            gross_margin: pct("gross_margin")?,
            lhv_nh3: p.get("ammonia_lhv")?,
            coal_consumption: p.get("coal_consumption")?,
            base_emission: p.get("base_emission")?,
            fuel_cost_share: pct("fuel_cost_share")?,
            efficiency_loss,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("coal_price", self.coal_price),
            ("ammonia_production_cost", self.ammonia_production_cost),
            ("lhv_nh3", self.lhv_nh3),
            ("coal_consumption", self.coal_consumption),
            ("base_emission", self.base_emission),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.gross_margin >= 0.0 && self.gross_margin.is_finite()) {
            return Err(Error::input("gross margin must be nonnegative"));
        }
        if !(self.fuel_cost_share > 0.0 && self.fuel_cost_share < 1.0) {
            return Err(Error::input("fuel cost share must be in (0, 1)"));
        }
        if self.efficiency_loss.iter().any(|(_, l)| !(0.0..1.0).contains(l)) {
            return Err(Error::input("efficiency losses must be in [0, 1)"));
        }
        if self.efficiency_loss.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::input("efficiency loss table must be sorted by rate"));
        }
        Ok(())
    }

    /// Efficiency loss at `rate`. Without `interpolate`, only tabulated rates
    /// (and 0) are accepted; with it, losses are linear between entries and
    /// from (0, 0) to the first entry.
    pub fn efficiency_loss_at(&self, rate: f64, interpolate: bool) -> Result<f64> {
        check_rate(rate)?;
        if rate == 0.0 {
            return Ok(0.0);
        }
        const MATCH_TOL: f64 = 1e-9;
        if let Some((_, l)) = self.efficiency_loss.iter().find(|(r, _)| (r - rate).abs() < MATCH_TOL) {
            return Ok(*l);
        }
        if !interpolate {
            return Err(Error::input(format!(
                "no efficiency loss tabulated for co-firing rate {rate}; enable interpolation to estimate one"
            )));
        }
        let mut prev = (0.0, 0.0);
        for &(r, l) in &self.efficiency_loss {
            if rate <= r {
                return Ok(prev.1 + (rate - prev.0) / (r - prev.0) * (l - prev.1));
            }
            prev = (r, l);
        }
        Err(Error::input(format!(
            "co-firing rate {rate} is above the largest tabulated rate {}",
            prev.0
        )))
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rate) {
        Ok(())
    } else {
        Err(Error::input(format!("co-firing rate must be in [0, 1], got {rate}")))
    }
}

/// FE^am: sale price of ammonia per tonne of coal equivalent.
pub fn ammonia_fuel_price_per_tce(params: &CofiringParams) -> Result<f64> {
    let fuel = FuelSpec::new("ammonia", params.lhv_nh3)?;
    let tce_per_t = fuel.lhv_gj_per_t() / GJ_PER_TCE;
    Ok(params.ammonia_production_cost * (1.0 + params.gross_margin) / tce_per_t)
}

/// FE^m = FE^am·FR^m + FE^c·(1 − FR^m).
pub fn mixed_fuel_cost(params: &CofiringParams, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let fe_am = ammonia_fuel_price_per_tce(params)?;
    Ok(fe_am * rate + params.coal_price * (1.0 - rate))
}

/// LCOE^c = FC·FE^c ÷ EP^c.
pub fn base_lcoe(params: &CofiringParams) -> f64 {
    params.coal_consumption * params.coal_price / params.fuel_cost_share
}

/// LCOE^m = FC^m·FE^m + (1 − EP^c)·LCOE^c, with FC^m = FC ÷ (1 − loss).
pub fn cofired_lcoe(params: &CofiringParams, rate: f64, interpolate: bool) -> Result<f64> {
    let loss = params.efficiency_loss_at(rate, interpolate)?;
    let fc_m = params.coal_consumption / (1.0 - loss);
    Ok(fc_m * mixed_fuel_cost(params, rate)? + (1.0 - params.fuel_cost_share) * base_lcoe(params))
}

/// Emission intensity (kg CO2/MWh); ammonia displaces coal emissions 1:1 by
/// energy and the efficiency loss does not raise emissions.
pub fn emission_intensity(params: &CofiringParams, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(params.base_emission * (1.0 - rate))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CofiringResult {
    pub rate: f64,
    /// USD/tce.
    pub mixed_fuel_cost: f64,
    /// Relative change against the coal-only case.
    pub fuel_cost_change: f64,
    /// USD/MWh.
    pub lcoe: f64,
    pub lcoe_change: f64,
    /// kg CO2/MWh.
    pub emission_intensity: f64,
    /// kg CO2/MWh, negative for a reduction.
    pub emission_change: f64,
}

pub fn evaluate(params: &CofiringParams, rate: f64, interpolate: bool) -> Result<CofiringResult> {
    let fe0 = params.coal_price;
    let lcoe0 = cofired_lcoe(params, 0.0, false)?;
    let fe = mixed_fuel_cost(params, rate)?;
    let lcoe = cofired_lcoe(params, rate, interpolate)?;
    let em = emission_intensity(params, rate)?;
    Ok(CofiringResult {
        rate,
        mixed_fuel_cost: fe,
        fuel_cost_change: fe / fe0 - 1.0,
        lcoe,
        lcoe_change: lcoe / lcoe0 - 1.0,
        emission_intensity: em,
        emission_change: em - params.base_emission,
    })
}

/// One row per rate in [`STANDARD_RATES`].
pub fn scenario_table(params: &CofiringParams) -> Result<Vec<CofiringResult>> {
    STANDARD_RATES.iter().map(|&r| evaluate(params, r, false)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params() -> CofiringParams {
        CofiringParams {
            coal_price: 153.47,
            ammonia_production_cost: 820.0,
            gross_margin: 0.05,
            lhv_nh3: 18.6,
            coal_consumption: 0.31,
            base_emission: 838.0,
            fuel_cost_share: 0.7,
            efficiency_loss: vec![(0.03, 0.01), (0.05, 0.02), (0.10, 0.03), (0.15, 0.04), (0.20, 0.06)],
        }
    }

    #[test]
    fn ammonia_price_per_tce() {
        let p = params();
        // 861 USD/t ÷ (18.6 / 29.3076) tce/t.
        assert_abs_diff_eq!(ammonia_fuel_price_per_tce(&p).unwrap(), 861.0 / 0.634_647, epsilon = 0.05);
        let no_margin = CofiringParams { gross_margin: 0.0, ..p.clone() };
        assert_abs_diff_eq!(ammonia_fuel_price_per_tce(&no_margin).unwrap(), 1292.06, epsilon = 0.05);
        let coal_like = CofiringParams {
            lhv_nh3: GJ_PER_TCE,
            gross_margin: 0.0,
            ..p
        };
        assert_abs_diff_eq!(ammonia_fuel_price_per_tce(&coal_like).unwrap(), 820.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_rate_has_no_deltas() {
        let r = evaluate(&params(), 0.0, false).unwrap();
        assert_eq!(r.mixed_fuel_cost, 153.47);
        assert_eq!(r.fuel_cost_change, 0.0);
        assert_eq!(r.lcoe_change, 0.0);
        assert_eq!(r.emission_change, 0.0);
        assert_eq!(r.emission_intensity, 838.0);
    }

    #[test]
    fn base_lcoe_from_fuel_share() {
        assert_abs_diff_eq!(base_lcoe(&params()), 0.31 * 153.47 / 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(cofired_lcoe(&params(), 0.0, false).unwrap(), base_lcoe(&params()), epsilon = 1e-12);
    }

    #[test]
    fn untabulated_rate_needs_interpolation() {
        let p = params();
        assert!(cofired_lcoe(&p, 0.04, false).is_err());
        assert_abs_diff_eq!(p.efficiency_loss_at(0.04, true).unwrap(), 0.015, epsilon = 1e-12);
        assert_abs_diff_eq!(p.efficiency_loss_at(0.015, true).unwrap(), 0.005, epsilon = 1e-12);
        assert!(p.efficiency_loss_at(0.3, true).is_err());
    }

    #[test]
    fn rate_bounds() {
        let p = params();
        assert!(mixed_fuel_cost(&p, -0.01).is_err());
        assert!(mixed_fuel_cost(&p, 1.01).is_err());
        assert!(emission_intensity(&p, 2.0).is_err());
        assert_eq!(emission_intensity(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn table_covers_standard_rates() {
        let t = scenario_table(&params()).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.windows(2).all(|w| w[1].lcoe > w[0].lcoe));
    }

    #[test]
    fn invalid_params() {
        let p = CofiringParams { fuel_cost_share: 1.0, ..params() };
        assert!(p.validate().is_err());
        let p = CofiringParams { coal_price: 0.0, ..params() };
        assert!(p.validate().is_err());
    }
}

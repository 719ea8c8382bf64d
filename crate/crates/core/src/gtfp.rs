//! Regional green total-factor productivity.
//!
//! Each region is a decision-making unit with four inputs (labour, capital
//! stock, energy use, CO2 emission) and one output (GDP). Its score is the
//! input-oriented, constant-returns-to-scale DEA efficiency: the smallest θ
//! such that some nonnegative combination of all regions produces at least
//! its GDP using at most θ times each of its inputs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::units::{Quantity, Unit};

/// Regions scoring at least `1 - EFFICIENT_TOL` are reported as efficient.
pub const EFFICIENT_TOL: f64 = 1e-6;

/// Default annual depreciation rate for the perpetual inventory method.
pub const DEFAULT_DEPRECIATION: f64 = 0.096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRecord {
    pub name: String,
    /// Energy consumption, Mtce/yr.
    pub energy_mtce: f64,
    /// Labour force, million persons.
    pub labour_m: f64,
    /// Capital stock, billion USD.
    pub capital_busd: f64,
    /// CO2 emission, Mt/yr.
    pub co2_mt: f64,
    /// GDP, billion USD/yr.
    pub gdp_busd: f64,
}

impl RegionRecord {
    /// DEA inputs in a fixed order: labour, capital, energy, CO2.
    pub fn inputs(&self) -> [f64; 4] {
        [self.labour_m, self.capital_busd, self.energy_mtce, self.co2_mt]
    }

    pub fn output(&self) -> f64 {
        self.gdp_busd
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("energy", self.energy_mtce),
            ("labour", self.labour_m),
            ("capital", self.capital_busd),
            ("co2", self.co2_mt),
            ("gdp", self.gdp_busd),
        ];
        for (field, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(format!(
                    "region `{}`: {field} must be positive, got {v}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionEfficiency {
    pub name: String,
    pub gtfp: f64,
    pub energy_intensity_kbtu_per_usd: f64,
    pub carbon_intensity_kg_per_usd: f64,
    pub efficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub regions: Vec<RegionEfficiency>,
}

impl EfficiencyReport {
    pub fn get(&self, name: &str) -> Option<&RegionEfficiency> {
        self.regions.iter().find(|r| r.name == name)
    }
}

/// Builds the envelopment LP for region `i`.
///
/// Variables are `(θ, λ_1, .., λ_M)`. There is one `≤` row per input and one
/// row for the output, each scaled by region `i`'s value. θ is not capped at 1; under CRS `λ = e_i` is always
/// feasible so the optimum never exceeds 1.
pub fn build_dea_lp(records: &[RegionRecord], i: usize) -> Result<LinearProgram> {
    if records.is_empty() {
        return Err(Error::input("DEA needs at least one region"));
    }
    if i >= records.len() {
        return Err(Error::input(format!(
            "region index {i} out of range for {} regions",
            records.len()
        )));
    }
    for r in records {
        r.validate()?;
    }

    let m = records.len();
    let mut objective = vec![0.0; m + 1];
    objective[0] = 1.0;
    let mut lp = LinearProgram::new(objective);

    // Each row is divided by region i's own value. The feasible set is
    // unchanged, but the coefficients become unit-free ratios, which keeps
    // the simplex tolerances meaningful whatever units the data use.
    let target = records[i].inputs();
    for (k, &x_ik) in target.iter().enumerate() {
        let mut row = Vec::with_capacity(m + 1);
        row.push(-1.0);
        row.extend(records.iter().map(|r| r.inputs()[k] / x_ik));
        lp = lp.leq(row, 0.0);
    }
    let y_i = records[i].output();
    let mut row = Vec::with_capacity(m + 1);
    row.push(0.0);
    row.extend(records.iter().map(|r| r.output() / y_i));
    Ok(lp.geq(row, 1.0))
}

/// Energy intensity (kBtu/USD) and carbon intensity (kg CO2/USD).
pub fn intensities(record: &RegionRecord) -> Result<(Quantity, Quantity)> {
    if !(record.gdp_busd.is_finite() && record.gdp_busd > 0.0) {
        return Err(Error::input(format!(
            "region `{}`: GDP must be positive to compute intensities",
            record.name
        )));
    }
    let usd = record.gdp_busd * 1.0e9;
    let kbtu = Quantity::new(record.energy_mtce * 1.0e6, Unit::tce)?.value_in(Unit::kBtu)?;
    let kg_co2 = Quantity::new(record.co2_mt, Unit::Mt)?.value_in(Unit::kg)?;
    Ok((
        Quantity::new(kbtu / usd, Unit::kBtu_per_USD)?,
        Quantity::new(kg_co2 / usd, Unit::kg_per_USD)?,
    ))
}

pub fn dea_score(records: &[RegionRecord], i: usize) -> Result<f64> {
    let lp = build_dea_lp(records, i)?;
    let solution = lp::solve(&lp, lp::DEFAULT_TOL).map_err(|e| attach_region(e, &records[i].name))?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.x[0]),
        status => Err(Error::Solver(format!(
            "region `{}`: DEA program ended {status:?}",
            records[i].name
        ))),
    }
}

fn attach_region(e: Error, name: &str) -> Error {
    match e {
        Error::Solver(msg) => Error::Solver(format!("region `{name}`: {msg}")),
        other => other,
    }
}

/// Scores every region and attaches its intensities.
pub fn gtfp_scores(records: &[RegionRecord]) -> Result<EfficiencyReport> {
    let mut regions = Vec::with_capacity(records.len());
    for (i, record) in records.iter().enumerate() {
        let gtfp = dea_score(records, i)?;
        let (ei, ci) = intensities(record)?;
        regions.push(RegionEfficiency {
            name: record.name.clone(),
            gtfp,
            energy_intensity_kbtu_per_usd: ei.value,
            carbon_intensity_kg_per_usd: ci.value,
            efficient: gtfp >= 1.0 - EFFICIENT_TOL,
        });
    }
    Ok(EfficiencyReport { regions })
}

/// Perpetual inventory: `K_{n+1} = I_{n+1} + (1 - δ) K_n`.
pub fn capital_stock_next(capital: f64, investment: f64, depreciation: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&depreciation) {
        return Err(Error::input(format!(
            "depreciation rate must be in [0, 1), got {depreciation}"
        )));
    }
    if capital < 0.0 || investment < 0.0 {
        return Err(Error::input("capital stock and investment must be nonnegative"));
    }
    Ok(investment + (1.0 - depreciation) * capital)
}

/// Compound-growth extrapolation of an emission level.
pub fn extrapolate_emission(base_mt: f64, cagr: f64, years: u32) -> Result<f64> {
    if !(base_mt.is_finite() && base_mt > 0.0) {
        return Err(Error::input(format!("base emission must be positive, got {base_mt}")));
    }
    if !(cagr.is_finite() && cagr > -1.0) {
        return Err(Error::input(format!("growth rate must exceed -100%, got {cagr}")));
    }
    Ok(base_mt * (1.0 + cagr).powi(years as i32))
}

/// Average annual growth rate between two levels `years` apart.
pub fn cagr(start: f64, end: f64, years: u32) -> Result<f64> {
    if !(start > 0.0 && end > 0.0) || years == 0 {
        return Err(Error::input("growth rate needs positive levels and a nonzero span"));
    }
    Ok((end / start).powf(1.0 / years as f64) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn region(name: &str, e: f64, l: f64, k: f64, c: f64, g: f64) -> RegionRecord {
        RegionRecord {
            name: name.into(),
            energy_mtce: e,
            labour_m: l,
            capital_busd: k,
            co2_mt: c,
            gdp_busd: g,
        }
    }

    #[test]
    fn single_region_is_frontier() {
        let r = vec![region("A", 10.0, 2.0, 30.0, 5.0, 7.0)];
        let lp = build_dea_lp(&r, 0).unwrap();
        assert_eq!(lp.num_vars(), 2);
        assert_eq!(lp.a_ub.len(), 5);
        assert_abs_diff_eq!(dea_score(&r, 0).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn identical_regions_both_efficient() {
        let a = region("A", 10.0, 2.0, 30.0, 5.0, 7.0);
        let b = RegionRecord {
            name: "B".into(),
            ..a.clone()
        };
        let report = gtfp_scores(&[a, b]).unwrap();
        for r in &report.regions {
            assert_abs_diff_eq!(r.gtfp, 1.0, epsilon = 1e-9);
            assert!(r.efficient);
        }
    }

    #[test]
    fn dominated_region_scores_input_ratio() {
        // B uses twice every input for the same output: θ_B = 0.5.
        let a = region("A", 10.0, 2.0, 30.0, 5.0, 7.0);
        let b = region("B", 20.0, 4.0, 60.0, 10.0, 7.0);
        let report = gtfp_scores(&[a, b]).unwrap();
        assert_abs_diff_eq!(report.get("B").unwrap().gtfp, 0.5, epsilon = 1e-9);
        assert!(!report.get("B").unwrap().efficient);
    }

    #[test]
    fn nonpositive_inputs_rejected() {
        let bad = region("A", 10.0, 0.0, 30.0, 5.0, 7.0);
        assert!(matches!(build_dea_lp(&[bad], 0), Err(Error::InvalidInput(_))));
        assert!(build_dea_lp(&[], 0).is_err());
        let ok = region("A", 10.0, 1.0, 30.0, 5.0, 7.0);
        assert!(build_dea_lp(&[ok], 1).is_err());
    }

    #[test]
    fn capital_stock() {
        assert_abs_diff_eq!(capital_stock_next(100.0, 10.0, 0.096).unwrap(), 100.4, epsilon = 1e-12);
        assert_eq!(capital_stock_next(0.0, 5.0, 0.5).unwrap(), 5.0);
        assert_eq!(capital_stock_next(100.0, 0.0, 0.0).unwrap(), 100.0);
        assert!(capital_stock_next(100.0, 0.0, 1.0).is_err());
        assert!(capital_stock_next(100.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn emission_extrapolation() {
        assert_eq!(extrapolate_emission(100.0, 0.0, 5).unwrap(), 100.0);
        assert_abs_diff_eq!(extrapolate_emission(100.0, 0.05, 5).unwrap(), 127.63, epsilon = 5e-3);
        assert_eq!(extrapolate_emission(100.0, 0.05, 0).unwrap(), 100.0);
        assert!(extrapolate_emission(0.0, 0.05, 5).is_err());
    }

    #[test]
    fn cagr_inverts_extrapolation() {
        let g = cagr(80.0, 100.0, 5).unwrap();
        assert_abs_diff_eq!(extrapolate_emission(80.0, g, 5).unwrap(), 100.0, epsilon = 1e-9);
        assert!(cagr(80.0, 100.0, 0).is_err());
    }

    #[test]
    fn intensity_units() {
        // 1 Mtce per B USD = 1e-3 tce/USD = 27.778 kBtu/USD.
        let r = region("A", 1.0, 1.0, 1.0, 2.0, 1.0);
        let (ei, ci) = intensities(&r).unwrap();
        assert_eq!(ei.unit, Unit::kBtu_per_USD);
        assert_abs_diff_eq!(ei.value, 29.3076e6 / 1055.06 / 1.0e3, epsilon = 1e-9);
        assert_abs_diff_eq!(ci.value, 2.0, epsilon = 1e-12);
        let zero = region("Z", 1.0, 1.0, 1.0, 1.0, 0.0);
        assert!(intensities(&zero).is_err());
    }
}

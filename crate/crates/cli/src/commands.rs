//! Builds output tables for each subcommand.

use std::path::{Path, PathBuf};

use ammonia_core::carriers::{self, BuiltinChains, CarrierChain, CostQuery};
use ammonia_core::cofiring::{self, CofiringParams};
use ammonia_core::data::{self, ParameterSet};
use ammonia_core::gtfp;
use ammonia_core::scenarios::{self, DemandAssumptions, HeatingValueBasis, SupplyAssumptions};
use ammonia_core::Result;

use crate::table::{Cell, Table};

pub const DELIVERY_VOLUMES: [f64; 4] = [10.0, 30.0, 50.0, 100.0];
pub const DELIVERY_DISTANCES: [f64; 6] = [500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0];
pub const STORAGE_DAYS: [f64; 9] = [30.0, 60.0, 90.0, 150.0, 365.0, 730.0, 1000.0, 1500.0, 2000.0];

/// Where parameters come from: a data directory plus override files.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub data_dir: PathBuf,
    pub overrides: Vec<PathBuf>,
}

impl Inputs {
    pub fn params(&self, namespace: &str) -> Result<ParameterSet> {
        data::effective_params(&self.data_dir, namespace, &self.overrides)
    }

    /// A relative path that does not exist from the working directory is
    /// looked up in the data directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_relative() && !path.exists() {
            let candidate = self.data_dir.join(path);
            if candidate.exists() {
                return candidate;
            }
        }
        path.to_path_buf()
    }

    fn source(&self, files: &[&str]) -> String {
        let mut s = format!("inputs: {}", files.join(", "));
        if !self.overrides.is_empty() {
            let o: Vec<String> = self.overrides.iter().map(|p| p.display().to_string()).collect();
            s.push_str(&format!("; overrides: {}", o.join(", ")));
        }
        s
    }
}

pub fn gtfp_table(inputs: &Inputs, regions: &Path) -> Result<Table> {
    let path = inputs.resolve(regions);
    let records = data::load_regions(&path)?;
    let report = gtfp::gtfp_scores(&records)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut t = Table::new(
        format!(
            "Regional green total-factor productivity (CRS input-oriented DEA) with energy and carbon intensity\ninputs: {name}"
        ),
        vec!["region", "gtfp", "energy_intensity_kbtu_per_usd", "carbon_intensity_kg_per_usd", "efficient"],
    );
    for r in &report.regions {
        t.push(vec![
            r.name.clone().into(),
            r.gtfp.into(),
            r.energy_intensity_kbtu_per_usd.into(),
            r.carbon_intensity_kg_per_usd.into(),
            r.efficient.into(),
        ]);
    }
    Ok(t)
}

fn chains_and_query(inputs: &Inputs) -> Result<(BuiltinChains, CostQuery)> {
    let params = inputs.params("carriers")?;
    Ok((carriers::builtin_chains(&params)?, CostQuery::from_params(&params)?))
}

fn select<'a>(chains: &'a BuiltinChains, names: &[String], default: &[&'a CarrierChain]) -> Result<Vec<&'a CarrierChain>> {
    if names.is_empty() {
        return Ok(default.to_vec());
    }
    names.iter().map(|n| chains.by_name(n)).collect()
}

const CARRIER_HEADER: [&str; 7] = ["chain", "medium", "volume_kt", "distance_km", "days", "stage", "usd_per_kg"];

fn push_breakdown(t: &mut Table, chain: &CarrierChain, q: &CostQuery, b: &carriers::CostBreakdown, warnings: &mut Vec<String>) {
    let lead = |stage: &str, v: f64| -> Vec<Cell> {
        vec![
            chain.name.clone().into(),
            chain.medium.as_str().into(),
            q.annual_h2.into(),
            q.distance_km.into(),
            q.storage_days.into(),
            stage.to_string().into(),
            v.into(),
        ]
    };
    for s in &b.stages {
        t.push(lead(&s.name, s.usd_per_kg));
    }
    t.push(lead("total", b.total));
    for w in &b.warnings {
        if !warnings.contains(w) {
            warnings.push(w.clone());
        }
    }
}

/// Delivery cost breakdowns over a volume × distance grid.
pub fn delivery_table(
    inputs: &Inputs,
    chain_names: &[String],
    volumes: &[f64],
    distances: &[f64],
    warnings: &mut Vec<String>,
) -> Result<Table> {
    let (chains, base) = chains_and_query(inputs)?;
    let selected = select(&chains, chain_names, &chains.all())?;
    let mut t = Table::new(
        format!(
            "Levelized hydrogen delivery cost by stage, USD/kg H2 delivered\n{}",
            inputs.source(&[data::CARRIERS_FILE])
        ),
        CARRIER_HEADER.to_vec(),
    );
    for chain in selected {
        for &v in volumes {
            for &d in distances {
                let q = base.clone().with(v, d, 0.0);
                let b = carriers::delivery_cost(chain, &q)?;
                push_breakdown(&mut t, chain, &q, &b, warnings);
            }
        }
    }
    Ok(t)
}

/// Storage cost breakdowns over a storage-duration grid.
pub fn storage_table(
    inputs: &Inputs,
    chain_names: &[String],
    volume: f64,
    days: &[f64],
    warnings: &mut Vec<String>,
) -> Result<Table> {
    let (chains, base) = chains_and_query(inputs)?;
    let selected = select(&chains, chain_names, &[&chains.nh3_with_crack, &chains.lh2])?;
    let mut t = Table::new(
        format!(
            "Levelized hydrogen storage cost by component, USD/kg H2 held per year\n{}",
            inputs.source(&[data::CARRIERS_FILE])
        ),
        CARRIER_HEADER.to_vec(),
    );
    for chain in selected {
        for &n in days {
            let q = base.clone().with(volume, 0.0, n);
            let b = carriers::storage_cost(chain, &q)?;
            push_breakdown(&mut t, chain, &q, &b, warnings);
        }
    }
    Ok(t)
}

pub fn cofire_table(inputs: &Inputs, rates: &[f64], interpolate: bool) -> Result<Table> {
    let params = CofiringParams::from_params(&inputs.params("cofiring")?)?;
    let mut t = Table::new(
        format!(
            "Ammonia co-firing: mixed fuel cost, electricity cost and emission intensity against coal only\n{}",
            inputs.source(&[data::COFIRING_FILE])
        ),
        vec![
            "rate",
            "fuel_cost_usd_per_tce",
            "fuel_cost_change_pct",
            "lcoe_usd_per_mwh",
            "lcoe_change_pct",
            "emission_kg_per_mwh",
            "emission_change_kg_per_mwh",
        ],
    );
    for &rate in rates {
        let r = cofiring::evaluate(&params, rate, interpolate)?;
        t.push(vec![
            r.rate.into(),
            r.mixed_fuel_cost.into(),
            (100.0 * r.fuel_cost_change).into(),
            r.lcoe.into(),
            (100.0 * r.lcoe_change).into(),
            r.emission_intensity.into(),
            r.emission_change.into(),
        ]);
    }
    Ok(t)
}

pub struct ScenarioInputs {
    pub supply: SupplyAssumptions,
    pub demand: DemandAssumptions,
    pub supply_levels: Vec<data::SupplyLevel>,
    pub demand_levels: Vec<data::DemandLevel>,
}

pub fn scenario_inputs(inputs: &Inputs, basis: Option<HeatingValueBasis>) -> Result<ScenarioInputs> {
    let params = inputs.params("scenarios")?;
    let mut supply = SupplyAssumptions::from_params(&params)?;
    if let Some(b) = basis {
        supply = supply.with_basis(b);
    }
    Ok(ScenarioInputs {
        supply,
        demand: DemandAssumptions::from_params(&params)?,
        supply_levels: data::load_supply_levels(&inputs.data_dir.join(data::SUPPLY_LEVELS_FILE))?,
        demand_levels: data::load_demand_levels(&inputs.data_dir.join(data::DEMAND_LEVELS_FILE))?,
    })
}

pub fn supply_table(inputs: &Inputs, s: &ScenarioInputs) -> Result<Table> {
    let mut t = Table::new(
        format!(
            "Green ammonia supply capacity in 2030 by level, Mt NH3/yr\n{}",
            inputs.source(&[data::SCENARIOS_FILE, data::SUPPLY_LEVELS_FILE])
        ),
        vec!["level", "renewable_share", "electricity_mwh_per_t", "supply_mt"],
    );
    for l in &s.supply_levels {
        t.push(vec![
            l.level.into(),
            l.renewable_share.into(),
            s.supply.electricity_per_t_nh3().into(),
            scenarios::supply_capacity(&s.supply, l.renewable_share)?.into(),
        ]);
    }
    Ok(t)
}

pub fn demand_table(inputs: &Inputs, s: &ScenarioInputs) -> Result<Table> {
    let mut t = Table::new(
        format!(
            "Green ammonia demand in 2030 by level and sector, Mt NH3/yr\n{}",
            inputs.source(&[data::SCENARIOS_FILE, data::DEMAND_LEVELS_FILE])
        ),
        vec!["level", "sector", "demand_mt", "renewable_share_required"],
    );
    for l in &s.demand_levels {
        let d = scenarios::level_demand(&s.demand, l)?;
        for (sector, mt) in d.sectors().into_iter().chain([("total", d.total())]) {
            t.push(vec![
                l.level.into(),
                sector.into(),
                mt.into(),
                scenarios::required_renewable_share(&s.supply, mt)?.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn balance_table(inputs: &Inputs, s: &ScenarioInputs) -> Result<Table> {
    let report = scenarios::balance_report(&s.supply, &s.demand, &s.supply_levels, &s.demand_levels)?;
    let mut t = Table::new(
        format!(
            "Green ammonia supply levels against demand levels in 2030, Mt NH3/yr\n{}",
            inputs.source(&[data::SCENARIOS_FILE, data::SUPPLY_LEVELS_FILE, data::DEMAND_LEVELS_FILE])
        ),
        vec!["supply_level", "demand_level", "supply_mt", "demand_mt", "coverage", "covered"],
    );
    for c in &report.coverage {
        let supply = report.supply.iter().find(|r| r.level == c.supply_level).map(|r| r.capacity);
        let demand = report.demand.iter().find(|r| r.level == c.demand_level).map(|r| r.total());
        t.push(vec![
            c.supply_level.into(),
            c.demand_level.into(),
            supply.unwrap_or(f64::NAN).into(),
            demand.unwrap_or(f64::NAN).into(),
            c.ratio.into(),
            c.covered.into(),
        ]);
    }
    Ok(t)
}

pub fn params_table(inputs: &Inputs, namespaces: &[&str]) -> Result<Table> {
    let mut t = Table::new(
        format!("Effective parameters after overrides\n{}", inputs.source(&[])),
        vec!["namespace", "key", "value", "unit", "provenance"],
    );
    for ns in namespaces {
        let set = inputs.params(ns)?;
        for p in set.entries() {
            t.push(vec![
                ns.to_string().into(),
                p.key.clone().into(),
                // Exact value: this table is for auditing, not plotting.
                p.value.to_string().into(),
                p.unit.clone().into(),
                p.provenance.clone().into(),
            ]);
        }
    }
    Ok(t)
}

/// Every reproduced table, keyed by output file stem.
pub fn report_tables(inputs: &Inputs, warnings: &mut Vec<String>) -> Result<Vec<(&'static str, Table)>> {
    let s = scenario_inputs(inputs, None)?;
    Ok(vec![
        ("gtfp", gtfp_table(inputs, &inputs.data_dir.join(data::REGIONS_FILE))?),
        (
            "carrier_delivery_by_volume",
            delivery_table(inputs, &[], &DELIVERY_VOLUMES, &[500.0], warnings)?,
        ),
        (
            "carrier_delivery_by_distance",
            delivery_table(inputs, &[], &[50.0, 100.0], &DELIVERY_DISTANCES, warnings)?,
        ),
        ("carrier_storage", storage_table(inputs, &[], 100.0, &STORAGE_DAYS, warnings)?),
        ("cofiring", cofire_table(inputs, &cofiring::STANDARD_RATES, false)?),
        ("scenario_supply", supply_table(inputs, &s)?),
        ("scenario_demand", demand_table(inputs, &s)?),
        ("scenario_balance", balance_table(inputs, &s)?),
    ])
}

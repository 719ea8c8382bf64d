//! Hydrogen carrier chains and their levelized delivery and storage costs.
//!
//! A chain is an ordered list of stages (conversion, transport, storage,
//! reconversion). Flows are sized by walking backwards from the delivered
//! hydrogen: each stage's input is its output divided by what survives the
//! stage. Every stage's expenses are then levelized over the delivered mass,
//! so the per-stage figures add up to the total.

use serde::Serialize;

use crate::data::ParameterSet;
use crate::error::{Error, Result};
use crate::units::NH3_PER_H2;

pub const DEFAULT_DISCOUNT_RATE: f64 = 0.08;
pub const DEFAULT_LIFETIME: u32 = 20;
pub const DEFAULT_ELECTRICITY_PRICE: f64 = 59.0;
pub const DEFAULT_STORED_SHARE: f64 = 0.2;
pub const DEFAULT_OPEX_RATE: f64 = 0.02;

/// Tabulated capacity brackets, kt H2/yr.
pub const VOLUME_BRACKETS: [f64; 4] = [10.0, 30.0, 50.0, 100.0];

/// Holding energy stops accruing after a year: a reserve held longer is
/// topped up continuously rather than paid for again per cycle.
const HOLDING_ENERGY_DAY_CAP: f64 = 365.0;

// ---------------------------------------------------------------------------
// Levelized cost

/// `Σ Exp_n/(1+dr)^n ÷ Σ E_n/(1+dr)^n`, with year 0 undiscounted.
pub fn levelized_cost(expenses: &[f64], energy: &[f64], dr: f64) -> Result<f64> {
    if expenses.is_empty() || expenses.len() != energy.len() {
        return Err(Error::input(format!(
            "expense and energy schedules must have the same nonzero length ({} vs {})",
            expenses.len(),
            energy.len()
        )));
    }
    if !(dr > -1.0 && dr.is_finite()) {
        return Err(Error::input(format!("discount rate must exceed -100%, got {dr}")));
    }
    if energy.iter().any(|e| *e < 0.0 || !e.is_finite()) || expenses.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("schedules must be finite and energy nonnegative"));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut factor = 1.0;
    for (x, e) in expenses.iter().zip(energy) {
        num += x * factor;
        den += e * factor;
        factor /= 1.0 + dr;
    }
    if den <= 0.0 {
        return Err(Error::input("energy schedule has no positive entry"));
    }
    Ok(num / den)
}

/// Flat schedule: `capex` at year 0, then `annual` expense and `delivered`
/// energy in years 1..=lifetime.
fn flat_levelized(capex: f64, annual: f64, delivered: f64, lifetime: u32, dr: f64) -> Result<f64> {
    let n = lifetime as usize + 1;
    let mut exp = vec![annual; n];
    let mut energy = vec![delivered; n];
    exp[0] = capex;
    energy[0] = 0.0;
    levelized_cost(&exp, &energy, dr)
}

// ---------------------------------------------------------------------------
// Stages and chains

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Conversion,
    Transport,
    Storage,
    Reconversion,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Conversion => "conversion",
            Role::Transport => "transport",
            Role::Storage => "storage",
            Role::Reconversion => "reconversion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[allow(non_camel_case_types)]
pub enum Medium {
    NH3,
    LH2,
    GH2_pipeline,
}

impl Medium {
    /// Tonnes of medium per tonne of hydrogen carried.
    pub fn mass_per_h2(self) -> f64 {
        match self {
            Medium::NH3 => NH3_PER_H2,
            Medium::LH2 | Medium::GH2_pipeline => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Medium::NH3 => "NH3",
            Medium::LH2 => "LH2",
            Medium::GH2_pipeline => "GH2_pipeline",
        }
    }
}

/// How many assets a throughput needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AssetCapacity {
    /// Each asset handles a fixed tonnage of medium per year.
    Fixed { t_per_yr: f64 },
    /// Road tanker: `trips_per_day` one-way trips at `reference_km`, scaling
    /// inversely with distance.
    Truck {
        payload_t: f64,
        trips_per_day: f64,
        reference_km: f64,
    },
}

impl AssetCapacity {
    fn annual_capacity_t(&self, distance_km: f64) -> f64 {
        match self {
            AssetCapacity::Fixed { t_per_yr } => *t_per_yr,
            AssetCapacity::Truck {
                payload_t,
                trips_per_day,
                reference_km,
            } => {
                if distance_km <= 0.0 {
                    f64::INFINITY
                } else {
                    payload_t * trips_per_day * reference_km / distance_km * 365.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CapexBasis {
    /// USD per t/yr of medium throughput.
    PerAnnualTonne,
    /// USD per asset.
    PerAsset(AssetCapacity),
    /// USD per km of route.
    PerKm,
    /// USD per t of medium held.
    PerTonneHeld,
    /// USD per m³ of medium held.
    PerCubicMetreHeld { density_kg_per_m3: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EnergyBasis {
    /// MWh per t of medium handled.
    PerTonne,
    /// MWh per t of medium per 100 km.
    PerTonnePer100Km,
    /// MWh per t of hydrogen held per day.
    PerTonneH2PerDayHeld,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LossBasis {
    None,
    /// Fraction per day spent in transit.
    PerDayInTransit,
    /// Fraction per day held in storage, compounding.
    PerDayHeld,
    /// Fraction per 1000 km of route.
    Per1000Km,
}

/// Capital cost, either flat or tabulated by annual hydrogen volume.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Capex {
    Fixed(f64),
    /// `(volume kt H2/yr, capex)` pairs in increasing volume.
    Bracketed(Vec<(f64, f64)>),
}

impl Capex {
    /// Capex at `volume_kt`; the flag is set when the volume lies outside the
    /// table and the nearest bracket was used.
    pub fn at(&self, volume_kt: f64) -> (f64, bool) {
        match self {
            Capex::Fixed(v) => (*v, false),
            Capex::Bracketed(table) => {
                let (lo, hi) = (table[0], table[table.len() - 1]);
                if volume_kt < lo.0 {
                    return (lo.1, true);
                }
                if volume_kt > hi.0 {
                    return (hi.1, true);
                }
                for w in table.windows(2) {
                    let ((v0, c0), (v1, c1)) = (w[0], w[1]);
                    if volume_kt <= v1 {
                        let t = (volume_kt - v0) / (v1 - v0);
                        return (c0 + t * (c1 - c0), false);
                    }
                }
                (hi.1, false)
            }
        }
    }

    fn validate(&self) -> bool {
        match self {
            Capex::Fixed(v) => *v >= 0.0 && v.is_finite(),
            Capex::Bracketed(t) => {
                !t.is_empty()
                    && t.iter().all(|(v, c)| *v > 0.0 && *c >= 0.0 && c.is_finite())
                    && t.windows(2).all(|w| w[0].0 < w[1].0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSpec {
    pub name: String,
    pub role: Role,
    pub capex_basis: CapexBasis,
    pub capex: Capex,
    /// Fraction of capex per year.
    pub fixed_opex_rate: f64,
    pub energy_use: f64,
    pub energy_basis: EnergyBasis,
    pub loss_rate: f64,
    pub loss_basis: LossBasis,
    /// Fraction of the hydrogen content surviving the stage.
    pub conversion_efficiency: f64,
    /// For holding assets inside a delivery chain: days of throughput held.
    pub buffer_days: Option<f64>,
}

impl StageSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::input(format!("stage `{}`: {what}", self.name)));
        if !self.capex.validate() {
            return bad("capex must be nonnegative");
        }
        if !(0.0..1.0).contains(&self.loss_rate) {
            return bad("loss rate must be in [0, 1)");
        }
        if !(self.conversion_efficiency > 0.0 && self.conversion_efficiency <= 1.0) {
            return bad("conversion efficiency must be in (0, 1]");
        }
        if !(self.fixed_opex_rate >= 0.0 && self.energy_use >= 0.0) {
            return bad("opex rate and energy use must be nonnegative");
        }
        if self.loss_basis == LossBasis::PerDayInTransit
            && !matches!(self.capex_basis, CapexBasis::PerAsset(AssetCapacity::Truck { .. }))
        {
            return bad("transit losses need a truck-sized stage");
        }
        Ok(())
    }

    fn transit_days(&self, distance_km: f64) -> f64 {
        match &self.capex_basis {
            CapexBasis::PerAsset(AssetCapacity::Truck {
                trips_per_day,
                reference_km,
                ..
            }) => distance_km / (trips_per_day * reference_km),
            _ => 0.0,
        }
    }

    /// Fraction of hydrogen surviving this stage in a delivery chain.
    fn survival(&self, distance_km: f64) -> f64 {
        let loss = match self.loss_basis {
            LossBasis::None | LossBasis::PerDayHeld => 0.0,
            LossBasis::PerDayInTransit => self.loss_rate * self.transit_days(distance_km),
            LossBasis::Per1000Km => self.loss_rate * distance_km / 1000.0,
        };
        self.conversion_efficiency * (1.0 - loss.min(1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarrierChain {
    pub name: String,
    pub medium: Medium,
    pub stages: Vec<StageSpec>,
    pub include_reconversion: bool,
}

impl CarrierChain {
    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::input(format!("chain `{}` has no stages", self.name)));
        }
        for s in &self.stages {
            s.validate()?;
        }
        if self.stages.windows(2).any(|w| w[0].role > w[1].role) {
            return Err(Error::input(format!(
                "chain `{}`: stages must run conversion, transport, storage, reconversion",
                self.name
            )));
        }
        if self.medium == Medium::GH2_pipeline
            && self
                .stages
                .iter()
                .any(|s| matches!(s.role, Role::Conversion | Role::Reconversion))
        {
            return Err(Error::input("pipeline chains have no conversion stages"));
        }
        Ok(())
    }

    fn delivery_stages(&self) -> impl Iterator<Item = &StageSpec> {
        self.stages.iter().filter(move |s| match s.role {
            Role::Storage => false,
            Role::Reconversion => self.include_reconversion,
            _ => true,
        })
    }

    fn storage_stage(&self) -> Option<&StageSpec> {
        self.stages.iter().find(|s| s.role == Role::Storage)
    }

    pub fn without_reconversion(&self, name: &str) -> CarrierChain {
        CarrierChain {
            name: name.to_string(),
            include_reconversion: false,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostQuery {
    /// kt H2/yr delivered.
    pub annual_h2: f64,
    pub distance_km: f64,
    pub storage_days: f64,
    pub discount_rate: f64,
    pub lifetime: u32,
    /// USD/MWh.
    pub electricity_price: f64,
    /// Fraction of the annual volume held in storage.
    pub stored_share: f64,
}

impl Default for CostQuery {
    fn default() -> Self {
        CostQuery {
            annual_h2: 100.0,
            distance_km: 500.0,
            storage_days: 0.0,
            discount_rate: DEFAULT_DISCOUNT_RATE,
            lifetime: DEFAULT_LIFETIME,
            electricity_price: DEFAULT_ELECTRICITY_PRICE,
            stored_share: DEFAULT_STORED_SHARE,
        }
    }
}

impl CostQuery {
    /// Economic settings from the carriers parameter set.
    pub fn from_params(params: &ParameterSet) -> Result<Self> {
        let lifetime = params.get("lifetime")?;
        if !(lifetime >= 1.0 && lifetime.fract() == 0.0) {
            return Err(Error::input(format!("lifetime must be a whole number of years, got {lifetime}")));
        }
        Ok(CostQuery {
            discount_rate: params.get("wacc")? / 100.0,
            lifetime: lifetime as u32,
            electricity_price: params.get("electricity_price")?,
            stored_share: params.get("stored_share")? / 100.0,
            ..CostQuery::default()
        })
    }

    pub fn with(mut self, annual_h2: f64, distance_km: f64, storage_days: f64) -> Self {
        self.annual_h2 = annual_h2;
        self.distance_km = distance_km;
        self.storage_days = storage_days;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.annual_h2 > 0.0 && self.annual_h2.is_finite()) {
            return Err(Error::input(format!("annual volume must be positive, got {}", self.annual_h2)));
        }
        if !(self.distance_km >= 0.0 && self.distance_km.is_finite()) {
            return Err(Error::input(format!("distance must be nonnegative, got {}", self.distance_km)));
        }
        if !(self.storage_days >= 0.0 && self.storage_days.is_finite()) {
            return Err(Error::input(format!("storage days must be nonnegative, got {}", self.storage_days)));
        }
        if !(self.discount_rate > 0.0 && self.discount_rate < 1.0) {
            return Err(Error::input(format!("discount rate must be in (0, 1), got {}", self.discount_rate)));
        }
        if self.lifetime == 0 {
            return Err(Error::input("lifetime must be at least one year"));
        }
        if !(self.electricity_price >= 0.0 && self.electricity_price.is_finite()) {
            return Err(Error::input("electricity price must be nonnegative"));
        }
        if !(self.stored_share > 0.0 && self.stored_share <= 1.0) {
            return Err(Error::input("stored share must be in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageCost {
    pub name: String,
    pub role: Role,
    /// USD per kg H2 delivered (or stored, for storage costs).
    pub usd_per_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub chain: String,
    pub stages: Vec<StageCost>,
    pub total: f64,
    /// kg H2 out per kg H2 in.
    pub delivered_fraction: f64,
    pub warnings: Vec<String>,
}

impl CostBreakdown {
    pub fn role_share(&self, role: Role) -> f64 {
        self.stages.iter().filter(|s| s.role == role).map(|s| s.usd_per_kg).sum::<f64>() / self.total
    }

    fn from_stages(chain: &str, stages: Vec<StageCost>, delivered_fraction: f64, warnings: Vec<String>) -> Self {
        let total = stages.iter().map(|s| s.usd_per_kg).sum();
        CostBreakdown {
            chain: chain.to_string(),
            stages,
            total,
            delivered_fraction,
            warnings,
        }
    }
}

/// Annual physical flows through one stage.
struct StageLoad {
    /// Tonnes of medium per year used for sizing.
    medium_t: f64,
    /// Tonnes of medium held, for holding assets.
    held_t: f64,
}

fn stage_capex(stage: &StageSpec, load: &StageLoad, q: &CostQuery, warnings: &mut Vec<String>) -> f64 {
    let (unit, clamped) = stage.capex.at(q.annual_h2);
    if clamped {
        warnings.push(format!(
            "{}: {} kt/yr is outside the tabulated {}-{} kt/yr range; nearest bracket used",
            stage.name,
            q.annual_h2,
            VOLUME_BRACKETS[0],
            VOLUME_BRACKETS[VOLUME_BRACKETS.len() - 1]
        ));
    }
    match &stage.capex_basis {
        CapexBasis::PerAnnualTonne => unit * load.medium_t,
        CapexBasis::PerAsset(cap) => {
            let per_asset = cap.annual_capacity_t(q.distance_km);
            if per_asset.is_infinite() {
                0.0
            } else {
                unit * load.medium_t / per_asset
            }
        }
        CapexBasis::PerKm => unit * q.distance_km,
        CapexBasis::PerTonneHeld => unit * load.held_t,
        CapexBasis::PerCubicMetreHeld { density_kg_per_m3 } => unit * load.held_t * 1000.0 / density_kg_per_m3,
    }
}

/// Delivery-mode energy use, MWh/yr.
fn stage_energy(stage: &StageSpec, load: &StageLoad, q: &CostQuery) -> f64 {
    match stage.energy_basis {
        EnergyBasis::PerTonne => stage.energy_use * load.medium_t,
        EnergyBasis::PerTonnePer100Km => stage.energy_use * load.medium_t * q.distance_km / 100.0,
        // Only charged when the stage is used as a reserve.
        EnergyBasis::PerTonneH2PerDayHeld => 0.0,
    }
}

/// Levelized cost of delivering `q.annual_h2` kt H2/yr through `chain`.
pub fn delivery_cost(chain: &CarrierChain, q: &CostQuery) -> Result<CostBreakdown> {
    chain.validate()?;
    q.validate()?;
    if chain.medium == Medium::GH2_pipeline && q.distance_km <= 0.0 {
        return Err(Error::input("pipeline delivery needs a positive distance"));
    }
    let stages: Vec<&StageSpec> = chain.delivery_stages().collect();
    let delivered_kg = q.annual_h2 * 1.0e6;
    let m = chain.medium.mass_per_h2();

    // Walk backwards from the delivered hydrogen.
    let mut out_kg = delivered_kg;
    let mut loads = Vec::with_capacity(stages.len());
    for stage in stages.iter().rev() {
        let in_kg = out_kg / stage.survival(q.distance_km);
        let sized_kg = if stage.role == Role::Conversion { out_kg } else { in_kg };
        let medium_t = sized_kg * m / 1000.0;
        let held_t = medium_t * stage.buffer_days.unwrap_or(0.0) / 365.0;
        loads.push(StageLoad { medium_t, held_t });
        out_kg = in_kg;
    }
    loads.reverse();
    let delivered_fraction = delivered_kg / out_kg;

    let mut warnings = Vec::new();
    let mut costs = Vec::with_capacity(stages.len());
    for (stage, load) in stages.iter().zip(&loads) {
        let capex = stage_capex(stage, load, q, &mut warnings);
        let annual = capex * stage.fixed_opex_rate + stage_energy(stage, load, q) * q.electricity_price;
        costs.push(StageCost {
            name: stage.name.clone(),
            role: stage.role,
            usd_per_kg: flat_levelized(capex, annual, delivered_kg, q.lifetime, q.discount_rate)?,
        });
    }
    warnings.dedup();
    Ok(CostBreakdown::from_stages(&chain.name, costs, delivered_fraction, warnings))
}

/// Levelized cost of holding the stored share of `q.annual_h2` for
/// `q.storage_days`, per kg H2 held in the reserve per year.
///
/// Covers the holding asset, holding energy, and replacement of boil-off at
/// the chain's conversion cost.
pub fn storage_cost(chain: &CarrierChain, q: &CostQuery) -> Result<CostBreakdown> {
    chain.validate()?;
    q.validate()?;
    if q.storage_days <= 0.0 {
        return Err(Error::input("storage needs a positive number of days"));
    }
    let tank = chain
        .storage_stage()
        .ok_or_else(|| Error::input(format!("chain `{}` has no storage stage", chain.name)))?;

    let stored_kg = q.stored_share * q.annual_h2 * 1.0e6;
    let held_t = stored_kg * chain.medium.mass_per_h2() / 1000.0;
    let load = StageLoad {
        medium_t: held_t,
        held_t,
    };
    let mut warnings = Vec::new();
    let capex = stage_capex(tank, &load, q, &mut warnings);
    let lv = |capex: f64, annual: f64| flat_levelized(capex, annual, stored_kg, q.lifetime, q.discount_rate);

    let mut stages = vec![StageCost {
        name: tank.name.clone(),
        role: Role::Storage,
        usd_per_kg: lv(capex, capex * tank.fixed_opex_rate)?,
    }];

    if tank.energy_basis == EnergyBasis::PerTonneH2PerDayHeld && tank.energy_use > 0.0 {
        let mwh = tank.energy_use * stored_kg / 1000.0 * q.storage_days.min(HOLDING_ENERGY_DAY_CAP);
        stages.push(StageCost {
            name: "holding energy".into(),
            role: Role::Storage,
            usd_per_kg: lv(0.0, mwh * q.electricity_price)?,
        });
    }

    let survival = match tank.loss_basis {
        LossBasis::PerDayHeld => (1.0 - tank.loss_rate).powf(q.storage_days),
        _ => 1.0,
    };
    if survival < 1.0 {
        let unit = conversion_unit_cost(chain, q)?;
        stages.push(StageCost {
            name: "boil-off replacement".into(),
            role: Role::Storage,
            usd_per_kg: (1.0 / survival - 1.0) * unit,
        });
    }
    Ok(CostBreakdown::from_stages(&chain.name, stages, survival, warnings))
}

/// USD per kg H2 leaving the chain's conversion stages at `q.annual_h2`.
fn conversion_unit_cost(chain: &CarrierChain, q: &CostQuery) -> Result<f64> {
    let conv = CarrierChain {
        name: chain.name.clone(),
        medium: chain.medium,
        stages: chain
            .stages
            .iter()
            .filter(|s| s.role == Role::Conversion)
            .cloned()
            .collect(),
        include_reconversion: false,
    };
    if conv.stages.is_empty() {
        return Ok(0.0);
    }
    Ok(delivery_cost(&conv, q)?.total)
}

// ---------------------------------------------------------------------------
// Built-in chains

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuiltinChains {
    pub nh3_with_crack: CarrierChain,
    pub nh3_direct: CarrierChain,
    pub lh2: CarrierChain,
    pub pipeline: CarrierChain,
}

impl BuiltinChains {
    pub fn all(&self) -> [&CarrierChain; 4] {
        [&self.nh3_with_crack, &self.nh3_direct, &self.lh2, &self.pipeline]
    }

    pub fn by_name(&self, name: &str) -> Result<&CarrierChain> {
        self.all()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::input(format!("unknown carrier chain `{name}`")))
    }
}

fn brackets(params: &ParameterSet, prefix: &str, factor: f64) -> Result<Capex> {
    let mut table = Vec::with_capacity(VOLUME_BRACKETS.len());
    for v in VOLUME_BRACKETS {
        table.push((v, params.get(&format!("{prefix}_{v}kt"))? * factor));
    }
    Ok(Capex::Bracketed(table))
}

fn stage(name: &str, role: Role, capex_basis: CapexBasis, capex: Capex, opex: f64) -> StageSpec {
    StageSpec {
        name: name.into(),
        role,
        capex_basis,
        capex,
        fixed_opex_rate: opex,
        energy_use: 0.0,
        energy_basis: EnergyBasis::PerTonne,
        loss_rate: 0.0,
        loss_basis: LossBasis::None,
        conversion_efficiency: 1.0,
        buffer_days: None,
    }
}

/// The four chains compared in the delivery and storage analyses, wired from
/// the carriers parameter set.
pub fn builtin_chains(params: &ParameterSet) -> Result<BuiltinChains> {
    let p = |k: &str| params.get(k);
    let opex = p("fixed_opex_rate")? / 100.0;
    let truck = |payload: f64| -> Result<CapexBasis> {
        Ok(CapexBasis::PerAsset(AssetCapacity::Truck {
            payload_t: payload,
            trips_per_day: p("truck_trips_per_day")?,
            reference_km: p("truck_reference_distance")?,
        }))
    };

    // Ammonia.
    let synthesis = StageSpec {
        energy_use: p("energy_synthesis")?,
        conversion_efficiency: p("synthesis_conversion")? / 100.0,
        ..stage(
            "ammonia synthesis",
            Role::Conversion,
            CapexBasis::PerAnnualTonne,
            Capex::Fixed(p("ammonia_plant_capex")?),
            opex,
        )
    };
    let cooling = StageSpec {
        energy_use: p("energy_nh3_cooling")?,
        ..stage("ammonia cooling", Role::Conversion, CapexBasis::PerAnnualTonne, Capex::Fixed(0.0), opex)
    };
    let nh3_truck = StageSpec {
        loss_rate: p("evaporation_nh3_transport")? / 100.0,
        loss_basis: LossBasis::PerDayInTransit,
        ..stage(
            "ammonia trucking",
            Role::Transport,
            truck(p("truck_payload_nh3")?)?,
            Capex::Fixed(p("tanker_capex")?),
            opex,
        )
    };
    let terminal = StageSpec {
        buffer_days: Some(p("terminal_buffer_days")?),
        ..stage(
            "loading terminal",
            Role::Transport,
            CapexBasis::PerTonneHeld,
            Capex::Fixed(p("ammonia_vessel_capex")?),
            opex,
        )
    };
    let nh3_tank = StageSpec {
        energy_use: p("energy_nh3_storage")? / 1000.0,
        energy_basis: EnergyBasis::PerTonneH2PerDayHeld,
        ..stage(
            "ammonia tank",
            Role::Storage,
            CapexBasis::PerTonneHeld,
            Capex::Fixed(p("ammonia_vessel_capex")?),
            opex,
        )
    };
    let cracker = StageSpec {
        energy_use: p("energy_decomposition")?,
        conversion_efficiency: p("reform_conversion")? / 100.0,
        ..stage(
            "ammonia cracking",
            Role::Reconversion,
            CapexBasis::PerAnnualTonne,
            brackets(params, "reformer_capex", 1.0)?,
            opex,
        )
    };
    let nh3_with_crack = CarrierChain {
        name: "NH3_with_crack".into(),
        medium: Medium::NH3,
        stages: vec![synthesis, cooling, nh3_truck, terminal, nh3_tank, cracker],
        include_reconversion: true,
    };
    let nh3_direct = nh3_with_crack.without_reconversion("NH3_direct");

    // Liquid hydrogen.
    let liquefier = StageSpec {
        energy_use: p("energy_liquefaction")?,
        ..stage(
            "liquefaction",
            Role::Conversion,
            CapexBasis::PerAnnualTonne,
            brackets(params, "liquefier_capex", 1.0)?,
            opex,
        )
    };
    let lh2_truck = StageSpec {
        loss_rate: p("evaporation_lh2")? / 100.0,
        loss_basis: LossBasis::PerDayInTransit,
        ..stage(
            "liquid hydrogen trucking",
            Role::Transport,
            truck(p("truck_payload_lh2")?)?,
            Capex::Fixed(p("tanker_capex")?),
            opex,
        )
    };
    let cryo_tank = StageSpec {
        loss_rate: p("evaporation_lh2")? / 100.0,
        loss_basis: LossBasis::PerDayHeld,
        ..stage(
            "cryogenic tank",
            Role::Storage,
            CapexBasis::PerCubicMetreHeld {
                density_kg_per_m3: p("lh2_density")?,
            },
            Capex::Fixed(p("cryo_tank_capex")?),
            opex,
        )
    };
    let vaporizer = StageSpec {
        // kWh/t -> MWh/t
        energy_use: p("energy_regasification")? / 1000.0,
        ..stage(
            "regasification",
            Role::Reconversion,
            CapexBasis::PerAsset(AssetCapacity::Fixed {
                t_per_yr: p("vaporizer_unit_capacity")? * 1000.0,
            }),
            Capex::Fixed(p("vaporizer_capex_10kt")? * 1000.0),
            opex,
        )
    };
    let lh2 = CarrierChain {
        name: "LH2".into(),
        medium: Medium::LH2,
        stages: vec![liquefier, lh2_truck, cryo_tank, vaporizer],
        include_reconversion: true,
    };

    // Gaseous hydrogen pipeline.
    let pipe = StageSpec {
        energy_use: p("energy_pipeline")?,
        energy_basis: EnergyBasis::PerTonnePer100Km,
        loss_rate: p("pipeline_leakage")? / 100.0,
        loss_basis: LossBasis::Per1000Km,
        ..stage(
            "pipeline",
            Role::Transport,
            CapexBasis::PerKm,
            brackets(params, "pipeline_capex", 1000.0)?,
            opex,
        )
    };
    let pipeline = CarrierChain {
        name: "pipeline".into(),
        medium: Medium::GH2_pipeline,
        stages: vec![pipe],
        include_reconversion: false,
    };

    let chains = BuiltinChains {
        nh3_with_crack,
        nh3_direct,
        lh2,
        pipeline,
    };
    for c in chains.all() {
        c.validate()?;
    }
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{load_params, default_data_dir, CARRIERS_FILE};
    use approx::assert_abs_diff_eq;

    fn chains() -> (BuiltinChains, CostQuery) {
        let params = load_params(&default_data_dir().join(CARRIERS_FILE), "carriers").unwrap();
        (builtin_chains(&params).unwrap(), CostQuery::from_params(&params).unwrap())
    }

    #[test]
    fn levelized_examples() {
        assert_abs_diff_eq!(levelized_cost(&[100.0; 5], &[100.0; 5], 0.3).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(levelized_cost(&[500.0], &[250.0], 0.08).unwrap(), 2.0, epsilon = 1e-12);
        // Annuity factor oracle: Σ_{n=1..20} 1.08^-n.
        let annuity: f64 = (1..=20).map(|n| 1.08f64.powi(-n)).sum();
        assert_abs_diff_eq!(annuity, 9.8181, epsilon = 1e-4);
        let v = flat_levelized(1000.0, 0.0, 100.0, 20, 0.08).unwrap();
        assert_abs_diff_eq!(v, 1000.0 / (100.0 * annuity), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 1.0185, epsilon = 1e-4);
    }

    #[test]
    fn levelized_errors() {
        assert!(levelized_cost(&[1.0], &[0.0], 0.08).is_err());
        assert!(levelized_cost(&[], &[], 0.08).is_err());
        assert!(levelized_cost(&[1.0, 2.0], &[1.0], 0.08).is_err());
    }

    #[test]
    fn bracket_lookup() {
        let (c, _) = chains();
        let cracker = c.nh3_with_crack.stages.iter().find(|s| s.role == Role::Reconversion).unwrap();
        assert_eq!(cracker.capex.at(10.0), (354.0, false));
        assert_eq!(cracker.capex.at(5.0), (354.0, true));
        assert_eq!(cracker.capex.at(200.0), (196.0, true));
        assert_abs_diff_eq!(cracker.capex.at(75.0).0, 215.0, epsilon = 1e-12);
        let pipe = &c.pipeline.stages[0];
        assert_eq!(pipe.capex.at(100.0), (833_000.0, false));
        let liq = &c.lh2.stages[0];
        assert_eq!(liq.capex.at(50.0), (7397.0, false));
    }

    #[test]
    fn breakdown_sums_to_total() {
        let (c, q) = chains();
        for chain in c.all() {
            let b = delivery_cost(chain, &q.clone().with(30.0, 800.0, 0.0)).unwrap();
            let sum: f64 = b.stages.iter().map(|s| s.usd_per_kg).sum();
            assert!((sum - b.total).abs() <= 1e-9);
            assert!(b.delivered_fraction > 0.0 && b.delivered_fraction <= 1.0);
            assert!(b.warnings.is_empty());
        }
    }

    #[test]
    fn nh3_mass_balance() {
        let (c, q) = chains();
        let b = delivery_cost(&c.nh3_with_crack, &q).unwrap();
        assert!(b.delivered_fraction <= 0.95 * 0.95);
        // Transit loss over 0.5 days at 0.024 %/d.
        assert_abs_diff_eq!(b.delivered_fraction, 0.95 * 0.95 * (1.0 - 0.00012), epsilon = 1e-12);
        let d = delivery_cost(&c.nh3_direct, &q).unwrap();
        assert!(d.stages.iter().all(|s| s.role != Role::Reconversion));
    }

    #[test]
    fn out_of_range_volume_warns() {
        let (c, q) = chains();
        let b = delivery_cost(&c.nh3_with_crack, &q.clone().with(5.0, 500.0, 0.0)).unwrap();
        assert_eq!(b.warnings.len(), 1);
        assert!(b.warnings[0].contains("ammonia cracking"));
    }

    #[test]
    fn pipeline_needs_distance_and_storage() {
        let (c, q) = chains();
        assert!(delivery_cost(&c.pipeline, &q.clone().with(100.0, 0.0, 0.0)).is_err());
        assert!(storage_cost(&c.pipeline, &q.clone().with(100.0, 500.0, 30.0)).is_err());
        assert!(storage_cost(&c.nh3_with_crack, &q).is_err());
    }

    #[test]
    fn query_validation() {
        let q = CostQuery::default();
        assert!(q.clone().with(0.0, 1.0, 0.0).validate().is_err());
        assert!(q.clone().with(1.0, -1.0, 0.0).validate().is_err());
        assert!(CostQuery { discount_rate: 1.0, ..q }.validate().is_err());
    }

    #[test]
    fn defaults_match_bundled_params() {
        let (_, q) = chains();
        let d = CostQuery::default();
        assert_eq!(q.discount_rate, d.discount_rate);
        assert_eq!(q.lifetime, d.lifetime);
        assert_eq!(q.electricity_price, d.electricity_price);
        assert_eq!(q.stored_share, d.stored_share);
    }

    #[test]
    fn stage_order_enforced() {
        let (c, _) = chains();
        let mut bad = c.nh3_with_crack.clone();
        bad.stages.swap(0, 5);
        assert!(bad.validate().is_err());
    }
}

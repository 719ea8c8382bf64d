//! Bundled parameter tables: parsing, validation, provenance and digests.
//!
//! All files are UTF-8, comma-delimited, with a mandatory header row. Lines
//! starting with `#` are comments; the leading comment block is kept so that
//! a loaded file re-serializes byte for byte. Numbers use `.` as the decimal
//! point and no thousands separators.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gtfp::RegionRecord;

/// Environment variable pointing at an alternative data directory.
pub const DATA_DIR_ENV: &str = "AMMONIA_DATA_DIR";

pub const REGIONS_FILE: &str = "regions_2019.csv";
pub const CARRIERS_FILE: &str = "carriers.csv";
pub const COFIRING_FILE: &str = "cofiring.csv";
pub const SCENARIOS_FILE: &str = "scenarios.csv";
pub const SUPPLY_LEVELS_FILE: &str = "supply_levels.csv";
pub const DEMAND_LEVELS_FILE: &str = "demand_levels.csv";
pub const NATIONAL_CO2_FILE: &str = "national_co2.csv";
pub const CALIBRATION_FILE: &str = "calibration.csv";
pub const MANIFEST_FILE: &str = "MANIFEST.csv";

const REGION_COLUMNS: [&str; 6] = [
    "region",
    "energy_mtce",
    "labour_m",
    "capital_busd",
    "co2_mt",
    "gdp_busd",
];
const PARAM_HEADER: &str = "key,value,unit,provenance";

/// Directory holding the bundled datasets: `$AMMONIA_DATA_DIR` if set,
/// otherwise the `data/` directory shipped with this crate.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data")))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Raw delimited file: leading comments, header, and rows tagged with their
/// 1-based line numbers.
#[derive(Debug, Clone)]
struct RawTable {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

impl RawTable {
    /// `max_fields` caps the split so the last column may contain commas.
    fn parse(path: &Path, text: &str, max_fields: usize) -> Result<RawTable> {
        let mut comments = Vec::new();
        let mut header = None;
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.starts_with('#') {
                if header.is_none() {
                    comments.push(line.to_string());
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<String> = line
                .splitn(max_fields, ',')
                .map(|f| f.trim().to_string())
                .collect();
            if header.is_none() {
                header = Some(fields);
            } else {
                rows.push((lineno, fields));
            }
        }
        let header = header.ok_or_else(|| parse_err(path, 1, "missing header row"))?;
        Ok(RawTable {
            comments,
            header,
            rows,
        })
    }

    fn column(&self, path: &Path, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(path, self.comments.len() + 1, format!("missing column `{name}`")))
    }
}

fn parse_number(path: &Path, line: usize, column: &str, cell: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| parse_err(path, line, format!("column `{column}`: `{cell}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("column `{column}`: non-finite value")));
    }
    Ok(v)
}

fn comment_block(comments: &[String]) -> String {
    comments.iter().map(|c| format!("{c}\n")).collect()
}

// ---------------------------------------------------------------------------
// Regions

#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    pub comments: Vec<String>,
    pub records: Vec<RegionRecord>,
}

impl RegionTable {
    pub fn to_canonical_string(&self) -> String {
        let mut out = comment_block(&self.comments);
        out.push_str(&REGION_COLUMNS.join(","));
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.name, r.energy_mtce, r.labour_m, r.capital_busd, r.co2_mt, r.gdp_busd
            );
        }
        out
    }
}

pub fn parse_regions(path: &Path, text: &str) -> Result<RegionTable> {
    let raw = RawTable::parse(path, text, usize::MAX)?;
    let cols: Vec<usize> = REGION_COLUMNS
        .iter()
        .map(|c| raw.column(path, c))
        .collect::<Result<_>>()?;
    if raw.rows.is_empty() {
        return Err(parse_err(path, raw.comments.len() + 1, "no records"));
    }
    let mut records = Vec::with_capacity(raw.rows.len());
    for (line, fields) in &raw.rows {
        let cell = |i: usize| -> Result<&str> {
            fields
                .get(cols[i])
                .map(String::as_str)
                .ok_or_else(|| parse_err(path, *line, format!("missing cell for `{}`", REGION_COLUMNS[i])))
        };
        let name = cell(0)?.to_string();
        let mut values = [0.0; 5];
        for (k, v) in values.iter_mut().enumerate() {
            let column = REGION_COLUMNS[k + 1];
            *v = parse_number(path, *line, column, cell(k + 1)?)?;
            if *v <= 0.0 {
                return Err(parse_err(
                    path,
                    *line,
                    format!("region `{name}`, column `{column}`: value must be positive, got {v}"),
                ));
            }
        }
        records.push(RegionRecord {
            name,
            energy_mtce: values[0],
            labour_m: values[1],
            capital_busd: values[2],
            co2_mt: values[3],
            gdp_busd: values[4],
        });
    }
    Ok(RegionTable {
        comments: raw.comments,
        records,
    })
}

pub fn load_regions(path: &Path) -> Result<Vec<RegionRecord>> {
    Ok(parse_regions(path, &read(path)?)?.records)
}

// ---------------------------------------------------------------------------
// Keyed parameters

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub key: String,
    pub value: f64,
    pub unit: String,
    pub provenance: String,
}

/// Keyed parameters for one namespace, in file order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterSet {
    pub namespace: String,
    pub version: String,
    #[serde(skip)]
    comments: Vec<String>,
    entries: Vec<Param>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl ParameterSet {
    pub fn get(&self, key: &str) -> Result<f64> {
        self.param(key).map(|p| p.value)
    }

    pub fn param(&self, key: &str) -> Result<&Param> {
        self.index
            .get(key)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| Error::input(format!("{}: missing parameter `{key}`", self.namespace)))
    }

    pub fn entries(&self) -> &[Param] {
        &self.entries
    }

    /// Replaces or adds `value` for `key`, keeping unit and provenance rules.
    pub fn set(&mut self, key: &str, value: f64, unit: &str, provenance: &str) {
        let p = Param {
            key: key.to_string(),
            value,
            unit: unit.to_string(),
            provenance: provenance.to_string(),
        };
        match self.index.get(key) {
            Some(&i) => self.entries[i] = p,
            None => {
                self.index.insert(key.to_string(), self.entries.len());
                self.entries.push(p);
            }
        }
    }

    /// Layers `overrides` on top of `self`; later layers win.
    pub fn overlay(&mut self, overrides: &ParameterSet) {
        for p in &overrides.entries {
            self.set(&p.key, p.value, &p.unit, &p.provenance);
        }
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = comment_block(&self.comments);
        out.push_str(PARAM_HEADER);
        out.push('\n');
        for p in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", p.key, p.value, p.unit, p.provenance);
        }
        out
    }
}

/// Expected keys and unit tags for a namespace.
pub fn schema(namespace: &str) -> Option<&'static [(&'static str, &'static str)]> {
    match namespace {
        "carriers" => Some(CARRIERS_SCHEMA),
        "cofiring" => Some(COFIRING_SCHEMA),
        "scenarios" => Some(SCENARIOS_SCHEMA),
        _ => None,
    }
}

pub const NAMESPACES: [&str; 3] = ["carriers", "cofiring", "scenarios"];

const CARRIERS_SCHEMA: &[(&str, &str)] = &[
    ("wacc", "percent"),
    ("ammonia_plant_capex", "USD_per_t_yr"),
    ("reformer_capex_10kt", "USD_per_t_yr"),
    ("reformer_capex_30kt", "USD_per_t_yr"),
    ("reformer_capex_50kt", "USD_per_t_yr"),
    ("reformer_capex_100kt", "USD_per_t_yr"),
    ("tanker_capex", "USD"),
    ("ammonia_vessel_capex", "USD_per_t"),
    ("liquefier_capex_10kt", "USD_per_t_yr"),
    ("liquefier_capex_30kt", "USD_per_t_yr"),
    ("liquefier_capex_50kt", "USD_per_t_yr"),
    ("liquefier_capex_100kt", "USD_per_t_yr"),
    ("vaporizer_capex_10kt", "kUSD"),
    ("cryo_tank_capex", "USD_per_m3"),
    ("pipeline_capex_10kt", "kUSD_per_km"),
    ("pipeline_capex_30kt", "kUSD_per_km"),
    ("pipeline_capex_50kt", "kUSD_per_km"),
    ("pipeline_capex_100kt", "kUSD_per_km"),
    ("synthesis_conversion", "percent"),
    ("reform_conversion", "percent"),
    ("energy_synthesis", "MWh_per_t"),
    ("energy_decomposition", "MWh_per_t"),
    ("energy_nh3_cooling", "MWh_per_t"),
    ("energy_nh3_storage", "kWh_per_t_d"),
    ("energy_liquefaction", "MWh_per_t"),
    ("energy_regasification", "kWh_per_t"),
    ("energy_pipeline", "MWh_per_t_100km"),
    ("evaporation_nh3_transport", "percent_per_d"),
    ("evaporation_lh2", "percent_per_d"),
    ("pipeline_leakage", "percent_per_1000km"),
    ("fixed_opex_rate", "percent_per_yr"),
    ("electricity_price", "USD_per_MWh"),
    ("lifetime", "yr"),
    ("stored_share", "percent"),
    ("truck_payload_nh3", "t"),
    ("truck_payload_lh2", "t"),
    ("truck_trips_per_day", "per_d"),
    ("truck_reference_distance", "km"),
    ("terminal_buffer_days", "d"),
    ("lh2_density", "kg_per_m3"),
    ("vaporizer_unit_capacity", "kt_per_yr"),
];

const COFIRING_SCHEMA: &[(&str, &str)] = &[
    ("coal_price_min", "USD_per_tce"),
    ("coal_price_max", "USD_per_tce"),
    ("lng_price_min", "USD_per_tce"),
    ("lng_price_max", "USD_per_tce"),
    ("gas_price_reference", "USD_per_tce"),
    ("coal_lhv", "kcal_per_kg"),
    ("ammonia_lhv", "MJ_per_kg"),
    ("ammonia_production_cost", "USD_per_t"),
    ("gross_margin", "percent"),
    ("coal_consumption", "tce_per_MWh"),
    ("base_emission", "kgCO2_per_MWh"),
    ("efficiency_loss_3", "percent"),
    ("efficiency_loss_5", "percent"),
    ("efficiency_loss_10", "percent"),
    ("efficiency_loss_15", "percent"),
    ("efficiency_loss_20", "percent"),
    ("fuel_cost_share", "percent"),
    ("coal_price", "USD_per_tce"),
];

const SCENARIOS_SCHEMA: &[(&str, &str)] = &[
    ("wind_capacity", "GW"),
    ("solar_capacity", "GW"),
    ("thermal_capacity", "GW"),
    ("conventional_ammonia_2030", "Mt"),
    ("shipping_fuel_2030", "Mt"),
    ("wind_hours", "h"),
    ("solar_hours", "h"),
    ("coal_hours", "h"),
    ("coal_share", "percent"),
    ("electrolyser_efficiency", "percent"),
    ("hrs_count", "ea"),
    ("hrs_capacity", "kgH2_per_d"),
    ("synthesis_conversion", "percent"),
    ("coal_consumption", "tce_per_MWh"),
    ("ammonia_lhv", "MJ_per_kg"),
    ("electrolysis_heating_value", "MJ_per_kg"),
];

/// Parses a parameter file without requiring every schema key; used for
/// override layers. Duplicates, unknown keys and unit mismatches still fail.
pub fn parse_params_partial(path: &Path, text: &str, namespace: &str) -> Result<ParameterSet> {
    let schema = schema(namespace)
        .ok_or_else(|| Error::input(format!("unknown parameter namespace `{namespace}`")))?;
    let raw = RawTable::parse(path, text, 4)?;
    if raw.header.join(",") != PARAM_HEADER {
        return Err(parse_err(
            path,
            raw.comments.len() + 1,
            format!("header must be `{PARAM_HEADER}`"),
        ));
    }
    let version = raw
        .comments
        .iter()
        .find_map(|c| c.trim_start_matches('#').trim().strip_prefix("version:"))
        .map(|v| v.trim().to_string())
        .unwrap_or_default();

    let mut set = ParameterSet {
        namespace: namespace.to_string(),
        version,
        comments: raw.comments.clone(),
        entries: Vec::new(),
        index: BTreeMap::new(),
    };
    for (line, fields) in &raw.rows {
        if fields.len() != 4 {
            return Err(parse_err(path, *line, "expected key,value,unit,provenance"));
        }
        let key = &fields[0];
        let value = parse_number(path, *line, "value", &fields[1])?;
        let unit = &fields[2];
        let provenance = &fields[3];
        let expected = schema
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, u)| *u)
            .ok_or_else(|| parse_err(path, *line, format!("unknown key `{key}` for `{namespace}`")))?;
        if unit != expected {
            return Err(parse_err(
                path,
                *line,
                format!("key `{key}`: unit `{unit}` does not match expected `{expected}`"),
            ));
        }
        if provenance.is_empty() {
            return Err(parse_err(path, *line, format!("key `{key}`: empty provenance")));
        }
        if set.index.contains_key(key.as_str()) {
            return Err(parse_err(path, *line, format!("duplicate key `{key}`")));
        }
        set.set(key, value, unit, provenance);
    }
    Ok(set)
}

/// Errors with every schema key absent from `set`.
pub fn check_complete(set: &ParameterSet, path: &Path) -> Result<()> {
    let schema = schema(&set.namespace)
        .ok_or_else(|| Error::input(format!("unknown parameter namespace `{}`", set.namespace)))?;
    let missing: Vec<String> = schema
        .iter()
        .filter(|(k, _)| !set.index.contains_key(*k))
        .map(|(k, _)| k.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingKeys {
            path: path.to_path_buf(),
            keys: missing,
        })
    }
}

pub fn parse_params(path: &Path, text: &str, namespace: &str) -> Result<ParameterSet> {
    let set = parse_params_partial(path, text, namespace)?;
    check_complete(&set, path)?;
    Ok(set)
}

pub fn load_params(path: &Path, namespace: &str) -> Result<ParameterSet> {
    parse_params(path, &read(path)?, namespace)
}

/// Loads `base` and applies each override file in order (later wins).
pub fn load_layered(base: &Path, overrides: &[PathBuf], namespace: &str) -> Result<ParameterSet> {
    let mut set = load_params(base, namespace)?;
    for path in overrides {
        let layer = parse_params_partial(path, &read(path)?, namespace)?;
        set.overlay(&layer);
    }
    check_complete(&set, base)?;
    Ok(set)
}

// ---------------------------------------------------------------------------
// Scenario levels

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupplyLevel {
    pub level: u32,
    /// Share of wind and solar generation devoted to ammonia, fraction.
    pub renewable_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemandLevel {
    pub level: u32,
    pub ammonia_pr: f64,
    pub power_pr: f64,
    pub shipping_pr: f64,
    pub mobility_pr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable<T> {
    pub comments: Vec<String>,
    pub provenance: Vec<String>,
    pub levels: Vec<T>,
}

const SUPPLY_COLUMNS: [&str; 3] = ["level", "renewable_share_pct", "provenance"];
const DEMAND_COLUMNS: [&str; 6] = [
    "level",
    "ammonia_pr_pct",
    "power_pr_pct",
    "shipping_pr_pct",
    "mobility_pr_pct",
    "provenance",
];

/// (line number, level, percentage columns, provenance)
type LevelRow = (usize, u32, Vec<f64>, String);

fn parse_level_rows(path: &Path, text: &str, columns: &[&str]) -> Result<(Vec<String>, Vec<LevelRow>)> {
    let raw = RawTable::parse(path, text, columns.len())?;
    if raw.header != columns {
        return Err(parse_err(
            path,
            raw.comments.len() + 1,
            format!("header must be `{}`", columns.join(",")),
        ));
    }
    if raw.rows.is_empty() {
        return Err(parse_err(path, raw.comments.len() + 1, "no records"));
    }
    let mut out = Vec::new();
    for (line, fields) in &raw.rows {
        if fields.len() != columns.len() {
            return Err(parse_err(path, *line, format!("expected {} fields", columns.len())));
        }
        let level: u32 = fields[0]
            .parse()
            .map_err(|_| parse_err(path, *line, format!("level `{}` is not an integer", fields[0])))?;
        let mut shares = Vec::new();
        for (c, cell) in columns[1..columns.len() - 1].iter().zip(&fields[1..]) {
            let v = parse_number(path, *line, c, cell)?;
            if !(0.0..=100.0).contains(&v) {
                return Err(parse_err(path, *line, format!("column `{c}`: {v} outside 0-100")));
            }
            shares.push(v);
        }
        out.push((*line, level, shares, fields[columns.len() - 1].clone()));
    }
    Ok((raw.comments, out))
}

pub fn parse_supply_levels(path: &Path, text: &str) -> Result<LevelTable<SupplyLevel>> {
    let (comments, rows) = parse_level_rows(path, text, &SUPPLY_COLUMNS)?;
    let (levels, provenance) = rows
        .into_iter()
        .map(|(_, level, s, p)| {
            (
                SupplyLevel {
                    level,
                    renewable_share: s[0] / 100.0,
                },
                p,
            )
        })
        .unzip();
    Ok(LevelTable {
        comments,
        provenance,
        levels,
    })
}

pub fn parse_demand_levels(path: &Path, text: &str) -> Result<LevelTable<DemandLevel>> {
    let (comments, rows) = parse_level_rows(path, text, &DEMAND_COLUMNS)?;
    let (levels, provenance) = rows
        .into_iter()
        .map(|(_, level, s, p)| {
            (
                DemandLevel {
                    level,
                    ammonia_pr: s[0] / 100.0,
                    power_pr: s[1] / 100.0,
                    shipping_pr: s[2] / 100.0,
                    mobility_pr: s[3] / 100.0,
                },
                p,
            )
        })
        .unzip();
    Ok(LevelTable {
        comments,
        provenance,
        levels,
    })
}

fn pct(fraction: f64) -> f64 {
    // Percent values in the files are short decimals; undo the /100 exactly.
    let v = fraction * 100.0;
    let rounded = (v * 1.0e9).round() / 1.0e9;
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

impl LevelTable<SupplyLevel> {
    pub fn to_canonical_string(&self) -> String {
        let mut out = comment_block(&self.comments);
        out.push_str(&SUPPLY_COLUMNS.join(","));
        out.push('\n');
        for (l, p) in self.levels.iter().zip(&self.provenance) {
            let _ = writeln!(out, "{},{},{}", l.level, pct(l.renewable_share), p);
        }
        out
    }
}

impl LevelTable<DemandLevel> {
    pub fn to_canonical_string(&self) -> String {
        let mut out = comment_block(&self.comments);
        out.push_str(&DEMAND_COLUMNS.join(","));
        out.push('\n');
        for (l, p) in self.levels.iter().zip(&self.provenance) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                l.level,
                pct(l.ammonia_pr),
                pct(l.power_pr),
                pct(l.shipping_pr),
                pct(l.mobility_pr),
                p
            );
        }
        out
    }
}

pub fn load_supply_levels(path: &Path) -> Result<Vec<SupplyLevel>> {
    Ok(parse_supply_levels(path, &read(path)?)?.levels)
}

pub fn load_demand_levels(path: &Path) -> Result<Vec<DemandLevel>> {
    Ok(parse_demand_levels(path, &read(path)?)?.levels)
}

// ---------------------------------------------------------------------------
// National emission series

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub year: i32,
    pub value: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub comments: Vec<String>,
    pub points: Vec<SeriesPoint>,
}

const SERIES_COLUMNS: [&str; 3] = ["year", "co2_mt", "provenance"];

impl Series {
    pub fn value(&self, year: i32) -> Result<f64> {
        self.points
            .iter()
            .find(|p| p.year == year)
            .map(|p| p.value)
            .ok_or_else(|| Error::input(format!("series has no value for {year}")))
    }

    pub fn to_canonical_string(&self) -> String {
        let mut out = comment_block(&self.comments);
        out.push_str(&SERIES_COLUMNS.join(","));
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.year, p.value, p.provenance);
        }
        out
    }
}

pub fn parse_series(path: &Path, text: &str) -> Result<Series> {
    let raw = RawTable::parse(path, text, 3)?;
    if raw.header != SERIES_COLUMNS {
        return Err(parse_err(path, raw.comments.len() + 1, "header must be `year,co2_mt,provenance`"));
    }
    let mut points = Vec::new();
    for (line, fields) in &raw.rows {
        if fields.len() != 3 {
            return Err(parse_err(path, *line, "expected year,co2_mt,provenance"));
        }
        let year = fields[0]
            .parse()
            .map_err(|_| parse_err(path, *line, format!("year `{}` is not an integer", fields[0])))?;
        let value = parse_number(path, *line, "co2_mt", &fields[1])?;
        if value <= 0.0 {
            return Err(parse_err(path, *line, "emission must be positive"));
        }
        points.push(SeriesPoint {
            year,
            value,
            provenance: fields[2].clone(),
        });
    }
    Ok(Series {
        comments: raw.comments,
        points,
    })
}

pub fn load_series(path: &Path) -> Result<Series> {
    parse_series(path, &read(path)?)
}

// ---------------------------------------------------------------------------
// Calibration ledger and manifest

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationEntry {
    pub constant: String,
    pub value: f64,
    pub unit: String,
    pub oracle: String,
}

pub fn parse_calibration(path: &Path, text: &str) -> Result<Vec<CalibrationEntry>> {
    let raw = RawTable::parse(path, text, 4)?;
    if raw.header.join(",") != "constant,value,unit,oracle" {
        return Err(parse_err(path, raw.comments.len() + 1, "header must be `constant,value,unit,oracle`"));
    }
    raw.rows
        .iter()
        .map(|(line, f)| {
            if f.len() != 4 || f[3].is_empty() {
                return Err(parse_err(path, *line, "expected constant,value,unit,oracle"));
            }
            Ok(CalibrationEntry {
                constant: f[0].clone(),
                value: parse_number(path, *line, "value", &f[1])?,
                unit: f[2].clone(),
                oracle: f[3].clone(),
            })
        })
        .collect()
}

/// Every back-solved constant shipped with the data, with its derivation.
pub fn calibration_ledger(dir: &Path) -> Result<Vec<CalibrationEntry>> {
    let path = dir.join(CALIBRATION_FILE);
    parse_calibration(&path, &read(&path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetManifest {
    pub dir: PathBuf,
    pub files: Vec<ManifestEntry>,
    pub calibration: Vec<CalibrationEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl DatasetManifest {
    /// Reads `MANIFEST.csv` and checks every listed file's digest.
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let raw = RawTable::parse(&path, &read(&path)?, 2)?;
        if raw.header.join(",") != "file,sha256" {
            return Err(parse_err(&path, raw.comments.len() + 1, "header must be `file,sha256`"));
        }
        let mut files = Vec::new();
        for (line, f) in &raw.rows {
            if f.len() != 2 {
                return Err(parse_err(&path, *line, "expected file,sha256"));
            }
            let file_path = dir.join(&f[0]);
            let bytes = fs::read(&file_path).map_err(|source| Error::Io {
                path: file_path.clone(),
                source,
            })?;
            let found = sha256_hex(&bytes);
            if found != f[1] {
                return Err(Error::DigestMismatch {
                    path: file_path,
                    expected: f[1].clone(),
                    found,
                });
            }
            files.push(ManifestEntry {
                file: f[0].clone(),
                sha256: f[1].clone(),
            });
        }
        Ok(DatasetManifest {
            dir: dir.to_path_buf(),
            files,
            calibration: calibration_ledger(dir)?,
        })
    }
}

/// Everything the models read, loaded from one directory.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub regions: Vec<RegionRecord>,
    pub carriers: ParameterSet,
    pub cofiring: ParameterSet,
    pub scenarios: ParameterSet,
    pub supply_levels: Vec<SupplyLevel>,
    pub demand_levels: Vec<DemandLevel>,
    pub national_co2: Series,
}

/// Namespace named by an override file's `# namespace: <name>` comment.
pub fn override_namespace(path: &Path) -> Result<&'static str> {
    let text = read(path)?;
    let ns = text
        .lines()
        .filter(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("namespace:"))
        .map(str::trim)
        .ok_or_else(|| parse_err(path, 1, "override file needs a `# namespace: <name>` comment"))?;
    NAMESPACES
        .iter()
        .copied()
        .find(|n| *n == ns)
        .ok_or_else(|| parse_err(path, 1, format!("unknown namespace `{ns}`")))
}

fn namespace_file(namespace: &str) -> Result<&'static str> {
    match namespace {
        "carriers" => Ok(CARRIERS_FILE),
        "cofiring" => Ok(COFIRING_FILE),
        "scenarios" => Ok(SCENARIOS_FILE),
        other => Err(Error::input(format!("unknown parameter namespace `{other}`"))),
    }
}

/// Bundled parameters for `namespace` from `dir`, with every override file
/// that targets the namespace applied in order.
pub fn effective_params(dir: &Path, namespace: &str, overrides: &[PathBuf]) -> Result<ParameterSet> {
    let mut layers = Vec::new();
    for path in overrides {
        if override_namespace(path)? == namespace {
            layers.push(path.clone());
        }
    }
    load_layered(&dir.join(namespace_file(namespace)?), &layers, namespace)
}

impl Dataset {
    /// Loads every bundled file from `dir`, applying `overrides` (files whose
    /// comment block names the namespace, e.g. `# namespace: cofiring`).
    pub fn load(dir: &Path, overrides: &[PathBuf]) -> Result<Self> {
        for path in overrides {
            override_namespace(path)?;
        }
        Ok(Dataset {
            regions: load_regions(&dir.join(REGIONS_FILE))?,
            carriers: effective_params(dir, "carriers", overrides)?,
            cofiring: effective_params(dir, "cofiring", overrides)?,
            scenarios: effective_params(dir, "scenarios", overrides)?,
            supply_levels: load_supply_levels(&dir.join(SUPPLY_LEVELS_FILE))?,
            demand_levels: load_demand_levels(&dir.join(DEMAND_LEVELS_FILE))?,
            national_co2: load_series(&dir.join(NATIONAL_CO2_FILE))?,
        })
    }

    pub fn bundled() -> Result<Self> {
        Dataset::load(&default_data_dir(), &[])
    }
}

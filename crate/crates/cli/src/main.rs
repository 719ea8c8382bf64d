//! `ammonia`: run the green ammonia techno-economic models from the shell.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 when the LP
//! solver fails.

mod commands;
mod table;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ammonia_core::data::{self, DatasetManifest};
use ammonia_core::scenarios::HeatingValueBasis;
use ammonia_core::{cofiring, Error};
use clap::{Args, Parser, Subcommand};

use commands::Inputs;
use table::{Format, Table};

const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ammonia", version, about = "Green ammonia techno-economic models")]
struct Cli {
    /// Directory with the bundled datasets.
    #[arg(long, global = true, env = data::DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,

    /// User parameter file layered over the bundled defaults.
    #[arg(long, global = true, env = "AMMONIA_PARAMS")]
    user_params: Option<PathBuf>,

    /// Parameter override file (repeatable; later files win). Each file needs
    /// a `# namespace: <carriers|cofiring|scenarios>` comment.
    #[arg(long = "params", global = true)]
    params: Vec<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regional productivity scores and intensities.
    Gtfp {
        #[arg(long, default_value = data::REGIONS_FILE)]
        regions: PathBuf,
    },
    /// Hydrogen carrier delivery and storage costs.
    Carrier {
        #[command(subcommand)]
        command: CarrierCommand,
    },
    /// Ammonia co-firing costs and emissions.
    Cofire(CofireArgs),
    /// 2030 supply and demand scenarios.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
        /// Heating value basis for electrolysis energy (default from data).
        #[arg(long, global = true)]
        basis: Option<Basis>,
    },
    /// Write every table into a directory, one file per table.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the effective parameter set after overrides.
    Params {
        /// Restrict to one namespace.
        namespace: Option<String>,
    },
    /// Check bundled file digests and list the calibration ledger.
    Verify,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Basis {
    Hhv,
    Lhv,
}

#[derive(Debug, Subcommand)]
enum CarrierCommand {
    /// Delivery cost by stage over volumes and distances.
    Delivery {
        /// Chain name: NH3_with_crack, NH3_direct, LH2, pipeline (repeatable; default all).
        #[arg(long)]
        chain: Vec<String>,
        /// Annual volume, kt H2/yr (repeatable).
        #[arg(long, num_args = 1.., default_values_t = commands::DELIVERY_VOLUMES)]
        volume: Vec<f64>,
        /// Distance, km (repeatable).
        #[arg(long, num_args = 1.., default_values_t = commands::DELIVERY_DISTANCES)]
        distance: Vec<f64>,
    },
    /// Storage cost by component over storage durations.
    Storage {
        /// Chain name: NH3_with_crack, LH2 (repeatable; default both).
        #[arg(long)]
        chain: Vec<String>,
        /// Annual volume, kt H2/yr.
        #[arg(long, default_value_t = 100.0)]
        volume: f64,
        /// Storage duration, days (repeatable).
        #[arg(long, num_args = 1.., default_values_t = commands::STORAGE_DAYS)]
        days: Vec<f64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CofireRates {
    /// Co-firing rate as a fraction, e.g. 0.03 (repeatable).
    #[arg(long, num_args = 1..)]
    rate: Vec<f64>,
    /// All standard rates (0, 3, 5, 10, 15, 20%).
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct CofireArgs {
    #[command(flatten)]
    rates: CofireRates,
    /// Interpolate efficiency losses between tabulated rates.
    #[arg(long)]
    interpolate: bool,
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    Supply,
    Demand,
    Balance,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_failure() { EXIT_SOLVER } else { EXIT_INPUT })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut overrides: Vec<PathBuf> = cli.user_params.iter().cloned().collect();
    overrides.extend(cli.params.iter().cloned());
    let inputs = Inputs {
        data_dir: cli.data_dir.clone().unwrap_or_else(data::default_data_dir),
        overrides,
    };
    let mut warnings = Vec::new();

    let table = match cli.command {
        Command::Gtfp { regions } => commands::gtfp_table(&inputs, &regions)?,
        Command::Carrier { command } => match command {
            CarrierCommand::Delivery { chain, volume, distance } => {
                commands::delivery_table(&inputs, &chain, &volume, &distance, &mut warnings)?
            }
            CarrierCommand::Storage { chain, volume, days } => {
                commands::storage_table(&inputs, &chain, volume, &days, &mut warnings)?
            }
        },
        Command::Cofire(args) => {
            let rates = if args.rates.all {
                cofiring::STANDARD_RATES.to_vec()
            } else {
                args.rates.rate
            };
            commands::cofire_table(&inputs, &rates, args.interpolate)?
        }
        Command::Scenario { command, basis } => {
            let basis = basis.map(|b| match b {
                Basis::Hhv => HeatingValueBasis::Hhv,
                Basis::Lhv => HeatingValueBasis::Lhv,
            });
            let s = commands::scenario_inputs(&inputs, basis)?;
            match command {
                ScenarioCommand::Supply => commands::supply_table(&inputs, &s)?,
                ScenarioCommand::Demand => commands::demand_table(&inputs, &s)?,
                ScenarioCommand::Balance => commands::balance_table(&inputs, &s)?,
            }
        }
        Command::Report { out } => {
            let tables = commands::report_tables(&inputs, &mut warnings)?;
            write_report(&out, &tables, cli.format)?;
            print_warnings(&warnings);
            return Ok(());
        }
        Command::Params { namespace } => {
            let all = data::NAMESPACES;
            let selected: Vec<&str> = match &namespace {
                Some(ns) => vec![all
                    .iter()
                    .copied()
                    .find(|n| n == ns)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown namespace `{ns}`")))?],
                None => all.to_vec(),
            };
            commands::params_table(&inputs, &selected)?
        }
        Command::Verify => verify_table(&inputs.data_dir)?,
    };

    emit(&table, cli.format, cli.output.as_deref())?;
    print_warnings(&warnings);
    Ok(())
}

fn verify_table(dir: &Path) -> Result<Table, Error> {
    let manifest = DatasetManifest::load(dir)?;
    let mut t = Table::new("Dataset digests verified; calibration ledger follows", vec!["kind", "name", "value", "detail"]);
    for f in &manifest.files {
        t.push(vec!["file".into(), f.file.clone().into(), "".into(), f.sha256.clone().into()]);
    }
    for c in &manifest.calibration {
        t.push(vec![
            "calibration".into(),
            c.constant.clone().into(),
            format!("{} {}", c.value, c.unit).into(),
            c.oracle.clone().into(),
        ]);
    }
    Ok(t)
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the rendered table only after it has been fully computed.
fn emit(table: &Table, format: Format, output: Option<&Path>) -> Result<(), Error> {
    let text = table.render(format, false);
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))
        }
    }
}

fn write_report(dir: &Path, tables: &[(&str, Table)], format: Format) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (stem, table) in tables {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        fs::write(&path, table.render(format, true)).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

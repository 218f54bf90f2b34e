use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ris_tr::experiment::{
    config::DEFAULT_SPACING_M, load_config, reproduce_table1, run_single, run_sweep_to, write_rows,
    LoadedConfig, OutputFormat, Units,
};
use ris_tr::geometry::{DelayModel, NearFieldPolicy};
use ris_tr::Error;

#[derive(Parser)]
#[command(
    name = "ris-tr",
    version,
    about = "RIS-enabled time-reversal link simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured topology at the configured bandwidth.
    Single(Common),
    /// Run the [sweep] section of the config file.
    Sweep(Common),
    /// Compare computed tap counts against the reference table.
    Table1 {
        #[command(flatten)]
        common: Common,
        /// Restrict to these bandwidths in Hz (2e9 and/or 4e9).
        #[arg(long = "bandwidth")]
        bandwidths: Vec<f64>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Units of the SNR columns in table output.
    #[arg(long, value_enum)]
    units: Option<UnitsArg>,
    /// Treat endpoints outside the near-field bound as an error.
    #[arg(long)]
    strict_near_field: bool,
    #[arg(long, value_enum)]
    delay_model: Option<DelayArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    Db,
    Linear,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelayArg {
    Approx,
    Exact,
}

impl Common {
    fn load(&self) -> Result<LoadedConfig, Error> {
        let mut loaded = match &self.config {
            Some(p) => load_config(p)?,
            None => LoadedConfig::default(),
        };
        let mut system = loaded.system.clone();
        if self.strict_near_field {
            system = system.with_near_field_policy(NearFieldPolicy::Strict);
        }
        if let Some(d) = self.delay_model {
            system = system.with_delay_model(match d {
                DelayArg::Approx => DelayModel::Approximate,
                DelayArg::Exact => DelayModel::Exact,
            });
        }
        if let Some(s) = loaded.sweep.as_mut() {
            s.base = system.clone();
        }
        loaded.system = system;
        Ok(loaded)
    }

    fn format(&self, fallback: OutputFormat) -> OutputFormat {
        match self.format {
            Some(FormatArg::Csv) => OutputFormat::Csv,
            Some(FormatArg::Table) => OutputFormat::Table,
            None => fallback,
        }
    }

    fn units(&self, fallback: Units) -> Units {
        match self.units {
            Some(UnitsArg::Db) => Units::Db,
            Some(UnitsArg::Linear) => Units::Linear,
            Some(UnitsArg::Both) => Units::Both,
            None => fallback,
        }
    }

    fn writer(&self) -> Result<Box<dyn Write>, Error> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn warn_near_field(rows: usize, cols: usize) {
    eprintln!("warning: {rows}x{cols} RIS: an endpoint lies outside the near-field bound");
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Single(common) => {
            let cfg = common.load()?;
            let row = run_single(&cfg.system, &cfg.topology)?;
            if !row.near_field_ok {
                warn_near_field(row.rows, row.cols);
            }
            let format = common.format(OutputFormat::Csv);
            write_rows(&[row], format, common.units(Units::Both), common.writer()?)
        }
        Command::Sweep(common) => {
            let cfg = common.load()?;
            let mut spec = cfg
                .sweep
                .ok_or_else(|| Error::Schema("config has no [sweep] section".into()))?;
            spec.units = common.units(spec.units);
            let format = common.format(spec.format);
            let rows = run_sweep_to(&spec, format, common.writer()?)?;
            for r in rows.iter().filter(|r| !r.near_field_ok) {
                warn_near_field(r.rows, r.cols);
            }
            Ok(())
        }
        Command::Table1 { common, bandwidths } => {
            let cfg = common.load()?;
            let report = reproduce_table1(&cfg.system, DEFAULT_SPACING_M, &bandwidths)?;
            let out = common.writer()?;
            match common.format(OutputFormat::Csv) {
                OutputFormat::Csv => report.write_csv(out)?,
                OutputFormat::Table => report.write_table(out)?,
            }
            report.check()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::ReplicationMismatch(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use dualcav::checks::run_check;
use dualcav::config::ScenarioConfig;
use dualcav::emit;
use dualcav_core::{
    combine_complex, energy_density_w, fields_sol1, fields_sol2, general_fields, GeneralFieldSpec,
    GeneralMode, SpatialProfile, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "dualcav",
    version,
    about = "Cavity field simulations and verification checks for the dual-symmetric 1-D workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario configuration file (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted-path overrides, e.g. --set grid.n_z=129
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; defaults to the config's output.directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<ScenarioConfig> {
        ScenarioConfig::load(self.config.as_deref(), &self.set)
    }

    fn out_dir(&self, config: &ScenarioConfig) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(&config.output.directory))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the mode bank (index, wavenumber, frequency, amplitudes).
    Modes(CommonArgs),
    /// Emit field frames for every construction on the configured grid.
    Simulate(CommonArgs),
    /// Run verification checks and emit reports plus a summary.
    Verify(VerifyArgs),
    /// Aggregate previously emitted outputs into one document.
    Report(CommonArgs),
    /// Validate the configuration and list every violated constraint.
    Validate(CommonArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Restrict to specific checks (repeatable); defaults to checks.run.
    #[arg(long = "check")]
    checks: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Modes(args) => {
            let config = args.load()?;
            ensure_valid(&config)?;
            let cavity = config.cavity_core()?;
            let modes = config.mode_bank_core(&cavity)?;
            println!("# alpha wavenumber omega amp_time amp_space amp_general");
            for m in &modes {
                println!(
                    "{} {:.15e} {:.15e} {:.15e} {:.15e} {:.15e}",
                    m.alpha, m.wavenumber, m.omega, m.amp_time, m.amp_space, m.amp_general
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(args) => {
            let config = args.load()?;
            ensure_valid(&config)?;
            let out_dir = args.out_dir(&config);
            simulate(&config, &out_dir)?;
            println!("frames written to {}", out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let config = args.common.load()?;
            ensure_valid(&config)?;
            let names: Vec<String> = if args.checks.is_empty() {
                config.checks.run.clone()
            } else {
                args.checks.clone()
            };
            let mut reports: Vec<VerificationReport> = Vec::new();
            for name in &names {
                reports.extend(run_check(name, &config)?);
            }
            let out_dir = args.common.out_dir(&config);
            emit::write_reports(&reports, &out_dir)?;
            let mut all_ok = true;
            for report in &reports {
                println!(
                    "{:<34} {:>12.5e}  {}",
                    report.check,
                    report.worst_residual(),
                    report.status.label()
                );
                all_ok &= report.acceptable();
            }
            println!("reports written to {}", out_dir.display());
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Report(args) => {
            let config = args.load()?;
            let out_dir = args.out_dir(&config);
            let doc = emit::aggregate(&out_dir)?;
            print!("{doc}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let config = args.load()?;
            let issues = config.validate();
            if issues.is_empty() {
                println!("configuration ok");
                Ok(ExitCode::SUCCESS)
            } else {
                for issue in &issues {
                    println!("invalid {issue}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn ensure_valid(config: &ScenarioConfig) -> Result<()> {
    let issues = config.validate();
    if issues.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
    anyhow::bail!("invalid configuration:\n  {}", list.join("\n  "));
}

/// Emit frames for every construction at the configured grid and times.
fn simulate(config: &ScenarioConfig, out_dir: &std::path::Path) -> Result<()> {
    let cavity = config.cavity_core()?;
    let modes = config.mode_bank_core(&cavity)?;
    let amps = config.amplitudes(&modes);
    let n_z = config.grid.n_z;
    let n_t = config.grid.n_t;
    let grid: Vec<f64> = (0..n_z)
        .map(|i| cavity.length * i as f64 / (n_z - 1) as f64)
        .collect();
    let times: Vec<f64> = (0..n_t)
        .map(|j| {
            config.grid.t_start
                + (config.grid.t_stop - config.grid.t_start) * j as f64 / (n_t - 1) as f64
        })
        .collect();

    let spec = GeneralFieldSpec::new(
        modes
            .iter()
            .zip(&amps)
            .map(|(m, a)| GeneralMode {
                amp_general: m.amp_general * m.amp_time,
                time: a.clone(),
                profile: SpatialProfile::sine_zero_mean(m.wavenumber),
            })
            .collect(),
    );

    let mut sol1 = Vec::with_capacity(n_t);
    let mut sol2 = Vec::with_capacity(n_t);
    let mut combined = Vec::with_capacity(n_t);
    let mut general = Vec::with_capacity(n_t);
    let mut density = String::new();
    for &t in &times {
        let f1 = fields_sol1(&modes, &amps, &grid, t, &cavity)?;
        let f2 = fields_sol2(&modes, &amps, &grid, t, &cavity)?;
        combined.push(combine_complex(&f1, &f2)?);
        general.push(general_fields(&spec, &grid, t, &cavity)?);
        sol1.push(f1);
        sol2.push(f2);
        if amps.iter().all(|a| a.is_real_field()) {
            density.push_str(&energy_density_w(&spec, &grid, t, &cavity)?.to_columnar());
            density.push('\n');
        }
    }
    emit::write_frames("sol1", &sol1, out_dir)?;
    emit::write_frames("sol2", &sol2, out_dir)?;
    emit::write_frames("combined", &combined, out_dir)?;
    emit::write_frames("general", &general, out_dir)?;
    if !density.is_empty() {
        std::fs::write(out_dir.join("density_general.dat"), density)?;
    }
    Ok(())
}

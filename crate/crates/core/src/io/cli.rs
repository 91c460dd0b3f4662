//! `mgm` command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{load_config, RunConfig};
use super::output::{write_result, write_result_to, Metadata, Output};
use crate::dynamics::{efficiency_closed_form, integrate, IntegrateOptions};
use crate::error::{Error, Result};
use crate::experiments::{
    monte_carlo_imperfection, multi_pulse_fifo, run_memory, run_sweep, uniform_vs_random_compare, SweepAxis,
};
use crate::model::feasibility_check;
use crate::spectrum::{bias_sweep_map, critical_kappa, eigenmodes, find_dips, reflection_trace};
use crate::units::{mhz, to_mhz, to_ns};

/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "MGM_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "mgm", version, about = "Magnon gradient memory and dark-mode spectroscopy simulator")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Config file (key = value with [sections]); defaults to the experiment values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file. Falls back to $MGM_OUTPUT_DIR/<subcommand>.csv, then stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for parallel sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection spectrum r(ω) with phase and group delay.
    Spectrum(Common),
    /// |r| map against bias field or field gradient.
    SweepField(Common),
    /// Time-domain trace for the configured drive.
    Dynamics(Common),
    /// Store and retrieve the configured pulse(s); report the efficiency.
    Memory(Common),
    /// Efficiency and storage time along one parameter axis.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// delta_omega | g | kappa_m | n | detuning
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated values (MHz, or a count for n).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Efficiency statistics under random coupling/frequency errors.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        /// Relative spread of the uniform perturbation.
        #[arg(long)]
        spread: Option<f64>,
    },
    /// Critical coupling, closed-form efficiency and feasibility.
    Design(Common),
    /// Feasibility constraints of the configured memory.
    Feasibility(Common),
    /// Uniform against randomly filled comb.
    Compare(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::SweepField(_) => "sweep-field",
            Command::Dynamics(_) => "dynamics",
            Command::Memory(_) => "memory",
            Command::Sweep { .. } => "sweep",
            Command::Montecarlo { .. } => "montecarlo",
            Command::Design(_) => "design",
            Command::Feasibility(_) => "feasibility",
            Command::Compare(_) => "compare",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Spectrum(c)
            | Command::SweepField(c)
            | Command::Dynamics(c)
            | Command::Memory(c)
            | Command::Design(c)
            | Command::Feasibility(c)
            | Command::Compare(c) => c,
            Command::Sweep { common, .. } | Command::Montecarlo { common, .. } => common,
        }
    }
}

/// Where CSV output goes.
fn output_path(name: &str, common: &Common) -> Option<PathBuf> {
    common.out.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_VAR)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(format!("{name}.csv")))
    })
}

fn emit(
    name: &str,
    common: &Common,
    output: &Output<'_>,
    meta: &Metadata,
    stdout: &mut dyn Write,
) -> Result<Option<PathBuf>> {
    match output_path(name, common) {
        Some(p) => {
            write_result(&p, output, meta)?;
            Ok(Some(p))
        }
        None => {
            write_result_to(stdout, output, meta)?;
            Ok(None)
        }
    }
}

fn emit_text(name: &str, common: &Common, text: &str, stdout: &mut dyn Write) -> Result<()> {
    stdout.write_all(text.as_bytes())?;
    if let Some(p) = common.out.clone() {
        std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    } else if output_path(name, common).is_some() {
        let p = output_path(name, common).unwrap_or_default().with_extension("txt");
        std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn resolve(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.run.seed = s;
    }
    if let Some(w) = common.workers {
        cfg.run.workers = Some(w);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let name = cmd.name();
    let common = cmd.common();
    let mut cfg = resolve(common)?;
    match cmd {
        Command::Sweep { axis, values, .. } => {
            if let Some(a) = axis {
                cfg.sweep.axis = SweepAxis::parse(a)?;
            }
            if let Some(v) = values {
                cfg.sweep.values = v.clone();
            }
        }
        Command::Montecarlo { samples, spread, .. } => {
            if let Some(n) = samples {
                cfg.montecarlo.samples = *n;
            }
            if let Some(s) = spread {
                cfg.montecarlo.spread = *s;
            }
        }
        _ => {}
    }
    cfg.validate()?;
    // Results do not depend on the worker count, so neither does the file.
    let mut echoed = cfg.clone();
    echoed.run.workers = None;
    let meta = Metadata::new(name, Some(cfg.run.seed), &echoed.to_text());
    let system = cfg.system_config()?;

    let written = match cmd {
        Command::Spectrum(_) => {
            let grid = cfg.spectrum_grid();
            let s = reflection_trace(&system, &grid)?;
            // Compare each point with half a comb spacing on either side.
            let window = ((0.5 * cfg.delta_omega() / (grid[1] - grid[0])).round() as usize).max(1);
            let dips = find_dips(&s.magnitude, window).len();
            let modes = eigenmodes(&system)?;
            writeln!(stderr, "{} dips; {} eigenmodes", dips, modes.len())?;
            emit(name, common, &Output::Spectrum(&s), &meta, stdout)?
        }
        Command::SweepField(_) => {
            let map = bias_sweep_map(&system, &cfg.field_map()?, cfg.field.axis, &cfg.field_values()?, &cfg.spectrum_grid())?;
            emit(name, common, &Output::SweepMap(&map), &meta, stdout)?
        }
        Command::Dynamics(_) => {
            let opts = IntegrateOptions::until(cfg.t_end()?).output_step(cfg.output_step());
            let tr = integrate(&system, &cfg.drive_spec()?, &opts)?;
            emit(name, common, &Output::Trace(&tr), &meta, stdout)?
        }
        Command::Memory(_) => {
            let drive = cfg.drive_spec()?;
            let period = cfg.storage_time()?;
            if drive.pulses.len() > 1 {
                let run = multi_pulse_fifo(&system, &drive, period, cfg.t_end()?, cfg.output_step())?;
                let r = &run.report;
                let peaks: Vec<String> = r.peak_times.iter().map(|t| format!("{:.2}", to_ns(*t))).collect();
                writeln!(
                    stderr,
                    "retrieval peaks at [{}] ns; separation {:.2} ns (input {:.2} ns); in order: {}",
                    peaks.join(", "),
                    to_ns(r.separation_out),
                    to_ns(r.separation_in),
                    r.in_order
                )?;
                emit(name, common, &Output::Trace(&run.trace), &meta, stdout)?
            } else {
                let run = run_memory(&system, &drive, period, cfg.t_end()?, cfg.output_step())?;
                let r = &run.report;
                writeln!(
                    stderr,
                    "zeta = {:.4}; retrieval peak {:.2} ns after the pulse centre; zone III/II = {:.4}",
                    r.zeta,
                    to_ns(r.storage_delay),
                    r.second_echo_ratio()
                )?;
                emit(name, common, &Output::Trace(&run.trace), &meta, stdout)?
            }
        }
        Command::Sweep { .. } => {
            let res = run_sweep(&cfg.memory_params()?, cfg.sweep.axis, &cfg.sweep_values(), false, cfg.run.workers)?;
            let failed = res.points.iter().filter(|p| p.is_err()).count();
            writeln!(stderr, "{} points, {} failed", res.points.len(), failed)?;
            emit(name, common, &Output::Sweep(&res), &meta, stdout)?
        }
        Command::Montecarlo { .. } => {
            let mc = monte_carlo_imperfection(
                &cfg.memory_params()?,
                cfg.montecarlo.spread,
                cfg.montecarlo.samples,
                cfg.run.seed,
                cfg.run.workers,
            )?;
            writeln!(stderr, "mean zeta = {:.4}, std = {:.4} over {} samples", mc.mean, mc.std, mc.samples.len())?;
            emit(name, common, &Output::MonteCarlo(&mc), &meta, stdout)?
        }
        Command::Design(_) => {
            let dw = cfg.delta_omega();
            let crit = critical_kappa(&system, dw)?;
            let mut text = String::new();
            text.push_str(&format!("critical kappa_a1/2pi = {:.6} MHz\n", to_mhz(crit.kappa_ext)));
            text.push_str(&format!("lossless kappa_a1/2pi = {:.6} MHz\n", to_mhz(crit.kappa_ext_lossless)));
            text.push_str(&format!("configured kappa_a1/2pi = {:.6} MHz\n", to_mhz(system.cavity.kappa_ext)));
            text.push_str(&format!("storage time = {:.3} ns\n", to_ns(cfg.storage_time()?)));
            match efficiency_closed_form(
                system.rms_coupling(),
                dw,
                mhz(cfg.system.kappa_m_mhz),
                mhz(cfg.system.kappa_a0_mhz),
                crate::units::ns(cfg.drive.duration_ns),
            ) {
                Ok(c) => text.push_str(&format!(
                    "closed-form zeta = {:.4} (F = {:.3}, C = {:.3}, G = {:.3})\n",
                    c.zeta, c.finesse, c.cooperativity, c.gain
                )),
                Err(e) => text.push_str(&format!("closed-form zeta unavailable: {e}\n")),
            }
            text.push_str(&format!("{}\n", feasibility_check(&system, dw)));
            emit_text(name, common, &text, stdout)?;
            None
        }
        Command::Feasibility(_) => {
            let text = format!("{}\n", feasibility_check(&system, cfg.delta_omega()));
            emit_text(name, common, &text, stdout)?;
            None
        }
        Command::Compare(_) => {
            let c = uniform_vs_random_compare(&cfg.memory_params()?, cfg.run.seed)?;
            writeln!(
                stderr,
                "zeta uniform {:.4}, random {:.4}; zone II ratio {:.3}",
                c.uniform.run.report.zeta, c.random.run.report.zeta, c.zone2_ratio
            )?;
            emit(name, common, &Output::Compare(&c), &meta, stdout)?
        }
    };
    if let Some(p) = written {
        writeln!(stderr, "wrote {}", p.display())?;
    }
    Ok(())
}

/// Exit code for a library error: 2 for numerical failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point used by the `mgm` binary.
pub fn cli_dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("mgm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&[]).0, EXIT_USAGE);
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["memory", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn design_prints_critical_coupling() {
        let (code, out, _) = run(&["design"]);
        assert_eq!(code, 0);
        assert!(out.contains("critical kappa_a1/2pi = 34.41"), "{out}");
        assert!(out.contains("delta_omega >= 2pi*kappa_m"));
    }

    #[test]
    fn validation_error_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.cfg");
        std::fs::write(&p, "kappa_m_mhz = -1\n").unwrap();
        let (code, _, err) = run(&["feasibility", "--config", p.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("system.kappa_m_mhz"));
        let (code, _, _) = run(&["spectrum", "--config", "/nonexistent/x.cfg"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn numerical_error_exit_code() {
        assert_eq!(exit_code(&Error::StepControl { time: 0.0, error: 1.0, tolerance: 0.1 }), 2);
        assert_eq!(exit_code(&Error::GridTooCoarse { index: 1, jump: 4.0 }), 2);
        assert_eq!(exit_code(&Error::EmptySystem), 1);
    }
}

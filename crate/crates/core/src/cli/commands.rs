//! Subcommand bodies. Each writes a human-readable report to `out` and
//! returns the process exit code; errors map to exit code 1 in `main`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::freq::{
    check_gain_conditions, passivity_margin_sweep, scattering_sweep, virtual_wall_bound,
    CouplingDomain, FrequencyGrid, PassivityReport, ScatterInputs, ScatterSweep,
    DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MIN,
};
use crate::model::{
    validate_scenario, ControllerLaw, ImpedanceConvention, Scenario, Side, WallMode,
};
use crate::sim::{
    energy_monitor, run_simulation, tracking_metrics, SimulationTrace, DEFAULT_ENERGY_THRESHOLD,
};

use super::config::{dump_config, parse_config};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_VIOLATED: u8 = 2;

/// Inputs shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub config: PathBuf,
    pub out: PathBuf,
    /// Sweep size. A single point evaluates only the Nyquist frequency.
    pub grid_points: usize,
    pub omega_min: f64,
    pub force_magnitude: Option<f64>,
    pub domain: CouplingDomain,
    pub dump_config: bool,
}

impl RunConfig {
    pub fn new(config: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            config: config.into(),
            out: out.into(),
            grid_points: DEFAULT_GRID_POINTS,
            omega_min: DEFAULT_OMEGA_MIN,
            force_magnitude: None,
            domain: CouplingDomain::Continuous,
            dump_config: false,
        }
    }

    /// Parses the scenario file and applies command-line overrides.
    pub fn load_scenario(&self) -> Result<Scenario> {
        let mut scenario = parse_config(&self.config)?;
        if let Some(magnitude) = self.force_magnitude {
            for seg in &mut scenario.operator.exogenous_force {
                seg.magnitude = magnitude;
            }
            scenario = validate_scenario(scenario).map_err(Error::Validation)?;
        }
        Ok(scenario)
    }

    pub fn grid(&self, period: f64) -> Result<FrequencyGrid> {
        match self.grid_points {
            0 => Err(Error::InvalidGrid("grid size must be at least 1".into())),
            1 => FrequencyGrid::new(vec![std::f64::consts::PI / period]),
            n => FrequencyGrid::up_to_nyquist(period, self.omega_min, n),
        }
    }

    fn prepare(&self, out: &mut dyn Write) -> Result<Scenario> {
        let scenario = self.load_scenario()?;
        fs::create_dir_all(&self.out)?;
        if self.dump_config {
            fs::write(self.out.join("scenario.cfg"), dump_config(&scenario))?;
        }
        write_header(out, &self.config, &scenario)?;
        Ok(scenario)
    }

    fn scatter_inputs(&self, scenario: &Scenario) -> ScatterInputs {
        ScatterInputs {
            master: scenario.master,
            slave: scenario.slave,
            law: scenario.law,
            alpha: scenario.sampling.alpha,
            period: scenario.sampling.period,
            domain: self.domain,
            convention: ImpedanceConvention::Impedance,
        }
    }
}

fn write_header(out: &mut dyn Write, path: &Path, scenario: &Scenario) -> Result<()> {
    writeln!(out, "scenario: {}", path.display())?;
    for line in dump_config(scenario).lines() {
        writeln!(out, "  {line}")?;
    }
    writeln!(out)?;
    Ok(())
}

fn side_reports(scenario: &Scenario, grid: &FrequencyGrid) -> Result<[PassivityReport; 2]> {
    let report = |side| {
        passivity_margin_sweep(
            &scenario.law,
            side,
            scenario.sampling.period,
            scenario.sampling.alpha,
            grid,
            scenario.robot(side),
        )
    };
    Ok([report(Side::Master)?, report(Side::Slave)?])
}

fn write_report(out: &mut dyn Write, r: &PassivityReport) -> Result<()> {
    let verdict = |ok| if ok { "passive" } else { "violated" };
    writeln!(out, "[{}]", r.side)?;
    writeln!(
        out,
        "  sweep sup        = {} at omega = {} rad/s",
        r.sweep_sup, r.sweep_argmax_omega
    )?;
    writeln!(out, "  closed form      = {}", r.closed_form_bound)?;
    writeln!(out, "  robot damping    = {}", r.robot_damping)?;
    writeln!(
        out,
        "  sweep margin     = {} ({})",
        r.sweep_margin(),
        verdict(r.passive_by_sweep)
    )?;
    writeln!(
        out,
        "  closed margin    = {} ({})",
        r.closed_form_margin(),
        verdict(r.passive_by_closed_form)
    )?;
    if r.discrepancy_flag {
        writeln!(
            out,
            "  DISCREPANCY: sweep sup {} vs closed form {} (relative gap {:.4})",
            r.sweep_sup,
            r.closed_form_bound,
            r.relative_discrepancy()
        )?;
    }
    Ok(())
}

/// Frequency-domain passivity check of both sides.
///
/// Exit 0 when both sides are passive by sweep, 2 otherwise.
pub fn cmd_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let scenario = cfg.prepare(out)?;
    let grid = cfg.grid(scenario.sampling.period)?;
    let reports = side_reports(&scenario, &grid)?;
    for r in &reports {
        write_report(out, r)?;
    }

    writeln!(out, "gain conditions:")?;
    for d in check_gain_conditions(&scenario.law, &scenario.delay) {
        writeln!(out, "  {d}")?;
    }

    let wall = &scenario.environment;
    if wall.mode == WallMode::Spring {
        let bound = virtual_wall_bound(wall.stiffness, 0.0, scenario.sampling.period);
        let damping = scenario.slave.damping;
        writeln!(
            out,
            "virtual wall: k_wall T/2 + b_wall = {bound}, slave damping = {damping} ({})",
            if damping > bound {
                "sufficient"
            } else {
                "insufficient"
            }
        )?;
    }

    let passive = reports.iter().all(|r| r.passive_by_sweep);
    writeln!(
        out,
        "verdict: {}",
        if passive { "passive" } else { "violated" }
    )?;
    Ok(if passive { EXIT_OK } else { EXIT_VIOLATED })
}

/// Writes `sweep_rhs.csv` and `sweep_sigma.csv` and prints a summary.
pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let scenario = cfg.prepare(out)?;
    let grid = cfg.grid(scenario.sampling.period)?;
    let [master, slave] = side_reports(&scenario, &grid)?;

    let mut csv = String::from("omega,rhs_master,rhs_slave\n");
    for (m, s) in master.per_omega_rhs.iter().zip(&slave.per_omega_rhs) {
        let _ = writeln!(csv, "{},{},{}", m.0, m.1, s.1);
    }
    fs::write(cfg.out.join("sweep_rhs.csv"), csv)?;

    let scatter = scattering_sweep(&grid, &cfg.scatter_inputs(&scenario))?;
    fs::write(cfg.out.join("sweep_sigma.csv"), sigma_csv(&scatter))?;

    for r in [&master, &slave] {
        writeln!(
            out,
            "{}: sup = {} at omega = {} rad/s, damping = {} -> {}",
            r.side,
            r.sweep_sup,
            r.sweep_argmax_omega,
            r.robot_damping,
            if r.passive_by_sweep {
                "passive"
            } else {
                "violated"
            }
        )?;
    }
    write_sigma_summary(out, &scatter)?;
    Ok(EXIT_OK)
}

/// Scattering-matrix sweep. Exit 0 when `sigma_max <= 1` everywhere, 2 otherwise.
pub fn cmd_scatter(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let scenario = cfg.prepare(out)?;
    let grid = cfg.grid(scenario.sampling.period)?;
    let scatter = scattering_sweep(&grid, &cfg.scatter_inputs(&scenario))?;

    let mut csv =
        String::from("omega,sigma_max,s11_re,s11_im,s12_re,s12_im,s21_re,s21_im,s22_re,s22_im\n");
    for p in &scatter.samples {
        let s = &p.s;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            p.omega,
            p.sigma_max,
            s[0][0].re,
            s[0][0].im,
            s[0][1].re,
            s[0][1].im,
            s[1][0].re,
            s[1][0].im,
            s[1][1].re,
            s[1][1].im
        );
    }
    fs::write(cfg.out.join("scatter.csv"), csv)?;
    write_sigma_summary(out, &scatter)?;
    Ok(if scatter.passive {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    })
}

fn sigma_csv(scatter: &ScatterSweep) -> String {
    let mut csv = String::from("omega,sigma_max\n");
    for p in &scatter.samples {
        let _ = writeln!(csv, "{},{}", p.omega, p.sigma_max);
    }
    csv
}

fn write_sigma_summary(out: &mut dyn Write, scatter: &ScatterSweep) -> Result<()> {
    writeln!(
        out,
        "scattering: max sigma = {} at omega = {} rad/s -> {}",
        scatter.worst_sigma,
        scatter.worst_omega,
        if scatter.passive { "passive" } else { "active" }
    )?;
    Ok(())
}

/// Runs the time-domain simulation and writes the trace and plot data.
///
/// Exit 2 when the run diverges.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<u8> {
    let scenario = cfg.prepare(out)?;
    let trace = match run_simulation(&scenario) {
        Ok(trace) => trace,
        Err(Error::Divergence { time }) => {
            writeln!(out, "simulation diverged at t = {time} s")?;
            return Ok(EXIT_VIOLATED);
        }
        Err(e) => return Err(e),
    };
    write_trace_files(&cfg.out, &trace)?;

    let metrics = tracking_metrics(&trace);
    let energy = energy_monitor(&trace, DEFAULT_ENERGY_THRESHOLD);
    let mut report = String::new();
    let _ = writeln!(report, "samples                = {}", trace.len());
    let _ = writeln!(report, "scenario sha256        = {}", trace.scenario_hash);
    let _ = writeln!(
        report,
        "max |q_m - alpha q_s|  = {}",
        metrics.max_abs_position_error
    );
    let _ = writeln!(
        report,
        "final position error   = {}",
        metrics.final_position_error
    );
    let _ = writeln!(
        report,
        "max |q_m|              = {}",
        metrics.max_abs_master_position
    );
    let _ = writeln!(
        report,
        "max |F_m - F_s|        = {}",
        metrics.max_abs_force_error
    );
    let _ = writeln!(report, "min cumulative energy  = {}", energy.min_energy);
    let _ = writeln!(
        report,
        "energy verdict         = {} (threshold {})",
        if energy.passive { "passive" } else { "active" },
        energy.threshold
    );
    if let ControllerLaw::PdDissipation { .. } = scenario.law {
        let _ = writeln!(report, "note: dissipative law driven by q_local - q_remote");
    }
    fs::write(cfg.out.join("metrics.txt"), &report)?;
    out.write_all(report.as_bytes())?;
    Ok(EXIT_OK)
}

/// `trace.csv` plus the narrow plot files `positions.csv`, `forces.csv`
/// and `port_forces.csv`.
pub fn write_trace_files(dir: &Path, trace: &SimulationTrace) -> Result<()> {
    fs::write(dir.join("trace.csv"), trace.to_csv())?;
    let mut positions = String::from("t,q_m,q_s\n");
    let mut forces = String::from("t,F_m,F_s\n");
    let mut ports = String::from("t,F_h,F_e\n");
    for r in &trace.records {
        let _ = writeln!(positions, "{},{},{}", r.t, r.q_m, r.q_s);
        let _ = writeln!(forces, "{},{},{}", r.t, r.f_m, r.f_s);
        let _ = writeln!(ports, "{},{},{}", r.t, r.f_h, r.f_e);
    }
    fs::write(dir.join("positions.csv"), positions)?;
    fs::write(dir.join("forces.csv"), forces)?;
    fs::write(dir.join("port_forces.csv"), ports)?;
    Ok(())
}

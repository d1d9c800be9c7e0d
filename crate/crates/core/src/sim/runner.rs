//! Sampled-data loop: ideal samplers, channel delay, discrete controllers,
//! zero-order hold, and the continuous plant between samples.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::control::{controller_pair, error_sign, ControllerState, DelayLine};
use crate::error::{Error, Result};
use crate::model::{validate_scenario, Scenario, WallMode};

use super::plant::{PlantState, Propagator};

/// Any state magnitude above this aborts the run.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// Signals at one sample instant.
///
/// `f_m` is the force reflected against the operator, `f_s` the control
/// force applied to the slave, `f_e` the force the slave exerts on the wall.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceRecord {
    pub t: f64,
    pub q_m: f64,
    pub q_s: f64,
    pub qdot_m: f64,
    pub qdot_s: f64,
    pub f_h: f64,
    pub f_e: f64,
    pub f_m: f64,
    pub f_s: f64,
    pub energy: f64,
}

impl TraceRecord {
    pub const CSV_HEADER: &'static str = "t,q_m,q_s,qdot_m,qdot_s,F_h,F_e,F_m,F_s,energy";

    /// Port power `F_h q'_m - F_e q'_s` flowing into the teleoperator.
    pub fn power(&self) -> f64 {
        self.f_h * self.qdot_m - self.f_e * self.qdot_s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub records: Vec<TraceRecord>,
    pub period: f64,
    pub alpha: f64,
    /// SHA-256 of the scenario that produced the trace.
    pub scenario_hash: String,
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.records.len() * 120);
        out.push_str(TraceRecord::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.t, r.q_m, r.q_s, r.qdot_m, r.qdot_s, r.f_h, r.f_e, r.f_m, r.f_s, r.energy
            );
        }
        out
    }
}

/// Plant state and held forces at one integration substep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstepRecord {
    pub state: PlantState,
    pub f_m_held: f64,
    pub f_s_held: f64,
}

pub fn scenario_hash(scenario: &Scenario) -> String {
    hex::encode(Sha256::digest(format!("{scenario:?}").as_bytes()))
}

pub fn run_simulation(scenario: &Scenario) -> Result<SimulationTrace> {
    run_simulation_observed(scenario, |_| {})
}

/// Like [`run_simulation`], calling `observe` before every substep.
pub fn run_simulation_observed(
    scenario: &Scenario,
    mut observe: impl FnMut(&SubstepRecord),
) -> Result<SimulationTrace> {
    let sc = validate_scenario(scenario.clone()).map_err(Error::Validation)?;
    let period = sc.sampling.period;
    let alpha = sc.sampling.alpha;
    let substeps = sc.sampling.substeps_per_period;
    let dt = period / substeps as f64;
    let samples = sc.sample_count();

    let (c_m, c_s) = controller_pair(&sc.law, alpha, period);
    let mut ctl_m = ControllerState::new(&c_m);
    let mut ctl_s = ControllerState::new(&c_s);
    let sign = error_sign(&sc.law);
    let mut to_slave = DelayLine::for_delay(sc.delay.forward, period);
    let mut to_master = DelayLine::for_delay(sc.delay.backward, period);

    let op = &sc.operator;
    let wall = sc.environment;
    let master_prop = Propagator::new(&sc.master, op.stiffness, op.damping, dt);
    let slave_free = Propagator::new(&sc.slave, 0.0, 0.0, dt);
    let slave_wall = Propagator::new(&sc.slave, wall.stiffness, 0.0, dt);

    let mut state = PlantState::default();
    let mut energy = 0.0;
    let mut records = Vec::with_capacity(samples);

    for k in 0..samples {
        let t = k as f64 * period;
        state.t = t;

        let q_m_remote = to_slave.push(state.q_m);
        let q_s_remote = to_master.push(state.q_s);
        let e_m = sign * (alpha * q_s_remote - state.q_m);
        let e_s = sign * (q_m_remote - alpha * state.q_s);
        let u_m = ctl_m.step(e_m);
        let u_s = ctl_s.step(e_s);

        let mut rec = TraceRecord {
            t,
            q_m: state.q_m,
            q_s: state.q_s,
            qdot_m: state.qdot_m,
            qdot_s: state.qdot_s,
            f_h: op.force(t, state.q_m, state.qdot_m),
            f_e: wall.contact_force(state.q_s, u_s),
            f_m: 0.0 - u_m,
            f_s: u_s,
            energy: 0.0,
        };
        energy += period * rec.power();
        rec.energy = energy;
        records.push(rec);

        if k + 1 == samples {
            break;
        }
        for j in 0..substeps {
            observe(&SubstepRecord {
                state,
                f_m_held: 0.0 - u_m,
                f_s_held: u_s,
            });
            let mid = ((k * substeps + j) as f64 + 0.5) * dt;
            let (q_m, qdot_m) =
                master_prop.advance(state.q_m, state.qdot_m, op.exogenous_at(mid) + u_m);
            let (q_s, qdot_s) = match (wall.in_contact(state.q_s), wall.mode) {
                (false, _) => slave_free.advance(state.q_s, state.qdot_s, u_s),
                (true, WallMode::Spring) => slave_wall.advance(
                    state.q_s,
                    state.qdot_s,
                    u_s + wall.stiffness * wall.contact_position,
                ),
                (true, WallMode::RigidReflect) => slave_free.advance(state.q_s, state.qdot_s, 0.0),
            };
            state = PlantState {
                q_m,
                q_s,
                qdot_m,
                qdot_s,
                t: ((k * substeps + j + 1) as f64) * dt,
            };
            if !state.is_finite_within(DIVERGENCE_LIMIT) {
                return Err(Error::Divergence { time: state.t });
            }
        }
    }

    Ok(SimulationTrace {
        records,
        period,
        alpha,
        scenario_hash: scenario_hash(&sc),
    })
}

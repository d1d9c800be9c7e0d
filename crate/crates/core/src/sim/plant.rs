//! Continuous robot dynamics between controller samples.
//!
//! Over one substep every applied force is either constant (held controller
//! output, exogenous push) or linear in the robot's own state (operator PD,
//! wall spring). Each axis is then the LTI system
//!
//! ```text
//! M q'' + (B + b) q' + k q = F
//! ```
//!
//! and is advanced with its exact discretization `x+ = Phi x + Gamma F`,
//! taken from the exponential of the augmented matrix `[[A, b], [0, 0]]·dt`.

use nalgebra::Matrix3;

use crate::model::RobotParams;

/// Positions and velocities of both robots.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlantState {
    pub q_m: f64,
    pub q_s: f64,
    pub qdot_m: f64,
    pub qdot_s: f64,
    pub t: f64,
}

impl PlantState {
    pub fn is_finite_within(&self, limit: f64) -> bool {
        [self.q_m, self.q_s, self.qdot_m, self.qdot_s]
            .iter()
            .all(|v| v.is_finite() && v.abs() <= limit)
    }
}

/// External load on one axis over a substep:
/// `force - stiffness (q - anchor) - damping q'`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AxisLoad {
    pub force: f64,
    pub stiffness: f64,
    pub anchor: f64,
    pub damping: f64,
}

impl AxisLoad {
    pub fn constant(force: f64) -> Self {
        Self {
            force,
            ..Self::default()
        }
    }

    /// Equivalent constant input once the spring anchor is folded in.
    pub fn input(&self) -> f64 {
        self.force + self.stiffness * self.anchor
    }
}

/// Exact one-step map of a mass-spring-damper under constant input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    phi: [[f64; 2]; 2],
    gamma: [f64; 2],
}

impl Propagator {
    pub fn new(robot: &RobotParams, stiffness: f64, extra_damping: f64, dt: f64) -> Self {
        let m = robot.mass;
        let c = robot.damping + extra_damping;
        #[rustfmt::skip]
        let augmented = Matrix3::new(
            0.0,             1.0,        0.0,
            -stiffness / m,  -c / m,     1.0 / m,
            0.0,             0.0,        0.0,
        ) * dt;
        let e = augmented.exp();
        Self {
            phi: [[e[(0, 0)], e[(0, 1)]], [e[(1, 0)], e[(1, 1)]]],
            gamma: [e[(0, 2)], e[(1, 2)]],
        }
    }

    pub fn for_load(robot: &RobotParams, load: &AxisLoad, dt: f64) -> Self {
        Self::new(robot, load.stiffness, load.damping, dt)
    }

    /// Advances `(q, q')` by one step under the constant input `force`.
    #[inline]
    pub fn advance(&self, q: f64, qdot: f64, force: f64) -> (f64, f64) {
        (
            self.phi[0][0] * q + self.phi[0][1] * qdot + self.gamma[0] * force,
            self.phi[1][0] * q + self.phi[1][1] * qdot + self.gamma[1] * force,
        )
    }
}

/// Advances one axis under `load` for `dt`.
pub fn advance_axis(
    robot: &RobotParams,
    load: &AxisLoad,
    q: f64,
    qdot: f64,
    dt: f64,
) -> (f64, f64) {
    Propagator::for_load(robot, load, dt).advance(q, qdot, load.input())
}

/// Advances both robots by `dt`. The two axes only interact through the
/// held controller forces, which are part of the loads.
pub fn plant_substep(
    state: &PlantState,
    master: &RobotParams,
    slave: &RobotParams,
    master_load: &AxisLoad,
    slave_load: &AxisLoad,
    dt: f64,
) -> PlantState {
    let (q_m, qdot_m) = advance_axis(master, master_load, state.q_m, state.qdot_m, dt);
    let (q_s, qdot_s) = advance_axis(slave, slave_load, state.q_s, state.qdot_s, dt);
    PlantState {
        q_m,
        q_s,
        qdot_m,
        qdot_s,
        t: state.t + dt,
    }
}

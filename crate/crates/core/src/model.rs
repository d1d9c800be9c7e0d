//! Domain types for the master/slave teleoperation scenario.
//!
//! Everything here is a plain value type. A [`Scenario`] bundles the two
//! robots, the operator and environment terminations, the controller family
//! and the sampling/delay configuration. [`validate_scenario`] checks every
//! field-level invariant and reports all violations at once.

use std::fmt;

use num_complex::Complex64;

/// Mass/damping model of a single 1-DOF robot: `M q'' + B q' = F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotParams {
    /// Inertia (kg·m² rotary, kg linear).
    pub mass: f64,
    /// Viscous damping (N·m·s/rad or N·s/m).
    pub damping: f64,
}

/// How a robot's port characteristic is expressed in the hybrid matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImpedanceConvention {
    /// `Z(s) = M s + B` (force per velocity).
    #[default]
    Impedance,
    /// `Z(s) = 1 / (M s + B)`.
    Reciprocal,
}

impl RobotParams {
    pub fn new(mass: f64, damping: f64) -> Self {
        Self { mass, damping }
    }

    /// Evaluates `Z(jω) = M·jω + B`.
    pub fn impedance(&self, omega: f64) -> Complex64 {
        robot_impedance(self, omega)
    }

    /// Port characteristic under the requested convention.
    pub fn port_characteristic(&self, omega: f64, convention: ImpedanceConvention) -> Complex64 {
        let z = self.impedance(omega);
        match convention {
            ImpedanceConvention::Impedance => z,
            ImpedanceConvention::Reciprocal => z.inv(),
        }
    }
}

/// `Z(jω) = mass·jω + damping`.
pub fn robot_impedance(robot: &RobotParams, omega: f64) -> Complex64 {
    Complex64::new(robot.damping, robot.mass * omega)
}

/// One piece of a piecewise-constant force profile, active on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSegment {
    pub start: f64,
    pub end: f64,
    pub magnitude: f64,
}

/// Operator model: an exogenous force plus a PD pull toward zero,
/// `F_h = F*(t) - k·q - b·q'`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationModel {
    pub stiffness: f64,
    pub damping: f64,
    pub exogenous_force: Vec<ForceSegment>,
}

impl TerminationModel {
    /// Value of the exogenous force at time `t`.
    pub fn exogenous_at(&self, t: f64) -> f64 {
        self.exogenous_force
            .iter()
            .filter(|seg| seg.start <= t && t < seg.end)
            .fold(0.0, |acc, seg| acc + seg.magnitude)
    }

    /// Total force the termination applies at position `q`, velocity `qdot`.
    pub fn force(&self, t: f64, q: f64, qdot: f64) -> f64 {
        self.exogenous_at(t) - self.stiffness * q - self.damping * qdot
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallMode {
    /// Penalty spring `k·(q_s - contact_position)` while penetrating.
    Spring,
    /// The wall pushes back with the full held slave control force.
    RigidReflect,
}

impl WallMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WallMode::Spring => "spring",
            WallMode::RigidReflect => "rigid_reflect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallModel {
    pub contact_position: f64,
    pub stiffness: f64,
    pub mode: WallMode,
}

impl WallModel {
    pub fn in_contact(&self, q_s: f64) -> bool {
        q_s > self.contact_position
    }

    /// Force the slave exerts on the wall (positive while pushing into it).
    pub fn contact_force(&self, q_s: f64, held_slave_force: f64) -> f64 {
        if !self.in_contact(q_s) {
            return 0.0;
        }
        match self.mode {
            WallMode::Spring => self.stiffness * (q_s - self.contact_position),
            WallMode::RigidReflect => held_slave_force,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Master,
    Slave,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Master => "master",
            Side::Slave => "slave",
        }
    }

    pub fn other(&self) -> Side {
        match self {
            Side::Master => Side::Slave,
            Side::Slave => Side::Master,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three position-error-based controller families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControllerLaw {
    /// Proportional coupling plus damping injection.
    PLike {
        k_m: f64,
        k_s: f64,
        l_m: f64,
        l_s: f64,
    },
    /// Proportional coupling plus derivative coupling weighted by the
    /// delay-compensation gains `gamma_m`, `gamma_s`.
    PdLike {
        kd: f64,
        k_m: f64,
        k_s: f64,
        gamma_m: f64,
        gamma_s: f64,
    },
    /// PD coupling with extra dissipation.
    PdDissipation {
        kv: f64,
        kp: f64,
        kd: f64,
        p_eps: f64,
    },
}

impl ControllerLaw {
    pub fn p_like(k: f64, l: f64) -> Self {
        ControllerLaw::PLike {
            k_m: k,
            k_s: k,
            l_m: l,
            l_s: l,
        }
    }

    pub fn pd_like(kd: f64, k: f64, gamma: f64) -> Self {
        ControllerLaw::PdLike {
            kd,
            k_m: k,
            k_s: k,
            gamma_m: gamma,
            gamma_s: gamma,
        }
    }

    pub fn pd_dissipation(kv: f64, kp: f64, kd: f64, p_eps: f64) -> Self {
        ControllerLaw::PdDissipation { kv, kp, kd, p_eps }
    }

    /// Identifier used in config files and reports.
    pub fn type_name(&self) -> &'static str {
        match self {
            ControllerLaw::PLike { .. } => "p_like",
            ControllerLaw::PdLike { .. } => "pd_like",
            ControllerLaw::PdDissipation { .. } => "pd_dissipation",
        }
    }

    /// Named gains, for validation and reporting.
    pub fn gains(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ControllerLaw::PLike { k_m, k_s, l_m, l_s } => {
                vec![("K_m", k_m), ("K_s", k_s), ("L_m", l_m), ("L_s", l_s)]
            }
            ControllerLaw::PdLike {
                kd,
                k_m,
                k_s,
                gamma_m,
                gamma_s,
            } => vec![
                ("Kd", kd),
                ("K_m", k_m),
                ("K_s", k_s),
                ("gamma_m", gamma_m),
                ("gamma_s", gamma_s),
            ],
            ControllerLaw::PdDissipation { kv, kp, kd, p_eps } => {
                vec![("Kv", kv), ("Kp", kp), ("Kd", kd), ("Peps", p_eps)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub period: f64,
    /// Position scaling factor between master and slave.
    pub alpha: f64,
    pub substeps_per_period: usize,
}

/// Constant channel delays. `nu` is an upper bound on the round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayConfig {
    pub forward: f64,
    pub backward: f64,
    pub nu: f64,
}

impl DelayConfig {
    pub fn none() -> Self {
        Self {
            forward: 0.0,
            backward: 0.0,
            nu: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub master: RobotParams,
    pub slave: RobotParams,
    pub operator: TerminationModel,
    pub environment: WallModel,
    pub law: ControllerLaw,
    pub sampling: SamplingConfig,
    pub delay: DelayConfig,
    pub duration: f64,
}

impl Scenario {
    pub fn robot(&self, side: Side) -> &RobotParams {
        match side {
            Side::Master => &self.master,
            Side::Slave => &self.slave,
        }
    }

    /// Number of recorded samples, including `t = 0`.
    pub fn sample_count(&self) -> usize {
        (self.duration / self.sampling.period).round() as usize + 1
    }
}

/// A single violated invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub field: String,
    pub message: String,
}

impl ValidationError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Returns the scenario unchanged when every invariant holds, otherwise one
/// error per violation.
pub fn validate_scenario(raw: Scenario) -> Result<Scenario, Vec<ValidationError>> {
    let mut errors = Vec::new();

    for (name, robot) in [("master", &raw.master), ("slave", &raw.slave)] {
        if !(robot.mass > 0.0 && robot.mass.is_finite()) {
            errors.push(ValidationError::new(
                format!("{name}.mass"),
                "mass must be positive",
            ));
        }
        if !(robot.damping >= 0.0 && robot.damping.is_finite()) {
            errors.push(ValidationError::new(
                format!("{name}.damping"),
                "damping must be non-negative",
            ));
        }
    }

    let op = &raw.operator;
    if !(op.stiffness >= 0.0 && op.stiffness.is_finite()) {
        errors.push(ValidationError::new(
            "operator.stiffness",
            "stiffness must be non-negative",
        ));
    }
    if !(op.damping >= 0.0 && op.damping.is_finite()) {
        errors.push(ValidationError::new(
            "operator.damping",
            "damping must be non-negative",
        ));
    }
    for seg in &op.exogenous_force {
        if !(seg.start < seg.end) || !seg.magnitude.is_finite() {
            errors.push(ValidationError::new(
                "operator.force",
                "segment start must precede its end",
            ));
        }
    }
    let mut segs: Vec<_> = op.exogenous_force.clone();
    segs.sort_by(|a, b| a.start.total_cmp(&b.start));
    if segs.windows(2).any(|w| w[1].start < w[0].end) {
        errors.push(ValidationError::new(
            "operator.force",
            "force segments must not overlap",
        ));
    }

    let wall = &raw.environment;
    if !wall.contact_position.is_finite() {
        errors.push(ValidationError::new(
            "wall.position",
            "position must be finite",
        ));
    }
    match wall.mode {
        WallMode::Spring if !(wall.stiffness > 0.0 && wall.stiffness.is_finite()) => {
            errors.push(ValidationError::new(
                "wall.stiffness",
                "stiffness must be positive for a spring wall",
            ));
        }
        WallMode::RigidReflect if !(wall.stiffness >= 0.0) => {
            errors.push(ValidationError::new(
                "wall.stiffness",
                "stiffness must be non-negative",
            ));
        }
        _ => {}
    }

    for (name, value) in raw.law.gains() {
        let field = format!("controller.{name}");
        if name.starts_with("gamma") {
            if !(value > 0.0 && value <= 1.0) {
                errors.push(ValidationError::new(field, "gamma must lie in (0,1]"));
            }
        } else if !(value >= 0.0 && value.is_finite()) {
            errors.push(ValidationError::new(field, "gain must be non-negative"));
        }
    }

    let s = &raw.sampling;
    if !(s.period > 0.0 && s.period.is_finite()) {
        errors.push(ValidationError::new(
            "sampling.period",
            "period must be positive",
        ));
    }
    if !(s.alpha > 0.0 && s.alpha.is_finite()) {
        errors.push(ValidationError::new(
            "sampling.alpha",
            "alpha must be positive",
        ));
    }
    if s.substeps_per_period < 1 {
        errors.push(ValidationError::new(
            "sampling.substeps",
            "substeps must be at least 1",
        ));
    }

    let d = &raw.delay;
    if !(d.forward >= 0.0 && d.forward.is_finite()) {
        errors.push(ValidationError::new(
            "delay.t1",
            "delay must be non-negative",
        ));
    }
    if !(d.backward >= 0.0 && d.backward.is_finite()) {
        errors.push(ValidationError::new(
            "delay.t2",
            "delay must be non-negative",
        ));
    }
    if !(d.nu >= d.forward + d.backward) {
        errors.push(ValidationError::new(
            "delay.nu",
            "nu must bound the round-trip delay t1 + t2",
        ));
    }

    if !(raw.duration > 0.0 && raw.duration.is_finite()) {
        errors.push(ValidationError::new(
            "duration",
            "duration must be positive",
        ));
    }

    if errors.is_empty() {
        Ok(raw)
    } else {
        Err(errors)
    }
}

/// Reference scenarios built from the published simulation study.
///
/// Both robots use the admittance `2.2 / (3.5 s + 4)`, read as mass
/// `3.5/2.2` and damping `4/2.2`. The operator is a PD pull toward zero
/// (`k = 10`, `b = 1`) plus a step force on `[10 s, 20 s)`; the wall sits at
/// 4 rad. Force magnitude and wall stiffness are not published and are set
/// here so the slave actually reaches the wall.
pub mod presets {
    use super::*;

    pub const ROBOT_MASS: f64 = 3.5 / 2.2;
    pub const ROBOT_DAMPING: f64 = 4.0 / 2.2;
    pub const OPERATOR_STIFFNESS: f64 = 10.0;
    pub const OPERATOR_DAMPING: f64 = 1.0;
    pub const FORCE_START: f64 = 10.0;
    pub const FORCE_END: f64 = 20.0;
    /// Fallback magnitude when nothing is configured.
    pub const DEFAULT_FORCE_MAGNITUDE: f64 = 1.0;
    /// Magnitude used by the bundled reference runs. With the operator's
    /// 10 N·m/rad pull a push must exceed 40 N·m to reach 4 rad.
    pub const REFERENCE_FORCE_MAGNITUDE: f64 = 50.0;
    pub const WALL_POSITION: f64 = 4.0;
    pub const WALL_STIFFNESS: f64 = 1000.0;
    pub const DURATION: f64 = 40.0;
    pub const SUBSTEPS: usize = 100;

    pub fn robot() -> RobotParams {
        RobotParams::new(ROBOT_MASS, ROBOT_DAMPING)
    }

    pub fn operator(magnitude: f64) -> TerminationModel {
        TerminationModel {
            stiffness: OPERATOR_STIFFNESS,
            damping: OPERATOR_DAMPING,
            exogenous_force: vec![ForceSegment {
                start: FORCE_START,
                end: FORCE_END,
                magnitude,
            }],
        }
    }

    pub fn wall() -> WallModel {
        WallModel {
            contact_position: WALL_POSITION,
            stiffness: WALL_STIFFNESS,
            mode: WallMode::Spring,
        }
    }

    fn scenario(law: ControllerLaw, period: f64, nu: f64, magnitude: f64) -> Scenario {
        Scenario {
            master: robot(),
            slave: robot(),
            operator: operator(magnitude),
            environment: wall(),
            law,
            sampling: SamplingConfig {
                period,
                alpha: 1.0,
                substeps_per_period: SUBSTEPS,
            },
            delay: DelayConfig {
                forward: 0.0,
                backward: 0.0,
                nu,
            },
            duration: DURATION,
        }
    }

    /// Scenario used when a config file sets nothing.
    pub fn defaults() -> Scenario {
        scenario(
            ControllerLaw::p_like(1.0, 0.1),
            0.002,
            0.0,
            DEFAULT_FORCE_MAGNITUDE,
        )
    }

    /// `K = 1`, `L = 0.1`, `T = 0.002 s`.
    pub fn p_like() -> Scenario {
        scenario(
            ControllerLaw::p_like(1.0, 0.1),
            0.002,
            0.0,
            REFERENCE_FORCE_MAGNITUDE,
        )
    }

    /// `Kd = 1`, `K = 2`, `gamma = 1`, `T = 0.005 s`.
    pub fn pd_like() -> Scenario {
        scenario(
            ControllerLaw::pd_like(1.0, 2.0, 1.0),
            0.005,
            0.0,
            REFERENCE_FORCE_MAGNITUDE,
        )
    }

    /// `Kp = 1`, `Kd = 2`, `Peps = 0.002`, `Kv = 10`, `T = 0.006 s`.
    /// `nu = 4` is the round-trip bound for which `Kd = nu/2 · Kp`.
    pub fn pd_dissipation() -> Scenario {
        scenario(
            ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
            0.006,
            4.0,
            REFERENCE_FORCE_MAGNITUDE,
        )
    }
}

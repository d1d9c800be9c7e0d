//! Frequency-domain passivity condition for sampled-data PEB teleoperation.
//!
//! For each side the robot damping must exceed
//!
//! ```text
//! rhs(w) = c · Re{(1 - e^{-jwT}) C(e^{jwT})} / (1 - cos wT)
//! ```
//!
//! over `0 < w <= pi/T`, with `c = T` for unscaled position (`alpha = 1`) and
//! `c = T (alpha + 1) / 2` otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::control::{controller_pair, DiscreteTransfer};
use crate::error::{Error, Result};
use crate::model::{ControllerLaw, RobotParams, Side};

/// Relative gap between sweep supremum and closed form beyond which the two
/// are reported as disagreeing.
pub const DISCREPANCY_TOLERANCE: f64 = 1e-2;

/// `1 - cos wT` below this is treated as the removable singularity at `w = 0`.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

pub const DEFAULT_OMEGA_MIN: f64 = 1e-3;
pub const DEFAULT_GRID_POINTS: usize = 2000;

/// Strictly increasing list of positive angular frequencies (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if omegas.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGrid(
                "frequencies must be positive and finite".into(),
            ));
        }
        if omegas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid(
                "frequencies must be strictly increasing".into(),
            ));
        }
        Ok(Self { omegas })
    }

    /// `points` log-spaced values from `min` to `max`, both endpoints exact.
    pub fn log_spaced(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidGrid("need at least 2 grid points".into()));
        }
        if !(min > 0.0 && min < max) {
            return Err(Error::InvalidGrid(format!("bad range [{min}, {max}]")));
        }
        let ratio = (max / min).ln();
        let last = points - 1;
        let omegas = (0..points)
            .map(|i| match i {
                0 => min,
                i if i == last => max,
                i => min * (ratio * i as f64 / last as f64).exp(),
            })
            .collect();
        Self::new(omegas)
    }

    /// Log-spaced from `omega_min` up to and including the Nyquist frequency.
    pub fn up_to_nyquist(period: f64, omega_min: f64, points: usize) -> Result<Self> {
        Self::log_spaced(omega_min, PI / period, points)
    }

    /// 2000 log-spaced points on `[1e-3, pi/T]`.
    pub fn default_for_period(period: f64) -> Result<Self> {
        Self::up_to_nyquist(period, DEFAULT_OMEGA_MIN, DEFAULT_GRID_POINTS)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Checks the grid against a sampling period: nothing above Nyquist and no
    /// point where the condition is singular.
    pub fn check_for_period(&self, period: f64) -> Result<()> {
        let nyquist = PI / period;
        for &w in &self.omegas {
            check_frequency(w, period, nyquist)?;
        }
        Ok(())
    }
}

fn check_frequency(omega: f64, period: f64, nyquist: f64) -> Result<f64> {
    if !(omega > 0.0) || omega > nyquist * (1.0 + 1e-12) {
        return Err(Error::InvalidGrid(format!(
            "omega = {omega} outside (0, pi/T = {nyquist}]"
        )));
    }
    let half = 0.5 * omega * period;
    let one_minus_cos = 2.0 * half.sin().powi(2);
    if one_minus_cos < SINGULARITY_THRESHOLD {
        return Err(Error::Singularity { omega });
    }
    Ok(one_minus_cos)
}

/// Right-hand side of the passivity condition at one frequency.
pub fn passivity_rhs(
    transfer: &DiscreteTransfer,
    period: f64,
    alpha: f64,
    omega: f64,
) -> Result<f64> {
    let one_minus_cos = check_frequency(omega, period, PI / period)?;
    let theta = omega * period;
    // 1 - e^{-j theta}, with the real part formed without cancellation
    let lead = Complex64::new(one_minus_cos, theta.sin());
    let c = transfer.eval(Complex64::from_polar(1.0, theta))?;
    Ok(scale_factor(period, alpha) * (lead * c).re / one_minus_cos)
}

fn scale_factor(period: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        period
    } else {
        period * (alpha + 1.0) / 2.0
    }
}

/// Closed-form damping bound of each family, as published.
///
/// * P-like: `K T + 2 L`
/// * PD-like: `K T + 2 Kd gamma_remote`
/// * PD + dissipation: `Kp T + 2 Kd - 2 Peps - 2 Kv`
pub fn closed_form_bound(law: &ControllerLaw, side: Side, period: f64) -> f64 {
    match (*law, side) {
        (ControllerLaw::PLike { k_m, l_m, .. }, Side::Master) => k_m * period + 2.0 * l_m,
        (ControllerLaw::PLike { k_s, l_s, .. }, Side::Slave) => k_s * period + 2.0 * l_s,
        (
            ControllerLaw::PdLike {
                kd, k_m, gamma_s, ..
            },
            Side::Master,
        ) => k_m * period + 2.0 * kd * gamma_s,
        (
            ControllerLaw::PdLike {
                kd, k_s, gamma_m, ..
            },
            Side::Slave,
        ) => k_s * period + 2.0 * kd * gamma_m,
        (ControllerLaw::PdDissipation { kv, kp, kd, p_eps }, _) => {
            kp * period + 2.0 * kd - 2.0 * p_eps - 2.0 * kv
        }
    }
}

/// Outcome of checking one side against the passivity condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PassivityReport {
    pub side: Side,
    pub sweep_sup: f64,
    pub sweep_argmax_omega: f64,
    pub closed_form_bound: f64,
    pub robot_damping: f64,
    pub passive_by_sweep: bool,
    pub passive_by_closed_form: bool,
    pub discrepancy_flag: bool,
    pub per_omega_rhs: Vec<(f64, f64)>,
}

impl PassivityReport {
    /// Damping left over after the sweep supremum.
    pub fn sweep_margin(&self) -> f64 {
        self.robot_damping - self.sweep_sup
    }

    pub fn closed_form_margin(&self) -> f64 {
        self.robot_damping - self.closed_form_bound
    }

    pub fn relative_discrepancy(&self) -> f64 {
        relative_gap(self.sweep_sup, self.closed_form_bound)
    }
}

fn relative_gap(sweep: f64, closed: f64) -> f64 {
    let gap = (sweep - closed).abs();
    if gap == 0.0 {
        0.0
    } else {
        gap / closed.abs()
    }
}

/// Sweeps the passivity condition for one side of `law` and compares the
/// result with the closed form.
pub fn passivity_margin_sweep(
    law: &ControllerLaw,
    side: Side,
    period: f64,
    alpha: f64,
    grid: &FrequencyGrid,
    robot: &RobotParams,
) -> Result<PassivityReport> {
    grid.check_for_period(period)?;
    let (c_m, c_s) = controller_pair(law, alpha, period);
    let transfer = match side {
        Side::Master => c_m,
        Side::Slave => c_s,
    };

    let per_omega_rhs = grid
        .omegas()
        .iter()
        .map(|&w| passivity_rhs(&transfer, period, alpha, w).map(|v| (w, v)))
        .collect::<Result<Vec<_>>>()?;

    let (sweep_argmax_omega, sweep_sup) =
        per_omega_rhs
            .iter()
            .copied()
            .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });

    let closed = closed_form_bound(law, side, period);
    Ok(PassivityReport {
        side,
        sweep_sup,
        sweep_argmax_omega,
        closed_form_bound: closed,
        robot_damping: robot.damping,
        passive_by_sweep: robot.damping > sweep_sup,
        passive_by_closed_form: robot.damping > closed,
        discrepancy_flag: relative_gap(sweep_sup, closed) > DISCREPANCY_TOLERANCE,
        per_omega_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::discretize;
    use crate::model::presets;
    use approx::assert_abs_diff_eq;

    fn p_like_transfer() -> DiscreteTransfer {
        discretize(&ControllerLaw::p_like(1.0, 0.1), Side::Master, 0.002)
    }

    #[test]
    fn rhs_examples() {
        let t = p_like_transfer();
        let period = 0.002;
        let quarter = passivity_rhs(&t, period, 1.0, PI / 2.0 / period).unwrap();
        assert_abs_diff_eq!(quarter, 0.002, epsilon = 1e-12);
        let nyquist = passivity_rhs(&t, period, 1.0, PI / period).unwrap();
        assert_abs_diff_eq!(nyquist, -0.198, epsilon = 1e-12);

        let zero = DiscreteTransfer::constant(0.0, period);
        assert_eq!(passivity_rhs(&zero, period, 1.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn rhs_singularity_and_range() {
        let t = p_like_transfer();
        assert!(matches!(
            passivity_rhs(&t, 0.002, 1.0, 1e-7),
            Err(Error::Singularity { .. })
        ));
        assert!(passivity_rhs(&t, 0.002, 1.0, 0.0).is_err());
        assert!(passivity_rhs(&t, 0.002, 1.0, 2.0 * PI / 0.002).is_err());
    }

    #[test]
    fn scaled_condition_uses_mean_factor() {
        let t = p_like_transfer();
        let w = 300.0;
        let unscaled = passivity_rhs(&t, 0.002, 1.0, w).unwrap();
        let scaled = passivity_rhs(&t, 0.002, 3.0, w).unwrap();
        assert_abs_diff_eq!(scaled, 2.0 * unscaled, epsilon = 1e-12);
    }

    #[test]
    fn grid_construction() {
        let g = FrequencyGrid::default_for_period(0.002).unwrap();
        assert_eq!(g.len(), 2000);
        assert_eq!(g.omegas()[0], 1e-3);
        assert_eq!(*g.omegas().last().unwrap(), PI / 0.002);
        assert!(g.check_for_period(0.002).is_ok());
        assert!(g.check_for_period(0.004).is_err());

        assert!(FrequencyGrid::new(vec![1.0, 1.0]).is_err());
        assert!(FrequencyGrid::new(vec![-1.0, 1.0]).is_err());
        assert!(FrequencyGrid::log_spaced(1.0, 2.0, 1).is_err());
        // grid points where 1 - cos wT vanishes are rejected up front
        let tiny = FrequencyGrid::new(vec![1e-8, 1.0]).unwrap();
        assert!(matches!(
            tiny.check_for_period(0.002),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(
            closed_form_bound(&ControllerLaw::p_like(1.0, 0.1), Side::Master, 0.002),
            0.202,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_form_bound(&ControllerLaw::pd_like(1.0, 2.0, 1.0), Side::Slave, 0.005),
            2.01,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_form_bound(
                &ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
                Side::Master,
                0.006
            ),
            -15.998,
            epsilon = 1e-12
        );
    }

    #[test]
    fn p_like_sweep_approaches_low_frequency_limit() {
        let period = 0.002;
        let grid = FrequencyGrid::default_for_period(period).unwrap();
        let r = passivity_margin_sweep(
            &ControllerLaw::p_like(1.0, 0.1),
            Side::Master,
            period,
            1.0,
            &grid,
            &presets::robot(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.sweep_sup, 0.202, epsilon = 1e-9);
        assert_eq!(r.sweep_argmax_omega, 1e-3);
        assert!(r.passive_by_sweep && r.passive_by_closed_form);
        assert!(!r.discrepancy_flag);
        assert_eq!(r.per_omega_rhs.len(), 2000);
    }

    #[test]
    fn pd_like_sweep_peaks_at_nyquist() {
        let period = 0.005;
        let grid = FrequencyGrid::default_for_period(period).unwrap();
        let r = passivity_margin_sweep(
            &ControllerLaw::pd_like(1.0, 2.0, 1.0),
            Side::Slave,
            period,
            1.0,
            &grid,
            &presets::robot(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.sweep_sup, 2.01, epsilon = 1e-9);
        assert_eq!(r.sweep_argmax_omega, PI / period);
        // 4/2.2 < 2.01
        assert!(!r.passive_by_sweep);
    }

    #[test]
    fn zero_law_sweep() {
        let period = 0.01;
        let grid = FrequencyGrid::default_for_period(period).unwrap();
        let r = passivity_margin_sweep(
            &ControllerLaw::p_like(0.0, 0.0),
            Side::Master,
            period,
            1.0,
            &grid,
            &RobotParams::new(1.0, 1e-9),
        )
        .unwrap();
        assert_eq!(r.sweep_sup, 0.0);
        assert!(r.passive_by_sweep);
        assert!(!r.discrepancy_flag);
    }

    #[test]
    fn dissipation_sweep_disagrees_with_closed_form() {
        let period = 0.006;
        let grid = FrequencyGrid::default_for_period(period).unwrap();
        let r = passivity_margin_sweep(
            &ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
            Side::Master,
            period,
            1.0,
            &grid,
            &presets::robot(),
        )
        .unwrap();
        // -Kp T + 2 (Kv + Kd + Peps) cos wT, largest as w -> 0
        assert_abs_diff_eq!(r.sweep_sup, -0.006 + 24.004, epsilon = 1e-6);
        assert!(r.discrepancy_flag);
        assert!(!r.passive_by_sweep);
        assert!(r.passive_by_closed_form);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn p_like_reduction(k in 0.0f64..10.0, l in 0.0f64..2.0, period in 1e-4f64..0.05, frac in 1e-3f64..1.0) {
                let t = discretize(&ControllerLaw::p_like(k, l), Side::Master, period);
                let w = frac * PI / period;
                let rhs = passivity_rhs(&t, period, 1.0, w).unwrap();
                let expected = k * period + 2.0 * l * (w * period).cos();
                prop_assert!((rhs - expected).abs() < 1e-10, "{} vs {}", rhs, expected);
            }

            #[test]
            fn adding_points_never_lowers_sup(extra in proptest::collection::vec(1e-3f64..1.0, 1..20)) {
                let period = 0.005;
                let law = ControllerLaw::pd_like(1.0, 2.0, 0.7);
                let robot = presets::robot();
                let coarse = FrequencyGrid::up_to_nyquist(period, 1e-3, 50).unwrap();
                let mut dense: Vec<f64> = coarse.omegas().to_vec();
                dense.extend(extra.iter().map(|f| f * PI / period));
                dense.sort_by(f64::total_cmp);
                dense.dedup();
                let dense = FrequencyGrid::new(dense).unwrap();
                let a = passivity_margin_sweep(&law, Side::Master, period, 1.0, &coarse, &robot).unwrap();
                let b = passivity_margin_sweep(&law, Side::Master, period, 1.0, &dense, &robot).unwrap();
                prop_assert!(b.sweep_sup >= a.sweep_sup);
            }
        }
    }
}

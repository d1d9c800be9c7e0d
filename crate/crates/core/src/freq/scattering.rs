//! Hybrid and scattering matrices of the two-port teleoperator.
//!
//! With inputs `(v_m, F_e)` and outputs `(F_h, -v_s)` the teleoperator is
//! described by a 2×2 hybrid matrix `H(jw)`. Its scattering matrix
//! `S = diag(1, -1) (H - I) (H + I)^-1` has `sigma_max(S) <= 1` exactly when
//! the two-port is passive at that frequency.

use num_complex::Complex64;

use crate::control::{controller_pair, error_sign, folded_gains};
use crate::error::{Error, Result};
use crate::model::{ControllerLaw, ImpedanceConvention, RobotParams, Side};

use super::passivity::FrequencyGrid;

pub type Mat2 = [[Complex64; 2]; 2];

/// Slack above 1 still counted as passive by [`scattering_sweep`].
pub const SIGMA_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn mat_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn mat_det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a 2×2 matrix, `None` if `|det| < 1e-300`.
pub fn mat_inv(a: &Mat2) -> Option<Mat2> {
    let det = mat_det(a);
    if det.norm() < 1e-300 {
        return None;
    }
    Some([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

/// Hybrid matrix from the port characteristics and controller impedances
/// already evaluated at one frequency.
pub fn hybrid_from_parts(
    z_m: Complex64,
    z_s: Complex64,
    c_m: Complex64,
    c_s: Complex64,
) -> Result<Mat2> {
    let loop_sum = z_s + c_s;
    if loop_sum.norm() < 1e-300 {
        return Err(Error::SingularCoupling { omega: None });
    }
    let inv = loop_sum.inv();
    Ok([[z_m + c_m * z_s * inv, c_m * inv], [-c_s * inv, inv]])
}

/// Hybrid matrix at `omega` for the given robots and controller impedances.
pub fn hybrid_matrix(
    omega: f64,
    master: &RobotParams,
    slave: &RobotParams,
    c_m: Complex64,
    c_s: Complex64,
    convention: ImpedanceConvention,
) -> Result<Mat2> {
    let z_m = master.port_characteristic(omega, convention);
    let z_s = slave.port_characteristic(omega, convention);
    hybrid_from_parts(z_m, z_s, c_m, c_s)
        .map_err(|_| Error::SingularCoupling { omega: Some(omega) })
}

/// `S = diag(1, -1) (H - I) (H + I)^-1`.
pub fn scattering_matrix(h: &Mat2) -> Result<Mat2> {
    let inv = mat_inv(&mat_add(h, &identity())).ok_or(Error::SingularScattering { omega: None })?;
    let mut s = mat_mul(&mat_sub(h, &identity()), &inv);
    s[1][0] = -s[1][0];
    s[1][1] = -s[1][1];
    Ok(s)
}

/// Largest singular value from the eigenvalues of `S^H S`.
///
/// With `S^H S = [[p, q], [q*, r]]` the discriminant `t² - 4d` equals
/// `(p - r)² + 4|q|²`, which is evaluated directly so the larger root never
/// suffers cancellation.
pub fn max_singular_value_2x2(s: &Mat2) -> f64 {
    let p = s[0][0].norm_sqr() + s[1][0].norm_sqr();
    let r = s[0][1].norm_sqr() + s[1][1].norm_sqr();
    let q = s[0][0].conj() * s[0][1] + s[1][0].conj() * s[1][1];
    let disc = (p - r).powi(2) + 4.0 * q.norm_sqr();
    (0.5 * (p + r + disc.sqrt())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingDomain {
    /// Continuous-time law `P + G s`, as a force/velocity impedance `P/s + G`.
    #[default]
    Continuous,
    /// Discretized controller seen through `C(e^{jwT}) / (jw)`. Ignores the
    /// sampler and hold.
    Discrete,
}

/// Everything needed to evaluate the hybrid matrix of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterInputs {
    pub master: RobotParams,
    pub slave: RobotParams,
    pub law: ControllerLaw,
    pub alpha: f64,
    pub period: f64,
    pub domain: CouplingDomain,
    pub convention: ImpedanceConvention,
}

impl ScatterInputs {
    /// Controller impedances `(C_m, C_s)` at `omega`.
    pub fn controller_impedances(&self, omega: f64) -> Result<(Complex64, Complex64)> {
        let jw = Complex64::new(0.0, omega);
        let sign = error_sign(&self.law);
        match self.domain {
            CouplingDomain::Continuous => {
                let side = |side| {
                    let (p, g) = folded_gains(&self.law, side);
                    sign * (p / jw + g)
                };
                Ok((self.alpha * side(Side::Master), side(Side::Slave)))
            }
            CouplingDomain::Discrete => {
                let (c_m, c_s) = controller_pair(&self.law, self.alpha, self.period);
                Ok((
                    sign * c_m.eval_at_frequency(omega)? / jw,
                    sign * c_s.eval_at_frequency(omega)? / jw,
                ))
            }
        }
    }

    pub fn hybrid_at(&self, omega: f64) -> Result<Mat2> {
        let (c_m, c_s) = self.controller_impedances(omega)?;
        hybrid_matrix(omega, &self.master, &self.slave, c_m, c_s, self.convention)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSample {
    pub omega: f64,
    pub h: Mat2,
    pub s: Mat2,
    pub sigma_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSweep {
    pub samples: Vec<ScatteringSample>,
    pub passive: bool,
    pub worst_omega: f64,
    pub worst_sigma: f64,
}

/// Evaluates `S(jw)` and `sigma_max` over the grid for any hybrid-matrix source.
pub fn scattering_sweep_with<F>(grid: &FrequencyGrid, mut hybrid_at: F) -> Result<ScatterSweep>
where
    F: FnMut(f64) -> Result<Mat2>,
{
    let mut samples = Vec::with_capacity(grid.len());
    for &omega in grid.omegas() {
        let h = hybrid_at(omega)?;
        let s =
            scattering_matrix(&h).map_err(|_| Error::SingularScattering { omega: Some(omega) })?;
        samples.push(ScatteringSample {
            omega,
            h,
            s,
            sigma_max: max_singular_value_2x2(&s),
        });
    }
    let worst = samples.iter().fold(&samples[0], |w, cur| {
        if cur.sigma_max > w.sigma_max {
            cur
        } else {
            w
        }
    });
    let (worst_omega, worst_sigma) = (worst.omega, worst.sigma_max);
    Ok(ScatterSweep {
        passive: worst_sigma <= 1.0 + SIGMA_TOLERANCE,
        worst_omega,
        worst_sigma,
        samples,
    })
}

pub fn scattering_sweep(grid: &FrequencyGrid, inputs: &ScatterInputs) -> Result<ScatterSweep> {
    scattering_sweep_with(grid, |w| inputs.hybrid_at(w))
}

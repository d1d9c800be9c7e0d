use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ControllerLaw, Side};

/// Rational transfer function in `z`, coefficients in descending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTransfer {
    numerator: Vec<f64>,
    denominator: Vec<f64>,
    period: f64,
}

impl DiscreteTransfer {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>, period: f64) -> Result<Self> {
        match denominator.first() {
            None => return Err(Error::InvalidTransfer("empty denominator")),
            Some(&0.0) => {
                return Err(Error::InvalidTransfer(
                    "leading denominator coefficient is zero",
                ))
            }
            _ => {}
        }
        let leading_zeros = numerator.iter().take_while(|c| **c == 0.0).count();
        let num_degree = numerator.len().saturating_sub(leading_zeros + 1);
        if num_degree > denominator.len() - 1 {
            return Err(Error::InvalidTransfer(
                "numerator degree exceeds denominator (non-causal)",
            ));
        }
        if !(period > 0.0) {
            return Err(Error::InvalidTransfer("sampling period must be positive"));
        }
        Ok(Self {
            numerator,
            denominator,
            period,
        })
    }

    /// Memoryless gain `k`.
    pub fn constant(k: f64, period: f64) -> Self {
        Self {
            numerator: vec![k],
            denominator: vec![1.0],
            period,
        }
    }

    pub fn numerator(&self) -> &[f64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[f64] {
        &self.denominator
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Multiplies the numerator by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            numerator: self.numerator.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_transfer(self, z)
    }

    /// Evaluates on the unit circle at `z = e^{jωT}`.
    pub fn eval_at_frequency(&self, omega: f64) -> Result<Complex64> {
        self.eval(Complex64::from_polar(1.0, omega * self.period))
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `N(z) / D(z)`; fails when `|D(z)| < 1e-300`.
pub fn eval_transfer(c: &DiscreteTransfer, z: Complex64) -> Result<Complex64> {
    let den = horner(&c.denominator, z);
    let magnitude = den.norm();
    if magnitude < 1e-300 {
        return Err(Error::PoleEvaluation { magnitude });
    }
    Ok(horner(&c.numerator, z) / den)
}

/// Proportional and derivative gains `(P, G)` of one side once the law is
/// folded into a single error-driven controller `P + G s`:
///
/// * P-like: `P = K`, `G = -L`
/// * PD-like: `P = K`, `G = Kd·gamma_remote`
/// * PD + dissipation: `P = -Kp`, `G = -(Kv + Kd + Peps)` (same on both sides)
pub fn folded_gains(law: &ControllerLaw, side: Side) -> (f64, f64) {
    match (*law, side) {
        (ControllerLaw::PLike { k_m, l_m, .. }, Side::Master) => (k_m, -l_m),
        (ControllerLaw::PLike { k_s, l_s, .. }, Side::Slave) => (k_s, -l_s),
        (
            ControllerLaw::PdLike {
                kd, k_m, gamma_s, ..
            },
            Side::Master,
        ) => (k_m, kd * gamma_s),
        (
            ControllerLaw::PdLike {
                kd, k_s, gamma_m, ..
            },
            Side::Slave,
        ) => (k_s, kd * gamma_m),
        (ControllerLaw::PdDissipation { kv, kp, kd, p_eps }, _) => (-kp, -(kv + kd + p_eps)),
    }
}

/// Discretizes one side of `law` with the substitution `s -> (z - 1) / (T z)`,
/// giving `C(z) = P + G (z - 1) / (T z)` over the common denominator `T z`.
pub fn discretize(law: &ControllerLaw, side: Side, period: f64) -> DiscreteTransfer {
    let (proportional, derivative) = folded_gains(law, side);
    // (P T z + G z - G) / (T z)
    DiscreteTransfer {
        numerator: vec![proportional * period + derivative, -derivative],
        denominator: vec![period, 0.0],
        period,
    }
}

/// Master and slave controllers with position scaling: `C_m = alpha·C`, `C_s = C`.
///
/// Each side is discretized from its own gains, so asymmetric gains survive.
pub fn controller_pair(
    law: &ControllerLaw,
    alpha: f64,
    period: f64,
) -> (DiscreteTransfer, DiscreteTransfer) {
    let master = discretize(law, Side::Master, period).scaled(alpha);
    let slave = discretize(law, Side::Slave, period);
    (master, slave)
}

/// Sign applied to `remote - local` to form the error a family acts on.
///
/// P-like and PD-like laws are written on `q_remote - q_local`. The
/// dissipative law is written on `q_local - q_remote`, so its folded transfer
/// is driven by the opposite error.
pub fn error_sign(law: &ControllerLaw) -> f64 {
    match law {
        ControllerLaw::PLike { .. } | ControllerLaw::PdLike { .. } => 1.0,
        ControllerLaw::PdDissipation { .. } => -1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p_like_coefficients() {
        let t = discretize(&ControllerLaw::p_like(1.0, 0.1), Side::Slave, 0.002);
        assert_abs_diff_eq!(t.numerator()[0], -0.098, epsilon = 1e-15);
        assert_abs_diff_eq!(t.numerator()[1], 0.1, epsilon = 1e-15);
        assert_eq!(t.denominator(), &[0.002, 0.0]);
    }

    #[test]
    fn pd_like_without_derivative_is_constant() {
        let t = discretize(&ControllerLaw::pd_like(0.0, 5.0, 1.0), Side::Master, 0.003);
        for z in [c(1.0, 0.0), c(-1.0, 0.0), c(0.3, 0.8), c(5.0, -2.0)] {
            let v = t.eval(z).unwrap();
            assert_abs_diff_eq!(v.re, 5.0, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pd_dissipation_coefficients() {
        let t = discretize(
            &ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
            Side::Master,
            0.006,
        );
        // -12.002 (z - 1) / (0.006 z) - 1
        for z in [c(0.5, 0.5), c(-1.0, 0.0), c(2.0, 1.0)] {
            let expected = -12.002 * (z - 1.0) / (0.006 * z) - 1.0;
            let v = t.eval(z).unwrap();
            assert_abs_diff_eq!(v.re, expected.re, epsilon = 1e-9);
            assert_abs_diff_eq!(v.im, expected.im, epsilon = 1e-9);
        }
        assert_eq!(
            t,
            discretize(
                &ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
                Side::Slave,
                0.006
            )
        );
    }

    #[test]
    fn pd_like_uses_remote_gamma() {
        let law = ControllerLaw::PdLike {
            kd: 1.0,
            k_m: 2.0,
            k_s: 3.0,
            gamma_m: 0.5,
            gamma_s: 0.25,
        };
        let m = discretize(&law, Side::Master, 0.01);
        let s = discretize(&law, Side::Slave, 0.01);
        // derivative coefficient is -G
        assert_eq!(m.numerator()[1], -0.25);
        assert_eq!(s.numerator()[1], -0.5);
        assert_abs_diff_eq!(m.eval(c(1.0, 0.0)).unwrap().re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eval(c(1.0, 0.0)).unwrap().re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn pair_scaling() {
        let law = ControllerLaw::p_like(1.0, 0.1);
        let (m, s) = controller_pair(&law, 1.0, 0.002);
        assert_eq!(m, s);
        assert_eq!(s, discretize(&law, Side::Slave, 0.002));

        let (m, s) = controller_pair(&ControllerLaw::p_like(1.0, 0.0), 2.0, 0.002);
        for z in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
            assert_abs_diff_eq!(m.eval(z).unwrap().re, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.eval(z).unwrap().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(
            DiscreteTransfer::constant(5.0, 0.1)
                .eval(c(0.2, -3.0))
                .unwrap(),
            c(5.0, 0.0)
        );

        let t = discretize(&ControllerLaw::p_like(1.0, 0.1), Side::Master, 0.002);
        let dc = t.eval(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(dc.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dc.im, 0.0, epsilon = 1e-12);

        let nyq = t.eval(c(-1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(nyq.re, -99.0, epsilon = 1e-9);
    }

    #[test]
    fn pole_is_reported() {
        let t = discretize(&ControllerLaw::p_like(1.0, 0.1), Side::Master, 0.002);
        assert!(matches!(
            t.eval(c(0.0, 0.0)),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn construction_checks() {
        assert!(DiscreteTransfer::new(vec![1.0], vec![0.0, 1.0], 0.1).is_err());
        assert!(DiscreteTransfer::new(vec![1.0, 2.0, 3.0], vec![1.0, 0.5], 0.1).is_err());
        assert!(DiscreteTransfer::new(vec![0.0, 2.0, 3.0], vec![1.0, 0.5], 0.1).is_ok());
        assert!(DiscreteTransfer::new(vec![1.0], vec![1.0], 0.0).is_err());
    }

    #[test]
    fn unit_circle_matches_direct_formulas() {
        let period = 0.004;
        let laws = [
            ControllerLaw::PLike {
                k_m: 1.3,
                k_s: 0.7,
                l_m: 0.1,
                l_s: 0.25,
            },
            ControllerLaw::PdLike {
                kd: 1.5,
                k_m: 2.0,
                k_s: 2.5,
                gamma_m: 0.9,
                gamma_s: 0.6,
            },
            ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
        ];
        for law in laws {
            for side in [Side::Master, Side::Slave] {
                let t = discretize(&law, side, period);
                for i in 0..100 {
                    let omega = (i as f64 + 0.5) / 100.0 * PI / period;
                    let z = Complex64::from_polar(1.0, omega * period);
                    let d = (z - 1.0) / (period * z);
                    let direct = match (law, side) {
                        (ControllerLaw::PLike { k_m, l_m, .. }, Side::Master) => k_m - l_m * d,
                        (ControllerLaw::PLike { k_s, l_s, .. }, Side::Slave) => k_s - l_s * d,
                        (
                            ControllerLaw::PdLike {
                                kd, k_m, gamma_s, ..
                            },
                            Side::Master,
                        ) => kd * gamma_s * d + k_m,
                        (
                            ControllerLaw::PdLike {
                                kd, k_s, gamma_m, ..
                            },
                            Side::Slave,
                        ) => kd * gamma_m * d + k_s,
                        (ControllerLaw::PdDissipation { kv, kp, kd, p_eps }, _) => {
                            -kv * d - (kd + p_eps) * d - kp
                        }
                    };
                    let v = t.eval_at_frequency(omega).unwrap();
                    assert!((v - direct).norm() <= 1e-12 * direct.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn dc_gain_is_proportional_gain() {
        let one = c(1.0, 0.0);
        let p = discretize(&ControllerLaw::p_like(3.25, 0.7), Side::Slave, 0.01);
        assert_abs_diff_eq!(p.eval(one).unwrap().re, 3.25, epsilon = 1e-12);
        let pd = discretize(&ControllerLaw::pd_like(4.0, 2.5, 0.5), Side::Master, 0.01);
        assert_abs_diff_eq!(pd.eval(one).unwrap().re, 2.5, epsilon = 1e-12);
    }
}

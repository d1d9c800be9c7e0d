use std::fmt;

use crate::model::{ControllerLaw, DelayConfig};

/// Absolute slack allowed when checking `Kd = nu/2 · Kp`, scaled by `max(1, |Kd|)`.
pub const DISSIPATION_MATCH_TOLERANCE: f64 = 1e-9;

/// One evaluated gain inequality with both of its sides.
#[derive(Debug, Clone, PartialEq)]
pub struct GainDiagnostic {
    pub condition: &'static str,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: f64,
    pub passed: bool,
}

impl fmt::Display for GainDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} -> {}",
            self.condition,
            self.lhs,
            self.relation,
            self.rhs,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// Gain conditions each family needs for bounded tracking errors.
///
/// * P-like: `4 L_s L_m > (T1² + T2²) K_m K_s`
/// * PD-like: `K_s >= K_m`
/// * PD + dissipation: `Kd = nu/2 · Kp`
pub fn check_gain_conditions(law: &ControllerLaw, delay: &DelayConfig) -> Vec<GainDiagnostic> {
    match *law {
        ControllerLaw::PLike { k_m, k_s, l_m, l_s } => {
            let lhs = 4.0 * l_s * l_m;
            let rhs = (delay.forward.powi(2) + delay.backward.powi(2)) * k_m * k_s;
            vec![GainDiagnostic {
                condition: "4 L_s L_m > (T1^2 + T2^2) K_m K_s",
                lhs,
                relation: ">",
                rhs,
                passed: lhs > rhs,
            }]
        }
        ControllerLaw::PdLike { k_m, k_s, .. } => vec![GainDiagnostic {
            condition: "K_s >= K_m",
            lhs: k_s,
            relation: ">=",
            rhs: k_m,
            passed: k_s >= k_m,
        }],
        ControllerLaw::PdDissipation { kp, kd, .. } => {
            let target = delay.nu / 2.0 * kp;
            let tol = DISSIPATION_MATCH_TOLERANCE * kd.abs().max(1.0);
            vec![GainDiagnostic {
                condition: "Kd = nu/2 Kp",
                lhs: kd,
                relation: "=",
                rhs: target,
                passed: (kd - target).abs() <= tol,
            }]
        }
    }
}

/// Minimum device damping for a sampled virtual wall of stiffness `k_wall`
/// and damping `b_wall`: `k_wall T / 2 + b_wall`.
pub fn virtual_wall_bound(k_wall: f64, b_wall: f64, period: f64) -> f64 {
    k_wall * period / 2.0 + b_wall
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn delay(t1: f64, t2: f64, nu: f64) -> DelayConfig {
        DelayConfig {
            forward: t1,
            backward: t2,
            nu,
        }
    }

    #[test]
    fn p_like_condition() {
        let d = check_gain_conditions(&ControllerLaw::p_like(1.0, 0.1), &delay(0.1, 0.1, 0.2));
        assert_eq!(d.len(), 1);
        assert_abs_diff_eq!(d[0].lhs, 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(d[0].rhs, 0.02, epsilon = 1e-15);
        assert!(d[0].passed);

        let d = check_gain_conditions(&ControllerLaw::p_like(1.0, 0.07), &delay(0.1, 0.1, 0.2));
        assert!(!d[0].passed);
    }

    #[test]
    fn pd_like_condition_allows_equality() {
        let law = ControllerLaw::pd_like(1.0, 2.0, 1.0);
        assert!(check_gain_conditions(&law, &DelayConfig::none())[0].passed);
        let law = ControllerLaw::PdLike {
            kd: 1.0,
            k_m: 2.0,
            k_s: 1.9,
            gamma_m: 1.0,
            gamma_s: 1.0,
        };
        assert!(!check_gain_conditions(&law, &DelayConfig::none())[0].passed);
    }

    #[test]
    fn dissipation_match() {
        let law = ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002);
        let d = check_gain_conditions(&law, &delay(0.0, 0.0, 4.0));
        assert_eq!(d[0].rhs, 2.0);
        assert!(d[0].passed);
        assert!(!check_gain_conditions(&law, &delay(0.0, 0.0, 3.9))[0].passed);
        let off = ControllerLaw::pd_dissipation(10.0, 1.0, 2.1, 0.002);
        assert!(!check_gain_conditions(&off, &delay(0.0, 0.0, 4.0))[0].passed);
    }

    #[test]
    fn virtual_wall() {
        assert_abs_diff_eq!(virtual_wall_bound(1000.0, 0.0, 0.001), 0.5, epsilon = 1e-15);
        assert_eq!(virtual_wall_bound(0.0, 0.0, 0.3), 0.0);
        assert_abs_diff_eq!(virtual_wall_bound(200.0, 1.0, 0.01), 2.0, epsilon = 1e-15);
    }
}

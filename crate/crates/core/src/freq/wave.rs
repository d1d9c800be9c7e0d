use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// Operator side: `a = (F + R0 V) / 2√R0`, `b = (F - R0 V) / 2√R0`.
    Operator,
    /// Environment side, velocity sign flipped.
    Environment,
}

/// Incident (`a`) and reflected (`b`) wave at one port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePair {
    pub a: Complex64,
    pub b: Complex64,
}

impl WavePair {
    /// `|a|² - |b|²`, the power flowing into the port.
    pub fn net_power(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }
}

/// Wave variables of both ports of the two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVariables {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub r0: f64,
}

impl WaveVariables {
    pub fn new(
        f_h: impl Into<Complex64>,
        v_h: impl Into<Complex64>,
        f_e: impl Into<Complex64>,
        v_e: impl Into<Complex64>,
        r0: f64,
    ) -> Self {
        let p1 = wave_transform_port(Port::Operator, f_h, v_h, r0);
        let p2 = wave_transform_port(Port::Environment, f_e, v_e, r0);
        Self {
            a1: p1.a,
            a2: p2.a,
            b1: p1.b,
            b2: p2.b,
            r0,
        }
    }
}

/// Operator-port wave transform.
///
/// # Panics
///
/// If `r0 <= 0`.
pub fn wave_transform(
    force: impl Into<Complex64>,
    velocity: impl Into<Complex64>,
    r0: f64,
) -> WavePair {
    wave_transform_port(Port::Operator, force, velocity, r0)
}

pub fn wave_transform_port(
    port: Port,
    force: impl Into<Complex64>,
    velocity: impl Into<Complex64>,
    r0: f64,
) -> WavePair {
    assert!(r0 > 0.0, "characteristic impedance must be positive");
    let f = force.into();
    let v = match port {
        Port::Operator => velocity.into(),
        Port::Environment => -velocity.into(),
    };
    let scale = 2.0 * r0.sqrt();
    WavePair {
        a: (f + r0 * v) / scale,
        b: (f - r0 * v) / scale,
    }
}

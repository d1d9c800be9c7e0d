use std::collections::VecDeque;

use super::transfer::DiscreteTransfer;

/// Direct-form realization of a [`DiscreteTransfer`] as a difference equation.
///
/// `a0 y[k] = sum_i b_i x[k-i] - sum_{i>=1} a_i y[k-i]`, with the numerator
/// right-aligned against the denominator.
#[derive(Debug, Clone)]
pub struct ControllerState {
    b: Vec<f64>,
    a: Vec<f64>,
    past_inputs: VecDeque<f64>,
    past_outputs: VecDeque<f64>,
}

impl ControllerState {
    pub fn new(transfer: &DiscreteTransfer) -> Self {
        let den = transfer.denominator();
        let order = den.len() - 1;
        let lead = den[0];
        let num = transfer.numerator();
        // drop leading zeros beyond the denominator length
        let num = &num[num.len().saturating_sub(den.len())..];
        let mut b = vec![0.0; den.len() - num.len()];
        b.extend(num.iter().map(|c| c / lead));
        let a = den[1..].iter().map(|c| c / lead).collect();
        Self {
            b,
            a,
            past_inputs: VecDeque::from(vec![0.0; order]),
            past_outputs: VecDeque::from(vec![0.0; order]),
        }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Consumes one error sample, returns one output sample.
    pub fn step(&mut self, input: f64) -> f64 {
        let mut y = self.b[0] * input;
        for (bi, x) in self.b[1..].iter().zip(&self.past_inputs) {
            y += bi * x;
        }
        for (ai, yp) in self.a.iter().zip(&self.past_outputs) {
            y -= ai * yp;
        }
        if self.order() > 0 {
            self.past_inputs.pop_back();
            self.past_inputs.push_front(input);
            self.past_outputs.pop_back();
            self.past_outputs.push_front(y);
        }
        y
    }

    pub fn reset(&mut self) {
        self.past_inputs.iter_mut().for_each(|v| *v = 0.0);
        self.past_outputs.iter_mut().for_each(|v| *v = 0.0);
    }
}

/// Runs one sample through `state`. The state must have been built for `transfer`.
pub fn step_controller(
    state: &mut ControllerState,
    transfer: &DiscreteTransfer,
    error: f64,
) -> f64 {
    debug_assert_eq!(state.order() + 1, transfer.denominator().len());
    state.step(error)
}

/// Fixed-length delay of a sampled stream.
///
/// The line fills with the first sample it sees, so a system that starts at
/// rest sees a constant remote signal until the delay has elapsed.
#[derive(Debug, Clone)]
pub struct DelayLine {
    samples: usize,
    buffer: VecDeque<f64>,
}

impl DelayLine {
    pub fn new(samples: usize) -> Self {
        Self {
            samples,
            buffer: VecDeque::with_capacity(samples + 1),
        }
    }

    /// Delay of `seconds` rounded to whole samples of `period`.
    pub fn for_delay(seconds: f64, period: f64) -> Self {
        Self::new((seconds / period).round() as usize)
    }

    pub fn len(&self) -> usize {
        self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.samples == 0
    }

    /// Pushes the current sample and returns the one from `len()` steps ago.
    pub fn push(&mut self, value: f64) -> f64 {
        if self.buffer.is_empty() {
            self.buffer.extend(std::iter::repeat_n(value, self.samples));
        }
        self.buffer.push_back(value);
        self.buffer.pop_front().unwrap_or(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::transfer::{discretize, DiscreteTransfer};
    use crate::model::{ControllerLaw, Side};
    use approx::assert_abs_diff_eq;

    /// Impulse response by long division of N(z)/D(z) in powers of z^-1.
    fn impulse_by_long_division(t: &DiscreteTransfer, n: usize) -> Vec<f64> {
        let den = t.denominator();
        let mut num: Vec<f64> = vec![0.0; den.len().saturating_sub(t.numerator().len())];
        num.extend_from_slice(t.numerator());
        num.resize(num.len() + n, 0.0);
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let q = num[k] / den[0];
            for (i, d) in den.iter().enumerate() {
                if k + i < num.len() {
                    num[k + i] -= q * d;
                }
            }
            out.push(q);
        }
        out
    }

    #[test]
    fn constant_transfer_is_memoryless() {
        let t = DiscreteTransfer::constant(4.0, 0.01);
        let mut st = ControllerState::new(&t);
        assert_eq!(step_controller(&mut st, &t, 0.5), 2.0);
        assert_eq!(step_controller(&mut st, &t, -1.0), -4.0);
    }

    #[test]
    fn impulse_matches_long_division() {
        let (k, l, period) = (1.0, 0.1, 0.002);
        let t = discretize(&ControllerLaw::p_like(k, l), Side::Master, period);
        let mut st = ControllerState::new(&t);
        let expected = impulse_by_long_division(&t, 6);
        let got: Vec<f64> = (0..6)
            .map(|i| st.step(if i == 0 { 1.0 } else { 0.0 }))
            .collect();
        assert_abs_diff_eq!(got[0], (k * period - l) / period, epsilon = 1e-9);
        for (g, e) in got.iter().zip(&expected) {
            assert_abs_diff_eq!(g, e, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(got[1], l / period, epsilon = 1e-9);
        assert_eq!(&got[2..], &[0.0; 4]);
    }

    #[test]
    fn recursive_transfer_impulse() {
        // 1 / (1 - 0.5 z^-1) = z / (z - 0.5)
        let t = DiscreteTransfer::new(vec![1.0, 0.0], vec![1.0, -0.5], 1.0).unwrap();
        let mut st = ControllerState::new(&t);
        let expected = impulse_by_long_division(&t, 8);
        for (k, e) in expected.iter().enumerate() {
            let y = st.step(if k == 0 { 1.0 } else { 0.0 });
            assert_abs_diff_eq!(y, *e, epsilon = 1e-15);
            assert_abs_diff_eq!(y, 0.5f64.powi(k as i32), epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let t = discretize(
            &ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
            Side::Slave,
            0.006,
        );
        let mut st = ControllerState::new(&t);
        assert!((0..1000).all(|_| st.step(0.0) == 0.0));
    }

    #[test]
    fn sinusoidal_steady_state_matches_frequency_response() {
        let period = 0.005;
        let laws = [
            ControllerLaw::p_like(1.0, 0.1),
            ControllerLaw::pd_like(1.0, 2.0, 1.0),
            ControllerLaw::pd_dissipation(10.0, 1.0, 2.0, 0.002),
        ];
        for law in laws {
            let t = discretize(&law, Side::Master, period);
            for &wt in &[0.01, 0.1, 0.5, 1.0, 2.0, 3.0] {
                let mut st = ControllerState::new(&t);
                let n = 20_000usize;
                let settle = 1000usize;
                let (mut sc, mut ss, mut cc, mut sn, mut cs) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for k in 0..n {
                    let phase = wt * k as f64;
                    let y = st.step(phase.cos());
                    if k >= settle {
                        // least-squares fit y ~ p cos + q sin
                        sc += y * phase.cos();
                        ss += y * phase.sin();
                        cc += phase.cos() * phase.cos();
                        sn += phase.sin() * phase.sin();
                        cs += phase.cos() * phase.sin();
                    }
                }
                let det = cc * sn - cs * cs;
                let p = (sc * sn - ss * cs) / det;
                let q = (ss * cc - sc * cs) / det;
                // y = Re{C e^{j phase}} = Re(C) cos - Im(C) sin
                let measured = num_complex::Complex64::new(p, -q);
                let expected = t.eval_at_frequency(wt / period).unwrap();
                let rel = (measured - expected).norm() / expected.norm();
                assert!(rel < 0.01, "{law:?} wT={wt}: {measured} vs {expected}");
            }
        }
    }

    #[test]
    fn delay_line() {
        let mut d = DelayLine::new(2);
        assert_eq!(d.push(1.0), 1.0);
        assert_eq!(d.push(2.0), 1.0);
        assert_eq!(d.push(3.0), 1.0);
        assert_eq!(d.push(4.0), 2.0);
        let mut none = DelayLine::for_delay(0.0, 0.01);
        assert!(none.is_empty());
        assert_eq!(none.push(7.0), 7.0);
        assert_eq!(DelayLine::for_delay(0.1, 0.002).len(), 50);
    }
}

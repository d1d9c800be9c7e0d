use super::runner::SimulationTrace;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrackingMetrics {
    /// max |q_m - alpha q_s|
    pub max_abs_position_error: f64,
    pub final_position_error: f64,
    /// max |F_m - F_s|
    pub max_abs_force_error: f64,
    pub max_abs_master_position: f64,
}

pub fn tracking_metrics(trace: &SimulationTrace) -> TrackingMetrics {
    let alpha = trace.alpha;
    let mut m = TrackingMetrics::default();
    for r in &trace.records {
        let e = (r.q_m - alpha * r.q_s).abs();
        m.max_abs_position_error = m.max_abs_position_error.max(e);
        m.max_abs_force_error = m.max_abs_force_error.max((r.f_m - r.f_s).abs());
        m.max_abs_master_position = m.max_abs_master_position.max(r.q_m.abs());
        m.final_position_error = e;
    }
    m
}

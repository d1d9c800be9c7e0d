use super::runner::SimulationTrace;

/// Default slack below zero before the run counts as active, in joules.
pub const DEFAULT_ENERGY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    /// `E(n) = T · sum_{k<=n} P(k)`
    pub series: Vec<f64>,
    pub min_energy: f64,
    pub threshold: f64,
    pub passive: bool,
}

/// Cumulative energy delivered into the teleoperator through both ports.
pub fn energy_monitor(trace: &SimulationTrace, threshold: f64) -> EnergyReport {
    let mut total = 0.0;
    let series: Vec<f64> = trace
        .records
        .iter()
        .map(|r| {
            total += trace.period * r.power();
            total
        })
        .collect();
    let min_energy = series.iter().copied().fold(f64::INFINITY, f64::min);
    let min_energy = if series.is_empty() { 0.0 } else { min_energy };
    EnergyReport {
        passive: min_energy >= -threshold,
        series,
        min_energy,
        threshold,
    }
}

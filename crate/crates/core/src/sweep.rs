//! Per-coupling summary rows: τ, the speed limit, and the concurrence measures.

use rayon::prelude::*;

use crate::dynamics::{orthogonality_time, speed_limit, Method, SearchOptions};
use crate::entanglement::{concurrence_average, AverageOptions};
use crate::error::{Error, Result};
use crate::potential::SingleWellSolution;
use crate::scalar::Real;
use crate::spectrum::coupled_eigensystem;
use crate::wavepacket::Wavepacket;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepConfig {
    pub search: SearchOptions,
    pub average: AverageOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Γ never dropped below the threshold inside the scan window.
    NoOrthogonalState,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NoOrthogonalState => "no_orthogonal_state",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub label: String,
    pub g: T,
    pub theta: T,
    pub omega: [T; 4],
    pub status: RowStatus,
    pub tau: Option<T>,
    pub tau_method: Option<Method>,
    /// Γ(τ), or the smallest Γ seen when no orthogonal state was found.
    pub gamma_residual: T,
    pub mean_energy: T,
    pub energy_spread: T,
    pub tau_min: T,
    pub ratio: Option<T>,
    pub c0: T,
    pub c_av: T,
    pub c_av_numeric: T,
    pub c_mean: T,
}

/// Sorts, deduplicates, and checks a list of couplings.
pub fn normalize_couplings<T: Real>(gs: &[T]) -> Result<Vec<T>> {
    if let Some(bad) = gs.iter().find(|g| !(g.is_finite() && **g >= T::zero())) {
        return Err(Error::InvalidParameter(format!(
            "couplings must be finite and >= 0, got {bad}"
        )));
    }
    let mut v = gs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v.dedup();
    Ok(v)
}

/// Evaluates one summary row.
pub fn sweep_row<T: Real>(
    s: &SingleWellSolution<T>,
    label: &str,
    w: &Wavepacket<T>,
    g: T,
    cfg: &SweepConfig,
) -> Result<SweepRow<T>> {
    let cs = coupled_eigensystem(s, g)?;
    let (status, tau, tau_method, gamma_residual) = match orthogonality_time(w, &cs, &cfg.search) {
        Ok(r) => (RowStatus::Ok, Some(r.tau), Some(r.method), r.gamma_residual),
        Err(Error::NoOrthogonalState { min_gamma, .. }) => {
            (RowStatus::NoOrthogonalState, None, None, T::lit(min_gamma))
        }
        Err(e) => return Err(e),
    };
    let probe = tau.unwrap_or_else(T::nan);
    let sl = speed_limit(w, &cs, probe)?;
    let c = concurrence_average(w, &cs, &cfg.average);
    Ok(SweepRow {
        label: label.to_string(),
        g,
        theta: cs.theta,
        omega: cs.omega,
        status,
        tau,
        tau_method,
        gamma_residual,
        mean_energy: sl.mean_energy,
        energy_spread: sl.energy_spread,
        tau_min: sl.tau_min,
        ratio: tau.map(|_| sl.ratio),
        c0: c.c0,
        c_av: c.c_rms,
        c_av_numeric: c.c_rms_numeric,
        c_mean: c.c_mean,
    })
}

/// Rows for every `(packet, g)` pair, packet-major and ascending in g.
///
/// Rows are computed in parallel; the output order is fixed.
pub fn sweep<T: Real>(
    s: &SingleWellSolution<T>,
    packets: &[(String, Wavepacket<T>)],
    gs: &[T],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow<T>>> {
    let gs = normalize_couplings(gs)?;
    let jobs: Vec<(&str, &Wavepacket<T>, T)> = packets
        .iter()
        .flat_map(|(label, w)| gs.iter().map(move |&g| (label.as_str(), w, g)))
        .collect();
    jobs.par_iter()
        .map(|(label, w, g)| sweep_row(s, label, w, *g, cfg))
        .collect()
}

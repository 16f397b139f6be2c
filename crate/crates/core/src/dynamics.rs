//! Return-probability amplitude, orthogonality time, and the quantum speed limit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::optimize::golden_section;
use crate::scalar::Real;
use crate::spectrum::CoupledSpectrum;
use crate::wavepacket::Wavepacket;

/// Weights below this are treated as absent when classifying a wavepacket.
const ZERO_WEIGHT: f64 = 1e-15;
const EQUAL_WEIGHT_TOL: f64 = 1e-12;

/// Γ(t) = |⟨Ψ(0)|Ψ(t)⟩| = | |a₀|² + Σ_ν |a_ν|² e^{−iΩ_ν t} |.
pub fn correlation<T: Real>(w: &Wavepacket<T>, cs: &CoupledSpectrum<T>, t: T) -> T {
    let p = w.weights();
    let mut z = Complex::new(p[0], T::zero());
    for nu in 1..4 {
        z += Complex::from_polar(p[nu], -cs.omega[nu] * t);
    }
    z.norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Γ must fall below this for a minimum to count as orthogonal.
    pub threshold: f64,
    /// Scan step; `None` picks `min(0.01·2π/Ω₃, 0.05)`.
    pub dt: Option<f64>,
    pub t_max: f64,
    /// Skip the closed-form shortcuts.
    pub force_numeric: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            threshold: 5e-3,
            dt: None,
            t_max: 400.0,
            force_numeric: false,
        }
    }
}

impl SearchOptions {
    pub fn numeric() -> Self {
        Self {
            force_numeric: true,
            ..Self::default()
        }
    }

    /// Nyquist-safe scan step for the given spectrum.
    pub fn step<T: Real>(&self, cs: &CoupledSpectrum<T>) -> f64 {
        self.dt.unwrap_or_else(|| {
            let fastest = cs.omega[3].as_f64();
            if fastest > 0.0 {
                (0.01 * std::f64::consts::TAU / fastest).min(0.05)
            } else {
                0.05
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityResult<T> {
    pub tau: T,
    /// Γ(τ); zero for closed-form results.
    pub gamma_residual: T,
    pub method: Method,
    /// Interval the final refinement worked in.
    pub bracket: (T, T),
}

/// Frequency whose half-period is the first zero of Γ when the weights admit
/// a closed form: two equal weights, or four equal weights.
fn closed_form_frequency<T: Real>(w: &Wavepacket<T>, cs: &CoupledSpectrum<T>) -> Option<T> {
    let p = w.weights();
    let active: Vec<usize> = (0..4).filter(|&nu| p[nu] > T::lit(ZERO_WEIGHT)).collect();
    let equal = |i: usize, j: usize| (p[i] - p[j]).abs() <= T::lit(EQUAL_WEIGHT_TOL);
    let freq = match *active.as_slice() {
        [i, j] if equal(i, j) => (cs.omega[j] - cs.omega[i]).abs(),
        // (1 + e^{−iΩ₁t})(1 + e^{−iΩ₂t}) since Ω₃ = Ω₁ + Ω₂
        [0, 1, 2, 3] if (1..4).all(|nu| equal(0, nu)) => cs.omega[1].max(cs.omega[2]),
        _ => return None,
    };
    (freq > T::zero()).then_some(freq)
}

/// Earliest t > 0 at which Γ(t) vanishes (numerically: drops below
/// `opts.threshold` at a local minimum).
pub fn orthogonality_time<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    opts: &SearchOptions,
) -> Result<OrthogonalityResult<T>> {
    let active = w
        .weights()
        .iter()
        .filter(|&&v| v > T::lit(ZERO_WEIGHT))
        .count();
    if active < 2 {
        return Err(Error::NoOrthogonalState {
            t_max: opts.t_max,
            min_gamma: 1.0,
            t_at_min: 0.0,
        });
    }

    if !opts.force_numeric {
        if let Some(freq) = closed_form_frequency(w, cs) {
            let tau = T::PI() / freq;
            return Ok(OrthogonalityResult {
                tau,
                gamma_residual: T::zero(),
                method: Method::Analytic,
                bracket: (tau, tau),
            });
        }
    }

    let dt = opts.step(cs);
    if !(dt > 0.0 && opts.t_max > dt) {
        return Err(Error::InvalidParameter(format!(
            "scan needs 0 < dt < t_max, got dt={dt} t_max={}",
            opts.t_max
        )));
    }
    let n = (opts.t_max / dt).ceil() as usize;
    let time = |k: usize| T::lit(k as f64 * dt);
    let gamma = |t: T| correlation(w, cs, t);
    let threshold = T::lit(opts.threshold);

    let mut global = (T::zero(), T::one());
    let (mut prev, mut cur) = (gamma(time(0)), gamma(time(1)));
    for k in 1..n {
        let next = gamma(time(k + 1));
        if cur <= prev && cur <= next {
            let bracket = (time(k - 1), time(k + 1));
            let (t, g) = golden_section(gamma, bracket.0, bracket.1, T::zero());
            if g < global.1 {
                global = (t, g);
            }
            if g < threshold {
                return Ok(OrthogonalityResult {
                    tau: t,
                    gamma_residual: g,
                    method: Method::Numeric,
                    bracket,
                });
            }
        }
        prev = cur;
        cur = next;
    }
    Err(Error::NoOrthogonalState {
        t_max: opts.t_max,
        min_gamma: global.1.as_f64(),
        t_at_min: global.0.as_f64(),
    })
}

/// Mean energy above the ground state, its spread, and the combined
/// Margolus–Levitin / Mandelstam–Tamm bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedLimit<T> {
    pub mean_energy: T,
    pub energy_spread: T,
    /// πħ/2E.
    pub ml_bound: T,
    /// πħ/2ΔE; infinite for a single excited eigenstate.
    pub mt_bound: T,
    pub tau_min: T,
    pub ratio: T,
}

pub fn speed_limit<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    tau: T,
) -> Result<SpeedLimit<T>> {
    let p = w.weights();
    let hbar = cs.hbar;
    let (mut first, mut second) = (T::zero(), T::zero());
    for nu in 1..4 {
        let gap = hbar * cs.omega[nu];
        first += p[nu] * gap;
        second += p[nu] * gap * gap;
    }
    if first <= T::zero() {
        return Err(Error::UndefinedSpeedLimit);
    }
    let spread = (second - first * first).max(T::zero()).sqrt();
    let half_pi_hbar = T::FRAC_PI_2() * hbar;
    let ml_bound = half_pi_hbar / first;
    let mt_bound = if spread > T::zero() {
        half_pi_hbar / spread
    } else {
        T::infinity()
    };
    let tau_min = ml_bound.max(mt_bound);
    Ok(SpeedLimit {
        mean_energy: first,
        energy_spread: spread,
        ml_bound,
        mt_bound,
        tau_min,
        ratio: tau / tau_min,
    })
}

//! Concurrence of the two-well state, pointwise and time-averaged.

use num_complex::Complex;

use crate::dynamics::Method;
use crate::oracle::time_average_many;
use crate::scalar::Real;
use crate::spectrum::CoupledSpectrum;
use crate::wavepacket::{BasisAmplitudes, Preset, Wavepacket};

/// One exponential `amplitude · e^{−i·frequency·t}` in the closed-form sum for C(t).
#[derive(Debug, Clone, Copy)]
struct Term<T> {
    amplitude: T,
    frequency: T,
}

fn terms<T: Real>(w: &Wavepacket<T>, cs: &CoupledSpectrum<T>) -> [Term<T>; 5] {
    let [a0, a1, a2, a3] = w.coefficients();
    let (s2, c2) = (cs.sin_2theta(), cs.cos_2theta());
    let two = T::lit(2.0);
    let om = cs.omega;
    [
        Term {
            amplitude: a0 * a0 * s2,
            frequency: T::zero(),
        },
        Term {
            amplitude: -a3 * a3 * s2,
            frequency: two * om[3],
        },
        Term {
            amplitude: two * a0 * a3 * c2,
            frequency: om[3],
        },
        Term {
            amplitude: -a1 * a1,
            frequency: two * om[1],
        },
        Term {
            amplitude: a2 * a2,
            frequency: two * om[2],
        },
    ]
}

/// C(t) = |(a₀² − a₃²e^{−2iΩ₃t}) sin 2θ + 2a₀a₃ cos 2θ e^{−iΩ₃t} − a₁²e^{−2iΩ₁t} + a₂²e^{−2iΩ₂t}|.
pub fn concurrence_at<T: Real>(w: &Wavepacket<T>, cs: &CoupledSpectrum<T>, t: T) -> T {
    evaluate(&terms(w, cs), t)
}

fn evaluate<T: Real>(terms: &[Term<T>], t: T) -> T {
    terms
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, term| {
            acc + Complex::from_polar(term.amplitude, -term.frequency * t)
        })
        .norm()
}

/// Wootters' pure-state concurrence 2|c₀₀c₁₁ − c₀₁c₁₀|.
pub fn concurrence_from_amplitudes<T: Real>(c: &BasisAmplitudes<T>) -> T {
    (c.c00 * c.c11 - c.c01 * c.c10).norm() * T::lit(2.0)
}

/// C(0), using the per-preset closed forms when the coefficients match one.
pub fn concurrence_initial<T: Real>(w: &Wavepacket<T>, cs: &CoupledSpectrum<T>) -> T {
    let (s2, c2) = (cs.sin_2theta(), cs.cos_2theta());
    let half = T::lit(0.5);
    match w.as_preset() {
        Some(Preset::A) => half * (T::one() - c2).abs(),
        Some(Preset::B) => c2.abs(),
        Some(Preset::C) => half * (T::one() - s2).abs(),
        Some(Preset::D) => half * c2.abs(),
        None => concurrence_at(w, cs, T::zero()),
    }
}

/// Closed-form ⟨C(t)²⟩ valid away from the Ω₁ = Ω₂ resonance (the g → 0⁺ branch).
pub fn cav_squared_generic<T: Real>(preset: Preset, cs: &CoupledSpectrum<T>) -> T {
    let s = cs.sin_2theta();
    let s_sq = s * s;
    match preset {
        Preset::A => (T::lit(4.0) - s_sq) / T::lit(8.0),
        Preset::B => T::one() - s_sq / T::lit(2.0),
        Preset::C => (T::one() + s_sq) / T::lit(4.0),
        Preset::D => (T::lit(3.0) - s_sq) / T::lit(8.0),
    }
}

/// Closed-form C_av = √⟨C(t)²⟩, switching to the resonant value at exact degeneracy.
pub fn cav_closed_form<T: Real>(preset: Preset, cs: &CoupledSpectrum<T>) -> T {
    let generic = cav_squared_generic(preset, cs);
    let sq = if cs.is_degenerate() {
        match preset {
            Preset::A => generic - T::lit(0.5),
            Preset::D => generic - T::lit(0.125),
            Preset::B | Preset::C => generic,
        }
    } else {
        generic
    };
    sq.max(T::zero()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageOptions {
    /// Window length in units of the slowest beat period.
    pub periods: f64,
    /// Upper bound on the window length.
    pub cap: f64,
    /// Sampling step; `None` resolves the fastest beat with 100 points per period.
    pub dt: Option<f64>,
    /// Keep a decimated C(t) series in the report.
    pub record: bool,
}

impl Default for AverageOptions {
    fn default() -> Self {
        Self {
            periods: 2000.0,
            cap: 1e5,
            dt: None,
            record: false,
        }
    }
}

/// Averaging window `(T, dt)` chosen from the beat frequencies present in C(t)².
///
/// The window is a whole number of slowest beat periods whenever the cap
/// allows one, so the slowest beat averages out exactly. A zero window means
/// C(t) is constant.
pub fn averaging_window<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    opts: &AverageOptions,
) -> (T, T) {
    let active: Vec<T> = terms(w, cs)
        .iter()
        .filter(|t| t.amplitude.abs() > T::lit(1e-15))
        .map(|t| t.frequency)
        .collect();
    let merge_tol = T::lit(1e-12) * cs.omega[3].max(T::min_positive_value());
    let mut distinct: Vec<T> = Vec::new();
    for f in active {
        if !distinct.iter().any(|&d| (d - f).abs() <= merge_tol) {
            distinct.push(f);
        }
    }
    let mut slowest = T::infinity();
    let mut fastest = T::zero();
    for (i, &x) in distinct.iter().enumerate() {
        for &y in &distinct[i + 1..] {
            let d = (x - y).abs();
            slowest = slowest.min(d);
            fastest = fastest.max(d);
        }
    }
    if fastest == T::zero() {
        return (T::zero(), T::lit(opts.dt.unwrap_or(0.05)));
    }
    let dt = T::lit(
        opts.dt
            .unwrap_or_else(|| (0.01 * std::f64::consts::TAU / fastest.as_f64()).min(0.05)),
    );
    let period = T::TAU() / slowest;
    let cap = T::lit(opts.cap);
    let mut window = T::lit(opts.periods) * period;
    if window > cap {
        let whole = (cap / period).floor();
        window = if whole >= T::one() {
            whole * period
        } else {
            cap
        };
    }
    (window, dt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceReport<T> {
    pub c0: T,
    /// C_av = √⟨C(t)²⟩: closed form for presets, numeric otherwise.
    pub c_rms: T,
    /// √⟨C(t)²⟩ from the finite-window average.
    pub c_rms_numeric: T,
    /// ⟨C(t)⟩, always numeric.
    pub c_mean: T,
    pub method: Method,
    pub window: T,
    /// Decimated `(t, C(t))` pairs when requested.
    pub samples: Option<Vec<(T, T)>>,
}

pub fn concurrence_average<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    opts: &AverageOptions,
) -> ConcurrenceReport<T> {
    let c0 = concurrence_initial(w, cs);
    let (window, dt) = averaging_window(w, cs, opts);
    let (mean, mean_sq) = if window == T::zero() {
        let c = concurrence_at(w, cs, T::zero());
        (c, c * c)
    } else {
        let terms = terms(w, cs);
        let [m, m2] = time_average_many(
            |t| {
                let c = evaluate(&terms, t);
                [c, c * c]
            },
            window,
            dt,
        );
        (m, m2)
    };
    let c_rms_numeric = mean_sq.max(T::zero()).sqrt();
    let (c_rms, method) = match w.as_preset() {
        Some(p) => (cav_closed_form(p, cs), Method::Analytic),
        None => (c_rms_numeric, Method::Numeric),
    };
    let samples = opts.record.then(|| {
        let n = 2000usize;
        let span = if window > T::zero() { window } else { T::one() };
        (0..=n)
            .map(|k| {
                let t = span * T::lit(k as f64 / n as f64);
                (t, concurrence_at(w, cs, t))
            })
            .collect()
    });
    ConcurrenceReport {
        c0,
        c_rms,
        c_rms_numeric,
        c_mean: mean,
        method,
        window,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{PotentialParams, SingleWellSolution};
    use crate::spectrum::coupled_eigensystem;
    use crate::wavepacket::basis_amplitudes;

    fn cs(g: f64) -> CoupledSpectrum<f64> {
        let s = SingleWellSolution::new(&PotentialParams::default()).unwrap();
        coupled_eigensystem(&s, g).unwrap()
    }

    fn packet(p: Preset) -> Wavepacket<f64> {
        Wavepacket::from_preset(p)
    }

    #[test]
    fn product_state_stays_unentangled_uncoupled() {
        let c = cs(0.0);
        for &t in &[0.0, 3.0, 50.0, 1234.5] {
            assert!(concurrence_at(&packet(Preset::A), &c, t) < 1e-15);
            assert!((concurrence_at(&packet(Preset::B), &c, t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn initial_values() {
        assert!((concurrence_at(&packet(Preset::C), &cs(0.1), 0.0) - 0.0839).abs() < 1e-4);
        assert!((concurrence_initial(&packet(Preset::B), &cs(0.2)) - 0.316).abs() < 1e-3);
        assert!((concurrence_initial(&packet(Preset::D), &cs(0.1)) - 0.277).abs() < 1e-3);
        assert!(concurrence_initial(&packet(Preset::A), &cs(0.0)).abs() < 1e-15);
    }

    #[test]
    fn preset_closed_forms_match_general_formula() {
        for p in Preset::ALL {
            for &g in &[0.0, 0.02, 0.1, 0.2, 0.9] {
                let c = cs(g);
                let closed = concurrence_initial(&packet(p), &c);
                let general = concurrence_at(&packet(p), &c, 0.0);
                assert!((closed - general).abs() < 1e-14, "{p} g={g}");
            }
        }
    }

    #[test]
    fn matches_definition_via_amplitudes() {
        for p in Preset::ALL {
            let c = cs(0.17);
            for &t in &[0.0, 1.5, 17.0, 333.3] {
                let w = packet(p);
                let direct = concurrence_from_amplitudes(&basis_amplitudes(&w, &c, t));
                assert!((direct - concurrence_at(&w, &c, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_averages() {
        let a = |g| cav_closed_form(Preset::A, &cs(g));
        assert_eq!(a(0.0), 0.0);
        assert!((cav_squared_generic(Preset::A, &cs(0.0)).sqrt() - 0.707).abs() < 1e-3);
        assert!((a(0.1) - 0.643).abs() < 1e-3);
        assert!((a(0.2) - 0.622).abs() < 1e-3);
        assert!((cav_closed_form(Preset::C, &cs(0.2)) - 0.689).abs() < 1e-3);
        assert!((cav_closed_form(Preset::D, &cs(0.0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn numeric_average_tracks_closed_form() {
        let c = cs(0.1);
        let r = concurrence_average(&packet(Preset::D), &c, &AverageOptions::default());
        assert!((r.c_rms - 0.537).abs() < 1e-3);
        assert!((r.c_rms_numeric - r.c_rms).abs() / r.c_rms < 1e-2);
        assert!(r.c_mean <= r.c_rms_numeric + 1e-12);
        assert_eq!(r.method, Method::Analytic);
    }

    #[test]
    fn constant_concurrence_needs_no_window() {
        let r = concurrence_average(&packet(Preset::B), &cs(0.0), &AverageOptions::default());
        assert_eq!(r.window, 0.0);
        assert!((r.c_mean - 1.0).abs() < 1e-15);
    }

    #[test]
    fn custom_packets_average_numerically() {
        let w = Wavepacket::new([0.6, 0.0, 0.8, 0.0]).unwrap();
        let r = concurrence_average(
            &w,
            &cs(0.1),
            &AverageOptions {
                record: true,
                ..Default::default()
            },
        );
        assert_eq!(r.method, Method::Numeric);
        assert_eq!(r.c_rms, r.c_rms_numeric);
        assert_eq!(r.samples.as_ref().map(Vec::len), Some(2001));
    }
}

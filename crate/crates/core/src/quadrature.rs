//! Globally adaptive Gauss–Kronrod (7/15) integration.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Target bound on the summed per-interval error estimates.
    pub abs_tol: f64,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_intervals: usize,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            initial_intervals: 8,
            max_intervals: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error_estimate: T,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn kronrod_panel<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let radius = half * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod += T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * radius,
        error: ((kronrod - gauss) * radius).abs(),
    }
}

/// Integrates `f` over `[lo, hi]`, bisecting the worst panel until the summed
/// error estimate drops below `cfg.abs_tol`.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    cfg: &QuadratureConfig,
) -> Result<Integral<T>> {
    let n0 = cfg.initial_intervals.max(1);
    let width = (hi - lo) / T::lit(n0 as f64);
    let mut panels: Vec<Panel<T>> = (0..n0)
        .map(|i| {
            let a = lo + width * T::lit(i as f64);
            let b = if i + 1 == n0 { hi } else { a + width };
            kronrod_panel(&f, a, b)
        })
        .collect();

    let tol = T::lit(cfg.abs_tol);
    loop {
        let total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        if total_err <= tol {
            break;
        }
        if panels.len() >= cfg.max_intervals {
            let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            return Err(Error::Quadrature {
                estimate: value.as_f64(),
                error_estimate: total_err.as_f64(),
                intervals: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| {
                if p.error > best.1 {
                    (i, p.error)
                } else {
                    best
                }
            });
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.lo + p.hi);
        panels.push(kronrod_panel(&f, p.lo, mid));
        panels.push(kronrod_panel(&f, mid, p.hi));
    }

    // Sum in position order so the result does not depend on refinement history.
    panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(std::cmp::Ordering::Equal));
    let value = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error_estimate = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
    Ok(Integral {
        value,
        error_estimate,
        intervals: panels.len(),
    })
}

/// Composite trapezoid weights for `n` equally spaced nodes with spacing `h`.
pub fn trapezoid_weights<T: Real>(n: usize, h: T) -> Vec<T> {
    let mut w = vec![h; n];
    if n > 0 {
        w[0] = h * T::lit(0.5);
        w[n - 1] = h * T::lit(0.5);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x: f64| x.powi(7) - 3.0 * x * x,
            -1.0,
            2.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn gaussian_matches_sqrt_pi() {
        let r = integrate(
            |x: f64| (-x * x).exp(),
            -8.0,
            8.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn refuses_when_budget_exhausted() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-15,
            initial_intervals: 1,
            max_intervals: 2,
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 3.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { intervals: 2, .. }));
    }

    #[test]
    fn works_in_single_precision() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-5,
            ..Default::default()
        };
        let r = integrate(|x: f32| x.cos(), 0.0, std::f32::consts::FRAC_PI_2, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5);
    }
}

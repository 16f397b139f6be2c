//! Initial states over the coupled eigenbasis and their evolution.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::potential::SingleWellSolution;
use crate::quadrature::trapezoid_weights;
use crate::scalar::Real;
use crate::spectrum::CoupledSpectrum;

/// Norm deviations up to this size are treated as rounding and rescaled.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// Tolerance used to recognise a preset from raw coefficients.
const PRESET_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// Product state `Ψ_R(x₁)Ψ_R(x₂)` at g = 0.
    A,
    /// Bell-like `(|00⟩ + |11⟩)/√2` at g = 0.
    B,
    /// Ground plus first excited state.
    C,
    /// Equal weight on all four eigenstates.
    D,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::A, Preset::B, Preset::C, Preset::D];

    pub fn coefficients<T: Real>(self) -> [T; 4] {
        let h = T::lit(0.5);
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        match self {
            Preset::A => [h, r, z, h],
            Preset::B => [r, z, z, r],
            Preset::C => [r, r, z, z],
            Preset::D => [h, h, h, h],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::A => "A",
            Preset::B => "B",
            Preset::C => "C",
            Preset::D => "D",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Preset::A),
            "B" => Ok(Preset::B),
            "C" => Ok(Preset::C),
            "D" => Ok(Preset::D),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Real expansion coefficients a₀ … a₃ over the coupled eigenstates Φ_ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavepacket<T> {
    a: [T; 4],
}

impl<T: Real> Wavepacket<T> {
    /// Accepts coefficients whose squared norm is within [`RENORMALIZE_TOL`]
    /// of one, rescaling them to unit norm.
    pub fn new(a: [T; 4]) -> Result<Self> {
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        let norm_sqr = a.iter().fold(T::zero(), |acc, &v| acc + v * v);
        if (norm_sqr - T::one()).abs() > T::lit(RENORMALIZE_TOL) {
            return Err(Error::NotNormalized {
                norm: norm_sqr.sqrt().as_f64(),
                tolerance: RENORMALIZE_TOL,
            });
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(Self {
            a: a.map(|v| v * scale),
        })
    }

    pub fn from_preset(p: Preset) -> Self {
        Self {
            a: p.coefficients(),
        }
    }

    pub fn coefficients(&self) -> [T; 4] {
        self.a
    }

    /// |a_ν|².
    pub fn weights(&self) -> [T; 4] {
        self.a.map(|v| v * v)
    }

    /// Preset whose coefficients coincide with these, if any.
    pub fn as_preset(&self) -> Option<Preset> {
        let tol = T::lit(PRESET_MATCH_TOL);
        Preset::ALL.into_iter().find(|p| {
            p.coefficients::<T>()
                .iter()
                .zip(self.a.iter())
                .all(|(x, y)| (*x - *y).abs() <= tol)
        })
    }
}

/// Looks a preset up by name.
pub fn preset<T: Real>(name: &str) -> Result<Wavepacket<T>> {
    Ok(Wavepacket::from_preset(name.parse()?))
}

/// Amplitudes of Ψ(t) in the product basis `|kℓ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisAmplitudes<T> {
    pub c00: Complex<T>,
    pub c01: Complex<T>,
    pub c10: Complex<T>,
    pub c11: Complex<T>,
}

impl<T: Real> BasisAmplitudes<T> {
    pub fn norm_sqr(&self) -> T {
        self.c00.norm_sqr() + self.c01.norm_sqr() + self.c10.norm_sqr() + self.c11.norm_sqr()
    }

    /// Amplitude of `|kℓ⟩`.
    pub fn get(&self, k: usize, l: usize) -> Complex<T> {
        match (k, l) {
            (0, 0) => self.c00,
            (0, 1) => self.c01,
            (1, 0) => self.c10,
            (1, 1) => self.c11,
            _ => panic!("basis index ({k}, {l}) out of range"),
        }
    }
}

pub fn basis_amplitudes<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    t: T,
) -> BasisAmplitudes<T> {
    // Relative phases keep the arguments small; the common factor is applied once.
    let common = Complex::from_polar(T::one(), -cs.energies[0] * t / cs.hbar);
    let phase = |nu: usize| Complex::from_polar(T::one(), -cs.omega[nu] * t);
    let [a0, a1, a2, a3] = w.a;
    let (s, c) = cs.theta.sin_cos();
    let r = T::FRAC_1_SQRT_2();
    let (p1, p2, p3) = (phase(1), phase(2), phase(3));
    let p0 = Complex::new(T::one(), T::zero());
    BasisAmplitudes {
        c00: (p0 * (a0 * c) - p3 * (a3 * s)) * common,
        c01: (p1 * a1 - p2 * a2) * (common * r),
        c10: (p1 * a1 + p2 * a2) * (common * r),
        c11: (p0 * (a0 * s) + p3 * (a3 * c)) * common,
    }
}

/// Square lattice `n × n` on `[lo, hi]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 201,
            lo: -3.5,
            hi: 3.5,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !(self.lo.is_finite() && self.hi.is_finite()) || self.hi <= self.lo {
            return Err(Error::InvalidParameter(format!(
                "grid needs n >= 2 and lo < hi, got n={} lo={} hi={}",
                self.n, self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn points<T: Real>(&self) -> Vec<T> {
        let h = self.step();
        (0..self.n)
            .map(|i| T::lit(self.lo + h * i as f64))
            .collect()
    }
}

/// Ψ(x₁, x₂, t) sampled on a [`GridSpec`], stored row-major with x₁ as the row.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    pub grid: GridSpec,
    pub t: T,
    pub xs: Vec<T>,
    pub psi: Vec<Complex<T>>,
}

impl<T: Real> Field<T> {
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.psi[i * self.grid.n + j]
    }

    /// |Ψ|² in the same layout as `psi`.
    pub fn density(&self) -> Vec<T> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// ∬ |Ψ|² dx₁ dx₂ by the 2D trapezoid rule.
    pub fn norm_sqr(&self) -> T {
        self.overlap(self).re
    }

    /// ⟨self|other⟩ on the shared grid.
    pub fn overlap(&self, other: &Field<T>) -> Complex<T> {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let n = self.grid.n;
        let w = trapezoid_weights(n, T::lit(self.grid.step()));
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let mut row = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                row += self.at(i, j).conj() * other.at(i, j) * w[j];
            }
            acc += row * w[i];
        }
        acc
    }

    /// Lattice point with the largest |Ψ|²: `(x₁, x₂, |Ψ|²)`.
    pub fn peak(&self) -> (T, T, T) {
        let n = self.grid.n;
        let mut best = (0, T::neg_infinity());
        for (k, z) in self.psi.iter().enumerate() {
            let d = z.norm_sqr();
            if d > best.1 {
                best = (k, d);
            }
        }
        (self.xs[best.0 / n], self.xs[best.0 % n], best.1)
    }
}

/// Evaluates Ψ(x₁, x₂, t) = Σ c_kℓ(t) φ_k(x₁) φ_ℓ(x₂) on the grid.
pub fn psi_grid<T: Real>(
    w: &Wavepacket<T>,
    cs: &CoupledSpectrum<T>,
    s: &SingleWellSolution<T>,
    t: T,
    grid: &GridSpec,
) -> Result<Field<T>> {
    grid.validate()?;
    let reach = T::lit(grid.lo.abs().max(grid.hi.abs()));
    let limit = T::cosh_limit() / (T::lit(4.0) * s.params.kappa);
    if reach > limit {
        return Err(Error::Domain {
            x: reach.as_f64(),
            limit: limit.as_f64(),
        });
    }
    let xs: Vec<T> = grid.points();
    let phi: [Vec<T>; 2] = [
        xs.iter().map(|&x| s.phi(0, x)).collect::<Result<_>>()?,
        xs.iter().map(|&x| s.phi(1, x)).collect::<Result<_>>()?,
    ];
    let c = basis_amplitudes(w, cs, t);
    let n = grid.n;
    let mut psi = Vec::with_capacity(n * n);
    for i in 0..n {
        // Row i: Σ_kℓ c_kℓ φ_k(x₁ᵢ) φ_ℓ(x₂)
        let r0 = c.c00 * phi[0][i] + c.c10 * phi[1][i];
        let r1 = c.c01 * phi[0][i] + c.c11 * phi[1][i];
        for j in 0..n {
            psi.push(r0 * phi[0][j] + r1 * phi[1][j]);
        }
    }
    Ok(Field {
        grid: *grid,
        t,
        xs,
        psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialParams;
    use crate::spectrum::coupled_eigensystem;

    fn setup(g: f64) -> (SingleWellSolution<f64>, CoupledSpectrum<f64>) {
        let s = SingleWellSolution::new(&PotentialParams::default()).unwrap();
        let cs = coupled_eigensystem(&s, g).unwrap();
        (s, cs)
    }

    #[test]
    fn presets_are_normalized() {
        for p in Preset::ALL {
            let w = Wavepacket::<f64>::from_preset(p);
            let n: f64 = w.weights().iter().sum();
            assert!((n - 1.0).abs() < 1e-15, "{p}");
            assert_eq!(w.as_preset(), Some(p));
        }
        let a = preset::<f64>("A").unwrap().weights();
        for (got, want) in a.iter().zip([0.25, 0.5, 0.0, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn unknown_preset() {
        assert_eq!(
            preset::<f64>("E").unwrap_err(),
            Error::UnknownPreset("E".into())
        );
        assert_eq!("c".parse::<Preset>().unwrap(), Preset::C);
    }

    #[test]
    fn custom_normalization_policy() {
        let w = Wavepacket::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(w.coefficients(), [1.0, 0.0, 0.0, 0.0]);
        let nearly = Wavepacket::new([1.0 + 1e-10, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(nearly.coefficients()[0], 1.0);
        assert!(matches!(
            Wavepacket::new([1.0, 0.1, 0.0, 0.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(Wavepacket::new([f64::NAN, 0.0, 0.0, 0.0]).is_err());
        assert_eq!(
            Wavepacket::new([1.0, 0.0, 0.0, 0.0]).unwrap().as_preset(),
            None
        );
    }

    #[test]
    fn initial_amplitudes_uncoupled() {
        let (_, cs) = setup(0.0);
        let b = basis_amplitudes(&Wavepacket::from_preset(Preset::B), &cs, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.c00 - Complex::new(r, 0.0)).norm() < 1e-15);
        assert!(b.c01.norm() < 1e-15 && b.c10.norm() < 1e-15);
        assert!((b.c11 - Complex::new(r, 0.0)).norm() < 1e-15);

        // Preset A reproduces the product state Ψ_R(x₁)Ψ_R(x₂).
        let a = basis_amplitudes(&Wavepacket::from_preset(Preset::A), &cs, 0.0);
        for k in 0..2 {
            for l in 0..2 {
                assert!((a.get(k, l) - Complex::new(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let (_, cs) = setup(0.1);
        let w = Wavepacket::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        let p0 = basis_amplitudes(&w, &cs, 0.0);
        let p1 = basis_amplitudes(&w, &cs, 37.0);
        assert!((p1.c00.norm() - p0.c00.norm()).abs() < 1e-15);
        assert!((p1.c11.norm() - p0.c11.norm()).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_unsafe_bounds() {
        let (s, cs) = setup(0.0);
        let w = Wavepacket::from_preset(Preset::A);
        let bad = GridSpec {
            n: 5,
            lo: -400.0,
            hi: 1.0,
        };
        assert!(matches!(
            psi_grid(&w, &cs, &s, 0.0, &bad),
            Err(Error::Domain { .. })
        ));
        let degenerate = GridSpec {
            n: 1,
            lo: 0.0,
            hi: 1.0,
        };
        assert!(psi_grid(&w, &cs, &s, 0.0, &degenerate).is_err());
    }

    #[test]
    fn preset_peaks_uncoupled() {
        let (s, cs) = setup(0.0);
        let grid = GridSpec::default();
        let field = |p| psi_grid(&Wavepacket::from_preset(p), &cs, &s, 0.0, &grid).unwrap();

        let (x1, x2, _) = field(Preset::A).peak();
        assert!(x1 > 0.0 && x2 > 0.0);

        let b = field(Preset::B);
        let n = grid.n;
        let d = b.density();
        for i in 0..n {
            for j in 0..n {
                let mirrored = d[(n - 1 - i) * n + (n - 1 - j)];
                assert!((d[i * n + j] - mirrored).abs() < 1e-12);
            }
        }
        let (x1, x2, _) = b.peak();
        assert!(x1 * x2 > 0.0);
    }
}

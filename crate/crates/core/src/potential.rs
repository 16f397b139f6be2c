//! Razavy's hyperbolic double well and its quasi-exact single-well eigenpairs.
//!
//! With `y = κx` the potential reads
//! `V(x) = (ħ²κ²/2m) [(ξ²/8) cosh 4y − 4ξ cosh 2y − ξ²/8]`. The two lowest
//! levels are known in closed form; the corresponding eigenfunctions are
//! normalized here by adaptive quadrature.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scalar::Real;

/// Physical constants of one well plus the inter-well coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams<T> {
    pub hbar: T,
    pub mass: T,
    pub xi: T,
    pub kappa: T,
    pub g: T,
}

impl<T: Real> Default for PotentialParams<T> {
    fn default() -> Self {
        Self {
            hbar: T::one(),
            mass: T::one(),
            xi: T::one(),
            kappa: T::one(),
            g: T::zero(),
        }
    }
}

impl<T: Real> PotentialParams<T> {
    pub fn new(hbar: T, mass: T, xi: T, kappa: T, g: T) -> Result<Self> {
        let p = Self {
            hbar,
            mass,
            xi,
            kappa,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_coupling(self, g: T) -> Result<Self> {
        Self { g, ..self }.validate().map(|_| Self { g, ..self })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("xi", self.xi),
            ("kappa", self.kappa),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.g.is_finite() && self.g >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "coupling g must be finite and non-negative, got {}",
                self.g
            )));
        }
        Ok(())
    }

    /// `ħ²κ²/2m`, the unit in which the closed-form spectrum is expressed.
    pub fn energy_scale(&self) -> T {
        self.hbar * self.hbar * self.kappa * self.kappa / (T::lit(2.0) * self.mass)
    }
}

/// Evaluates Razavy's potential at `x`.
pub fn potential<T: Real>(x: T, p: &PotentialParams<T>) -> Result<T> {
    let y = p.kappa * x;
    let limit = T::cosh_limit();
    if !x.is_finite() || T::lit(4.0) * y.abs() > limit {
        return Err(Error::Domain {
            x: x.as_f64(),
            limit: (limit / (T::lit(4.0) * p.kappa)).as_f64(),
        });
    }
    let xi2_8 = p.xi * p.xi / T::lit(8.0);
    let bracket =
        xi2_8 * (T::lit(4.0) * y).cosh() - T::lit(4.0) * p.xi * (T::lit(2.0) * y).cosh() - xi2_8;
    Ok(p.energy_scale() * bracket)
}

/// Position and depth of the right-hand well minimum.
///
/// For `ξ ≥ 8` the barrier disappears and the single minimum sits at the origin.
pub fn well_minimum<T: Real>(p: &PotentialParams<T>) -> Result<(T, T)> {
    let ratio = T::lit(8.0) / p.xi;
    let x = if ratio > T::one() {
        ratio.acosh() / (T::lit(2.0) * p.kappa)
    } else {
        T::zero()
    };
    Ok((x, potential(x, p)?))
}

/// Closed-form energies of the four quasi-exact levels, ascending.
pub fn single_well_energies<T: Real>(p: &PotentialParams<T>) -> [T; 4] {
    let xi = p.xi;
    let two = T::lit(2.0);
    let five = T::lit(5.0);
    let four = T::lit(4.0);
    let root_minus = (four - two * xi + xi * xi).sqrt();
    let root_plus = (four + two * xi + xi * xi).sqrt();
    let s = p.energy_scale();
    [
        s * (-xi - five - two * root_minus),
        s * (xi - five - two * root_plus),
        s * (-xi - five + two * root_minus),
        s * (xi - five + two * root_plus),
    ]
}

/// Unnormalized eigenfunction of level `n` at reduced coordinate `y = κx`.
fn shape<T: Real>(n: usize, y: T, xi: T) -> T {
    let envelope = (-xi * (T::lit(2.0) * y).cosh() / T::lit(4.0)).exp();
    if envelope == T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let poly = if n == 0 {
        let c = four - xi + two * (four - two * xi + xi * xi).sqrt();
        three * xi * y.cosh() + c * (three * y).cosh()
    } else {
        let c = four + xi + two * (four + two * xi + xi * xi).sqrt();
        three * xi * y.sinh() + c * (three * y).sinh()
    };
    envelope * poly
}

/// Controls truncation and accuracy of the normalization integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleWellConfig {
    /// Integrals run over `|x| ≤ half_width_factor / κ`.
    pub half_width_factor: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for SingleWellConfig {
    fn default() -> Self {
        Self {
            half_width_factor: 6.0,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Exact single-well data: spectrum, normalization, and the dipole overlap γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleWellSolution<T> {
    pub params: PotentialParams<T>,
    /// ε₀ … ε₃.
    pub eps: [T; 4],
    /// A₀; the sign is part of the eigenfunction convention.
    pub norm0: T,
    /// A₁; positive means φ₁(x) > 0 for x > 0.
    pub norm1: T,
    /// ∫ φ₀ x φ₁ dx.
    pub gamma: T,
    pub well_minimum_x: T,
    pub well_minimum_v: T,
    pub barrier_top_v: T,
    /// Truncation half-width used for all integrals.
    pub half_width: T,
}

impl<T: Real> SingleWellSolution<T> {
    pub fn new(p: &PotentialParams<T>) -> Result<Self> {
        Self::with_config(p, &SingleWellConfig::default())
    }

    pub fn with_config(p: &PotentialParams<T>, cfg: &SingleWellConfig) -> Result<Self> {
        p.validate()?;
        let half_width = T::lit(cfg.half_width_factor) / p.kappa;
        let xi = p.xi;
        let kappa = p.kappa;
        let mut norms = [T::zero(); 2];
        for (n, norm) in norms.iter_mut().enumerate() {
            let sq = integrate(
                |x: T| {
                    let f = shape(n, kappa * x, xi);
                    f * f
                },
                -half_width,
                half_width,
                &cfg.quadrature,
            )?;
            *norm = sq.value.sqrt().recip();
        }
        let (xs, vs) = well_minimum(p)?;
        let mut s = Self {
            params: *p,
            eps: single_well_energies(p),
            norm0: norms[0],
            norm1: norms[1],
            gamma: T::zero(),
            well_minimum_x: xs,
            well_minimum_v: vs,
            barrier_top_v: potential(T::zero(), p)?,
            half_width,
        };
        s.gamma = overlap_gamma_with(&s, &cfg.quadrature)?;
        Ok(s)
    }

    /// Normalized φ_n(x) for n ∈ {0, 1}.
    pub fn phi(&self, n: usize, x: T) -> Result<T> {
        eigenfunction(n, x, self)
    }

    /// ε₁ + ε₀.
    pub fn eps_sum(&self) -> T {
        self.eps[1] + self.eps[0]
    }

    /// ε₁ − ε₀, the tunnelling splitting.
    pub fn eps_diff(&self) -> T {
        self.eps[1] - self.eps[0]
    }
}

/// Normalized eigenfunction φ_n(x); φ₀ is even, φ₁ odd.
pub fn eigenfunction<T: Real>(n: usize, x: T, s: &SingleWellSolution<T>) -> Result<T> {
    let norm = match n {
        0 => s.norm0,
        1 => s.norm1,
        _ => return Err(Error::InvalidLevel(n)),
    };
    Ok(norm * shape(n, s.params.kappa * x, s.params.xi))
}

/// γ = ∫ φ₀(x) x φ₁(x) dx with the default quadrature settings.
pub fn overlap_gamma<T: Real>(s: &SingleWellSolution<T>) -> Result<T> {
    overlap_gamma_with(s, &QuadratureConfig::default())
}

pub fn overlap_gamma_with<T: Real>(s: &SingleWellSolution<T>, cfg: &QuadratureConfig) -> Result<T> {
    let (xi, kappa) = (s.params.xi, s.params.kappa);
    let scale = s.norm0 * s.norm1;
    let r = integrate(
        |x: T| scale * shape(0, kappa * x, xi) * x * shape(1, kappa * x, xi),
        -s.half_width,
        s.half_width,
        cfg,
    )?;
    Ok(r.value)
}

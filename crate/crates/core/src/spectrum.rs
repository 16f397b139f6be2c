//! Two coupled wells truncated to the lowest doublet of each well.
//!
//! Product basis order throughout the crate is `|00⟩, |01⟩, |10⟩, |11⟩`
//! with `|kℓ⟩ = φ_k(x₁) φ_ℓ(x₂)`.

use crate::error::{Error, Result};
use crate::potential::SingleWellSolution;
use crate::scalar::Real;

pub type Matrix4<T> = [[T; 4]; 4];

/// Relative gap below which Ω₁ and Ω₂ count as resonant.
pub const DEGENERACY_RTOL: f64 = 1e-12;

/// Energy matrix of the coupled system in the product basis.
pub fn energy_matrix<T: Real>(s: &SingleWellSolution<T>, g: T) -> Matrix4<T> {
    let [e0, e1, _, _] = s.eps;
    let c = -g * s.gamma * s.gamma;
    let z = T::zero();
    [
        [e0 + e0, z, z, c],
        [z, e0 + e1, c, z],
        [z, c, e0 + e1, z],
        [c, z, z, e1 + e1],
    ]
}

/// Exact eigen-decomposition of [`energy_matrix`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledSpectrum<T> {
    pub g: T,
    pub hbar: T,
    /// E₀ … E₃, ascending for g ≥ 0.
    pub energies: [T; 4],
    /// Mixing angle in the {|00⟩, |11⟩} sector, within [0, π/4) for g ≥ 0.
    pub theta: T,
    /// Ω_ν = (E_ν − E₀)/ħ; `omega[0]` is zero and `omega[3] = omega[1] + omega[2]`.
    pub omega: [T; 4],
    /// ε = ε₁ + ε₀.
    pub eps_sum: T,
    /// δ = ε₁ − ε₀.
    pub eps_diff: T,
    /// γ² g, the off-diagonal coupling magnitude.
    pub coupling: T,
}

impl<T: Real> CoupledSpectrum<T> {
    /// Ω₁ = Ω₂ resonance. Exact at g = 0, tolerance-guarded otherwise.
    pub fn is_degenerate(&self) -> bool {
        self.g == T::zero()
            || (self.omega[2] - self.omega[1]).abs()
                <= T::lit(DEGENERACY_RTOL) * self.omega[3].abs()
    }

    /// Eigenvector Φ_ν in the product basis.
    pub fn eigenvector(&self, nu: usize) -> [T; 4] {
        let (s, c) = self.theta.sin_cos();
        let r = T::FRAC_1_SQRT_2();
        let z = T::zero();
        match nu {
            0 => [c, z, z, s],
            1 => [z, r, r, z],
            2 => [z, -r, r, z],
            3 => [-s, z, z, c],
            _ => panic!("eigenvector index {nu} out of range"),
        }
    }

    pub fn sin_2theta(&self) -> T {
        (T::lit(2.0) * self.theta).sin()
    }

    pub fn cos_2theta(&self) -> T {
        (T::lit(2.0) * self.theta).cos()
    }
}

/// Closed-form eigenvalues, mixing angle, and transition frequencies.
pub fn coupled_eigensystem<T: Real>(s: &SingleWellSolution<T>, g: T) -> Result<CoupledSpectrum<T>> {
    if !(g.is_finite() && g >= T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "coupling g must be finite and non-negative, got {g}"
        )));
    }
    let eps = s.eps_sum();
    let delta = s.eps_diff();
    let b = g * s.gamma * s.gamma;
    let root = delta.hypot(b);
    let hbar = s.params.hbar;

    let omega1 = (root - b) / hbar;
    let omega2 = (root + b) / hbar;
    let theta = (T::lit(0.5) * b.atan2(delta))
        .min(T::FRAC_PI_4())
        .max(-T::FRAC_PI_4());

    Ok(CoupledSpectrum {
        g,
        hbar,
        energies: [eps - root, eps - b, eps + b, eps + root],
        theta,
        omega: [T::zero(), omega1, omega2, omega1 + omega2],
        eps_sum: eps,
        eps_diff: delta,
        coupling: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialParams;

    fn well() -> SingleWellSolution<f64> {
        SingleWellSolution::new(&PotentialParams::default()).unwrap()
    }

    #[test]
    fn uncoupled_matrix_is_diagonal() {
        let m = energy_matrix(&well(), 0.0);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn matrix_is_symmetric_with_antidiagonal_coupling() {
        let s = well();
        let m = energy_matrix(&s, 0.1);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
        // −g γ² with γ = 1.13823
        assert!((m[0][3] + 0.1 * 1.13823f64.powi(2)).abs() < 5e-6);
        assert!((m[0][3] + 0.129557).abs() < 5e-6);
        assert_eq!(m[1][2], m[0][3]);
    }

    #[test]
    fn uncoupled_frequencies() {
        let cs = coupled_eigensystem(&well(), 0.0).unwrap();
        assert_eq!(cs.theta, 0.0);
        assert_eq!(cs.energies[1], cs.energies[2]);
        assert_eq!(cs.omega[1], cs.omega[2]);
        assert!((cs.omega[1] - 0.0863).abs() < 5e-5);
        assert!((cs.omega[3] - 0.1726).abs() < 1e-4);
        assert!(cs.is_degenerate());
    }

    #[test]
    fn bell_pair_time_at_weak_coupling() {
        let cs = coupled_eigensystem(&well(), 0.1).unwrap();
        let tau = std::f64::consts::PI / cs.omega[3];
        assert!((tau - 10.1).abs() < 0.05, "{tau}");
        assert!(!cs.is_degenerate());
    }

    #[test]
    fn theta_at_g_point_one() {
        let s = well();
        let cs = coupled_eigensystem(&s, 0.1).unwrap();
        // independent: ½ atan(gγ²/δ)
        let ratio = 0.1 * s.gamma * s.gamma / (s.eps[1] - s.eps[0]);
        assert!((ratio - 1.5013).abs() < 1e-3);
        assert!((cs.theta - 0.5 * ratio.atan()).abs() < 1e-14);
        assert!((cs.theta - 0.4916).abs() < 1e-4);
    }

    #[test]
    fn negative_coupling_is_rejected() {
        assert!(coupled_eigensystem(&well(), -0.1).is_err());
    }

    #[test]
    fn analytic_eigenvectors_satisfy_eigen_equation() {
        let s = well();
        for &g in &[0.0, 0.03, 0.1, 0.7] {
            let cs = coupled_eigensystem(&s, g).unwrap();
            let h = energy_matrix(&s, g);
            let hnorm = h.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            for nu in 0..4 {
                let v = cs.eigenvector(nu);
                let mut res = 0.0;
                for i in 0..4 {
                    let hv: f64 = (0..4).map(|j| h[i][j] * v[j]).sum();
                    res += (hv - cs.energies[nu] * v[i]).powi(2);
                }
                assert!(
                    res.sqrt() < 1e-12 * hnorm,
                    "g={g} nu={nu} res={}",
                    res.sqrt()
                );
            }
        }
    }
}

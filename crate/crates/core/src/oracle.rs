//! Brute-force numerical counterparts of the closed forms.
//!
//! A banded finite-difference Hamiltonian for the single well (eigenvalues by
//! inertia-count bisection, eigenvectors by inverse iteration), a Jacobi
//! solver for the 4×4 energy matrix, and a trapezoidal long-time average.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::{potential, PotentialParams};
use crate::scalar::Real;
use crate::spectrum::Matrix4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point second derivative, O(h²).
    Second,
    /// Five-point second derivative, O(h⁴).
    Fourth,
}

impl Stencil {
    pub fn order(self) -> u32 {
        match self {
            Stencil::Second => 2,
            Stencil::Fourth => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSolverConfig {
    /// Dirichlet walls sit at ±half_width.
    pub half_width: f64,
    /// Grid points including both walls.
    pub points: usize,
    pub stencil: Stencil,
}

impl Default for FdSolverConfig {
    fn default() -> Self {
        Self {
            half_width: 6.0,
            points: 2001,
            stencil: Stencil::Fourth,
        }
    }
}

impl FdSolverConfig {
    fn validate(&self) -> Result<()> {
        if self.points < 501 {
            return Err(Error::InvalidParameter(format!(
                "finite-difference grid needs at least 501 points, got {}",
                self.points
            )));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "half width must be positive, got {}",
                self.half_width
            )));
        }
        Ok(())
    }
}

/// Lowest eigenpairs of the discretized single-well Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSpectrum<T> {
    /// Grid including the two wall points.
    pub x: Vec<T>,
    pub h: T,
    pub energies: Vec<T>,
    /// Grid-L²-normalized eigenvectors, zero at the walls.
    pub states: Vec<Vec<T>>,
}

/// Symmetric banded matrix with bandwidth 1 or 2.
struct Banded<T> {
    diag: Vec<T>,
    /// `off[k][i] = A[i][i + k + 1]`.
    off: Vec<Vec<T>>,
}

/// LDLᵀ factorization of `A − σI` without pivoting.
struct Ldl<T> {
    d: Vec<T>,
    l1: Vec<T>,
    l2: Vec<T>,
}

impl<T: Real> Banded<T> {
    fn len(&self) -> usize {
        self.diag.len()
    }

    fn sub(&self, k: usize, i: usize) -> T {
        // A[i][i - k - 1]
        self.off.get(k).map_or(T::zero(), |band| band[i - k - 1])
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            for (k, band) in self.off.iter().enumerate() {
                if i + k + 1 < n {
                    r += band[i].abs();
                }
                if i > k {
                    r += band[i - k - 1].abs();
                }
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn factor(&self, sigma: T) -> Ldl<T> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let tiny = T::epsilon() * T::epsilon() * (lo.abs().max(hi.abs())).max(T::one());
        let mut d = vec![T::zero(); n];
        let mut l1 = vec![T::zero(); n];
        let mut l2 = vec![T::zero(); n];
        for i in 0..n {
            let mut di = self.diag[i] - sigma;
            if i >= 1 {
                di -= l1[i] * l1[i] * d[i - 1];
            }
            if i >= 2 {
                di -= l2[i] * l2[i] * d[i - 2];
            }
            if di.abs() < tiny {
                di = tiny;
            }
            d[i] = di;
            if i + 2 < n {
                l2[i + 2] = self.sub(1, i + 2) / di;
            }
            if i + 1 < n {
                let mut num = self.sub(0, i + 1);
                if i >= 1 {
                    num -= l2[i + 1] * l1[i] * d[i - 1];
                }
                l1[i + 1] = num / di;
            }
        }
        Ldl { d, l1, l2 }
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia).
    fn count_below(&self, sigma: T) -> usize {
        self.factor(sigma)
            .d
            .iter()
            .filter(|&&v| v < T::zero())
            .count()
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        let mut y: Vec<T> = self.diag.iter().zip(x).map(|(a, b)| *a * *b).collect();
        for (k, band) in self.off.iter().enumerate() {
            let s = k + 1;
            for i in 0..n.saturating_sub(s) {
                y[i] += band[i] * x[i + s];
                y[i + s] += band[i] * x[i];
            }
        }
        y
    }
}

impl<T: Real> Ldl<T> {
    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = b.len();
        let mut y = b.to_vec();
        for i in 0..n {
            if i >= 1 {
                let v = self.l1[i] * y[i - 1];
                y[i] -= v;
            }
            if i >= 2 {
                let v = self.l2[i] * y[i - 2];
                y[i] -= v;
            }
        }
        for i in 0..n {
            y[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            if i + 1 < n {
                let v = self.l1[i + 1] * y[i + 1];
                y[i] -= v;
            }
            if i + 2 < n {
                let v = self.l2[i + 2] * y[i + 2];
                y[i] -= v;
            }
        }
        y
    }
}

fn bisect_eigenvalue<T: Real>(m: &Banded<T>, index: usize) -> T {
    let (mut lo, mut hi) = m.gershgorin();
    for _ in 0..300 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if m.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    T::lit(0.5) * (lo + hi)
}

fn inverse_iteration<T: Real>(
    m: &Banded<T>,
    lambda: T,
    scale: T,
    lower: &[Vec<T>],
) -> Result<Vec<T>> {
    let n = m.len();
    let ldl = m.factor(lambda);
    let mut v: Vec<T> = (0..n)
        .map(|i| T::one() + T::lit(0.5) * T::lit(1.3 * i as f64).sin())
        .collect();
    let norm = |v: &[T]| v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
    for _ in 0..8 {
        let mut next = ldl.solve(&v);
        for u in lower {
            let proj = u.iter().zip(&next).fold(T::zero(), |a, (p, q)| a + *p * *q);
            next.iter_mut().zip(u).for_each(|(q, p)| *q -= proj * *p);
        }
        let nn = norm(&next);
        if !(nn.is_finite() && nn > T::zero()) {
            return Err(Error::Eigen(format!(
                "inverse iteration diverged near {lambda}"
            )));
        }
        next.iter_mut().for_each(|x| *x /= nn);
        v = next;
        let av = m.apply(&v);
        let residual = norm(
            &av.iter()
                .zip(&v)
                .map(|(a, b)| *a - lambda * *b)
                .collect::<Vec<_>>(),
        );
        if residual <= T::lit(1e-9) * scale {
            return Ok(v);
        }
    }
    Err(Error::Eigen(format!(
        "inverse iteration did not reach the residual target near {lambda}"
    )))
}

/// `k` lowest eigenpairs of `−(ħ²/2m) d²/dx² + V(x)` on a Dirichlet box.
pub fn fd_eigenpairs_with<T: Real, V: Fn(T) -> Result<T>>(
    v: V,
    hbar: T,
    mass: T,
    cfg: &FdSolverConfig,
    k: usize,
) -> Result<FdSpectrum<T>> {
    cfg.validate()?;
    let n = cfg.points;
    let half = T::lit(cfg.half_width);
    let h = (half + half) / T::lit((n - 1) as f64);
    let x: Vec<T> = (0..n).map(|i| -half + h * T::lit(i as f64)).collect();
    let interior = n - 2;
    if k == 0 || k > interior {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {k} eigenpairs"
        )));
    }
    let kinetic = hbar * hbar / (T::lit(2.0) * mass * h * h);
    let (center, off) = match cfg.stencil {
        Stencil::Second => (T::lit(2.0) * kinetic, vec![-kinetic]),
        Stencil::Fourth => (
            T::lit(30.0 / 12.0) * kinetic,
            vec![T::lit(-16.0 / 12.0) * kinetic, T::lit(1.0 / 12.0) * kinetic],
        ),
    };
    let diag = x[1..n - 1]
        .iter()
        .map(|&xi| v(xi).map(|vi| center + vi))
        .collect::<Result<Vec<T>>>()?;
    let off = off
        .iter()
        .enumerate()
        .map(|(b, &c)| vec![c; interior.saturating_sub(b + 1)])
        .collect();
    let m = Banded { diag, off };
    let kinetic_scale = center.abs();

    let mut inner_states: Vec<Vec<T>> = Vec::with_capacity(k);

    let mut energies = Vec::with_capacity(k);
    let mut states = Vec::with_capacity(k);
    for level in 0..k {
        let lambda = bisect_eigenvalue(&m, level);
        let scale = kinetic_scale.max(lambda.abs());
        let inner = inverse_iteration(&m, lambda, scale, &inner_states)?;
        let mut psi = Vec::with_capacity(n);
        psi.push(T::zero());
        psi.extend(inner.iter().copied());
        inner_states.push(inner);
        psi.push(T::zero());
        let norm = (psi.iter().fold(T::zero(), |a, &p| a + p * p) * h).sqrt();
        psi.iter_mut().for_each(|p| *p /= norm);
        fix_sign(&mut psi, &x, level);
        energies.push(lambda);
        states.push(psi);
    }
    Ok(FdSpectrum {
        x,
        h,
        energies,
        states,
    })
}

/// Even levels positive on average, odd levels positive on the right.
fn fix_sign<T: Real>(psi: &mut [T], x: &[T], level: usize) {
    let weight = |xi: T| {
        if level.is_multiple_of(2) {
            T::one()
        } else {
            xi
        }
    };
    let mut s = psi
        .iter()
        .zip(x)
        .fold(T::zero(), |a, (p, &xi)| a + *p * weight(xi));
    if s.abs() < T::lit(1e-8) {
        s = psi.iter().copied().fold(
            T::zero(),
            |best, p| if p.abs() > best.abs() { p } else { best },
        );
    }
    if s < T::zero() {
        psi.iter_mut().for_each(|p| *p = -*p);
    }
}

/// Finite-difference eigenpairs of Razavy's potential.
pub fn fd_eigenpairs<T: Real>(
    p: &PotentialParams<T>,
    cfg: &FdSolverConfig,
    k: usize,
) -> Result<FdSpectrum<T>> {
    p.validate()?;
    if T::lit(cfg.half_width) * p.kappa < T::lit(5.0) {
        return Err(Error::InvalidParameter(format!(
            "half width {} is below 5/κ",
            cfg.half_width
        )));
    }
    fd_eigenpairs_with(|x| potential(x, p), p.hbar, p.mass, cfg, k)
}

/// Grid estimate of ∫ φ₀ x φ₁ dx from the two lowest FD states.
pub fn fd_overlap_gamma<T: Real>(fd: &FdSpectrum<T>) -> Result<T> {
    if fd.states.len() < 2 {
        return Err(Error::InvalidParameter("need the two lowest states".into()));
    }
    let (p0, p1) = (&fd.states[0], &fd.states[1]);
    Ok(fd
        .x
        .iter()
        .zip(p0.iter().zip(p1))
        .fold(T::zero(), |a, (&x, (&u, &v))| a + u * x * v)
        * fd.h)
}

/// Eigenvalues of a real symmetric 4×4 matrix by cyclic Jacobi rotations, ascending.
pub fn numeric_4x4_eigen<T: Real>(m: &Matrix4<T>) -> [T; 4] {
    let mut a = *m;
    for _sweep in 0..64 {
        let off: T = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[i][j] * a[i][j]);
        let diag: T = (0..4).fold(T::zero(), |s, i| s + a[i][i] * a[i][i]);
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut e = [a[0][0], a[1][1], a[2][2], a[3][3]];
    e.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    e
}

/// Trapezoidal mean of `f` over `[0, window]` with step close to `dt`.
pub fn time_average<T: Real, F: Fn(T) -> T + Sync>(f: F, window: T, dt: T) -> T {
    time_average_many(|t| [f(t)], window, dt)[0]
}

/// Component-wise trapezoidal mean of a vector-valued `f`.
///
/// The window is split into an exact number of steps; partial sums are
/// formed per chunk in parallel and reduced in order, so the result does not
/// depend on the thread count.
pub fn time_average_many<T: Real, const N: usize, F: Fn(T) -> [T; N] + Sync>(
    f: F,
    window: T,
    dt: T,
) -> [T; N] {
    if window <= T::zero() {
        return f(T::zero());
    }
    let n = (window / dt).ceil().to_usize().unwrap_or(1).max(1);
    let h = window / T::lit(n as f64);
    let add = |mut a: [T; N], b: [T; N]| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    const CHUNK: usize = 16_384;
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<[T; N]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            (start..end).fold([T::zero(); N], |acc, k| add(acc, f(h * T::lit(k as f64))))
        })
        .collect();
    // Nodes 0..n-1 carry unit weight; move half of node 0's weight to node n.
    let (first, last) = (f(T::zero()), f(window));
    let half = T::lit(0.5);
    let mut sum = partial.into_iter().fold([T::zero(); N], add);
    for i in 0..N {
        sum[i] = (sum[i] + half * (last[i] - first[i])) * h / window;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(cfg: &FdSolverConfig) -> f64 {
        fd_eigenpairs_with(|x: f64| Ok(0.5 * x * x), 1.0, 1.0, cfg, 1)
            .unwrap()
            .energies[0]
    }

    #[test]
    fn harmonic_oscillator_ground_state() {
        let cfg = FdSolverConfig {
            half_width: 8.0,
            points: 2001,
            stencil: Stencil::Fourth,
        };
        assert!((harmonic(&cfg) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn harmonic_oscillator_ladder() {
        let fd = fd_eigenpairs_with(
            |x: f64| Ok(0.5 * x * x),
            1.0,
            1.0,
            &FdSolverConfig {
                half_width: 8.0,
                ..Default::default()
            },
            4,
        )
        .unwrap();
        for (n, e) in fd.energies.iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-5, "level {n}: {e}");
        }
        // Eigenvectors are orthonormal on the grid.
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * fd.h;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&fd.states[i], &fd.states[j]) - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn richardson_rate_matches_stencil_order() {
        for stencil in [Stencil::Second, Stencil::Fourth] {
            let err = |points| {
                (harmonic(&FdSolverConfig {
                    half_width: 8.0,
                    points,
                    stencil,
                }) - 0.5)
                    .abs()
            };
            let rate = err(501) / err(1001);
            let want = 2f64.powi(stencil.order() as i32);
            assert!((rate / want - 1.0).abs() < 0.1, "{stencil:?}: rate {rate}");
        }
    }

    #[test]
    fn near_degenerate_pair_stays_unmixed() {
        let p = PotentialParams::<f64>::default();
        let fd = fd_eigenpairs(&p, &FdSolverConfig::default(), 2).unwrap();
        let dot: f64 = fd.states[0]
            .iter()
            .zip(&fd.states[1])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * fd.h;
        assert!(dot.abs() < 1e-10, "{dot}");
        let gamma = fd_overlap_gamma(&fd).unwrap();
        assert!((gamma - 1.1382277).abs() < 5e-4, "{gamma}");
    }

    #[test]
    fn config_guards() {
        let v = |x: f64| Ok(x * x);
        let small = FdSolverConfig {
            points: 100,
            ..Default::default()
        };
        assert!(fd_eigenpairs_with(v, 1.0, 1.0, &small, 1).is_err());
        let narrow = FdSolverConfig {
            half_width: 3.0,
            ..Default::default()
        };
        assert!(fd_eigenpairs(&PotentialParams::<f64>::default(), &narrow, 2).is_err());
    }

    #[test]
    fn jacobi_on_simple_matrices() {
        let id = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(numeric_4x4_eigen(&id), [1.0; 4]);
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 2.0, 0.0, 0.0],
            [0.0, 0.0, 5.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        let e = numeric_4x4_eigen(&m);
        for (got, want) in e.iter().zip([-1.0f64, 1.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn average_of_pure_cosine_over_whole_periods() {
        let w = 2.0 * std::f64::consts::PI;
        let avg = time_average(|t: f64| (w * t).cos().powi(2), 10.0, 1e-3);
        assert!((avg - 0.5).abs() < 1e-12);
        assert_eq!(time_average(|_t: f64| 3.0, 0.0, 0.1), 3.0);
    }
}

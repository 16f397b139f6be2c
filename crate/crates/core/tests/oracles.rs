//! Brute-force cross-checks of the closed forms.

use cdw_core::oracle::{fd_eigenpairs, fd_overlap_gamma, time_average, FdSolverConfig, Stencil};
use cdw_core::potential::SingleWellConfig;
use cdw_core::sweep::{sweep, SweepConfig};
use cdw_core::{
    basis_amplitudes, cav_closed_form, concurrence_at, concurrence_average, correlation,
    coupled_eigensystem, energy_matrix, potential, psi_grid, AverageOptions, GridSpec,
    PotentialParams, Preset, SingleWellSolution, Wavepacket,
};

fn well() -> SingleWellSolution<f64> {
    SingleWellSolution::new(&PotentialParams::default()).unwrap()
}

/// Composite Simpson on `[-l, l]` with `2m` panels.
fn simpson(f: impl Fn(f64) -> f64, l: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = 2.0 * l / n as f64;
    let mut acc = f(-l) + f(l);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(-l + h * k as f64);
    }
    acc * h / 3.0
}

#[test]
fn eigenfunctions_are_normalized() {
    let s = well();
    for n in 0..2 {
        let norm = simpson(|x| s.phi(n, x).unwrap().powi(2), 6.0, 4000);
        assert!((norm - 1.0).abs() < 1e-8, "level {n}: {norm}");
    }
}

#[test]
fn gamma_converges_in_truncation_and_step() {
    let s = well();
    let wide = SingleWellSolution::<f64>::with_config(
        &PotentialParams::default(),
        &SingleWellConfig {
            half_width_factor: 12.0,
            ..Default::default()
        },
    )
    .unwrap();
    assert!((wide.gamma - s.gamma).abs() < 1e-10);
    let f = |x: f64| s.phi(0, x).unwrap() * x * s.phi(1, x).unwrap();
    let coarse = simpson(f, 6.0, 2000);
    let fine = simpson(f, 6.0, 4000);
    assert!((coarse - fine).abs() < 1e-8);
    assert!((fine - s.gamma).abs() < 1e-8);
}

/// Eighth-order central second derivative.
fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let c = [
        -205.0 / 72.0,
        8.0 / 5.0,
        -1.0 / 5.0,
        8.0 / 315.0,
        -1.0 / 560.0,
    ];
    let mut acc = c[0] * f(x);
    for (k, ck) in c.iter().enumerate().skip(1) {
        let dx = h * k as f64;
        acc += ck * (f(x + dx) + f(x - dx));
    }
    acc / (h * h)
}

#[test]
fn analytic_eigenfunctions_solve_the_schrodinger_equation() {
    for p in [
        PotentialParams::default(),
        PotentialParams::new(1.0, 1.0, 1.7, 1.3, 0.0).unwrap(),
    ] {
        let s = SingleWellSolution::new(&p).unwrap();
        let k = p.hbar * p.hbar / (2.0 * p.mass);
        let h = 0.01 / p.kappa;
        for n in 0..2 {
            let phi = |x: f64| s.phi(n, x).unwrap();
            let worst = (-400..=400)
                .map(|i| {
                    let x = i as f64 * 0.01 / p.kappa;
                    (-k * d2(phi, x, h) + potential(x, &p).unwrap() * phi(x) - s.eps[n] * phi(x))
                        .abs()
                })
                .fold(0.0, f64::max);
            assert!(
                worst < 1e-6 * s.eps[n].abs(),
                "xi={} level {n}: {worst}",
                p.xi
            );
        }
    }
}

#[test]
fn finite_difference_oracle_matches_analytic_well() {
    let p = PotentialParams::<f64>::default();
    let s = well();
    for stencil in [Stencil::Fourth, Stencil::Second] {
        let cfg = FdSolverConfig {
            stencil,
            points: 4001,
            ..Default::default()
        };
        let fd = fd_eigenpairs(&p, &cfg, 2).unwrap();
        for n in 0..2 {
            assert!(
                (fd.energies[n] - s.eps[n]).abs() < 1e-4,
                "{stencil:?} eps{n}"
            );
        }
        let gamma = fd_overlap_gamma(&fd).unwrap();
        assert!((gamma - s.gamma).abs() < 5e-4, "{stencil:?} gamma {gamma}");
        for n in 0..2 {
            let dist =
                fd.x.iter()
                    .zip(&fd.states[n])
                    .map(|(&x, &u)| (u - s.phi(n, x).unwrap()).powi(2))
                    .sum::<f64>()
                    * fd.h;
            assert!(dist.sqrt() < 1e-3, "{stencil:?} level {n}: {}", dist.sqrt());
        }
    }
}

#[test]
fn gamma_sign_follows_the_second_state() {
    let p = PotentialParams::<f64>::default();
    let mut fd = fd_eigenpairs(&p, &FdSolverConfig::default(), 2).unwrap();
    let g = fd_overlap_gamma(&fd).unwrap();
    fd.states[1].iter_mut().for_each(|v| *v = -*v);
    assert_eq!(fd_overlap_gamma(&fd).unwrap(), -g);
}

#[test]
fn coupled_matrix_entries_and_mixing_angle() {
    let s = well();
    let gamma = simpson(
        |x| s.phi(0, x).unwrap() * x * s.phi(1, x).unwrap(),
        6.0,
        4000,
    );
    let m = energy_matrix(&s, 0.1);
    assert!((m[0][3] + 0.1 * gamma * gamma).abs() < 1e-9);
    assert!((m[0][3] + 0.129557).abs() < 1e-5);
    let theta = 0.5 * (0.1 * gamma * gamma / s.eps_diff()).atan();
    let cs = coupled_eigensystem(&s, 0.1).unwrap();
    assert!((cs.theta - theta).abs() < 1e-9);
    assert!((cs.theta - 0.4916).abs() < 1e-4);
}

#[test]
fn grid_overlap_reproduces_correlation() {
    let s = well();
    let grid = GridSpec {
        n: 241,
        lo: -6.0,
        hi: 6.0,
    };
    for preset in Preset::ALL {
        let w = Wavepacket::from_preset(preset);
        for g in [0.0, 0.1, 0.2] {
            let cs = coupled_eigensystem(&s, g).unwrap();
            let origin = psi_grid(&w, &cs, &s, 0.0, &grid).unwrap();
            for t in [0.0, 3.3, 17.0, 120.0] {
                let f = psi_grid(&w, &cs, &s, t, &grid).unwrap();
                let overlap = origin.overlap(&f).norm();
                assert!(
                    (overlap - correlation(&w, &cs, t)).abs() < 1e-6,
                    "{preset} g={g} t={t}"
                );
                assert!((f.norm_sqr() - 1.0).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn initial_amplitudes_of_uncoupled_presets() {
    let s = well();
    let cs = coupled_eigensystem(&s, 0.0).unwrap();
    let a = basis_amplitudes(&Wavepacket::from_preset(Preset::A), &cs, 0.0);
    for k in 0..2 {
        for l in 0..2 {
            assert!((a.get(k, l).re - 0.5).abs() < 1e-15 && a.get(k, l).im.abs() < 1e-15);
        }
    }
    let b = basis_amplitudes(&Wavepacket::from_preset(Preset::B), &cs, 0.0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((b.c00.re - r).abs() < 1e-15 && (b.c11.re - r).abs() < 1e-15);
    assert_eq!((b.c01.norm(), b.c10.norm()), (0.0, 0.0));
}

#[test]
fn uncoupled_concurrence_is_frozen() {
    let s = well();
    let cs = coupled_eigensystem(&s, 0.0).unwrap();
    for preset in Preset::ALL {
        let w = Wavepacket::from_preset(preset);
        let values: Vec<f64> = (0..2000)
            .map(|k| concurrence_at(&w, &cs, k as f64 * 0.37))
            .collect();
        let spread = values.iter().cloned().fold(f64::MIN, f64::max)
            - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-12, "{preset}: {spread}");
    }
}

#[test]
fn fixed_window_average_for_d() {
    let s = well();
    let cs = coupled_eigensystem(&s, 0.1).unwrap();
    let w = Wavepacket::from_preset(Preset::D);
    let avg = time_average(|t| concurrence_at(&w, &cs, t).powi(2), 1e4, 0.01);
    let closed = cav_closed_form(Preset::D, &cs).powi(2);
    assert!((avg / closed - 1.0).abs() < 1e-2, "{avg} vs {closed}");
    assert!((closed.sqrt() - 0.537).abs() < 1e-3);
}

#[test]
fn averages_jump_at_the_resonance() {
    let s = well();
    let near = coupled_eigensystem(&s, 1e-4).unwrap();
    let at = coupled_eigensystem(&s, 0.0).unwrap();
    for (preset, zero_plus, zero) in [(Preset::A, 0.707, 0.0), (Preset::D, 0.612, 0.5)] {
        let w = Wavepacket::from_preset(preset);
        let numeric = concurrence_average(&w, &near, &AverageOptions::default()).c_rms_numeric;
        assert!(
            (numeric / zero_plus - 1.0).abs() < 2e-2,
            "{preset}: {numeric}"
        );
        let exact = concurrence_average(&w, &at, &AverageOptions::default());
        assert!((exact.c_rms - zero).abs() < 1e-12);
        assert!((exact.c_rms_numeric - zero).abs() < 1e-9);
    }
}

#[test]
fn mean_never_exceeds_rms_on_a_sweep() {
    let s = well();
    let packets: Vec<_> = Preset::ALL
        .iter()
        .map(|p| (p.name().to_string(), Wavepacket::from_preset(*p)))
        .collect();
    let gs = [0.0, 0.03, 0.1, 0.25];
    for row in sweep(&s, &packets, &gs, &SweepConfig::default()).unwrap() {
        assert!(
            row.c_mean <= row.c_av_numeric * (1.0 + 1e-12),
            "{} g={}",
            row.label,
            row.g
        );
        assert!((0.0..=1.0).contains(&row.c0));
    }
}

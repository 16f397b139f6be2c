//! Oracle comparisons and reference-value regressions.

use serde::Serialize;

use cdw_core::entanglement::cav_squared_generic;
use cdw_core::oracle::{fd_eigenpairs, fd_overlap_gamma, numeric_4x4_eigen, FdSolverConfig};
use cdw_core::potential::well_minimum;
use cdw_core::{
    cav_closed_form, concurrence_average, concurrence_initial, coupled_eigensystem, energy_matrix,
    orthogonality_time, potential, psi_grid, speed_limit, AverageOptions, GridSpec,
    PotentialParams, Preset, SearchOptions, SingleWellSolution, Wavepacket,
};

use crate::args::ValidateArgs;
use crate::config::resolve;
use crate::error::{CliError, CliResult};
use crate::output::{fmt9, r9, to_json, Csv, Format, Sink};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    /// `abs` or `rel`.
    pub mode: &'static str,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Default)]
struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, name: String, value: f64, reference: f64, tolerance: f64, relative: bool) {
        let err = (value - reference).abs();
        let bound = if relative {
            tolerance * reference.abs()
        } else {
            tolerance
        };
        self.checks.push(Check {
            name,
            value: r9(value),
            reference: r9(reference),
            mode: if relative { "rel" } else { "abs" },
            tolerance,
            passed: err <= bound,
        });
    }

    fn abs(&mut self, name: impl Into<String>, value: f64, reference: f64, tol: f64) {
        self.push(name.into(), value, reference, tol, false);
    }

    fn rel(&mut self, name: impl Into<String>, value: f64, reference: f64, tol: f64) {
        self.push(name.into(), value, reference, tol, true);
    }

    fn fail(&mut self, name: impl Into<String>, reason: &str) {
        self.checks.push(Check {
            name: format!("{}: {reason}", name.into()),
            value: None,
            reference: None,
            mode: "abs",
            tolerance: 0.0,
            passed: false,
        });
    }
}

const G3: [f64; 3] = [0.0, 0.1, 0.2];

const TAU_REF: [(Preset, [f64; 3]); 4] = [
    (Preset::A, [36.40, 121.0, 218.8]),
    (Preset::B, [18.2, 10.1, 5.75]),
    (Preset::C, [36.40, 120.3, 224.5]),
    (Preset::D, [36.40, 11.02, 5.903]),
];

const C0_REF: [(Preset, [f64; 3]); 4] = [
    (Preset::A, [0.0, 0.223, 0.342]),
    (Preset::B, [1.0, 0.554, 0.316]),
    (Preset::C, [0.5, 0.0839, 0.0256]),
    (Preset::D, [0.5, 0.277, 0.158]),
];

const CAV_REF: [(Preset, [f64; 3]); 4] = [
    (Preset::A, [0.0, 0.643, 0.622]),
    (Preset::B, [1.0, 0.808, 0.742]),
    (Preset::C, [0.5, 0.651, 0.689]),
    (Preset::D, [0.5, 0.537, 0.512]),
];

fn is_canonical(p: &PotentialParams<f64>) -> bool {
    [p.hbar, p.mass, p.xi, p.kappa] == [1.0; 4]
}

fn oracle_checks(
    r: &mut Report,
    p: &PotentialParams<f64>,
    s: &SingleWellSolution<f64>,
) -> CliResult<()> {
    let cfg = FdSolverConfig {
        half_width: 6.0 / p.kappa,
        ..FdSolverConfig::default()
    };
    let fd = fd_eigenpairs(p, &cfg, 2)?;
    let scale = p.energy_scale().abs().max(1.0);
    for n in 0..2 {
        r.abs(
            format!("fd_eps{n}_vs_closed_form"),
            fd.energies[n],
            s.eps[n],
            1e-4 * scale,
        );
    }
    r.abs(
        "fd_gamma_vs_quadrature",
        fd_overlap_gamma(&fd)?,
        s.gamma,
        5e-4 / p.kappa,
    );

    for g in G3 {
        let cs = coupled_eigensystem(s, g)?;
        let m = energy_matrix(s, g);
        let norm = m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let numeric = numeric_4x4_eigen(&m);
        for (nu, (&n, &e)) in numeric.iter().zip(&cs.energies).enumerate() {
            r.abs(format!("jacobi_E{nu}_g{g}"), n, e, 1e-12 * norm);
        }
        r.abs(
            format!("omega3_minus_omega1_omega2_g{g}"),
            cs.omega[3] - cs.omega[1] - cs.omega[2],
            0.0,
            0.0,
        );
    }

    let cs = coupled_eigensystem(s, 0.1)?;
    let w = Wavepacket::from_preset(Preset::D);
    let grid = GridSpec {
        n: 241,
        lo: -6.0 / p.kappa,
        hi: 6.0 / p.kappa,
    };
    let f = psi_grid(&w, &cs, s, 0.0, &grid)?;
    r.abs("grid_norm_D_g0.1", f.norm_sqr(), 1.0, 1e-6);
    for preset in Preset::ALL {
        let w = Wavepacket::from_preset(preset);
        let c = concurrence_average(&w, &cs, &AverageOptions::default());
        r.rel(
            format!("cav_numeric_vs_closed_{preset}_g0.1"),
            c.c_rms_numeric,
            c.c_rms,
            1e-2,
        );
    }
    Ok(())
}

fn regression_checks(
    r: &mut Report,
    p: &PotentialParams<f64>,
    s: &SingleWellSolution<f64>,
) -> CliResult<()> {
    for (n, e) in [-4.73205, -4.64575, -1.26795, 0.645751]
        .into_iter()
        .enumerate()
    {
        r.abs(format!("eps{n}"), s.eps[n], e, 1e-5);
    }
    r.abs("potential_at_origin", potential(0.0, p)?, -2.0, 1e-12);
    let (xs, vs) = well_minimum(p)?;
    r.abs("well_minimum_x", xs, 1.38433, 1e-4);
    r.abs("well_minimum_v", vs, -8.125, 1e-4);
    r.abs("gamma", s.gamma, 1.13823, 1e-4);
    r.abs("eps_sum", s.eps_sum(), -9.3778, 1e-3);
    r.abs("eps_diff", s.eps_diff(), 0.0863, 1e-4);
    r.abs(
        "theta_g0.1",
        coupled_eigensystem(s, 0.1)?.theta,
        0.4916,
        1e-3,
    );

    let search = SearchOptions::numeric();
    for (i, g) in G3.into_iter().enumerate() {
        let cs = coupled_eigensystem(s, g)?;
        for (preset, refs) in TAU_REF {
            let w = Wavepacket::from_preset(preset);
            match orthogonality_time(&w, &cs, &search) {
                Ok(o) => r.rel(format!("tau_{preset}_g{g}"), o.tau, refs[i], 5e-3),
                Err(e) => r.fail(format!("tau_{preset}_g{g}"), &e.to_string()),
            }
        }
        for (preset, refs) in C0_REF {
            let w = Wavepacket::from_preset(preset);
            r.abs(
                format!("c0_{preset}_g{g}"),
                concurrence_initial(&w, &cs),
                refs[i],
                1e-3,
            );
        }
        for (preset, refs) in CAV_REF {
            r.abs(
                format!("cav_{preset}_g{g}"),
                cav_closed_form(preset, &cs),
                refs[i],
                1e-3,
            );
        }
        let w = Wavepacket::from_preset(Preset::A);
        let tau = orthogonality_time(&w, &cs, &search)
            .map(|o| o.tau)
            .unwrap_or(f64::NAN);
        let ratio = speed_limit(&w, &cs, tau)?.ratio;
        r.rel(format!("ratio_A_g{g}"), ratio, [1.414, 7.00, 20.0][i], 5e-3);
    }
    let cs = coupled_eigensystem(s, 1e-4)?;
    r.abs(
        "cav_A_g0+",
        cav_squared_generic(Preset::A, &cs).sqrt(),
        0.707,
        1e-3,
    );
    r.abs(
        "cav_D_g0+",
        cav_squared_generic(Preset::D, &cs).sqrt(),
        0.612,
        1e-3,
    );
    Ok(())
}

pub fn checks(p: &PotentialParams<f64>) -> CliResult<Vec<Check>> {
    let s = SingleWellSolution::new(p)?;
    let mut r = Report::default();
    oracle_checks(&mut r, p, &s)?;
    if is_canonical(p) {
        regression_checks(&mut r, p, &s)?;
    }
    Ok(r.checks)
}

pub fn validate(args: &ValidateArgs) -> CliResult<()> {
    let cfg = resolve(&args.common, Format::Json)?;
    let checks = checks(&cfg.params)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let sink = Sink::new(cfg.out.as_deref())?;
    let report = to_json(&serde_json::json!({
        "passed": failed.is_empty(),
        "total": checks.len(),
        "failed": failed,
        "regressions_included": is_canonical(&cfg.params),
        "checks": checks,
    }));
    let mut csv = Csv::new(&["name", "value", "reference", "mode", "tolerance", "passed"]);
    for c in &checks {
        csv.row([
            c.name.clone(),
            c.value.map(fmt9).unwrap_or_default(),
            c.reference.map(fmt9).unwrap_or_default(),
            c.mode.to_string(),
            fmt9(c.tolerance),
            c.passed.to_string(),
        ]);
    }
    let csv = csv.into_string();
    if sink.is_dir() {
        sink.emit("validate.json", &report)?;
        sink.emit("validate.csv", &csv)?;
    } else {
        sink.emit(
            "",
            if cfg.format == Format::Csv {
                &csv
            } else {
                &report
            },
        )?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )))
    }
}

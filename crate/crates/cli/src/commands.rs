//! The `spectrum`, `dynamics`, `sweep` and `field` subcommands.

use serde_json::{json, Value};

use cdw_core::sweep::{sweep, SweepConfig, SweepRow};
use cdw_core::{
    concurrence_at, concurrence_average, correlation, coupled_eigensystem, orthogonality_time,
    psi_grid, speed_limit, AverageOptions, Error as CoreError, GridSpec, SearchOptions,
    SingleWellSolution,
};

use crate::args::{
    parse_grid, parse_times, DynamicsArgs, FieldArgs, SpectrumArgs, SweepArgs, TimeSpec,
};
use crate::config::{resolve, Resolved};
use crate::error::{CliError, CliResult};
use crate::output::{fmt9, fmt9_opt, r9, to_json, Csv, Format, Sink};
use crate::state::{couplings, g_tag, packets, positive};

fn params_json(cfg: &Resolved) -> Value {
    let p = &cfg.params;
    json!({ "hbar": r9(p.hbar), "mass": r9(p.mass), "xi": r9(p.xi), "kappa": r9(p.kappa) })
}

fn search_options(
    tmax: Option<f64>,
    dt: Option<f64>,
    threshold: Option<f64>,
    cfg: &Resolved,
) -> CliResult<SearchOptions> {
    let mut opts = SearchOptions::default();
    if let Some(t) = tmax.or(cfg.file.tmax) {
        opts.t_max = positive("tmax", t)?;
    }
    if let Some(d) = dt.or(cfg.file.dt) {
        opts.dt = Some(positive("dt", d)?);
    }
    if let Some(e) = threshold.or(cfg.file.threshold) {
        opts.threshold = positive("threshold", e)?;
    }
    Ok(opts)
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let cfg = resolve(&args.common, Format::Csv)?;
    let gs = couplings(&args.g, &cfg, "0:0.3:31")?;
    let s = SingleWellSolution::new(&cfg.params)?;
    let sink = Sink::new(cfg.out.as_deref())?;

    let mut csv = Csv::new(&[
        "g", "E0", "E1", "E2", "E3", "theta", "omega1", "omega2", "omega3",
    ]);
    let mut rows = Vec::new();
    for &g in &gs {
        let cs = coupled_eigensystem(&s, g)?;
        let e = cs.energies;
        let o = cs.omega;
        csv.row([g, e[0], e[1], e[2], e[3], cs.theta, o[1], o[2], o[3]].map(fmt9));
        rows.push(json!({
            "g": r9(g),
            "energies": e.map(r9),
            "theta": r9(cs.theta),
            "omega": [r9(o[1]), r9(o[2]), r9(o[3])],
        }));
    }
    let report = json!({
        "params": params_json(&cfg),
        "single_well": {
            "eps": s.eps.map(r9),
            "eps_sum": r9(s.eps_sum()),
            "eps_diff": r9(s.eps_diff()),
            "gamma": r9(s.gamma),
            "norm0": r9(s.norm0),
            "norm1": r9(s.norm1),
            "well_minimum_x": r9(s.well_minimum_x),
            "well_minimum_v": r9(s.well_minimum_v),
            "barrier_top_v": r9(s.barrier_top_v),
        },
        "rows": rows,
    });
    let (csv, report) = (csv.into_string(), to_json(&report));
    if sink.is_dir() {
        sink.emit("spectrum.csv", &csv)?;
        sink.emit("spectrum.json", &report)?;
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
    Ok(())
}

pub fn dynamics(args: &DynamicsArgs) -> CliResult<()> {
    let cfg = resolve(&args.common, Format::Csv)?;
    let packets = packets(&args.state, &cfg, "A")?;
    let gs = couplings(&args.g, &cfg, "0")?;
    let search = search_options(args.tmax, None, args.threshold, &cfg)?;
    let dt = positive("dt", args.dt.or(cfg.file.dt).unwrap_or(0.05))?;
    let t_end = search.t_max;
    let steps = (t_end / dt).round() as usize;
    let s = SingleWellSolution::new(&cfg.params)?;
    let sink = Sink::new(cfg.out.as_deref())?;
    let multiple = packets.len() * gs.len() > 1;
    if multiple && !sink.is_dir() {
        return Err(CliError::Usage(
            "several states or couplings need --out".into(),
        ));
    }

    for (label, w) in &packets {
        for &g in &gs {
            let cs = coupled_eigensystem(&s, g)?;
            let mut csv = Csv::new(&["t", "gamma", "concurrence"]);
            for k in 0..=steps {
                let t = dt * k as f64;
                csv.row([t, correlation(w, &cs, t), concurrence_at(w, &cs, t)].map(fmt9));
            }
            let orth = match orthogonality_time(w, &cs, &search) {
                Ok(r) => Ok(r),
                Err(CoreError::NoOrthogonalState {
                    min_gamma,
                    t_at_min,
                    ..
                }) => Err((min_gamma, t_at_min)),
                Err(e) => return Err(e.into()),
            };
            let tau = orth.as_ref().ok().map(|r| r.tau);
            let sl = speed_limit(w, &cs, tau.unwrap_or(f64::NAN))?;
            let c = concurrence_average(w, &cs, &AverageOptions::default());
            let tau_block = match &orth {
                Ok(r) => json!({
                    "status": "ok",
                    "tau": r9(r.tau),
                    "method": r.method.as_str(),
                    "gamma_residual": r9(r.gamma_residual),
                    "ratio": r9(sl.ratio),
                }),
                Err((min_gamma, t_at_min)) => json!({
                    "status": "no_orthogonal_state",
                    "min_gamma": r9(*min_gamma),
                    "t_at_min": r9(*t_at_min),
                }),
            };
            let report = json!({
                "params": params_json(&cfg),
                "state": label,
                "coefficients": w.coefficients().map(r9),
                "g": r9(g),
                "theta": r9(cs.theta),
                "omega": [r9(cs.omega[1]), r9(cs.omega[2]), r9(cs.omega[3])],
                "orthogonality": tau_block,
                "speed_limit": {
                    "mean_energy": r9(sl.mean_energy),
                    "energy_spread": r9(sl.energy_spread),
                    "ml_bound": r9(sl.ml_bound),
                    "mt_bound": r9(sl.mt_bound),
                    "tau_min": r9(sl.tau_min),
                },
                "concurrence": {
                    "c0": r9(c.c0),
                    "c_av": r9(c.c_rms),
                    "c_av_method": c.method.as_str(),
                    "c_av_numeric": r9(c.c_rms_numeric),
                    "c_mean": r9(c.c_mean),
                    "window": r9(c.window),
                },
                "series": { "t_max": r9(t_end), "dt": r9(dt), "samples": steps + 1 },
            });
            let (csv, report) = (csv.into_string(), to_json(&report));
            if sink.is_dir() {
                let stem = format!("dynamics_{label}_g{}", g_tag(g));
                sink.emit(&format!("{stem}.csv"), &csv)?;
                sink.emit(&format!("{stem}.json"), &report)?;
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
        }
    }
    Ok(())
}

const SWEEP_HEADER: [&str; 18] = [
    "state",
    "g",
    "status",
    "tau",
    "tau_method",
    "gamma_residual",
    "tau_min",
    "ratio",
    "c0",
    "c_av",
    "c_av_numeric",
    "c_mean",
    "theta",
    "omega1",
    "omega2",
    "omega3",
    "mean_energy",
    "energy_spread",
];

fn sweep_csv(rows: &[SweepRow<f64>]) -> String {
    let mut csv = Csv::new(&SWEEP_HEADER);
    for r in rows {
        csv.row([
            r.label.clone(),
            fmt9(r.g),
            r.status.as_str().to_string(),
            fmt9_opt(r.tau),
            r.tau_method
                .map(|m| m.as_str().to_string())
                .unwrap_or_default(),
            fmt9(r.gamma_residual),
            fmt9(r.tau_min),
            fmt9_opt(r.ratio),
            fmt9(r.c0),
            fmt9(r.c_av),
            fmt9(r.c_av_numeric),
            fmt9(r.c_mean),
            fmt9(r.theta),
            fmt9(r.omega[1]),
            fmt9(r.omega[2]),
            fmt9(r.omega[3]),
            fmt9(r.mean_energy),
            fmt9(r.energy_spread),
        ]);
    }
    csv.into_string()
}

fn sweep_json(rows: &[SweepRow<f64>], cfg: &Resolved, sc: &SweepConfig) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "state": r.label,
                "g": r9(r.g),
                "status": r.status.as_str(),
                "tau": r.tau.and_then(r9),
                "tau_method": r.tau_method.map(|m| m.as_str()),
                "gamma_residual": r9(r.gamma_residual),
                "tau_min": r9(r.tau_min),
                "ratio": r.ratio.and_then(r9),
                "c0": r9(r.c0),
                "c_av": r9(r.c_av),
                "c_av_numeric": r9(r.c_av_numeric),
                "c_mean": r9(r.c_mean),
                "theta": r9(r.theta),
                "omega": [r9(r.omega[1]), r9(r.omega[2]), r9(r.omega[3])],
                "mean_energy": r9(r.mean_energy),
                "energy_spread": r9(r.energy_spread),
            })
        })
        .collect();
    to_json(&json!({
        "params": params_json(cfg),
        "search": {
            "threshold": r9(sc.search.threshold),
            "t_max": r9(sc.search.t_max),
            "dt": sc.search.dt.and_then(r9),
        },
        "rows": rows,
    }))
}

pub fn sweep_cmd(args: &SweepArgs) -> CliResult<()> {
    let cfg = resolve(&args.common, Format::Csv)?;
    let packets = packets(&args.state, &cfg, "all")?;
    let gs = couplings(&args.g, &cfg, "0:0.3:31")?;
    let sc = SweepConfig {
        search: search_options(args.tmax, args.dt, args.threshold, &cfg)?,
        average: AverageOptions::default(),
    };
    let s = SingleWellSolution::new(&cfg.params)?;
    let sink = Sink::new(cfg.out.as_deref())?;
    let rows = sweep(&s, &packets, &gs, &sc)?;
    let (csv, report) = (sweep_csv(&rows), sweep_json(&rows, &cfg, &sc));
    if sink.is_dir() {
        sink.emit("sweep.csv", &csv)?;
        sink.emit("sweep.json", &report)?;
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
    Ok(())
}

pub fn field(args: &FieldArgs) -> CliResult<()> {
    let cfg = resolve(&args.common, Format::Csv)?;
    let packets = packets(&args.state, &cfg, "A")?;
    let gs = couplings(&args.g, &cfg, "0")?;
    let times = parse_times(
        &args
            .times
            .clone()
            .or_else(|| cfg.file.times.clone())
            .unwrap_or_else(|| "0".into()),
    )?;
    let grid = match args.grid.clone().or_else(|| cfg.file.grid.clone()) {
        Some(g) => parse_grid(&g)?,
        None => GridSpec::default(),
    };
    let s = SingleWellSolution::new(&cfg.params)?;
    let sink = Sink::new(cfg.out.as_deref())?;
    let single = packets.len() * gs.len() * times.len() == 1;
    if !single && !sink.is_dir() && cfg.format == Format::Csv {
        return Err(CliError::Usage(
            "several grid dumps need --out (or --format json for metadata only)".into(),
        ));
    }

    for (label, w) in &packets {
        for &g in &gs {
            let cs = coupled_eigensystem(&s, g)?;
            let needs_tau = times.iter().any(|t| matches!(t, TimeSpec::TauMultiple(_)));
            let tau = if needs_tau {
                Some(orthogonality_time(w, &cs, &SearchOptions::default())?.tau)
            } else {
                None
            };
            let origin = psi_grid(w, &cs, &s, 0.0, &grid)?;
            let stem = format!("field_{label}_g{}", g_tag(g));
            let mut dumps = Vec::new();
            for (k, spec) in times.iter().enumerate() {
                let (t, token) = match *spec {
                    TimeSpec::Absolute(t) => (t, format!("{t}")),
                    TimeSpec::TauMultiple(m) => (m * tau.expect("tau computed"), format!("{m}tau")),
                };
                let f = psi_grid(w, &cs, &s, t, &grid)?;
                let mut csv = Csv::new(&["x1", "x2", "density"]);
                let n = grid.n;
                for (idx, d) in f.density().into_iter().enumerate() {
                    csv.row([fmt9(f.xs[idx / n]), fmt9(f.xs[idx % n]), fmt9(d)]);
                }
                let file = format!("{stem}_t{k}.csv");
                if sink.is_dir() {
                    sink.emit(&file, &csv.into_string())?;
                } else if cfg.format == Format::Csv {
                    sink.emit("", &csv.into_string())?;
                }
                let (px, py, pd) = f.peak();
                dumps.push(json!({
                    "index": k,
                    "time": token,
                    "t": r9(t),
                    "file": file,
                    "norm": r9(f.norm_sqr()),
                    "overlap_with_t0": r9(origin.overlap(&f).norm()),
                    "peak": { "x1": r9(px), "x2": r9(py), "density": r9(pd) },
                }));
            }
            let meta = to_json(&json!({
                "params": params_json(&cfg),
                "state": label,
                "coefficients": w.coefficients().map(r9),
                "g": r9(g),
                "tau": tau.and_then(r9),
                "grid": { "n": grid.n, "lo": r9(grid.lo), "hi": r9(grid.hi) },
                "layout": "rows x1 ascending, x2 ascending within each x1",
                "dumps": dumps,
            }));
            if sink.is_dir() {
                sink.emit(&format!("{stem}.json"), &meta)?;
            } else if cfg.format == Format::Json {
                sink.emit("", &meta)?;
            }
        }
    }
    Ok(())
}

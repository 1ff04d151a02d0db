//! One pipeline per run kind. Each returns the files it wrote and a JSON
//! summary for the sidecar.

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use polariton_core::dynamics::{default_grid, spatial_density, Snapshot};
use polariton_core::signals::{
    broaden, dipole_distribution, dipole_distribution_dense, features, trps, twodir, EchoPulses,
    LargeEnsemble, SpectrumGrid, TrpsOptions, TwoDimOptions,
};
use polariton_core::{Dynamics, SystemParams};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{AxisConvention, RunConfig, RunKind};
use crate::error::CliError;
use crate::output::{ensure_dir, write_json, Derived, Sidecar, Table, SOFTWARE};
use crate::validate;

pub struct RunSummary {
    pub outputs: Vec<PathBuf>,
    pub sidecar: PathBuf,
}

/// Runs `config`, writing into `out_dir` (the config's own `output_dir` if `None`).
pub fn execute(config: &RunConfig, out_dir: Option<&Path>) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let resolved = config.resolved()?;
    let params = resolved.system.params()?;
    let dir = ensure_dir(out_dir.unwrap_or(Path::new(&config.run.output_dir)))?;
    let name = &config.run.name;
    let file = |suffix: &str| dir.join(format!("{name}{suffix}"));

    let (outputs, results) = match config.run.kind {
        RunKind::Dynamics => run_dynamics(&resolved, &params, &file)?,
        RunKind::Trps => run_trps(&resolved, &params, &file)?,
        RunKind::Twodir => run_twodir(&resolved, &params, &file)?,
        RunKind::Dipoles => run_dipoles(&resolved, &params, &file)?,
        RunKind::Validate => {
            let report = validate::run_suite();
            let failed = report.failed();
            let path = file("_validate.json");
            write_json(&path, &report)?;
            if failed > 0 {
                return Err(CliError::Validation(failed));
            }
            (vec![path], json!({ "passed": report.checks.len() }))
        }
    };

    let sidecar = file(".json");
    let body = Sidecar {
        software: SOFTWARE,
        config: &resolved,
        derived: Derived::new(&params),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
        results,
        threads: rayon::current_num_threads(),
        wall_time: start.elapsed().as_secs_f64(),
    };
    write_json(&sidecar, &body)?;
    info!("wrote {} files in {:.2} s", outputs.len() + 1, body.wall_time);
    Ok(RunSummary { outputs, sidecar })
}

type Pipeline = Result<(Vec<PathBuf>, serde_json::Value), CliError>;

fn run_dynamics(config: &RunConfig, params: &SystemParams, file: &dyn Fn(&str) -> PathBuf) -> Pipeline {
    let section = config.dynamics.as_ref().expect("checked on load");
    let d = Dynamics::new(params)?;
    let (selector, block) = section.initial.selector(params.n())?;
    let s0 = d.prepare(selector, block)?;
    let times = section.times.times()?;
    let traj = d.evolve(&s0, &times)?;

    let n = params.n();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("pop_{i}")));
    header.push("pop_photon".into());
    for i in 1..=n {
        for j in i + 1..=n {
            header.push(format!("coh_{i}{j}"));
        }
    }
    header.extend(["LP", "UP", "dark", "ground"].map(String::from));
    let mut table = Table::new(header);
    let mut last = None;
    for s in &traj {
        let snap = Snapshot::new(s, &d.eigensystems)?;
        let mut row = vec![snap.time];
        row.extend(&snap.sites);
        row.push(snap.photon);
        row.extend(snap.coherences.iter().map(|c| c.1));
        row.extend([snap.lower, snap.upper, snap.dark, snap.ground]);
        table.push(row);
        last = Some(snap);
    }
    let trajectory = file("_trajectory.csv");
    table.write(&trajectory)?;
    let mut outputs = vec![trajectory];

    if let Some(sp) = &section.spatial {
        let x = default_grid(params, sp.points, sp.margin.value);
        let times: Vec<f64> = sp.snapshots.iter().map(|t| t.value).collect();
        let states = d.evolve(&s0, &times)?;
        let mut table = Table::new(vec!["t".into(), "x".into(), "density".into()]);
        for s in &states {
            let g = spatial_density(s, params, &x)?;
            for (xi, rho) in g.x.iter().zip(&g.density) {
                table.push(vec![s.time, *xi, *rho]);
            }
        }
        let path = file("_density.csv");
        table.write(&path)?;
        outputs.push(path);
    }
    Ok((
        outputs,
        json!({
            "liouvillian_condition": d.spectrum.condition,
            "final": last,
        }),
    ))
}

fn run_trps(config: &RunConfig, params: &SystemParams, file: &dyn Fn(&str) -> PathBuf) -> Pipeline {
    let section = config.trps.as_ref().expect("checked on load");
    let d = Dynamics::new(params)?;
    let (selector, block) = section.initial.selector(params.n())?;
    let s0 = d.prepare(selector, block)?;
    let probe = section.probe.pulse()?;
    let lo = match &section.lo {
        Some(p) => p.pulse()?,
        None => probe.clone(),
    };
    let omega = section.omega.axis()?;
    let options = TrpsOptions {
        include_leakage_term: section.include_leakage_term,
        linewidth: section.linewidth,
    };
    let delays: Vec<f64> = section.delays.iter().map(|t| t.value).collect();
    let mut sorted = delays.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted != delays {
        return Err(CliError::Config("trps.delays must be ascending".into()));
    }
    let states = d.evolve(&s0, &delays)?;
    let spectra = states
        .par_iter()
        .map(|s| trps(params, &d.eigensystems, s, &probe, &lo, &omega, &options))
        .collect::<Result<Vec<SpectrumGrid>, _>>()?;

    let wc = params.cavity().frequency;
    let absolute = config.run.axis_convention == AxisConvention::Absolute;
    let mut header = vec!["omega".to_string()];
    if absolute {
        header.push("frequency".into());
    }
    header.extend(delays.iter().map(|t| format!("tau_{t}ps")));
    let mut table = Table::new(header);
    for (k, w) in omega.iter().enumerate() {
        let mut row = vec![*w];
        if absolute {
            row.push(w + wc);
        }
        row.extend(spectra.iter().map(|g| g.values[k]));
        table.push(row);
    }
    let path = file("_trps.csv");
    table.write(&path)?;
    let peaks: Vec<_> = delays
        .iter()
        .zip(&spectra)
        .map(|(t, g)| json!({ "delay": t, "peaks": g.peaks().into_iter().take(4).collect::<Vec<_>>() }))
        .collect();
    Ok((vec![path], json!({ "peaks": peaks })))
}

fn run_twodir(config: &RunConfig, params: &SystemParams, file: &dyn Fn(&str) -> PathBuf) -> Pipeline {
    let section = config.twodir.as_ref().expect("checked on load");
    let d = Dynamics::new(params)?;
    let p = &section.pulses;
    let pulses = EchoPulses {
        k1: p.k1.pulse()?,
        k2: p.k2.pulse()?,
        k3: p.k3.pulse()?,
        lo: p.lo.pulse()?,
    };
    let (w1, w3) = (section.omega1.axis()?, section.omega3.axis()?);
    let options = TwoDimOptions {
        subtract_gsb: section.subtract_gsb,
        components: section.components,
        linewidth: section.linewidth,
    };
    let grids = section
        .t2
        .par_iter()
        .map(|t2| twodir(&d, &pulses, t2.value, &w1, &w3, section.initial_population, &options))
        .collect::<Result<Vec<SpectrumGrid>, _>>()?;

    let wc = params.cavity().frequency;
    let absolute = config.run.axis_convention == AxisConvention::Absolute;
    let mut outputs = Vec::new();
    let mut summary = Vec::new();
    for (t2, g) in section.t2.iter().zip(&grids) {
        let mut header: Vec<String> = ["omega1", "omega1_flipped", "omega3"].map(String::from).to_vec();
        if absolute {
            header.extend(["frequency1", "frequency3"].map(String::from));
        }
        header.push("value".into());
        if g.components.is_some() {
            header.extend(["ese", "gsb", "esd"].map(String::from));
        }
        let mut table = Table::new(header);
        for (i, a) in w1.iter().enumerate() {
            for (j, b) in w3.iter().enumerate() {
                let k = i * w3.len() + j;
                let mut row = vec![*a, -a, *b];
                if absolute {
                    row.extend([wc - a, wc + b]);
                }
                row.push(g.values[k]);
                if let Some(c) = &g.components {
                    row.extend([c.ese[k], c.gsb[k], c.esd[k]]);
                }
                table.push(row);
            }
        }
        let path = file(&format!("_t2_{}ps.csv", t2.value));
        table.write(&path)?;
        outputs.push(path);
        let top: Vec<_> = g.peaks_2d().into_iter().take(6).collect();
        summary.push(json!({ "t2": t2.value, "max_abs": g.max_abs(), "peaks": top }));
    }
    Ok((outputs, json!({ "spectra": summary })))
}

fn run_dipoles(config: &RunConfig, params: &SystemParams, file: &dyn Fn(&str) -> PathBuf) -> Pipeline {
    let section = config.dipoles.as_ref().expect("checked on load");
    let omega = section.omega.axis()?;
    let mut sticks_table = Table::new(
        ["detuned_count", "frequency", "strength", "photon_weight", "multiplicity"]
            .map(String::from)
            .to_vec(),
    );
    let mut spectra = Vec::new();
    let mut summary = Vec::new();
    for &k in &section.detuned_count {
        let ens = LargeEnsemble {
            n: section.n,
            collective_coupling: section.collective_coupling.value,
            detuned_count: k,
            detuning: section.detuning.value,
        };
        let start = Instant::now();
        let sticks = dipole_distribution(&ens, params, &section.polarization)?;
        let elapsed = start.elapsed().as_secs_f64();
        for s in &sticks {
            sticks_table.push(vec![k as f64, s.frequency, s.strength, s.photon_weight, s.multiplicity as f64]);
        }
        spectra.push(broaden(
            &sticks,
            &omega,
            section.broadening.width.value,
            section.broadening.shape,
        )?);
        let dense_deviation = if section.dense_check {
            let dense = dipole_distribution_dense(&ens, params, &section.polarization)?;
            let dev = stick_deviation(&sticks, &dense);
            if dev > 1e-8 {
                warn!("arrowhead and dense dipole distributions differ by {dev:e} for {k} detuned");
            }
            Some(dev)
        } else {
            None
        };
        summary.push(json!({
            "detuned_count": k,
            "features": features(&sticks, section.threshold),
            "dense_deviation": dense_deviation,
            "solve_time": elapsed,
        }));
    }
    let sticks_path = file("_sticks.csv");
    sticks_table.write(&sticks_path)?;

    let mut header = vec!["omega".to_string()];
    header.extend(section.detuned_count.iter().map(|k| format!("detuned_{k}")));
    let mut table = Table::new(header);
    for (i, w) in omega.iter().enumerate() {
        let mut row = vec![*w];
        row.extend(spectra.iter().map(|s| s[i]));
        table.push(row);
    }
    let spectrum_path = file("_spectrum.csv");
    table.write(&spectrum_path)?;
    Ok((vec![sticks_path, spectrum_path], json!({ "ensembles": summary })))
}

/// Largest frequency/strength mismatch between the bright sticks of two solutions.
fn stick_deviation(a: &[polariton_core::signals::Stick], b: &[polariton_core::signals::Stick]) -> f64 {
    let bright = |v: &[polariton_core::signals::Stick]| {
        v.iter()
            .filter(|s| s.strength > 1e-10)
            .map(|s| (s.frequency, s.strength))
            .collect::<Vec<_>>()
    };
    let (a, b) = (bright(a), bright(b));
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
        .fold(0.0, f64::max)
}

//! Oracle comparisons and structural invariants at the reference parameters.

use std::time::Instant;

use num_complex::Complex64 as c64;
use polariton_core::dynamics::{stationary_distribution, thermal_config_weights};
use polariton_core::hamiltonian::{build_block_hamiltonian, diagonalize_block, hermiticity_error};
use polariton_core::liouvillian::{
    assemble_excited_generator, assemble_full_generator, assemble_ground_generator, solvent_gg,
    spectral_decompose, SectorIndexing,
};
use polariton_core::oracle::{
    compare_propagators, compare_with_spectrum, half_width_at_half_max, timedomain_trps_oracle,
    OracleReport,
};
use polariton_core::signals::{
    dipole_distribution, dipole_distribution_dense, eigenstate_widths, frequency_axis, trps, twodir,
    EchoPulses, InitialPopulation, LargeEnsemble, LinewidthModel, Pulse, TrpsOptions, TwoDimOptions,
};
use polariton_core::{Cavity, Dynamics, InitialSelector, Molecule, SolventConfig, SystemParams};
use serde::Serialize;

use crate::output::{Derived, Software, SOFTWARE};

#[derive(Serialize)]
pub struct ValidationReport {
    pub software: Software,
    pub derived: Derived,
    pub checks: Vec<OracleReport>,
}

impl ValidationReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

fn timed<F>(quantity: &str, tolerance: f64, f: F) -> OracleReport
where
    F: FnOnce() -> polariton_core::Result<f64>,
{
    let start = Instant::now();
    let deviation = f().unwrap_or_else(|e| {
        log::error!("{quantity}: {e}");
        f64::INFINITY
    });
    OracleReport::new(quantity, deviation, tolerance, start.elapsed().as_secs_f64())
}

fn lp_start(d: &Dynamics) -> polariton_core::Result<polariton_core::DensityState> {
    d.prepare(InitialSelector::LowerPolariton, SolventConfig::ground(d.params.n())?)
}

pub fn run_suite() -> ValidationReport {
    let p = SystemParams::wco6_trimer();
    let mut checks = Vec::new();

    checks.push(timed("polariton pair at +-g*sqrt(3) (cm^-1)", 1e-9, || {
        let c = SolventConfig::ground(3)?;
        let h = build_block_hamiltonian(&p, c);
        let eig = diagonalize_block(&h, &p, c)?;
        let exact = 2.1 * 3f64.sqrt();
        let lp = eig.frequencies[eig.lower_polariton()];
        let up = eig.frequencies[eig.upper_polariton()];
        Ok((lp + exact).abs().max((up - exact).abs()).max(hermiticity_error(h.as_ref())))
    }));

    checks.push(timed("spectral vs RK4 propagation, LP start, t = 1/10/100 ps", 1e-6, || {
        let d = Dynamics::new(&p)?;
        Ok(compare_propagators(&p, &lp_start(&d)?, &[1.0, 10.0, 100.0])?.deviation)
    }));

    checks.push(timed("spectral vs RK4 propagation, closed system (N = 2)", 1e-8, || {
        let m = Molecule {
            solvent_rate: 0.0,
            ..Molecule::wco6()
        };
        let c = Cavity {
            quality: f64::INFINITY,
            ..Cavity::wco6()
        };
        let q = SystemParams::uniform(2, m, 0.5, c, 300.0)?;
        let d = Dynamics::new(&q)?;
        Ok(compare_propagators(&q, &lp_start(&d)?, &[0.5, 5.0, 50.0])?.deviation)
    }));

    // negative control: a corrupted inverse must be detected
    let mut control = timed("negative control: corrupted S^-1 exceeds tolerance", 1e-6, || {
        let mut spec = spectral_decompose(&assemble_excited_generator(&p))?;
        spec.inverse[(3, 5)] += c64::new(0.05, 0.0);
        let d = Dynamics::new(&p)?;
        Ok(compare_with_spectrum(&p, &spec, &lp_start(&d)?, &[1.0, 10.0])?.deviation)
    });
    control.pass = control.deviation.is_finite() && control.deviation > control.tolerance;
    checks.push(control);

    let mut peak_step = 0.0;
    let mut width = timed("TRPS vs time-domain oracle: relative HWHM error", 0.05, || {
        let m = Molecule {
            solvent_rate: 0.0,
            ..Molecule::wco6()
        };
        let q = SystemParams::uniform(1, m, 0.5, Cavity::wco6(), 300.0)?;
        let d = Dynamics::new(&q)?;
        let st = d.evolve_to(&lp_start(&d)?, 3.0)?;
        let pulse = Pulse::gaussian(1993.0, 50.0);
        let omega = frequency_axis(-2.3, -1.9, 401)?;
        let closed = trps(&q, &d.eigensystems, &st, &pulse, &pulse, &omega, &TrpsOptions::default())?;
        let oracle = timedomain_trps_oracle(&q, &st, &pulse, &pulse, &omega)?;
        let pc = closed.peak_in(-2.3, -1.9).map_or(f64::NAN, |x| x.0);
        let po = oracle.peak_in(-2.3, -1.9).map_or(f64::NAN, |x| x.0);
        peak_step = (pc - po).abs() / 0.001;
        let gamma = eigenstate_widths(&q, &d.eigensystems[0], LinewidthModel::WithCavity)
            [d.eigensystems[0].lower_polariton()];
        let hw = half_width_at_half_max(&oracle, po).unwrap_or(f64::NAN);
        Ok(((hw - gamma) / gamma).abs())
    });
    if !width.deviation.is_finite() {
        width.pass = false;
    }
    checks.push(width);
    checks.push(OracleReport::new(
        "TRPS vs time-domain oracle: peak offset in grid steps",
        peak_step,
        1.0 + 1e-9,
        0.0,
    ));

    let mut hermiticity = 0.0;
    checks.push(timed("trace drift over 200 ps", 1e-8, || {
        let d = Dynamics::new(&p)?;
        let s0 = lp_start(&d)?;
        let times: Vec<f64> = (0..=40).map(|k| 5.0 * k as f64).collect();
        let mut drift: f64 = 0.0;
        for s in d.evolve(&s0, &times)? {
            drift = drift.max((s.trace() - 1.0).abs());
            hermiticity = s.hermiticity_error().max(hermiticity);
        }
        Ok(drift)
    }));
    checks.push(OracleReport::new("density hermiticity over 200 ps", hermiticity, 1e-10, 0.0));

    checks.push(timed("Liouvillian eigenvalues: max Re(nu) (rad/ps)", 1e-10, || {
        Ok(spectral_decompose(&assemble_excited_generator(&p))?.max_real_part().max(0.0))
    }));

    checks.push(timed("Liouvillian eigendecomposition residual and S^-1 S - 1", 1e-9, || {
        let gen = assemble_excited_generator(&p);
        let spec = spectral_decompose(&gen)?;
        Ok(spec.residual(&gen).max(spec.inverse_error()))
    }));

    checks.push(timed("trace functional annihilated by the full generator", 1e-12, || {
        let l = assemble_full_generator(&p);
        let ix = SectorIndexing::new(3);
        let mut col = vec![c64::new(0.0, 0.0); l.ncols()];
        for (r, c, v) in l.triplets() {
            let counts = r >= ix.excited_dim() || {
                let (m, n, _) = ix.decompose(r);
                m == n
            };
            if counts {
                col[c] += v;
            }
        }
        Ok(col.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }));

    checks.push(timed("solvent propagator semigroup and column sums", 1e-10, || {
        let mut worst: f64 = 0.0;
        for &(a, b) in &[(0.3, 1.7), (2.0, 10.0), (10.0, 90.0)] {
            let (ga, gb, gab) = (solvent_gg(&p, 0, a), solvent_gg(&p, 0, b), solvent_gg(&p, 0, a + b));
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max((ga[i][0] * gb[0][j] + ga[i][1] * gb[1][j] - gab[i][j]).abs());
                }
                worst = worst.max((gab[0][i] + gab[1][i] - 1.0).abs());
            }
        }
        Ok(worst)
    }));

    checks.push(timed("thermal weights: sum - 1", 1e-12, || {
        Ok((thermal_config_weights(&p)?.iter().sum::<f64>() - 1.0).abs())
    }));

    checks.push(timed("thermal weights vs ground-generator null vector", 1e-10, || {
        let w = thermal_config_weights(&p)?;
        let null = stationary_distribution(&assemble_ground_generator(&p))?;
        Ok(w.iter().zip(&null).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }));

    checks.push(timed("large-N dipoles: arrowhead vs dense (N = 300)", 1e-8, || {
        let ens = LargeEnsemble {
            n: 300,
            collective_coupling: 19.0,
            detuned_count: 7,
            detuning: 18.0,
        };
        let x = [1.0, 0.0, 0.0];
        let a = dipole_distribution(&ens, &p, &x)?;
        let b = dipole_distribution_dense(&ens, &p, &x)?;
        let bright = |v: &[polariton_core::signals::Stick]| {
            v.iter().filter(|s| s.strength > 1e-10).map(|s| (s.frequency, s.strength)).collect::<Vec<_>>()
        };
        let (a, b) = (bright(&a), bright(&b));
        if a.len() != b.len() {
            return Ok(f64::INFINITY);
        }
        Ok(a.iter().zip(&b).map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs())).fold(0.0, f64::max))
    }));

    checks.push(timed("2D-IR: ESD pathway at T2 = 0 relative to total", 1e-12, || {
        let d = Dynamics::new(&p)?;
        let axis = frequency_axis(-25.0, 25.0, 41)?;
        let pulses = EchoPulses::identical(Pulse::gaussian(1993.0, 50.0));
        let opts = TwoDimOptions {
            components: true,
            ..Default::default()
        };
        let g = twodir(&d, &pulses, 0.0, &axis, &axis, InitialPopulation::PureGround, &opts)?;
        let esd = g.components.as_ref().map_or(f64::INFINITY, |c| {
            c.esd.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
        });
        Ok(esd / g.max_abs())
    }));

    checks.push(timed("TRPS scales as |mu|^2 (relative error)", 1e-9, || {
        let q = p.with_scaled_dipoles(2.0)?;
        let pulse = Pulse::gaussian(1993.0, 50.0);
        let omega = frequency_axis(-25.0, 25.0, 101)?;
        let spectrum = |params: &SystemParams| -> polariton_core::Result<Vec<f64>> {
            let d = Dynamics::new(params)?;
            let s = d.evolve_to(&lp_start(&d)?, 20.0)?;
            Ok(trps(params, &d.eigensystems, &s, &pulse, &pulse, &omega, &TrpsOptions::default())?.values)
        };
        let (a, b) = (spectrum(&p)?, spectrum(&q)?);
        let top = a.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        Ok(a.iter().zip(&b).map(|(x, y)| (4.0 * x - y).abs()).fold(0.0, f64::max) / (4.0 * top))
    }));

    ValidationReport {
        software: SOFTWARE,
        derived: Derived::new(&p),
        checks,
    }
}

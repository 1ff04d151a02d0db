use num_complex::Complex64 as c64;

use crate::configuration::enumerate_configs;
use crate::dynamics::DensityState;
use crate::error::{Error, Result};
use crate::hamiltonian::build_block_hamiltonian;
use crate::liouvillian::{assemble_full_generator, SparseMatrix};
use crate::params::SystemParams;
use crate::units::cm_to_rad_ps;

/// Largest system the brute-force integrator accepts.
pub const MAX_ORACLE_MOLECULES: usize = 4;

/// Fixed-step classical RK4 on the full [excited | ground] generator.
#[derive(Clone, Debug)]
pub struct Rk4Integrator {
    generator: SparseMatrix<c64>,
    n: usize,
    max_dt: f64,
}

/// 0.01 / max |H_ij| over all blocks, in ps.
fn stability_bound(params: &SystemParams, generator: &SparseMatrix<c64>) -> Result<f64> {
    let mut hmax = 0.0f64;
    for c in enumerate_configs(params.n())? {
        let h = build_block_hamiltonian(params, c);
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                hmax = hmax.max(h[(i, j)].norm());
            }
        }
    }
    let mut scale = cm_to_rad_ps(hmax);
    if scale == 0.0 {
        scale = generator.triplets().map(|(_, _, v)| v.norm()).fold(0.0, f64::max);
    }
    Ok(if scale == 0.0 { f64::INFINITY } else { 0.01 / scale })
}

impl Rk4Integrator {
    pub fn new(params: &SystemParams) -> Result<Self> {
        if params.n() > MAX_ORACLE_MOLECULES {
            return Err(Error::Unsupported(format!(
                "RK4 oracle with {} molecules (limit {MAX_ORACLE_MOLECULES})",
                params.n()
            )));
        }
        let generator = assemble_full_generator(params);
        let max_dt = stability_bound(params, &generator)?;
        Ok(Rk4Integrator {
            generator,
            n: params.n(),
            max_dt,
        })
    }

    pub fn max_dt(&self) -> f64 {
        self.max_dt
    }

    pub fn generator(&self) -> &SparseMatrix<c64> {
        &self.generator
    }

    /// One RK4 step of size `dt` without the stability check.
    pub fn step(&self, v: &mut [c64], dt: f64) {
        let n = v.len();
        let mut k1 = vec![c64::new(0.0, 0.0); n];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut tmp = k1.clone();
        self.generator.mul_vec_into(v, &mut k1);
        for i in 0..n {
            tmp[i] = v[i] + k1[i] * (0.5 * dt);
        }
        self.generator.mul_vec_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = v[i] + k2[i] * (0.5 * dt);
        }
        self.generator.mul_vec_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = v[i] + k3[i] * dt;
        }
        self.generator.mul_vec_into(&tmp, &mut k4);
        for i in 0..n {
            v[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
    }

    /// States at each of `times`, stepping with equal substeps no larger than `dt`.
    pub fn propagate(&self, rho0: &DensityState, dt: f64, times: &[f64]) -> Result<Vec<DensityState>> {
        if !(dt > 0.0) {
            return Err(Error::param("dt", "must be > 0"));
        }
        if dt > self.max_dt * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge {
                dt,
                suggested: self.max_dt,
            });
        }
        if rho0.n_molecules() != self.n {
            return Err(Error::LengthMismatch {
                what: "molecules",
                expected: self.n,
                actual: rho0.n_molecules(),
            });
        }
        if times.iter().any(|&t| !(t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::UnorderedTimes);
        }
        let mut v = rho0.to_full_vector();
        let mut now = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let span = t - now;
            if span > 0.0 {
                let steps = (span / dt).ceil() as usize;
                let h = span / steps as f64;
                for _ in 0..steps {
                    self.step(&mut v, h);
                }
            }
            now = t;
            out.push(DensityState::from_full_vector(self.n, &v, rho0.time + t)?);
        }
        Ok(out)
    }
}

/// Brute-force trajectory of the full master equation.
pub fn rk4_propagate(
    params: &SystemParams,
    rho0: &DensityState,
    dt: f64,
    times: &[f64],
) -> Result<Vec<DensityState>> {
    Rk4Integrator::new(params)?.propagate(rho0, dt, times)
}

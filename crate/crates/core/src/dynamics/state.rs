use faer::Mat;
use num_complex::Complex64 as c64;

use crate::error::{Error, Result};
use crate::liouvillian::SectorIndexing;

/// Density matrix restricted to the config-diagonal M = 0 and M = 1 sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    /// ⟨e_m|ρ|e_n⟩ per configuration, laid out by [`SectorIndexing`].
    pub excited: Vec<c64>,
    /// Ground population of each configuration.
    pub ground: Vec<f64>,
    /// ps
    pub time: f64,
    indexing: SectorIndexing,
}

impl DensityState {
    pub fn zeros(n: usize) -> Self {
        let indexing = SectorIndexing::new(n);
        DensityState {
            excited: vec![c64::new(0.0, 0.0); indexing.excited_dim()],
            ground: vec![0.0; indexing.ground_dim()],
            time: 0.0,
            indexing,
        }
    }

    pub fn from_parts(n: usize, excited: Vec<c64>, ground: Vec<f64>, time: f64) -> Result<Self> {
        let indexing = SectorIndexing::new(n);
        if excited.len() != indexing.excited_dim() {
            return Err(Error::LengthMismatch {
                what: "excited sector",
                expected: indexing.excited_dim(),
                actual: excited.len(),
            });
        }
        if ground.len() != indexing.ground_dim() {
            return Err(Error::LengthMismatch {
                what: "ground sector",
                expected: indexing.ground_dim(),
                actual: ground.len(),
            });
        }
        Ok(DensityState {
            excited,
            ground,
            time,
            indexing,
        })
    }

    pub fn indexing(&self) -> SectorIndexing {
        self.indexing
    }

    pub fn n_molecules(&self) -> usize {
        self.indexing.n_molecules()
    }

    pub fn element(&self, m: usize, n: usize, config: usize) -> c64 {
        self.excited[self.indexing.excited(m, n, config)]
    }

    pub fn set_element(&mut self, m: usize, n: usize, config: usize, value: c64) {
        let u = self.indexing.excited(m, n, config);
        self.excited[u] = value;
    }

    /// (N+1)×(N+1) site-basis block of one configuration.
    pub fn block(&self, config: usize) -> Mat<c64> {
        let d = self.indexing.sites();
        Mat::from_fn(d, d, |m, n| self.element(m, n, config))
    }

    /// Σ_P of the site-basis blocks.
    pub fn summed_block(&self) -> Mat<c64> {
        let d = self.indexing.sites();
        let mut acc = Mat::<c64>::zeros(d, d);
        for p in 0..self.indexing.configs() {
            for m in 0..d {
                for n in 0..d {
                    acc[(m, n)] += self.element(m, n, p);
                }
            }
        }
        acc
    }

    pub fn excited_trace(&self) -> f64 {
        let d = self.indexing.sites();
        (0..self.indexing.configs())
            .flat_map(|p| (0..d).map(move |m| (p, m)))
            .map(|(p, m)| self.element(m, m, p).re)
            .sum()
    }

    pub fn ground_trace(&self) -> f64 {
        self.ground.iter().sum()
    }

    pub fn trace(&self) -> f64 {
        self.excited_trace() + self.ground_trace()
    }

    /// max |ρ_{mn,P} − conj(ρ_{nm,P})|, including imaginary parts of diagonals.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.indexing.sites();
        let mut worst = 0.0f64;
        for p in 0..self.indexing.configs() {
            for m in 0..d {
                for n in m..d {
                    worst = worst.max((self.element(m, n, p) - self.element(n, m, p).conj()).norm());
                }
            }
        }
        worst
    }

    /// Smallest diagonal entry across both sectors.
    pub fn min_diagonal(&self) -> f64 {
        let d = self.indexing.sites();
        let excited = (0..self.indexing.configs())
            .flat_map(|p| (0..d).map(move |m| (p, m)))
            .map(|(p, m)| self.element(m, m, p).re);
        excited
            .chain(self.ground.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Hermiticity to 1e-10, diagonals ≥ −1e-10, trace within `trace_tol` of `expected_trace`.
    pub fn check_invariants(&self, expected_trace: f64, trace_tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::InvariantViolation(format!(
                "hermiticity error {herm:e} at t = {} ps",
                self.time
            )));
        }
        let min = self.min_diagonal();
        if min < -1e-10 {
            return Err(Error::InvariantViolation(format!(
                "negative population {min:e} at t = {} ps",
                self.time
            )));
        }
        let tr = self.trace();
        if (tr - expected_trace).abs() > trace_tol {
            return Err(Error::InvariantViolation(format!(
                "trace {tr} deviates from {expected_trace} at t = {} ps",
                self.time
            )));
        }
        Ok(())
    }

    /// [excited | ground] as one complex vector.
    pub fn to_full_vector(&self) -> Vec<c64> {
        self.excited
            .iter()
            .copied()
            .chain(self.ground.iter().map(|&g| c64::new(g, 0.0)))
            .collect()
    }

    pub fn from_full_vector(n: usize, v: &[c64], time: f64) -> Result<Self> {
        let ix = SectorIndexing::new(n);
        let e = ix.excited_dim();
        if v.len() != e + ix.ground_dim() {
            return Err(Error::LengthMismatch {
                what: "full state vector",
                expected: e + ix.ground_dim(),
                actual: v.len(),
            });
        }
        Self::from_parts(n, v[..e].to_vec(), v[e..].iter().map(|c| c.re).collect(), time)
    }

    /// Largest absolute elementwise difference over both sectors.
    pub fn max_deviation(&self, other: &DensityState) -> f64 {
        let e = self
            .excited
            .iter()
            .zip(&other.excited)
            .map(|(a, b)| (a - b).norm());
        let g = self
            .ground
            .iter()
            .zip(&other.ground)
            .map(|(a, b)| (a - b).abs());
        e.chain(g).fold(0.0, f64::max)
    }
}

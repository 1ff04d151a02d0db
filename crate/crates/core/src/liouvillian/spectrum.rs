use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use log::warn;
use num_complex::Complex64 as c64;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Largest generator handed to the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 10_000;
/// Above this eigenvector condition estimate spectral propagation is not trusted.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Above this the eigenvector matrix is treated as singular.
const SINGULAR_LIMIT: f64 = 1e14;

/// L = S diag(ν) S⁻¹ for the excited-sector generator.
#[derive(Clone, Debug)]
pub struct LiouvillianSpectrum {
    /// Eigenvalues ν_u in rad/ps.
    pub eigenvalues: Vec<c64>,
    /// Right eigenvectors as columns.
    pub vectors: Mat<c64>,
    pub inverse: Mat<c64>,
    /// ‖S‖₁ ‖S⁻¹‖₁.
    pub condition: f64,
}

impl LiouvillianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_well_conditioned(&self) -> bool {
        self.condition <= CONDITION_LIMIT
    }

    pub fn require_well_conditioned(&self) -> Result<()> {
        if self.is_well_conditioned() {
            Ok(())
        } else {
            Err(Error::IllConditioned {
                condition: self.condition,
                limit: CONDITION_LIMIT,
            })
        }
    }

    /// c = S⁻¹ ρ₀.
    pub fn modal_coefficients(&self, rho0: &[c64]) -> Result<Vec<c64>> {
        if rho0.len() != self.dim() {
            return Err(Error::LengthMismatch {
                what: "excited-sector vector",
                expected: self.dim(),
                actual: rho0.len(),
            });
        }
        Ok(mat_vec(&self.inverse, rho0))
    }

    /// S diag(e^{νt}) c.
    pub fn reconstruct(&self, coefficients: &[c64], t: f64) -> Vec<c64> {
        let weighted: Vec<c64> = coefficients
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, nu)| c * (nu * t).exp())
            .collect();
        mat_vec(&self.vectors, &weighted)
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|v| v.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// max |L S − S diag ν| / max |L|.
    pub fn residual(&self, generator: &SparseMatrix<c64>) -> f64 {
        let n = self.dim();
        let mut lmax = 0.0f64;
        for (_, _, v) in generator.triplets() {
            lmax = lmax.max(v.norm());
        }
        let mut worst = 0.0f64;
        for u in 0..n {
            let col: Vec<c64> = (0..n).map(|i| self.vectors[(i, u)]).collect();
            let lc = generator.mul_vec(&col);
            for i in 0..n {
                worst = worst.max((lc[i] - col[i] * self.eigenvalues[u]).norm());
            }
        }
        worst / lmax.max(f64::MIN_POSITIVE)
    }

    /// max |S S⁻¹ − I|.
    pub fn inverse_error(&self) -> f64 {
        let p = &self.vectors * &self.inverse;
        let mut worst = 0.0f64;
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - target).norm());
            }
        }
        worst
    }
}

pub(crate) fn mat_vec(m: &Mat<c64>, x: &[c64]) -> Vec<c64> {
    let mut y = vec![c64::new(0.0, 0.0); m.nrows()];
    for j in 0..m.ncols() {
        let xj = x[j];
        if xj == c64::new(0.0, 0.0) {
            continue;
        }
        let col = m.col(j);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += col[i] * xj;
        }
    }
    y
}

fn one_norm(m: &Mat<c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn anti_hermitian_error(l: &Mat<c64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..l.nrows() {
        for j in 0..=i {
            worst = worst.max((l[(i, j)] + l[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Dense eigendecomposition of the excited-sector generator.
///
/// A purely coherent generator (anti-Hermitian) goes through the Hermitian
/// solver on iL, which keeps S unitary despite the massive degeneracy of
/// Bohr frequencies.
pub fn spectral_decompose(generator: &SparseMatrix<c64>) -> Result<LiouvillianSpectrum> {
    let n = generator.nrows();
    if n > MAX_DENSE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            limit: MAX_DENSE_DIM,
        });
    }
    let l = generator.to_dense();
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| l[(i, j)].norm())
        .fold(0.0, f64::max);

    if anti_hermitian_error(&l) <= 1e-13 * scale.max(1.0) {
        let il = Mat::<c64>::from_fn(n, n, |i, j| c64::new(0.0, 1.0) * l[(i, j)]);
        let evd = il
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let eigenvalues = (0..n)
            .map(|k| c64::new(0.0, -evd.S()[k].re))
            .collect();
        let vectors = evd.U().to_owned();
        let inverse = vectors.adjoint().to_owned();
        let condition = one_norm(&vectors) * one_norm(&inverse);
        return Ok(LiouvillianSpectrum {
            eigenvalues,
            vectors,
            inverse,
            condition,
        });
    }

    let evd = l
        .eigen()
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let eigenvalues: Vec<c64> = (0..n).map(|k| evd.S()[k]).collect();
    let mut vectors = evd.U().to_owned();
    for j in 0..n {
        let norm = (0..n).map(|i| vectors[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DefectiveGenerator {
                condition: f64::INFINITY,
            });
        }
        for i in 0..n {
            vectors[(i, j)] /= norm;
        }
    }
    let inverse = vectors.partial_piv_lu().inverse();
    let finite = (0..n).all(|i| (0..n).all(|j| inverse[(i, j)].is_finite()));
    let condition = if finite {
        one_norm(&vectors) * one_norm(&inverse)
    } else {
        f64::INFINITY
    };
    if !(condition < SINGULAR_LIMIT) {
        return Err(Error::DefectiveGenerator { condition });
    }
    if condition > CONDITION_LIMIT {
        warn!(
            "Liouvillian eigenvectors ill-conditioned (cond ≈ {condition:.3e}); \
             propagate with the RK4 integrator instead"
        );
    }
    Ok(LiouvillianSpectrum {
        eigenvalues,
        vectors,
        inverse,
        condition,
    })
}

/// ρ(t) = S e^{νt} S⁻¹ ρ(0) over the excited sector.
pub fn propagate_excited(spec: &LiouvillianSpectrum, rho0: &[c64], t: f64) -> Result<Vec<c64>> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    spec.require_well_conditioned()?;
    let c = spec.modal_coefficients(rho0)?;
    Ok(spec.reconstruct(&c, t))
}

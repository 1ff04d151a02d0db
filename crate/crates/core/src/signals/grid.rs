use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Per-pathway breakdown of a 2D spectrum. `esd` carries its minus sign, so
/// values = ese + gsb + esd.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pathways {
    pub ese: Vec<f64>,
    pub gsb: Vec<f64>,
    pub esd: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumMetadata {
    /// Probe delay (TRPS) or waiting time T₂ (2D), ps.
    pub delay: f64,
    pub parameter_hash: u64,
}

/// One- or two-dimensional spectrum on rotating-frame axes (cm⁻¹).
///
/// Two-dimensional values are row-major with Ω₁ as the outer index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumGrid {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub components: Option<Pathways>,
    pub metadata: SpectrumMetadata,
}

impl SpectrumGrid {
    pub fn omega(&self) -> &[f64] {
        &self.axes[0]
    }

    /// Value at (Ω₁ index, Ω₃ index) of a 2D grid.
    pub fn at(&self, i1: usize, i3: usize) -> f64 {
        self.values[i1 * self.axes[1].len() + i3]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |value| inside Ω₁ ∈ [a1, b1], Ω₃ ∈ [a3, b3].
    pub fn max_abs_in(&self, (a1, b1): (f64, f64), (a3, b3): (f64, f64)) -> f64 {
        let (x1, x3) = (&self.axes[0], &self.axes[1]);
        let mut best = 0.0f64;
        for (i, &w1) in x1.iter().enumerate() {
            if w1 < a1 || w1 > b1 {
                continue;
            }
            for (j, &w3) in x3.iter().enumerate() {
                if w3 >= a3 && w3 <= b3 {
                    best = best.max(self.at(i, j).abs());
                }
            }
        }
        best
    }

    /// Local maxima of a 1D spectrum as (Ω, value), strongest first.
    /// Empty for 2D grids, see [`SpectrumGrid::peaks_2d`].
    pub fn peaks(&self) -> Vec<(f64, f64)> {
        if self.axes.len() != 1 {
            return Vec::new();
        }
        let (x, y) = (&self.axes[0], &self.values);
        let mut out: Vec<(f64, f64)> = (1..y.len().saturating_sub(1))
            .filter(|&k| y[k] > y[k - 1] && y[k] >= y[k + 1])
            .map(|k| (x[k], y[k]))
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1));
        out
    }

    /// Local maxima of |value| on a 2D grid as (Ω₁, Ω₃, value), strongest first.
    pub fn peaks_2d(&self) -> Vec<(f64, f64, f64)> {
        if self.axes.len() != 2 {
            return Vec::new();
        }
        let (n1, n3) = (self.axes[0].len(), self.axes[1].len());
        let mut out = Vec::new();
        for i in 0..n1 {
            for j in 0..n3 {
                let v = self.at(i, j).abs();
                let mut top = v > 0.0;
                for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)] {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a >= 0 && b >= 0 && (a as usize) < n1 && (b as usize) < n3 {
                        top &= self.at(a as usize, b as usize).abs() <= v;
                    }
                }
                if top {
                    out.push((self.axes[0][i], self.axes[1][j], self.at(i, j)));
                }
            }
        }
        out.sort_by(|a, b| b.2.abs().total_cmp(&a.2.abs()));
        out
    }

    /// Strongest local maximum of |value| inside a 2D region, as (Ω₁, Ω₃, value).
    /// Tails of peaks centred outside the region do not count.
    pub fn peak_in_region(&self, (a1, b1): (f64, f64), (a3, b3): (f64, f64)) -> Option<(f64, f64, f64)> {
        self.peaks_2d()
            .into_iter()
            .find(|p| p.0 >= a1 && p.0 <= b1 && p.1 >= a3 && p.1 <= b3)
    }

    /// Strongest local maximum with Ω in [lo, hi].
    pub fn peak_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.peaks().into_iter().find(|p| p.0 >= lo && p.0 <= hi)
    }
}

/// n evenly spaced points on [lo, hi].
pub fn frequency_axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(hi > lo) {
        return Err(Error::param("frequency axis", "need n >= 2 and hi > lo"));
    }
    Ok((0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect())
}

pub(crate) fn check_axis(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if x.iter().any(|v| !v.is_finite()) || x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("frequency axis", "must be finite and strictly increasing"));
    }
    Ok(())
}

/// Stable fingerprint of a parameter set.
pub fn parameter_hash(params: &SystemParams) -> u64 {
    let mut h = DefaultHasher::new();
    for m in params.molecules() {
        for v in [
            m.frequency,
            m.disorder_shift,
            m.anharmonicity,
            m.coupling,
            m.dipole[0],
            m.dipole[1],
            m.dipole[2],
            m.position,
            m.localization,
            m.solvent_gap,
            m.solvent_rate,
        ] {
            v.to_bits().hash(&mut h);
        }
    }
    params.cavity().frequency.to_bits().hash(&mut h);
    params.cavity().quality.to_bits().hash(&mut h);
    params.temperature().to_bits().hash(&mut h);
    h.finish()
}

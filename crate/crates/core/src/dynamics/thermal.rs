use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::configuration::enumerate_configs;
use crate::error::{Error, Result};
use crate::liouvillian::GroundGenerator;
use crate::params::SystemParams;
use crate::units::BOLTZMANN_CM_PER_K;

/// Equilibrium probability of each solvent configuration.
///
/// P_J = 2^{−N} Π_s [1 ± tanh(v_s/2k_BT)], + for l_s = 0.
pub fn thermal_config_weights(params: &SystemParams) -> Result<Vec<f64>> {
    let t = params.temperature();
    if !(t > 0.0) {
        return Err(Error::param("temperature", "must be positive"));
    }
    let tanh: Vec<f64> = params
        .molecules()
        .iter()
        .map(|m| (m.solvent_gap / (2.0 * BOLTZMANN_CM_PER_K * t)).tanh())
        .collect();
    Ok(enumerate_configs(params.n())?
        .iter()
        .map(|c| {
            tanh.iter()
                .enumerate()
                .map(|(s, th)| 0.5 * if c.bit(s) == 1 { 1.0 - th } else { 1.0 + th })
                .product()
        })
        .collect())
}

/// Null vector of the ground-sector rate matrix, normalized to unit sum.
pub fn stationary_distribution(generator: &GroundGenerator) -> Result<Vec<f64>> {
    let n = generator.rates.nrows();
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    // replace the last balance equation by normalization
    let mut a = Mat::<f64>::zeros(n, n);
    for (r, c, v) in generator.rates.triplets() {
        if r != n - 1 {
            a[(r, c)] = v;
        }
    }
    for c in 0..n {
        a[(n - 1, c)] = 1.0;
    }
    let mut b = Mat::<f64>::zeros(n, 1);
    b[(n - 1, 0)] = 1.0;
    let x = a.partial_piv_lu().solve(&b);
    let out: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("stationary distribution"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::assemble_ground_generator;

    #[test]
    fn boltzmann_ratio_single_molecule() {
        let p = SystemParams::wco6_trimer();
        let w = thermal_config_weights(&p).unwrap();
        let x = 62.0 / (BOLTZMANN_CM_PER_K * 300.0);
        assert!((w[1] / w[0] - (-x).exp()).abs() < 1e-12);
        assert!((w[1] / w[0] - 0.743).abs() < 1e-3);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&v| v <= w[0]));
    }

    #[test]
    fn weights_match_rate_matrix_null_vector() {
        let p = SystemParams::wco6_trimer();
        let a = thermal_config_weights(&p).unwrap();
        let b = stationary_distribution(&assemble_ground_generator(&p)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

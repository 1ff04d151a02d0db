//! Scalar summaries of sampled trajectories.

use crate::error::{Error, Result};

fn check(times: &[f64], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            what: "trajectory samples",
            expected: times.len(),
            actual: values.len(),
        });
    }
    if times.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    Ok(())
}

/// First time the curve reaches `level`, linearly interpolated. None if never.
pub fn crossing_time(times: &[f64], values: &[f64], level: f64) -> Result<Option<f64>> {
    check(times, values)?;
    if values[0] >= level {
        return Ok(Some(times[0]));
    }
    for k in 1..times.len() {
        if values[k] >= level {
            let f = (level - values[k - 1]) / (values[k] - values[k - 1]);
            return Ok(Some(times[k - 1] + f * (times[k] - times[k - 1])));
        }
    }
    Ok(None)
}

/// Time to reach `fraction` of the maximum sampled value (the plateau for
/// rising curves).
pub fn time_to_fraction_of_max(times: &[f64], values: &[f64], fraction: f64) -> Result<Option<f64>> {
    check(times, values)?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > values[0]) {
        return Ok(None);
    }
    let level = values[0] + fraction * (max - values[0]);
    crossing_time(times, values, level)
}

/// Rate k of the least-squares fit ln y = a − k t over positive samples.
pub fn fit_decay_rate(times: &[f64], values: &[f64]) -> Result<f64> {
    check(times, values)?;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::param("values", "need at least two positive samples"));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("times", "need distinct sample times"));
    }
    Ok(-sxy / sxx)
}

/// Evenly spaced times from 0 to `end` inclusive.
pub fn linspace(end: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|k| end * k as f64 / (points - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exponential_rate() {
        let t = linspace(50.0, 101);
        let y: Vec<f64> = t.iter().map(|t| 0.3 * (-0.07 * t).exp()).collect();
        assert!((fit_decay_rate(&t, &y).unwrap() - 0.07).abs() < 1e-12);
    }

    #[test]
    fn half_rise_of_saturating_curve() {
        let t = linspace(100.0, 10_001);
        let y: Vec<f64> = t.iter().map(|t| 1.0 - (-t / 10.0f64).exp()).collect();
        let half = time_to_fraction_of_max(&t, &y, 0.5).unwrap().unwrap();
        assert!((half - 10.0 * 2f64.ln()).abs() < 1e-3);
        assert_eq!(crossing_time(&t, &y, 2.0).unwrap(), None);
    }
}

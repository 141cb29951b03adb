//! Box-counting dimension of a point set on the line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub dimension: f64,
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// Every scale gave the same box count, so the slope carries no information.
    pub degenerate: bool,
}

fn box_count(values: &[f64], origin: f64, scale: f64) -> usize {
    let mut boxes: Vec<i64> = values
        .iter()
        .map(|&x| ((x - origin) / scale).floor() as i64)
        .collect();
    boxes.sort_unstable();
    boxes.dedup();
    boxes.len()
}

/// Least-squares slope of log N(ε) against log(1/ε), with boxes of width ε
/// laid from the smallest value. Needs at least 3 scales spanning 2 decades.
pub fn box_counting_dimension(values: &[f64], scales: &[f64]) -> Result<BoxDimension> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("no values to cover".into()));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("values must be finite".into()));
    }
    if scales.len() < 3
        || scales
            .iter()
            .any(|&s| s.is_nan() || s <= 0.0 || !s.is_finite())
    {
        return Err(Error::InvalidParameter(
            "need at least 3 positive finite scales".into(),
        ));
    }
    let (smallest, largest) = scales
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    if largest / smallest < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "scales must span two decades, got [{smallest}, {largest}]"
        )));
    }
    let origin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let counts: Vec<usize> = scales
        .iter()
        .map(|&s| box_count(values, origin, s))
        .collect();
    let degenerate = counts.windows(2).all(|w| w[0] == w[1]);

    let xs: Vec<f64> = scales.iter().map(|s| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let dimension = if degenerate || sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    };
    Ok(BoxDimension {
        dimension,
        scales: scales.to_vec(),
        counts,
        degenerate,
    })
}

/// `count` scales spaced geometrically from `largest` down to `smallest`.
pub fn geometric_scales(largest: f64, smallest: f64, count: usize) -> Vec<f64> {
    let ratio = (smallest / largest).powf(1.0 / (count.max(2) - 1) as f64);
    (0..count).map(|i| largest * ratio.powi(i as i32)).collect()
}

/// Endpoints of the 2^level intervals of the middle-thirds construction.
pub fn cantor_endpoints(level: u32) -> Vec<f64> {
    let mut intervals = vec![(0.0f64, 1.0f64)];
    for _ in 0..level {
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let third = (b - a) / 3.0;
                [(a, a + third), (b - third, b)]
            })
            .collect();
    }
    intervals.into_iter().flat_map(|(a, b)| [a, b]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_has_dimension_zero() {
        let d = box_counting_dimension(&[0.3; 10], &geometric_scales(0.1, 0.001, 5)).unwrap();
        assert_eq!(d.dimension, 0.0);
        assert!(d.degenerate);
    }

    #[test]
    fn dense_interval_has_dimension_one() {
        let values: Vec<f64> = (0..=100_000).map(|i| i as f64 * 1e-5).collect();
        let d = box_counting_dimension(&values, &geometric_scales(0.1, 0.001, 7)).unwrap();
        assert!((d.dimension - 1.0).abs() < 0.02, "{d:?}");
    }

    #[test]
    fn middle_thirds_fixture() {
        let values = cantor_endpoints(8);
        let d = box_counting_dimension(&values, &geometric_scales(1.0 / 3.0, 3f64.powi(-7), 7))
            .unwrap();
        assert!((d.dimension - 0.63).abs() < 0.05, "{d:?}");
    }

    #[test]
    fn rejects_narrow_scales() {
        assert!(box_counting_dimension(&[0.0, 1.0], &[0.1, 0.05, 0.02]).is_err());
        assert!(box_counting_dimension(&[0.0, 1.0], &[0.1, 0.001]).is_err());
        assert!(box_counting_dimension(&[], &[0.1, 0.01, 0.001]).is_err());
        assert!(box_counting_dimension(&[0.0], &[0.1, 0.0, 0.001]).is_err());
    }
}

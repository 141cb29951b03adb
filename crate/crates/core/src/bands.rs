//! Band and gap structure of a finite spectrum.

use serde::{Deserialize, Serialize};

use crate::builders::OperatorKind;
use crate::eigen::{eigenvalues, Spectrum};
use crate::error::{Error, Result};
use crate::operator::BoundaryKind;
use crate::params::Omega;

/// Multiple of the median spacing that separates two bands.
pub const GAP_FACTOR: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InGap {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSet {
    pub bands: Vec<Band>,
    pub in_gap: Vec<InGap>,
    pub gap_threshold: f64,
    pub q_hint: Option<u64>,
    /// Even q_hint and one band straddling 0: the two central bands touch
    /// and are counted as two.
    pub central_touching: bool,
}

impl BandSet {
    /// Number of bands, with a touching central pair counted twice.
    pub fn band_count(&self) -> usize {
        self.bands.len() + usize::from(self.central_touching)
    }

    pub fn total_bandwidth(&self) -> f64 {
        total_bandwidth(self)
    }

    /// Distance from `x` to the nearest band; infinite when there are none.
    pub fn distance_to_bands(&self, x: f64) -> f64 {
        self.bands
            .iter()
            .map(|b| b.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn eigenvalue_count(&self) -> usize {
        self.bands.iter().map(|b| b.count).sum::<usize>()
            + self.in_gap.iter().map(|g| g.multiplicity).sum::<usize>()
    }

    /// Bands map onto bands under x ↦ −x, edge by edge, within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.bands.len();
        (0..n).all(|i| {
            let (a, b) = (self.bands[i], self.bands[n - 1 - i]);
            (a.lo + b.hi).abs() <= tol && (a.hi + b.lo).abs() <= tol && a.count == b.count
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapThreshold {
    #[default]
    Auto,
    Fixed(f64),
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// 8 × the median consecutive spacing of a sorted list, never below
/// 1e−9·max(1, span).
pub fn auto_gap_threshold(sorted: &[f64]) -> f64 {
    let span = match (sorted.first(), sorted.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let mut spacings: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    (GAP_FACTOR * median(&mut spacings)).max(1e-9 * span.max(1.0))
}

/// Greedy clustering of the sorted eigenvalues: a new cluster starts at every
/// spacing larger than the threshold. With a `q_hint`, clusters holding fewer
/// than ceil(dim/(4q)) eigenvalues that lie strictly between two large
/// clusters are moved to `in_gap`.
pub fn detect_bands(
    spec: &Spectrum,
    threshold: GapThreshold,
    q_hint: Option<u64>,
) -> Result<BandSet> {
    let values = spec.eigenvalues();
    let gap_threshold = match threshold {
        GapThreshold::Auto => auto_gap_threshold(values),
        GapThreshold::Fixed(t) if t > 0.0 && t.is_finite() => t,
        GapThreshold::Fixed(t) => {
            return Err(Error::InvalidParameter(format!(
                "gap threshold must be positive, got {t}"
            )))
        }
    };
    if q_hint == Some(0) {
        return Err(Error::InvalidParameter("q_hint must be positive".into()));
    }

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > gap_threshold {
            clusters.push((start, i));
            start = i;
        }
    }
    if !values.is_empty() {
        clusters.push((start, values.len()));
    }

    let min_size = q_hint.map_or(1, |q| values.len().div_ceil(4 * q as usize));
    let large: Vec<usize> = clusters
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| b - a >= min_size)
        .map(|(i, _)| i)
        .collect();
    let (first_large, last_large) = match (large.first(), large.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (usize::MAX, 0),
    };

    let merge_tol =
        1e-12 * (values.last().unwrap_or(&0.0) - values.first().unwrap_or(&0.0)).max(1.0);
    let mut bands = Vec::new();
    let mut in_gap: Vec<InGap> = Vec::new();
    for (i, &(a, b)) in clusters.iter().enumerate() {
        let interior = i > first_large && i < last_large;
        if b - a < min_size && interior {
            for &x in &values[a..b] {
                match in_gap.last_mut() {
                    Some(g) if x - g.value <= merge_tol => g.multiplicity += 1,
                    _ => in_gap.push(InGap {
                        value: x,
                        multiplicity: 1,
                    }),
                }
            }
        } else {
            bands.push(Band {
                lo: values[a],
                hi: values[b - 1],
                count: b - a,
            });
        }
    }
    let central_touching = q_hint.is_some_and(|q| q % 2 == 0)
        && bands
            .iter()
            .any(|b| b.lo < -gap_threshold && b.hi > gap_threshold);
    Ok(BandSet {
        bands,
        in_gap,
        gap_threshold,
        q_hint,
        central_touching,
    })
}

/// Sum of band lengths; in-gap eigenvalues contribute nothing.
pub fn total_bandwidth(bands: &BandSet) -> f64 {
    bands.bands.iter().map(Band::width).sum()
}

/// Mean total bandwidth of X_ν at ω = pπ/q over `samples` phases
/// ν_j = (j + ½)·(π/q)/samples, one period of the ν-dependence of the spectrum.
pub fn phase_averaged_bandwidth(omega: Omega, n_max: usize, samples: usize) -> Result<f64> {
    let Some((_, q)) = omega.reduced() else {
        return Err(Error::InvalidParameter(format!(
            "phase averaging needs a rational omega, got {omega}"
        )));
    };
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let period = std::f64::consts::PI / q as f64;
    let mut total = 0.0;
    for j in 0..samples {
        let nu = (j as f64 + 0.5) * period / samples as f64;
        let op = OperatorKind::Xnu { nu }.build(omega, n_max, BoundaryKind::Open)?;
        let spec = eigenvalues(&op)?;
        total += detect_bands(&spec, GapThreshold::Auto, Some(q as u64))?.total_bandwidth();
    }
    Ok(total / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn spectrum(values: Vec<f64>) -> Spectrum {
        Spectrum::new(values, 0.0, "fixture")
    }

    #[test]
    fn obvious_gap() {
        let b = detect_bands(
            &spectrum(vec![-1.0, -0.99, 0.99, 1.0]),
            GapThreshold::Fixed(0.5),
            None,
        )
        .unwrap();
        assert_eq!(b.band_count(), 2);
        assert!(b.in_gap.is_empty());
        assert!(b.is_symmetric(1e-15));
    }

    #[test]
    fn rejects_bad_threshold() {
        let s = spectrum(vec![0.0, 1.0]);
        assert!(detect_bands(&s, GapThreshold::Fixed(0.0), None).is_err());
        assert!(detect_bands(&s, GapThreshold::Fixed(f64::NAN), None).is_err());
        assert!(detect_bands(&s, GapThreshold::Auto, Some(0)).is_err());
    }

    #[test]
    fn small_interior_clusters_move_to_gap() {
        let mut values: Vec<f64> = (0..40).map(|i| i as f64 * 0.01).collect();
        values.push(2.0);
        values.push(2.0);
        values.extend((0..40).map(|i| 4.0 + i as f64 * 0.01));
        values.push(9.0);
        let b = detect_bands(&spectrum(values), GapThreshold::Auto, Some(2)).unwrap();
        assert_eq!(b.bands.len(), 3);
        assert_eq!(
            b.in_gap,
            vec![InGap {
                value: 2.0,
                multiplicity: 2
            }]
        );
        assert_eq!(b.eigenvalue_count(), 83);
    }

    #[test]
    fn bandwidth_arithmetic() {
        let set = BandSet {
            bands: vec![
                Band {
                    lo: 0.0,
                    hi: 1.0,
                    count: 3,
                },
                Band {
                    lo: 2.0,
                    hi: 2.5,
                    count: 3,
                },
            ],
            in_gap: vec![],
            gap_threshold: 0.1,
            q_hint: None,
            central_touching: false,
        };
        assert_eq!(total_bandwidth(&set), 1.5);
        let points = detect_bands(&spectrum(vec![1.0; 5]), GapThreshold::Auto, None).unwrap();
        assert_eq!(points.band_count(), 1);
        assert_eq!(total_bandwidth(&points), 0.0);
    }

    #[test]
    fn half_pi_collapses_to_points() {
        let op = OperatorKind::Position
            .build(Omega::pi_rational(1, 2).unwrap(), 200, BoundaryKind::Open)
            .unwrap();
        let b = detect_bands(&eigenvalues(&op).unwrap(), GapThreshold::Auto, Some(2)).unwrap();
        assert_eq!(b.bands.len(), 2);
        for band in &b.bands {
            assert!((band.lo.abs() - FRAC_1_SQRT_2).abs() < 1e-12);
            assert!(band.width() < 1e-12);
        }
    }

    #[test]
    fn three_bands_at_third_pi() {
        let op = OperatorKind::Position
            .build(Omega::pi_rational(1, 3).unwrap(), 300, BoundaryKind::Open)
            .unwrap();
        let b = detect_bands(&eigenvalues(&op).unwrap(), GapThreshold::Auto, Some(3)).unwrap();
        assert_eq!(b.band_count(), 3);
        assert!(b.is_symmetric(1e-10));
    }

    #[test]
    fn touching_central_bands_are_counted_twice() {
        let op = OperatorKind::Harper { nu: 0.0 }
            .build(Omega::pi_rational(1, 4).unwrap(), 280, BoundaryKind::Open)
            .unwrap();
        let b = detect_bands(&eigenvalues(&op).unwrap(), GapThreshold::Auto, Some(4)).unwrap();
        assert!(b.central_touching);
        assert_eq!(b.bands.len(), 3);
        assert_eq!(b.band_count(), 4);
    }

    #[test]
    fn phase_average_needs_rational_omega() {
        assert!(phase_averaged_bandwidth(Omega::radians(1.0).unwrap(), 20, 4).is_err());
        assert!(phase_averaged_bandwidth(Omega::pi_rational(1, 2).unwrap(), 20, 0).is_err());
        let w = phase_averaged_bandwidth(Omega::pi_rational(1, 2).unwrap(), 40, 4).unwrap();
        assert!(w > 0.0);
    }
}

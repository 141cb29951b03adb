//! In-gap eigenvalues that move when the chain is resized or closed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bands::{detect_bands, BandSet, GapThreshold};
use crate::builders::OperatorKind;
use crate::eigen::{eigenpair_inverse_iteration, eigenvalues, Spectrum};
use crate::error::{Error, Result};
use crate::operator::BoundaryKind;
use crate::params::Omega;

/// Relative distance below which two eigenvalues of different sizes count as
/// the same level, whatever the bulk drift.
pub const MATCH_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeScanConfig {
    pub operator: OperatorKind,
    pub n_max_a: usize,
    pub n_max_b: usize,
    pub q_grid: i64,
    /// Grid numerators to scan; all of `1..=q_grid` when `None`.
    pub p_values: Option<Vec<i64>>,
    /// Largest denominator of the rational approximation used as q_hint.
    pub hint_denominator_cap: u64,
}

impl Default for EdgeScanConfig {
    fn default() -> Self {
        Self {
            operator: OperatorKind::Xnu { nu: 0.0 },
            n_max_a: 200,
            n_max_b: 210,
            q_grid: 200,
            p_values: None,
            hint_denominator_cap: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSuspect {
    pub p: i64,
    /// Size of the chain the eigenvalue belongs to.
    pub n_max: usize,
    pub eigenvalue: f64,
    /// Distance to the nearest eigenvalue of the other size.
    pub resize_distance: f64,
    pub bulk_drift: f64,
    /// Squared weight of the eigenvector on the last max(5, n_max/40) sites.
    pub localization_weight: f64,
    pub moved_under_resize: bool,
    /// The periodic eigenvalue at the same index is closer to the bands.
    pub moved_under_periodic: bool,
    pub periodic_displacement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeStateReport {
    pub config: EdgeScanConfig,
    pub suspects: Vec<EdgeSuspect>,
    /// Median periodic displacement of all eigenvalues, one entry per
    /// (grid point, size) that produced suspects.
    pub bulk_periodic_displacements: Vec<f64>,
}

impl EdgeStateReport {
    pub fn suspects_in(
        &self,
        ps: std::ops::RangeInclusive<i64>,
    ) -> impl Iterator<Item = &EdgeSuspect> {
        self.suspects.iter().filter(move |s| ps.contains(&s.p))
    }

    pub fn mean_suspect_displacement(&self) -> Option<f64> {
        if self.suspects.is_empty() {
            return None;
        }
        Some(
            self.suspects
                .iter()
                .map(|s| s.periodic_displacement)
                .sum::<f64>()
                / self.suspects.len() as f64,
        )
    }

    pub fn bulk_median_displacement(&self) -> Option<f64> {
        if self.bulk_periodic_displacements.is_empty() {
            return None;
        }
        Some(median(self.bulk_periodic_displacements.clone()))
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Denominator of the closest fraction to p/q with denominator at most `cap`.
pub fn best_denominator(p: i64, q: i64, cap: u64) -> u64 {
    let target = p as f64 / q as f64;
    let mut best = (f64::INFINITY, 1);
    for d in 1..=cap.max(1) {
        let err = ((target * d as f64).round() / d as f64 - target).abs();
        if err < best.0 - 1e-15 {
            best = (err, d);
        }
    }
    best.1
}

/// Median of |a[i] − b[j(i)]| with the monotone index map
/// j(i) = round(i·(len_b − 1)/(len_a − 1)) from the shorter list.
pub fn bulk_drift(a: &[f64], b: &[f64]) -> f64 {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() < 2 {
        return short
            .first()
            .zip(long.first())
            .map_or(0.0, |(x, y)| (x - y).abs());
    }
    let scale = (long.len() - 1) as f64 / (short.len() - 1) as f64;
    median(
        short
            .iter()
            .enumerate()
            .map(|(i, x)| (x - long[(i as f64 * scale).round() as usize]).abs())
            .collect(),
    )
}

fn nearest_distance(sorted: &[f64], x: f64) -> f64 {
    let i = sorted.partition_point(|&v| v < x);
    let mut d = f64::INFINITY;
    if i < sorted.len() {
        d = d.min(sorted[i] - x);
    }
    if i > 0 {
        d = d.min(x - sorted[i - 1]);
    }
    d
}

struct Side<'a> {
    n_max: usize,
    values: &'a [f64],
    other: &'a [f64],
}

fn scan_side(
    config: &EdgeScanConfig,
    omega: Omega,
    p: i64,
    q_hint: u64,
    drift: f64,
    side: Side<'_>,
) -> Result<(Vec<EdgeSuspect>, Option<f64>)> {
    let spec = Spectrum::new(side.values.to_vec(), 0.0, "");
    let bands: BandSet = detect_bands(&spec, GapThreshold::Auto, Some(q_hint))?;
    let span = side.values.last().unwrap_or(&0.0) - side.values.first().unwrap_or(&0.0);
    let threshold = drift.max(MATCH_TOLERANCE * span.max(1.0));
    let candidates: Vec<(usize, f64)> = side
        .values
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| bands.distance_to_bands(x) > 0.0)
        .map(|(i, x)| (i, nearest_distance(side.other, x)))
        .filter(|&(_, d)| d > threshold)
        .collect();
    if candidates.is_empty() {
        return Ok((Vec::new(), None));
    }

    let open = config
        .operator
        .build(omega, side.n_max, BoundaryKind::Open)?;
    let closed = config
        .operator
        .build(omega, side.n_max, BoundaryKind::Periodic)?;
    let periodic = eigenvalues(&closed)?.into_eigenvalues();
    let displacement: Vec<f64> = side
        .values
        .iter()
        .zip(&periodic)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let tail = (side.n_max / 40).max(5).min(side.n_max);

    let mut suspects = Vec::with_capacity(candidates.len());
    for (i, resize_distance) in candidates {
        let x = side.values[i];
        let pair = eigenpair_inverse_iteration(&open, x)?;
        let localization_weight = pair.vector[side.n_max - tail..]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .min(1.0);
        suspects.push(EdgeSuspect {
            p,
            n_max: side.n_max,
            eigenvalue: x,
            resize_distance,
            bulk_drift: drift,
            localization_weight,
            moved_under_resize: true,
            moved_under_periodic: bands.distance_to_bands(periodic[i]) < bands.distance_to_bands(x),
            periodic_displacement: displacement[i],
        });
    }
    Ok((suspects, Some(median(displacement))))
}

fn scan_point(config: &EdgeScanConfig, p: i64) -> Result<(Vec<EdgeSuspect>, Vec<f64>)> {
    let omega = Omega::pi_rational(p, config.q_grid)?;
    let q_hint = best_denominator(p, config.q_grid, config.hint_denominator_cap);
    let solve = |n| -> Result<Vec<f64>> {
        let op = config.operator.build(omega, n, BoundaryKind::Open)?;
        Ok(eigenvalues(&op)?.into_eigenvalues())
    };
    let a = solve(config.n_max_a)?;
    let b = solve(config.n_max_b)?;
    let drift = bulk_drift(&a, &b);

    let mut suspects = Vec::new();
    let mut bulk = Vec::new();
    for side in [
        Side {
            n_max: config.n_max_a,
            values: &a,
            other: &b,
        },
        Side {
            n_max: config.n_max_b,
            values: &b,
            other: &a,
        },
    ] {
        let (s, m) = scan_side(config, omega, p, q_hint, drift, side)?;
        suspects.extend(s);
        bulk.extend(m);
    }
    Ok((suspects, bulk))
}

/// Compare band structures of the chain at two sizes over the grid
/// ω = pπ/q_grid. An eigenvalue is a suspect when it lies in a gap of its own
/// band structure and its distance to the other size's spectrum exceeds both
/// the bulk drift and [`MATCH_TOLERANCE`] times the spectral span. Suspects
/// are then re-solved with a periodic closure.
pub fn edge_state_scan(config: &EdgeScanConfig) -> Result<EdgeStateReport> {
    if config.n_max_a == config.n_max_b {
        return Err(Error::InvalidParameter(format!(
            "the two sizes must differ, both are {}",
            config.n_max_a
        )));
    }
    if config.q_grid < 1 {
        return Err(Error::InvalidParameter(format!(
            "q_grid must be positive, got {}",
            config.q_grid
        )));
    }
    let ps: Vec<i64> = match &config.p_values {
        Some(ps) => ps.clone(),
        None => (1..=config.q_grid).collect(),
    };
    let per_point: Vec<Result<(Vec<EdgeSuspect>, Vec<f64>)>> = ps
        .par_iter()
        .map(|&p| scan_point(config, p).map_err(|e| e.at_grid_point(p)))
        .collect();
    let mut suspects = Vec::new();
    let mut bulk_periodic_displacements = Vec::new();
    for r in per_point {
        let (s, b) = r?;
        suspects.extend(s);
        bulk_periodic_displacements.extend(b);
    }
    Ok(EdgeStateReport {
        config: config.clone(),
        suspects,
        bulk_periodic_displacements,
    })
}

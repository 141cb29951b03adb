//! Spectra over a grid of rational frequencies ω = pπ/q.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::OperatorKind;
use crate::eigen::eigenvalues;
use crate::error::{Error, Result};
use crate::operator::BoundaryKind;
use crate::params::{Omega, Truncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub p: i64,
    pub q: i64,
}

impl GridPoint {
    pub fn omega(&self) -> Result<Omega> {
        Omega::pi_rational(self.p, self.q)
    }

    pub fn omega_over_pi(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// `p = 1..=q_grid` over the fixed denominator `q_grid`.
pub fn uniform_grid(q_grid: i64) -> Vec<GridPoint> {
    (1..=q_grid).map(|p| GridPoint { p, q: q_grid }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ButterflyResult {
    pub grid: Vec<GridPoint>,
    /// Sorted eigenvalues, one list per grid point.
    pub spectra: Vec<Vec<f64>>,
    pub operator: OperatorKind,
    pub trunc_label: String,
    pub boundary: BoundaryKind,
}

impl ButterflyResult {
    /// `(grid_index, eigenvalue)` in grid order, ascending within each point.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.spectra
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&x| (i, x)))
    }

    pub fn spectrum_at(&self, p: i64) -> Option<&[f64]> {
        self.grid
            .iter()
            .position(|g| g.p == p)
            .map(|i| self.spectra[i].as_slice())
    }
}

/// Solve `kind` at every grid point, in parallel on the current rayon pool.
/// Output order follows `grid` regardless of scheduling, and the first
/// failing point in grid order is the one reported.
pub fn sweep_grid(
    grid: &[GridPoint],
    kind: OperatorKind,
    n_max: usize,
    boundary: BoundaryKind,
) -> Result<ButterflyResult> {
    let results: Vec<Result<Vec<f64>>> = grid
        .par_iter()
        .map(|g| {
            let solve = || -> Result<Vec<f64>> {
                let op = kind.build(g.omega()?, n_max, boundary)?;
                Ok(eigenvalues(&op)?.into_eigenvalues())
            };
            solve().map_err(|e| e.at_grid_point(g.p))
        })
        .collect();
    let spectra = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ButterflyResult {
        grid: grid.to_vec(),
        spectra,
        operator: kind,
        trunc_label: format!("n_max={n_max}"),
        boundary,
    })
}

/// ω = pπ/q_grid for p = 1..=q_grid.
pub fn butterfly_sweep(
    q_grid: i64,
    kind: OperatorKind,
    trunc: &Truncation,
    boundary: BoundaryKind,
) -> Result<ButterflyResult> {
    if q_grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "q_grid must be at least 2, got {q_grid}"
        )));
    }
    sweep_grid(&uniform_grid(q_grid), kind, trunc.n_max(), boundary)
}

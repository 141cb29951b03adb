//! Real symmetric tridiagonal matrices with an optional periodic corner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic { corner: f64 },
}

/// Boundary choice without the corner value; builders fill the corner in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Open,
    Periodic,
}

impl Boundary {
    pub fn kind(&self) -> BoundaryKind {
        match self {
            Boundary::Open => BoundaryKind::Open,
            Boundary::Periodic { .. } => BoundaryKind::Periodic,
        }
    }
}

/// Entry (i,i) is `diag[i]`, entries (i,i+1) and (i+1,i) are `offdiag[i]`.
/// A periodic corner adds `corner` at (0,d−1) and (d−1,0); for d = 2 this
/// lands on the same entry as `offdiag[0]` and the two are summed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    boundary: Boundary,
    label: String,
}

impl TridiagonalOperator {
    pub fn new(
        diag: Vec<f64>,
        offdiag: Vec<f64>,
        boundary: Boundary,
        label: impl Into<String>,
    ) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter(
                "operator must have dimension >= 1".into(),
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "offdiag has length {}, expected {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "operator entries must be finite".into(),
            ));
        }
        if let Boundary::Periodic { corner } = boundary {
            if !corner.is_finite() {
                return Err(Error::InvalidParameter(
                    "periodic corner must be finite".into(),
                ));
            }
        }
        Ok(Self {
            diag,
            offdiag,
            boundary,
            label: label.into(),
        })
    }

    /// `c·I` of dimension `dim`.
    pub fn scaled_identity(dim: usize, c: f64) -> Result<Self> {
        Self::new(
            vec![c; dim],
            vec![0.0; dim.saturating_sub(1)],
            Boundary::Open,
            format!("identity*{c}"),
        )
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_open(&self) -> bool {
        matches!(self.boundary, Boundary::Open)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        if let Boundary::Periodic { corner } = boundary {
            if !corner.is_finite() {
                return Err(Error::InvalidParameter(
                    "periodic corner must be finite".into(),
                ));
            }
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Copy with `offdiag[index]` replaced.
    pub fn with_offdiag_entry(&self, index: usize, value: f64) -> Result<Self> {
        let mut offdiag = self.offdiag.clone();
        let slot = offdiag.get_mut(index).ok_or_else(|| {
            Error::InvalidParameter(format!("offdiag index {index} out of range"))
        })?;
        *slot = value;
        Self::new(
            self.diag.clone(),
            offdiag,
            self.boundary,
            self.label.clone(),
        )
    }

    /// Row-major dense symmetric matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for (i, &x) in self.diag.iter().enumerate() {
            m[i * d + i] = x;
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            m[i * d + i + 1] = e;
            m[(i + 1) * d + i] = e;
        }
        if let Boundary::Periodic { corner } = self.boundary {
            if d > 1 {
                m[d - 1] += corner;
                m[(d - 1) * d] += corner;
            } else {
                m[0] += 2.0 * corner;
            }
        }
        m
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        assert_eq!(x.len(), d, "vector length must match operator dimension");
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(a, b)| a * b).collect();
        for (i, &e) in self.offdiag.iter().enumerate() {
            y[i] += e * x[i + 1];
            y[i + 1] += e * x[i];
        }
        if let Boundary::Periodic { corner } = self.boundary {
            if d > 1 {
                y[0] += corner * x[d - 1];
                y[d - 1] += corner * x[0];
            } else {
                y[0] += 2.0 * corner * x[0];
            }
        }
        y
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let d = self.dim();
        let corner = match self.boundary {
            Boundary::Periodic { corner } => corner.abs(),
            Boundary::Open => 0.0,
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..d {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.offdiag[i - 1].abs();
            }
            if i + 1 < d {
                radius += self.offdiag[i].abs();
            }
            if d == 1 {
                radius += 2.0 * corner;
            } else if i == 0 || i == d - 1 {
                radius += corner;
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// Infinity norm (max absolute row sum), an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin_bounds();
        lo.abs().max(hi.abs())
    }

    /// Split an open operator at exact zero couplings. Returns half-open
    /// index ranges of the independent blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, &e) in self.offdiag.iter().enumerate() {
            if e == 0.0 {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..self.dim());
        out
    }
}

//! Deformation function, energy levels and the finite matrix forms of the
//! deformed position operator, the rescaled family X_ν, Harper's operator and
//! the generalized-Λ operator.
//!
//! All position-type operators are returned as real symmetric Jacobi matrices
//! in the number basis `|0⟩..|n_max−1⟩`. Row 0 never couples to a state below
//! it, which realizes the semi-infinite boundary condition φ₋₁ = 0.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{Boundary, BoundaryKind, TridiagonalOperator};
use crate::params::{DeformationParams, Omega, Truncation};

/// F(n) = sin[ω(n+1)] / √(n+1).
pub fn deformation_value(params: &DeformationParams, n: u64) -> f64 {
    let m = n + 1;
    params.omega().sin_multiple(m as i64) / (m as f64).sqrt()
}

/// E_n = ½(sin²[ω(n+1)] + sin²[ωn]).
///
/// The second term is F(n−1)²·n, which vanishes at n = 0 without touching F(−1).
pub fn energy_level(params: &DeformationParams, n: u64) -> f64 {
    let w = params.omega();
    let upper = w.sin_multiple(n as i64 + 1);
    let lower = if n == 0 {
        0.0
    } else {
        w.sin_multiple(n as i64)
    };
    0.5 * (upper * upper + lower * lower)
}

/// Δ_n = F(n−1)·√(n/2) = sin(ωn)/√2, the coupling between |n−1⟩ and |n⟩.
pub fn position_hopping(omega: Omega, n: i64) -> f64 {
    omega.sin_multiple(n) * FRAC_1_SQRT_2
}

/// 2cos(ωn − ν), the coupling of X_ν between |n−1⟩ and |n⟩.
pub fn xnu_hopping(omega: Omega, nu: f64, n: i64) -> f64 {
    2.0 * omega.cos_shifted(n, nu)
}

/// |F(n−1)|·√(n/2) = √(1 + Λ² + 2Λcos(2ωn − 2ν)) / √2.
pub fn general_lambda_hopping(params: &DeformationParams, n: i64) -> f64 {
    let lambda = params.lambda();
    let angle = params.omega().multiple_angle(2 * n) - 2.0 * params.nu();
    let radicand = (1.0 + lambda * lambda + 2.0 * lambda * angle.cos()).max(0.0);
    radicand.sqrt() * FRAC_1_SQRT_2
}

fn momentum_sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

fn off_diagonal_chain(
    n_max: usize,
    hop: impl Fn(i64) -> f64,
    label: String,
) -> Result<TridiagonalOperator> {
    let offdiag = (1..n_max as i64).map(hop).collect();
    TridiagonalOperator::new(vec![0.0; n_max], offdiag, Boundary::Open, label)
}

/// Deformed position X: zero diagonal, `offdiag[j] = sin(ω(j+1))/√2`.
///
/// ν and Λ of `params` are not used; X is the ν = π/2 member of the family.
pub fn build_position_operator(
    params: &DeformationParams,
    trunc: &Truncation,
) -> Result<TridiagonalOperator> {
    let w = params.omega();
    off_diagonal_chain(
        trunc.n_max(),
        |n| position_hopping(w, n),
        format!("X omega={w} nu=pi/2 n_max={}", trunc.n_max()),
    )
}

/// Rescaled family X_ν: zero diagonal, `offdiag[j] = 2cos(ω(j+1) − ν)`.
pub fn build_xnu_operator(
    params: &DeformationParams,
    trunc: &Truncation,
) -> Result<TridiagonalOperator> {
    let (w, nu) = (params.omega(), params.nu());
    off_diagonal_chain(
        trunc.n_max(),
        |n| xnu_hopping(w, nu, n),
        format!("Xnu omega={w} nu={nu} n_max={}", trunc.n_max()),
    )
}

/// Harper's operator T + T† + 2cos(ω̃K − ν̃) on the k window of `trunc`.
pub fn build_harper_operator(
    omega_tilde: Omega,
    nu_tilde: f64,
    trunc: &Truncation,
    boundary: BoundaryKind,
) -> Result<TridiagonalOperator> {
    if !nu_tilde.is_finite() {
        return Err(Error::InvalidParameter("nu_tilde must be finite".into()));
    }
    let len = trunc.window_len();
    if len < 2 {
        return Err(Error::InvalidTruncation(
            "Harper window needs at least 2 sites".into(),
        ));
    }
    let diag = trunc
        .k_labels()
        .map(|k| 2.0 * omega_tilde.cos_shifted(k, nu_tilde))
        .collect();
    let boundary = match boundary {
        BoundaryKind::Open => Boundary::Open,
        BoundaryKind::Periodic => Boundary::Periodic { corner: 1.0 },
    };
    TridiagonalOperator::new(
        diag,
        vec![1.0; len - 1],
        boundary,
        format!(
            "Harper omega_tilde={omega_tilde} nu_tilde={nu_tilde} k={}..={}",
            trunc.k_min(),
            trunc.k_max()
        ),
    )
}

/// Generalized-Λ operator with the complex phase of F gauged away: zero diagonal,
/// `offdiag[j] = √(1 + Λ² + 2Λcos(2ω(j+1) − 2ν))/√2`.
pub fn build_general_lambda_operator(
    params: &DeformationParams,
    trunc: &Truncation,
) -> Result<TridiagonalOperator> {
    if params.lambda() < 0.0 {
        return Err(Error::InvalidParameter(
            "lambda must be non-negative".into(),
        ));
    }
    off_diagonal_chain(
        trunc.n_max(),
        |n| general_lambda_hopping(params, n),
        format!(
            "GeneralLambda omega={} nu={} lambda={} n_max={}",
            params.omega(),
            params.nu(),
            params.lambda(),
            trunc.n_max()
        ),
    )
}

/// Real representative of P = i^N X i^{−N}: the couplings of X with the
/// alternating sign pattern `−, +, −, …`. The conjugation is by diagonal phases,
/// so the spectrum equals that of X.
pub fn build_momentum_operator(
    params: &DeformationParams,
    trunc: &Truncation,
) -> Result<TridiagonalOperator> {
    let x = build_position_operator(params, trunc)?;
    let offdiag = x
        .offdiag()
        .iter()
        .enumerate()
        .map(|(j, &e)| momentum_sign(j) * e)
        .collect();
    TridiagonalOperator::new(
        x.diag().to_vec(),
        offdiag,
        Boundary::Open,
        format!("P omega={} n_max={}", params.omega(), trunc.n_max()),
    )
}

/// Operator family selector used by sweeps and the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    /// Deformed position X (ν = π/2).
    #[default]
    Position,
    /// X_ν.
    Xnu {
        nu: f64,
    },
    /// Harper's operator equivalent to X_ν at ω: ω̃ = 2ω, ν̃ = 2ν, k = 0..n_max.
    Harper {
        nu: f64,
    },
    GeneralLambda {
        nu: f64,
        lambda: f64,
    },
    /// Real gauge representative of the deformed momentum P.
    Momentum,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Position => "X",
            OperatorKind::Xnu { .. } => "Xnu",
            OperatorKind::Harper { .. } => "Harper",
            OperatorKind::GeneralLambda { .. } => "GeneralLambda",
            OperatorKind::Momentum => "Momentum",
        }
    }

    /// True for the zero-diagonal chains, whose spectra are symmetric about 0.
    pub fn is_off_diagonal(&self) -> bool {
        !matches!(self, OperatorKind::Harper { .. })
    }

    pub fn params(&self, omega: Omega) -> Result<DeformationParams> {
        match *self {
            OperatorKind::Position | OperatorKind::Momentum => DeformationParams::ergodic(omega),
            OperatorKind::Xnu { nu } | OperatorKind::Harper { nu } => {
                DeformationParams::with_nu(omega, nu)
            }
            OperatorKind::GeneralLambda { nu, lambda } => DeformationParams::new(omega, nu, lambda),
        }
    }

    /// Build the operator at ω with `n_max` sites. A periodic boundary closes
    /// the chain with the next coupling of the sequence (index `n_max`); for
    /// Harper the corner is 1.
    pub fn build(
        &self,
        omega: Omega,
        n_max: usize,
        boundary: BoundaryKind,
    ) -> Result<TridiagonalOperator> {
        let params = self.params(omega)?;
        let trunc = Truncation::with_dimension(n_max)?;
        let n = n_max as i64;
        let (op, corner) = match *self {
            OperatorKind::Position => (
                build_position_operator(&params, &trunc)?,
                position_hopping(omega, n),
            ),
            OperatorKind::Xnu { nu } => (
                build_xnu_operator(&params, &trunc)?,
                xnu_hopping(omega, nu, n),
            ),
            OperatorKind::Harper { nu } => {
                return build_harper_operator(omega.doubled(), 2.0 * nu, &trunc, boundary);
            }
            OperatorKind::GeneralLambda { .. } => (
                build_general_lambda_operator(&params, &trunc)?,
                general_lambda_hopping(&params, n),
            ),
            OperatorKind::Momentum => (
                build_momentum_operator(&params, &trunc)?,
                momentum_sign(n_max - 1) * position_hopping(omega, n),
            ),
        };
        match boundary {
            BoundaryKind::Open => Ok(op),
            BoundaryKind::Periodic => op.with_boundary(Boundary::Periodic { corner }),
        }
    }
}

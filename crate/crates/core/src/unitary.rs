//! Finite-window phase basis |k) and checks of the map from X_ν to Harper's
//! operator.
//!
//! The states are `|k) = 𝒩⁻¹ Σ_n exp(iθ(k,n)) |n⟩` with 𝒩 = √K. Writing
//! `2cos(ωn − ν) = e^{i(ωn−ν)} + e^{−i(ωn−ν)}` splits X_ν into four complex
//! bidiagonal pieces: a lowering part and its adjoint (together H₀, the
//! translations `|k) → |k∓1)`) and a remaining pair (V, diagonal on |k)).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::builders::{build_harper_operator, build_xnu_operator};
use crate::error::{Error, Result};
use crate::operator::BoundaryKind;
use crate::params::{reduce_angle, DeformationParams, Omega, Truncation};

/// θ(k,n) = ω(n(n+1)/2 + k(k−1−2n)) + νn, reduced to (−π, π].
pub fn basis_phase(omega: Omega, nu: f64, k: i64, n: u64) -> f64 {
    let n = n as i64;
    let m = n * (n + 1) / 2 + k * (k - 1 - 2 * n);
    omega.phase(m, reduce_angle(nu * n as f64))
}

/// Rows are the states |k) of the window, columns the number states `0..n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    entries: Vec<Complex64>,
    k_min: i64,
    rows: usize,
    n_max: usize,
    omega: Omega,
    nu: f64,
    normalization: f64,
}

impl TransformMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn entry(&self, row: usize, n: usize) -> Complex64 {
        self.entries[row * self.n_max + n]
    }

    /// Components of the state in row `row` over the number basis.
    pub fn state(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.n_max..(row + 1) * self.n_max]
    }

    /// Max |(U†U)[n][m] − δ_nm| over column pairs with |n − m| < `separation`.
    pub fn gram_defect(&self, separation: usize) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..self.n_max {
            let hi = (n + separation).min(self.n_max);
            for m in n..hi {
                let g: Complex64 = (0..self.rows)
                    .map(|r| self.entry(r, n).conj() * self.entry(r, m))
                    .sum();
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

fn phase_state(omega: Omega, nu: f64, k: i64, n_max: usize, scale: f64) -> Vec<Complex64> {
    (0..n_max as u64)
        .map(|n| Complex64::from_polar(scale, basis_phase(omega, nu, k, n)))
        .collect()
}

/// `entries[k][n] = exp(iθ(k,n))/√K` over the window of `trunc`.
pub fn build_transform(omega: Omega, nu: f64, trunc: &Truncation) -> Result<TransformMatrix> {
    if !nu.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "nu must be finite, got {nu}"
        )));
    }
    let rows = trunc.window_len();
    let n_max = trunc.n_max();
    let normalization = (rows as f64).sqrt();
    let mut entries = Vec::with_capacity(rows * n_max);
    for k in trunc.k_labels() {
        entries.extend(phase_state(omega, nu, k, n_max, 1.0 / normalization));
    }
    Ok(TransformMatrix {
        entries,
        k_min: trunc.k_min(),
        rows,
        n_max,
        omega,
        nu,
        normalization,
    })
}

/// Complex matrix with entries only on the first super- and subdiagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Bidiagonal {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
}

impl Bidiagonal {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = v.len();
        assert_eq!(self.upper.len() + 1, d);
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for j in 0..d - 1 {
            out[j] += self.upper[j] * v[j + 1];
            out[j + 1] += self.lower[j] * v[j];
        }
        out
    }

    pub fn adjoint(&self) -> Bidiagonal {
        Bidiagonal {
            upper: self.lower.iter().map(|z| z.conj()).collect(),
            lower: self.upper.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// The three pieces of X_ν = H₀⁻ + H₀⁺ + V in the number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting {
    /// `a·exp[i(ωN − ν)]/√N`, entry (n−1, n) = e^{i(ωn−ν)}.
    pub lowering: Bidiagonal,
    /// Adjoint of `lowering`.
    pub raising: Bidiagonal,
    /// Entry (n−1, n) = e^{−i(ωn−ν)} plus its adjoint.
    pub potential: Bidiagonal,
}

pub fn splitting(omega: Omega, nu: f64, n_max: usize) -> Splitting {
    let plus: Vec<Complex64> = (1..n_max as i64)
        .map(|n| Complex64::from_polar(1.0, omega.phase(n, -nu)))
        .collect();
    let zero = vec![Complex64::new(0.0, 0.0); n_max - 1];
    let lowering = Bidiagonal {
        upper: plus.clone(),
        lower: zero,
    };
    let raising = lowering.adjoint();
    let potential = Bidiagonal {
        upper: plus.iter().map(|z| z.conj()).collect(),
        lower: plus,
    };
    Splitting {
        lowering,
        raising,
        potential,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_interior_residual: f64,
    pub max_boundary_residual: f64,
    /// Half-open range `[start, end)` of the indices counted as interior.
    pub interior_range: (usize, usize),
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub lowering: ResidualReport,
    pub raising: ResidualReport,
    pub potential: ResidualReport,
}

impl TranslationReport {
    pub fn max_interior_residual(&self) -> f64 {
        self.lowering
            .max_interior_residual
            .max(self.raising.max_interior_residual)
            .max(self.potential.max_interior_residual)
    }

    pub fn max_boundary_residual(&self) -> f64 {
        self.lowering
            .max_boundary_residual
            .max(self.raising.max_boundary_residual)
            .max(self.potential.max_boundary_residual)
    }
}

/// Componentwise check of `H₀⁻|k) = |k−1)`, `H₀⁺|k) = |k+1)` and
/// `V|k) = 2cos(2ωk − 2ν)|k)` for every k of the window. Components
/// `1..n_max−1` are interior; `0` and `n_max−1` see the truncation.
pub fn verify_translation_relations(
    omega: Omega,
    nu: f64,
    trunc: &Truncation,
) -> Result<TranslationReport> {
    let n_max = trunc.n_max();
    if n_max < 4 || trunc.window_len() < 3 {
        return Err(Error::InvalidTruncation(format!(
            "translation check needs n_max >= 4 and at least 3 k labels, got n_max = {n_max}, K = {}",
            trunc.window_len()
        )));
    }
    let transform = build_transform(omega, nu, trunc)?;
    let scale = 1.0 / transform.normalization();
    let parts = splitting(omega, nu, n_max);

    let mut acc = [(0.0f64, 0.0f64); 3];
    for (row, k) in trunc.k_labels().enumerate() {
        let state = transform.state(row);
        let below = phase_state(omega, nu, k - 1, n_max, scale);
        let above = phase_state(omega, nu, k + 1, n_max, scale);
        let v = 2.0 * omega.doubled().cos_shifted(k, 2.0 * nu);
        let here: Vec<Complex64> = state.iter().map(|z| z * v).collect();
        let checks = [
            (parts.lowering.apply(state), below),
            (parts.raising.apply(state), above),
            (parts.potential.apply(state), here),
        ];
        for (slot, (got, want)) in acc.iter_mut().zip(checks) {
            for n in 0..n_max {
                let r = (got[n] - want[n]).norm();
                if n == 0 || n == n_max - 1 {
                    slot.1 = slot.1.max(r);
                } else {
                    slot.0 = slot.0.max(r);
                }
            }
        }
    }
    let report = |(interior, boundary): (f64, f64), what: &str| ResidualReport {
        max_interior_residual: interior,
        max_boundary_residual: boundary,
        interior_range: (1, n_max - 1),
        description: format!("{what}, omega={omega}, nu={nu}, K={}", trunc.window_len()),
    };
    Ok(TranslationReport {
        lowering: report(acc[0], "H0 lowering |k) -> |k-1)"),
        raising: report(acc[1], "H0 raising |k) -> |k+1)"),
        potential: report(acc[2], "V |k) -> 2cos(2 omega k - 2 nu)|k)"),
    })
}

/// M = (k|X_ν|k') on the window, compared with Harper's operator at
/// (2ω, 2ν).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarperConjugation {
    pub report: ResidualReport,
    pub k_labels: Vec<i64>,
    /// Real part of the diagonal of M.
    pub diagonal: Vec<f64>,
    /// Largest |k − k'| compared against Harper's operator.
    pub band: usize,
}

/// Form M[k][k'] = (K/L)·Σ_{n∈I} conj(u_k[n])·(X_ν u_k')[n] over interior rows
/// I = 1..1+L and compare it with Harper's operator at ω̃ = 2ω, ν̃ = 2ν.
///
/// For ω = pπ/q (coprime form, q ≥ 2) L is the largest multiple of q not
/// exceeding n_max − 2, which makes the n-sum an exact discrete delta, and
/// entries with |k − k'| ≤ q − 2 are interior; larger separations are
/// aliased (|k+q) = ±|k)) and go to the boundary residual. For a float ω
/// L = n_max − 2, every entry is interior and the residual is only reported.
pub fn conjugate_to_harper(omega: Omega, nu: f64, trunc: &Truncation) -> Result<HarperConjugation> {
    let n_max = trunc.n_max();
    let k_len = trunc.window_len();
    if 2 * k_len > n_max {
        return Err(Error::InvalidTruncation(format!(
            "window K = {k_len} exceeds n_max/2 = {}",
            n_max / 2
        )));
    }
    let (rows, band) = match omega.reduced() {
        Some((_, 1)) => {
            return Err(Error::InvalidParameter(format!(
                "omega = {omega} maps every |k) to the same state"
            )))
        }
        Some((_, q)) => {
            let q = q as usize;
            let l = q * ((n_max - 2) / q);
            if l == 0 {
                return Err(Error::InvalidTruncation(format!(
                    "n_max = {n_max} leaves no full period of q = {q} in the interior"
                )));
            }
            (l, q.saturating_sub(2))
        }
        None => {
            if omega.sin_multiple(1) == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "omega = {omega} maps every |k) to the same state"
                )));
            }
            (n_max - 2, k_len - 1)
        }
    };
    let params = DeformationParams::with_nu(omega, nu)?;
    let x = build_xnu_operator(&params, trunc)?;
    let transform = build_transform(omega, nu, trunc)?;
    let harper =
        build_harper_operator(omega.doubled(), 2.0 * nu, trunc, BoundaryKind::Open)?.to_dense();

    let images: Vec<Vec<Complex64>> = (0..k_len)
        .map(|r| {
            let s = transform.state(r);
            let re = x.apply(&s.iter().map(|z| z.re).collect::<Vec<_>>());
            let im = x.apply(&s.iter().map(|z| z.im).collect::<Vec<_>>());
            re.into_iter()
                .zip(im)
                .map(|(a, b)| Complex64::new(a, b))
                .collect()
        })
        .collect();

    let weight = k_len as f64 / rows as f64;
    let mut interior = 0.0f64;
    let mut boundary = 0.0f64;
    let mut diagonal = Vec::with_capacity(k_len);
    for a in 0..k_len {
        let u = transform.state(a);
        for b in 0..k_len {
            let m: Complex64 = (1..1 + rows)
                .map(|n| u[n].conj() * images[b][n])
                .sum::<Complex64>()
                * weight;
            if a == b {
                diagonal.push(m.re);
            }
            let dev = (m - harper[a * k_len + b]).norm();
            if a.abs_diff(b) <= band {
                interior = interior.max(dev);
            } else {
                boundary = boundary.max(dev);
            }
        }
    }
    Ok(HarperConjugation {
        report: ResidualReport {
            max_interior_residual: interior,
            max_boundary_residual: boundary,
            interior_range: (1, 1 + rows),
            description: format!(
                "(k|X_nu|k') vs Harper(2 omega, 2 nu), omega={omega}, nu={nu}, K={k_len}, n_max={n_max}, |k-k'| <= {band}"
            ),
        },
        k_labels: trunc.k_labels().collect(),
        diagonal,
        band,
    })
}

/// Least-squares fit `values[k] ≈ amplitude·cos(frequency·k − phase)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalFit {
    pub amplitude: f64,
    /// Phase reduced to (−π, π].
    pub phase: f64,
    pub max_residual: f64,
}

pub fn fit_diagonal(values: &[f64], k_labels: &[i64], frequency: Omega) -> Result<DiagonalFit> {
    if values.len() != k_labels.len() || values.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need matching value and label lists of length >= 2, got {} and {}",
            values.len(),
            k_labels.len()
        )));
    }
    let basis: Vec<(f64, f64)> = k_labels
        .iter()
        .map(|&k| {
            let t = frequency.multiple_angle(k);
            (t.cos(), frequency.sin_multiple(k))
        })
        .collect();
    let (mut cc, mut cs, mut ss, mut cy, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&(c, s), &y) in basis.iter().zip(values) {
        cc += c * c;
        cs += c * s;
        ss += s * s;
        cy += c * y;
        sy += s * y;
    }
    let det = cc * ss - cs * cs;
    if det.abs() <= 1e-12 * (cc * ss).max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateFit(format!(
            "cos and sin columns are collinear at frequency {frequency}"
        )));
    }
    let a = (ss * cy - cs * sy) / det;
    let b = (cc * sy - cs * cy) / det;
    let max_residual = basis
        .iter()
        .zip(values)
        .map(|(&(c, s), &y)| (y - a * c - b * s).abs())
        .fold(0.0, f64::max);
    Ok(DiagonalFit {
        amplitude: a.hypot(b),
        phase: b.atan2(a),
        max_residual,
    })
}

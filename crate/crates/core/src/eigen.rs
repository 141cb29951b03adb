//! Eigenvalues of real symmetric tridiagonal operators.
//!
//! The production path is Sturm-sequence bisection on each block between
//! exact zero couplings. Cyclic Jacobi on the dense matrix is kept as an
//! independent oracle and is also the only path for periodic operators,
//! whose corner entry breaks tridiagonality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{Boundary, TridiagonalOperator};

/// Bisection interval width used by [`eigenvalues`]: four units of rounding
/// at the scale of the operator norm (and never below 4·eps).
pub fn default_tolerance(op: &TridiagonalOperator) -> f64 {
    4.0 * f64::EPSILON * op.norm_bound().max(1.0)
}

/// Largest dimension accepted by the dense routines.
pub const DENSE_DIMENSION_LIMIT: usize = 2048;

const MAX_BISECTION_STEPS: usize = 256;
const MAX_JACOBI_SWEEPS: usize = 100;
const JACOBI_RELATIVE_OFF_NORM: f64 = 1e-12;
const INVERSE_ITERATION_STEPS: usize = 12;
const INVERSE_ITERATION_SEED: u64 = 0x0005_eed0_f1e5_7a7e;
/// Shift perturbations, in units of `eps·‖T‖`, tried in order after a zero pivot.
const SHIFT_PERTURBATIONS: [f64; 9] = [0.0, 8.0, -8.0, 64.0, -64.0, 512.0, -512.0, 4096.0, -4096.0];

/// Sorted eigenvalues of one operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    tolerance: f64,
    source_label: String,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>, tolerance: f64, source_label: impl Into<String>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self {
            eigenvalues,
            tolerance,
            source_label: source_label.into(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn into_eigenvalues(self) -> Vec<f64> {
        self.eigenvalues
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.eigenvalues.partition_point(|&v| v < x)
    }

    /// Elementwise maximum absolute difference; `None` on length mismatch.
    pub fn max_abs_difference(&self, other: &Spectrum) -> Option<f64> {
        if self.dimension() != other.dimension() {
            return None;
        }
        Some(
            self.eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn pivot_floor(offdiag_sq: &[f64]) -> f64 {
    let max_e2 = offdiag_sq.iter().copied().fold(1.0, f64::max);
    f64::MIN_POSITIVE * max_e2
}

/// Negative-pivot count of the LDLᵀ factorization of `T − xI`.
fn sturm_count_raw(diag: &[f64], offdiag_sq: &[f64], pivmin: f64, x: f64) -> usize {
    let mut count = 0;
    let mut pivot = diag[0] - x;
    if pivot.abs() < pivmin {
        pivot = -pivmin;
    }
    if pivot < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        pivot = diag[i] - x - offdiag_sq[i - 1] / pivot;
        if pivot.abs() < pivmin {
            pivot = -pivmin;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues of an open operator strictly below `x`.
pub fn sturm_count(op: &TridiagonalOperator, x: f64) -> Result<usize> {
    if !op.is_open() {
        return Err(Error::PeriodicUnsupported("Sturm counting"));
    }
    let e2: Vec<f64> = op.offdiag().iter().map(|e| e * e).collect();
    Ok(sturm_count_raw(op.diag(), &e2, pivot_floor(&e2), x))
}

fn bisect_block(
    diag: &[f64],
    offdiag: &[f64],
    tol: f64,
    first_index: usize,
    out: &mut Vec<f64>,
) -> Result<()> {
    let m = diag.len();
    if m == 1 {
        out.push(diag[0]);
        return Ok(());
    }
    let e2: Vec<f64> = offdiag.iter().map(|e| e * e).collect();
    let pivmin = pivot_floor(&e2);

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < m { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + 2.0 * pivmin;
    lo -= pad;
    hi += pad;

    let mut floor = lo;
    for k in 0..m {
        let mut a = floor;
        let mut b = hi;
        let mut steps = 0;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || steps == MAX_BISECTION_STEPS {
                return Err(Error::NoConvergence {
                    index: first_index + k,
                    iterations: steps,
                    tolerance: tol,
                });
            }
            if sturm_count_raw(diag, &e2, pivmin, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
            steps += 1;
        }
        floor = a;
        out.push(0.5 * (a + b));
    }
    Ok(())
}

/// All eigenvalues of an open operator by Sturm bisection, each to an
/// interval width below `tol`. Exact zero couplings split the matrix into
/// independent blocks; degenerate values keep their multiplicity.
pub fn eigenvalues_bisection(op: &TridiagonalOperator, tol: f64) -> Result<Spectrum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !op.is_open() {
        return Err(Error::PeriodicUnsupported("bisection"));
    }
    let mut values = Vec::with_capacity(op.dim());
    for block in op.blocks() {
        let offdiag = &op.offdiag()[block.start..block.end - 1];
        bisect_block(
            &op.diag()[block.clone()],
            offdiag,
            tol,
            block.start,
            &mut values,
        )?;
    }
    Ok(Spectrum::new(values, tol, op.label()))
}

fn check_dense_dimension(dim: usize) -> Result<()> {
    if dim > DENSE_DIMENSION_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim,
            limit: DENSE_DIMENSION_LIMIT,
        });
    }
    Ok(())
}

/// Cyclic Jacobi rotations on a dense symmetric row-major matrix. Returns the
/// diagonal once the off-diagonal Frobenius norm falls below 1e−12·‖A‖_F.
pub fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let frobenius = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_RELATIVE_OFF_NORM * frobenius;

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(a);
        if off <= target {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::JacobiNoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Rotating a rounding-level entry inside a degenerate cluster
                // only stirs the cluster and stalls convergence.
                if sweeps > 3
                    && app.abs() + 100.0 * apq.abs() == app.abs()
                    && aqq.abs() + 100.0 * apq.abs() == aqq.abs()
                {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
            }
        }
        sweeps += 1;
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

/// Dense cyclic-Jacobi spectrum of any operator, including periodic ones.
pub fn eigenvalues_dense_oracle(op: &TridiagonalOperator) -> Result<Spectrum> {
    let n = op.dim();
    check_dense_dimension(n)?;
    let mut dense = op.to_dense();
    let frobenius = dense.iter().map(|x| x * x).sum::<f64>().sqrt();
    let values = jacobi_eigenvalues(&mut dense, n)?;
    Ok(Spectrum::new(
        values,
        JACOBI_RELATIVE_OFF_NORM * frobenius.max(1.0),
        op.label(),
    ))
}

/// Bisection for open operators, dense Jacobi for periodic ones.
pub fn eigenvalues(op: &TridiagonalOperator) -> Result<Spectrum> {
    match op.boundary() {
        Boundary::Open => eigenvalues_bisection(op, default_tolerance(op)),
        Boundary::Periodic { .. } => eigenvalues_dense_oracle(op),
    }
}

/// LU factors of `T − σI` with partial pivoting.
enum ShiftedFactor {
    /// Upper band rows `(u0, u1, u2)`, multipliers and row-swap flags.
    Banded {
        upper: Vec<[f64; 3]>,
        multipliers: Vec<f64>,
        swapped: Vec<bool>,
    },
    Dense {
        lu: Vec<f64>,
        perm: Vec<usize>,
        n: usize,
    },
}

impl ShiftedFactor {
    /// `None` when an exact zero pivot appears.
    fn new(op: &TridiagonalOperator, shift: f64) -> Option<Self> {
        if op.is_open() {
            Self::banded(op.diag(), op.offdiag(), shift)
        } else {
            let n = op.dim();
            let mut a = op.to_dense();
            for i in 0..n {
                a[i * n + i] -= shift;
            }
            Self::dense(a, n)
        }
    }

    fn banded(diag: &[f64], offdiag: &[f64], shift: f64) -> Option<Self> {
        let n = diag.len();
        let mut upper = Vec::with_capacity(n);
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        let mut swapped = Vec::with_capacity(n.saturating_sub(1));
        let mut cur = [
            diag[0] - shift,
            offdiag.first().copied().unwrap_or(0.0),
            0.0,
        ];
        for i in 0..n - 1 {
            let mut next = [
                offdiag[i],
                diag[i + 1] - shift,
                offdiag.get(i + 1).copied().unwrap_or(0.0),
            ];
            let swap = next[0].abs() > cur[0].abs();
            if swap {
                std::mem::swap(&mut cur, &mut next);
            }
            if cur[0] == 0.0 {
                return None;
            }
            let f = next[0] / cur[0];
            upper.push(cur);
            multipliers.push(f);
            swapped.push(swap);
            cur = [next[1] - f * cur[1], next[2] - f * cur[2], 0.0];
        }
        if cur[0] == 0.0 {
            return None;
        }
        upper.push(cur);
        Some(ShiftedFactor::Banded {
            upper,
            multipliers,
            swapped,
        })
    }

    fn dense(mut a: Vec<f64>, n: usize) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap_or(col);
            if a[pivot_row * n + col] == 0.0 {
                return None;
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            let pivot = a[col * n + col];
            for i in col + 1..n {
                let f = a[i * n + col] / pivot;
                a[i * n + col] = f;
                if f != 0.0 {
                    for j in col + 1..n {
                        a[i * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        Some(ShiftedFactor::Dense { lu: a, perm, n })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            ShiftedFactor::Banded {
                upper,
                multipliers,
                swapped,
            } => {
                let n = upper.len();
                let mut b = rhs.to_vec();
                for i in 0..n - 1 {
                    if swapped[i] {
                        b.swap(i, i + 1);
                    }
                    b[i + 1] -= multipliers[i] * b[i];
                }
                let mut x = vec![0.0; n];
                for i in (0..n).rev() {
                    let mut s = b[i];
                    if i + 1 < n {
                        s -= upper[i][1] * x[i + 1];
                    }
                    if i + 2 < n {
                        s -= upper[i][2] * x[i + 2];
                    }
                    x[i] = s / upper[i][0];
                }
                x
            }
            ShiftedFactor::Dense { lu, perm, n } => {
                let n = *n;
                let mut y: Vec<f64> = perm.iter().map(|&p| rhs[p]).collect();
                for i in 0..n {
                    let mut s = y[i];
                    for j in 0..i {
                        s -= lu[i * n + j] * y[j];
                    }
                    y[i] = s;
                }
                for i in (0..n).rev() {
                    let mut s = y[i];
                    for j in i + 1..n {
                        s -= lu[i * n + j] * y[j];
                    }
                    y[i] = s / lu[i * n + i];
                }
                y
            }
        }
    }
}

fn normalize(v: &mut [f64]) -> Option<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(norm)
}

fn rayleigh_residual(op: &TridiagonalOperator, v: &[f64]) -> (f64, f64) {
    let tv = op.apply(v);
    let value: f64 = tv.iter().zip(v).map(|(a, b)| a * b).sum();
    let residual = tv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt();
    (value, residual)
}

/// Shifted inverse iteration from a fixed pseudo-random start vector.
///
/// An exact zero pivot (the shift is an eigenvalue of a decoupled block)
/// triggers a retry with the next entry of a fixed perturbation sequence.
/// The returned value is the Rayleigh quotient of the unit vector, whose
/// largest-magnitude component is made positive.
pub fn eigenpair_inverse_iteration(op: &TridiagonalOperator, value: f64) -> Result<EigenPair> {
    let n = op.dim();
    if !op.is_open() {
        check_dense_dimension(n)?;
    }
    let (lo, hi) = op.gershgorin_bounds();
    let norm = op.norm_bound();
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let slack = 16.0 * f64::EPSILON * scale;
    if !value.is_finite() || value < lo - slack || value > hi + slack {
        return Err(Error::InvalidParameter(format!(
            "shift {value} outside the Gershgorin interval [{lo}, {hi}]"
        )));
    }
    let target = 1e-8 * norm;

    let mut rng = ChaCha8Rng::seed_from_u64(INVERSE_ITERATION_SEED);
    let start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut best: Option<EigenPair> = None;
    for delta in SHIFT_PERTURBATIONS {
        let shift = value + delta * f64::EPSILON * scale;
        let Some(factor) = ShiftedFactor::new(op, shift) else {
            continue;
        };
        let mut v = start.clone();
        normalize(&mut v);
        let mut converged = false;
        for _ in 0..INVERSE_ITERATION_STEPS {
            let mut w = factor.solve(&v);
            if normalize(&mut w).is_none() {
                break;
            }
            v = w;
            let (_, residual) = rayleigh_residual(op, &v);
            if residual <= target {
                converged = true;
                break;
            }
        }
        if !v.iter().all(|x| x.is_finite()) {
            continue;
        }
        let lead = v
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let (rq, residual) = rayleigh_residual(op, &v);
        let pair = EigenPair {
            value: rq,
            vector: v,
            residual,
        };
        if converged {
            return Ok(pair);
        }
        if best.as_ref().is_none_or(|b| pair.residual < b.residual) {
            best = Some(pair);
        }
    }
    match best {
        Some(pair) if pair.residual <= target => Ok(pair),
        _ => Err(Error::InverseIterationBreakdown { shift: value }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn op(diag: Vec<f64>, off: Vec<f64>) -> TridiagonalOperator {
        TridiagonalOperator::new(diag, off, Boundary::Open, "test").unwrap()
    }

    #[test]
    fn sturm_count_examples() {
        assert_eq!(sturm_count(&op(vec![0.0, 0.0], vec![1.0]), 0.0).unwrap(), 1);
        assert_eq!(
            sturm_count(&op(vec![0.0; 3], vec![0.0; 2]), 0.5).unwrap(),
            3
        );
        assert_eq!(
            sturm_count(&op(vec![2.0, -2.0], vec![1.0]), 0.0).unwrap(),
            1
        );
        let periodic = op(vec![0.0; 3], vec![1.0; 2])
            .with_boundary(Boundary::Periodic { corner: 1.0 })
            .unwrap();
        assert!(sturm_count(&periodic, 0.0).is_err());
    }

    #[test]
    fn bisection_two_by_two() {
        let s = eigenvalues_bisection(&op(vec![0.0, 0.0], vec![FRAC_1_SQRT_2]), 1e-14).unwrap();
        assert!((s.eigenvalues()[0] + FRAC_1_SQRT_2).abs() < 1e-13);
        assert!((s.eigenvalues()[1] - FRAC_1_SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn bisection_decoupled_blocks() {
        let h = FRAC_1_SQRT_2;
        let s = eigenvalues_bisection(&op(vec![0.0; 5], vec![h, 0.0, -h, 0.0]), 1e-14).unwrap();
        let expected = [-h, -h, 0.0, h, h];
        for (a, b) in s.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn bisection_zero_matrix() {
        let s = eigenvalues_bisection(&op(vec![0.0; 7], vec![0.0; 6]), 1e-12).unwrap();
        assert!(s.eigenvalues().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn bisection_rejects_bad_input() {
        let t = op(vec![0.0, 1.0], vec![1.0]);
        assert!(eigenvalues_bisection(&t, 0.0).is_err());
        assert!(eigenvalues_bisection(&t, f64::NAN).is_err());
        let p = t
            .clone()
            .with_boundary(Boundary::Periodic { corner: 1.0 })
            .unwrap();
        assert!(matches!(
            eigenvalues_bisection(&p, 1e-10),
            Err(Error::PeriodicUnsupported(_))
        ));
    }

    #[test]
    fn bisection_reports_unreachable_tolerance() {
        let t = op(vec![1.0e3, -1.0e3, 2.0], vec![1.0, 1.0]);
        match eigenvalues_bisection(&t, 1e-20) {
            Err(Error::NoConvergence { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn dense_oracle_periodic_three_site() {
        // diag [2, −1, −1] with every pair coupled by 1.
        let p = op(vec![2.0, -1.0, -1.0], vec![1.0, 1.0])
            .with_boundary(Boundary::Periodic { corner: 1.0 })
            .unwrap();
        let s = eigenvalues_dense_oracle(&p).unwrap();
        let ev = s.eigenvalues();
        let trace: f64 = ev.iter().sum();
        let prod: f64 = ev.iter().product();
        assert!((trace - 0.0).abs() < 1e-12);
        // det = 2(1−1) − 1(−1−1) + 1(1+1) = 4
        assert!((prod - 4.0).abs() < 1e-11);
        let sum_sq: f64 = ev.iter().map(|x| x * x).sum();
        // tr(A²) = 4 + 1 + 1 + 2·3 = 12
        assert!((sum_sq - 12.0).abs() < 1e-11);
    }

    #[test]
    fn dense_oracle_scaled_identity() {
        let s = eigenvalues_dense_oracle(&TridiagonalOperator::scaled_identity(9, -3.5).unwrap())
            .unwrap();
        assert!(s.eigenvalues().iter().all(|&x| x == -3.5));
    }

    #[test]
    fn dense_oracle_converges_on_degenerate_clusters() {
        // Exact zero couplings split this ring into many identical blocks.
        let op = crate::builders::OperatorKind::Xnu { nu: 0.0 }
            .build(
                crate::params::Omega::pi_rational(25, 200).unwrap(),
                210,
                crate::operator::BoundaryKind::Periodic,
            )
            .unwrap();
        let s = eigenvalues_dense_oracle(&op).unwrap();
        let trace_sq: f64 = op.to_dense().iter().map(|x| x * x).sum();
        let sum_sq: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
        assert!((trace_sq - sum_sq).abs() < 1e-9 * trace_sq);
    }

    #[test]
    fn dense_oracle_guard() {
        let big = TridiagonalOperator::scaled_identity(DENSE_DIMENSION_LIMIT + 1, 0.0).unwrap();
        assert!(matches!(
            eigenvalues_dense_oracle(&big),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn inverse_iteration_two_by_two() {
        let pair = eigenpair_inverse_iteration(&op(vec![0.0, 0.0], vec![1.0]), 1.0).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-12);
        assert!((pair.vector[0] - FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((pair.vector[1] - FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn inverse_iteration_one_by_one() {
        let pair = eigenpair_inverse_iteration(&op(vec![5.0], vec![]), 5.0).unwrap();
        assert_eq!(pair.vector, vec![1.0]);
        assert_eq!(pair.value, 5.0);
    }

    #[test]
    fn inverse_iteration_is_deterministic_and_unit() {
        let t = op(
            (0..30).map(|i| (i as f64 * 0.7).sin()).collect(),
            (0..29).map(|i| 1.0 + 0.1 * i as f64).collect(),
        );
        let s = eigenvalues_bisection(&t, 1e-13).unwrap();
        let a = eigenpair_inverse_iteration(&t, s.eigenvalues()[11]).unwrap();
        let b = eigenpair_inverse_iteration(&t, s.eigenvalues()[11]).unwrap();
        assert_eq!(a, b);
        let norm: f64 = a.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(a.residual <= 1e-8 * t.norm_bound());
    }

    #[test]
    fn inverse_iteration_periodic_uses_dense_factor() {
        let t = op(vec![0.0; 6], vec![1.0; 5])
            .with_boundary(Boundary::Periodic { corner: 1.0 })
            .unwrap();
        // Ring of 6: eigenvalues 2cos(2πj/6); 2 is simple.
        let pair = eigenpair_inverse_iteration(&t, 2.0).unwrap();
        assert!((pair.value - 2.0).abs() < 1e-12);
        for x in &pair.vector {
            assert!((x - 1.0 / 6f64.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn inverse_iteration_rejects_far_shift() {
        assert!(eigenpair_inverse_iteration(&op(vec![0.0, 0.0], vec![1.0]), 10.0).is_err());
    }
}

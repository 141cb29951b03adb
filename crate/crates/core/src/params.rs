//! Parameter types shared by every operator builder.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frequency parameter ω, either an exact rational multiple of π or a plain
/// float in radians.
///
/// The rational form reduces every multiple `n·ω` modulo 2π in integer
/// arithmetic, so `sin(n·ω)` is exactly zero whenever `n·p/q` is an integer.
/// Band counting at rational ω relies on those zeros.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega {
    PiRational { p: i64, q: i64 },
    Radians(f64),
}

impl Omega {
    /// ω = p·π/q. `q` must be positive; the fraction is kept as given.
    pub fn pi_rational(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidParameter(format!(
                "omega denominator must be positive, got {q}"
            )));
        }
        Ok(Omega::PiRational { p, q })
    }

    pub fn radians(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be finite, got {value}"
            )));
        }
        Ok(Omega::Radians(value))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Omega::PiRational { p, q } => p as f64 * PI / q as f64,
            Omega::Radians(w) => w,
        }
    }

    pub fn over_pi(&self) -> f64 {
        match *self {
            Omega::PiRational { p, q } => p as f64 / q as f64,
            Omega::Radians(w) => w / PI,
        }
    }

    /// The coprime form (p', q') of a rational ω, `None` for a float ω.
    pub fn reduced(&self) -> Option<(i64, i64)> {
        match *self {
            Omega::PiRational { p, q } => {
                let g = gcd(p.unsigned_abs(), q.unsigned_abs()).max(1) as i64;
                Some((p / g, q / g))
            }
            Omega::Radians(_) => None,
        }
    }

    /// Residue of `n·p` modulo `2q`, for rational ω.
    fn residue(p: i64, q: i64, n: i64) -> i64 {
        let m = (n as i128 * p as i128).rem_euclid(2 * q as i128);
        m as i64
    }

    /// `n·ω` reduced to (−π, π].
    pub fn multiple_angle(&self, n: i64) -> f64 {
        match *self {
            Omega::PiRational { p, q } => {
                let mut m = Self::residue(p, q, n);
                if m > q {
                    m -= 2 * q;
                }
                PI * m as f64 / q as f64
            }
            Omega::Radians(w) => reduce_angle(w * n as f64),
        }
    }

    /// `sin(n·ω)`, exact at the zeros and extrema of a rational ω.
    pub fn sin_multiple(&self, n: i64) -> f64 {
        match *self {
            Omega::PiRational { p, q } => {
                let mut r = Self::residue(p, q, n);
                let sign = if r >= q {
                    r -= q;
                    -1.0
                } else {
                    1.0
                };
                if 2 * r > q {
                    r = q - r;
                }
                sign * (PI * r as f64 / q as f64).sin()
            }
            Omega::Radians(w) => (w * n as f64).sin(),
        }
    }

    /// `cos(n·ω − ν)`. For ν = π/2 this is routed through [`Omega::sin_multiple`].
    pub fn cos_shifted(&self, n: i64, nu: f64) -> f64 {
        if nu == FRAC_PI_2 {
            return self.sin_multiple(n);
        }
        match *self {
            Omega::PiRational { .. } => (self.multiple_angle(n) - nu).cos(),
            Omega::Radians(w) => (w * n as f64 - nu).cos(),
        }
    }

    /// 2ω, in the same representation.
    pub fn doubled(&self) -> Omega {
        match *self {
            Omega::PiRational { p, q } => Omega::PiRational { p: 2 * p, q },
            Omega::Radians(w) => Omega::Radians(2.0 * w),
        }
    }

    /// `ω·m + shift` reduced to (−π, π], with the `ω·m` part exact for a
    /// rational ω and an arbitrary (possibly large) integer `m`.
    pub fn phase(&self, m: i64, shift: f64) -> f64 {
        match *self {
            Omega::PiRational { .. } => reduce_angle(self.multiple_angle(m) + shift),
            Omega::Radians(w) => reduce_angle(w * m as f64 + shift),
        }
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Omega::PiRational { p, q } => write!(f, "{p}pi/{q}"),
            Omega::Radians(w) => write!(f, "{w}"),
        }
    }
}

/// Reduce an angle to (−π, π].
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// The triple (ω, ν, Λ) of the deformation family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    omega: Omega,
    nu: f64,
    lambda: f64,
}

impl DeformationParams {
    pub fn new(omega: Omega, nu: f64, lambda: f64) -> Result<Self> {
        if let Omega::Radians(w) = omega {
            Omega::radians(w)?;
        }
        if !nu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "nu must be finite, got {nu}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and non-negative, got {lambda}"
            )));
        }
        Ok(Self { omega, nu, lambda })
    }

    /// The canonical member ν = π/2, Λ = 1, for which `cos(ωN − ν) = sin(ωN)`.
    pub fn ergodic(omega: Omega) -> Result<Self> {
        Self::new(omega, FRAC_PI_2, 1.0)
    }

    pub fn with_nu(omega: Omega, nu: f64) -> Result<Self> {
        Self::new(omega, nu, 1.0)
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Finite truncation: number states `0..n_max` and a window of k labels
/// `k_min..=k_max` for the Harper side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    n_max: usize,
    k_min: i64,
    k_max: i64,
}

impl Truncation {
    pub fn new(n_max: usize, k_min: i64, k_max: i64) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidTruncation(format!(
                "n_max must be at least 2, got {n_max}"
            )));
        }
        if k_max < k_min || k_max - k_min + 1 < 2 {
            return Err(Error::InvalidTruncation(format!(
                "k window {k_min}..={k_max} must hold at least 2 labels"
            )));
        }
        Ok(Self {
            n_max,
            k_min,
            k_max,
        })
    }

    /// Truncation whose k window matches the number basis, `k = 0..n_max`.
    pub fn with_dimension(n_max: usize) -> Result<Self> {
        Self::new(n_max, 0, n_max as i64 - 1)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn window_len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn k_labels(&self) -> impl Iterator<Item = i64> {
        self.k_min..=self.k_max
    }
}

//! Truncated coset sums for real-analytic Eisenstein series in binary64.
//!
//! Every series is a sum of `chi(j) = j^(-k) (delta / |j|^2)^s` over a
//! finite, deterministically ordered set of coset representatives. The
//! [`TruncationPolicy`] fixes that set. Summation is compensated and chunked
//! (see [`sum`]), so results do not depend on the executor.
//!
//! Truncation error is measured, not bounded: callers compare the value at
//! `height` with the value at half height.

pub mod checks;
pub mod cosets;
pub mod series;
pub mod sum;

use alloc::format;

use num_complex::Complex64;
use num_traits::Float;

use crate::{Error, Result};

pub use checks::{
    bowtie_functional, bowtie_residual_numeric, decomposition_residual, degree_one_eigenvalue,
    klingen_residual_numeric, DecompositionReport, VariantResidual,
};
pub use cosets::{coprime_pairs, diag_double_coset_reps, sym_pair_reps, SymPairRep};
pub use series::{eval_a, eval_b, eval_e1, eval_e2, qexp_value, siegel_value, Evaluator, Series};
pub use sum::{Executor, Sequential};

/// Truncation bounds shared by all evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Largest absolute entry of `C`, `D`, or of `(c, d)` in degree 1.
    pub height: u32,
    /// Translations `t` summed on each side of the peak in [`eval_b`].
    pub shift_bound: u32,
    /// Last `m` in the decomposition sum.
    pub m_max: u32,
    /// Smallest admissible eigenvalue of `Im Z` at points the bowtie
    /// functional visits.
    pub y_floor: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { height: 6, shift_bound: 20, m_max: 3, y_floor: 0.25 }
    }
}

impl TruncationPolicy {
    pub fn with_height(height: u32) -> Self {
        TruncationPolicy { height, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.height == 0 {
            return Err(Error::NonPositive("height"));
        }
        if self.shift_bound == 0 {
            return Err(Error::NonPositive("shift_bound"));
        }
        if !(self.y_floor > 0.0) {
            return Err(Error::NonPositive("y_floor"));
        }
        Ok(())
    }

    /// The same policy at half height (and half shift bound), used for the
    /// empirical truncation estimate.
    pub fn halved(&self) -> Self {
        TruncationPolicy { height: (self.height / 2).max(1), shift_bound: (self.shift_bound / 2).max(1), ..*self }
    }
}

/// A complex symmetric 2x2 matrix `(tau, z; z, tau_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub tau: Complex64,
    pub z: Complex64,
    pub tau_t: Complex64,
}

impl Sym2 {
    pub const fn new(tau: Complex64, z: Complex64, tau_t: Complex64) -> Self {
        Sym2 { tau, z, tau_t }
    }

    /// `(1.6i, 0.1 + 0.1i; 0.1 + 0.1i, 1.5i)`.
    pub const fn sample() -> Self {
        Sym2::new(Complex64::new(0.0, 1.6), Complex64::new(0.1, 0.1), Complex64::new(0.0, 1.5))
    }

    pub fn det(&self) -> Complex64 {
        self.tau * self.tau_t - self.z * self.z
    }

    /// `delta(Z) = det Im Z`.
    pub fn delta(&self) -> f64 {
        self.tau.im * self.tau_t.im - self.z.im * self.z.im
    }

    /// Smallest eigenvalue of `Im Z`.
    pub fn min_imag_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.tau.im, self.z.im, self.tau_t.im);
        let mean = 0.5 * (a + c);
        let rad = Float::sqrt(0.25 * (a - c) * (a - c) + b * b);
        mean - rad
    }

    pub fn in_upper_half_space(&self) -> bool {
        self.tau.im > 0.0 && self.delta() > 0.0
    }

    /// `-Z^(-1)`.
    pub fn invert(&self) -> Sym2 {
        let d = self.det();
        Sym2::new(-self.tau_t / d, self.z / d, -self.tau / d)
    }

    /// `Z + B` for an integral symmetric translation `B = (b1, b2; b2, b3)`.
    pub fn translate(&self, b1: i64, b2: i64, b3: i64) -> Sym2 {
        Sym2::new(self.tau + b1 as f64, self.z + b2 as f64, self.tau_t + b3 as f64)
    }
}

/// A point `Z` of the Siegel upper half-space together with the spectral
/// parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiegelPoint {
    pub z: Sym2,
    pub s: Complex64,
}

impl SiegelPoint {
    pub fn new(z: Sym2, s: Complex64) -> Result<Self> {
        if !z.in_upper_half_space() {
            return Err(Error::Domain(format!("Im Z is not positive definite at {z:?}")));
        }
        Ok(SiegelPoint { z, s })
    }

    pub fn at(&self, z: Sym2) -> Result<Self> {
        SiegelPoint::new(z, self.s)
    }
}

/// How the spectral factor transforms under a coset action on `B_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlashVariant {
    /// `j^(-k)` only.
    Pure,
    /// `j^(-k) |j|^(-2s)`.
    WithS,
}

/// Which corner of `Z` an embedded `SL_2` element acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Embedding {
    /// `g^•`, acting on `tau`.
    Upper,
    /// `g_•`, acting on `tau_t`.
    Lower,
}

/// Checks `k` even and `2 Re(s) + k > degree + 1`.
pub fn check_weight(k: u32, s: Complex64, degree: u32) -> Result<()> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    if !(2.0 * s.re + k as f64 > (degree + 1) as f64) {
        return Err(Error::Domain(format!(
            "2 Re(s) + k = {} is not above {} for degree {degree}",
            2.0 * s.re + k as f64,
            degree + 1
        )));
    }
    Ok(())
}

/// `j^(-k) (delta / |j|^2)^s`, given `log_delta = ln delta`.
#[inline]
pub(crate) fn chi(j: Complex64, k: i32, s: Complex64, log_delta: f64) -> Complex64 {
    let base = j.powi(-k);
    if s == Complex64::new(0.0, 0.0) {
        return base;
    }
    base * (s * (log_delta - Float::ln(j.norm_sqr()))).exp()
}

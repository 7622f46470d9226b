//! The strong-symmetry operator on Fourier coefficients.
//!
//! For a prime `p` and weight `k` the operator sends `A` to
//!
//! ```text
//! B(n, r, m) = p^(k-1) A(n/p, r/p, m) + A(pn, r, m)
//!            - p^(k-1) A(n, r/p, m/p) - A(n, r, pm)
//! ```
//!
//! where a term whose index is not integral contributes 0. A form has the
//! strong symmetry property at `p` exactly when `B` vanishes. Moving the two
//! negative terms to the other side gives the "sum = sum" arrangement, and
//! moving `A(pn, r, m)` and `-p^(k-1) A(n, r/p, m/p)` gives the "difference =
//! difference" arrangement; both are the same identity.
//!
//! Certifying `B` up to trace `t` reads `A` up to trace `p t`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::elliptic;
use crate::exactnum::{self, Rational};
use crate::siegel2::{FourierSource, HalfIntegralIndex, SiegelExpansion, TwoVarExpansion};
use crate::{Error, Result};

/// One index at which the identity fails, with both sides of the
/// `p^(k-1) A(n/p, r/p, m) + A(pn, r, m) = p^(k-1) A(n, r/p, m/p) + A(n, r, pm)`
/// arrangement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: HalfIntegralIndex,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Verdict of the exact check for one prime over a certified trace window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowtieReport {
    pub weight: u32,
    pub prime: u64,
    pub window: u64,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl BowtieReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn require_prime(p: u64) -> Result<()> {
    if exactnum::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn power(p: u64, e: u32) -> Rational {
    Rational::from_integer(Pow::pow(BigInt::from(p), e))
}

/// Every index of the output window whose value can be nonzero: `n, m >= 0`,
/// `n + m <= window`, `r^2 <= 4 p n m`.
fn window_indices(p: u64, window: u64) -> Vec<HalfIntegralIndex> {
    let t = window as i64;
    let p = p as i64;
    let mut out = Vec::new();
    for n in 0..=t {
        for m in 0..=(t - n) {
            let rmax = exactnum::isqrt((4 * p * n * m) as u64) as i64;
            for r in -rmax..=rmax {
                out.push(HalfIntegralIndex::new(n, r, m));
            }
        }
    }
    out
}

/// Both sides of the identity at one index.
fn sides<S: FourierSource + ?Sized>(f: &S, p: u64, idx: HalfIntegralIndex) -> Result<(Rational, Rational)> {
    let pk = power(p, f.weight() - 1);
    let pi = p as i64;
    let HalfIntegralIndex { n, r, m } = idx;
    let mut lhs = f.coefficient(HalfIntegralIndex::new(pi * n, r, m))?;
    if n % pi == 0 && r % pi == 0 {
        let a = f.coefficient(HalfIntegralIndex::new(n / pi, r / pi, m))?;
        if !a.is_zero() {
            lhs += &pk * a;
        }
    }
    let mut rhs = f.coefficient(HalfIntegralIndex::new(n, r, pi * m))?;
    if m % pi == 0 && r % pi == 0 {
        let a = f.coefficient(HalfIntegralIndex::new(n, r / pi, m / pi))?;
        if !a.is_zero() {
            rhs += &pk * a;
        }
    }
    Ok((lhs, rhs))
}

/// Applies the operator to `f` on the output window `n + m <= window`.
pub fn bowtie_window<S: FourierSource + ?Sized>(f: &S, p: u64, window: u64) -> Result<SiegelExpansion> {
    require_prime(p)?;
    let mut out = SiegelExpansion::new(f.weight(), window);
    for idx in window_indices(p, window) {
        let (lhs, rhs) = sides(f, p, idx)?;
        out.set(idx, lhs - rhs)?;
    }
    Ok(out)
}

/// `B = A | (bowtie T_p)` on the certified window `floor(trace_trunc / p)`.
///
/// The output may be nonzero at indices outside the semi-definite cone (for
/// example `(1, 3, 1)` at `p = 3` reads `A(3, 3, 1)`), so such indices are
/// stored as well.
pub fn bowtie_apply(f: &SiegelExpansion, p: u64) -> Result<SiegelExpansion> {
    require_prime(p)?;
    if f.trace_trunc() < p {
        return Err(Error::Truncation { have: f.trace_trunc(), need: p });
    }
    bowtie_window(f, p, f.trace_trunc() / p)
}

/// Runs the exact check for one prime over the output window `window`.
pub fn check_prime_window<S: FourierSource + ?Sized>(f: &S, p: u64, window: u64) -> Result<BowtieReport> {
    require_prime(p)?;
    let indices = window_indices(p, window);
    let mut violations = Vec::new();
    for idx in &indices {
        let (lhs, rhs) = sides(f, p, *idx)?;
        if lhs != rhs {
            violations.push(Violation { index: *idx, lhs, rhs });
        }
    }
    Ok(BowtieReport { weight: f.weight(), prime: p, window, checked: indices.len(), violations })
}

/// Checks every prime in `primes` on its certified window
/// `floor(f.trace_trunc / p)`. Reports come back in the order of `primes`.
pub fn check_strong_symmetry(f: &SiegelExpansion, primes: &[u64]) -> Result<Vec<BowtieReport>> {
    primes
        .iter()
        .map(|&p| {
            require_prime(p)?;
            if f.trace_trunc() < p {
                return Err(Error::Truncation { have: f.trace_trunc(), need: p });
            }
            check_prime_window(f, p, f.trace_trunc() / p)
        })
        .collect()
}

/// Which variable a Hecke operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// Classical `T_p` in one variable:
/// `b'(n, m) = p^(k-1) b(n/p, m) + b(pn, m)` for [`Slot::First`].
pub fn two_var_hecke(f: &TwoVarExpansion, p: u64, slot: Slot) -> Result<TwoVarExpansion> {
    require_prime(p)?;
    let pk = power(p, f.weight() - 1);
    let (t1, t2) = match slot {
        Slot::First => (f.trunc_first() / p, f.trunc_second()),
        Slot::Second => (f.trunc_first(), f.trunc_second() / p),
    };
    let need = match slot {
        Slot::First => f.trunc_first(),
        Slot::Second => f.trunc_second(),
    };
    if need < p {
        return Err(Error::Truncation { have: need, need: p });
    }
    let mut out = TwoVarExpansion::new(f.weight(), t1, t2);
    for n in 0..=t1 {
        for m in 0..=t2 {
            let (x, y) = match slot {
                Slot::First => (n, m),
                Slot::Second => (m, n),
            };
            // x is the slot variable, y the fixed one.
            let at = |a: u64, b: u64| match slot {
                Slot::First => f.coeff(a, b),
                Slot::Second => f.coeff(b, a),
            };
            let mut v = at(p * x, y)?;
            if x % p == 0 {
                let a = at(x / p, y)?;
                if !a.is_zero() {
                    v += &pk * a;
                }
            }
            out.set(n, m, v)?;
        }
    }
    Ok(out)
}

/// Restricted Klingen-type function
/// `f = E_12 (x) Delta + Delta (x) E_12 + alpha Delta (x) Delta`,
/// truncated in both variables at `trunc`.
pub fn klingen_function(alpha: &Rational, trunc: u64) -> Result<TwoVarExpansion> {
    let e12 = elliptic::eisenstein_qexp(12, trunc)?;
    let delta = elliptic::delta_qexp(trunc)?;
    let one = exactnum::rat(1);
    let ed = TwoVarExpansion::tensor(&e12, &delta);
    let de = TwoVarExpansion::tensor(&delta, &e12);
    let dd = TwoVarExpansion::tensor(&delta, &delta);
    Ok(ed.linear_combination(&one, &de, &one).linear_combination(&one, &dd, alpha))
}

/// `f | T_p (first) - f | T_p (second)` for the Klingen-type function; both
/// truncations of the result are `floor(trunc / p)`.
pub fn klingen_difference(alpha: &Rational, p: u64, trunc: u64) -> Result<TwoVarExpansion> {
    require_prime(p)?;
    if trunc < p {
        return Err(Error::Truncation { have: trunc, need: p });
    }
    let f = klingen_function(alpha, trunc)?;
    let first = two_var_hecke(&f, p, Slot::First)?;
    let second = two_var_hecke(&f, p, Slot::Second)?;
    let one = exactnum::rat(1);
    let diff = first.linear_combination(&one, &second, &-one.clone());
    let w = trunc / p;
    let mut out = TwoVarExpansion::new(diff.weight(), w, w);
    for n in 0..=w {
        for m in 0..=w {
            out.set(n, m, diff.coeff(n, m)?)?;
        }
    }
    Ok(out)
}

//! Degree-2 holomorphic Fourier expansions.
//!
//! A coefficient is indexed by the half-integral matrix
//! `N = (n, r/2; r/2, m)`, stored as the integer triple `(n, r, m)`.
//! Expansions are truncated in the trace `n + m`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::elliptic::{self, QExpansion};
use crate::exactnum::{self, CohenTable, Rational};
use crate::{Error, Result};

/// `N = (n, r/2; r/2, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIntegralIndex {
    pub n: i64,
    pub r: i64,
    pub m: i64,
}

impl HalfIntegralIndex {
    pub const ZERO: HalfIntegralIndex = HalfIntegralIndex { n: 0, r: 0, m: 0 };

    pub const fn new(n: i64, r: i64, m: i64) -> Self {
        HalfIntegralIndex { n, r, m }
    }

    /// `4nm - r^2`, i.e. `4 det(N)`.
    pub fn disc(&self) -> i64 {
        4 * self.n * self.m - self.r * self.r
    }

    /// `gcd(n, r, m)`.
    pub fn content(&self) -> u64 {
        self.n.gcd(&self.r).gcd(&self.m).unsigned_abs()
    }

    pub fn trace(&self) -> i64 {
        self.n + self.m
    }

    /// Positive semi-definite: the support of a holomorphic form.
    pub fn is_semidefinite(&self) -> bool {
        self.n >= 0 && self.m >= 0 && self.disc() >= 0
    }

    /// `N[U] = U^t N U` for an integral `U = (a b; c d)`.
    pub fn transform(&self, u: &elliptic::IntMatrix2) -> HalfIntegralIndex {
        let (a, b, c, d) = (u.a, u.b, u.c, u.d);
        let (n, r, m) = (self.n, self.r, self.m);
        HalfIntegralIndex {
            n: n * a * a + r * a * c + m * c * c,
            r: 2 * n * a * b + r * (a * d + b * c) + 2 * m * c * d,
            m: n * b * b + r * b * d + m * d * d,
        }
    }
}

impl core::fmt::Display for HalfIntegralIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.r, self.m)
    }
}

/// Read access to degree-2 Fourier coefficients.
///
/// `coefficient` returns 0 outside the positive semi-definite cone and an
/// error for indices whose value is not known to the source.
pub trait FourierSource {
    fn weight(&self) -> u32;
    fn coefficient(&self, idx: HalfIntegralIndex) -> Result<Rational>;
}

/// Stored expansion, valid for every index with `n + m <= trace_trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelExpansion {
    weight: u32,
    trace_trunc: u64,
    coeffs: BTreeMap<HalfIntegralIndex, Rational>,
}

impl SiegelExpansion {
    pub fn new(weight: u32, trace_trunc: u64) -> Self {
        SiegelExpansion { weight, trace_trunc, coeffs: BTreeMap::new() }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn trace_trunc(&self) -> u64 {
        self.trace_trunc
    }

    pub fn in_window(&self, idx: &HalfIntegralIndex) -> bool {
        idx.n >= 0 && idx.m >= 0 && idx.trace() as u64 <= self.trace_trunc
    }

    /// Stores a value; zero removes the entry.
    pub fn set(&mut self, idx: HalfIntegralIndex, value: Rational) -> Result<()> {
        if !self.in_window(&idx) {
            return Err(Error::BeyondTruncation(format!("{idx}")));
        }
        if value.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, value);
        }
        Ok(())
    }

    /// Coefficient lookup; indices with `n < 0` or `m < 0` are 0.
    pub fn coeff(&self, idx: HalfIntegralIndex) -> Result<Rational> {
        if idx.n < 0 || idx.m < 0 {
            return Ok(Rational::zero());
        }
        if idx.trace() as u64 > self.trace_trunc {
            return Err(Error::BeyondTruncation(format!("{idx}")));
        }
        Ok(self.coeffs.get(&idx).cloned().unwrap_or_else(Rational::zero))
    }

    /// Nonzero entries in lexicographic index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&HalfIntegralIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a * self + b * other` on the common window.
    pub fn linear_combination(&self, a: &Rational, other: &SiegelExpansion, b: &Rational) -> SiegelExpansion {
        let trunc = self.trace_trunc.min(other.trace_trunc);
        let mut out = SiegelExpansion::new(self.weight, trunc);
        let keys: alloc::collections::BTreeSet<_> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for idx in keys {
            if idx.trace() as u64 > trunc {
                continue;
            }
            let x = self.coeff(idx).unwrap_or_default() * a + other.coeff(idx).unwrap_or_default() * b;
            let _ = out.set(idx, x);
        }
        out
    }
}

impl FourierSource for SiegelExpansion {
    fn weight(&self) -> u32 {
        self.weight
    }

    fn coefficient(&self, idx: HalfIntegralIndex) -> Result<Rational> {
        if !idx.is_semidefinite() {
            return Ok(Rational::zero());
        }
        self.coeff(idx)
    }
}

/// Every semi-definite index with `n + m <= trace_trunc`, both signs of `r`,
/// in lexicographic order.
pub fn semidefinite_indices(trace_trunc: u64) -> Vec<HalfIntegralIndex> {
    let t = trace_trunc as i64;
    let mut out = Vec::new();
    for n in 0..=t {
        for m in 0..=(t - n) {
            let rmax = exactnum::isqrt((4 * n * m) as u64) as i64;
            for r in -rmax..=rmax {
                out.push(HalfIntegralIndex::new(n, r, m));
            }
        }
    }
    out
}

/// Lift of a coefficient sequence `c(D)` into the Maass space, evaluated on
/// demand:
///
/// `A(0,0,0) = c0`, and `A(n,r,m) = sum_{d | gcd(n,r,m)} d^(k-1) c((4nm - r^2) / d^2)`.
#[derive(Debug, Clone)]
pub struct MaassLift {
    weight: u32,
    c0: Rational,
    c: BTreeMap<u64, Rational>,
}

impl MaassLift {
    pub fn new(c: BTreeMap<u64, Rational>, c0: Rational, k: u32) -> Result<Self> {
        if k % 2 != 0 {
            return Err(Error::InvalidWeight(k as i64));
        }
        Ok(MaassLift { weight: k, c0, c })
    }

    pub fn c(&self, disc: u64) -> Result<&Rational> {
        self.c.get(&disc).ok_or(Error::MissingCoefficient(disc))
    }

    /// Stores all coefficients with `n + m <= trace_trunc`.
    pub fn expand(&self, trace_trunc: u64) -> Result<SiegelExpansion> {
        let mut out = SiegelExpansion::new(self.weight, trace_trunc);
        for idx in semidefinite_indices(trace_trunc) {
            out.set(idx, self.coefficient(idx)?)?;
        }
        Ok(out)
    }
}

impl FourierSource for MaassLift {
    fn weight(&self) -> u32 {
        self.weight
    }

    fn coefficient(&self, idx: HalfIntegralIndex) -> Result<Rational> {
        if !idx.is_semidefinite() {
            return Ok(Rational::zero());
        }
        if idx == HalfIntegralIndex::ZERO {
            return Ok(self.c0.clone());
        }
        let disc = idx.disc() as u64;
        let mut acc = Rational::zero();
        for d in exactnum::divisors(idx.content()) {
            let c = self.c(disc / (d * d))?;
            if !c.is_zero() {
                acc += c * Rational::from_integer(Pow::pow(BigInt::from(d), self.weight - 1));
            }
        }
        Ok(acc)
    }
}

/// Maass lift truncated at `trace_trunc`.
pub fn maass_lift(c: &BTreeMap<u64, Rational>, c0: Rational, k: u32, trace_trunc: u64) -> Result<SiegelExpansion> {
    MaassLift::new(c.clone(), c0, k)?.expand(trace_trunc)
}

/// The sequence `c(D) = c0 H(k-1, D) / H(k-1, 0)` for `D <= max_disc`,
/// `D = 0, 3 mod 4`, with `c0 = -2k / B_k`.
pub fn eisenstein_lift_data(k: u32, max_disc: u64) -> Result<BTreeMap<u64, Rational>> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    let c0 = elliptic::eisenstein_constant(k);
    let mut table = CohenTable::new(k - 1)?;
    let h0 = table.value(0)?;
    let scale = c0 / h0;
    let mut c = BTreeMap::new();
    for disc in 0..=max_disc {
        if matches!(disc % 4, 0 | 3) {
            c.insert(disc, table.value(disc)? * &scale);
        }
    }
    Ok(c)
}

/// The Siegel Eisenstein series of degree 2 as a lazily evaluated Maass form,
/// with lift data for every discriminant up to `max_disc`.
pub fn eisenstein_maass_form(k: u32, max_disc: u64) -> Result<MaassLift> {
    let c = eisenstein_lift_data(k, max_disc)?;
    MaassLift::new(c, exactnum::rat(1), k)
}

/// Fourier expansion of the holomorphic Siegel Eisenstein series `E_k^(2)`,
/// normalized by `A(0,0,0) = 1`.
pub fn siegel_eisenstein2(k: u32, trace_trunc: u64) -> Result<SiegelExpansion> {
    let half = trace_trunc / 2;
    eisenstein_maass_form(k, 4 * half * (trace_trunc - half))?.expand(trace_trunc)
}

/// Siegel `Phi` operator: `n -> A(n, 0, 0)`.
pub fn phi_restrict(f: &SiegelExpansion) -> Result<QExpansion> {
    QExpansion::from_coeffs(
        f.weight(),
        f.trace_trunc(),
        (0..=f.trace_trunc()).map(|n| {
            let a = f.coeff(HalfIntegralIndex::new(n as i64, 0, 0)).unwrap_or_default();
            (n, a)
        }),
    )
}

/// Two-variable expansion `sum b(n, m) q^n q~^m` valid on the box
/// `n <= trunc_first`, `m <= trunc_second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVarExpansion {
    weight: u32,
    trunc_first: u64,
    trunc_second: u64,
    coeffs: BTreeMap<(u64, u64), Rational>,
}

impl TwoVarExpansion {
    pub fn new(weight: u32, trunc_first: u64, trunc_second: u64) -> Self {
        TwoVarExpansion { weight, trunc_first, trunc_second, coeffs: BTreeMap::new() }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn trunc_first(&self) -> u64 {
        self.trunc_first
    }

    pub fn trunc_second(&self) -> u64 {
        self.trunc_second
    }

    pub fn set(&mut self, n: u64, m: u64, value: Rational) -> Result<()> {
        if n > self.trunc_first || m > self.trunc_second {
            return Err(Error::BeyondTruncation(format!("({n}, {m})")));
        }
        if value.is_zero() {
            self.coeffs.remove(&(n, m));
        } else {
            self.coeffs.insert((n, m), value);
        }
        Ok(())
    }

    pub fn coeff(&self, n: u64, m: u64) -> Result<Rational> {
        if n > self.trunc_first || m > self.trunc_second {
            return Err(Error::BeyondTruncation(format!("({n}, {m})")));
        }
        Ok(self.coeffs.get(&(n, m)).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(u64, u64), &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `g(tau) h(tau~)`, truncated at the two input truncations.
    pub fn tensor(g: &QExpansion, h: &QExpansion) -> Self {
        let mut out = TwoVarExpansion::new(g.weight(), g.trunc(), h.trunc());
        for (n, a) in g.nonzero() {
            for (m, b) in h.nonzero() {
                out.coeffs.insert((n, m), a * b);
            }
        }
        out
    }

    /// `a * self + b * other` on the common box.
    pub fn linear_combination(&self, a: &Rational, other: &TwoVarExpansion, b: &Rational) -> Self {
        let t1 = self.trunc_first.min(other.trunc_first);
        let t2 = self.trunc_second.min(other.trunc_second);
        let mut out = TwoVarExpansion::new(self.weight, t1, t2);
        for n in 0..=t1 {
            for m in 0..=t2 {
                let x = self.coeff(n, m).unwrap_or_default() * a + other.coeff(n, m).unwrap_or_default() * b;
                let _ = out.set(n, m, x);
            }
        }
        out
    }
}

/// `f(tau, tau~) = F(diag(tau, tau~))`: `b(n, m) = sum_r A(n, r, m)`, valid on
/// the box `n, m <= trace_trunc / 2`.
pub fn diagonal_restrict(f: &SiegelExpansion) -> TwoVarExpansion {
    let half = f.trace_trunc() / 2;
    let mut out = TwoVarExpansion::new(f.weight(), half, half);
    for (idx, a) in f.nonzero() {
        let (n, m) = (idx.n as u64, idx.m as u64);
        if n <= half && m <= half {
            let entry = out.coeffs.entry((n, m)).or_insert_with(Rational::zero);
            *entry += a;
        }
    }
    out.coeffs.retain(|_, v| !v.is_zero());
    out
}

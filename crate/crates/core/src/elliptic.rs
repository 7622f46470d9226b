//! One-variable modular forms: q-expansions, coset representatives of
//! `Gamma \ M(l)`, the Hecke ring product and the classical `T_n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::exactnum::{self, Rational};
use crate::{Error, Result};

/// Truncated Fourier expansion `sum_{n <= trunc} a_n q^n` of a weight-`k` form.
///
/// Indices missing from `coeffs` but `<= trunc` are zero. Nothing beyond
/// `trunc` is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    trunc: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl QExpansion {
    pub fn new(weight: u32, trunc: u64) -> Result<Self> {
        if weight % 2 != 0 || weight == 0 {
            return Err(Error::InvalidWeight(weight as i64));
        }
        Ok(QExpansion { weight, trunc, coeffs: BTreeMap::new() })
    }

    /// Builds an expansion from `(index, value)` pairs, dropping zeros.
    pub fn from_coeffs(weight: u32, trunc: u64, coeffs: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let mut f = QExpansion::new(weight, trunc)?;
        for (n, a) in coeffs {
            f.set(n, a)?;
        }
        Ok(f)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    pub fn set(&mut self, n: u64, value: Rational) -> Result<()> {
        if n > self.trunc {
            return Err(Error::BeyondTruncation(format!("q^{n}")));
        }
        if value.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, value);
        }
        Ok(())
    }

    /// Coefficient of `q^n`; errors if `n` lies beyond the truncation.
    pub fn coeff(&self, n: u64) -> Result<Rational> {
        if n > self.trunc {
            return Err(Error::BeyondTruncation(format!("q^{n}")));
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero))
    }

    /// Nonzero coefficients in increasing index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.coeffs.iter().map(|(n, a)| (*n, a))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> QExpansion {
        let mut out = QExpansion { weight: self.weight, trunc: self.trunc, coeffs: BTreeMap::new() };
        if !c.is_zero() {
            for (n, a) in &self.coeffs {
                out.coeffs.insert(*n, a * c);
            }
        }
        out
    }

    /// Agreement on `0..=min(trunc)` (weights must match).
    pub fn agrees_with(&self, other: &QExpansion) -> bool {
        if self.weight != other.weight {
            return false;
        }
        let t = self.trunc.min(other.trunc);
        (0..=t).all(|n| self.coeff(n).ok() == other.coeff(n).ok())
    }
}

fn check_weight(k: u32) -> Result<()> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidWeight(k as i64));
    }
    Ok(())
}

/// `E_k = 1 - (2k / B_k) sum_{n>=1} sigma_{k-1}(n) q^n`.
pub fn eisenstein_qexp(k: u32, trunc: u64) -> Result<QExpansion> {
    check_weight(k)?;
    let c0 = eisenstein_constant(k);
    let mut f = QExpansion::new(k, trunc)?;
    f.set(0, exactnum::rat(1))?;
    for n in 1..=trunc {
        let s = exactnum::divisor_sigma(n, k - 1)?;
        f.set(n, &c0 * Rational::from_integer(s))?;
    }
    Ok(f)
}

/// `-2k / B_k`, the coefficient of `q` in `E_k`.
pub fn eisenstein_constant(k: u32) -> Rational {
    exactnum::rat(-2 * k as i64) / exactnum::bernoulli(k as usize)
}

/// `Delta = q prod_{n>=1} (1 - q^n)^24` by exact power-series products.
pub fn delta_qexp(trunc: u64) -> Result<QExpansion> {
    if trunc < 1 {
        return Err(Error::NonPositive("delta truncation"));
    }
    // prod (1 - q^n)^24 needed up to q^(trunc - 1).
    let len = trunc as usize;
    let mut series: Vec<BigInt> = (0..len).map(|i| BigInt::from((i == 0) as i32)).collect();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let prev = series[i - n].clone();
                series[i] -= prev;
            }
        }
    }
    QExpansion::from_coeffs(
        12,
        trunc,
        series.into_iter().enumerate().map(|(i, a)| (i as u64 + 1, Rational::from_integer(a))),
    )
}

/// Integer 2x2 matrix `(a b; c d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Canonical representative of the left coset `SL_2(Z) * self`: the
    /// unique `(a, b; 0, d)` with `a, d > 0` and `0 <= b < d`.
    pub fn left_canonical(&self) -> Result<IntMatrix2> {
        if self.det() <= 0 {
            return Err(Error::NonPositiveDeterminant);
        }
        // Row reduction by SL_2(Z) on the left: Euclid on the first column.
        let (mut r1, mut r2) = ([self.a, self.b], [self.c, self.d]);
        while r2[0] != 0 {
            let q = Integer::div_floor(&r1[0], &r2[0]);
            r1 = [r1[0] - q * r2[0], r1[1] - q * r2[1]];
            // (0 1; -1 0) keeps the determinant.
            let t = r1;
            r1 = r2;
            r2 = [-t[0], -t[1]];
        }
        if r1[0] < 0 {
            r1 = [-r1[0], -r1[1]];
            r2 = [-r2[0], -r2[1]];
        }
        let d = r2[1];
        debug_assert!(d > 0);
        let b = r1[1].rem_euclid(d);
        Ok(IntMatrix2 { a: r1[0], b, c: 0, d })
    }

    /// True when `self` and `other` lie in the same left `SL_2(Z)` coset.
    pub fn left_equivalent(&self, other: &IntMatrix2) -> Result<bool> {
        Ok(self.left_canonical()? == other.left_canonical()?)
    }
}

pub type CosetList = Vec<IntMatrix2>;

/// Representatives of `Gamma \ M(l)`: `(a, b; 0, d)` with `ad = l`, `0 <= b < d`.
pub fn coset_reps_m(l: u64) -> Result<CosetList> {
    if l == 0 {
        return Err(Error::NonPositive("l"));
    }
    let mut reps = Vec::new();
    for d in exactnum::divisors(l) {
        let a = (l / d) as i64;
        for b in 0..d as i64 {
            reps.push(IntMatrix2::new(a, b, 0, d as i64));
        }
    }
    Ok(reps)
}

/// Formal sum `sum_j a_j Gamma g_j` with pairwise inequivalent `g_j`, keyed by
/// the canonical representative of each coset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeElement {
    terms: BTreeMap<IntMatrix2, Rational>,
}

impl HeckeElement {
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(IntMatrix2::IDENTITY, exactnum::rat(1));
        HeckeElement { terms }
    }

    /// Collects `(coefficient, representative)` pairs into canonical cosets.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, IntMatrix2)>) -> Result<Self> {
        let mut out = HeckeElement::default();
        for (c, g) in terms {
            out.add_term(c, &g)?;
        }
        Ok(out)
    }

    /// Every coset with coefficient 1.
    pub fn from_cosets(reps: &[IntMatrix2]) -> Result<Self> {
        Self::from_terms(reps.iter().map(|g| (exactnum::rat(1), *g)))
    }

    fn add_term(&mut self, c: Rational, g: &IntMatrix2) -> Result<()> {
        let key = g.left_canonical()?;
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &IntMatrix2)> {
        self.terms.iter().map(|(g, c)| (c, g))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Ring product `(sum a_i Gamma g_i) o (sum b_j Gamma h_j) = sum a_i b_j Gamma g_i h_j`.
pub fn hecke_compose(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    let mut out = HeckeElement::default();
    for (a, g) in x.terms() {
        if g.det() <= 0 {
            return Err(Error::NonPositiveDeterminant);
        }
        for (b, h) in y.terms() {
            out.add_term(a * b, &g.mul(h))?;
        }
    }
    Ok(out)
}

/// Classical Hecke operator: `(T_n f)_m = sum_{d | gcd(n, m)} d^(k-1) a_f(nm / d^2)`.
///
/// The result is valid up to `floor(f.trunc / n)`.
pub fn hecke_tn(f: &QExpansion, n: u64) -> Result<QExpansion> {
    if n == 0 {
        return Err(Error::NonPositive("Hecke index"));
    }
    if n > f.trunc {
        return Err(Error::Truncation { have: f.trunc, need: n });
    }
    let out_trunc = f.trunc / n;
    let k1 = f.weight - 1;
    let mut out = QExpansion::new(f.weight, out_trunc)?;
    for m in 0..=out_trunc {
        let g = n.gcd(&m);
        let mut acc = Rational::zero();
        for d in exactnum::divisors(g) {
            let a = f.coeff(n * m / (d * d))?;
            if !a.is_zero() {
                acc += a * Rational::from_integer(Pow::pow(BigInt::from(d), k1));
            }
        }
        out.set(m, acc)?;
    }
    Ok(out)
}

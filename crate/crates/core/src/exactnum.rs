//! Exact arithmetic kernel.
//!
//! Everything here returns exact values: Bernoulli numbers (with the
//! convention `B_1 = -1/2`), divisor power sums, Kronecker symbols,
//! generalized Bernoulli numbers of quadratic characters and Cohen's
//! function `H(r, N)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficients `C(n, 0..=n)`.
fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); n + 1];
    for j in 1..n {
        row[j] = &row[j - 1] * BigInt::from(n - j + 1) / BigInt::from(j);
    }
    row
}

/// `B_0, ..., B_n` from the recurrence `sum_{j<=n} C(n+1, j) B_j = 0`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        let binom = binomial_row(m + 1);
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binom[j].clone()) * b;
            }
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

/// The Bernoulli number `B_n`, with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap_or_else(Rational::one)
}

/// Bernoulli polynomial `B_n(x) = sum_j C(n, j) B_j x^(n-j)`.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let bern = bernoulli_table(n);
    let binom = binomial_row(n);
    let mut acc = Rational::zero();
    // Horner in x over descending powers.
    for j in 0..=n {
        acc = acc * x + Rational::from_integer(binom[j].clone()) * &bern[j];
    }
    acc
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_e(n) = sum_{d | n} d^e`.
pub fn divisor_sigma(n: u64, e: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::NonPositive("divisor_sigma argument"));
    }
    Ok(divisors(n).into_iter().map(|d| Pow::pow(BigInt::from(d), e)).sum())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d | n)` for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut a = d as i128;
    let mut b = n as i128;
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut sign = 1;
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
        sign = -sign;
    }
    if b < 0 {
        b = -b;
        if a < 0 {
            sign = -sign;
        }
    }
    // b is now odd and positive: Jacobi symbol with sign tracking.
    a = a.rem_euclid(b);
    while a != 0 {
        let mut t = 0;
        while a % 2 == 0 {
            a /= 2;
            t += 1;
        }
        if t % 2 == 1 && (b % 8 == 3 || b % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut b);
        a %= b;
    }
    if b == 1 {
        sign
    } else {
        0
    }
}

/// Splits a discriminant `disc = D f^2` with `D` fundamental.
///
/// `disc` must be nonzero and congruent to 0 or 1 mod 4.
pub fn fundamental_split(disc: i64) -> (i64, u64) {
    debug_assert!(disc != 0 && matches!(disc.rem_euclid(4), 0 | 1));
    let mut core_part: i64 = if disc < 0 { -1 } else { 1 };
    let mut square: u64 = 1;
    for (p, e) in factorize(disc.unsigned_abs()) {
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core_part *= p as i64;
        }
    }
    // disc = core_part * square^2 with core_part squarefree.
    if core_part.rem_euclid(4) == 1 {
        (core_part, square)
    } else {
        (4 * core_part, square / 2)
    }
}

/// Running sum that stays in `i128` until it would overflow.
struct WideSum {
    small: i128,
    big: BigInt,
}

impl WideSum {
    fn new() -> Self {
        WideSum { small: 0, big: BigInt::zero() }
    }

    fn add_i128(&mut self, x: i128) {
        match self.small.checked_add(x) {
            Some(v) => self.small = v,
            None => {
                self.big += BigInt::from(self.small) + BigInt::from(x);
                self.small = 0;
            }
        }
    }

    fn total(self) -> BigInt {
        self.big + BigInt::from(self.small)
    }
}

/// Generalized Bernoulli number `B_{r, chi_D}` of the Kronecker character of
/// the fundamental discriminant `d`.
///
/// Uses `B_{r,chi} = sum_j C(r, j) B_j F^(j-1) S_{r-j}` with
/// `S_e = sum_{a=1}^{F} chi(a) a^e` and `F = |d|`.
pub fn generalized_bernoulli(r: usize, d: i64) -> Rational {
    let f = d.unsigned_abs();
    let mut sums: Vec<WideSum> = (0..=r).map(|_| WideSum::new()).collect();
    let mut big_sums: Vec<BigInt> = vec![BigInt::zero(); r + 1];
    for a in 1..=f {
        let chi = kronecker(d, a as i64);
        if chi == 0 {
            continue;
        }
        let mut small: Option<i128> = Some(1);
        let mut big = BigInt::one();
        for e in 0..=r {
            match small {
                Some(v) => sums[e].add_i128(if chi > 0 { v } else { -v }),
                None if chi > 0 => big_sums[e] += &big,
                None => big_sums[e] -= &big,
            }
            small = match small {
                Some(v) => match v.checked_mul(a as i128) {
                    Some(next) => Some(next),
                    None => {
                        big = BigInt::from(v) * BigInt::from(a);
                        None
                    }
                },
                None => {
                    big *= BigInt::from(a);
                    None
                }
            };
        }
    }
    let s: Vec<BigInt> = sums.into_iter().zip(big_sums).map(|(w, b)| w.total() + b).collect();
    let bern = bernoulli_table(r);
    let binom = binomial_row(r);
    let f_big = BigInt::from(f);
    let mut acc = Rational::zero();
    for j in 0..=r {
        if bern[j].is_zero() || s[r - j].is_zero() {
            continue;
        }
        let f_pow = if j == 0 {
            Rational::new(BigInt::one(), f_big.clone())
        } else {
            Rational::from_integer(Pow::pow(&f_big, (j - 1) as u32))
        };
        acc += Rational::from_integer(&binom[j] * &s[r - j]) * &bern[j] * f_pow;
    }
    acc
}

/// `L(1 - r, chi_d) = -B_{r,chi_d} / r`.
pub fn l_value_at_one_minus(r: usize, d: i64) -> Rational {
    -generalized_bernoulli(r, d) / Rational::from_integer(BigInt::from(r))
}

/// Divisor-sum factor `sum_{e | f} mu(e) chi_D(e) e^(r-1) sigma_{2r-1}(f/e)`.
fn cohen_divisor_factor(r: u32, d: i64, f: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for e in divisors(f) {
        let mu = mobius(e);
        let chi = kronecker(d, e as i64);
        if mu == 0 || chi == 0 {
            continue;
        }
        let term = Pow::pow(BigInt::from(e), r - 1) * divisor_sigma(f / e, 2 * r - 1).expect("f/e >= 1");
        if mu * chi > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Cohen's function `H(r, N)` for `r >= 2`.
///
/// `H(r, 0) = zeta(1 - 2r)`; for `N > 0` with `(-1)^r N = D f^2`, `D`
/// fundamental, it is `L(1 - r, chi_D)` times a divisor sum over `f`, and it
/// vanishes when `(-1)^r N` is not a discriminant (for odd `r` that is
/// `N = 1, 2 mod 4`).
pub fn cohen_h(r: u32, n: u64) -> Result<Rational> {
    CohenTable::new(r)?.value(n)
}

/// Memoized evaluation of `H(r, .)`; caches the L-values per fundamental
/// discriminant. Owned by one caller, so no synchronization is needed.
pub struct CohenTable {
    r: u32,
    l_values: BTreeMap<i64, Rational>,
}

impl CohenTable {
    pub fn new(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::CohenOrder(r));
        }
        Ok(CohenTable { r, l_values: BTreeMap::new() })
    }

    pub fn value(&mut self, n: u64) -> Result<Rational> {
        let r = self.r;
        if n == 0 {
            let two_r = 2 * r as usize;
            return Ok(-bernoulli(two_r) / rat(two_r as i64));
        }
        let signed = if r % 2 == 1 { -(n as i64) } else { n as i64 };
        if !matches!(signed.rem_euclid(4), 0 | 1) {
            return Ok(Rational::zero());
        }
        let (d, f) = fundamental_split(signed);
        let l = self.l_values.entry(d).or_insert_with(|| l_value_at_one_minus(r as usize, d)).clone();
        Ok(l * Rational::from_integer(cohen_divisor_factor(r, d, f)))
    }
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(x: &Rational) -> alloc::string::String {
    use alloc::string::ToString;
    x.to_string()
}

/// Parses `"p/q"` or `"p"`; accepts a leading ASCII or Unicode minus.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = if let Some(rest) = s.strip_prefix('\u{2212}') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else {
        (false, s)
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (body, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() || num.is_negative() || den.is_negative() {
        return None;
    }
    let x = Rational::new(num, den);
    Some(if neg { -x } else { x })
}

/// Integer part of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = libm_sqrt(n);
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn libm_sqrt(n: u64) -> u64 {
    use num_traits::Float;
    Float::sqrt(n as f64) as u64
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

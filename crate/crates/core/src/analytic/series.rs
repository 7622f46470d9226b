//! Evaluators for `E_k(tau, s)`, `E_k^(2)(Z, s)`, `A_k(Z, s)` and `B_k(Z, s)`.

use alloc::format;
use alloc::vec::Vec;
use core::cell::OnceCell;

use num_complex::Complex64;
use num_traits::{Float, ToPrimitive};

use super::cosets::{complete_row, coprime_pairs, signed_coprime_pairs, sym_pair_reps, SymPairRep};
use super::sum::{sum_terms, Executor, Sequential};
use super::{check_weight, chi, SiegelPoint, TruncationPolicy};
use crate::elliptic::QExpansion;
use crate::siegel2::SiegelExpansion;
use crate::{Error, Result};

static SEQUENTIAL: Sequential = Sequential;

/// The degree-2 series an [`Evaluator`] knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    E2,
    A,
    B,
}

impl Series {
    pub fn name(&self) -> &'static str {
        match self {
            Series::E2 => "E2",
            Series::A => "A",
            Series::B => "B",
        }
    }
}

/// Truncated evaluators under a fixed policy. Representative lists are built
/// on first use and reused.
pub struct Evaluator<'e> {
    policy: TruncationPolicy,
    exec: &'e dyn Executor,
    pairs: OnceCell<Vec<(i64, i64)>>,
    signed: OnceCell<Vec<(i64, i64, i64, i64)>>,
    sym: OnceCell<Vec<SymPairRep>>,
}

impl<'e> Evaluator<'e> {
    pub fn new(policy: TruncationPolicy, exec: &'e dyn Executor) -> Result<Self> {
        policy.validate()?;
        Ok(Evaluator { policy, exec, pairs: OnceCell::new(), signed: OnceCell::new(), sym: OnceCell::new() })
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn executor(&self) -> &'e dyn Executor {
        self.exec
    }

    /// An evaluator for the same executor at half height.
    pub fn halved(&self) -> Evaluator<'e> {
        Evaluator::new(self.policy.halved(), self.exec).expect("halving keeps a valid policy")
    }

    fn pairs(&self) -> &[(i64, i64)] {
        self.pairs.get_or_init(|| coprime_pairs(self.policy.height))
    }

    fn signed(&self) -> &[(i64, i64, i64, i64)] {
        self.signed.get_or_init(|| {
            signed_coprime_pairs(self.policy.height)
                .into_iter()
                .map(|(c, d)| {
                    let (a, b) = complete_row(c, d);
                    (c, d, a, b)
                })
                .collect()
        })
    }

    /// The degree-2 representatives at this height.
    pub fn sym_reps(&self) -> &[SymPairRep] {
        self.sym.get_or_init(|| sym_pair_reps(self.policy.height))
    }

    /// `sum_{(c, d)} (c tau + d)^(-k) Im(gamma tau)^s`.
    pub fn e1(&self, tau: Complex64, s: Complex64, k: u32) -> Result<Complex64> {
        if !(tau.im > 0.0) {
            return Err(Error::Domain(format!("Im tau = {} is not positive", tau.im)));
        }
        check_weight(k, s, 1)?;
        let pairs = self.pairs();
        let log_y = Float::ln(tau.im);
        let k = k as i32;
        Ok(sum_terms(self.exec, pairs.len(), |i| {
            let (c, d) = pairs[i];
            chi(tau * c as f64 + d as f64, k, s, log_y)
        }))
    }

    /// `sum_{(C, D)} det(CZ + D)^(-k) delta(gZ)^s`.
    pub fn e2(&self, p: &SiegelPoint, k: u32) -> Result<Complex64> {
        check_weight(k, p.s, 2)?;
        let reps = self.sym_reps();
        let z = p.z;
        let log_delta = Float::ln(z.delta());
        let k = k as i32;
        Ok(sum_terms(self.exec, reps.len(), |i| {
            let r = &reps[i];
            let m00 = z.tau * r.c[0][0] as f64 + z.z * r.c[0][1] as f64 + r.d[0][0] as f64;
            let m01 = z.z * r.c[0][0] as f64 + z.tau_t * r.c[0][1] as f64 + r.d[0][1] as f64;
            let m10 = z.tau * r.c[1][0] as f64 + z.z * r.c[1][1] as f64 + r.d[1][0] as f64;
            let m11 = z.z * r.c[1][0] as f64 + z.tau_t * r.c[1][1] as f64 + r.d[1][1] as f64;
            chi(m00 * m11 - m01 * m10, k, p.s, log_delta)
        }))
    }

    /// `delta(Z)^s sum_{g, h} chi(g^• h_•, Z)` over pairs of coprime pairs.
    pub fn a(&self, p: &SiegelPoint, k: u32) -> Result<Complex64> {
        check_weight(k, p.s, 2)?;
        let pairs = self.pairs();
        let z = p.z;
        let n = pairs.len();
        let j1: Vec<Complex64> = pairs.iter().map(|&(c, d)| z.tau * c as f64 + d as f64).collect();
        let j2: Vec<Complex64> = pairs.iter().map(|&(c, d)| z.tau_t * c as f64 + d as f64).collect();
        let z2 = z.z * z.z;
        let log_delta = Float::ln(z.delta());
        let k = k as i32;
        Ok(sum_terms(self.exec, n * n, |i| {
            let (u, v) = (i / n, i % n);
            let cc = (pairs[u].0 * pairs[v].0) as f64;
            chi(j1[u] * j2[v] - z2 * cc, k, p.s, log_delta)
        }))
    }

    /// `delta(Z)^s sum_{g in SL_2(Z)} Phi(g_• Z) chi(g_•, Z)` with
    /// `Phi(W) = phi(W)^(-k) |phi(W)|^(-2s)` and `phi(W) = tau + 2z + tau_t`.
    pub fn b(&self, p: &SiegelPoint, k: u32) -> Result<Complex64> {
        self.b_with_offsets(p, k, &|_, _| 0)
    }

    /// [`Evaluator::b`] with the particular solution `(a0, b0)` for each
    /// `(c, d)` moved by `offset(c, d) * (c, d)`. The translation window is
    /// centred on the largest term, so the value does not depend on the
    /// offsets beyond rounding.
    pub fn b_with_offsets(
        &self,
        p: &SiegelPoint,
        k: u32,
        offset: &(dyn Fn(i64, i64) -> i64 + Sync),
    ) -> Result<Complex64> {
        check_weight(k, p.s, 2)?;
        let z = p.z;
        let det = z.det();
        // (peak-centred base, step) per (c, d).
        let lines: Vec<(Complex64, Complex64)> = self
            .signed()
            .iter()
            .map(|&(c, d, a0, b0)| {
                let t = offset(c, d);
                let (a, b) = (a0 + t * c, b0 + t * d);
                let step = z.tau_t * c as f64 + d as f64;
                let base = det * c as f64 + z.tau * d as f64 + z.tau_t * a as f64 + z.z * 2.0 + b as f64;
                let peak = Float::round(-(base * step.conj()).re / step.norm_sqr());
                (base + step * peak, step)
            })
            .collect();
        let shifts = 2 * self.policy.shift_bound as usize + 1;
        let bound = self.policy.shift_bound as f64;
        let log_delta = Float::ln(z.delta());
        let k = k as i32;
        Ok(sum_terms(self.exec, lines.len() * shifts, |i| {
            let (base, step) = lines[i / shifts];
            let t = (i % shifts) as f64 - bound;
            chi(base + step * t, k, p.s, log_delta)
        }))
    }

    /// The single term of [`Evaluator::b`] for `g = (a, b; c, d)`.
    pub fn b_term(&self, p: &SiegelPoint, k: u32, g: [i64; 4]) -> Complex64 {
        let z = p.z;
        let [a, b, c, d] = g;
        let x = z.det() * c as f64 + z.tau * d as f64 + z.tau_t * a as f64 + z.z * 2.0 + b as f64;
        chi(x, k as i32, p.s, Float::ln(z.delta()))
    }

    pub fn eval(&self, series: Series, p: &SiegelPoint, k: u32) -> Result<Complex64> {
        match series {
            Series::E2 => self.e2(p, k),
            Series::A => self.a(p, k),
            Series::B => self.b(p, k),
        }
    }
}

/// [`Evaluator::e1`] on the calling thread.
pub fn eval_e1(tau: Complex64, s: Complex64, k: u32, policy: &TruncationPolicy) -> Result<Complex64> {
    Evaluator::new(*policy, &SEQUENTIAL)?.e1(tau, s, k)
}

/// [`Evaluator::e2`] on the calling thread.
pub fn eval_e2(p: &SiegelPoint, k: u32, policy: &TruncationPolicy) -> Result<Complex64> {
    Evaluator::new(*policy, &SEQUENTIAL)?.e2(p, k)
}

/// [`Evaluator::a`] on the calling thread.
pub fn eval_a(p: &SiegelPoint, k: u32, policy: &TruncationPolicy) -> Result<Complex64> {
    Evaluator::new(*policy, &SEQUENTIAL)?.a(p, k)
}

/// [`Evaluator::b`] on the calling thread.
pub fn eval_b(p: &SiegelPoint, k: u32, policy: &TruncationPolicy) -> Result<Complex64> {
    Evaluator::new(*policy, &SEQUENTIAL)?.b(p, k)
}

fn e(x: Complex64) -> Complex64 {
    (x * Complex64::new(0.0, 2.0 * core::f64::consts::PI)).exp()
}

fn to_f64(x: &crate::Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `sum_n a(n) e(n tau)` over the stored coefficients.
pub fn qexp_value(f: &QExpansion, tau: Complex64) -> Complex64 {
    let q = e(tau);
    let terms: Vec<(u64, f64)> = f.nonzero().map(|(n, a)| (n, to_f64(a))).collect();
    sum_terms(&SEQUENTIAL, terms.len(), |i| q.powu(terms[i].0 as u32) * terms[i].1)
}

/// `sum_N A(N) e(n tau + r z + m tau_t)` over the stored coefficients.
pub fn siegel_value(f: &SiegelExpansion, z: &super::Sym2) -> Complex64 {
    let terms: Vec<(i64, i64, i64, f64)> = f.nonzero().map(|(idx, a)| (idx.n, idx.r, idx.m, to_f64(a))).collect();
    sum_terms(&SEQUENTIAL, terms.len(), |i| {
        let (n, r, m, a) = terms[i];
        e(z.tau * n as f64 + z.z * r as f64 + z.tau_t * m as f64) * a
    })
}

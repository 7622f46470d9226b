//! Numeric Hecke operators and the residual checks built on them.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, ToPrimitive};

use super::cosets::diag_double_coset_reps;
use super::series::{Evaluator, Series};
use super::{Embedding, SiegelPoint, SlashVariant, Sym2};
use crate::bowtie::klingen_function;
use crate::exactnum::{self, Rational};
use crate::{Error, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Action of an embedded `g = (a, b; c, d)` with real entries on `Z`,
/// returning `(g Z, j(g, Z))`.
pub fn embedded_action(g: [f64; 4], z: &Sym2, emb: Embedding) -> (Sym2, Complex64) {
    let [a, b, cc, d] = g;
    match emb {
        Embedding::Upper => {
            let j = z.tau * cc + d;
            let w = Sym2::new((z.tau * a + b) / j, z.z / j, z.tau_t - z.z * z.z * cc / j);
            (w, j)
        }
        Embedding::Lower => {
            let j = z.tau_t * cc + d;
            let w = Sym2::new(z.tau - z.z * z.z * cc / j, z.z / j, (z.tau_t * a + b) / j);
            (w, j)
        }
    }
}

/// Points and weights of the normalized operator
/// `F | T_p^• (Z) = p^(k-1) F(p tau, sqrt(p) z, tau_t) + (1/p) sum_l F((tau + l)/p, z/sqrt(p), tau_t)`
/// (and its mirror for the lower embedding).
pub fn hecke_points(z: &Sym2, k: u32, p: u64, emb: Embedding) -> Vec<(f64, Sym2)> {
    let pf = p as f64;
    let r = Float::sqrt(pf);
    let big = Float::powi(pf, k as i32 - 1);
    let mut out = Vec::with_capacity(p as usize + 1);
    match emb {
        Embedding::Upper => {
            out.push((big, Sym2::new(z.tau * pf, z.z * r, z.tau_t)));
            for l in 0..p {
                out.push((1.0 / pf, Sym2::new((z.tau + l as f64) / pf, z.z / r, z.tau_t)));
            }
        }
        Embedding::Lower => {
            out.push((big, Sym2::new(z.tau, z.z * r, z.tau_t * pf)));
            for l in 0..p {
                out.push((1.0 / pf, Sym2::new(z.tau, z.z / r, (z.tau_t + l as f64) / pf)));
            }
        }
    }
    out
}

/// `(S | T_p) (Z)` for a degree-2 series, with `T_p` embedded as `emb`.
pub fn hecke_apply(
    ev: &Evaluator,
    series: Series,
    point: &SiegelPoint,
    k: u32,
    p: u64,
    emb: Embedding,
) -> Result<Complex64> {
    require_prime(p)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, z) in hecke_points(&point.z, k, p, emb) {
        acc += ev.eval(series, &point.at(z)?, k)? * w;
    }
    Ok(acc)
}

/// `(S | T_p)(Z) / S(Z)`.
pub fn eigen_ratio(
    ev: &Evaluator,
    series: Series,
    point: &SiegelPoint,
    k: u32,
    p: u64,
    emb: Embedding,
) -> Result<Complex64> {
    Ok(hecke_apply(ev, series, point, k, p, emb)? / ev.eval(series, point, k)?)
}

/// `(E_k(., s) | T_p)(tau) / E_k(tau, s)` in degree 1, with
/// `F | T_p = p^(k-1) F(p tau) + (1/p) sum_l F((tau + l)/p)`.
pub fn degree_one_ratio(ev: &Evaluator, tau: Complex64, s: Complex64, k: u32, p: u64) -> Result<Complex64> {
    require_prime(p)?;
    let pf = p as f64;
    let mut acc = ev.e1(tau * pf, s, k)? * Float::powi(pf, k as i32 - 1);
    for l in 0..p {
        acc += ev.e1((tau + l as f64) / pf, s, k)? / pf;
    }
    Ok(acc / ev.e1(tau, s, k)?)
}

/// Closed form of the degree-1 eigenvalue: `p^(k-1+s) + p^(-s)`.
pub fn degree_one_eigenvalue(k: u32, s: Complex64, p: u64) -> Complex64 {
    let lp = Float::ln(p as f64);
    ((s + (k as f64 - 1.0)) * lp).exp() + (-s * lp).exp()
}

fn require_prime(p: u64) -> Result<()> {
    if exactnum::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Relative strong-symmetry residual of an arbitrary function `f` at `Z`:
///
/// ```text
/// | p^(k-1) f(p tau, p z, tau_t) + (1/p) sum_l f((tau + l)/p, z, tau_t)
///   - p^(k-1) f(tau, p z, p tau_t) - (1/p) sum_l f(tau, z, (tau_t + l)/p) | / |f(Z)|
/// ```
///
/// `p = 1` gives 0. Every visited point must have `Im` eigenvalues at least
/// `y_floor`.
pub fn bowtie_functional<F>(k: u32, p: u64, z: &Sym2, y_floor: f64, mut f: F) -> Result<f64>
where
    F: FnMut(&Sym2) -> Result<Complex64>,
{
    if p == 0 {
        return Err(Error::NonPositive("p"));
    }
    if p == 1 {
        return Ok(0.0);
    }
    require_prime(p)?;
    let pf = p as f64;
    let big = Float::powi(pf, k as i32 - 1);
    let mut terms: Vec<(f64, Sym2)> = Vec::new();
    terms.push((big, Sym2::new(z.tau * pf, z.z * pf, z.tau_t)));
    for l in 0..p {
        terms.push((1.0 / pf, Sym2::new((z.tau + l as f64) / pf, z.z, z.tau_t)));
    }
    terms.push((-big, Sym2::new(z.tau, z.z * pf, z.tau_t * pf)));
    for l in 0..p {
        terms.push((-1.0 / pf, Sym2::new(z.tau, z.z, (z.tau_t + l as f64) / pf)));
    }
    for (_, w) in &terms {
        let y = w.min_imag_eigenvalue();
        if !(y >= y_floor) {
            return Err(Error::Domain(format!(
                "smallest eigenvalue {y} of Im Z at a bowtie point is below the floor {y_floor}"
            )));
        }
    }
    let mut diff = Complex64::new(0.0, 0.0);
    for (w, pt) in &terms {
        diff += f(pt)? * *w;
    }
    Ok(diff.norm() / f(z)?.norm())
}

/// [`bowtie_functional`] applied to `E_k^(2)(., s)`.
pub fn bowtie_residual_numeric(ev: &Evaluator, k: u32, s: Complex64, z: &Sym2, p: u64) -> Result<f64> {
    let point = SiegelPoint::new(*z, s)?;
    super::check_weight(k, s, 2)?;
    bowtie_functional(k, p, z, ev.policy().y_floor, |w| ev.e2(&point.at(*w)?, k))
}

/// The restricted Klingen-type function `f(tau, tau_t)` of weight 12 (see
/// [`klingen_function`]) evaluated from its double q-expansion; the `z`
/// entry is ignored.
pub struct KlingenControl {
    terms: Vec<(u64, u64, f64)>,
}

impl KlingenControl {
    pub const WEIGHT: u32 = 12;

    pub fn new(alpha: &Rational, trunc: u64) -> Result<Self> {
        let f = klingen_function(alpha, trunc)?;
        let terms = f.nonzero().map(|(&(n, m), a)| (n, m, a.to_f64().unwrap_or(f64::NAN))).collect();
        Ok(KlingenControl { terms })
    }

    pub fn value(&self, z: &Sym2) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * core::f64::consts::PI);
        let (q1, q2) = ((z.tau * two_pi_i).exp(), (z.tau_t * two_pi_i).exp());
        super::sum::sum_terms(&super::sum::Sequential, self.terms.len(), |i| {
            let (n, m, a) = self.terms[i];
            q1.powu(n as u32) * q2.powu(m as u32) * a
        })
    }
}

/// [`bowtie_functional`] applied to the Klingen-type control.
pub fn klingen_residual_numeric(alpha: &Rational, p: u64, z: &Sym2, trunc: u64, y_floor: f64) -> Result<f64> {
    let f = KlingenControl::new(alpha, trunc)?;
    bowtie_functional(KlingenControl::WEIGHT, p, z, y_floor, |w| Ok(f.value(w)))
}

/// Residual of one slash convention in the decomposition check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantResidual {
    pub variant: SlashVariant,
    pub embedding: Embedding,
    pub residual: f64,
}

/// Outcome of [`decomposition_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub e: Complex64,
    pub a: Complex64,
    pub m_max: u32,
    /// `|E - A| / |E|`.
    pub without_b: f64,
    pub variants: Vec<VariantResidual>,
}

impl DecompositionReport {
    /// The variant with the smallest residual (first in listing order on
    /// ties).
    pub fn best(&self) -> Option<&VariantResidual> {
        self.variants.iter().fold(None, |best: Option<&VariantResidual>, v| match best {
            Some(b) if b.residual <= v.residual => Some(b),
            _ => Some(v),
        })
    }
}

/// `|E - A - sum_{m <= m_max} m^(-2s-k) (B | Gamma diag(m, 1/m) Gamma)| / |E|`
/// for every combination of slash variant and embedding.
pub fn decomposition_residual(ev: &Evaluator, k: u32, s: Complex64, z: &Sym2) -> Result<DecompositionReport> {
    let point = SiegelPoint::new(*z, s)?;
    let e = ev.e2(&point, k)?;
    let a = ev.a(&point, k)?;
    let m_max = ev.policy().m_max;
    let mut variants = Vec::new();
    for emb in [Embedding::Upper, Embedding::Lower] {
        // (m^(-2s-k), j, B(W)) for every coset term.
        let mut pieces: Vec<(Complex64, f64, Complex64)> = Vec::new();
        for m in 1..=m_max as u64 {
            let mf = m as f64;
            let mw = (-(s * 2.0 + k as f64) * Float::ln(mf)).exp();
            for g in diag_double_coset_reps(m) {
                let (ga, gb, gd) = (g.a as f64 / mf, g.b as f64 / mf, g.d as f64 / mf);
                let (w, j) = embedded_action([ga, gb, 0.0, gd], z, emb);
                pieces.push((mw, j.re, ev.b(&point.at(w)?, k)?));
            }
        }
        for variant in [SlashVariant::Pure, SlashVariant::WithS] {
            let mut total = a;
            for &(mw, j, b) in &pieces {
                let mut f = c(Float::powi(j, -(k as i32)));
                if variant == SlashVariant::WithS {
                    f *= (-s * 2.0 * Float::ln(j)).exp();
                }
                total += mw * f * b;
            }
            variants.push(VariantResidual { variant, embedding: emb, residual: (e - total).norm() / e.norm() });
        }
    }
    Ok(DecompositionReport { e, a, m_max, without_b: (e - a).norm() / e.norm(), variants })
}

/// Generators used for modularity residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `(1, 1; 0, 1)` embedded as given.
    Translation(Embedding),
    /// `(0, -1; 1, 0)` embedded as given.
    Inversion(Embedding),
    /// `Z -> -Z^(-1)` in `Sp_2(Z)`.
    FullInversion,
}

/// `|S(gZ) - j(g, Z)^k S(Z)| / |j(g, Z)^k S(Z)|`.
pub fn modularity_residual(ev: &Evaluator, series: Series, point: &SiegelPoint, k: u32, g: Generator) -> Result<f64> {
    let (w, j) = match g {
        Generator::Translation(emb) => embedded_action([1.0, 1.0, 0.0, 1.0], &point.z, emb),
        Generator::Inversion(emb) => embedded_action([0.0, -1.0, 1.0, 0.0], &point.z, emb),
        Generator::FullInversion => (point.z.invert(), point.z.det()),
    };
    let expected = j.powi(k as i32) * ev.eval(series, point, k)?;
    Ok((ev.eval(series, &point.at(w)?, k)? - expected).norm() / expected.norm())
}

/// Degree-1 analogue of [`modularity_residual`] for `g = (a, b; c, d)`.
pub fn modularity_residual_e1(ev: &Evaluator, tau: Complex64, s: Complex64, k: u32, g: [f64; 4]) -> Result<f64> {
    let [a, b, c, d] = g;
    let j = tau * c + d;
    let expected = j.powi(k as i32) * ev.e1(tau, s, k)?;
    Ok((ev.e1((tau * a + b) / j, s, k)? - expected).norm() / expected.norm())
}

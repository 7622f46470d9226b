//! The verification suites behind `bowtie check`.
//!
//! Each suite yields a status, a JSON report body and human-readable summary
//! lines that name the certified window (exact suites) or the height and half
//! height (numeric suites). Reports contain no timings or thread counts, so a
//! fixed configuration always produces the same bytes.

use std::collections::BTreeMap;
use std::path::Path;

use bowtie_core::analytic::checks::{eigen_ratio, VariantResidual};
use bowtie_core::analytic::{
    bowtie_residual_numeric, decomposition_residual, degree_one_eigenvalue, klingen_residual_numeric, Embedding,
    Evaluator, Executor, Series, SiegelPoint, SlashVariant, Sym2, TruncationPolicy,
};
use bowtie_core::bowtie::{check_prime_window, check_strong_symmetry, klingen_difference, BowtieReport};
use bowtie_core::exactnum::{format_rational, rat, rat_frac};
use bowtie_core::siegel2::{eisenstein_maass_form, maass_lift};
use bowtie_core::Rational;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Suite, SuiteConfig, VariantChoice};
use crate::error::{EXIT_PASS, EXIT_VIOLATION};
use crate::exec::{par_map, Threaded};
use crate::format::{complex, read_json, BowtieReportFile, SiegelExpansionFile};
use crate::CliError;

/// Bound on the numeric bowtie residual of `E_k^(2)`.
pub const NUMERIC_BOWTIE_TOL: f64 = 1e-2;
/// Required ratio between the Klingen control and the Eisenstein residual.
pub const CONTROL_SEPARATION: f64 = 100.0;
/// Bound on the decomposition residual of the best slash variant.
pub const DECOMPOSITION_TOL: f64 = 5e-2;
/// Bound on the spread of the Hecke ratios and on their distance to the
/// degree-1 ratio.
pub const EIGEN_TOL: f64 = 1e-2;
/// Values of alpha in `E12 (x) Delta + Delta (x) E12 + alpha Delta (x) Delta`.
pub const KLINGEN_ALPHAS: [(i64, i64); 3] = [(0, 1), (3, 7), (-11, 1)];
/// `alpha` of the numeric Klingen control.
pub const KLINGEN_CONTROL_ALPHA: i64 = 1;
/// The (0, 1) coefficient of the Klingen difference at p = 2.
pub const KLINGEN_COEFF_P2: i64 = 2073;
/// Sample points besides `--Z` for the eigen-ratio suite.
pub const EIGEN_POINTS: [[f64; 6]; 2] = [[0.2, 1.2, 0.0, 0.3, -0.1, 1.4], [0.0, 1.0, 0.05, 0.2, 0.3, 1.1]];
/// Where the degree-1 ratio is evaluated.
pub const DEGREE_ONE_TAU: [f64; 2] = [0.1, 1.3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The control reproduced the expected violation.
    FailAsExpected,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass | Status::FailAsExpected => EXIT_PASS,
            Status::Fail => EXIT_VIOLATION,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::FailAsExpected => "fail-as-expected",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub summary: Vec<String>,
}

struct Body {
    pass: bool,
    fields: Map<String, Value>,
    summary: Vec<String>,
}

pub fn run_suite(cfg: &SuiteConfig, exec: &Threaded) -> Result<Outcome, CliError> {
    let body = match cfg.suite {
        Suite::BowtieExact => bowtie_exact(cfg, exec.threads())?,
        Suite::MaassRandom => maass_random(cfg, exec.threads())?,
        Suite::Klingen => klingen(cfg)?,
        Suite::NumericBowtie => numeric_bowtie(cfg, exec)?,
        Suite::Decomposition => decomposition(cfg, exec)?,
        Suite::EigenRatio => eigen(cfg, exec)?,
    };
    let status = match (cfg.suite, body.pass) {
        (Suite::Klingen, true) => Status::FailAsExpected,
        (_, true) => Status::Pass,
        (_, false) => Status::Fail,
    };
    let mut report = Map::new();
    report.insert("suite".into(), json!(cfg.suite.name()));
    report.insert("status".into(), json!(status));
    report.extend(body.fields);
    let mut summary = body.summary;
    summary.push(format!("{}: {}", cfg.suite.name(), status.as_str()));
    Ok(Outcome { status, report: Value::Object(report), summary })
}

fn fields(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("report bodies are objects"),
    }
}

/// Largest discriminant `4nm - r^2` among indices with `n + m <= trace`.
pub fn max_disc(trace: u64) -> u64 {
    let half = trace / 2;
    4 * half * (trace - half)
}

fn bowtie_exact(cfg: &SuiteConfig, threads: usize) -> Result<Body, CliError> {
    if let Some(path) = &cfg.input {
        return bowtie_file(cfg, path);
    }
    let window = cfg.trace;
    let max_p = cfg.primes.iter().copied().max().unwrap_or(2);
    // Reading A(pn, r, m) and A(n, r, pm) on the window needs 4 p nm - r^2.
    let disc = max_p * max_disc(window);
    let forms = par_map(threads, &cfg.weights, |&k| eisenstein_maass_form(k, disc))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..forms.len()).flat_map(|i| cfg.primes.iter().map(move |&p| (i, p))).collect();
    let reports = par_map(threads, &jobs, |&(i, p)| check_prime_window(&forms[i], p, window))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let summary = reports.iter().map(summary_line).collect();
    let files: Vec<BowtieReportFile> = reports.iter().map(BowtieReportFile::from).collect();
    Ok(Body {
        pass: reports.iter().all(|r| r.pass()),
        fields: fields(json!({
            "config": {"weights": cfg.weights, "primes": cfg.primes, "window": window},
            "certified_window": window,
            "max_input_trace": max_p * window,
            "max_disc": disc,
            "reports": files,
        })),
        summary,
    })
}

fn summary_line(r: &BowtieReport) -> String {
    format!(
        "k={} p={} certified window n+m<={} checked={} violations={}",
        r.weight,
        r.prime,
        r.window,
        r.checked,
        r.violations.len()
    )
}

/// The exact check on a stored expansion, each prime on its certified window
/// `floor(trace_trunc / p)`.
fn bowtie_file(cfg: &SuiteConfig, path: &Path) -> Result<Body, CliError> {
    let f = read_json::<SiegelExpansionFile>(path)?.to_expansion()?;
    let reports = check_strong_symmetry(&f, &cfg.primes)?;
    let files: Vec<BowtieReportFile> = reports.iter().map(BowtieReportFile::from).collect();
    Ok(Body {
        pass: reports.iter().all(|r| r.pass()),
        fields: fields(json!({
            "config": {"input": path.display().to_string(), "primes": cfg.primes},
            "weight": f.weight(),
            "trace_trunc": f.trace_trunc(),
            "reports": files,
        })),
        summary: reports.iter().map(summary_line).collect(),
    })
}

/// Draws the lift data of one random sample.
///
/// With `ChaCha8Rng::seed_from_u64(seed)` and per sample, in order: `c(D)` for
/// `D = 0, 3 mod 4` ascending up to `max_disc`, each `u/v` with `u` uniform in
/// `-50..=50` and `v` in `1..=7`; then `c0` uniform in `-9..=9`; then the weight,
/// `2 * (2..=6)` or uniform over the given weights.
pub fn random_lift(rng: &mut ChaCha8Rng, max_disc: u64, weights: &[u32]) -> (BTreeMap<u64, Rational>, Rational, u32) {
    let c = (0..=max_disc)
        .filter(|d| matches!(d % 4, 0 | 3))
        .map(|d| (d, rat_frac(rng.gen_range(-50..=50), rng.gen_range(1..=7))))
        .collect();
    let c0 = rat(rng.gen_range(-9..=9));
    let k = if weights.is_empty() { 2 * rng.gen_range(2u32..=6) } else { weights[rng.gen_range(0..weights.len())] };
    (c, c0, k)
}

fn maass_random(cfg: &SuiteConfig, threads: usize) -> Result<Body, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let disc = max_disc(cfg.trace);
    let samples: Vec<_> = (0..cfg.count).map(|_| random_lift(&mut rng, disc, &cfg.weights)).collect();
    let results = par_map(threads, &samples, |(c, c0, k)| {
        let f = maass_lift(c, c0.clone(), *k, cfg.trace)?;
        check_strong_symmetry(&f, &cfg.primes)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, reports) in results.iter().enumerate() {
        for r in reports {
            checked += r.checked;
            if !r.pass() {
                failures.push(json!({"sample": i, "report": BowtieReportFile::from(r)}));
            }
        }
    }
    let windows: Vec<Value> = cfg.primes.iter().map(|&p| json!({"prime": p, "window": cfg.trace / p})).collect();
    let mut summary: Vec<String> = cfg
        .primes
        .iter()
        .map(|&p| format!("p={p} certified window n+m<={} (input trace {})", cfg.trace / p, cfg.trace))
        .collect();
    summary.push(format!("samples={} seed={} checked={checked} failures={}", cfg.count, cfg.seed, failures.len()));
    Ok(Body {
        pass: failures.is_empty(),
        fields: fields(json!({
            "config": {
                "weights": if cfg.weights.is_empty() { json!("random 4..12") } else { json!(cfg.weights) },
                "primes": cfg.primes,
                "trace": cfg.trace,
                "seed": cfg.seed,
                "count": cfg.count,
                "generator": "ChaCha8Rng::seed_from_u64(seed); per sample c(D) = u/v (u in -50..=50, v in 1..=7) for D = 0,3 mod 4 ascending, then c0 in -9..=9, then k",
            },
            "windows": windows,
            "checked": checked,
            "failures": failures,
        })),
        summary,
    })
}

fn klingen(cfg: &SuiteConfig) -> Result<Body, CliError> {
    let alphas: Vec<Rational> = KLINGEN_ALPHAS.iter().map(|&(n, d)| rat_frac(n, d)).collect();
    let mut per_prime = Vec::new();
    let mut summary = Vec::new();
    let mut all = true;
    for &p in &cfg.primes {
        let diffs = alphas.iter().map(|a| klingen_difference(a, p, cfg.trace)).collect::<Result<Vec<_>, _>>()?;
        let base = &diffs[0];
        let window = cfg.trace / p;
        let independent = diffs.iter().all(|d| d == base);
        let zero = rat(0);
        let mut diagonal_zero = true;
        for n in 0..=window {
            diagonal_zero &= base.coeff(n, n)? == zero;
        }
        let c01 = base.coeff(0, 1)?;
        let expected = (p == 2).then(|| rat(KLINGEN_COEFF_P2));
        let matches = expected.as_ref().is_none_or(|e| *e == c01);
        let reproduced = !base.is_zero() && independent && diagonal_zero && matches;
        all &= reproduced;
        let entries: Vec<(u64, u64, String)> = base.nonzero().map(|(&(n, m), v)| (n, m, format_rational(v))).collect();
        summary.push(format!(
            "p={p} certified window n,m<={window} coefficient(0,1)={} nonzero={} alpha-independent={independent} diagonal-zero={diagonal_zero}",
            format_rational(&c01),
            entries.len()
        ));
        per_prime.push(json!({
            "prime": p,
            "window": window,
            "coeff_0_1": format_rational(&c01),
            "expected_coeff_0_1": expected.as_ref().map(format_rational),
            "nonzero": entries.len(),
            "diagonal_zero": diagonal_zero,
            "alpha_independent": independent,
            "difference": entries,
        }));
    }
    Ok(Body {
        pass: all,
        fields: fields(json!({
            "config": {
                "weight": 12,
                "primes": cfg.primes,
                "trace": cfg.trace,
                "alphas": alphas.iter().map(format_rational).collect::<Vec<_>>(),
            },
            "results": per_prime,
        })),
        summary,
    })
}

fn policy_json(p: &TruncationPolicy) -> Value {
    json!({"height": p.height, "shift_bound": p.shift_bound, "m_max": p.m_max, "y_floor": p.y_floor})
}

fn point_json(z: &Sym2) -> Value {
    json!([complex(z.tau), complex(z.z), complex(z.tau_t)])
}

/// The common head of a numeric report.
fn numeric_head(series: &str, cfg: &SuiteConfig, value: Complex64) -> Map<String, Value> {
    fields(json!({
        "series": series,
        "k": cfg.weights[0],
        "s": complex(cfg.s),
        "Z": point_json(&cfg.z),
        "policy": policy_json(&cfg.policy),
        "value": complex(value),
    }))
}

fn numeric_bowtie(cfg: &SuiteConfig, exec: &dyn Executor) -> Result<Body, CliError> {
    let k = cfg.weights[0];
    let ev = Evaluator::new(cfg.policy, exec)?;
    let half = ev.halved();
    let value = ev.e2(&SiegelPoint::new(cfg.z, cfg.s)?, k)?;
    let mut residuals = Map::new();
    let mut summary = Vec::new();
    let mut all = true;
    for &p in &cfg.primes {
        let r = bowtie_residual_numeric(&ev, k, cfg.s, &cfg.z, p)?;
        let rh = bowtie_residual_numeric(&half, k, cfg.s, &cfg.z, p)?;
        let control = klingen_residual_numeric(&rat(KLINGEN_CONTROL_ALPHA), p, &cfg.z, cfg.trace, cfg.policy.y_floor)?;
        let pass = r <= NUMERIC_BOWTIE_TOL && control >= CONTROL_SEPARATION * r;
        all &= pass;
        summary.push(format!(
            "p={p} height={} residual={r:e} (half height {}: {rh:e}) klingen control={control:e}",
            ev.policy().height,
            half.policy().height
        ));
        residuals.insert(
            p.to_string(),
            json!({
                "height": ev.policy().height,
                "residual": r,
                "half_height": half.policy().height,
                "residual_at_half_height": rh,
                "klingen_control": control,
                "klingen_trunc": cfg.trace,
                "pass": pass,
            }),
        );
    }
    let mut fields = numeric_head("E2", cfg, value);
    fields.insert("residuals".into(), Value::Object(residuals));
    Ok(Body { pass: all, fields, summary })
}

fn variant_name(v: SlashVariant) -> &'static str {
    match v {
        SlashVariant::Pure => "pure",
        SlashVariant::WithS => "with-s",
    }
}

fn embedding_name(e: Embedding) -> &'static str {
    match e {
        Embedding::Upper => "upper",
        Embedding::Lower => "lower",
    }
}

fn best_variant(variants: &[VariantResidual], choice: VariantChoice) -> Option<VariantResidual> {
    variants
        .iter()
        .filter(|v| match choice {
            VariantChoice::Both => true,
            VariantChoice::Pure => v.variant == SlashVariant::Pure,
            VariantChoice::WithS => v.variant == SlashVariant::WithS,
        })
        .fold(None, |best: Option<VariantResidual>, v| match best {
            Some(b) if b.residual <= v.residual => Some(b),
            _ => Some(*v),
        })
}

fn decomposition(cfg: &SuiteConfig, exec: &dyn Executor) -> Result<Body, CliError> {
    let k = cfg.weights[0];
    let ev = Evaluator::new(cfg.policy, exec)?;
    let half = ev.halved();
    let full = decomposition_residual(&ev, k, cfg.s, &cfg.z)?;
    let coarse = decomposition_residual(&half, k, cfg.s, &cfg.z)?;
    let best = best_variant(&full.variants, cfg.variant).expect("four variants");
    let best_half = best_variant(&coarse.variants, cfg.variant).expect("four variants");
    let stable = best.variant == best_half.variant;
    let pass = best.residual <= DECOMPOSITION_TOL && stable;
    let variants: Vec<Value> = full
        .variants
        .iter()
        .zip(&coarse.variants)
        .map(|(v, h)| {
            json!({
                "variant": variant_name(v.variant),
                "embedding": embedding_name(v.embedding),
                "residual": v.residual,
                "residual_at_half_height": h.residual,
            })
        })
        .collect();
    let mut summary: Vec<String> = full
        .variants
        .iter()
        .map(|v| {
            format!(
                "height={} m_max={} {}/{} residual={:e}",
                ev.policy().height,
                full.m_max,
                variant_name(v.variant),
                embedding_name(v.embedding),
                v.residual
            )
        })
        .collect();
    summary.push(format!(
        "best {}/{} at height {}, {}/{} at half height {}; without B {:e}",
        variant_name(best.variant),
        embedding_name(best.embedding),
        ev.policy().height,
        variant_name(best_half.variant),
        embedding_name(best_half.embedding),
        half.policy().height,
        full.without_b
    ));
    let mut fields = numeric_head("E2", cfg, full.e);
    fields.insert(
        "residuals".into(),
        json!({
            "height": ev.policy().height,
            "half_height": half.policy().height,
            "m_max": full.m_max,
            "A": complex(full.a),
            "without_b": full.without_b,
            "without_b_at_half_height": coarse.without_b,
            "variant_choice": match cfg.variant {
                VariantChoice::Both => "both",
                VariantChoice::Pure => "pure",
                VariantChoice::WithS => "with-s",
            },
            "variants": variants,
            "best": {"variant": variant_name(best.variant), "embedding": embedding_name(best.embedding), "residual": best.residual},
            "best_at_half_height": {"variant": variant_name(best_half.variant), "embedding": embedding_name(best_half.embedding), "residual": best_half.residual},
            "stable": stable,
            "tolerance": DECOMPOSITION_TOL,
        }),
    );
    Ok(Body { pass, fields, summary })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn eigen(cfg: &SuiteConfig, exec: &dyn Executor) -> Result<Body, CliError> {
    let k = cfg.weights[0];
    let s = cfg.s;
    let ev = Evaluator::new(cfg.policy, exec)?;
    let half = ev.halved();
    let mut points = vec![cfg.z];
    for [a, b, c, d, e, f] in EIGEN_POINTS {
        points.push(Sym2::new(Complex64::new(a, b), Complex64::new(c, d), Complex64::new(e, f)));
    }
    let points = points.into_iter().map(|z| SiegelPoint::new(z, s)).collect::<Result<Vec<_>, _>>()?;
    let value = ev.a(&points[0], k)?;
    let tau = Complex64::new(DEGREE_ONE_TAU[0], DEGREE_ONE_TAU[1]);
    let mut residuals = Map::new();
    let mut summary = Vec::new();
    let mut all = true;
    for &p in &cfg.primes {
        let deg1 = bowtie_core::analytic::checks::degree_one_ratio(&ev, tau, s, k, p)?;
        let closed = degree_one_eigenvalue(k, s, p);
        let mut ratios = Vec::new();
        let mut rows = Vec::new();
        for point in &points {
            for emb in [Embedding::Upper, Embedding::Lower] {
                let r = eigen_ratio(&ev, Series::A, point, k, p, emb)?;
                let rh = eigen_ratio(&half, Series::A, point, k, p, emb)?;
                ratios.push((r, rh));
                rows.push(json!({
                    "Z": point_json(&point.z),
                    "embedding": embedding_name(emb),
                    "ratio": complex(r),
                    "ratio_at_half_height": complex(rh),
                }));
            }
        }
        let (r0, rh0) = ratios[0];
        let spread = ratios.iter().map(|(r, _)| rel(*r, r0)).fold(0.0, f64::max);
        let spread_half = ratios.iter().map(|(_, r)| rel(*r, rh0)).fold(0.0, f64::max);
        let vs_deg1 = ratios.iter().map(|(r, _)| rel(*r, deg1)).fold(0.0, f64::max);
        let vs_deg1_half = ratios.iter().map(|(_, r)| rel(*r, deg1)).fold(0.0, f64::max);
        let pass = spread <= EIGEN_TOL && vs_deg1 <= EIGEN_TOL;
        all &= pass;
        summary.push(format!(
            "p={p} height={} (half {}) spread={spread:e} vs degree-1={vs_deg1:e} degree-1 ratio={:.9} closed form={:.9}",
            ev.policy().height,
            half.policy().height,
            deg1.re,
            closed.re
        ));
        residuals.insert(
            p.to_string(),
            json!({
                "height": ev.policy().height,
                "half_height": half.policy().height,
                "degree_one_tau": DEGREE_ONE_TAU,
                "degree_one_ratio": complex(deg1),
                "closed_form": complex(closed),
                "ratios": rows,
                "spread": spread,
                "spread_at_half_height": spread_half,
                "vs_degree_one": vs_deg1,
                "vs_degree_one_at_half_height": vs_deg1_half,
                "pass": pass,
            }),
        );
    }
    let mut fields = numeric_head("A", cfg, value);
    fields.insert("residuals".into(), Value::Object(residuals));
    Ok(Body { pass: all, fields, summary })
}

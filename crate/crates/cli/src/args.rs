//! Command line surface and suite configuration.

use std::path::PathBuf;

use bowtie_core::analytic::{check_weight, SiegelPoint, Sym2, TruncationPolicy};
use bowtie_core::exactnum::is_prime;
use bowtie_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bowtie",
    version,
    about = "Exact and numeric checks of the strong symmetry of degree-2 Eisenstein series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an exact Fourier expansion as JSON.
    Expand(ExpandArgs),
    /// Run a verification suite and write its JSON report.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandKind {
    /// Holomorphic Eisenstein series E_k of degree 1.
    Elliptic,
    /// Holomorphic Siegel Eisenstein series E_k of degree 2.
    Siegel,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(value_enum)]
    pub kind: ExpandKind,
    /// Weight.
    #[arg(long)]
    pub k: u32,
    /// Largest q-power (elliptic) or largest trace n + m (siegel).
    #[arg(long, visible_aliases = ["trunc", "trace"])]
    pub bound: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Exact identity on E_k for every weight and prime.
    BowtieExact,
    /// Exact identity on seeded random Maass lifts.
    MaassRandom,
    /// The Klingen-type control, which must violate the identity.
    Klingen,
    /// Numeric functional on the real-analytic E_k against the Klingen control.
    NumericBowtie,
    /// E = A + sum_m m^(-2s-k) B | (Gamma diag(m, 1/m) Gamma), per slash variant.
    Decomposition,
    /// Hecke eigenvalue of A_k against the degree-1 eigenvalue.
    EigenRatio,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::BowtieExact => "bowtie-exact",
            Suite::MaassRandom => "maass-random",
            Suite::Klingen => "klingen",
            Suite::NumericBowtie => "numeric-bowtie",
            Suite::Decomposition => "decomposition",
            Suite::EigenRatio => "eigen-ratio",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Suite::NumericBowtie | Suite::Decomposition | Suite::EigenRatio)
    }
}

/// Which slash conventions the decomposition suite considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Pure,
    WithS,
    Both,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Weights: a list `4,6` and/or ranges `4..12` (even weights in range).
    #[arg(long, value_parser = parse_weights)]
    pub k: Option<IntList>,
    /// Primes: a list `2,3` and/or ranges `2..7` (primes in range).
    #[arg(long, value_parser = parse_primes)]
    pub primes: Option<IntList>,
    /// Certified window (bowtie-exact) or input trace / truncation (other exact suites, Klingen control).
    #[arg(long)]
    pub trace: Option<u64>,
    /// Coset-sum height for the numeric suites.
    #[arg(long)]
    pub height: Option<u32>,
    /// Spectral parameter `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub s: Option<Complex64>,
    /// Point `Z` as `re,im,re,im,re,im` for tau, z, tau~.
    #[arg(long = "Z", allow_hyphen_values = true, value_parser = parse_point)]
    pub z: Option<Sym2>,
    /// Last m in the decomposition sum.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Seed for the randomized suites.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random samples.
    #[arg(long)]
    pub count: Option<u32>,
    /// Report file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Expansion file (siegel format) to check instead of E_k (bowtie-exact).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Slash convention(s) for the decomposition suite.
    #[arg(long, value_enum)]
    pub variant: Option<VariantChoice>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u64>);

fn parse_list(s: &str, keep: fn(u64) -> bool) -> Result<IntList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|e| format!("{part:?}: {e}"))?;
            let b: u64 = b.trim().parse().map_err(|e| format!("{part:?}: {e}"))?;
            out.extend((a..=b).filter(|&x| keep(x)));
        } else {
            out.push(part.parse().map_err(|e| format!("{part:?}: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err(format!("{s:?} selects nothing"));
    }
    Ok(IntList(out))
}

pub fn parse_weights(s: &str) -> Result<IntList, String> {
    parse_list(s, |k| k % 2 == 0)
}

pub fn parse_primes(s: &str) -> Result<IntList, String> {
    parse_list(s, is_prime)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"))).collect()
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match parse_floats(s)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}

pub fn parse_point(s: &str) -> Result<Sym2, String> {
    match parse_floats(s)?.as_slice() {
        [a, b, c, d, e, f] => Ok(Sym2::new(Complex64::new(*a, *b), Complex64::new(*c, *d), Complex64::new(*e, *f))),
        _ => Err(format!("expected six numbers `re,im,re,im,re,im`, got {s:?}")),
    }
}

/// Fully resolved parameters of one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Empty for maass-random without `--k`: weights are then drawn at random.
    pub weights: Vec<u32>,
    pub primes: Vec<u64>,
    pub trace: u64,
    pub policy: TruncationPolicy,
    pub s: Complex64,
    pub z: Sym2,
    pub seed: u64,
    pub count: u32,
    pub variant: VariantChoice,
    pub input: Option<PathBuf>,
}

impl SuiteConfig {
    /// Defaults for `suite`, matching the documented acceptance runs.
    pub fn defaults(suite: Suite) -> Self {
        let (weights, primes, trace, height): (&[u32], &[u64], u64, u32) = match suite {
            Suite::BowtieExact => (&[4, 6, 8, 10, 12], &[2, 3, 5, 7], 24, 6),
            Suite::MaassRandom => (&[], &[2, 3], 12, 6),
            Suite::Klingen => (&[12], &[2], 12, 6),
            Suite::NumericBowtie => (&[8], &[2], 30, 6),
            Suite::Decomposition => (&[8], &[], 0, 12),
            Suite::EigenRatio => (&[8], &[2], 0, 6),
        };
        SuiteConfig {
            suite,
            weights: weights.to_vec(),
            primes: primes.to_vec(),
            trace,
            policy: TruncationPolicy::with_height(height),
            s: Complex64::new(0.75, 0.0),
            z: Sym2::sample(),
            seed: 1,
            count: 100,
            variant: VariantChoice::Both,
            input: None,
        }
    }

    /// Applies the flags over the suite defaults and validates the result.
    pub fn resolve(args: &CheckArgs) -> Result<Self, CliError> {
        let mut cfg = SuiteConfig::defaults(args.suite);
        if let Some(IntList(k)) = &args.k {
            cfg.weights = k
                .iter()
                .map(|&k| u32::try_from(k).map_err(|_| CliError::Core(Error::InvalidWeight(k as i64))))
                .collect::<Result<_, _>>()?;
        }
        if let Some(IntList(p)) = &args.primes {
            cfg.primes = p.clone();
        }
        if let Some(t) = args.trace {
            cfg.trace = t;
        }
        if let Some(h) = args.height {
            cfg.policy.height = h;
        }
        if let Some(m) = args.m_max {
            cfg.policy.m_max = m;
        }
        if let Some(s) = args.s {
            cfg.s = s;
        }
        if let Some(z) = args.z {
            cfg.z = z;
        }
        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        if let Some(c) = args.count {
            cfg.count = c;
        }
        if let Some(v) = args.variant {
            cfg.variant = v;
        }
        if args.input.is_some() {
            if args.suite != Suite::BowtieExact {
                return Err(CliError::Config(format!("{}: --input applies to bowtie-exact only", args.suite.name())));
            }
            cfg.input = args.input.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for &k in &self.weights {
            if k < 4 || k % 2 != 0 {
                return Err(Error::InvalidWeight(k as i64).into());
            }
        }
        for &p in &self.primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p).into());
            }
        }
        let max_p = self.primes.iter().copied().max().unwrap_or(1);
        match self.suite {
            Suite::BowtieExact => {
                self.require(!self.weights.is_empty() && !self.primes.is_empty(), "needs weights and primes")?;
                self.require(self.trace >= 1, "window --trace must be positive")?;
            }
            Suite::MaassRandom => {
                self.require(!self.primes.is_empty(), "needs primes")?;
                self.require(self.count >= 1, "--count must be positive")?;
                if self.trace < max_p {
                    return Err(Error::Truncation { have: self.trace, need: max_p }.into());
                }
            }
            Suite::Klingen => {
                self.require(self.weights == [12], "the Klingen-type control has weight 12")?;
                self.require(!self.primes.is_empty(), "needs primes")?;
                if self.trace < max_p {
                    return Err(Error::Truncation { have: self.trace, need: max_p }.into());
                }
            }
            Suite::NumericBowtie | Suite::Decomposition | Suite::EigenRatio => {
                self.require(self.weights.len() == 1, "numeric suites take exactly one weight")?;
                self.require(self.suite == Suite::Decomposition || !self.primes.is_empty(), "needs primes")?;
                self.require(self.policy.height >= 2, "--height must be at least 2 so that half height is defined")?;
                self.policy.validate()?;
                check_weight(self.weights[0], self.s, 2)?;
                SiegelPoint::new(self.z, self.s)?;
                if self.suite == Suite::NumericBowtie {
                    self.require(self.trace >= 2, "Klingen control truncation --trace must be at least 2")?;
                }
            }
        }
        Ok(())
    }

    fn require(&self, ok: bool, what: &str) -> Result<(), CliError> {
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(format!("{}: {what}", self.suite.name())))
        }
    }
}

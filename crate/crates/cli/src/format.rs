//! JSON file formats. Rationals are strings `"p/q"` (or `"p"`); zero
//! coefficients are omitted and entries are sorted by index.

use std::path::Path;

use bowtie_core::bowtie::BowtieReport;
use bowtie_core::elliptic::QExpansion;
use bowtie_core::exactnum::{format_rational, parse_rational};
use bowtie_core::siegel2::{HalfIntegralIndex, SiegelExpansion};
use bowtie_core::Rational;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QExpansionFile {
    pub weight: u32,
    pub trunc: u64,
    pub coeffs: Vec<(u64, String)>,
}

impl QExpansionFile {
    pub fn from_expansion(f: &QExpansion) -> Self {
        QExpansionFile {
            weight: f.weight(),
            trunc: f.trunc(),
            coeffs: f.nonzero().map(|(n, a)| (n, format_rational(a))).collect(),
        }
    }

    pub fn to_expansion(&self) -> Result<QExpansion, CliError> {
        let coeffs = self.coeffs.iter().map(|(n, a)| Ok((*n, rational(a)?))).collect::<Result<Vec<_>, CliError>>()?;
        Ok(QExpansion::from_coeffs(self.weight, self.trunc, coeffs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiegelExpansionFile {
    pub weight: u32,
    pub trace_trunc: u64,
    pub coeffs: Vec<(i64, i64, i64, String)>,
}

impl SiegelExpansionFile {
    pub fn from_expansion(f: &SiegelExpansion) -> Self {
        let mut coeffs: Vec<_> = f.nonzero().map(|(i, a)| (i.n, i.r, i.m, format_rational(a))).collect();
        coeffs.sort();
        SiegelExpansionFile { weight: f.weight(), trace_trunc: f.trace_trunc(), coeffs }
    }

    pub fn to_expansion(&self) -> Result<SiegelExpansion, CliError> {
        let mut f = SiegelExpansion::new(self.weight, self.trace_trunc);
        for (n, r, m, a) in &self.coeffs {
            f.set(HalfIntegralIndex::new(*n, *r, *m), rational(a)?)?;
        }
        Ok(f)
    }
}

/// `{"weight", "prime", "window", "checked", "violations": [[n, r, m, "lhs", "rhs"]], "pass"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowtieReportFile {
    pub weight: u32,
    pub prime: u64,
    pub window: u64,
    pub checked: usize,
    pub violations: Vec<(i64, i64, i64, String, String)>,
    pub pass: bool,
}

impl From<&BowtieReport> for BowtieReportFile {
    fn from(r: &BowtieReport) -> Self {
        BowtieReportFile {
            weight: r.weight,
            prime: r.prime,
            window: r.window,
            checked: r.checked,
            violations: r
                .violations
                .iter()
                .map(|v| (v.index.n, v.index.r, v.index.m, format_rational(&v.lhs), format_rational(&v.rhs)))
                .collect(),
            pass: r.pass(),
        }
    }
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Config(format!("not a rational number: {s:?}")))
}

pub fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

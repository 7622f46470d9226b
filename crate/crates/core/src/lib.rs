//! Exact and floating-point kernels for degree-2 Eisenstein series.
//!
//! The crate is split along the two halves of the problem:
//!
//! * [`exactnum`], [`elliptic`], [`siegel2`] and [`bowtie`] work with exact
//!   rationals. They build Fourier expansions of elliptic and degree-2 Siegel
//!   modular forms and test the strong symmetry identity coefficient by
//!   coefficient.
//! * [`analytic`] evaluates real-analytic Eisenstein series and their
//!   subseries as truncated coset sums in binary64.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and threaded execution live in the `bowtie` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod bowtie;
pub mod elliptic;
mod error;
pub mod exactnum;
pub mod siegel2;

pub use error::Error;
pub use exactnum::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

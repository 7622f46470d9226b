//! Thread pool plumbing. Work is striped over threads and the results are put
//! back in job order, so every reduction sees the same partials as the
//! sequential executor and sums are bit-identical for any thread count.

use std::num::NonZeroUsize;

use bowtie_core::analytic::sum::ComplexSum;
use bowtie_core::analytic::Executor;

use crate::CliError;

pub const THREADS_VAR: &str = "BOWTIE_THREADS";

/// Maps `f` over `items` on up to `threads` scoped threads; results are in
/// item order.
pub fn par_map<T, R, F>(threads: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let n = threads.min(items.len());
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = (0..n)
            .map(|t| {
                s.spawn(move || items.iter().enumerate().skip(t).step_by(n).map(|(i, x)| (i, f(x))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker thread panicked") {
                out[i] = Some(r);
            }
        }
    });
    out.into_iter().map(|r| r.expect("every job ran")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Threaded { threads: threads.max(1) }
    }

    /// Reads the cap from `BOWTIE_THREADS`; without it, uses the available
    /// parallelism.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(THREADS_VAR) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Threaded::new(n)),
                _ => Err(CliError::Config(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
            },
            Err(std::env::VarError::NotPresent) => {
                Ok(Threaded::new(std::thread::available_parallelism().map_or(1, NonZeroUsize::get)))
            }
            Err(e) => Err(CliError::Config(format!("{THREADS_VAR}: {e}"))),
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl Executor for Threaded {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> ComplexSum + Sync)) -> Vec<ComplexSum> {
        let ids: Vec<usize> = (0..jobs).collect();
        par_map(self.threads, &ids, |&j| job(j))
    }
}

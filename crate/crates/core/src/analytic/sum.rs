//! Deterministic compensated summation.
//!
//! Terms are grouped into fixed-size chunks; each chunk is summed with
//! Neumaier's algorithm and the chunk partials are combined in index order.
//! The chunk partition never depends on the executor, so every executor
//! returns bit-identical sums.

use alloc::vec::Vec;

use num_complex::Complex64;

/// Number of terms per chunk.
pub const CHUNK: usize = 256;

/// Neumaier running sum of `f64`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: Compensated,
    im: Compensated,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Runs independent jobs and returns their results in job order.
pub trait Executor: Sync {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> ComplexSum + Sync)) -> Vec<ComplexSum>;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> ComplexSum + Sync)) -> Vec<ComplexSum> {
        (0..jobs).map(job).collect()
    }
}

/// `sum_{i < count} term(i)` in chunked compensated order.
pub fn sum_terms<F>(exec: &dyn Executor, count: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let jobs = count.div_ceil(CHUNK);
    let chunk = |j: usize| {
        let mut acc = ComplexSum::default();
        for i in j * CHUNK..((j + 1) * CHUNK).min(count) {
            acc.add(term(i));
        }
        acc
    };
    let partials = exec.run(jobs, &chunk);
    let mut total = ComplexSum::default();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut c = Compensated::default();
        c.add(1.0);
        for _ in 0..10_000 {
            c.add(1e-16);
        }
        c.add(-1.0);
        assert!((c.value() - 1e-12).abs() < 1e-20);
    }

    #[test]
    fn chunked_sum_matches_direct() {
        let s = sum_terms(&Sequential, 1000, |i| Complex64::new(i as f64, -(i as f64)));
        assert_eq!(s, Complex64::new(499_500.0, -499_500.0));
        assert_eq!(sum_terms(&Sequential, 0, |_| Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0));
    }
}

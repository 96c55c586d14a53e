//! Compensated (Neumaier) accumulation.
//!
//! Long sums are split into chunks of [`CHUNK`] terms; each chunk is summed
//! with its own compensated accumulator and the chunk totals are combined in
//! index order. The result therefore does not depend on how chunks are
//! scheduled.

use core::ops::{Add, AddAssign};
use num_complex::Complex64;

/// Fixed chunk length for long sums.
pub const CHUNK: usize = 1 << 16;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, rhs: f64) {
        self.push(rhs);
    }
}

impl Add for Neumaier {
    type Output = Neumaier;

    fn add(mut self, rhs: Self) -> Self {
        self.push(rhs.sum);
        self.push(rhs.comp);
        self
    }
}

/// Compensated complex sum (independent real and imaginary accumulators).
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub const fn new() -> Self {
        Self { re: Neumaier::new(), im: Neumaier::new() }
    }

    #[inline]
    pub fn push(&mut self, z: Complex64) {
        self.re.push(z.re);
        self.im.push(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexNeumaier {
    fn add_assign(&mut self, rhs: Complex64) {
        self.push(rhs);
    }
}

/// Chunked accumulator: terms go into the current chunk, full chunks are
/// folded into the running total in order.
#[derive(Debug, Default, Clone, Copy)]
pub struct ChunkedSum {
    total: ComplexNeumaier,
    chunk: ComplexNeumaier,
    filled: usize,
}

impl ChunkedSum {
    pub const fn new() -> Self {
        Self { total: ComplexNeumaier::new(), chunk: ComplexNeumaier::new(), filled: 0 }
    }

    #[inline]
    pub fn push(&mut self, z: Complex64) {
        self.chunk.push(z);
        self.filled += 1;
        if self.filled == CHUNK {
            self.flush();
        }
    }

    fn flush(&mut self) {
        self.total.push(self.chunk.value());
        self.chunk = ComplexNeumaier::new();
        self.filled = 0;
    }

    /// Current value, including the partially filled chunk.
    pub fn value(&self) -> Complex64 {
        let mut t = self.total;
        t.push(self.chunk.value());
        t.value()
    }
}

/// Compensated sum of real terms in fixed chunk order.
pub fn sum_real<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = ChunkedSum::new();
    for x in terms {
        acc.push(Complex64::new(x, 0.0));
    }
    acc.value().re
}

/// Compensated sum of complex terms in fixed chunk order.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(terms: I) -> Complex64 {
    let mut acc = ChunkedSum::new();
    for z in terms {
        acc.push(z);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_real(terms), 2.0);
    }

    #[test]
    fn harmonic_partial_sum_matches_pairwise_reference() {
        // sum_{k=1}^{2^20} 1/k, reference from the digamma asymptotic
        let n = 1u64 << 20;
        let s = sum_real((1..=n).map(|k| 1.0 / k as f64));
        let x = n as f64;
        let reference = libm::log(x) + 0.577_215_664_901_532_9 + 0.5 / x - 1.0 / (12.0 * x * x);
        assert!((s - reference).abs() < 1e-13, "{s} vs {reference}");
    }

    #[test]
    fn chunk_boundaries_do_not_change_result() {
        let mut a = ChunkedSum::new();
        for k in 0..(3 * CHUNK + 17) {
            a.push(Complex64::new(1.0 / (k as f64 + 1.0), 0.5));
        }
        let direct = sum_complex((0..(3 * CHUNK + 17)).map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.5)));
        assert_eq!(a.value(), direct);
    }
}

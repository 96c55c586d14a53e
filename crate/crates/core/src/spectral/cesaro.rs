//! The Cesàro operator (Cx)_n = (1/(n+1)) Σ_{i≤n} x_i.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::sequence::{SequenceKind, SpectralSequence};
use crate::numeric::sum::ChunkedSum;

/// Running means of a sequence, as a sequence.
///
/// Each value is computed on demand from a fresh compensated sum, so random
/// access costs O(n); use [`CesaroIter`] to stream.
pub fn cesaro(x: &SpectralSequence) -> SpectralSequence {
    let inner = x.clone();
    let kind = match x.kind() {
        SequenceKind::SingularValue => SequenceKind::SingularValue,
        _ => SequenceKind::Diagonal,
    };
    SpectralSequence::new(format!("cesaro({})", x.label()), kind, move |n| {
        let mut acc = ChunkedSum::new();
        for i in 0..=n {
            acc.push(inner.at(i));
        }
        acc.value() / (n as f64 + 1.0)
    })
}

/// Streaming running means.
pub struct CesaroIter<I> {
    inner: I,
    acc: ChunkedSum,
    count: u64,
}

impl<I: Iterator<Item = Complex64>> CesaroIter<I> {
    pub fn new(inner: I) -> Self {
        Self { inner, acc: ChunkedSum::new(), count: 0 }
    }
}

impl<I: Iterator<Item = Complex64>> Iterator for CesaroIter<I> {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        let x = self.inner.next()?;
        self.acc.push(x);
        self.count += 1;
        Some(self.acc.value() / self.count as f64)
    }
}

/// Running means of a real slice.
pub fn cesaro_means(x: &[f64]) -> Vec<f64> {
    CesaroIter::new(x.iter().map(|&v| Complex64::new(v, 0.0))).map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_is_fixed() {
        let c = cesaro(&SpectralSequence::real("c", SequenceKind::Diagonal, |_| 2.5));
        for n in [0, 1, 10, 1000] {
            assert_eq!(c.real_at(n), 2.5);
        }
    }

    #[test]
    fn alternating_means_vanish() {
        let c = cesaro(&SpectralSequence::real("alt", SequenceKind::Diagonal, |n| if n % 2 == 0 { 1.0 } else { -1.0 }));
        assert!(c.real_at(9999).abs() < 1e-3);
        assert_eq!(c.real_at(1000), 1.0 / 1001.0);
    }

    #[test]
    fn arithmetic_series() {
        let c = cesaro(&SpectralSequence::real("n+1", SequenceKind::Diagonal, |n| n as f64 + 1.0));
        for n in [0u64, 5, 77] {
            assert_eq!(c.real_at(n), (n as f64 + 2.0) / 2.0);
        }
    }

    #[test]
    fn streaming_matches_random_access() {
        let x = SpectralSequence::harmonic();
        let c = cesaro(&x);
        let streamed: Vec<_> = CesaroIter::new((0..200).map(|n| x.at(n))).collect();
        for n in [0usize, 17, 199] {
            assert_eq!(streamed[n], c.at(n as u64));
        }
    }

    proptest! {
        #[test]
        fn convergent_inputs_keep_their_limit(limit in -10.0f64..10.0, amp in -5.0f64..5.0) {
            // x_n = c + a/(n+1): |Cx_n − c| ≤ |a|·(1 + log(n+1))/(n+1)
            let x: Vec<f64> = (0..20_000).map(|n| limit + amp / (n as f64 + 1.0)).collect();
            let m = cesaro_means(&x);
            let n = m.len() - 1;
            let bound = amp.abs() * (1.0 + libm::log(n as f64 + 1.0)) / (n as f64 + 1.0) + 1e-12;
            prop_assert!((m[n] - limit).abs() <= bound);
        }
    }
}

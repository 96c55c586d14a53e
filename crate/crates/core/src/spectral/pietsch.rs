//! The Pietsch operator D_g: x ↦ diag(x_n·g(2^n) repeated 2^n times).

use alloc::format;

use super::sequence::{block_of, BoundedSequence, SequenceKind, SpectralSequence, TailModel};
use super::weight::WeightFamily;

/// Blocks checked when deciding whether D_g x is already sorted.
const KIND_CHECK_BLOCKS: u64 = 256;

pub fn pietsch_operator(x: &BoundedSequence, w: WeightFamily) -> SpectralSequence {
    let value = {
        let x = x.clone();
        move |n: u64| x.at(n) * w.g(libm::exp2(n as f64))
    };
    let sorted = (0..KIND_CHECK_BLOCKS).all(|n| value(n) >= 0.0 && (n == 0 || value(n) <= value(n - 1)));
    let kind = if sorted { SequenceKind::SingularValue } else { SequenceKind::Diagonal };
    SpectralSequence::real(format!("pietsch:{}:{}", x.label(), w.label()), kind, move |j| value(block_of(j) as u64))
        .with_tail(TailModel::Pietsch { x: x.clone(), weight: w })
}

/// a_n = 2^n·x_n·g(2^n), the n-th dyadic block of D_g x.
pub fn pietsch_block(x: &BoundedSequence, w: WeightFamily, n: u64) -> f64 {
    x.at(n) * w.profile(n as f64 * core::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::sum::sum_real;

    #[test]
    fn constant_input_on_g0() {
        let d = pietsch_operator(&BoundedSequence::constant(1.0), WeightFamily::gk(0));
        assert_eq!(d.kind(), SequenceKind::SingularValue);
        for n in 0..20u64 {
            let start = (1u64 << n) - 1;
            let block = sum_real((start..start + (1 << n)).map(|j| d.real_at(j)));
            let expected = libm::exp2(n as f64) / (libm::exp2(n as f64) + 2.0);
            assert!((block - expected).abs() < 1e-12, "n={n}");
        }
        assert!((d.real_at(0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn indicator_is_rank_one() {
        let w = WeightFamily::gk(1);
        let d = pietsch_operator(&BoundedSequence::indicator(0), w);
        assert_eq!(d.real_at(0), w.g(1.0));
        for j in 1..100 {
            assert_eq!(d.real_at(j), 0.0);
        }
    }

    #[test]
    fn g1_blocks_grow_like_n_log_two() {
        let w = WeightFamily::gk(1);
        let x = BoundedSequence::constant(1.0);
        for n in [10u64, 20, 40] {
            let a = pietsch_block(&x, w, n);
            let approx = n as f64 * core::f64::consts::LN_2;
            assert!((a / approx - 1.0).abs() < 2.0 / libm::exp2(n as f64) + 1e-12, "n={n}");
        }
    }

    #[test]
    fn block_formula_matches_entries() {
        let w = WeightFamily::gk(2);
        let x = BoundedSequence::alternating();
        let d = pietsch_operator(&x, w);
        assert_eq!(d.kind(), SequenceKind::Diagonal);
        for n in 0..12u64 {
            let start = (1u64 << n) - 1;
            let direct = sum_real((start..start + (1 << n)).map(|j| d.real_at(j)));
            assert!((direct - pietsch_block(&x, w, n)).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }
}

//! Numerical index of regular variation.

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RvIndex {
    /// log(f(λt)/f(t))/log λ at the largest grid point.
    pub estimate: f64,
    /// Max − min of the same quantity over the trailing half of the grid.
    pub spread: f64,
    pub local: Vec<(f64, f64)>,
}

/// Estimates α with f(λt)/f(t) → λ^α along `grid` (increasing).
pub fn rv_index_estimate(f: impl Fn(f64) -> f64, grid: &[f64], lambda: f64) -> Option<RvIndex> {
    if grid.is_empty() || lambda <= 0.0 || lambda == 1.0 {
        return None;
    }
    let ll = libm::log(lambda);
    let local: Vec<(f64, f64)> = grid.iter().map(|&t| (t, libm::log(f(lambda * t) / f(t)) / ll)).collect();
    let estimate = local.last()?.1;
    let window = &local[local.len() / 2..];
    let (lo, hi) = window.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
    Some(RvIndex { estimate, spread: hi - lo, local })
}

/// ratio^lo, ratio^(lo+1), …, ratio^hi.
pub fn geometric_grid(ratio: f64, lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|m| libm::pow(ratio, m as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::WeightFamily;

    #[test]
    fn power_functions() {
        let grid = geometric_grid(2.0, 4, 20);
        let r = rv_index_estimate(|t| 1.0 / t, &grid, 2.0).unwrap();
        assert_eq!(r.estimate, -1.0);
        assert_eq!(r.spread, 0.0);
        let r = rv_index_estimate(libm::sqrt, &grid, 4.0).unwrap();
        assert!((r.estimate - 0.5).abs() < 1e-15);
    }

    #[test]
    fn g1_primitive_in_exponential_scale() {
        let w = WeightFamily::gk(1);
        let grid = geometric_grid(2.0, 10, 20);
        let r = rv_index_estimate(|u| w.primitive_at_exp(u), &grid, 2.0).unwrap();
        assert!((r.estimate - 2.0).abs() < 1e-12);
    }

    #[test]
    fn slowly_varying_log() {
        let grid = geometric_grid(2.0, 10, 40);
        let r = rv_index_estimate(libm::log, &grid, 2.0).unwrap();
        assert!(r.estimate.abs() < 0.04);
        assert!(r.spread > 0.0);
    }

    #[test]
    fn rejects_unit_lambda() {
        assert!(rv_index_estimate(|t| t, &[1.0], 1.0).is_none());
    }
}

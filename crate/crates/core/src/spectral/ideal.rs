//! Membership in principal ideals I_g.

use alloc::vec::Vec;

use super::sequence::{SequenceKind, SpectralSequence};
use super::weight::WeightFamily;
use crate::error::{Error, Result};

/// sup_{n<N} μ(n)/g(n + shift_a).
pub fn quasi_norm_estimate(mu: &SpectralSequence, w: WeightFamily, n: u64) -> Result<f64> {
    if mu.kind() != SequenceKind::SingularValue {
        return Err(Error::KindMismatch("quasi-norm needs a singular-value sequence"));
    }
    let mut best: f64 = 0.0;
    for j in 0..n {
        let g = w.shifted(j as f64);
        if g <= 0.0 {
            return Err(Error::ZeroWeight { t: j as f64 + w.shift_a() });
        }
        best = best.max(mu.real_at(j) / g);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Membership {
    Inside,
    OutsideTrend,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MembershipReport {
    pub verdict: Membership,
    pub quasi_norm: f64,
    /// Max of μ(n)/g(n) over each doubling window [w·2^i, w·2^{i+1}).
    pub window_maxima: Vec<f64>,
    /// Ratios of consecutive window maxima.
    pub growth: Vec<f64>,
    pub tolerance: f64,
}

/// Default growth tolerance per doubling.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-2;

/// Doubling-window trend test of μ(n)/g(n) over n < N.
pub fn ideal_membership(mu: &SpectralSequence, w: WeightFamily, n: u64, window: u64) -> Result<MembershipReport> {
    ideal_membership_with_tolerance(mu, w, n, window, MEMBERSHIP_TOLERANCE)
}

pub fn ideal_membership_with_tolerance(
    mu: &SpectralSequence,
    w: WeightFamily,
    n: u64,
    window: u64,
    tolerance: f64,
) -> Result<MembershipReport> {
    if window < 2 || n < window {
        return Err(Error::InvalidArgument(alloc::format!("need N ≥ window ≥ 2, got N={n}, window={window}")));
    }
    let quasi_norm = quasi_norm_estimate(mu, w, n)?;
    let mut window_maxima = Vec::new();
    let mut lo = window;
    while lo < n {
        let hi = (2 * lo).min(n);
        let mut m: f64 = 0.0;
        for j in lo..hi {
            m = m.max(mu.real_at(j) / w.shifted(j as f64));
        }
        window_maxima.push(m);
        lo *= 2;
    }
    let growth: Vec<f64> = window_maxima
        .windows(2)
        .map(|p| match (p[0], p[1]) {
            (a, b) if a == 0.0 && b == 0.0 => 1.0,
            (0.0, _) => f64::INFINITY,
            (a, b) => b / a,
        })
        .collect();
    let tail = &growth[growth.len().saturating_sub(3)..];
    let verdict = if quasi_norm == 0.0 {
        Membership::Inside
    } else if tail.len() == 3 && tail.iter().all(|&f| f >= 1.0 + tolerance) {
        Membership::OutsideTrend
    } else if !tail.is_empty() && tail.iter().all(|&f| f < 1.0 + tolerance) && quasi_norm.is_finite() {
        Membership::Inside
    } else {
        Membership::Inconclusive
    };
    Ok(MembershipReport { verdict, quasi_norm, window_maxima, growth, tolerance })
}

//! Dixmier traces, dyadic Lidskii profiles and Banach-limit integrands.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::quad::{composite, gauss_legendre};
use crate::numeric::special::{factorial, gamma, upper_incomplete_gamma};
use crate::numeric::sum::{ChunkedSum, ComplexNeumaier, Neumaier};
use crate::spectral::cesaro::cesaro_means;
use crate::spectral::limit::{ComplexEstimate, Verdict};
use crate::spectral::sequence::{BoundedSequence, Profile, SpectralSequence, TailModel};
use crate::spectral::weight::WeightFamily;

/// Verdict tolerance for normalized partial sums.
pub const DIXMIER_TOLERANCE: f64 = 0.05;
/// Truncation tolerance for series.
pub const SERIES_TOLERANCE: f64 = 1e-6;
/// Last dyadic block summed term by term (its end is index 2^24 − 2).
pub const DIRECT_BLOCK_MAX: u32 = 23;
/// Series in the Banach integrands are cut off after this many terms.
const MAX_SERIES_TERMS: u64 = 1 << 26;

/// Checkpoints n = 2^m − 1 for m_min ≤ m ≤ m_max.
pub fn checkpoint_grid(m_min: u32, m_max: u32) -> Vec<u64> {
    (m_min..=m_max).map(|m| (1u64 << m) - 1).collect()
}

/// Partial sums Σ_{j≤n} λ_j at every grid point plus the first `n_blocks`
/// dyadic blocks, in one compensated pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub partial_sums: Vec<(u64, Complex64)>,
    pub blocks: Vec<Complex64>,
}

pub fn scan(lambda: &SpectralSequence, grid: &[u64], n_blocks: u32) -> Result<Scan> {
    let block_end = if n_blocks == 0 { 0 } else { (1u64 << n_blocks) - 1 };
    let grid_end = grid.iter().max().map_or(0, |&n| n + 1);
    let end = block_end.max(grid_end);
    if let Some(len) = lambda.available() {
        if end > len {
            return Err(Error::PrefixTooShort { len: len as usize, needed: end as usize });
        }
    }
    let zero_from = lambda.support().unwrap_or(u64::MAX);
    let mut blocks = Vec::with_capacity(n_blocks as usize);
    let mut partial_sums = Vec::with_capacity(grid.len());
    let mut sorted_grid: Vec<u64> = grid.to_vec();
    sorted_grid.sort_unstable();
    let mut next_cp = 0;
    let mut total = ChunkedSum::new();
    let mut block = ChunkedSum::new();
    let mut block_index = 0u32;
    let mut next_block_end = 0u64; // last index of block `block_index`
    for j in 0..end {
        let x = if j >= zero_from { Complex64::new(0.0, 0.0) } else { lambda.at(j) };
        total.push(x);
        if block_index < n_blocks {
            block.push(x);
            if j == next_block_end {
                blocks.push(block.value());
                block = ChunkedSum::new();
                block_index += 1;
                next_block_end = (1u64 << (block_index + 1)) - 2;
            }
        }
        while next_cp < sorted_grid.len() && sorted_grid[next_cp] == j {
            partial_sums.push((j, total.value()));
            next_cp += 1;
        }
    }
    // restore the caller's grid order
    let partial_sums =
        grid.iter().map(|n| *partial_sums.iter().find(|(m, _)| m == n).expect("grid point scanned")).collect();
    Ok(Scan { partial_sums, blocks })
}

/// S_n = (1/G(n+1)) Σ_{j≤n} λ_j on the grid, with extrapolation on
/// S_n ≈ c + b/G(n+1).
pub fn partial_sum_ratios(
    lambda: &SpectralSequence,
    w: WeightFamily,
    grid: &[u64],
    tolerance: f64,
) -> Result<ComplexEstimate> {
    let s = scan(lambda, grid, 0)?;
    Ok(ratios_from_sums(&s.partial_sums, w, tolerance))
}

fn ratios_from_sums(sums: &[(u64, Complex64)], w: WeightFamily, tolerance: f64) -> ComplexEstimate {
    let pts: Vec<(f64, Complex64)> = sums.iter().map(|&(n, s)| (n as f64, s / w.primitive(n as f64 + 1.0))).collect();
    ComplexEstimate::from_checkpoints(&pts, move |n| 1.0 / w.primitive(n + 1.0), tolerance)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DyadicProfile {
    pub weight: WeightFamily,
    pub n_max: u32,
    /// a_n for n = 0..=n_max.
    pub blocks: Vec<Complex64>,
    /// a_n / (2^n g(2^n)).
    pub normalized: Vec<Complex64>,
    /// Error bound per block: 0 for blocks summed term by term.
    pub bounds: Vec<f64>,
    /// Blocks up to this index were summed directly.
    pub direct_through: u32,
}

impl DyadicProfile {
    fn from_blocks(w: WeightFamily, blocks: Vec<Complex64>, bounds: Vec<f64>, direct_through: u32) -> Self {
        let normalized = blocks.iter().enumerate().map(|(n, a)| a / w.profile(n as f64 * LN_2)).collect();
        Self { weight: w, n_max: blocks.len().saturating_sub(1) as u32, blocks, normalized, bounds, direct_through }
    }
}

/// Dyadic blocks a_n = Σ_{j=2^n−1}^{2^{n+1}−2} λ_j for n ≤ n_max.
///
/// Blocks are summed term by term through [`DIRECT_BLOCK_MAX`] (or as far as
/// a prefix-only sequence reaches) and taken from the tail model beyond.
pub fn dyadic_profile(lambda: &SpectralSequence, w: WeightFamily, n_max: u32) -> Result<DyadicProfile> {
    let mut direct = n_max.min(DIRECT_BLOCK_MAX);
    if let Some(len) = lambda.available() {
        // blocks 0..=d end at 2^{d+1} − 2
        let reach = 63 - (len + 1).leading_zeros(); // largest d + 1 with 2^{d+1} − 1 ≤ len
        if reach == 0 {
            return Err(Error::InsufficientBlocks { needed: n_max as u64 + 1, available: 0 });
        }
        direct = direct.min(reach - 1);
    }
    let s = scan(lambda, &[], direct + 1)?;
    let mut blocks = s.blocks;
    let mut bounds = alloc::vec![0.0; blocks.len()];
    for n in (direct + 1)..=n_max {
        match model_block(lambda.tail(), n as u64) {
            Some((v, b)) => {
                blocks.push(v);
                bounds.push(b);
            }
            None => return Err(Error::InsufficientBlocks { needed: n_max as u64 + 1, available: blocks.len() as u64 }),
        }
    }
    Ok(DyadicProfile::from_blocks(w, blocks, bounds, direct))
}

/// Block n from the analytic tail model: value and error bound.
pub fn model_block(tail: &TailModel, n: u64) -> Option<(Complex64, f64)> {
    match tail {
        TailModel::Finite => Some((Complex64::new(0.0, 0.0), 0.0)),
        TailModel::Smooth { profile, scale } => {
            let (v, b) = smooth_block(profile, n);
            Some((Complex64::new(scale * v, 0.0), scale.abs() * b))
        }
        TailModel::Pietsch { x, weight } => {
            Some((Complex64::new(crate::spectral::pietsch::pietsch_block(x, *weight, n), 0.0), 0.0))
        }
        TailModel::Modulated { v, base } => match base.as_ref() {
            TailModel::Smooth { profile, scale } if profile.is_monotone() => {
                let (bv, bb) = smooth_block(profile, n);
                let first = first_in_block(profile, n);
                let value = v.mean() * (scale * bv);
                let bound = v.mean().norm() * scale.abs() * bb + 2.0 * v.spread() * scale.abs() * first;
                Some((value, bound))
            }
            TailModel::Pietsch { x, weight } => {
                let c = x.at(n) * weight.g(libm::exp2(n as f64));
                if n < 63 {
                    let start = (1u64 << n) - 1;
                    let len = 1u64 << n;
                    Some((c * periodic_window_sum(&v.period, start, len), 0.0))
                } else {
                    let mean_part = v.mean() * c * libm::exp2(n as f64);
                    Some((mean_part, 2.0 * v.spread() * c.abs()))
                }
            }
            TailModel::Finite => Some((Complex64::new(0.0, 0.0), 0.0)),
            _ => None,
        },
        TailModel::ClosedTotal(_) | TailModel::Unknown => None,
    }
}

pub(crate) fn periodic_window_sum(period: &[Complex64], start: u64, len: u64) -> Complex64 {
    let p = period.len() as u64;
    let full = len / p;
    let mut acc = ComplexNeumaier::new();
    let cycle: Complex64 = period.iter().sum();
    acc.push(cycle * full as f64);
    let rest = len % p;
    for i in 0..rest {
        acc.push(period[((start + full * p + i) % p) as usize]);
    }
    acc.value()
}

// f(2^n − 1) = density(n log 2)·2^{−n}
fn first_in_block(profile: &Profile, n: u64) -> f64 {
    let u = n as f64 * LN_2;
    profile.density(u) * libm::exp2(-(n as f64))
}

/// Σ_{x=2^n}^{2^{n+1}−1} f(x−1) by Euler–Maclaurin in u = log x.
fn smooth_block(profile: &Profile, n: u64) -> (f64, f64) {
    let a = n as f64 * LN_2;
    let b = a + LN_2;
    let d = |u: f64| profile.density(u);
    let coarse = gauss_legendre(&d, a, b);
    let fine = composite(&d, a, b, 2);
    let fa = profile.density(a) * libm::exp2(-(n as f64));
    let fb = profile.density(b) * libm::exp2(-(n as f64) - 1.0);
    let value = fine + 0.5 * (fa - fb);
    let bound = (fine - coarse).abs() + fa * libm::exp2(-(n as f64)) + 4.0 * f64::EPSILON * fine.abs();
    (value, bound)
}

/// Which smoothing of the checkpoint sequence produced the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Smoothing {
    Raw,
    Cesaro1,
    Cesaro2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DixmierInterval {
    pub inf: f64,
    pub sup: f64,
    pub source: Smoothing,
    pub raw: [f64; 2],
    pub cesaro1: [f64; 2],
    pub cesaro2: [f64; 2],
}

impl DixmierInterval {
    pub fn width(&self) -> f64 {
        self.sup - self.inf
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.inf + self.sup)
    }

    /// Trailing-half windows of the raw, once- and twice-Cesàro-smoothed
    /// values; the narrowest one whose midpoint lies in the raw window wins.
    pub fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            let nan = [f64::NAN; 2];
            return Self { inf: f64::NAN, sup: f64::NAN, source: Smoothing::Raw, raw: nan, cesaro1: nan, cesaro2: nan };
        }
        let c1 = cesaro_means(values);
        let c2 = cesaro_means(&c1);
        let raw = trailing_window(values);
        let cesaro1 = trailing_window(&c1);
        let cesaro2 = trailing_window(&c2);
        let mut best = (raw, Smoothing::Raw);
        for (win, src) in [(cesaro1, Smoothing::Cesaro1), (cesaro2, Smoothing::Cesaro2)] {
            let mid = 0.5 * (win[0] + win[1]);
            let stable = mid >= raw[0] && mid <= raw[1];
            if stable && win[1] - win[0] < best.0[1] - best.0[0] {
                best = (win, src);
            }
        }
        Self { inf: best.0[0], sup: best.0[1], source: best.1, raw, cesaro1, cesaro2 }
    }
}

fn trailing_window(values: &[f64]) -> [f64; 2] {
    let w = &values[values.len() / 2..];
    let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    [lo, hi]
}

/// Real and imaginary Dixmier intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexInterval {
    pub re: DixmierInterval,
    pub im: DixmierInterval,
}

impl ComplexInterval {
    pub fn midpoint(&self) -> Complex64 {
        Complex64::new(self.re.midpoint(), self.im.midpoint())
    }

    fn within(&self, tolerance: f64) -> bool {
        [self.re, self.im].iter().all(|i| i.width() <= tolerance * i.midpoint().abs().max(1.0))
    }
}

/// Range of Dixmier-trace values over the grid.
pub fn dixmier_interval(lambda: &SpectralSequence, w: WeightFamily, grid: &[u64]) -> Result<ComplexInterval> {
    let est = partial_sum_ratios(lambda, w, grid, DIXMIER_TOLERANCE)?;
    Ok(interval_from_estimate(&est))
}

fn interval_from_estimate(est: &ComplexEstimate) -> ComplexInterval {
    let re: Vec<f64> = est.re.checkpoints.iter().map(|&(_, v)| v).collect();
    let im: Vec<f64> = est.im.checkpoints.iter().map(|&(_, v)| v).collect();
    ComplexInterval { re: DixmierInterval::from_values(&re), im: DixmierInterval::from_values(&im) }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceReport {
    pub sequence: String,
    pub weight: WeightFamily,
    pub tolerance: f64,
    pub partial_sum_estimate: ComplexEstimate,
    pub dyadic_profile: DyadicProfile,
    pub dixmier_interval: ComplexInterval,
    pub measurable: Verdict,
    /// Extrapolated limit when measurable.
    pub value: Option<Complex64>,
    pub warnings: Vec<String>,
}

/// Grid and tolerance for [`trace_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub m_min: u32,
    pub m_max: u32,
    pub tolerance: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { m_min: 4, m_max: 24, tolerance: DIXMIER_TOLERANCE }
    }
}

/// Partial sums, dyadic profile and Dixmier interval from a single scan.
pub fn trace_report(lambda: &SpectralSequence, w: WeightFamily, cfg: &TraceConfig) -> Result<TraceReport> {
    let grid = checkpoint_grid(cfg.m_min, cfg.m_max);
    let mut warnings = Vec::new();
    match lambda.envelope() {
        None => warnings.push(format!("{} has no envelope; membership in I_g is not certified", lambda.label())),
        Some(env) if env.weight.alpha() > w.alpha() => warnings.push(format!(
            "envelope {} is larger than {}; the partial sums may not be bounded",
            env.weight.label(),
            w.label()
        )),
        _ => {}
    }
    let n_blocks = match lambda.available() {
        Some(len) => cfg.m_max.min(63 - (len + 1).leading_zeros()),
        None => cfg.m_max,
    };
    let s = scan(lambda, &grid, n_blocks)?;
    let partial = ratios_from_sums(&s.partial_sums, w, cfg.tolerance);
    let bounds = alloc::vec![0.0; s.blocks.len()];
    let direct = s.blocks.len().saturating_sub(1) as u32;
    let profile = DyadicProfile::from_blocks(w, s.blocks, bounds, direct);
    let interval = interval_from_estimate(&partial);
    let measurable = interval_verdict(&interval, &partial, cfg.tolerance);
    let value = (measurable == Verdict::Converged).then(|| partial.best());
    Ok(TraceReport {
        sequence: lambda.label().into(),
        weight: w,
        tolerance: cfg.tolerance,
        partial_sum_estimate: partial,
        dyadic_profile: profile,
        dixmier_interval: interval,
        measurable,
        value,
        warnings,
    })
}

fn interval_verdict(interval: &ComplexInterval, partial: &ComplexEstimate, tolerance: f64) -> Verdict {
    if interval.within(tolerance) {
        Verdict::Converged
    } else if partial.verdict() == Verdict::DivergedRange {
        Verdict::DivergedRange
    } else {
        Verdict::Inconclusive
    }
}

/// Verdict and value (interval midpoint) for a finished report.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Measurability {
    pub verdict: Verdict,
    pub value: Complex64,
}

/// Converged iff the interval width is within `tolerance`; a converged
/// midpoint must agree with the extrapolated partial sums within
/// 2·tolerance.
pub fn measurability_verdict(report: &TraceReport, tolerance: f64) -> Result<Measurability> {
    let interval = &report.dixmier_interval;
    let verdict = interval_verdict(interval, &report.partial_sum_estimate, tolerance);
    let value = interval.midpoint();
    if verdict == Verdict::Converged {
        let extrapolated = report.partial_sum_estimate.best();
        let limit = 2.0 * tolerance * value.norm().max(1.0);
        if (value - extrapolated).norm() > limit {
            return Err(Error::InconsistentEstimates { midpoint: value.re, extrapolated: extrapolated.re, limit });
        }
    }
    Ok(Measurability { verdict, value })
}

/// One evaluation of a Banach-limit integrand at parameter t.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BanachSample {
    pub t: f64,
    /// Integrand with weight 2^n g(2^n).
    pub value: f64,
    /// Integrand with weight (2^n g(2^n))^{1+1/t}.
    pub value_power: f64,
    /// Bound on the truncation error of either value.
    pub tail_bound: f64,
    pub terms: u64,
}

/// (log 2/Γ(α+1))·(1/G(e^t))·Σ x_n 2^{−n/t} 2^n g(2^n), truncated with a
/// certified bound of [`SERIES_TOLERANCE`]·‖x‖.
pub fn banach_mean_integrand(x: &BoundedSequence, w: WeightFamily, t: f64) -> Result<BanachSample> {
    banach_mean_integrand_with_tolerance(x, w, t, SERIES_TOLERANCE)
}

pub fn banach_mean_integrand_with_tolerance(
    x: &BoundedSequence,
    w: WeightFamily,
    t: f64,
    rel_tol: f64,
) -> Result<BanachSample> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let s = 1.0 / t;
    let norm = LN_2 / (gamma(w.alpha() + 1.0) * w.primitive_at_exp(t));
    let target = rel_tol * x.sup().max(f64::MIN_POSITIVE);
    let mut acc = Neumaier::new();
    let mut acc_pow = Neumaier::new();
    let mut achieved = f64::INFINITY;
    let mut n = 0u64;
    while n < MAX_SERIES_TERMS {
        let u = n as f64 * LN_2;
        let h = w.profile(u);
        let decay = libm::exp2(-(n as f64) * s);
        let xn = x.at(n);
        acc.push(xn * decay * h);
        acc_pow.push(xn * decay * libm::pow(h, 1.0 + s));
        if n % 64 == 63 {
            let beta = w.log_profile_slope_bound(u);
            let ln_q = LN_2 * (-s + beta);
            let ln_q_pow = LN_2 * (-s + (1.0 + s) * beta);
            if ln_q < 0.0 && ln_q_pow < 0.0 {
                let q = libm::exp(ln_q);
                let q_pow = libm::exp(ln_q_pow);
                let tail = x.sup() * decay * h * q / (1.0 - q);
                let tail_pow = x.sup() * decay * libm::pow(h, 1.0 + s) * q_pow / (1.0 - q_pow);
                achieved = norm * tail.max(tail_pow);
                if achieved <= target {
                    return Ok(BanachSample {
                        t,
                        value: norm * acc.value(),
                        value_power: norm * acc_pow.value(),
                        tail_bound: achieved,
                        terms: n + 1,
                    });
                }
            }
        }
        n += 1;
    }
    Err(Error::TailBoundFailure { achieved, requested: target })
}

/// (log^{k+1}2/k!)·t^{−(k+1)}·Σ x_n 2^{−n/t}(n+1)^k with a certified tail.
pub fn bk_integrand(x: &BoundedSequence, k: u32, t: f64) -> Result<BanachSample> {
    bk_integrand_with_tolerance(x, k, t, SERIES_TOLERANCE)
}

pub fn bk_integrand_with_tolerance(x: &BoundedSequence, k: u32, t: f64, rel_tol: f64) -> Result<BanachSample> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let kf = k as f64;
    let s = LN_2 / t;
    let norm = libm::pow(LN_2, kf + 1.0) / factorial(k) * libm::pow(t, -(kf + 1.0));
    let target = rel_tol * x.sup().max(f64::MIN_POSITIVE);
    // Σ_{n≥N} e^{−sn}(n+1)^k ≤ f(N) + e^{s} s^{−(k+1)} Γ(k+1, s(N+1)) once f decreases
    let tail_at = |big_n: f64| {
        let f = libm::exp(-s * big_n + kf * libm::log(big_n + 1.0));
        let integral = libm::exp(s) * libm::pow(s, -(kf + 1.0)) * upper_incomplete_gamma(kf + 1.0, s * (big_n + 1.0));
        norm * x.sup() * (f + integral)
    };
    let mut big_n = (kf / s).ceil() + 64.0;
    while tail_at(big_n) > target {
        big_n *= 2.0;
        if big_n > MAX_SERIES_TERMS as f64 {
            return Err(Error::TailBoundFailure { achieved: tail_at(big_n), requested: target });
        }
    }
    let terms = big_n as u64;
    let mut acc = Neumaier::new();
    for n in 0..terms {
        acc.push(x.at(n) * libm::exp(-s * n as f64) * libm::pow(n as f64 + 1.0, kf));
    }
    let value = norm * acc.value();
    Ok(BanachSample { t, value, value_power: value, tail_bound: tail_at(big_n), terms })
}

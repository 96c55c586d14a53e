//! Operator zeta functions with certified tails, zeta residues, Abel means,
//! the Tauberian transfer and the three-way equivalence check.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::quad::integrate_to_infinity;
use crate::numeric::special::{factorial, gamma, upper_incomplete_gamma};
use crate::numeric::sum::{ChunkedSum, ComplexNeumaier};
use crate::numeric::zeta::hurwitz_zeta_real;
use crate::spectral::limit::{ComplexEstimate, Verdict};
use crate::spectral::order::order_eigenvalues;
use crate::spectral::sequence::{
    BoundedSequence, Modulation, PowerTotal, Profile, SequenceKind, SpectralSequence, TailModel,
};
use crate::spectral::weight::WeightFamily;
use crate::trace::{self, checkpoint_grid, dyadic_profile, periodic_window_sum, DyadicProfile, SERIES_TOLERANCE};

/// Verdict tolerance for normalized zeta samples.
pub const ZETA_TOLERANCE: f64 = 0.05;
/// Verdict tolerance for normalized Abel means.
pub const ABEL_TOLERANCE: f64 = 0.05;
/// Truncation error allowed in an Abel mean, relative to its normalizer.
pub const ABEL_TAIL_TOLERANCE: f64 = 1e-8;
const FIRST_PREFIX_LOG2: u32 = 10;
/// Largest prefix 2^26 − 1 summed term by term.
pub const MAX_PREFIX_LOG2: u32 = 26;
const MAX_MODEL_BLOCKS: u64 = 1 << 24;
// relative accuracy of the Hurwitz and incomplete-gamma evaluations
const CLOSED_FORM_REL: f64 = 1e-12;

/// Which bound certifies the remainder of a zeta sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TailForm {
    Finite,
    Hurwitz,
    IncompleteGammaGk,
    IntegralEnvelope,
    Geometric,
    ClosedTotal,
    /// Only an upper bound from the envelope; the estimate is zero.
    Envelope,
}

/// Estimator for R(N) = Σ_{j≥N} μ_j^{1+1/t}.
#[derive(Clone)]
pub enum TailDescriptor {
    Finite,
    /// μ_j = scale/(j+1): R(N) = scale^p ζ(p, N+1).
    Hurwitz {
        scale: f64,
    },
    /// μ_j = scale·g_k(j + shift): integral t^{kp+1}Γ(kp+1, log(N+shift+2)/t).
    IncompleteGammaGk {
        k: u32,
        shift: f64,
        scale: f64,
    },
    /// μ_j = scale·f(j) for a smooth profile: the integral in log(j+1).
    IntegralEnvelope {
        profile: Profile,
        scale: f64,
    },
    /// Pietsch blocks summed until a geometric ratio bound takes over.
    Geometric {
        x: BoundedSequence,
        weight: WeightFamily,
    },
    /// Σ_j μ_j^p known in closed form.
    ClosedTotal(PowerTotal),
    /// Upper bound only.
    Envelope(alloc::boxed::Box<TailDescriptor>),
}

impl core::fmt::Debug for TailDescriptor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{:?}", self.form())
    }
}

impl TailDescriptor {
    pub fn for_sequence(mu: &SpectralSequence) -> Option<TailDescriptor> {
        match Self::from_model(mu.tail()) {
            Some(d) => Some(d),
            None if matches!(mu.tail(), TailModel::Unknown) => mu.envelope().map(|env| {
                let base =
                    Self::from_model(&TailModel::Smooth { profile: Profile::Weight(env.weight), scale: env.constant })
                        .expect("smooth tails have descriptors");
                TailDescriptor::Envelope(alloc::boxed::Box::new(base))
            }),
            None => None,
        }
    }

    pub fn from_model(tail: &TailModel) -> Option<TailDescriptor> {
        match tail {
            TailModel::Finite => Some(TailDescriptor::Finite),
            TailModel::Smooth { profile: Profile::Harmonic, scale } => Some(TailDescriptor::Hurwitz { scale: *scale }),
            TailModel::Smooth { profile: Profile::Weight(WeightFamily::Gk { k }), scale } => {
                Some(TailDescriptor::IncompleteGammaGk { k: *k, shift: WeightFamily::gk(*k).shift_a(), scale: *scale })
            }
            TailModel::Smooth { profile, scale } => {
                Some(TailDescriptor::IntegralEnvelope { profile: *profile, scale: *scale })
            }
            TailModel::Pietsch { x, weight } => Some(TailDescriptor::Geometric { x: x.clone(), weight: *weight }),
            TailModel::ClosedTotal(total) => Some(TailDescriptor::ClosedTotal(total.clone())),
            TailModel::Modulated { .. } | TailModel::Unknown => None,
        }
    }

    pub fn form(&self) -> TailForm {
        match self {
            TailDescriptor::Finite => TailForm::Finite,
            TailDescriptor::Hurwitz { .. } => TailForm::Hurwitz,
            TailDescriptor::IncompleteGammaGk { .. } => TailForm::IncompleteGammaGk,
            TailDescriptor::IntegralEnvelope { .. } => TailForm::IntegralEnvelope,
            TailDescriptor::Geometric { .. } => TailForm::Geometric,
            TailDescriptor::ClosedTotal(_) => TailForm::ClosedTotal,
            TailDescriptor::Envelope(_) => TailForm::Envelope,
        }
    }

    fn monotone(&self) -> bool {
        match self {
            TailDescriptor::IntegralEnvelope { profile, .. } => profile.is_monotone(),
            _ => true,
        }
    }

    /// μ_N^p, the largest term of R(N) for monotone forms.
    fn first(&self, n: u64, p: f64) -> f64 {
        match self {
            TailDescriptor::Finite | TailDescriptor::ClosedTotal(_) => 0.0,
            TailDescriptor::Hurwitz { scale } => libm::pow(scale.abs() / (n as f64 + 1.0), p),
            TailDescriptor::IncompleteGammaGk { k, scale, .. } => {
                libm::pow(scale.abs() * WeightFamily::gk(*k).shifted(n as f64), p)
            }
            TailDescriptor::IntegralEnvelope { profile, scale } => libm::pow(scale.abs() * profile.eval(n as f64), p),
            TailDescriptor::Geometric { x, weight } => {
                let u = trace_block(n) as f64 * LN_2;
                libm::pow(x.sup() * libm::exp(weight.ln_g_at_exp(u)), p)
            }
            TailDescriptor::Envelope(base) => base.first(n, p),
        }
    }

    /// Estimate of Σ_{j≥N} v_j μ_j^{1+1/t} (v ≡ 1 when absent) and an error
    /// bound. Pietsch tails need N = 2^m − 1; `abs_tol` sets how far their
    /// block sums are carried. `None` when the form cannot produce a value
    /// on its own.
    pub fn estimate(&self, n: u64, t: f64, v: Option<&Modulation>, abs_tol: f64) -> Option<(Complex64, f64)> {
        let p = 1.0 + 1.0 / t;
        if let TailDescriptor::Geometric { x, weight } = self {
            return geometric_tail(x, *weight, n, t, v, abs_tol);
        }
        if let TailDescriptor::Envelope(base) = self {
            let (e, b) = base.estimate(n, t, None, abs_tol)?;
            let vs = v.map_or(1.0, Modulation::sup);
            return Some((Complex64::new(0.0, 0.0), vs * (e.norm() + b)));
        }
        let (est, err) = self.base_estimate(n, t)?;
        match v {
            None => Some((Complex64::new(est, 0.0), err)),
            Some(v) if self.monotone() => {
                // Σ (v_j − mean) μ_j^p is at most 2W·μ_N^p by summation by parts
                let m = v.mean();
                Some((m * est, m.norm() * err + 2.0 * v.spread() * self.first(n, p)))
            }
            Some(v) => Some((Complex64::new(0.0, 0.0), v.sup() * (est.abs() + err))),
        }
    }

    /// Upper bound on Σ_{j≥N} μ_j^{1+1/t}.
    pub fn bound(&self, n: u64, t: f64) -> Option<f64> {
        self.estimate(n, t, None, 1e-12).map(|(e, b)| e.norm() + b)
    }

    fn base_estimate(&self, n: u64, t: f64) -> Option<(f64, f64)> {
        let p = 1.0 + 1.0 / t;
        let nf = n as f64;
        match self {
            TailDescriptor::Finite => Some((0.0, 0.0)),
            TailDescriptor::Hurwitz { scale } => {
                let v = libm::pow(scale.abs(), p) * hurwitz_zeta_real(p, nf + 1.0);
                Some((v, CLOSED_FORM_REL * v))
            }
            TailDescriptor::IncompleteGammaGk { k, shift, scale } => {
                let kp = *k as f64 * p;
                let l = libm::log(nf + shift + 2.0);
                let integral = libm::pow(scale.abs(), p)
                    * libm::exp((kp + 1.0) * libm::log(t))
                    * upper_incomplete_gamma(kp + 1.0, l / t);
                let f_n = self.first(n, p);
                // ∫_N^∞ f ≤ R(N) ≤ f(N) + ∫_N^∞ f for decreasing f
                Some((integral + 0.5 * f_n, 0.5 * f_n + CLOSED_FORM_REL * integral))
            }
            TailDescriptor::IntegralEnvelope { profile, scale } => {
                let sp = libm::pow(scale.abs(), p);
                let a = libm::log(nf + 1.0);
                let integrand = |u: f64| libm::pow(profile.density(u), p) * libm::exp(-u / t);
                let (integral, quad_err) = integrate_to_infinity(&integrand, a, 1.0, 1e-16);
                let f_n = self.first(n, p);
                let variation = match profile {
                    Profile::LogLogOscillation { amp } => {
                        // |f'| ≤ ((1+amp) + amp·2π/(log 2·log 16))/(x+1)²
                        let amp = amp.abs();
                        let slope = (1.0 + amp) + amp * 2.0 * core::f64::consts::PI / (LN_2 * libm::log(16.0));
                        sp * p * libm::pow(1.0 + amp, p - 1.0) * slope / (nf + 1.0)
                    }
                    _ => f_n,
                };
                Some((sp * integral + 0.5 * f_n, 0.5 * variation + sp * quad_err))
            }
            TailDescriptor::ClosedTotal(_) | TailDescriptor::Geometric { .. } | TailDescriptor::Envelope(_) => None,
        }
    }
}

fn trace_block(j: u64) -> u32 {
    crate::spectral::sequence::block_of(j)
}

/// Σ over blocks b ≥ m of Σ_{j∈block} v_j (x_b g(2^b))^p, where N = 2^m − 1.
fn geometric_tail(
    x: &BoundedSequence,
    w: WeightFamily,
    n: u64,
    t: f64,
    v: Option<&Modulation>,
    abs_tol: f64,
) -> Option<(Complex64, f64)> {
    if !(n + 1).is_power_of_two() {
        return None;
    }
    let s = 1.0 / t;
    let p = 1.0 + s;
    let first = (n + 1).trailing_zeros() as u64;
    let vsup = v.map_or(1.0, Modulation::sup);
    let xsup = libm::pow(x.sup(), p);
    let mut acc = ComplexNeumaier::new();
    let mut err = 0.0;
    let mut b = first;
    while b < first + MAX_MODEL_BLOCKS {
        let u = b as f64 * LN_2;
        let ln_g = w.ln_g_at_exp(u);
        let xb = x.at(b);
        let xp = libm::copysign(libm::pow(xb.abs(), p), xb);
        // per-element value μ_b^p and block total 2^b μ_b^p
        let elem_ln = p * ln_g;
        let block_ln = elem_ln + u;
        match v {
            None => acc.push(Complex64::new(xp * libm::exp(block_ln), 0.0)),
            Some(v) if b < 63 => {
                let sum_v = periodic_window_sum(&v.period, (1u64 << b) - 1, 1u64 << b);
                acc.push(sum_v * (xp * libm::exp(elem_ln)));
            }
            Some(v) => {
                acc.push(v.mean() * (xp * libm::exp(block_ln)));
                err += 2.0 * v.spread() * xp.abs() * libm::exp(elem_ln);
            }
        }
        if (b - first) % 64 == 63 {
            let beta = w.log_profile_slope_bound(u);
            let ln_q = LN_2 * (-s + p * beta);
            if ln_q < 0.0 {
                let q = libm::exp(ln_q);
                let tail = vsup * xsup * libm::exp(block_ln) * q / (1.0 - q);
                if tail <= abs_tol {
                    return Some((acc.value(), err + tail));
                }
            }
        }
        b += 1;
    }
    None
}

/// One value of the operator zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZetaSample {
    pub t: f64,
    /// Σ_n v_n μ_n^{1+1/t}.
    pub raw: Complex64,
    pub tail_bound: f64,
    /// raw/G(e^t).
    pub normalized: Complex64,
    /// Terms summed directly.
    pub terms: u64,
    pub tail_form: TailForm,
}

/// Σ v_n μ(n)^{1+1/t} with a remainder certified to `rel_tol·G(e^t)`.
pub fn zeta_value(
    mu: &SpectralSequence,
    v: Option<&Modulation>,
    w: WeightFamily,
    t: f64,
    rel_tol: f64,
) -> Result<ZetaSample> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if mu.kind() != SequenceKind::SingularValue {
        return Err(Error::KindMismatch("zeta values need a nonnegative nonincreasing sequence"));
    }
    let norm = w.primitive_at_exp(t);
    if !(norm > 0.0) {
        return Err(Error::ZeroWeight { t });
    }
    let p = 1.0 + 1.0 / t;
    let target = rel_tol * norm;
    let desc = TailDescriptor::for_sequence(mu)
        .ok_or(Error::TailBoundFailure { achieved: f64::INFINITY, requested: target })?;
    let sample = |raw: Complex64, tail_bound: f64, terms: u64| ZetaSample {
        t,
        raw,
        tail_bound,
        normalized: raw / norm,
        terms,
        tail_form: desc.form(),
    };

    if let (TailDescriptor::ClosedTotal(total), None) = (&desc, v) {
        let raw = total(p);
        return Ok(sample(Complex64::new(raw, 0.0), CLOSED_FORM_REL * raw.abs(), 0));
    }
    let term = |n: u64| {
        let m = libm::pow(mu.real_at(n), p);
        v.map_or(Complex64::new(m, 0.0), |v| v.at(n) * m)
    };
    if let TailDescriptor::Finite = desc {
        let len = mu.support().unwrap_or(0);
        let mut acc = ChunkedSum::new();
        for n in 0..len {
            acc.push(term(n));
        }
        return Ok(sample(acc.value(), 0.0, len));
    }

    let mut acc = ChunkedSum::new();
    let mut done = 0u64;
    let mut achieved = f64::INFINITY;
    for m in FIRST_PREFIX_LOG2..=MAX_PREFIX_LOG2 {
        let end = (1u64 << m) - 1;
        if let Some(len) = mu.available() {
            if end > len {
                break;
            }
        }
        while done < end {
            acc.push(term(done));
            done += 1;
        }
        if let Some((est, err)) = desc.estimate(end, t, v, 0.25 * target) {
            achieved = err;
            if err <= target {
                return Ok(sample(acc.value() + est, err, done));
            }
        }
    }
    Err(Error::TailBoundFailure { achieved, requested: target })
}

/// t = 2^m for m_min ≤ m ≤ m_max.
pub fn t_grid(m_min: u32, m_max: u32) -> Vec<f64> {
    (m_min..=m_max).map(|m| libm::exp2(m as f64)).collect()
}

/// t = 2^6, …, 2^14.
pub fn default_t_grid() -> Vec<f64> {
    t_grid(6, 14)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidueReport {
    pub samples: Vec<ZetaSample>,
    /// Normalized samples, extrapolated in 1/t.
    pub estimate: ComplexEstimate,
}

/// Normalized zeta samples over a t grid.
pub fn residue_estimate(
    mu: &SpectralSequence,
    v: Option<&Modulation>,
    w: WeightFamily,
    t_grid: &[f64],
    rel_tol: f64,
) -> Result<ResidueReport> {
    let samples = t_grid.iter().map(|&t| zeta_value(mu, v, w, t, rel_tol)).collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, Complex64)> = samples.iter().map(|s| (s.t, s.normalized)).collect();
    let estimate = ComplexEstimate::from_checkpoints(&pts, |t| 1.0 / t, ZETA_TOLERANCE);
    Ok(ResidueReport { samples, estimate })
}

/// One normalized Abel mean (1/G(2^{1/(1−r)}))·Σ a_n r^n.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbelSample {
    pub r: f64,
    pub value: Complex64,
    /// Bound on the blocks beyond the profile, normalized.
    pub tail_bound: f64,
    /// Accumulated error of modelled blocks, normalized.
    pub model_bound: f64,
    pub blocks_used: u64,
}

/// Normalized Abel mean of a dyadic profile at r.
pub fn abel_sum(profile: &DyadicProfile, w: WeightFamily, r: f64) -> Result<AbelSample> {
    abel_core(profile, w, r, None)
}

fn abel_core(profile: &DyadicProfile, w: WeightFamily, r: f64, remaining_mass: Option<f64>) -> Result<AbelSample> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r must lie in (0, 1), got {r}")));
    }
    let norm = w.primitive_at_exp(LN_2 / (1.0 - r));
    if !(norm > 0.0) {
        return Err(Error::ZeroWeight { t: 1.0 / (1.0 - r) });
    }
    let ln_r = libm::log(r);
    let n_max = profile.blocks.len() as u64;
    let tail = match remaining_mass {
        Some(mass) => mass.max(0.0) * libm::exp(n_max as f64 * ln_r),
        None => {
            let c = profile.normalized.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if c == 0.0 {
                0.0
            } else {
                abel_envelope_tail(w, c, ln_r, n_max).unwrap_or(f64::INFINITY)
            }
        }
    } / norm;
    if !(tail <= ABEL_TAIL_TOLERANCE) {
        let c = profile.normalized.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let needed = abel_blocks_needed(w, c, r).unwrap_or(u64::MAX);
        return Err(Error::InsufficientBlocks { needed, available: n_max });
    }
    let mut acc = ComplexNeumaier::new();
    let mut model = 0.0;
    for (n, (a, b)) in profile.blocks.iter().zip(&profile.bounds).enumerate() {
        let rn = libm::exp(n as f64 * ln_r);
        acc.push(a * rn);
        model += b * rn;
    }
    Ok(AbelSample { r, value: acc.value() / norm, tail_bound: tail, model_bound: model / norm, blocks_used: n_max })
}

// C·Σ_{n≥n0} h_n r^n by a geometric ratio bound, h_n = 2^n g(2^n)
fn abel_envelope_tail(w: WeightFamily, c: f64, ln_r: f64, n0: u64) -> Option<f64> {
    let u = n0 as f64 * LN_2;
    let ln_q = ln_r + LN_2 * w.log_profile_slope_bound(u);
    if ln_q >= 0.0 {
        return None;
    }
    let q = libm::exp(ln_q);
    Some(c * libm::exp(u + w.ln_g_at_exp(u) + n0 as f64 * ln_r) / (1.0 - q))
}

/// Blocks needed before the envelope tail of an Abel mean at r drops below
/// [`ABEL_TAIL_TOLERANCE`].
pub fn abel_blocks_needed(w: WeightFamily, c: f64, r: f64) -> Option<u64> {
    let norm = w.primitive_at_exp(LN_2 / (1.0 - r));
    let ln_r = libm::log(r);
    let ok = |n: u64| abel_envelope_tail(w, c, ln_r, n).is_some_and(|tail| tail / norm <= ABEL_TAIL_TOLERANCE);
    let mut hi = 64u64;
    while !ok(hi) {
        hi *= 2;
        if hi > MAX_MODEL_BLOCKS {
            return None;
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// r = 1 − 2^{−m} for m_min ≤ m ≤ m_max.
pub fn abel_grid(m_min: u32, m_max: u32) -> Vec<f64> {
    (m_min..=m_max).map(|m| 1.0 - libm::exp2(-(m as f64))).collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbelScan {
    pub samples: Vec<AbelSample>,
    /// Abel means, extrapolated in 1 − r.
    pub estimate: ComplexEstimate,
}

/// Abel means of λ's dyadic blocks over r = 1 − 2^{−m}.
pub fn abel_scan(lambda: &SpectralSequence, w: WeightFamily, m_min: u32, m_max: u32) -> Result<AbelScan> {
    let grid = abel_grid(m_min, m_max);
    let r_max = grid.iter().copied().fold(0.0, f64::max);
    let direct = dyadic_profile(lambda, w, trace::DIRECT_BLOCK_MAX)?;
    let (profile, remaining) = match lambda.tail() {
        TailModel::ClosedTotal(total) => {
            let seen: f64 = direct.blocks.iter().map(|z| z.re).sum();
            (direct, Some(total(1.0) - seen))
        }
        _ => {
            let c = direct.normalized.iter().map(|z| z.norm()).fold(0.0, f64::max);
            // the profile can only certify blocks it has seen, so leave headroom
            let needed = abel_blocks_needed(w, 2.0 * c.max(f64::MIN_POSITIVE), r_max)
                .ok_or(Error::InsufficientBlocks { needed: u64::MAX, available: direct.blocks.len() as u64 })?;
            if needed as usize > direct.blocks.len() {
                (dyadic_profile(lambda, w, needed as u32)?, None)
            } else {
                (direct, None)
            }
        }
    };
    let samples = grid.iter().map(|&r| abel_core(&profile, w, r, remaining)).collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, Complex64)> = samples.iter().map(|s| (s.r, s.value)).collect();
    let estimate = ComplexEstimate::from_checkpoints(&pts, |r| 1.0 - r, ABEL_TOLERANCE);
    Ok(AbelScan { samples, estimate })
}

/// Grids and tolerance for [`tauberian_transfer_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauberConfig {
    pub abel_m_min: u32,
    pub abel_m_max: u32,
    pub cesaro_m_min: u32,
    pub cesaro_m_max: u32,
    pub tolerance: f64,
    /// K in |x_n| ≤ K (n+1)^{α−1}; estimated from the first half of the
    /// prefix when absent.
    pub growth_constant: Option<f64>,
}

impl Default for TauberConfig {
    fn default() -> Self {
        Self {
            abel_m_min: 2,
            abel_m_max: 14,
            cesaro_m_min: 10,
            cesaro_m_max: 22,
            tolerance: 1e-3,
            growth_constant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TauberReport {
    pub alpha: f64,
    pub c: Complex64,
    pub growth_constant: f64,
    /// (1−r)^α Σ x_n r^n over r = 1 − 2^{−m}.
    pub abel: ComplexEstimate,
    /// n^{−α} Σ_{j≤n} x_j over n = 2^m.
    pub cesaro: ComplexEstimate,
    pub abel_value: Complex64,
    pub cesaro_value: Complex64,
    /// c/Γ(α+1).
    pub cesaro_target: Complex64,
    pub abel_near: bool,
    pub cesaro_near: bool,
    pub passes: bool,
}

fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol
}

/// Both sides of the Abel-to-Cesàro transfer on their grids.
///
/// Passes unless the Abel side is within tolerance/2 of c while the Cesàro
/// side misses c/Γ(α+1) by more than the tolerance.
pub fn tauberian_transfer_check(
    x: &SpectralSequence,
    alpha: f64,
    c: Complex64,
    cfg: &TauberConfig,
) -> Result<TauberReport> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be nonnegative, got {alpha}")));
    }
    let e = alpha - 1.0;
    let envelope = |n: u64| libm::pow(n as f64 + 1.0, e);

    // Cesàro side and growth check in one pass
    let n_end = 1u64 << cfg.cesaro_m_max;
    if let Some(len) = x.available() {
        if n_end + 1 > len {
            return Err(Error::PrefixTooShort { len: len as usize, needed: n_end as usize + 1 });
        }
    }
    let half = n_end / 2;
    let mut k_first: f64 = 0.0;
    let mut k_second: f64 = 0.0;
    let mut acc = ChunkedSum::new();
    let mut cesaro_pts = Vec::new();
    let mut next_m = cfg.cesaro_m_min;
    for n in 0..=n_end {
        let xn = x.at(n);
        let ratio = xn.norm() / envelope(n);
        if n < half {
            k_first = k_first.max(ratio);
        } else {
            k_second = k_second.max(ratio);
        }
        if let Some(k) = cfg.growth_constant {
            if ratio > k * (1.0 + 1e-12) {
                return Err(Error::GrowthBoundViolated { n, ratio });
            }
        }
        acc.push(xn);
        if next_m <= cfg.cesaro_m_max && n == 1u64 << next_m {
            cesaro_pts.push((n as f64, acc.value() / libm::pow(n as f64, alpha)));
            next_m += 1;
        }
    }
    if cfg.growth_constant.is_none() && k_second > 2.0 * k_first.max(f64::MIN_POSITIVE) {
        return Err(Error::GrowthBoundViolated { n: n_end, ratio: k_second });
    }
    let k = cfg.growth_constant.unwrap_or(k_first.max(k_second));

    let mut abel_pts = Vec::new();
    for r in abel_grid(cfg.abel_m_min, cfg.abel_m_max) {
        let ln_r = libm::log(r);
        let scale = libm::pow(1.0 - r, alpha);
        let stop = 1e-13 * c.norm().max(1.0);
        let mut acc = ChunkedSum::new();
        let mut n = 0u64;
        loop {
            let rn = libm::exp(n as f64 * ln_r);
            acc.push(x.at(n) * rn);
            n += 1;
            if n % 256 == 0 {
                // remainder ≤ K (n+1)^{α−1} r^n/(1 − q) with q the ratio of consecutive envelope terms
                let q = r * libm::pow((n as f64 + 2.0) / (n as f64 + 1.0), e.max(0.0));
                if q < 1.0 && scale * k * envelope(n) * libm::exp(n as f64 * ln_r) / (1.0 - q) <= stop {
                    break;
                }
            }
            if let Some(len) = x.available() {
                if n >= len {
                    return Err(Error::PrefixTooShort { len: len as usize, needed: n as usize + 1 });
                }
            }
        }
        abel_pts.push((r, acc.value() * scale));
    }
    let abel = ComplexEstimate::from_checkpoints(&abel_pts, |r| 1.0 - r, cfg.tolerance);
    let cesaro = ComplexEstimate::from_checkpoints(&cesaro_pts, |n| 1.0 / n, cfg.tolerance);
    let abel_value = abel_pts.last().map_or(Complex64::new(f64::NAN, 0.0), |p| p.1);
    let cesaro_value = cesaro_pts.last().map_or(Complex64::new(f64::NAN, 0.0), |p| p.1);
    let cesaro_target = c / gamma(alpha + 1.0);
    let abel_near = near(abel_value, c, 0.5 * cfg.tolerance);
    let cesaro_near = near(cesaro_value, cesaro_target, cfg.tolerance);
    Ok(TauberReport {
        alpha,
        c,
        growth_constant: k,
        abel,
        cesaro,
        abel_value,
        cesaro_value,
        cesaro_target,
        abel_near,
        cesaro_near,
        passes: !abel_near || cesaro_near,
    })
}

/// Which of the three criteria [`equivalence_report`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Criteria {
    pub partial_sum: bool,
    pub abel: bool,
    pub zeta: bool,
}

impl Criteria {
    pub const ALL: Criteria = Criteria { partial_sum: true, abel: true, zeta: true };

    pub fn only(name: &str) -> Option<Criteria> {
        let none = Criteria { partial_sum: false, abel: false, zeta: false };
        match name {
            "partial-sum" => Some(Criteria { partial_sum: true, ..none }),
            "abel" => Some(Criteria { abel: true, ..none }),
            "zeta" => Some(Criteria { zeta: true, ..none }),
            "all" => Some(Criteria::ALL),
            _ => None,
        }
    }
}

/// Grids and tolerance for [`equivalence_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceConfig {
    pub m_max: u32,
    pub abel_m_max: u32,
    pub t_m_max: u32,
    pub tolerance: f64,
    pub criteria: Criteria,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { m_max: 24, abel_m_max: 14, t_m_max: 14, tolerance: 0.05, criteria: Criteria::ALL }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriterionResult {
    pub name: String,
    pub estimate: ComplexEstimate,
    pub verdict: Verdict,
    /// Limit read off the estimate.
    pub value: Complex64,
    /// Divisor bringing the value back to c.
    pub scale: f64,
    pub scaled: Complex64,
}

impl CriterionResult {
    fn new(name: &str, estimate: ComplexEstimate, scale: f64) -> Self {
        let value = estimate.best();
        Self { name: name.into(), verdict: estimate.verdict(), value, scale, scaled: value / scale, estimate }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceReport {
    pub v: String,
    pub mu: String,
    pub k: u32,
    pub tolerance: f64,
    /// (1/G_k(n+1)) Σ_{j≤n} λ(j, VT), limit c.
    pub partial_sum: Option<CriterionResult>,
    /// Abel means of the dyadic blocks of VT, limit (k+1)!·c.
    pub abel: Option<CriterionResult>,
    /// t^{−(k+1)} Σ v_n μ_n^{1+1/t}, limit k!·c.
    pub zeta: Option<CriterionResult>,
    /// Every evaluated criterion converges to one c, or none converges.
    pub consistent: bool,
    /// Two converged criteria disagree.
    pub contradictory: bool,
}

/// The three criteria for V·T with V = diag(v) and μ(T) = `mu` in I_k.
pub fn equivalence_report(
    v: &Modulation,
    mu: &SpectralSequence,
    k: u32,
    cfg: &EquivalenceConfig,
) -> Result<EquivalenceReport> {
    let w = WeightFamily::gk(k);
    let mut vt = mu.modulated(v);
    if !v.has_constant_modulus() {
        let len = 1usize << cfg.m_max;
        let ordered = order_eigenvalues(&vt.prefix(len));
        vt = SpectralSequence::from_complex(vt.label(), SequenceKind::EigenvalueOrdered, ordered)
            .with_tail(TailModel::Unknown);
    }
    let sel = cfg.criteria;
    let partial = if sel.partial_sum {
        let grid = checkpoint_grid(4, cfg.m_max);
        let est = trace::partial_sum_ratios(&vt, w, &grid, cfg.tolerance)?;
        Some(CriterionResult::new("partial-sum", est, 1.0))
    } else {
        None
    };

    let abel = if sel.abel {
        let source = if v.has_constant_modulus() { vt.clone() } else { mu.modulated(v) };
        let scan = abel_scan(&source, w, 2, cfg.abel_m_max)?;
        let est = ComplexEstimate::from_checkpoints(
            &scan.samples.iter().map(|s| (s.r, s.value)).collect::<Vec<_>>(),
            |r| 1.0 - r,
            cfg.tolerance,
        );
        Some(CriterionResult::new("abel", est, factorial(k + 1)))
    } else {
        None
    };

    let zeta = if sel.zeta {
        let ts = t_grid(6, cfg.t_m_max);
        let vv = if v.period.iter().all(|z| *z == Complex64::new(1.0, 0.0)) { None } else { Some(v) };
        let mut zpts = Vec::with_capacity(ts.len());
        for &t in &ts {
            let s = zeta_value(mu, vv, w, t, SERIES_TOLERANCE)?;
            zpts.push((t, s.raw / libm::pow(t, k as f64 + 1.0)));
        }
        let est = ComplexEstimate::from_checkpoints(&zpts, |t| 1.0 / t, cfg.tolerance);
        Some(CriterionResult::new("zeta", est, factorial(k)))
    } else {
        None
    };

    let all: Vec<&CriterionResult> = [&partial, &abel, &zeta].into_iter().flatten().collect();
    let converged: Vec<&CriterionResult> = all.iter().copied().filter(|c| c.verdict == Verdict::Converged).collect();
    let agree = |a: &CriterionResult, b: &CriterionResult| {
        let scale = a.scaled.norm().max(b.scaled.norm()).max(1.0);
        near(a.scaled, b.scaled, 2.0 * cfg.tolerance * scale)
    };
    let mut contradictory = false;
    for i in 0..converged.len() {
        for j in i + 1..converged.len() {
            contradictory |= !agree(converged[i], converged[j]);
        }
    }
    let consistent = (converged.len() == all.len() && !contradictory) || converged.is_empty();
    Ok(EquivalenceReport {
        v: v.label.clone(),
        mu: mu.label().into(),
        k,
        tolerance: cfg.tolerance,
        partial_sum: partial,
        abel,
        zeta,
        consistent,
        contradictory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::sum::sum_real;
    use crate::numeric::zeta::riemann_zeta_real;
    use crate::spectral::pietsch_operator;

    #[test]
    fn harmonic_zeta_matches_riemann() {
        let t = 1024.0;
        let s = zeta_value(&SpectralSequence::harmonic(), None, WeightFamily::gk(0), t, 1e-8).unwrap();
        let oracle = riemann_zeta_real(1.0 + 1.0 / t) / t;
        assert!((s.normalized.re - oracle).abs() < 1e-9, "{} vs {oracle}", s.normalized.re);
        assert!((s.normalized.re - 1.00056).abs() < 1e-5);
    }

    #[test]
    fn tail_forms_bound_direct_sums() {
        let t = 8.0;
        let p = 1.0 + 1.0 / t;
        let cases: Vec<(SpectralSequence, TailForm)> = alloc::vec![
            (SpectralSequence::harmonic(), TailForm::Hurwitz),
            (SpectralSequence::weight(WeightFamily::gk(1)), TailForm::IncompleteGammaGk),
            (SpectralSequence::weight(WeightFamily::gk(3)), TailForm::IncompleteGammaGk),
            (SpectralSequence::weight(WeightFamily::InvLog), TailForm::IntegralEnvelope),
            (SpectralSequence::weight(WeightFamily::psi(1).unwrap()), TailForm::IntegralEnvelope),
            (SpectralSequence::loglog_oscillation(1.0), TailForm::IntegralEnvelope),
        ];
        for (seq, form) in cases {
            let d = TailDescriptor::for_sequence(&seq).unwrap();
            assert_eq!(d.form(), form);
            for n in [10u64, 100, 1000] {
                // direct sum to 4e6 plus the descriptor's own estimate past it
                let far = 4_000_000u64;
                let (far_est, far_err) = d.estimate(far, t, None, 0.0).unwrap();
                let direct = sum_real((n..far).map(|j| libm::pow(seq.real_at(j), p))) + far_est.re;
                let (est, err) = d.estimate(n, t, None, 0.0).unwrap();
                assert!(d.bound(n, t).unwrap() >= direct - far_err, "{}: n={n}", seq.label());
                assert!(
                    (est.re - direct).abs() <= err + far_err + 1e-12 * direct,
                    "{}: n={n} est {} direct {direct} err {err}",
                    seq.label(),
                    est.re
                );
            }
        }
    }

    #[test]
    fn incomplete_gamma_tail_against_exponential_oracle() {
        // k = 0: ∫_N^∞ (x+2)^{−p} dx = (N+2)^{1−p}·t exactly
        let d = TailDescriptor::IncompleteGammaGk { k: 0, shift: 0.0, scale: 1.0 };
        let t = 50.0;
        let n = 1000u64;
        let (est, err) = d.estimate(n, t, None, 0.0).unwrap();
        let integral = t * libm::pow(n as f64 + 2.0, -1.0 / t);
        let f_n = libm::pow(n as f64 + 2.0, -1.0 - 1.0 / t);
        assert!((est.re - (integral + 0.5 * f_n)).abs() < 1e-10 * integral);
        assert!(err >= 0.5 * f_n);
    }

    #[test]
    fn modulated_tail_uses_mean() {
        let d = TailDescriptor::for_sequence(&SpectralSequence::harmonic()).unwrap();
        let alt = Modulation::alternating();
        let t = 4.0;
        let n = 1000u64;
        let (est, err) = d.estimate(n, t, Some(&alt), 0.0).unwrap();
        let p = 1.0 + 1.0 / t;
        let direct =
            sum_real((n..2_000_000).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * libm::pow(j as f64 + 1.0, -p)));
        assert_eq!(est.re, 0.0);
        assert!(direct.abs() <= err);
    }

    #[test]
    fn special_values() {
        for (k, expected) in [(0u32, 1.0), (1, 2.0)] {
            let w = WeightFamily::gk(k);
            let r = residue_estimate(&SpectralSequence::weight(w), None, w, &default_t_grid(), 1e-6).unwrap();
            let got = r.estimate.re.best();
            assert!((got - expected).abs() < 0.02 * expected, "k={k}: {got}");
        }
    }

    #[test]
    fn pietsch_special_value_g0() {
        let w = WeightFamily::gk(0);
        let d = pietsch_operator(&BoundedSequence::constant(1.0), w);
        let r = residue_estimate(&d, None, w, &default_t_grid(), 1e-6).unwrap();
        let got = r.estimate.re.best();
        assert!((got - 1.0 / LN_2).abs() < 0.02 / LN_2, "{got}");
        assert_eq!(r.samples[0].tail_form, TailForm::Geometric);
    }

    #[test]
    fn pietsch_zeta_matches_direct_small_t() {
        let w = WeightFamily::gk(1);
        let d = pietsch_operator(&BoundedSequence::constant(1.0), w);
        let t = 1.0;
        let s = zeta_value(&d, None, w, t, 1e-10).unwrap();
        let direct = sum_real((0..60u64).map(|n| {
            let mu = w.g(libm::exp2(n as f64));
            libm::exp2(n as f64) * mu * mu
        }));
        assert!((s.raw.re - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn zero_sequence_has_zero_residue() {
        let r =
            residue_estimate(&SpectralSequence::zero(), None, WeightFamily::gk(0), &default_t_grid(), 1e-6).unwrap();
        assert_eq!(r.estimate.best(), Complex64::new(0.0, 0.0));
        assert_eq!(r.estimate.verdict(), Verdict::Converged);
    }

    #[test]
    fn homogeneity() {
        let w = WeightFamily::gk(0);
        let c = 3.0;
        let h = SpectralSequence::harmonic();
        for t in [64.0, 512.0] {
            let a = zeta_value(&h, None, w, t, 1e-10).unwrap().normalized.re;
            let b = zeta_value(&h.scaled(c), None, w, t, 1e-10).unwrap().normalized.re;
            assert!((b - libm::pow(c, 1.0 + 1.0 / t) * a).abs() < 1e-9 * b);
        }
    }

    #[test]
    fn harmonic_abel_means() {
        let scan = abel_scan(&SpectralSequence::harmonic(), WeightFamily::gk(0), 2, 10).unwrap();
        assert!((scan.estimate.re.best() - 1.0).abs() < 1e-3);
        let last = scan.samples.last().unwrap();
        // Σ a_n r^n with a_n = log 2 + 2^{−n−2} + O(4^{−n}) over log 2/(1−r)
        assert!((last.value.re - 1.0).abs() < 2.0 * (1.0 - last.r));
    }

    #[test]
    fn abel_on_constant_log_two_blocks() {
        let w = WeightFamily::gk(0);
        let n = 20_000usize;
        let blocks = alloc::vec![Complex64::new(LN_2, 0.0); n];
        let profile = DyadicProfile {
            weight: w,
            n_max: n as u32 - 1,
            normalized: (0..n).map(|i| Complex64::new(LN_2 / w.profile(i as f64 * LN_2), 0.0)).collect(),
            blocks,
            bounds: alloc::vec![0.0; n],
            direct_through: n as u32 - 1,
        };
        for r in [0.75, 0.99, 0.999] {
            let a = abel_sum(&profile, w, r).unwrap();
            // truncation after n blocks loses r^n of the geometric series
            let lost = libm::pow(r, n as f64);
            assert!((a.value.re - (1.0 - lost)).abs() < 1e-12, "{r}: {}", a.value.re);
            assert!(lost <= a.tail_bound);
        }
        assert!(matches!(abel_sum(&profile, w, 1.0 - 1e-6), Err(Error::InsufficientBlocks { .. })));
    }

    #[test]
    fn abel_zeta_bridge() {
        for w in [WeightFamily::gk(0), WeightFamily::gk(1)] {
            let mu = SpectralSequence::weight(w);
            // μ_j^{1/t} differs from 2^{−n/t} by (log j)^{k/t}, so the gap closes like k·log t/t
            let needed = abel_blocks_needed(w, 2.0, libm::exp2(-1.0 / 8192.0)).unwrap();
            let profile = dyadic_profile(&mu, w, needed as u32).unwrap();
            for t in [2048.0, 8192.0] {
                let z = zeta_value(&mu, None, w, t, 1e-8).unwrap().normalized.re;
                let a = abel_sum(&profile, w, libm::exp2(-1.0 / t)).unwrap().value.re;
                assert!((z - a).abs() < 0.01 * z.max(1.0), "{w:?} t={t}: zeta {z} abel {a}");
            }
        }
    }

    #[test]
    fn tauber_linear_sequence() {
        let x = SpectralSequence::real("n+1", SequenceKind::Diagonal, |n| n as f64 + 1.0);
        let cfg = TauberConfig { cesaro_m_max: 16, ..Default::default() };
        let r = tauberian_transfer_check(&x, 2.0, Complex64::new(1.0, 0.0), &cfg).unwrap();
        assert!((r.abel_value.re - 1.0).abs() < 1e-10);
        assert!((r.cesaro_value.re - 0.5).abs() < 1e-3);
        assert!(r.passes && r.abel_near && r.cesaro_near);
    }

    #[test]
    fn tauber_constant_sequence() {
        let x = SpectralSequence::real("one", SequenceKind::Diagonal, |_| 1.0);
        let cfg = TauberConfig { cesaro_m_max: 14, ..Default::default() };
        let r = tauberian_transfer_check(&x, 1.0, Complex64::new(1.0, 0.0), &cfg).unwrap();
        assert!(r.passes && r.cesaro_near);
    }

    #[test]
    fn tauber_growth_violation() {
        let x = SpectralSequence::real("n^2", SequenceKind::Diagonal, |n| (n as f64).powi(2));
        let cfg = TauberConfig { cesaro_m_max: 12, ..Default::default() };
        assert!(matches!(
            tauberian_transfer_check(&x, 1.0, Complex64::new(1.0, 0.0), &cfg),
            Err(Error::GrowthBoundViolated { .. })
        ));
    }

    #[test]
    fn equivalence_harmonic_alternating() {
        let cfg = EquivalenceConfig { m_max: 18, abel_m_max: 10, t_m_max: 12, ..Default::default() };
        let r = equivalence_report(&Modulation::alternating(), &SpectralSequence::harmonic(), 0, &cfg).unwrap();
        for c in [&r.partial_sum, &r.abel, &r.zeta] {
            let c = c.as_ref().unwrap();
            assert!(c.scaled.norm() < 0.05, "{}: {}", c.name, c.scaled);
        }
        assert!(!r.contradictory);
    }

    #[test]
    fn equivalence_single_criterion() {
        let cfg = EquivalenceConfig { t_m_max: 12, criteria: Criteria::only("zeta").unwrap(), ..Default::default() };
        let r = equivalence_report(&Modulation::one(), &SpectralSequence::harmonic(), 0, &cfg).unwrap();
        assert!(r.partial_sum.is_none() && r.abel.is_none());
        let z = r.zeta.unwrap();
        assert!((z.scaled.re - 1.0).abs() < 1e-2, "{}", z.scaled);
        assert!(r.consistent);
        assert!(Criteria::only("bogus").is_none());
    }
}

//! Lazily evaluated operator models: eigenvalue or singular-value sequences.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;

use num_complex::Complex64;

use super::weight::WeightFamily;
use crate::error::{Error, Result};

/// How the values of a sequence are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SequenceKind {
    /// Real, nonnegative, nonincreasing.
    SingularValue,
    /// |x_n| nonincreasing.
    EigenvalueOrdered,
    /// Diagonal entries in their given order.
    Diagonal,
}

/// Claim |x_n| ≤ C·g(n + shift_a).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Envelope {
    pub weight: WeightFamily,
    pub constant: f64,
}

/// Smooth real profiles f with x_n = scale·f(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// 1/(x+1).
    Harmonic,
    /// g(x + shift_a).
    Weight(WeightFamily),
    /// (1 + amp·cos(2π log₂log₂(x+16)))/(x+1).
    LogLogOscillation { amp: f64 },
    /// 1/λ(x) with C·λ·log^{dim−1}λ = x + 1.
    CountingInverse { dim: u32, constant: f64 },
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Harmonic => 1.0 / (x + 1.0),
            Profile::Weight(w) => w.shifted(x),
            Profile::LogLogOscillation { amp } => {
                let phase = 2.0 * PI * libm::log2(libm::log2(x + 16.0));
                (1.0 + amp * libm::cos(phase)) / (x + 1.0)
            }
            Profile::CountingInverse { dim, constant } => 1.0 / counting_inverse(dim, constant, x + 1.0),
        }
    }

    /// e^u·f(e^u − 1): the integrand of a dyadic block sum in the variable
    /// u = log(j+1). Stable for very large u.
    pub fn density(&self, u: f64) -> f64 {
        match *self {
            Profile::Harmonic => 1.0,
            Profile::Weight(w) => {
                if u < 700.0 {
                    let x = libm::exp(u);
                    x * w.shifted(x - 1.0)
                } else {
                    w.profile(u)
                }
            }
            Profile::LogLogOscillation { amp } => {
                // log2(e^u + 15)
                let l2 = (u + libm::log1p(15.0 * libm::exp(-u))) / LN_2;
                1.0 + amp * libm::cos(2.0 * PI * libm::log2(l2))
            }
            Profile::CountingInverse { dim, constant } => libm::exp(u - counting_inverse_log(dim, constant, u)),
        }
    }

    /// Whether f is nonincreasing and nonnegative on [0, ∞).
    pub fn is_monotone(&self) -> bool {
        !matches!(self, Profile::LogLogOscillation { .. })
    }
}

/// The solution λ ≥ 1 of C·λ·log^{dim−1}λ = y.
///
/// Bisection brackets the root, Newton polishes it.
pub fn counting_inverse(dim: u32, constant: f64, y: f64) -> f64 {
    let m = dim.saturating_sub(1) as f64;
    let target = y / constant;
    let h = |l: f64| l * libm::pow(libm::log(l), m) - target;
    if dim <= 1 {
        return target.max(1.0);
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while h(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut l = 0.5 * (lo + hi);
    for _ in 0..50 {
        let ln = libm::log(l);
        let f = h(l);
        let df = libm::pow(ln, m) + m * libm::pow(ln, m - 1.0);
        let step = f / df;
        let next = (l - step).clamp(lo, hi);
        if (next - l).abs() <= 1e-15 * l {
            l = next;
            break;
        }
        l = next;
    }
    l
}

/// log λ for the solution of C·λ·log^{dim−1}λ = e^v, computed in log space.
pub fn counting_inverse_log(dim: u32, constant: f64, v: f64) -> f64 {
    if v < 700.0 {
        return libm::log(counting_inverse(dim, constant, libm::exp(v)));
    }
    // log C + L + m log L = v, Newton from L = v
    let m = dim.saturating_sub(1) as f64;
    let lc = libm::log(constant);
    let mut l = v;
    for _ in 0..100 {
        let f = lc + l + m * libm::log(l) - v;
        let step = f / (1.0 + m / l);
        l -= step;
        if step.abs() <= 1e-15 * l {
            break;
        }
    }
    l
}

/// Periodic complex diagonal v, the multiplier in V·T.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Modulation {
    pub label: String,
    pub period: Vec<Complex64>,
}

impl Modulation {
    pub fn one() -> Self {
        Self { label: "one".into(), period: alloc::vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn alternating() -> Self {
        Self { label: "alternating".into(), period: alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)] }
    }

    /// v_n = e^{iπ·n·num/den}.
    pub fn phase(num: i64, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("phase denominator must be positive".into()));
        }
        let period_len = 2 * den as usize;
        let period = (0..period_len)
            .map(|n| {
                let theta = PI * (n as i64 * num) as f64 / den as f64;
                Complex64::from_polar(1.0, theta)
            })
            .collect();
        Ok(Self { label: format!("phase:num={num},den={den}"), period })
    }

    pub fn periodic(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("periodic modulation needs at least one value".into()));
        }
        let label = format!("periodic:len={}", values.len());
        Ok(Self { label, period: values })
    }

    pub fn at(&self, n: u64) -> Complex64 {
        self.period[(n % self.period.len() as u64) as usize]
    }

    pub fn sup(&self) -> f64 {
        self.period.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> Complex64 {
        self.period.iter().sum::<Complex64>() / self.period.len() as f64
    }

    /// W = max_k |Σ_{i<k} (v_i − mean)|; any window sum of v − mean is at most 2W.
    pub fn spread(&self) -> f64 {
        let m = self.mean();
        let mut s = Complex64::new(0.0, 0.0);
        let mut w: f64 = 0.0;
        for z in &self.period {
            s += z - m;
            w = w.max(s.norm());
        }
        w
    }

    pub fn has_constant_modulus(&self) -> bool {
        let r = self.period[0].norm();
        self.period.iter().all(|z| (z.norm() - r).abs() <= 1e-15 * r.max(1.0))
    }
}

/// Real bounded sequence x ∈ ℓ∞.
#[derive(Clone)]
pub struct BoundedSequence {
    label: String,
    sup: f64,
    f: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl fmt::Debug for BoundedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedSequence").field("label", &self.label).field("sup", &self.sup).finish()
    }
}

impl BoundedSequence {
    /// `sup` must bound |f(n)| for every n.
    pub fn from_fn(label: impl Into<String>, sup: f64, f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), sup, f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("const:{c}"), c.abs(), move |_| c)
    }

    pub fn indicator(k: u64) -> Self {
        Self::from_fn(format!("e:{k}"), 1.0, move |n| if n == k { 1.0 } else { 0.0 })
    }

    pub fn alternating() -> Self {
        Self::from_fn("alternating", 1.0, |n| if n % 2 == 0 { 1.0 } else { -1.0 })
    }

    pub fn periodic(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("periodic sequence needs at least one value".into()));
        }
        let sup = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let label = format!("periodic:len={}", values.len());
        let len = values.len() as u64;
        Ok(Self::from_fn(label, sup, move |n| values[(n % len) as usize]))
    }

    /// Fixed test family: constant, alternating, period three, a point mass,
    /// dyadic sign flips and a log-log oscillation.
    pub fn zoo() -> Vec<BoundedSequence> {
        alloc::vec![
            Self::constant(1.0),
            Self::alternating(),
            Self::from_fn("periodic:1,0,0", 1.0, |n| if n % 3 == 0 { 1.0 } else { 0.0 }),
            Self::indicator(5),
            Self::from_fn("dyadic-sign", 1.0, |n| if (63 - (n + 1).leading_zeros()) % 2 == 0 { 1.0 } else { -1.0 }),
            Self::from_fn("cos-loglog", 1.0, |n| { libm::cos(2.0 * PI * libm::log2(libm::log2(n as f64 + 16.0))) }),
        ]
    }

    pub fn at(&self, n: u64) -> f64 {
        (self.f)(n)
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Left shift (Sx)_n = x_{n+1}.
    pub fn shift(&self) -> Self {
        let f = self.f.clone();
        Self { label: format!("shift({})", self.label), sup: self.sup, f: Arc::new(move |n| f(n + 1)) }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self { label: format!("{c}*{}", self.label), sup: self.sup * c.abs(), f: Arc::new(move |n| c * f(n)) }
    }

    pub fn is_nonnegative_on(&self, n: u64) -> bool {
        (0..n).all(|i| self.at(i) >= 0.0)
    }
}

/// Σ_all x_n^p as a function of p, for spectra known only through a prefix.
pub type PowerTotal = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// What is known about a sequence beyond any computed prefix.
#[derive(Clone)]
pub enum TailModel {
    /// Nothing; tails must come from the envelope or direct summation.
    Unknown,
    /// Zero beyond `support`.
    Finite,
    /// x_n = scale·f(n).
    Smooth { profile: Profile, scale: f64 },
    /// x_n = v_n·b_n with b described by `base`.
    Modulated { v: Modulation, base: Box<TailModel> },
    /// x_j = x_n·g(2^n) on the n-th dyadic block.
    Pietsch { x: BoundedSequence, weight: WeightFamily },
    /// Σ_n x_n^p in closed form (x nonnegative).
    ClosedTotal(PowerTotal),
}

impl fmt::Debug for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailModel::Unknown => write!(f, "Unknown"),
            TailModel::Finite => write!(f, "Finite"),
            TailModel::Smooth { profile, scale } => write!(f, "Smooth({profile:?}, {scale})"),
            TailModel::Modulated { v, base } => write!(f, "Modulated({}, {base:?})", v.label),
            TailModel::Pietsch { x, weight } => write!(f, "Pietsch({}, {})", x.label(), weight.label()),
            TailModel::ClosedTotal(_) => write!(f, "ClosedTotal"),
        }
    }
}

impl TailModel {
    fn scaled(&self, c: f64) -> TailModel {
        match self {
            TailModel::Unknown => TailModel::Unknown,
            TailModel::Finite => TailModel::Finite,
            TailModel::Smooth { profile, scale } => TailModel::Smooth { profile: *profile, scale: scale * c },
            TailModel::Modulated { v, base } => TailModel::Modulated { v: v.clone(), base: Box::new(base.scaled(c)) },
            TailModel::Pietsch { x, weight } => TailModel::Pietsch { x: x.scaled(c), weight: *weight },
            TailModel::ClosedTotal(total) => {
                if c >= 0.0 {
                    let total = total.clone();
                    TailModel::ClosedTotal(Arc::new(move |p| libm::pow(c, p) * total(p)))
                } else {
                    TailModel::Unknown
                }
            }
        }
    }
}

type Generator = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

/// A lazily evaluated sequence modelling λ(T) or μ(T).
#[derive(Clone)]
pub struct SpectralSequence {
    label: String,
    kind: SequenceKind,
    generator: Generator,
    support: Option<u64>,
    envelope: Option<Envelope>,
    tail: TailModel,
}

impl fmt::Debug for SpectralSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralSequence")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("support", &self.support)
            .field("envelope", &self.envelope)
            .field("tail", &self.tail)
            .finish()
    }
}

impl SpectralSequence {
    pub fn new(
        label: impl Into<String>,
        kind: SequenceKind,
        generator: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            kind,
            generator: Arc::new(generator),
            support: None,
            envelope: None,
            tail: TailModel::Unknown,
        }
    }

    /// Real-valued sequence.
    pub fn real(label: impl Into<String>, kind: SequenceKind, f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, kind, move |n| Complex64::new(f(n), 0.0))
    }

    pub fn with_envelope(mut self, weight: WeightFamily, constant: f64) -> Self {
        self.envelope = Some(Envelope { weight, constant });
        self
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    /// Values at indices ≥ `len` are zero; unless the tail model is
    /// [`TailModel::Finite`] they are also unknown.
    pub fn with_support(mut self, len: u64) -> Self {
        self.support = Some(len);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// μ(n) = 1/(n+1).
    pub fn harmonic() -> Self {
        Self::real("harmonic", SequenceKind::SingularValue, |n| 1.0 / (n as f64 + 1.0))
            .with_envelope(WeightFamily::gk(0), 2.0)
            .with_tail(TailModel::Smooth { profile: Profile::Harmonic, scale: 1.0 })
    }

    /// μ(n) = g(n + shift_a), the nonincreasing form of the weight.
    pub fn weight(w: WeightFamily) -> Self {
        Self::real(w.label(), SequenceKind::SingularValue, move |n| w.shifted(n as f64))
            .with_envelope(w, 1.0)
            .with_tail(TailModel::Smooth { profile: Profile::Weight(w), scale: 1.0 })
    }

    /// λ(n) = (1 + amp·cos(2π log₂log₂(n+16)))/(n+1).
    pub fn loglog_oscillation(amp: f64) -> Self {
        let p = Profile::LogLogOscillation { amp };
        Self::real(format!("oscillating:amp={amp},scale=loglog"), SequenceKind::Diagonal, move |n| p.eval(n as f64))
            .with_envelope(WeightFamily::gk(0), 2.0 * (1.0 + amp.abs()))
            .with_tail(TailModel::Smooth { profile: p, scale: 1.0 })
    }

    /// μ_j = 1/λ_j with C·λ_j·log^{dim−1}λ_j = j + 1.
    pub fn counting_inverse(dim: u32, constant: f64) -> Self {
        let p = Profile::CountingInverse { dim, constant };
        let k = dim.saturating_sub(1);
        Self::real(format!("counting:n={dim}"), SequenceKind::SingularValue, move |n| p.eval(n as f64))
            .with_envelope(WeightFamily::gk(k), 4.0 * constant.max(1.0))
            .with_tail(TailModel::Smooth { profile: p, scale: 1.0 })
    }

    /// Finite sequence; kind is detected from the values.
    pub fn from_values(label: impl Into<String>, values: Vec<f64>) -> Self {
        let kind = if values.iter().all(|&v| v >= 0.0) && values.windows(2).all(|w| w[0] >= w[1]) {
            SequenceKind::SingularValue
        } else if values.windows(2).all(|w| w[0].abs() >= w[1].abs()) {
            SequenceKind::EigenvalueOrdered
        } else {
            SequenceKind::Diagonal
        };
        let len = values.len() as u64;
        let values = Arc::new(values);
        Self::real(label, kind, move |n| values.get(n as usize).copied().unwrap_or(0.0))
            .with_support(len)
            .with_tail(TailModel::Finite)
    }

    /// Finite complex sequence in the given order.
    pub fn from_complex(label: impl Into<String>, kind: SequenceKind, values: Vec<Complex64>) -> Self {
        let len = values.len() as u64;
        let values = Arc::new(values);
        Self::new(label, kind, move |n| values.get(n as usize).copied().unwrap_or_default())
            .with_support(len)
            .with_tail(TailModel::Finite)
    }

    pub fn zero() -> Self {
        Self::from_values("zero", Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn envelope(&self) -> Option<Envelope> {
        self.envelope
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    pub fn support(&self) -> Option<u64> {
        self.support
    }

    /// Number of known values when the sequence is only known through a
    /// prefix; `None` when every index can be evaluated.
    pub fn available(&self) -> Option<u64> {
        match (self.support, &self.tail) {
            (_, TailModel::Finite) | (None, _) => None,
            (Some(len), _) => Some(len),
        }
    }

    pub fn at(&self, n: u64) -> Complex64 {
        match self.support {
            Some(len) if n >= len => Complex64::new(0.0, 0.0),
            _ => (self.generator)(n),
        }
    }

    pub fn real_at(&self, n: u64) -> f64 {
        self.at(n).re
    }

    pub fn prefix(&self, len: usize) -> Vec<Complex64> {
        (0..len as u64).map(|n| self.at(n)).collect()
    }

    pub fn prefix_real(&self, len: usize) -> Vec<f64> {
        (0..len as u64).map(|n| self.real_at(n)).collect()
    }

    /// Whether every value is real.
    pub fn is_real_on(&self, len: u64) -> bool {
        (0..len).all(|n| self.at(n).im == 0.0)
    }

    /// c·x for real c ≥ 0 (kind preserved) or any real c (kind becomes diagonal).
    pub fn scaled(&self, c: f64) -> Self {
        let g = self.generator.clone();
        let kind = if c >= 0.0 { self.kind } else { SequenceKind::Diagonal };
        Self {
            label: format!("{c}*{}", self.label),
            kind,
            generator: Arc::new(move |n| g(n) * c),
            support: self.support,
            envelope: self.envelope.map(|e| Envelope { weight: e.weight, constant: e.constant * c.abs() }),
            tail: self.tail.scaled(c),
        }
    }

    /// The diagonal model of V·T: n ↦ v_n·x_n.
    pub fn modulated(&self, v: &Modulation) -> Self {
        let g = self.generator.clone();
        let vv = v.clone();
        let kind = match self.kind {
            SequenceKind::SingularValue | SequenceKind::EigenvalueOrdered if v.has_constant_modulus() => {
                SequenceKind::EigenvalueOrdered
            }
            _ => SequenceKind::Diagonal,
        };
        let kind = if v.period.iter().all(|z| *z == Complex64::new(1.0, 0.0)) { self.kind } else { kind };
        let tail = match &self.tail {
            TailModel::Finite => TailModel::Finite,
            TailModel::Unknown => TailModel::Unknown,
            base => TailModel::Modulated { v: v.clone(), base: Box::new(base.clone()) },
        };
        Self {
            label: format!("{}*{}", v.label, self.label),
            kind,
            generator: Arc::new(move |n| vv.at(n) * g(n)),
            support: self.support,
            envelope: self.envelope.map(|e| Envelope { weight: e.weight, constant: e.constant * v.sup() }),
            tail,
        }
    }

    /// Checks the kind invariant and the envelope claim on the first `len` values.
    pub fn check_prefix(&self, len: u64) -> Result<()> {
        let mut prev: Option<Complex64> = None;
        for n in 0..len {
            let x = self.at(n);
            match self.kind {
                SequenceKind::SingularValue => {
                    if x.im != 0.0 || x.re < 0.0 {
                        return Err(Error::NegativeEntry { index: n as usize });
                    }
                    if let Some(p) = prev {
                        if x.re > p.re {
                            return Err(Error::NotSorted { index: n as usize });
                        }
                    }
                }
                SequenceKind::EigenvalueOrdered => {
                    if let Some(p) = prev {
                        if x.norm() > p.norm() * (1.0 + 1e-15) {
                            return Err(Error::NotSorted { index: n as usize });
                        }
                    }
                }
                SequenceKind::Diagonal => {}
            }
            if let Some(env) = self.envelope {
                let bound = env.constant * env.weight.shifted(n as f64);
                if x.norm() > bound * (1.0 + 1e-12) {
                    return Err(Error::GrowthBoundViolated { n, ratio: x.norm() / env.weight.shifted(n as f64) });
                }
            }
            prev = Some(x);
        }
        Ok(())
    }
}

/// Index of the dyadic block holding position j: blocks are [2^n − 1, 2^{n+1} − 2].
pub fn block_of(j: u64) -> u32 {
    63 - (j + 1).leading_zeros()
}

/// log 2 as used by dyadic scales.
pub const LOG2: f64 = LN_2;

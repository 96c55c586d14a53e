//! Weight families g and their primitives G.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{E, LN_2};

use crate::error::{Error, Result};
use crate::numeric::quad;

/// A weight g (positive, eventually decreasing, regularly varying of index −1)
/// together with its primitive G.
///
/// * `Gk { k }`: g(t) = log^k(t+2)/(t+2), normalized by G(t) = log^{k+1}t/(k+1).
/// * `Psi { n }`: g(t) = 1/c_n on [0, c_n), log_[n](t)/t beyond, with
///   c_n the n-fold iterated exponential of 1 and log_[n] the n-fold logarithm.
/// * `InvLog`: g(t) = 1/e on [0, e), 1/(t log t) beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "lowercase"))]
pub enum WeightFamily {
    Gk { k: u32 },
    Psi { n: u32 },
    InvLog,
}

/// Ratios entering the regularity conditions, evaluated at t = e^u.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantReport {
    pub u: f64,
    /// g(2t)/g(t), expected → 1/2.
    pub halving: f64,
    /// G(2t)/G(t), expected → 1.
    pub doubling: f64,
    /// G(t^λ)/G(t) − λ^α for λ = 2, 3, 1/2, relative to λ^α.
    pub power_defects: [f64; 3],
}

impl InvariantReport {
    /// g(2t)/g(t) ≈ 1/2 and G(2t)/G(t) ≈ 1 within `rel`.
    pub fn local_passes(&self, rel: f64) -> bool {
        (2.0 * self.halving - 1.0).abs() <= rel && (self.doubling - 1.0).abs() <= rel
    }

    /// G(t^λ)/G(t) ≈ λ^α within `rel`.
    pub fn power_passes(&self, rel: f64) -> bool {
        self.power_defects.iter().all(|d| d.abs() <= rel)
    }
}

impl WeightFamily {
    pub fn gk(k: u32) -> Self {
        WeightFamily::Gk { k }
    }

    /// Validating constructor for ψ_n, n ∈ 1..=3 (c_4 overflows f64).
    pub fn psi(n: u32) -> Result<Self> {
        if (1..=3).contains(&n) {
            Ok(WeightFamily::Psi { n })
        } else {
            Err(Error::InvalidArgument(format!("psi:n={n} is outside 1..=3")))
        }
    }

    /// g_0..g_3, ψ_1..ψ_3 and the inverse-log weight.
    pub fn zoo() -> Vec<WeightFamily> {
        let mut z: Vec<_> = (0..4).map(WeightFamily::gk).collect();
        z.extend((1..=3).map(|n| WeightFamily::Psi { n }));
        z.push(WeightFamily::InvLog);
        z
    }

    pub fn label(&self) -> String {
        match self {
            WeightFamily::Gk { k } => format!("gk:k={k}"),
            WeightFamily::Psi { n } => format!("psi:n={n}"),
            WeightFamily::InvLog => String::from("invlog"),
        }
    }

    /// Regular-variation index α of G∘exp.
    pub fn alpha(&self) -> f64 {
        match *self {
            WeightFamily::Gk { k } => k as f64 + 1.0,
            WeightFamily::Psi { n: 1 } => 2.0,
            WeightFamily::Psi { .. } => 1.0,
            WeightFamily::InvLog => 0.0,
        }
    }

    /// Point from which g is nonincreasing.
    pub fn shift_a(&self) -> f64 {
        match *self {
            WeightFamily::Gk { k } => (libm::exp(k as f64) - 2.0).max(0.0),
            _ => 0.0,
        }
    }

    /// c_n for ψ_n (e, e^e, e^{e^e}); e for `InvLog`; 0 for g_k.
    pub fn knee(&self) -> f64 {
        match *self {
            WeightFamily::Psi { n } => iter_exp(n),
            WeightFamily::InvLog => E,
            WeightFamily::Gk { .. } => 0.0,
        }
    }

    /// g(t) for t ≥ 0.
    pub fn g(&self, t: f64) -> f64 {
        match *self {
            WeightFamily::Gk { k } => {
                let x = t + 2.0;
                libm::pow(libm::log(x), k as f64) / x
            }
            WeightFamily::Psi { n } => {
                let c = iter_exp(n);
                if t < c {
                    1.0 / c
                } else {
                    iter_log(n, t) / t
                }
            }
            WeightFamily::InvLog => {
                if t < E {
                    1.0 / E
                } else {
                    1.0 / (t * libm::log(t))
                }
            }
        }
    }

    /// g(t + shift_a), nonincreasing on [0, ∞).
    pub fn shifted(&self, t: f64) -> f64 {
        self.g(t + self.shift_a())
    }

    /// ln g(e^u), stable for very large u.
    pub fn ln_g_at_exp(&self, u: f64) -> f64 {
        match *self {
            WeightFamily::Gk { k } => {
                let lx = ln_exp_plus_two(u);
                k as f64 * libm::log(lx) - lx
            }
            WeightFamily::Psi { n } => {
                if u < iter_exp(n - 1) {
                    -iter_exp_ln(n)
                } else {
                    libm::log(iter_log(n - 1, u)) - u
                }
            }
            WeightFamily::InvLog => {
                if u < 1.0 {
                    -1.0
                } else {
                    -u - libm::log(u)
                }
            }
        }
    }

    /// e^u·g(e^u): the dyadic block scale 2^n g(2^n) at u = n log 2.
    pub fn profile(&self, u: f64) -> f64 {
        libm::exp(u + self.ln_g_at_exp(u))
    }

    /// A bound β(u) on d/du log profile, valid on [u, ∞) and nonincreasing.
    pub fn log_profile_slope_bound(&self, u: f64) -> f64 {
        match *self {
            WeightFamily::Gk { k } => {
                if u <= 0.0 {
                    f64::INFINITY
                } else {
                    k as f64 / u + 2.0 * libm::exp(-u)
                }
            }
            WeightFamily::Psi { n } => {
                if u >= iter_exp(n - 1) {
                    1.0 / u
                } else {
                    1.0
                }
            }
            WeightFamily::InvLog => {
                if u >= 1.0 {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// G(t).
    pub fn primitive(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match *self {
            WeightFamily::Gk { .. } => {
                if t <= 1.0 {
                    0.0
                } else {
                    self.primitive_at_exp(libm::log(t))
                }
            }
            _ => {
                let c = self.knee();
                if t < c {
                    t / c
                } else {
                    self.primitive_at_exp(libm::log(t))
                }
            }
        }
    }

    /// G(e^u), stable for very large u.
    pub fn primitive_at_exp(&self, u: f64) -> f64 {
        match *self {
            WeightFamily::Gk { k } => {
                if u <= 0.0 {
                    0.0
                } else {
                    libm::pow(u, k as f64 + 1.0) / (k as f64 + 1.0)
                }
            }
            WeightFamily::Psi { n } => {
                let lc = iter_exp(n - 1);
                if u < lc {
                    return libm::exp(u - iter_exp_ln(n));
                }
                match n {
                    1 => 1.0 + 0.5 * (u * u - 1.0),
                    2 => 1.0 + u * libm::log(u) - u,
                    _ => 1.0 + psi3_head(u),
                }
            }
            WeightFamily::InvLog => {
                if u < 1.0 {
                    libm::exp(u - 1.0)
                } else {
                    1.0 + libm::log(u)
                }
            }
        }
    }

    /// Regularity ratios at t = e^u.
    pub fn invariant_report(&self, u: f64) -> InvariantReport {
        let halving = libm::exp(self.ln_g_at_exp(u + LN_2) - self.ln_g_at_exp(u));
        let g_u = self.primitive_at_exp(u);
        let doubling = self.primitive_at_exp(u + LN_2) / g_u;
        let alpha = self.alpha();
        let mut power_defects = [0.0; 3];
        for (slot, lambda) in power_defects.iter_mut().zip([2.0, 3.0, 0.5]) {
            let expected = libm::pow(lambda, alpha);
            *slot = self.primitive_at_exp(lambda * u) / g_u / expected - 1.0;
        }
        InvariantReport { u, halving, doubling, power_defects }
    }
}

// ln(e^u + 2)
fn ln_exp_plus_two(u: f64) -> f64 {
    if u > 0.0 {
        u + libm::log1p(2.0 * libm::exp(-u))
    } else {
        libm::log(libm::exp(u) + 2.0)
    }
}

/// n-fold iterated exponential of 1: 1, e, e^e, e^{e^e}.
fn iter_exp(n: u32) -> f64 {
    let mut x = 1.0;
    for _ in 0..n {
        x = libm::exp(x);
    }
    x
}

// ln c_n = c_{n−1}
fn iter_exp_ln(n: u32) -> f64 {
    iter_exp(n - 1)
}

fn iter_log(n: u32, t: f64) -> f64 {
    let mut x = t;
    for _ in 0..n {
        x = libm::log(x);
    }
    x
}

// ∫_{e^e}^{L} ln ln x dx, in the variable v = ln x
fn psi3_head(l: f64) -> f64 {
    let lo = E;
    let hi = libm::log(l);
    if hi <= lo {
        return 0.0;
    }
    let f = |v: f64| libm::log(v) * libm::exp(v);
    let panels = ((hi - lo).ceil() as usize).max(1) * 2;
    quad::composite(&f, lo, hi, panels)
}

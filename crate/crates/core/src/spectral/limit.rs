//! Range surrogates for extended limits.
//!
//! An extended limit of a bounded function can take any value between its
//! lim inf and lim sup. On a finite checkpoint grid that range is estimated by
//! the minimum and maximum over the trailing half of the grid, together with a
//! least-squares extrapolation y ≈ c + b·basis(parameter).

use alloc::vec::Vec;

use crate::numeric::fit::fit_line;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Converged,
    DivergedRange,
    Inconclusive,
}

impl Verdict {
    /// Converged only if both are; diverged if either is.
    pub fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Converged, Verdict::Converged) => Verdict::Converged,
            (Verdict::DivergedRange, _) | (_, Verdict::DivergedRange) => Verdict::DivergedRange,
            _ => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitEstimate {
    /// (parameter, value) pairs in grid order.
    pub checkpoints: Vec<(f64, f64)>,
    pub window_inf: f64,
    pub window_sup: f64,
    pub extrapolated: Option<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl LimitEstimate {
    /// Builds the estimate from grid values.
    ///
    /// The window is the trailing half of the checkpoints. The verdict is
    /// converged when the window width is at most `tolerance·max(1, |centre|)`;
    /// otherwise diverged-range when the window values move in both
    /// directions, and inconclusive when they drift monotonically.
    pub fn from_checkpoints(checkpoints: Vec<(f64, f64)>, basis: impl Fn(f64) -> f64, tolerance: f64) -> Self {
        if checkpoints.is_empty() {
            return Self {
                checkpoints,
                window_inf: f64::NAN,
                window_sup: f64::NAN,
                extrapolated: None,
                verdict: Verdict::Inconclusive,
                tolerance,
            };
        }
        let window = &checkpoints[checkpoints.len() / 2..];
        let (lo, hi) =
            window.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
        let xs: Vec<f64> = window.iter().map(|&(p, _)| basis(p)).collect();
        let ys: Vec<f64> = window.iter().map(|&(_, v)| v).collect();
        let extrapolated =
            if hi - lo == 0.0 { Some(lo) } else { fit_line(&xs, &ys).map(|f| f.intercept).filter(|c| c.is_finite()) };
        let verdict = classify(&ys, lo, hi, tolerance);
        Self { checkpoints, window_inf: lo, window_sup: hi, extrapolated, verdict, tolerance }
    }

    pub fn width(&self) -> f64 {
        self.window_sup - self.window_inf
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.window_inf + self.window_sup)
    }

    /// Extrapolated value when present, else the window midpoint.
    pub fn best(&self) -> f64 {
        self.extrapolated.unwrap_or_else(|| self.midpoint())
    }

    pub fn last(&self) -> Option<f64> {
        self.checkpoints.last().map(|&(_, v)| v)
    }

    /// Whether the trailing window is monotone.
    pub fn window_is_monotone(&self) -> bool {
        let ys: Vec<f64> = self.checkpoints[self.checkpoints.len() / 2..].iter().map(|&(_, v)| v).collect();
        is_monotone(&ys)
    }
}

fn classify(ys: &[f64], lo: f64, hi: f64, tolerance: f64) -> Verdict {
    let centre = 0.5 * (lo + hi);
    if hi - lo <= tolerance * centre.abs().max(1.0) {
        Verdict::Converged
    } else if is_monotone(ys) {
        Verdict::Inconclusive
    } else {
        Verdict::DivergedRange
    }
}

fn is_monotone(ys: &[f64]) -> bool {
    ys.windows(2).all(|w| w[1] >= w[0]) || ys.windows(2).all(|w| w[1] <= w[0])
}

/// Real and imaginary parts of a complex limit, estimated separately.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexEstimate {
    pub re: LimitEstimate,
    pub im: LimitEstimate,
}

impl ComplexEstimate {
    pub fn from_checkpoints(
        checkpoints: &[(f64, num_complex::Complex64)],
        basis: impl Fn(f64) -> f64 + Copy,
        tolerance: f64,
    ) -> Self {
        let re = checkpoints.iter().map(|&(p, z)| (p, z.re)).collect();
        let im = checkpoints.iter().map(|&(p, z)| (p, z.im)).collect();
        Self {
            re: LimitEstimate::from_checkpoints(re, basis, tolerance),
            im: LimitEstimate::from_checkpoints(im, basis, tolerance),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.re.verdict.combine(self.im.verdict)
    }

    pub fn best(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.best(), self.im.best())
    }

    pub fn midpoint(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.midpoint(), self.im.midpoint())
    }
}

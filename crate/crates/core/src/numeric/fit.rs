//! Ordinary least squares for y ≈ c + b·x.

/// Fitted line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

/// Least-squares fit of y = c + b·x. Returns `None` for fewer than two
/// points or constant x.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if sxx <= f64::MIN_POSITIVE {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = (0..n).map(|i| (ys[i] - intercept - slope * xs[i]).powi(2)).sum();
    Some(LineFit { intercept, slope, rms: libm::sqrt(rss / nf) })
}

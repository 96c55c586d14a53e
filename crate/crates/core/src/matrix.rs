//! Small dense matrices with Jacobi eigenvalue and singular value solvers,
//! and seeded triangular instances for the Weyl inequality.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::dd::{CDd, Dd};
use crate::numeric::rng::{seeded, unit_disc};
use crate::spectral::order::{eigen_to_singular, log_submajorize_check_with_slack};

pub const MAX_ORDER: usize = 64;
/// Largest ‖A − Aᵀ‖_max accepted as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Symmetric Jacobi stops at this relative off-diagonal mass.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
/// Relative log-space slack for the Weyl check.
pub const WEYL_SLACK: f64 = 1e-9;
/// Column-pair orthogonality reached by [`singular_values`].
pub const DD_ORTHOGONALITY: f64 = 1e-28;
const MAX_SWEEPS: usize = 100;

/// Square complex matrix of order 1..=64, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DenseMatrix {
    order: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(order: usize, entries: Vec<Complex64>) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return invalid(format!("order {order} outside 1..={MAX_ORDER}"));
        }
        if entries.len() != order * order {
            return invalid(format!("{} entries for order {order}", entries.len()));
        }
        if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid(format!("entry {i} is not finite"));
        }
        Ok(DenseMatrix { order, entries })
    }

    pub fn from_real(order: usize, entries: &[f64]) -> Result<Self> {
        Self::new(order, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn identity(order: usize) -> Result<Self> {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); order])
    }

    pub fn diagonal(d: &[Complex64]) -> Result<Self> {
        let n = d.len();
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &z) in d.iter().enumerate() {
            e[i * n + i] = z;
        }
        Self::new(n, e)
    }

    /// Random unitary from seeded complex Givens rotations and diagonal
    /// phases; real orthogonal when `real` is set.
    pub fn random_unitary(seed: u64, order: usize, real: bool) -> Result<Self> {
        let mut u = Self::identity(order)?;
        let mut rng = seeded(seed);
        let n = order;
        for _ in 0..3 {
            for p in 0..n {
                for q in p + 1..n {
                    let (x, y) = unit_disc(&mut rng);
                    let theta = core::f64::consts::PI * x;
                    let phase = if real { 0.0 } else { core::f64::consts::PI * y };
                    let (c, s) = (libm::cos(theta), libm::sin(theta));
                    let e = Complex64::from_polar(s, phase);
                    for k in 0..n {
                        let (a, b) = (u.entries[k * n + p], u.entries[k * n + q]);
                        u.entries[k * n + p] = a * c + b * e.conj();
                        u.entries[k * n + q] = -a * e + b * c;
                    }
                }
            }
        }
        if !real {
            for j in 0..n {
                let (x, _) = unit_disc(&mut rng);
                let ph = Complex64::from_polar(1.0, core::f64::consts::PI * x);
                for k in 0..n {
                    u.entries[k * n + j] *= ph;
                }
            }
        }
        Ok(u)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.order + j]
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.order;
        if other.order != n {
            return invalid(format!("order mismatch {n} vs {}", other.order));
        }
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    e[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(DenseMatrix { order: n, entries: e })
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.order;
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        DenseMatrix { order: n, entries: e }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.order;
        (0..n).all(|i| (0..i).all(|j| self.entries[i * n + j] == Complex64::new(0.0, 0.0)))
    }
}

fn descending(a: &f64, b: &f64) -> Ordering {
    b.partial_cmp(a).unwrap_or(Ordering::Equal)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, nonincreasing.
pub fn symmetric_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let n = m.order;
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            deviation = deviation.max(z.im.abs()).max((z.re - m.get(j, i).re).abs());
        }
    }
    if deviation > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric { deviation });
    }
    let mut a: Vec<f64> = m.entries.iter().map(|z| z.re).collect();
    for i in 0..n {
        for j in 0..i {
            let mean = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = mean;
            a[j * n + i] = mean;
        }
    }
    let norm = libm::sqrt(a.iter().map(|x| x * x).sum());
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        libm::sqrt(s)
    };
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= JACOBI_TOLERANCE * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    tau.signum() / (tau.abs() + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let (x, y) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * x - s * y;
                    a[k * n + q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * x - s * y;
                    a[q * n + k] = s * x + c * y;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(descending);
    Ok(ev)
}

/// Singular values by one-sided Jacobi on the columns, nonincreasing.
///
/// Rotations run in double-double arithmetic until every column pair is
/// orthogonal to [`DD_ORTHOGONALITY`], so tiny singular values of badly
/// conditioned matrices keep their relative accuracy.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let n = m.order;
    // column-major copy so each column is contiguous
    let mut cols: Vec<Vec<CDd>> =
        (0..n).map(|j| (0..n).map(|i| CDd::new(m.get(i, j).re, m.get(i, j).im)).collect()).collect();
    let one = Dd::new(1.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                let mut alpha = Dd::ZERO;
                let mut beta = Dd::ZERO;
                let mut gamma = CDd::default();
                for (a, b) in cp.iter().zip(cq.iter()) {
                    alpha = alpha + a.norm_sqr();
                    beta = beta + b.norm_sqr();
                    gamma = gamma + a.conj() * *b;
                }
                let g = gamma.norm_sqr().sqrt();
                if g.hi == 0.0 || g.hi <= DD_ORTHOGONALITY * libm::sqrt(alpha.hi * beta.hi) {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj().scale(g.recip());
                let zeta = (beta - alpha) / (Dd::new(2.0) * g);
                let t = if zeta.hi.abs() > 1e60 {
                    Dd::new(0.5) / zeta
                } else {
                    let r = (one + zeta * zeta).sqrt() + zeta.abs();
                    let t = r.recip();
                    if zeta.hi < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = (one + t * t).sqrt().recip();
                let s = t * c;
                for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
                    let bq = *b * phase;
                    let ap = *a;
                    *a = ap.scale(c) - bq.scale(s);
                    *b = ap.scale(s) + bq.scale(c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> =
        cols.iter().map(|c| c.iter().fold(Dd::ZERO, |acc, z| acc + z.norm_sqr()).sqrt().to_f64()).collect();
    sv.sort_by(descending);
    sv
}

/// Upper-triangular matrix with exact eigenvalues on the diagonal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylInstance {
    pub seed: u64,
    pub matrix: DenseMatrix,
    pub eigen_moduli: Vec<f64>,
    pub singular_values: Vec<f64>,
}

impl WeylInstance {
    /// Whether Π_{k≤n}|λ_k| ≤ Π_{k≤n}σ_k for every n, within [`WEYL_SLACK`].
    pub fn holds(&self) -> bool {
        let n = self.eigen_moduli.len();
        log_submajorize_check_with_slack(&self.eigen_moduli, &self.singular_values, n, WEYL_SLACK).unwrap_or(false)
    }

    /// Largest Σ_{k≤n} ln|λ_k| − Σ_{k≤n} ln σ_k over n; ≤ 0 when the
    /// inequality holds exactly.
    pub fn worst_log_gap(&self) -> f64 {
        let (mut ls, mut lt) = (0.0, 0.0);
        let mut worst = f64::NEG_INFINITY;
        for (s, t) in self.eigen_moduli.iter().zip(&self.singular_values) {
            ls += libm::log(*s);
            lt += libm::log(*t);
            if ls == f64::NEG_INFINITY {
                break;
            }
            worst = worst.max(ls - lt);
        }
        worst
    }
}

/// Seeded upper-triangular matrix with entries uniform in the unit disc.
pub fn triangular_weyl_instance(seed: u64, order: usize) -> Result<WeylInstance> {
    triangular_instance(seed, order, true)
}

fn triangular_instance(seed: u64, order: usize, strict_upper: bool) -> Result<WeylInstance> {
    if order == 0 || order > MAX_ORDER {
        return invalid(format!("order {order} outside 1..={MAX_ORDER}"));
    }
    let mut rng = seeded(seed);
    let mut e = vec![Complex64::new(0.0, 0.0); order * order];
    for i in 0..order {
        for j in i..order {
            let (x, y) = unit_disc(&mut rng);
            if i == j || strict_upper {
                e[i * order + j] = Complex64::new(x, y);
            }
        }
    }
    let matrix = DenseMatrix::new(order, e)?;
    let diag: Vec<Complex64> = (0..order).map(|i| matrix.get(i, i)).collect();
    Ok(WeylInstance { seed, eigen_moduli: eigen_to_singular(&diag), singular_values: singular_values(&matrix), matrix })
}

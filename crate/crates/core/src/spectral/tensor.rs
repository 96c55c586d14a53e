//! Singular values of tensor products of positive diagonal operators.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::cesaro::cesaro_means;
use super::sequence::{SequenceKind, SpectralSequence};
use crate::error::{Error, Result};

#[derive(PartialEq)]
struct Cell {
    value: f64,
    i: usize,
    j: usize,
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // max-heap on value; ties pop in (i, j) order so output is deterministic
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}

fn validate(values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if v < 0.0 || v.is_nan() {
            return Err(Error::NegativeEntry { index: i });
        }
        if i > 0 && v > values[i - 1] {
            return Err(Error::NotSorted { index: i });
        }
    }
    Ok(())
}

/// The `n` largest products a_i·b_j, best-first over the product grid.
///
/// Row i enters the frontier once row i−1 has produced its first element, so
/// the heap never holds more than min(|a|, n) cells.
fn best_first(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n.min(a.len().saturating_mul(b.len())));
    if a.is_empty() || b.is_empty() || n == 0 {
        return out;
    }
    let mut heap = BinaryHeap::new();
    heap.push(Cell { value: a[0] * b[0], i: 0, j: 0 });
    while out.len() < n {
        let Some(Cell { value, i, j }) = heap.pop() else { break };
        out.push(value);
        if j + 1 < b.len() {
            heap.push(Cell { value: a[i] * b[j + 1], i, j: j + 1 });
        }
        if j == 0 && i + 1 < a.len() {
            heap.push(Cell { value: a[i + 1] * b[0], i: i + 1, j: 0 });
        }
    }
    out
}

/// The `n` largest pairwise products of two complete nonincreasing lists
/// (entries beyond each list are zero), padded with zeros to length `n`.
pub fn tensor_singular_values(a: &[f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    validate(a)?;
    validate(b)?;
    let mut out = best_first(a, b, n);
    out.resize(n, 0.0);
    Ok(out)
}

/// As [`tensor_singular_values`] for prefixes of longer sequences.
///
/// `a_next` and `b_next` bound every unseen value of each factor. Fails with
/// insufficient-prefix when an unseen product could exceed the n-th value.
pub fn tensor_prefix(a: &[f64], a_next: f64, b: &[f64], b_next: f64, n: usize) -> Result<Vec<f64>> {
    validate(a)?;
    validate(b)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let out = best_first(a, b, n);
    let a0 = a.first().copied().unwrap_or(a_next);
    let b0 = b.first().copied().unwrap_or(b_next);
    let unseen = (a_next * b0).max(a0 * b_next);
    if out.len() < n {
        return Err(Error::InsufficientPrefix { rank: n, bound: unseen, value: 0.0 });
    }
    let nth = out[n - 1];
    if unseen > nth {
        return Err(Error::InsufficientPrefix { rank: n, bound: unseen, value: nth });
    }
    Ok(out)
}

/// The `n` largest singular values of A ⊗ B for singular-value sequences,
/// growing the factor prefixes until the result is certified.
pub fn tensor_sequences(a: &SpectralSequence, b: &SpectralSequence, n: usize) -> Result<Vec<f64>> {
    for s in [a, b] {
        if s.kind() != SequenceKind::SingularValue {
            return Err(Error::KindMismatch("tensor factors must be singular-value sequences"));
        }
    }
    let mut len = 64usize.max(libm::sqrt(n as f64) as usize);
    loop {
        let (pa, na) = prefix_with_bound(a, len);
        let (pb, nb) = prefix_with_bound(b, len);
        match tensor_prefix(&pa, na, &pb, nb, n) {
            Err(Error::InsufficientPrefix { .. }) if !exhausted(a, len) || !exhausted(b, len) => {
                if len > (1 << 28) {
                    return tensor_prefix(&pa, na, &pb, nb, n);
                }
                len *= 4;
            }
            other => return other,
        }
    }
}

fn exhausted(s: &SpectralSequence, len: usize) -> bool {
    matches!(s.support(), Some(l) if l as usize <= len)
}

fn prefix_with_bound(s: &SpectralSequence, len: usize) -> (Vec<f64>, f64) {
    let take = match s.support() {
        Some(l) => len.min(l as usize),
        None => len,
    };
    let p = s.prefix_real(take);
    let next = if exhausted(s, len) && matches!(s.tail(), super::sequence::TailModel::Finite) {
        0.0
    } else {
        s.real_at(take as u64)
    };
    (p, next)
}

/// μ(T⊗T₀) ≤ Cμ(T) ≤ 2μ(T⊗T₀) on n < N, with μ(T₀) harmonic and slack 1e−12.
///
/// `mu_t` is a prefix of μ(T); its last entry bounds the unseen values.
pub fn tensor_sandwich_check(mu_t: &[f64], n: usize) -> Result<bool> {
    validate(mu_t)?;
    if mu_t.len() < n {
        return Err(Error::PrefixTooShort { len: mu_t.len(), needed: n });
    }
    let t_next = mu_t.last().copied().unwrap_or(0.0);
    let mut h_len = n.max(16);
    let product = loop {
        let h: Vec<f64> = (0..h_len).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        match tensor_prefix(mu_t, t_next, &h, 1.0 / (h_len as f64 + 1.0), n) {
            Ok(p) => break p,
            Err(Error::InsufficientPrefix { .. }) if h_len < (1 << 24) => h_len *= 4,
            Err(e) => return Err(e),
        }
    };
    let c = cesaro_means(&mu_t[..n]);
    for k in 0..n {
        let slack = 1e-12 * c[k].max(1e-300);
        if product[k] > c[k] + slack || c[k] > 2.0 * product[k] + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

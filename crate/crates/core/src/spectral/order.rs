//! Orderings of eigenvalues and (logarithmic) submajorization.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Moduli sorted nonincreasing; ties keep their input order.
pub fn eigen_to_singular(values: &[Complex64]) -> Vec<f64> {
    let mut m: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    m
}

/// Argument in (−π, π].
fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Sorts by modulus descending, then argument ascending in (−π, π], then
/// original index.
pub fn order_eigenvalues(values: &[Complex64]) -> Vec<Complex64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(Ordering::Equal)
            .then_with(|| principal_arg(a).partial_cmp(&principal_arg(b)).unwrap_or(Ordering::Equal))
            .then(i.cmp(&j))
    });
    idx.into_iter().map(|i| values[i]).collect()
}

fn validate(values: &[f64], n: usize, sorted: bool) -> Result<()> {
    if values.len() < n {
        return Err(Error::PrefixTooShort { len: values.len(), needed: n });
    }
    for (i, &v) in values[..n].iter().enumerate() {
        if v < 0.0 || v.is_nan() {
            return Err(Error::NegativeEntry { index: i });
        }
        if sorted && i > 0 && v > values[i - 1] {
            return Err(Error::NotSorted { index: i });
        }
    }
    Ok(())
}

/// Σ_{j≤n} s_j ≤ Σ_{j≤n} t_j for all n < N, with additive slack 1e−12·Σ t.
pub fn submajorize_check(s: &[f64], t: &[f64], n: usize) -> Result<bool> {
    validate(s, n, true)?;
    validate(t, n, true)?;
    let total: f64 = t[..n].iter().sum();
    let slack = 1e-12 * total;
    let mut ss = crate::numeric::sum::Neumaier::new();
    let mut st = crate::numeric::sum::Neumaier::new();
    for j in 0..n {
        ss.push(s[j]);
        st.push(t[j]);
        if ss.value() > st.value() + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default relative slack for [`log_submajorize_check`].
pub const LOG_SLACK: f64 = 1e-12;

/// Π_{j≤n} s_j ≤ Π_{j≤n} t_j for all n < N, via sums of logarithms.
pub fn log_submajorize_check(s: &[f64], t: &[f64], n: usize) -> Result<bool> {
    log_submajorize_check_with_slack(s, t, n, LOG_SLACK)
}

/// As [`log_submajorize_check`] with slack `rel·max(1, |Σ log t|)`.
///
/// A zero in `s` makes every later product condition hold; a zero in `t`
/// while the `s` product is still nonzero fails.
pub fn log_submajorize_check_with_slack(s: &[f64], t: &[f64], n: usize, rel: f64) -> Result<bool> {
    validate(s, n, false)?;
    validate(t, n, false)?;
    let mut ls = crate::numeric::sum::Neumaier::new();
    let mut lt = crate::numeric::sum::Neumaier::new();
    for j in 0..n {
        if s[j] == 0.0 {
            return Ok(true);
        }
        if t[j] == 0.0 {
            return Ok(false);
        }
        ls.push(libm::log(s[j]));
        lt.push(libm::log(t[j]));
        let slack = rel * lt.value().abs().max(1.0);
        if ls.value() > lt.value() + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_from_eigen() {
        assert_eq!(eigen_to_singular(&[c(3.0, 0.0), c(0.0, -4.0), c(1.0, 0.0)]), vec![4.0, 3.0, 1.0]);
        assert!(eigen_to_singular(&[]).is_empty());
        let alt: Vec<_> = (0..5).map(|n| Complex64::from_polar(1.0 / (n as f64 + 1.0), PI * n as f64)).collect();
        let got = eigen_to_singular(&alt);
        for (n, v) in got.iter().enumerate() {
            assert!((v - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn tie_order_uses_argument_then_index() {
        let v = [c(-1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)];
        let o = order_eigenvalues(&v);
        assert_eq!(o, vec![c(0.0, -1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        // −1 with a negative-zero imaginary part still sorts at argument π
        let o = order_eigenvalues(&[c(-1.0, -0.0), c(0.0, 1.0)]);
        assert_eq!(o[0], c(0.0, 1.0));
    }

    #[test]
    fn submajorization_examples() {
        assert!(submajorize_check(&[1.0, 1.0], &[2.0, 0.5], 2).unwrap());
        assert!(submajorize_check(&[2.0, 1.0], &[2.0, 1.0], 2).unwrap());
        assert!(!submajorize_check(&[2.0, 0.0], &[1.0, 1.0], 2).unwrap());
        assert_eq!(submajorize_check(&[1.0, 2.0], &[2.0, 1.0], 2), Err(Error::NotSorted { index: 1 }));
    }

    #[test]
    fn log_submajorization_examples() {
        assert!(log_submajorize_check(&[1.0, 1.0], &[2.0, 0.5], 2).unwrap());
        assert!(!log_submajorize_check(&[3.0], &[2.0], 1).unwrap());
        assert!(log_submajorize_check(&[1.0, 0.0, 5.0], &[1.0, 1.0, 1.0], 3).unwrap());
        assert!(!log_submajorize_check(&[1.0, 1.0], &[1.0, 0.0], 2).unwrap());
        assert_eq!(log_submajorize_check(&[-1.0], &[1.0], 1), Err(Error::NegativeEntry { index: 0 }));
    }

    proptest! {
        #[test]
        fn singular_values_are_sorted_and_permutation_invariant(
            pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..40),
            rot in 0usize..40,
        ) {
            let v: Vec<Complex64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
            let s = eigen_to_singular(&v);
            prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
            let mut w = v.clone();
            if !w.is_empty() {
                let r = rot % w.len();
                w.rotate_left(r);
            }
            w.reverse();
            prop_assert_eq!(eigen_to_singular(&w), s);
        }

        #[test]
        fn ordered_eigenvalues_are_a_permutation(pts in proptest::collection::vec((-3i32..3, -3i32..3), 0..30)) {
            let v: Vec<Complex64> = pts.iter().map(|&(a, b)| c(a as f64, b as f64)).collect();
            let o = order_eigenvalues(&v);
            prop_assert!(o.windows(2).all(|w| w[0].norm() >= w[1].norm()));
            let mut a: Vec<(i64, i64)> = v.iter().map(|z| (z.re as i64, z.im as i64)).collect();
            let mut b: Vec<(i64, i64)> = o.iter().map(|z| (z.re as i64, z.im as i64)).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn submajorization_is_reflexive(mut v in proptest::collection::vec(0.0f64..10.0, 1..50)) {
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            prop_assert!(submajorize_check(&v, &v, v.len()).unwrap());
            prop_assert!(log_submajorize_check(&v, &v, v.len()).unwrap());
        }
    }
}

//! Riemann and Hurwitz zeta functions by Euler–Maclaurin summation.

use num_complex::Complex64;

const DIRECT_TERMS: u32 = 64;

// B_{2j} / (2j)! for j = 1..4
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];

/// Hurwitz zeta ζ(s, q) = Σ_{n≥0} (n+q)^{−s} for complex s ≠ 1, real q > 0.
///
/// Valid wherever the Euler–Maclaurin remainder is small, in particular for
/// ℜs > 0 and moderate |ℑs|.
pub fn hurwitz_zeta(s: Complex64, q: f64) -> Complex64 {
    debug_assert!(q > 0.0);
    let mut head = super::sum::ComplexNeumaier::new();
    for n in 0..DIRECT_TERMS {
        head.push(cpow_neg(n as f64 + q, s));
    }
    let a = DIRECT_TERMS as f64 + q;
    let a_pow = cpow_neg(a, s);
    let mut total = head.value() + a * a_pow / (s - 1.0) + a_pow * 0.5;

    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j−2) · a^{−s−2j+1}
    let mut rising = s;
    let mut a_term = a_pow / a;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let top = (2 * j) as f64;
            rising *= (s + top - 1.0) * (s + top);
            a_term /= a * a;
        }
        total += rising * a_term * b;
    }
    total
}

/// Riemann zeta ζ(s) for complex s ≠ 1.
pub fn riemann_zeta(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0)
}

/// Riemann zeta on the real axis.
pub fn riemann_zeta_real(s: f64) -> f64 {
    riemann_zeta(Complex64::new(s, 0.0)).re
}

/// Hurwitz zeta on the real axis.
pub fn hurwitz_zeta_real(s: f64, q: f64) -> f64 {
    hurwitz_zeta(Complex64::new(s, 0.0), q).re
}

fn cpow_neg(x: f64, s: Complex64) -> Complex64 {
    (-s * libm::log(x)).exp()
}

//! Double-double arithmetic (about 32 significant digits), used where f64
//! rounding would swamp tiny singular values.

use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = libm::sqrt(self.hi);
        let xd = Dd::new(x);
        let (p, e) = two_prod(x, x);
        let diff = self - Dd { hi: p, lo: e };
        xd + Dd::new(diff.hi / (2.0 * x))
    }

    pub fn recip(self) -> Dd {
        Dd::new(1.0) / self
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::new(q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(re: f64, im: f64) -> CDd {
        CDd { re: Dd::new(re), im: Dd::new(im) }
    }

    pub fn conj(self) -> CDd {
        CDd { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd { re: self.re * k, im: self.im * k }
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_identities() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
        let r2 = Dd::new(2.0).sqrt();
        assert!((r2 * r2 - Dd::new(2.0)).to_f64().abs() < 1e-31);
        // 1 + 2^-80 survives, which f64 cannot hold
        let tiny = libm::ldexp(1.0, -80);
        let x = Dd::new(1.0) + Dd::new(tiny);
        assert_eq!((x - Dd::new(1.0)).to_f64(), tiny);
        assert_eq!(Dd::new(0.0).sqrt(), Dd::ZERO);
    }

    #[test]
    fn products_keep_low_bits() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60
        let a = Dd::new(1.0 + libm::ldexp(1.0, -30));
        let sq = a * a - Dd::new(1.0 + libm::ldexp(1.0, -29));
        assert_eq!(sq.to_f64(), libm::ldexp(1.0, -60));
        let z = CDd::new(3.0, 4.0);
        assert_eq!(z.norm_sqr().to_f64(), 25.0);
        assert_eq!((z * z.conj()).re.to_f64(), 25.0);
    }
}

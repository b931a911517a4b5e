//! Double-double arithmetic (about 32 significant digits).
//!
//! Only what the alternating series in this crate need: add, mul, div by
//! double-doubles, and sin/cos for moderate arguments. A value is the
//! unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// pi/2 split across three doubles.
const HALF_PI_1: f64 = std::f64::consts::FRAC_PI_2;
const HALF_PI_2: f64 = 6.123_233_995_736_766e-17;
const HALF_PI_3: f64 = -1.497_384_904_859_169_8e-33;

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Returns `(sin x, cos x)` in double-double precision.
    ///
    /// Intended for `|x|` up to a few thousand; the reduction uses a
    /// three-part pi/2 so the reduced argument keeps full precision there.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.to_f64() / HALF_PI_1).round();
        let r = self - Dd::new(q) * Dd::new(HALF_PI_1)
            - Dd::new(q) * Dd::new(HALF_PI_2)
            - Dd::new(q) * Dd::new(HALF_PI_3);
        let (s, c) = sin_cos_taylor(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }
}

fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= pi/4; 30 terms reach far below 1e-32.
    let r2 = r * r;
    let mut term = r;
    let mut sin = r;
    let mut k = 1.0;
    for _ in 0..30 {
        term = -(term * r2) / ((k + 1.0) * (k + 2.0));
        sin = sin + term;
        k += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    let mut k = 0.0;
    for _ in 0..30 {
        term = -(term * r2) / ((k + 1.0) * (k + 2.0));
        cos = cos + term;
        k += 2.0;
        if term.hi.abs() < 1e-36 {
            break;
        }
    }
    (sin, cos)
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: f64) -> Dd {
        let (s, e) = two_sum(self.hi, o);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: f64) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let (hi, lo) = quick_two_sum(p, e + self.lo * o);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: f64) -> Dd {
        self / Dd::new(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_times_three_is_one() {
        let t = Dd::ONE / 3.0;
        let back = t * 3.0 - 1.0;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sin_matches_libm_and_beats_it_near_pi() {
        for &x in &[0.1, 1.0, 2.5, 7.0, 19.0, -3.3, 123.456] {
            let (s, c) = Dd::new(x).sin_cos();
            assert!((s.to_f64() - x.sin()).abs() < 2e-16, "sin {x}");
            assert!((c.to_f64() - x.cos()).abs() < 2e-16, "cos {x}");
            // Pythagoras holds to double-double precision.
            let one = s * s + c * c - 1.0;
            assert!(one.to_f64().abs() < 1e-30, "pythagoras {x}");
        }
        // sin(fl(pi)) = pi - fl(pi) to first order.
        let s = Dd::new(std::f64::consts::PI).sin().to_f64();
        assert!((s - 1.224_646_799_147_353_2e-16).abs() < 1e-30);
    }
}

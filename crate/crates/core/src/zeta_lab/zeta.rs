//! The zeta function on the critical line.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::rs_coeffs;
use crate::error::{check_finite, Error, Result};

/// Smallest height at which the critical-line evaluators are defined.
pub const T_MIN: f64 = 10.0;

/// Below this height [`hardy_z`] sums Euler–Maclaurin instead of
/// Riemann–Siegel; the C0..C4 remainder is about 4e-9 here and shrinks
/// like `t^{-13/4}` above.
pub const RS_CROSSOVER: f64 = 200.0;

fn check_height(op: &'static str, t: f64) -> Result<()> {
    check_finite(op, "t", t)?;
    if t < T_MIN {
        return Err(Error::domain(op, format!("t = {t} is below {T_MIN}")));
    }
    Ok(())
}

/// Riemann–Siegel phase from its asymptotic series, truncated after the
/// `t^{-3}` term.
pub fn rs_theta(t: f64) -> Result<f64> {
    check_height("rs_theta", t)?;
    Ok(0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t.powi(3)))
}

/// The same series carried to `t^{-9}`; about 1e-13 at `t = 10`.
pub(crate) fn theta(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    let tail = r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
    0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0 + tail
}

/// Hardy's function `Z(t) = e^{i theta(t)} zeta(1/2 + it)`, real on the
/// real line with `|Z(t)| = |zeta(1/2 + it)|`.
pub fn hardy_z(t: f64) -> Result<f64> {
    check_height("hardy_z", t)?;
    Ok(if t < RS_CROSSOVER {
        z_euler_maclaurin(t)
    } else {
        z_riemann_siegel(t)
    })
}

/// Riemann–Siegel main sum with the C0..C4 corrections, at any `t >= 10`.
pub fn hardy_z_riemann_siegel(t: f64) -> Result<f64> {
    check_height("hardy_z_riemann_siegel", t)?;
    Ok(z_riemann_siegel(t))
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * u + v)
}

pub(crate) fn z_riemann_siegel(t: f64) -> f64 {
    let tau = t / TAU;
    let a = tau.sqrt();
    let n = a.floor();
    let u = a - n - 0.5;
    let th = theta(t);
    let mut main = 0.0;
    for k in 1..=(n as u64) {
        let kf = k as f64;
        main += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    let w = 1.0 / a; // tau^{-1/2}
    let tables: [&[f64]; 5] = [
        &rs_coeffs::C0,
        &rs_coeffs::C1,
        &rs_coeffs::C2,
        &rs_coeffs::C3,
        &rs_coeffs::C4,
    ];
    let mut rem = 0.0;
    let mut wp = 1.0;
    for c in tables {
        rem += horner(c, u) * wp;
        wp *= w;
    }
    let sign = if (n as u64) % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * w.sqrt() * rem
}

// B_2, B_4, ..., B_28.
const BERNOULLI: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// `zeta(s)` by Euler–Maclaurin summation, for `Re s = 1/2` and moderate
/// `|Im s|`. The cutoff `N` keeps `|s| / (2 pi N)` near 1/4 so the
/// Bernoulli tail falls below 1e-16 well before it diverges.
pub fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let cutoff = (4.0 * s.im.abs() / TAU).ceil() as u64 + 10;
    let nf = cutoff as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..cutoff {
        sum += (-s * (n as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp(); // N^{-s}
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // term_j = B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut npow = n_pow / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (j, &b) in BERNOULLI.iter().enumerate() {
        let term = rising * npow * (b / fact);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let m = (2 * j + 2) as f64;
        rising *= (s + (m - 1.0)) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow *= inv_n2;
    }
    sum
}

fn z_euler_maclaurin(t: f64) -> f64 {
    let zeta = zeta_euler_maclaurin(Complex64::new(0.5, t));
    (Complex64::from_polar(1.0, theta(t)) * zeta).re
}

/// `Z(t)` through Euler–Maclaurin, at any `t >= 10` (cost grows linearly).
pub fn hardy_z_euler_maclaurin(t: f64) -> Result<f64> {
    check_height("hardy_z_euler_maclaurin", t)?;
    Ok(z_euler_maclaurin(t))
}

/// Smooth zero count `(T/2pi) ln(T/(2 pi e))`.
pub fn zero_count_main(t: f64) -> Result<f64> {
    const OP: &str = "zero_count_main";
    check_finite(OP, "T", t)?;
    let floor = TAU * std::f64::consts::E;
    if t <= floor {
        return Err(Error::domain(OP, format!("T = {t} must exceed 2 pi e")));
    }
    Ok(t / TAU * (t / floor).ln())
}

/// Zeros per unit height at height `T`: `L = ln(T/2pi) / 2pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityScale {
    l: f64,
}

impl DensityScale {
    pub fn new(t: f64) -> Result<Self> {
        const OP: &str = "DensityScale::new";
        check_finite(OP, "T", t)?;
        if t <= TAU {
            return Err(Error::domain(OP, format!("T = {t} must exceed 2 pi")));
        }
        Ok(DensityScale {
            l: (t / TAU).ln() / TAU,
        })
    }

    pub fn value(&self) -> f64 {
        self.l
    }
}

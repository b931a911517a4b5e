//! Conjectured and proven right-hand sides for the discrete moments.

use std::f64::consts::{PI, TAU};

use super::arith::arith_a_value;
use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};
use crate::rmt_exact::{f_k_best, leading_coeff, shape_leading_coeff};
use crate::specfun::log_barnes_g;

// pi split into two doubles.
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

fn pi_dd() -> Dd {
    Dd { hi: PI, lo: PI_LO }
}

fn log_height(op: &'static str, t: f64) -> Result<f64> {
    check_finite(op, "T", t)?;
    if t <= TAU {
        return Err(Error::domain(op, format!("T = {t} must exceed 2 pi")));
    }
    Ok((t / TAU).ln())
}

/// `f_k a(k) F_k(2 pi alpha) (ln T/2pi)^{k^2}`.
pub fn conjecture3_rhs(t: f64, k: f64, alpha: f64) -> Result<f64> {
    const OP: &str = "conjecture3_rhs";
    let lt = log_height(OP, t)?;
    check_finite(OP, "alpha", alpha)?;
    let shape = f_k_best(k, PI * alpha.abs())?;
    Ok(leading_coeff(k)? * arith_a_value(k)? * shape * lt.powf(k * k))
}

/// `lim_{alpha -> 0} conjecture3_rhs(T, k, alpha) / alpha^{2k}`, that is
/// `f_k a(k) (2 pi)^{2k} k!^2 / ((2k)! (2k+1)!) (ln T/2pi)^{k^2}`.
pub fn conjecture3_alpha0_limit(t: f64, k: f64) -> Result<f64> {
    const OP: &str = "conjecture3_alpha0_limit";
    let lt = log_height(OP, t)?;
    Ok(leading_coeff(k)? * arith_a_value(k)? * TAU.powf(2.0 * k) * shape_leading_coeff(k)? * lt.powf(k * k))
}

/// `G^2(k+2) / G(2k+3) a(k) (ln T/2pi)^{k(k+2)}`.
pub fn hko_rhs(t: f64, k: f64) -> Result<f64> {
    const OP: &str = "hko_rhs";
    let lt = log_height(OP, t)?;
    check_finite(OP, "k", k)?;
    if k <= -1.5 {
        return Err(Error::domain(OP, format!("k = {k} must exceed -3/2")));
    }
    let lg = 2.0 * log_barnes_g(k + 2.0)? - log_barnes_g(2.0 * k + 3.0)?;
    Ok(lg.exp() * arith_a_value(k)? * lt.powf(k * (k + 2.0)))
}

/// `1 - (sin x / x)^2`, accurate as `x -> 0`.
fn one_minus_sinc2(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = x.sin();
    let diff = if x.abs() < 0.5 {
        // x - sin x by its series.
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut j = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -x2 / ((2.0 * j) * (2.0 * j + 1.0));
            sum += term;
            j += 1.0;
        }
        sum
    } else {
        x - s
    };
    diff * (x + s) / (x * x)
}

/// Gonek's theorem: `(1 - (sin(pi alpha) / (pi alpha))^2) ln(T/2pi)`.
pub fn gonek_rhs(t: f64, alpha: f64) -> Result<f64> {
    const OP: &str = "gonek_rhs";
    let lt = log_height(OP, t)?;
    check_finite(OP, "alpha", alpha)?;
    Ok(one_minus_sinc2(PI * alpha) * lt)
}

/// Sum over `j >= 0` of `(-1)^{j+1} (2 pi alpha)^{2j+2} / (2j+5)! P_j(eta)`
/// with
/// `P_j = -eta^2 + (2j+5) eta^3 / 3 - (2j+5)/(j+3) eta^{2j+6} + eta^{2j+7} + eta^2 (1-eta)^{2j+5}`.
fn cgg_series(alpha: f64, eta: f64) -> Result<f64> {
    const OP: &str = "cgg_rhs";
    let w = pi_dd() * (2.0 * alpha);
    let w2 = w * w;
    let e = Dd::new(eta);
    let e2 = e * e;
    let e3 = e2 * e;
    let one_m = Dd::new(1.0) - e;
    let one_m2 = one_m * one_m;
    // Running pieces at j = 0.
    let mut a = w2 / 120.0; // (2pi alpha)^{2j+2} / (2j+5)!
    let mut e_hi = e3 * e3; // eta^{2j+6}
    let mut om = one_m2 * one_m2 * one_m; // (1-eta)^{2j+5}
    let mut sum = Dd::default();
    let mut peak = 0.0f64;
    for j in 0..2000u32 {
        let jf = j as f64;
        let odd = Dd::new(2.0 * jf + 5.0);
        let p = -e2 + e3 * (odd / 3.0) - e_hi * (odd / (jf + 3.0)) + e_hi * e + e2 * om;
        let term = a * p;
        let term = if j % 2 == 0 { -term } else { term };
        sum = sum + term;
        let mag = a.hi.abs();
        peak = peak.max(mag);
        if mag < peak && mag < 1e-34 * sum.hi.abs().max(1e-300) {
            return Ok(sum.to_f64());
        }
        if a.hi == 0.0 {
            return Ok(sum.to_f64());
        }
        a = a * w2 / ((2.0 * jf + 6.0) * (2.0 * jf + 7.0));
        e_hi = e_hi * e2;
        om = om * one_m2;
    }
    Err(Error::overflow(OP, format!("series did not settle at alpha = {alpha}")))
}

/// Theorem of Conrey, Ghosh and Gonek for the mollified fourth moment,
/// `(6/pi^2) sum_j ... (ln T/2pi)^4`. Values of `eta` above 1/2 are
/// outside the proven range and are accepted with a warning.
pub fn cgg_rhs(t: f64, alpha: f64, eta: f64) -> Result<f64> {
    const OP: &str = "cgg_rhs";
    let lt = log_height(OP, t)?;
    check_finite(OP, "alpha", alpha)?;
    check_finite(OP, "eta", eta)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::domain(OP, format!("eta = {eta} must lie in (0, 1]")));
    }
    if eta >= 0.5 {
        static ONCE: std::sync::Once = std::sync::Once::new();
        ONCE.call_once(|| {
            log::warn!(target: "dismo::zeta_lab", "eta = {eta} is outside the proven range (0, 1/2); further cases are not reported");
        });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let six = (Dd::new(6.0) / (pi_dd() * pi_dd())).to_f64();
    Ok(six * cgg_series(alpha, eta)? * lt.powi(4))
}

/// Closed form of the `eta = 1` series:
/// `(1/12) a(2) ((2x^2 - 3) sin^2 x + 3x sin 2x + x^4 - 3x^2) / x^4 (ln T/2pi)^4`
/// with `x = pi alpha`.
pub fn cgg_eta1_closed(t: f64, alpha: f64) -> Result<f64> {
    const OP: &str = "cgg_eta1_closed";
    let lt = log_height(OP, t)?;
    check_finite(OP, "alpha", alpha)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let coeff = Dd::new(0.5) / (pi_dd() * pi_dd()); // (1/12)(6/pi^2)
    let x = pi_dd() * alpha;
    let shape = if x.hi.abs() < 1e-3 {
        // The numerator opens at x^6 and the x^2 terms would cancel past
        // double-double; (6/pi^2) S = (1/(2 pi^2)) shape gives shape = 12 S.
        Dd::new(12.0 * cgg_series(alpha, 1.0)?)
    } else {
        let x2 = x * x;
        let x4 = x2 * x2;
        let s = x.sin();
        let s2x = (x * 2.0).sin();
        (x4 - x2 * 3.0 + x * s2x * 3.0 + (x2 * 2.0 - 3.0) * (s * s)) / x4
    };
    Ok((coeff * shape).to_f64() * lt.powi(4))
}

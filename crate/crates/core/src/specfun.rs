//! Special functions on the positive real axis: log-Gamma, log Barnes G,
//! spherical Bessel functions of the first kind and log-Pochhammer symbols.
//!
//! Everything here is a pure function of its arguments. Values that would
//! overflow a double are only ever produced in log form.

use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
/// ln(2 pi) / 2
pub const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;
/// Derivative of the Riemann zeta function at -1; constant term of the
/// Barnes G asymptotic expansion.
pub const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_929_21;

// zeta(2), zeta(3), ..., zeta(30)
const ZETA_INT: [f64; 29] = [
    1.644_934_066_848_226_436_5,
    1.202_056_903_159_594_285_4,
    1.082_323_233_711_138_191_5,
    1.036_927_755_143_369_926_3,
    1.017_343_061_984_449_139_7,
    1.008_349_277_381_922_826_8,
    1.004_077_356_197_944_339_4,
    1.002_008_392_826_082_214_4,
    1.000_994_575_127_818_085_3,
    1.000_494_188_604_119_464_6,
    1.000_246_086_553_308_048_3,
    1.000_122_713_347_578_489_1,
    1.000_061_248_135_058_704_8,
    1.000_030_588_236_307_020_5,
    1.000_015_282_259_408_651_9,
    1.000_007_637_197_637_899_8,
    1.000_003_817_293_264_999_8,
    1.000_001_908_212_716_553_9,
    1.000_000_953_962_033_872_8,
    1.000_000_476_932_986_787_8,
    1.000_000_238_450_502_727_7,
    1.000_000_119_219_925_965_3,
    1.000_000_059_608_189_051_3,
    1.000_000_029_803_503_514_7,
    1.000_000_014_901_554_828_4,
    1.000_000_007_450_711_789_8,
    1.000_000_003_725_334_024_8,
    1.000_000_001_862_659_723_5,
    1.000_000_000_931_327_432_4,
];

// B_{2j} / (2j (2j - 1)), j = 1..8: Stirling series for ln Gamma.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k+2} / (4k (k+1)), k = 1..7: asymptotic series for ln G(w + 1).
const BARNES_ASYMPT: [f64; 7] = [
    -1.0 / 240.0,
    1.0 / 1008.0,
    -1.0 / 1440.0,
    1.0 / 1056.0,
    -691.0 / 327_600.0,
    1.0 / 144.0,
    -3617.0 / 114_240.0,
];

const STIRLING_MIN: f64 = 10.0;
const BARNES_ASYMPT_MIN: f64 = 12.0;

/// ln Gamma(1 + x) for |x| <= 0.25 from the Taylor series in zeta values.
fn ln_gamma_1p_small(x: f64) -> f64 {
    let mut sum = -EULER_GAMMA * x;
    let mut pow = -x;
    for (i, z) in ZETA_INT.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -x;
        sum += z * pow / k;
        if pow.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn stirling_ln_gamma(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + corr
}

/// Natural log of the Gamma function for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    const OP: &str = "log_gamma";
    check_finite(OP, "z", z)?;
    if z <= 0.0 {
        return Err(Error::domain(OP, format!("z = {z} must be positive")));
    }
    if z == 1.0 || z == 2.0 {
        return Ok(0.0);
    }
    Ok(log_gamma_pos(z))
}

/// Unchecked body of [`log_gamma`]; callers guarantee `z > 0`.
pub(crate) fn log_gamma_pos(z: f64) -> f64 {
    if (z - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(z - 1.0);
    }
    if (z - 2.0).abs() <= 0.25 {
        let x = z - 2.0;
        return x.ln_1p() + ln_gamma_1p_small(x);
    }
    if z >= STIRLING_MIN {
        return stirling_ln_gamma(z);
    }
    // Shift up into the Stirling range: Gamma(z) = Gamma(z+n) / (z (z+1) ... (z+n-1)).
    let mut prod = 1.0;
    let mut w = z;
    while w < STIRLING_MIN {
        prod *= w;
        w += 1.0;
    }
    stirling_ln_gamma(w) - prod.ln()
}

fn barnes_asymptotic(z: f64) -> f64 {
    // ln G(w + 1) with w = z - 1.
    let w = z - 1.0;
    let lw = w.ln();
    let inv2 = 1.0 / (w * w);
    let mut corr = 0.0;
    let mut p = inv2;
    for c in BARNES_ASYMPT {
        corr += c * p;
        p *= inv2;
    }
    (0.5 * w * w - 1.0 / 12.0) * lw - 0.75 * w * w + w * HALF_LN_2PI + ZETA_PRIME_MINUS_ONE + corr
}

/// Natural log of the Barnes G-function for `z > 0`.
///
/// Integer arguments use `G(n) = prod_{j<n} Gamma(j)` directly. Other
/// arguments are shifted into the asymptotic regime with
/// `ln G(z) = ln G(z+n) - sum_{j<n} ln Gamma(z+j)`.
pub fn log_barnes_g(z: f64) -> Result<f64> {
    const OP: &str = "log_barnes_g";
    check_finite(OP, "z", z)?;
    if z <= 0.0 {
        return Err(Error::domain(OP, format!("z = {z} must be positive")));
    }
    Ok(log_barnes_g_pos(z))
}

pub(crate) fn log_barnes_g_pos(z: f64) -> f64 {
    if z.fract() == 0.0 && z <= 64.0 {
        let n = z as u32;
        return (1..n).map(|j| log_gamma_pos(j as f64)).sum();
    }
    if z >= BARNES_ASYMPT_MIN {
        return barnes_asymptotic(z);
    }
    let mut w = z;
    let mut shift = 0.0;
    while w < BARNES_ASYMPT_MIN {
        shift += log_gamma_pos(w);
        w += 1.0;
    }
    barnes_asymptotic(w) - shift
}

/// Order of a spherical Bessel function; must exceed -3/2 so that
/// `j_{k-1}` exists for every exponent `k > -1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(order: f64) -> Result<Self> {
        check_finite("BesselOrder", "order", order)?;
        if order <= -1.5 {
            return Err(Error::domain(
                "BesselOrder",
                format!("order {order} must exceed -3/2"),
            ));
        }
        Ok(BesselOrder(order))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Non-negative integer order, if it is one.
    pub fn as_integer(self) -> Option<u32> {
        (self.0 >= 0.0 && self.0.fract() == 0.0 && self.0 <= 1e6).then_some(self.0 as u32)
    }
}

const CLOSED_FORM_MAX_ORDER: u32 = 60;
const SERIES_MAX_X: f64 = 40.0;

/// Spherical Bessel function of the first kind `j_n(x)`, `x >= 0`.
///
/// Small arguments (`x < max(1, n)`) use the power series; integer orders
/// beyond that use the finite trigonometric (Rayleigh) form. Non-integer
/// orders use the series up to `x = 40` and the Hankel expansion above.
/// Upward recurrence is never used.
pub fn sph_bessel_j(n: BesselOrder, x: f64) -> Result<f64> {
    const OP: &str = "sph_bessel_j";
    check_finite(OP, "x", x)?;
    if x < 0.0 {
        return Err(Error::domain(OP, format!("x = {x} must be non-negative")));
    }
    let nu = n.value();
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Singularity {
                op: OP,
                detail: format!("j_{nu}(0) is infinite for negative order"),
            })
        };
    }
    match n.as_integer() {
        Some(m) if m <= CLOSED_FORM_MAX_ORDER && x >= f64::max(1.0, nu) => {
            Ok(sph_bessel_closed(m, x))
        }
        _ if x <= SERIES_MAX_X => sph_bessel_series(n, x),
        _ => sph_bessel_hankel(nu, x),
    }
}

/// Power-series path, summed in double-double so the alternating terms
/// cancel cleanly up to `x` of about 40.
pub fn sph_bessel_series(n: BesselOrder, x: f64) -> Result<f64> {
    const OP: &str = "sph_bessel_series";
    check_finite(OP, "x", x)?;
    if x < 0.0 {
        return Err(Error::domain(OP, format!("x = {x} must be non-negative")));
    }
    let nu = n.value();
    if x == 0.0 {
        return sph_bessel_j(n, 0.0);
    }
    // j_nu(x) = sqrt(pi)/2 (x/2)^nu / Gamma(nu + 3/2) * sum_m r_m,
    // r_{m+1}/r_m = -x^2 / (2 (m+1) (2 nu + 2 m + 3)).
    let x2 = Dd::new(x) * x;
    let nud = Dd::new(nu);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut peaked = false;
    let mut m = 0.0;
    loop {
        let denom = (nud * 2.0 + (2.0 * m + 3.0)) * (2.0 * (m + 1.0));
        let next = -(term * x2) / denom;
        if next.hi.abs() < term.hi.abs() {
            peaked = true;
        }
        term = next;
        sum = sum + term;
        m += 1.0;
        if peaked && term.hi.abs() <= 1e-34 * sum.hi.abs() {
            break;
        }
        if m > 2000.0 {
            return Err(Error::overflow(OP, format!("series did not converge at x = {x}")));
        }
    }
    let log_pref = 0.5 * std::f64::consts::PI.ln() - std::f64::consts::LN_2 + nu * (0.5 * x).ln()
        - log_gamma_pos(nu + 1.5);
    Ok(sum.to_f64() * log_pref.exp())
}

/// Finite trigonometric form for integer order:
/// `j_n(x) = [P sin(x - n pi/2) + Q cos(x - n pi/2)] / x`, in double-double
/// so the cancellation for `x < n` stays below double precision.
pub fn sph_bessel_closed(n: u32, x: f64) -> f64 {
    let (s, c) = Dd::new(x).sin_cos();
    let (sin_shift, cos_shift) = match n % 4 {
        0 => (s, c),
        1 => (-c, s),
        2 => (-s, -c),
        _ => (c, -s),
    };
    let nf = n as f64;
    let two_x = Dd::new(x) * 2.0;
    let mut p = Dd::default();
    let mut q = Dd::default();
    // t_m = (n+m)! / (m! (n-m)! (2x)^m)
    let mut t = Dd::ONE;
    for m in 0..=n {
        let signed = if (m / 2) % 2 == 0 { t } else { -t };
        if m % 2 == 0 {
            p = p + signed;
        } else {
            q = q + signed;
        }
        let mf = m as f64;
        t = t * ((nf + mf + 1.0) * (nf - mf)) / (two_x * (mf + 1.0));
    }
    ((p * sin_shift + q * cos_shift) / x).to_f64()
}

fn sph_bessel_hankel(nu: f64, x: f64) -> Result<f64> {
    // J_{nu+1/2} Hankel expansion with mu = 4 (nu + 1/2)^2.
    let mu = (2.0 * nu + 1.0).powi(2);
    let mut a = 1.0f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut k = 0.0f64;
    loop {
        let next = a * (mu - (2.0 * k + 1.0).powi(2)) / ((k + 1.0) * 8.0 * x);
        if next.abs() > a.abs() && k > 0.0 {
            if a.abs() > 1e-15 {
                return Err(Error::Unsupported {
                    op: "sph_bessel_j",
                    detail: format!("order {nu} too large for the asymptotic path at x = {x}"),
                });
            }
            break;
        }
        a = next;
        k += 1.0;
        let kk = k as i64;
        let sign = if (kk / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if kk % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-18 || a == 0.0 {
            break;
        }
    }
    let chi = x - (nu + 1.0) * std::f64::consts::FRAC_PI_2;
    Ok((p * chi.cos() - q * chi.sin()) / x)
}

/// Result of a log-space Pochhammer evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogPochhammer {
    /// `(a)_n` is exactly zero (`a` a non-positive integer with `n > -a`).
    Zero,
    Value { sign: f64, log_abs: f64 },
}

impl LogPochhammer {
    pub fn to_f64(self) -> f64 {
        match self {
            LogPochhammer::Zero => 0.0,
            LogPochhammer::Value { sign, log_abs } => sign * log_abs.exp(),
        }
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)` as sign and log-magnitude.
pub fn log_pochhammer(a: f64, n: u64) -> Result<LogPochhammer> {
    const OP: &str = "log_pochhammer";
    check_finite(OP, "a", a)?;
    if n == 0 {
        return Ok(LogPochhammer::Value {
            sign: 1.0,
            log_abs: 0.0,
        });
    }
    if a <= 0.0 && a.fract() == 0.0 && (n as f64) > -a {
        return Ok(LogPochhammer::Zero);
    }
    if a > 0.0 {
        return Ok(LogPochhammer::Value {
            sign: 1.0,
            log_abs: log_gamma_pos(a + n as f64) - log_gamma_pos(a),
        });
    }
    // Negative non-integer start: the factors a, ..., up to the first
    // positive one are multiplied directly, the rest via log-Gamma.
    let negatives = ((-a).ceil() as u64).min(n);
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for j in 0..negatives {
        let f = a + j as f64;
        if f < 0.0 {
            sign = -sign;
        }
        log_abs += f.abs().ln();
    }
    if n > negatives {
        let start = a + negatives as f64;
        log_abs += log_gamma_pos(start + (n - negatives) as f64) - log_gamma_pos(start);
    }
    Ok(LogPochhammer::Value { sign, log_abs })
}

/// `ln Gamma(x + 1)` for `x > -1`, i.e. `ln(x!)`.
pub(crate) fn ln_fact(x: f64) -> f64 {
    log_gamma_pos(x + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_examples() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!((log_gamma(0.5).unwrap() - half).abs() < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_against_factorials() {
        let mut lf = 0.0f64;
        for n in 1..=170u32 {
            // lf = ln((n-1)!)
            let v = log_gamma(n as f64).unwrap();
            assert!((v - lf).abs() <= 1e-13 * lf.abs().max(1.0), "n = {n}");
            lf += (n as f64).ln();
        }
    }

    #[test]
    fn gamma_recurrence_grid() {
        let mut z = 0.5;
        while z < 100.0 {
            let r = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
            assert!((r / z - 1.0).abs() < 1e-12, "z = {z}");
            z += 1.0;
        }
    }

    #[test]
    fn barnes_integer_values() {
        assert_eq!(log_barnes_g(1.0).unwrap(), 0.0);
        assert!((log_barnes_g(4.0).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((log_barnes_g(7.0).unwrap() - 34560f64.ln()).abs() < 1e-12);
        assert!(log_barnes_g(0.0).is_err());
    }

    #[test]
    fn barnes_recurrence_grid() {
        let mut z = 0.5;
        while z <= 20.0 {
            let d = log_barnes_g(z + 1.0).unwrap() - log_barnes_g(z).unwrap() - log_gamma(z).unwrap();
            assert!(d.abs() < 1e-10, "z = {z}: {d}");
            z += 0.5;
        }
    }

    #[test]
    fn bessel_examples() {
        let j = |n: f64, x: f64| sph_bessel_j(BesselOrder::new(n).unwrap(), x).unwrap();
        assert_eq!(j(0.0, 0.0), 1.0);
        assert_eq!(j(1.0, 0.0), 0.0);
        assert!((j(1.0, std::f64::consts::PI) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!(sph_bessel_j(BesselOrder::new(1.0).unwrap(), -1.0).is_err());
        assert!(BesselOrder::new(-1.5).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        match log_pochhammer(3.0, 2).unwrap() {
            LogPochhammer::Value { sign, log_abs } => {
                assert_eq!(sign, 1.0);
                assert!((log_abs - 12f64.ln()).abs() < 1e-14);
            }
            LogPochhammer::Zero => panic!(),
        }
        assert_eq!(log_pochhammer(-2.0, 3).unwrap(), LogPochhammer::Zero);
        let v = log_pochhammer(0.5, 4).unwrap().to_f64();
        assert!((v - 6.5625).abs() < 1e-13);
        // (-2.5)_3 = (-2.5)(-1.5)(-0.5)
        let v = log_pochhammer(-2.5, 3).unwrap().to_f64();
        assert!((v + 1.875).abs() < 1e-14);
        // (-1.5)_4 = (-1.5)(-0.5)(0.5)(1.5)
        let v = log_pochhammer(-1.5, 4).unwrap().to_f64();
        assert!((v - 0.5625).abs() < 1e-14);
        assert_eq!(log_pochhammer(-2.0, 2).unwrap().to_f64(), 2.0);
    }
}

//! Closed-form moments of the characteristic polynomial
//! `Z_U(theta) = det(I - e^{-i theta} U)` of an `N x N` Haar unitary.
//!
//! Displacement conventions differ between operations and each one names
//! its own: `beta` is an angle, `y = N beta`, and `x = N beta / 2`.
//!
//! Factorial ratios are accumulated as a single log-magnitude and sign per
//! term and exponentiated once. Sums whose terms alternate (the shape
//! function series, the WZ sum, the joint-moment double sums) are
//! accumulated in double-double.

use crate::dd::Dd;
use crate::error::{check_finite, Error, Result};
use crate::specfun::{self, ln_fact, log_barnes_g_pos, log_gamma_pos, BesselOrder};
use crate::sum::DdSum;

/// Largest exponent we are willing to pass to `exp`.
const LOG_BUDGET: f64 = 700.0;

/// One point of the random-matrix parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    pub matrix_size: u32,
    pub k: f64,
    pub displacement: f64,
}

impl MomentQuery {
    pub fn new(matrix_size: u32, k: f64, displacement: f64) -> Result<Self> {
        check_size("MomentQuery", matrix_size)?;
        check_k("MomentQuery", k)?;
        check_finite("MomentQuery", "displacement", displacement)?;
        Ok(Self {
            matrix_size,
            k,
            displacement,
        })
    }
}

/// Representation used to evaluate the shape function `F_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FkMethod {
    /// Alternating power series in `y = 2x`.
    Series,
    /// `x^2 j_k^2 + x^2 j_{k-1}^2 - 2k x j_k j_{k-1}`.
    Bessel,
    /// Elementary closed forms, integer `k` in 1..=3 only.
    Closed,
}

fn check_k(op: &'static str, k: f64) -> Result<()> {
    check_finite(op, "k", k)?;
    if k <= -0.5 {
        return Err(Error::domain(op, format!("k = {k} must exceed -1/2")));
    }
    Ok(())
}

fn check_size(op: &'static str, n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(op, "matrix size must be at least 1"));
    }
    Ok(())
}

fn exp_checked(op: &'static str, log: f64) -> Result<f64> {
    if log > LOG_BUDGET {
        return Err(Error::overflow(op, format!("log-magnitude {log:.1} exceeds budget")));
    }
    Ok(log.exp())
}

/// `ln M_N(2k)` where `M_N(2k) = prod_{j=1}^N Gamma(j) Gamma(j+2k) / Gamma(j+k)^2`.
pub fn log_moment_mn(n: u32, k: f64) -> Result<f64> {
    const OP: &str = "moment_mn";
    check_size(OP, n)?;
    check_k(OP, k)?;
    Ok(log_moment_mn_unchecked(n, k))
}

fn log_moment_mn_unchecked(n: u32, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let mut acc = DdSum::default();
    for j in 1..=n {
        let j = j as f64;
        acc.add(log_gamma_pos(j) + log_gamma_pos(j + 2.0 * k) - 2.0 * log_gamma_pos(j + k));
    }
    acc.value()
}

/// `M_N(2k) = E_N |Z_U(0)|^{2k}`.
pub fn moment_mn(n: u32, k: f64) -> Result<f64> {
    exp_checked("moment_mn", log_moment_mn(n, k)?)
}

/// `G(k+1)^2 / G(2k+1)`, the coefficient of `N^{k^2}` in `M_N(2k)`.
pub fn leading_coeff(k: f64) -> Result<f64> {
    const OP: &str = "leading_coeff";
    check_k(OP, k)?;
    Ok(log_leading_coeff(k).exp())
}

pub(crate) fn log_leading_coeff(k: f64) -> f64 {
    2.0 * log_barnes_g_pos(k + 1.0) - log_barnes_g_pos(2.0 * k + 1.0)
}

/// Exact joint moment `E_N{ |Z(0)|^{2k} |Z(beta)|^2 }` from the double sum
/// over `(2 sin(beta/2))^{2n}` and the phases `e^{i beta (2m - N + n)}`.
///
/// The inner sum is symmetric under `m -> N - n - m`, so only cosines are
/// accumulated.
pub fn joint_moment_exact(n: u32, k: f64, beta: f64) -> Result<f64> {
    const OP: &str = "joint_moment_exact";
    check_size(OP, n)?;
    check_k(OP, k)?;
    check_finite(OP, "beta", beta)?;
    let nf = n as f64;
    let nn = n as usize;

    // Every term is the n = m = 0 term times a product of rational ratios,
    // accumulated in double-double together with double-double phases.
    let log_base = log_moment_mn_unchecked(n, k) + log_gamma_pos(nf + 1.0 + 2.0 * k)
        - log_gamma_pos(nf + 1.0 + k)
        + log_gamma_pos(k + 1.0)
        - log_gamma_pos(2.0 * k + 1.0);

    let kd = Dd::new(k);
    let half = Dd::new(0.5 * beta).sin();
    let s2 = half * half * 4.0;
    let n_max = if s2.hi == 0.0 { 0 } else { nn };
    // cos(beta j) for j in -N..=N
    let cosines: Vec<Dd> = (0..=nn)
        .map(|j| (Dd::new(beta) * j as f64).sin_cos().1)
        .collect();

    let mut total = DdSum::default();
    // w(i, 0): outer factor times c(i, 0), relative to the base term.
    let mut row = Dd::ONE;
    for i in 0..=n_max {
        let fi = i as f64;
        let mut w = row;
        for m in 0..=(nn - i) {
            let fm = m as f64;
            let j = (2 * m + i) as i64 - nn as i64;
            total.add_dd(w * cosines[j.unsigned_abs() as usize]);
            if m < nn - i {
                // c(i, m+1)/c(i, m) = (k+i+1+m)(N-i-m) / ((N+k-m)(m+1))
                let num = (kd + (fi + 1.0 + fm)) * (nf - fi - fm);
                let den = (kd + (nf - fm)) * (fm + 1.0);
                w = w * num / den;
            }
        }
        if i < n_max {
            // w(i+1, 0)/w(i, 0) = s2 (k+i+1)(N-i) / ((i+1)(2k+i+1))
            let num = s2 * (kd + (fi + 1.0)) * (nf - fi);
            let den = (kd * 2.0 + (fi + 1.0)) * (fi + 1.0);
            row = row * num / den;
        }
    }
    scale_checked(OP, total.value(), log_base)
}

/// `value * exp(log_scale)` without overflowing in the intermediate.
fn scale_checked(op: &'static str, value: f64, log_scale: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::overflow(op, "term magnitudes left the double range"));
    }
    if value == 0.0 {
        return Ok(0.0);
    }
    Ok(value.signum() * exp_checked(op, log_scale + value.abs().ln())?)
}

/// The same joint moment from the trigonometric expansion in
/// `(2 sin(beta/2))^{2n} (sin beta)^{2m} (cos beta)^{N-n-2m}` with the
/// coefficients `T(N, k, m, n)`.
pub fn joint_moment_trig_form(n: u32, k: f64, beta: f64) -> Result<f64> {
    const OP: &str = "joint_moment_trig_form";
    check_size(OP, n)?;
    check_k(OP, k)?;
    check_finite(OP, "beta", beta)?;
    let nf = n as f64;
    let nn = n as usize;

    // Duplication turns (N/2+n/2+k)! (N/2+n/2+k+1/2)! into
    // 2^{-(N+n+2k+1)} sqrt(pi) (N+n+2k+1)!, after which both
    // T(N,k,m,n+1)/T(N,k,m,n) and T(N,k,m+1,n)/T(N,k,m,n) are rational.
    let log_base = log_moment_mn_unchecked(n, k) + ln_fact(nf + 2.0 * k) - 2.0 * ln_fact(nf + k)
        + 0.5 * std::f64::consts::PI.ln()
        + ln_fact(nf + 2.0 * k + 1.0)
        - (2.0 * k + 1.0) * std::f64::consts::LN_2
        + ln_fact(k)
        - ln_fact(2.0 * k)
        - ln_fact(k + 0.5);

    let kd = Dd::new(k);
    let half = Dd::new(0.5 * beta).sin();
    let s2 = half * half * 4.0;
    let (sin_b, cos_b) = Dd::new(beta).sin_cos();
    let neg_sin2 = -(sin_b * sin_b);
    let mut cos_pow = Vec::with_capacity(nn + 1);
    let mut c = Dd::ONE;
    for _ in 0..=nn {
        cos_pow.push(c);
        c = c * cos_b;
    }

    let mut total = DdSum::default();
    let mut row = Dd::ONE; // T(N,k,0,i) (2 sin(beta/2))^{2i} / T(N,k,0,0)
    for i in 0..=nn {
        let fi = i as f64;
        let a = -0.5 * (nf - fi);
        let mut w = row;
        for m in 0..=((nn - i) / 2) {
            let fm = m as f64;
            total.add_dd(w * cos_pow[nn - i - 2 * m]);
            // (a+m)(a+1/2+m) / ((m+1)(i+k+3/2+m)) times -sin^2(beta)
            let num = Dd::new(a + fm) * (a + 0.5 + fm);
            let den = (kd + (fi + 1.5 + fm)) * (fm + 1.0);
            w = w * neg_sin2 * num / den;
        }
        if i < nn {
            // (N+i+2k+2)(k+i+1)(N-i) / (4 (i+1)(2k+i+1)(i+k+3/2)) times s2
            let num = (kd * 2.0 + (nf + fi + 2.0)) * (kd + (fi + 1.0)) * (nf - fi);
            let den = (kd * 2.0 + (fi + 1.0)) * (kd + (fi + 1.5)) * (4.0 * (fi + 1.0));
            row = row * s2 * num / den;
        }
    }
    scale_checked(OP, total.value(), log_base)
}

/// Double-double sum of `sum_p c_p (-1)^p y^{2p}` normalised so that the
/// `p = 0` coefficient is 1, where `c_{p+1}/c_p = (k+p)(k+p+1) /
/// ((p+1)(2k+p+1)(2k+2p+2)(2k+2p+3))`.
fn shape_series_normalised(k: f64, y: f64) -> Result<f64> {
    shape_series_signed(k, y, -1.0)
}

/// The series with the alternating sign replaced by `sign` (`-1` is the
/// real series); `+1` is the mutation used by the verifier's smoke test.
fn shape_series_signed(k: f64, y: f64, sign: f64) -> Result<f64> {
    let y2 = Dd::new(y) * y;
    let kd = Dd::new(k);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut peak = 1.0f64;
    let mut p = 0.0;
    loop {
        let num = (kd + p) * (kd + (p + 1.0));
        let den = (kd * 2.0 + (p + 1.0)) * (kd * 2.0 + (2.0 * p + 2.0)) * (kd * 2.0 + (2.0 * p + 3.0)) * (p + 1.0);
        let ratio = num / den;
        term = (term * y2) * ratio * sign;
        let ratio = ratio.to_f64();
        p += 1.0;
        if term.hi == 0.0 {
            break;
        }
        sum = sum + term;
        let mag = term.hi.abs();
        peak = peak.max(mag);
        let past_peak = (y * y * ratio.abs()) < 1.0;
        if past_peak && mag <= 1e-33 * sum.hi.abs().max(1e-300) {
            break;
        }
        if p > 5000.0 {
            return Err(Error::overflow("f_k", format!("series did not converge at y = {y}")));
        }
    }
    if peak * 1e-30 > sum.hi.abs() {
        return Err(Error::overflow(
            "f_k",
            format!("series cancellation exceeds double-double precision at y = {y}"),
        ));
    }
    Ok(sum.to_f64())
}

/// `ln c_0 = ln[Gamma(k+1)^2 / (Gamma(2k+1) Gamma(2k+2))]`, the limit of
/// `F_k(y) / y^{2k}` as `y -> 0`.
fn log_shape_leading(k: f64) -> f64 {
    2.0 * log_gamma_pos(k + 1.0) - log_gamma_pos(2.0 * k + 1.0) - log_gamma_pos(2.0 * k + 2.0)
}

/// `lim_{y->0} F_k(y) / y^{2k} = k! k! / ((2k)! (2k+1)!)`.
pub fn shape_leading_coeff(k: f64) -> Result<f64> {
    check_k("shape_leading_coeff", k)?;
    Ok(log_shape_leading(k).exp())
}

/// `S_k(y) = sum_p k (k-1+p)! (k+p)! / (p! (2k+p)! (2k+1+2p)!) (-1)^p y^{2p}`,
/// the small-displacement series of the joint moment. For `|y| > 2k + 10`
/// it is evaluated as `F_k(y) / y^{2k}`.
pub fn joint_asymptotic_series(k: f64, y: f64) -> Result<f64> {
    const OP: &str = "joint_asymptotic_series";
    check_k(OP, k)?;
    check_finite(OP, "y", y)?;
    let y = y.abs();
    if y > 2.0 * k + 10.0 {
        let f = f_k(k, 0.5 * y, best_method(k, 0.5 * y))?;
        return Ok(f / y.powf(2.0 * k));
    }
    Ok(log_shape_leading(k).exp() * shape_series_normalised(k, y)?)
}

/// Leading large-`N` behaviour of the joint moment at `beta = y / N`:
/// `G(k+1)^2/G(2k+1) * S_k(y) * N^{(k+1)^2}`.
///
/// At `k = 0` the series is 1 and the value is `N`; the exact moment is
/// `N + 1`, the difference being subleading.
pub fn joint_moment_asymptotic(n: u32, k: f64, y: f64) -> Result<f64> {
    const OP: &str = "joint_moment_asymptotic";
    check_size(OP, n)?;
    check_k(OP, k)?;
    let s = joint_asymptotic_series(k, y)?;
    let log_n = (n as f64).ln();
    Ok(s * exp_checked(OP, log_leading_coeff(k) + (k + 1.0).powi(2) * log_n)?)
}

/// Method used when the caller does not pick one: the series up to
/// `x = k + 15`, the Bessel form beyond.
pub fn best_method(k: f64, x: f64) -> FkMethod {
    if x <= k + 15.0 {
        FkMethod::Series
    } else {
        FkMethod::Bessel
    }
}

/// Shape function of the displaced moment, returned as `F_k(2x)`.
pub fn f_k(k: f64, x: f64, method: FkMethod) -> Result<f64> {
    const OP: &str = "f_k";
    check_k(OP, k)?;
    check_finite(OP, "x", x)?;
    if x < 0.0 {
        return Err(Error::domain(OP, format!("x = {x} must be non-negative")));
    }
    let closed_order = [1.0, 2.0, 3.0].contains(&k);
    if method == FkMethod::Closed && !closed_order {
        return Err(Error::Unsupported {
            op: OP,
            detail: format!("closed form exists only for k in {{1, 2, 3}}, got {k}"),
        });
    }
    if x == 0.0 {
        return if k > 0.0 {
            Ok(0.0)
        } else if k == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::Singularity {
                op: OP,
                detail: format!("F_k(0) diverges for k = {k} < 0"),
            })
        };
    }
    match method {
        FkMethod::Series => f_k_series(k, x),
        FkMethod::Bessel => f_k_bessel(k, x),
        FkMethod::Closed => Ok(f_k_closed(k as u32, x)),
    }
}

/// `f_k` with [`best_method`].
pub fn f_k_best(k: f64, x: f64) -> Result<f64> {
    f_k(k, x.abs(), best_method(k, x.abs()))
}

fn f_k_series(k: f64, x: f64) -> Result<f64> {
    f_k_series_signed(k, x, -1.0)
}

pub(crate) fn f_k_series_signed(k: f64, x: f64, sign: f64) -> Result<f64> {
    let y = 2.0 * x;
    let s = shape_series_signed(k, y, sign)?;
    Ok(s * (log_shape_leading(k) + 2.0 * k * y.ln()).exp())
}

fn f_k_bessel(k: f64, x: f64) -> Result<f64> {
    let jk = specfun::sph_bessel_j(BesselOrder::new(k)?, x)?;
    let jkm1 = specfun::sph_bessel_j(BesselOrder::new(k - 1.0)?, x)?;
    let a = x * jk;
    let b = x * jkm1;
    Ok(a * a + b * b - 2.0 * k * a * jkm1)
}

fn f_k_closed(k: u32, x: f64) -> f64 {
    let xd = Dd::new(x);
    let x2 = xd * xd;
    let s = xd.sin();
    let s2 = s * s;
    let sin2x = Dd::new(2.0 * x).sin();
    let v = match k {
        1 => (x2 - s2) / x2,
        2 => {
            let x4 = x2 * x2;
            (x4 - x2 * 3.0 + xd * sin2x * 3.0 + (x2 * 2.0 - 3.0) * s2) / x4
        }
        3 => {
            let x4 = x2 * x2;
            let x6 = x4 * x2;
            let x3 = x2 * xd;
            (x6 - x4 * 3.0 - x2 * 45.0
                + (x3 * -12.0 + xd * 45.0) * sin2x
                + (x4 * -3.0 + x2 * 72.0 - 45.0) * s2)
                / x6
        }
        _ => unreachable!("closed form gated on k"),
    };
    v.to_f64()
}

/// Leading large-`N` term `G(k+1)^2/G(2k+1) F_k(2x) N^{k^2}`,
/// valid for `|x| < pi N`.
pub fn displaced_moment_leading(n: u32, k: f64, x: f64) -> Result<f64> {
    const OP: &str = "displaced_moment_leading";
    check_size(OP, n)?;
    check_k(OP, k)?;
    check_finite(OP, "x", x)?;
    let nf = n as f64;
    if x.abs() >= std::f64::consts::PI * nf {
        return Err(Error::domain(OP, format!("|x| = {} must be below pi N = {}", x.abs(), std::f64::consts::PI * nf)));
    }
    let f = f_k_best(k, x.abs())?;
    Ok(f * exp_checked(OP, log_leading_coeff(k) + k * k * nf.ln())?)
}

/// `sum_{n=0}^p (-1)^n (k+n)! p! (2k+p)! / (k (p-n)! n! (2k+n)! (k-1+p)!)`,
/// identically 1.
pub fn wz_check(k: f64, p: u32) -> Result<f64> {
    const OP: &str = "wz_check";
    check_k(OP, k)?;
    if k == 0.0 {
        return Err(Error::domain(OP, "k = 0 (the summand divides by k)"));
    }
    let pf = p as f64;
    // n = 0 term: (k)! (2k+p)! / (k (2k)! (k-1+p)!), with k (k-1)! = k! at p = 0.
    let (den_sign, log_den) = if p == 0 {
        (1.0, log_gamma_pos(k + 1.0))
    } else {
        (k.signum(), k.abs().ln() + log_gamma_pos(k + pf))
    };
    let log_t0 = log_gamma_pos(k + 1.0) + log_gamma_pos(2.0 * k + pf + 1.0)
        - log_gamma_pos(2.0 * k + 1.0)
        - log_den;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let kd = Dd::new(k);
    for n in 0..p {
        let nf = n as f64;
        let num = (kd + (nf + 1.0)) * (nf - pf);
        let den = (kd * 2.0 + (nf + 1.0)) * (nf + 1.0);
        term = term * num / den;
        sum = sum + term;
    }
    Ok(den_sign * sum.to_f64() * log_t0.exp())
}

/// Which closed form of the joint moment backs [`factorization_rhs_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointForm {
    Exact,
    Trig,
}

/// `E_N |Z(theta_1 + beta)|^{2k} = (1/N) |2 sin(beta/2)|^{2k}
/// E_{N-1}{ |Z(0)|^{2k} |Z(beta)|^2 }`, exact at finite `N`.
pub fn factorization_rhs(n: u32, k: f64, beta: f64) -> Result<f64> {
    factorization_rhs_with(JointForm::Exact, n, k, beta)
}

pub fn factorization_rhs_with(form: JointForm, n: u32, k: f64, beta: f64) -> Result<f64> {
    const OP: &str = "factorization_rhs";
    check_k(OP, k)?;
    check_finite(OP, "beta", beta)?;
    if n < 2 {
        return Err(Error::domain(OP, "matrix size must be at least 2"));
    }
    let chord = (2.0 * (0.5 * beta).sin()).abs();
    let weight = if k == 0.0 {
        1.0
    } else if chord == 0.0 {
        if k < 0.0 {
            return Err(Error::Singularity {
                op: OP,
                detail: format!("|2 sin(beta/2)|^(2k) diverges at beta = {beta} for k = {k}"),
            });
        }
        0.0
    } else {
        chord.powf(2.0 * k)
    };
    let joint = match form {
        JointForm::Exact => joint_moment_exact(n - 1, k, beta)?,
        JointForm::Trig => joint_moment_trig_form(n - 1, k, beta)?,
    };
    Ok(weight * joint / n as f64)
}

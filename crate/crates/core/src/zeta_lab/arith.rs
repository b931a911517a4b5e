//! The arithmetic factor `a(k)` as a truncated Euler product.

use std::f64::consts::PI;

use crate::error::{check_finite, Error, Result};
use crate::sum::NeumaierSum;

/// Parameters of the Euler-product evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArithParams {
    pub k: f64,
    pub prime_cutoff: u64,
    pub series_tol: f64,
}

impl ArithParams {
    pub fn new(k: f64, prime_cutoff: u64, series_tol: f64) -> Result<Self> {
        const OP: &str = "ArithParams::new";
        check_finite(OP, "k", k)?;
        if prime_cutoff < 100 {
            return Err(Error::domain(OP, format!("prime_cutoff = {prime_cutoff} must be at least 100")));
        }
        if !(series_tol > 0.0 && series_tol <= 1e-6) {
            return Err(Error::domain(OP, format!("series_tol = {series_tol} must lie in (0, 1e-6]")));
        }
        Ok(ArithParams {
            k,
            prime_cutoff,
            series_tol,
        })
    }
}

/// A truncated product together with a bound on what truncation omitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArithValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Primes up to and including `n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `ln sum_m ((k)_m / m!)^2 p^{-m}` with a geometric estimate of the
/// omitted tail. Returns the log and the tail's relative size.
fn local_log_series(k: f64, p: f64, tol: f64) -> (f64, f64) {
    let x = 1.0 / p;
    let mut c = 1.0; // (k)_m / m!
    let mut term = 1.0;
    let mut sum = NeumaierSum::new();
    sum.add(1.0);
    let mut m = 0.0;
    let mut prev = 1.0;
    loop {
        c *= (k + m) / (m + 1.0);
        term *= x;
        let t = c * c * term;
        m += 1.0;
        if t == 0.0 {
            return (sum.value().ln(), 0.0);
        }
        sum.add(t);
        let s = sum.value();
        let ratio = t / prev;
        prev = t;
        // Past the peak the ratio tends to 1/p from above.
        if ratio < 1.0 && t < tol * s {
            let tail = t * ratio / (1.0 - ratio);
            sum.add(tail);
            return (sum.value().ln(), tail.abs() / s);
        }
        if m > 10_000.0 {
            return (s.ln(), 1.0);
        }
    }
}

/// `a(k) = prod_p (1 - 1/p)^{k^2} sum_m (Gamma(m+k) / (m! Gamma(k)))^2 p^{-m}`
/// over primes up to the cutoff.
///
/// For large `p` the log of a local factor is `-k^2 (k-1)^2 / (4 p^2)`
/// plus `O(p^{-3})`, so the primes above `P` contribute about
/// `-k^2 (k-1)^2 / (4 P ln P)`. That estimate is applied, and the error
/// bound is twice its size plus an `O(p^{-3})` allowance and the series
/// truncation.
pub fn arith_a(params: ArithParams) -> Result<ArithValue> {
    const OP: &str = "arith_a";
    let k = params.k;
    if k <= -0.5 {
        return Err(Error::domain(OP, format!("k = {k} must exceed -1/2")));
    }
    arith_a_any(params)
}

pub(crate) fn arith_a_any(params: ArithParams) -> Result<ArithValue> {
    let ArithParams {
        k,
        prime_cutoff,
        series_tol,
    } = params;
    let k2 = k * k;
    let mut log_sum = NeumaierSum::new();
    let mut trunc = 0.0;
    for p in primes_up_to(prime_cutoff) {
        let pf = p as f64;
        let (ls, rel) = local_log_series(k, pf, series_tol);
        log_sum.add(k2 * (-1.0 / pf).ln_1p());
        log_sum.add(ls);
        trunc += rel;
    }
    let pc = prime_cutoff as f64;
    let lp = pc.ln();
    let tail = -k2 * (k - 1.0).powi(2) / (4.0 * pc * lp);
    log_sum.add(tail);
    let value = log_sum.value().exp();
    let higher = (1.0 + k.abs()).powi(6) / (pc * pc * lp);
    let log_err = 2.0 * tail.abs() + higher + trunc;
    Ok(ArithValue {
        value,
        error_bound: value * log_err.exp_m1(),
    })
}

/// `a(k)` where it is known in closed form: `a(0) = a(1) = 1`,
/// `a(-1) = a(2) = 6/pi^2`.
pub(crate) fn arith_a_exact(k: f64) -> Option<f64> {
    if k == 0.0 || k == 1.0 {
        Some(1.0)
    } else if k == -1.0 || k == 2.0 {
        Some(6.0 / (PI * PI))
    } else {
        None
    }
}

const DEFAULT_CUTOFF: u64 = 1_000_000;
const DEFAULT_TOL: f64 = 1e-17;

/// `a(k)` for the right-hand-side evaluators: exact where known, otherwise
/// the Euler product to a million.
pub(crate) fn arith_a_value(k: f64) -> Result<f64> {
    if let Some(v) = arith_a_exact(k) {
        return Ok(v);
    }
    Ok(arith_a_any(ArithParams {
        k,
        prime_cutoff: DEFAULT_CUTOFF,
        series_tol: DEFAULT_TOL,
    })?
    .value)
}

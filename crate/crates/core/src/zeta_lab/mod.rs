//! The zeta side: Hardy's `Z` on the critical line, zeros, discrete
//! moments over zeros, and the right-hand sides they are compared with.

mod arith;
mod rhs;
mod rs_coeffs;
mod zeros;
mod zeta;

use rayon::prelude::*;

pub use arith::{arith_a, primes_up_to, ArithParams, ArithValue};
pub use rhs::{cgg_eta1_closed, cgg_rhs, conjecture3_alpha0_limit, conjecture3_rhs, gonek_rhs, hko_rhs};
pub use zeros::{find_zeros, ZeroSource, ZeroTable, MIN_SEPARATION, SPOT_STRIDE, T_LIMIT, ZERO_RESIDUAL};
pub use zeta::{
    hardy_z, hardy_z_euler_maclaurin, hardy_z_riemann_siegel, rs_theta, zero_count_main, zeta_euler_maclaurin,
    DensityScale, RS_CROSSOVER, T_MIN,
};

use crate::error::{check_finite, Error, Result};
use crate::sum::NeumaierSum;

/// Zeros per reduction shard; fixed so sums do not depend on threading.
const SHARD: usize = 256;

/// Mean of `f` over the table, summed shard by shard in a fixed order.
fn shard_mean(ords: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<f64> {
    let parts: Vec<f64> = ords
        .par_chunks(SHARD)
        .map(|c| {
            let mut s = NeumaierSum::new();
            for &g in c {
                s.add(f(g)?);
            }
            Ok(s.value())
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().collect::<NeumaierSum>().value() / ords.len() as f64)
}

fn abs_pow(z: f64, two_k: f64) -> f64 {
    if two_k == 0.0 {
        1.0
    } else {
        z.abs().powf(two_k)
    }
}

fn nonempty(op: &'static str, zeros: &ZeroTable) -> Result<()> {
    if zeros.is_empty() {
        return Err(Error::domain(op, "zero table is empty"));
    }
    Ok(())
}

/// `(1/N) sum_n |Z(gamma_n + alpha / L)|^{2k}`, with `L` taken at the
/// table height.
pub fn discrete_displaced_moment(zeros: &ZeroTable, k: f64, alpha: f64) -> Result<f64> {
    const OP: &str = "discrete_displaced_moment";
    nonempty(OP, zeros)?;
    check_finite(OP, "k", k)?;
    check_finite(OP, "alpha", alpha)?;
    if k <= -0.25 {
        return Err(Error::domain(OP, format!("k = {k} must exceed -1/4")));
    }
    if alpha == 0.0 && k < 0.0 {
        return Err(Error::Singularity {
            op: OP,
            detail: format!("negative power k = {k} at the zeros themselves"),
        });
    }
    let shift = alpha / DensityScale::new(zeros.t_max())?.value();
    shard_mean(zeros.ordinates(), |g| Ok(abs_pow(hardy_z(g + shift)?, 2.0 * k)))
}

/// Five-point central difference of `Z` at `t`, step
/// `1e-4 max(1, t/1000)`.
pub fn hardy_z_derivative(t: f64) -> Result<f64> {
    let h = 1e-4 * (t / 1000.0).max(1.0);
    let f = |d: f64| hardy_z(t + d * h);
    Ok((f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h))
}

/// `(1/N) sum_n |zeta'(1/2 + i gamma_n)|^{2k}`, using `|zeta'| = |Z'|` at
/// simple zeros on the line.
pub fn discrete_deriv_moment(zeros: &ZeroTable, k: f64) -> Result<f64> {
    const OP: &str = "discrete_deriv_moment";
    nonempty(OP, zeros)?;
    check_finite(OP, "k", k)?;
    if k <= -1.5 {
        return Err(Error::domain(OP, format!("k = {k} must exceed -3/2")));
    }
    if k < -1.0 {
        log::warn!(target: "dismo::zeta_lab", "k = {k} below -1: small |Z'| dominates and the mean is unstable");
    }
    zeros::check_separation(zeros.ordinates())?;
    shard_mean(zeros.ordinates(), |g| Ok(abs_pow(hardy_z_derivative(g)?, 2.0 * k)))
}

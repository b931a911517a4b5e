//! Monte Carlo over Haar-random unitaries, plus a Weyl-integration
//! quadrature for `N <= 3` that serves as a deterministic oracle.
//!
//! Sampling is sharded: shard `s` of stream `(seed, index)` draws from
//! ChaCha8 stream `index` starting at word `s << 48`, so every shard is
//! reproducible on its own and results do not depend on the thread count.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{check_finite, Error, Result};
use crate::specfun::log_gamma_pos;
use crate::sum::NeumaierSum;

/// Samples per shard. Fixed, so that shard boundaries never depend on the
/// machine.
const SHARD: usize = 4096;
const SHARD_WORD_SHIFT: u32 = 48;
pub const MIN_SAMPLES: usize = 1000;
const COINCIDENCE: f64 = 1e-14;

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    /// Generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        self.shard_rng(0)
    }

    fn shard_rng(&self, shard: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng.set_word_pos((shard as u128) << SHARD_WORD_SHIFT);
        rng
    }
}

/// Eigenangles of one unitary, sorted ascending in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenangleSample {
    angles: Vec<f64>,
}

impl EigenangleSample {
    /// Validates and sorts a set of angles.
    pub fn new(mut angles: Vec<f64>) -> Result<Self> {
        const OP: &str = "EigenangleSample::new";
        if angles.is_empty() {
            return Err(Error::domain(OP, "no angles"));
        }
        for &a in &angles {
            if !(a > -PI && a <= PI) {
                return Err(Error::domain(OP, format!("angle {a} outside (-pi, pi]")));
            }
        }
        angles.sort_by(f64::total_cmp);
        Ok(EigenangleSample { angles })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Mean and standard error of a Monte Carlo average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Distance from `target` in units of the standard error. Differences
    /// at rounding level count as an exact match, so a zero-variance
    /// estimator gives 0 or infinity.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d <= 64.0 * f64::EPSILON * target.abs() {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Streaming mean and centred second moment (Welford), mergeable with
/// Chan's formula.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let w = o.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += o.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    fn estimate(&self, seed: u64) -> McEstimate {
        let n = self.n as f64;
        let var = if self.n > 1 { self.m2 / (n - 1.0) } else { 0.0 };
        McEstimate {
            mean: self.mean,
            std_error: (var.max(0.0) / n).sqrt(),
            n_samples: self.n as usize,
            seed,
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Draws a Haar unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` moved into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DMatrix<Complex64>> {
    const OP: &str = "sample_haar_unitary";
    if n == 0 {
        return Err(Error::domain(OP, "N must be at least 1"));
    }
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let m = d.norm();
        if !(m > f64::EPSILON * n as f64) {
            return Err(Error::Degenerate {
                op: OP,
                detail: format!("|R[{j},{j}]| = {m:e} in orthonormalization"),
            });
        }
        let phase = d / m;
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    Ok(q)
}

/// Eigenangles of one Haar unitary drawn from `rng`.
pub fn sample_haar_eigenangles_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<EigenangleSample> {
    const OP: &str = "sample_haar_eigenangles";
    let u = sample_haar_unitary(n, rng)?;
    let angles = if n == 1 {
        vec![u[(0, 0)].arg()]
    } else {
        let schur = nalgebra::linalg::Schur::try_new(u, 1e-14, 10_000).ok_or_else(|| Error::Degenerate {
            op: OP,
            detail: "Schur iteration did not converge".into(),
        })?;
        let ev = schur.eigenvalues().ok_or_else(|| Error::Degenerate {
            op: OP,
            detail: "Schur form not triangular".into(),
        })?;
        ev.iter().map(|z| z.arg()).collect()
    };
    // atan2 returns -pi for a negative real with negative-zero imaginary part.
    let angles = angles
        .into_iter()
        .map(|a| if a <= -PI { a + TAU } else { a })
        .collect();
    EigenangleSample::new(angles)
}

/// One Haar spectrum from the start of `stream`.
pub fn sample_haar_eigenangles(n: usize, stream: &RngStream) -> Result<EigenangleSample> {
    sample_haar_eigenangles_with(n, &mut stream.rng())
}

/// `sum_n ln|2 sin((theta_n - theta)/2)|`, i.e. `ln |Z_U(theta)|`.
/// Returns `-inf` when `theta` sits on an eigenangle.
fn log_abs_char_poly(angles: &[f64], theta: f64) -> f64 {
    let mut s = 0.0;
    for &a in angles {
        let c = (2.0 * (0.5 * (a - theta)).sin()).abs();
        if c < COINCIDENCE {
            return f64::NEG_INFINITY;
        }
        s += c.ln();
    }
    s
}

/// `|Z_U(theta)|^{two_k}` for the unitary with the given eigenangles.
pub fn char_poly_abs_pow(sample: &EigenangleSample, theta: f64, two_k: f64) -> Result<f64> {
    const OP: &str = "char_poly_abs_pow";
    check_finite(OP, "theta", theta)?;
    check_finite(OP, "two_k", two_k)?;
    let l = log_abs_char_poly(&sample.angles, theta);
    pow_from_log(OP, l, two_k)
}

fn pow_from_log(op: &'static str, log_abs: f64, two_k: f64) -> Result<f64> {
    if two_k == 0.0 {
        return Ok(1.0);
    }
    if log_abs == f64::NEG_INFINITY {
        if two_k < 0.0 {
            return Err(Error::Singularity {
                op,
                detail: format!("eigenangle coincidence with exponent {two_k}"),
            });
        }
        return Ok(0.0);
    }
    Ok((two_k * log_abs).exp())
}

/// Which eigenangle anchors the displaced moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// Average over every eigenangle of the spectrum.
    All,
    /// One eigenangle drawn uniformly per spectrum.
    Uniform,
    /// Fixed position in sorted order (taken mod N). This is biased: the
    /// smallest angle is the one whose lower gap straddles `-pi`, and that
    /// gap is size-biased.
    Sorted(usize),
}

/// Reference points per spectrum for the joint moment. Rotation
/// invariance lets any set of fixed points stand in for `theta = 0`;
/// averaging over several tames the heavy upper tail of `|Z|^{2k}`.
fn joint_refs(n: usize) -> usize {
    2 * n + 2
}

/// A set of observables evaluated on every sampled spectrum.
///
/// Each entry of `ks` is combined with every joint displacement `beta`
/// (`|Z(0)|^{2k} |Z(beta)|^2`) and every displaced point `x`
/// (`|Z(theta_anchor + 2x/N)|^{2k}`).
#[derive(Debug, Clone, PartialEq)]
pub struct McPlan {
    pub matrix_size: usize,
    pub ks: Vec<f64>,
    pub joint_betas: Vec<f64>,
    pub displaced_xs: Vec<f64>,
    pub anchor: Anchor,
}

/// Estimates from one batched run, indexed `[k][displacement]`.
#[derive(Debug, Clone, PartialEq)]
pub struct McBatch {
    pub joint: Vec<Vec<McEstimate>>,
    pub displaced: Vec<Vec<McEstimate>>,
}

fn check_mc_args(op: &'static str, n: usize, k: f64, n_samples: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(op, "N must be at least 1"));
    }
    check_finite(op, "k", k)?;
    if k <= -0.25 {
        return Err(Error::domain(op, format!("k = {k} must exceed -1/4 for a finite variance")));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::domain(
            op,
            format!("n_samples = {n_samples} is below the minimum {MIN_SAMPLES}"),
        ));
    }
    if k < 0.0 {
        log::warn!(
            target: "dismo::rmt_mc",
            "k = {k} in (-1/4, 0]: estimator has heavy tails, standard errors converge slowly"
        );
    }
    Ok(())
}

/// Runs `plan` over `n_samples` spectra, sharded across the rayon pool.
pub fn mc_batch(plan: &McPlan, n_samples: usize, stream: &RngStream) -> Result<McBatch> {
    const OP: &str = "mc_batch";
    for &k in &plan.ks {
        check_mc_args(OP, plan.matrix_size, k, n_samples)?;
    }
    for &v in plan.joint_betas.iter().chain(&plan.displaced_xs) {
        check_finite(OP, "displacement", v)?;
    }
    let n_shards = n_samples.div_ceil(SHARD);
    let shards: Vec<Result<ShardAcc>> = (0..n_shards)
        .into_par_iter()
        .map(|s| {
            let count = SHARD.min(n_samples - s * SHARD);
            run_shard(plan, count, &mut stream.shard_rng(s as u64))
        })
        .collect();
    let mut total = ShardAcc::new(plan);
    for acc in shards {
        total.merge(&acc?);
    }
    let seed = stream.master_seed;
    let est = |v: &Vec<Moments>| v.iter().map(|m| m.estimate(seed)).collect::<Vec<_>>();
    Ok(McBatch {
        joint: total.joint.iter().map(est).collect(),
        displaced: total.displaced.iter().map(est).collect(),
    })
}

struct ShardAcc {
    joint: Vec<Vec<Moments>>,
    displaced: Vec<Vec<Moments>>,
}

impl ShardAcc {
    fn new(plan: &McPlan) -> Self {
        let nk = plan.ks.len();
        ShardAcc {
            joint: vec![vec![Moments::default(); plan.joint_betas.len()]; nk],
            displaced: vec![vec![Moments::default(); plan.displaced_xs.len()]; nk],
        }
    }

    fn merge(&mut self, o: &ShardAcc) {
        for (a, b) in self.joint.iter_mut().zip(&o.joint) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
        for (a, b) in self.displaced.iter_mut().zip(&o.displaced) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
    }
}

fn run_shard(plan: &McPlan, count: usize, rng: &mut ChaCha8Rng) -> Result<ShardAcc> {
    const OP: &str = "mc_batch";
    let n = plan.matrix_size;
    let nf = n as f64;
    let refs: Vec<f64> = (0..joint_refs(n)).map(|j| TAU * j as f64 / joint_refs(n) as f64).collect();
    let mut acc = ShardAcc::new(plan);
    let mut log0 = vec![0.0; refs.len()];
    let mut log_beta = vec![vec![0.0; refs.len()]; plan.joint_betas.len()];
    let mut log_disp = vec![Vec::with_capacity(n); plan.displaced_xs.len()];
    for _ in 0..count {
        let s = sample_haar_eigenangles_with(n, rng)?;
        let angles = s.angles();
        for (l, &t) in log0.iter_mut().zip(&refs) {
            *l = log_abs_char_poly(angles, t);
        }
        for (row, &b) in log_beta.iter_mut().zip(&plan.joint_betas) {
            for (l, &t) in row.iter_mut().zip(&refs) {
                *l = log_abs_char_poly(angles, t + b);
            }
        }
        let anchors = match plan.anchor {
            Anchor::All => 0..n,
            Anchor::Uniform => {
                let i = rng.random_range(0..n);
                i..i + 1
            }
            Anchor::Sorted(i) => i % n..i % n + 1,
        };
        for (row, &x) in log_disp.iter_mut().zip(&plan.displaced_xs) {
            row.clear();
            let beta = 2.0 * x / nf;
            // The anchor's own factor is |2 sin(beta/2)| exactly; the rest
            // are measured from the shifted point.
            let own = (2.0 * (0.5 * beta).sin()).abs();
            let own = if own < COINCIDENCE { f64::NEG_INFINITY } else { own.ln() };
            for ia in anchors.clone() {
                let target = angles[ia] + beta;
                let mut v = own;
                for (i, &a) in angles.iter().enumerate() {
                    if i != ia {
                        let c = (2.0 * (0.5 * (a - target)).sin()).abs();
                        v += if c < COINCIDENCE { f64::NEG_INFINITY } else { c.ln() };
                    }
                }
                row.push(v);
            }
        }
        for (ik, &k) in plan.ks.iter().enumerate() {
            for (m, lb) in acc.joint[ik].iter_mut().zip(&log_beta) {
                let mut v = 0.0;
                for (&l0, &l) in log0.iter().zip(lb) {
                    v += pow_from_log(OP, l0, 2.0 * k)? * pow_from_log(OP, l, 2.0)?;
                }
                m.push(v / refs.len() as f64);
            }
            for (m, ld) in acc.displaced[ik].iter_mut().zip(&log_disp) {
                let mut v = 0.0;
                for &l in ld {
                    v += pow_from_log(OP, l, 2.0 * k)?;
                }
                m.push(v / ld.len() as f64);
            }
        }
    }
    Ok(acc)
}

/// Estimates `E_N |Z_U(theta_1 + 2x/N)|^{2k}` for an eigenangle `theta_1`
/// chosen uniformly, averaging over all anchors of each spectrum.
pub fn mc_displaced_moment(n: usize, k: f64, x: f64, n_samples: usize, stream: &RngStream) -> Result<McEstimate> {
    mc_displaced_moment_anchored(n, k, x, n_samples, stream, Anchor::All)
}

/// As [`mc_displaced_moment`] with an explicit anchor choice.
pub fn mc_displaced_moment_anchored(
    n: usize,
    k: f64,
    x: f64,
    n_samples: usize,
    stream: &RngStream,
    anchor: Anchor,
) -> Result<McEstimate> {
    let plan = McPlan {
        matrix_size: n,
        ks: vec![k],
        joint_betas: vec![],
        displaced_xs: vec![x],
        anchor,
    };
    Ok(mc_batch(&plan, n_samples, stream)?.displaced[0][0])
}

/// Estimates `E_N |Z(0)|^{2k} |Z(beta)|^2`.
pub fn mc_joint_moment(n: usize, k: f64, beta: f64, n_samples: usize, stream: &RngStream) -> Result<McEstimate> {
    let plan = McPlan {
        matrix_size: n,
        ks: vec![k],
        joint_betas: vec![beta],
        displaced_xs: vec![],
        anchor: Anchor::All,
    };
    Ok(mc_batch(&plan, n_samples, stream)?.joint[0][0])
}

/// `(1/2pi) int |2 sin(t/2)|^{2k} e^{ijt} dt` for `j = 0..=jmax`:
/// `Gamma(2k+1) / (Gamma(k+1+j) Gamma(k+1-j))`, via the ratio
/// `mu_{j+1}/mu_j = -(k-j)/(k+j+1)` so integer `k` needs no poles.
fn cusp_moments(k: f64, jmax: usize) -> Vec<f64> {
    let mut mu = Vec::with_capacity(jmax + 1);
    let mut m = (log_gamma_pos(2.0 * k + 1.0) - 2.0 * log_gamma_pos(k + 1.0)).exp();
    for j in 0..=jmax {
        mu.push(m);
        let jf = j as f64;
        m *= -(k - jf) / (k + jf + 1.0);
    }
    mu
}

/// Trapezoid estimate of the Weyl-integral joint moment on a `g`-point
/// periodic grid per axis.
fn weyl_trapezoid(n: usize, k: f64, beta: f64, g: usize) -> f64 {
    let h = TAU / g as f64;
    // Per-node weight |2 sin(t/2)|^{2k} |2 sin((t - beta)/2)|^2; the
    // singular node is dropped when k < 0.
    let mut w = vec![0.0; g];
    let mut e = vec![Complex64::new(0.0, 0.0); g];
    for (i, (wi, ei)) in w.iter_mut().zip(e.iter_mut()).enumerate() {
        let t = h * i as f64;
        let c0 = (2.0 * (0.5 * t).sin()).abs();
        let cb = 2.0 * (0.5 * (t - beta)).sin();
        *wi = if c0 == 0.0 {
            if k == 0.0 {
                cb * cb
            } else {
                0.0
            }
        } else {
            c0.powf(2.0 * k) * cb * cb
        };
        *ei = Complex64::from_polar(1.0, t);
    }
    match n {
        1 => w.iter().copied().collect::<NeumaierSum>().value() / g as f64,
        2 => {
            let mut total = NeumaierSum::new();
            for i in 0..g {
                let mut row = 0.0;
                for j in 0..g {
                    row += w[j] * (e[i] - e[j]).norm_sqr();
                }
                total.add(w[i] * row);
            }
            total.value() / (2.0 * (g * g) as f64)
        }
        3 => {
            // The third coordinate enters through the trigonometric
            // polynomial |e^{it} - a|^2 |e^{it} - b|^2 |e^{it} - e^{i beta}|^2
            // (degree 3), integrated exactly against the cusp weight.
            let mu = cusp_moments(k, 3);
            let eb = Complex64::from_polar(1.0, beta);
            let lin = |p: Complex64| [-p.conj(), Complex64::new(2.0, 0.0), -p];
            let mut total = NeumaierSum::new();
            for i in 0..g {
                let mut row = 0.0;
                for j in 0..g {
                    if w[j] == 0.0 {
                        continue;
                    }
                    // Laurent coefficients of z^{-3..=3} in the product of
                    // (-conj(p) z + 2 - p z^{-1}); index 0 is z^{-3}.
                    let mut poly = [Complex64::new(0.0, 0.0); 7];
                    let a = lin(e[i]);
                    let b = lin(e[j]);
                    let c = lin(eb);
                    for (ia, &xa) in a.iter().enumerate() {
                        for (ib, &xb) in b.iter().enumerate() {
                            let ab = xa * xb;
                            for (ic, &xc) in c.iter().enumerate() {
                                // Each factor lists z^{+1}, z^0, z^{-1}.
                                poly[ia + ib + ic] += ab * xc;
                            }
                        }
                    }
                    // poly[s] multiplies z^{3-s}; the integral keeps mu_{|3-s|}.
                    let mut third = 0.0;
                    for (s, p) in poly.iter().enumerate() {
                        third += p.re * mu[(3i32 - s as i32).unsigned_abs() as usize];
                    }
                    row += w[j] * (e[i] - e[j]).norm_sqr() * third;
                }
                total.add(w[i] * row);
            }
            total.value() / (6.0 * (g * g) as f64)
        }
        _ => unreachable!("checked by caller"),
    }
}

/// Error exponents of the periodic trapezoid rule for the cusp weight:
/// `2k+1+2j` from each axis and `4k+2+2j` from products of two axes.
fn cusp_exponents(n: usize, k: f64, count: usize) -> Vec<f64> {
    let mut ex: Vec<f64> = (0..count).map(|j| 2.0 * k + 1.0 + 2.0 * j as f64).collect();
    if n >= 2 {
        ex.extend((0..count).map(|j| 4.0 * k + 2.0 + 2.0 * j as f64));
    }
    ex.sort_by(f64::total_cmp);
    ex.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ex.truncate(count);
    ex
}

/// `E_N |Z(0)|^{2k} |Z(beta)|^2` by direct integration of the Weyl density
/// for `N <= 3`, on grids `grid_points / 2^j` with Richardson extrapolation
/// over the cusp error exponents. For integer `k` the integrand is a
/// trigonometric polynomial and the finest grid is already exact.
pub fn weyl_quadrature_moment(n: usize, k: f64, beta: f64, grid_points: usize) -> Result<f64> {
    const OP: &str = "weyl_quadrature_moment";
    if !(1..=3).contains(&n) {
        return Err(Error::domain(OP, format!("N = {n} must be 1, 2 or 3")));
    }
    check_finite(OP, "k", k)?;
    check_finite(OP, "beta", beta)?;
    if k <= -0.5 {
        return Err(Error::domain(OP, format!("k = {k} must exceed -1/2")));
    }
    if grid_points < 512 {
        return Err(Error::domain(OP, format!("grid_points = {grid_points} must be at least 512")));
    }
    if k.fract() == 0.0 {
        return Ok(weyl_trapezoid(n, k, beta, grid_points));
    }
    const LEVELS: usize = 4;
    let exps = cusp_exponents(n, k, LEVELS - 1);
    // table[i]: grid grid_points / 2^{LEVELS-1-i}, coarse to fine.
    let mut table: Vec<f64> = (0..LEVELS)
        .map(|i| weyl_trapezoid(n, k, beta, grid_points >> (LEVELS - 1 - i)))
        .collect();
    for p in exps {
        let f = 2f64.powf(p);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    Ok(table[0])
}

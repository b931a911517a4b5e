//! The property suite: every invariant of the library checked at its
//! stated tolerance, in a fixed order, with one outcome per property.
//!
//! Monte Carlo properties are judged at three standard errors. A failed
//! Monte Carlo check is re-run once under a seed derived from the master
//! seed; both outcomes are reported and the property passes only if the
//! retry does.

use std::cell::OnceCell;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;

use crate::error::Result;
use crate::rmt_exact::{
    displaced_moment_leading, f_k, f_k_series_signed, factorization_rhs, joint_moment_exact, joint_moment_trig_form,
    moment_mn, wz_check, FkMethod,
};
use crate::rmt_mc::{
    mc_batch, mc_displaced_moment, mc_joint_moment, sample_haar_eigenangles_with, weyl_quadrature_moment, Anchor,
    McBatch, McPlan, RngStream,
};
use crate::specfun::{log_barnes_g, log_gamma, sph_bessel_closed, sph_bessel_j, sph_bessel_series, BesselOrder};
use crate::zeta_lab::{
    cgg_eta1_closed, cgg_rhs, conjecture3_alpha0_limit, conjecture3_rhs, discrete_deriv_moment,
    discrete_displaced_moment, find_zeros, gonek_rhs, hko_rhs, zero_count_main, DensityScale, ZeroTable,
};

/// Deliberate defects for checking that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Drops the alternating sign of the `F_k` power series.
    FkSeriesSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            fault: None,
        }
    }
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }
}

/// Seed for the single retry of a failed Monte Carlo check.
pub fn derived_seed(seed: u64) -> u64 {
    (seed ^ 0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9).rotate_left(31)
}

struct Verdict {
    passed: bool,
    detail: String,
}

/// Tracks the worst `error / tolerance` over a sweep.
struct Worst {
    ratio: f64,
    err: f64,
    tol: f64,
    at: String,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            ratio: 0.0,
            err: 0.0,
            tol: 0.0,
            at: String::new(),
            count: 0,
        }
    }

    fn see(&mut self, err: f64, tol: f64, at: impl FnOnce() -> String) {
        self.count += 1;
        let r = if err.is_nan() { f64::INFINITY } else { err / tol };
        if r > self.ratio || self.at.is_empty() {
            self.ratio = r;
            self.err = err;
            self.tol = tol;
            self.at = at();
        }
    }

    fn verdict(self) -> Verdict {
        Verdict {
            passed: self.ratio <= 1.0,
            detail: format!(
                "{} points, worst error {:.2e} (tolerance {:.0e}) at {}",
                self.count, self.err, self.tol, self.at
            ),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn grid(lo: f64, step: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

const MC_KS: [f64; 3] = [0.5, 1.0, 2.0];
const MC_BETAS: [f64; 3] = [0.0, 0.5, 1.5];
const MC_SIZES: [usize; 3] = [2, 5, 10];
const MC_SAMPLES: usize = 100_000;
const HAAR_SAMPLES: usize = 100_000;
const LARGE_N_SAMPLES: usize = 16_000;
const ZETA_HEIGHT: f64 = 5000.0;

struct Ctx {
    fault: Option<Fault>,
    zeros: OnceCell<std::result::Result<ZeroTable, String>>,
    batches: std::cell::RefCell<Vec<(u64, std::rc::Rc<Vec<McBatch>>)>>,
}

impl Ctx {
    fn zeros(&self) -> Result<&ZeroTable> {
        match self.zeros.get_or_init(|| find_zeros(10.0, ZETA_HEIGHT).map_err(|e| e.to_string())) {
            Ok(t) => Ok(t),
            Err(e) => Err(crate::Error::Degenerate {
                op: "verify",
                detail: format!("zero table unavailable: {e}"),
            }),
        }
    }

    /// Joint and displaced estimates over the Monte Carlo grid, shared by
    /// the two concordance properties and computed once per seed.
    fn batches(&self, seed: u64) -> Result<std::rc::Rc<Vec<McBatch>>> {
        if let Some((_, b)) = self.batches.borrow().iter().find(|(s, _)| *s == seed) {
            return Ok(b.clone());
        }
        let mut out = Vec::new();
        for (i, &n) in MC_SIZES.iter().enumerate() {
            let plan = McPlan {
                matrix_size: n,
                ks: MC_KS.to_vec(),
                joint_betas: MC_BETAS.to_vec(),
                displaced_xs: MC_BETAS.iter().map(|b| b * n as f64 / 2.0).collect(),
                anchor: Anchor::All,
            };
            out.push(mc_batch(&plan, MC_SAMPLES, &RngStream::new(seed, 100 + i as u64))?);
        }
        let b = std::rc::Rc::new(out);
        self.batches.borrow_mut().push((seed, b.clone()));
        Ok(b)
    }
}

type Det = fn(&Ctx) -> Result<Verdict>;
type Mc = fn(&Ctx, u64) -> Result<Verdict>;

enum Kind {
    Det(Det),
    Mc(Mc),
}

struct Property {
    module: &'static str,
    name: &'static str,
    kind: Kind,
}

/// Name of the property that cross-checks the `F_k` series against the
/// Bessel form.
pub const FK_SERIES_BESSEL: &str = "f_k series-Bessel agreement";

fn properties() -> Vec<Property> {
    use Kind::*;
    let p = |module, name, kind| Property { module, name, kind };
    vec![
        p("specfun", "log-gamma recurrence", Det(gamma_recurrence)),
        p("specfun", "Barnes G recurrence", Det(barnes_recurrence)),
        p("specfun", "Bessel series vs closed form", Det(bessel_series_closed)),
        p("specfun", "Bessel three-term recurrence", Det(bessel_recurrence)),
        p("rmt_exact", "joint moment exact vs trig form", Det(exact_vs_trig)),
        p("rmt_exact", "joint moment vs Weyl quadrature", Det(exact_vs_quadrature)),
        p("rmt_exact", "beta = 0 reduction", Det(beta_zero)),
        p("rmt_exact", "joint moment evenness", Det(evenness)),
        p("rmt_exact", FK_SERIES_BESSEL, Det(fk_series_bessel)),
        p("rmt_exact", "f_k closed forms and limit", Det(fk_closed)),
        p("rmt_exact", "N^{k^2} scaling", Det(scaling)),
        p("rmt_exact", "WZ sum", Det(wz)),
        p("rmt_exact", "finite-N convergence order", Det(convergence)),
        p("rmt_mc", "reproducibility", Det(reproducibility)),
        p("rmt_mc", "Haar trace moments", Mc(haar_traces)),
        p("rmt_mc", "joint moment MC concordance", Mc(mc_joint)),
        p("rmt_mc", "displaced moment MC concordance", Mc(mc_displaced)),
        p("rmt_mc", "displaced moment near leading order at N = 50", Mc(mc_large_n)),
        p("zeta_lab", "zero table integrity", Det(zero_table)),
        p("zeta_lab", "right-hand-side identities", Det(identity_web)),
        p("zeta_lab", "alpha -> 0 limit", Det(small_alpha_limit)),
        p("zeta_lab", "displaced moment tracks Gonek", Det(track_gonek)),
        p("zeta_lab", "derivative moment tracks HKO", Det(track_hko)),
    ]
}

/// `(module, name)` of every property, in run order.
pub fn property_names() -> Vec<(&'static str, &'static str)> {
    properties().into_iter().map(|p| (p.module, p.name)).collect()
}

/// Runs every property, calling `report` as each one finishes.
pub fn run_verify_with(opts: VerifyOptions, mut report: impl FnMut(&CheckOutcome)) -> VerifyReport {
    let ctx = Ctx {
        fault: opts.fault,
        zeros: OnceCell::new(),
        batches: Default::default(),
    };
    let mut out = VerifyReport::default();
    for prop in properties() {
        let start = Instant::now();
        let (passed, detail) = match prop.kind {
            Kind::Det(f) => settle(f(&ctx)),
            Kind::Mc(f) => {
                let (ok, first) = settle(f(&ctx, opts.seed));
                if ok {
                    (true, first)
                } else {
                    let retry = derived_seed(opts.seed);
                    let (ok2, second) = settle(f(&ctx, retry));
                    let word = if ok2 { "passed" } else { "failed" };
                    (
                        ok2,
                        format!("seed {}: failed ({first}); retry seed {retry}: {word} ({second})", opts.seed),
                    )
                }
            }
        };
        let o = CheckOutcome {
            module: prop.module,
            name: prop.name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        };
        report(&o);
        out.outcomes.push(o);
    }
    out
}

pub fn run_verify(opts: VerifyOptions) -> VerifyReport {
    run_verify_with(opts, |_| {})
}

fn settle(v: Result<Verdict>) -> (bool, String) {
    match v {
        Ok(v) => (v.passed, v.detail),
        Err(e) => (false, format!("error: {e}")),
    }
}

fn gamma_recurrence(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for z in grid(0.5, 1.0, 99.5) {
        let r = (log_gamma(z + 1.0)? - log_gamma(z)?).exp();
        w.see(rel(r, z), 1e-12, || format!("z = {z}"));
    }
    Ok(w.verdict())
}

fn barnes_recurrence(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for z in grid(0.5, 0.5, 20.0) {
        let d = log_barnes_g(z + 1.0)? - log_barnes_g(z)? - log_gamma(z)?;
        w.see(d.abs(), 1e-10, || format!("z = {z}"));
    }
    Ok(w.verdict())
}

fn bessel_series_closed(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in 0..=6u32 {
        let order = BesselOrder::new(n as f64)?;
        for x in grid(0.05, 0.05, 30.0) {
            let s = sph_bessel_series(order, x)?;
            let c = sph_bessel_closed(n, x);
            w.see((s - c).abs(), 1e-12, || format!("n = {n}, x = {x:.2}"));
        }
    }
    Ok(w.verdict())
}

fn bessel_recurrence(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for nu in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 0.75] {
        for x in grid(0.1, 0.1, 30.0) {
            let j = |v: f64| sph_bessel_j(BesselOrder::new(v)?, x);
            let jn = j(nu)?;
            let rhs = (2.0 * nu + 1.0) * jn / x;
            // Skip the neighbourhood of zeros of j_n, where the relative
            // comparison is meaningless.
            if jn.abs() * x < 1e-2 {
                continue;
            }
            let lhs = j(nu - 1.0)? + j(nu + 1.0)?;
            w.see(rel(lhs, rhs), 1e-10, || format!("n = {nu}, x = {x:.1}"));
        }
    }
    Ok(w.verdict())
}

const EXACT_KS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

fn exact_vs_trig(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in 1..=12u32 {
        for k in EXACT_KS {
            for beta in grid(0.0, 0.1, 3.1) {
                let a = joint_moment_exact(n, k, beta)?;
                let b = joint_moment_trig_form(n, k, beta)?;
                w.see(rel(b, a), 1e-9, || format!("N = {n}, k = {k}, beta = {beta:.1}"));
            }
        }
    }
    Ok(w.verdict())
}

fn exact_vs_quadrature(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in 1..=3u32 {
        for k in [0.5, 1.0, 2.0] {
            for beta in [0.0, 0.5, 1.5, 3.0] {
                let a = joint_moment_exact(n, k, beta)?;
                let q = weyl_quadrature_moment(n as usize, k, beta, 1024)?;
                w.see(rel(q, a), 1e-8, || format!("N = {n}, k = {k}, beta = {beta}"));
            }
        }
    }
    Ok(w.verdict())
}

fn beta_zero(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in 1..=50u32 {
        for k in [0.5, 1.0, 2.0, 3.0] {
            let a = joint_moment_exact(n, k, 0.0)?;
            let b = moment_mn(n, k + 1.0)?;
            w.see(rel(a, b), 1e-10, || format!("N = {n}, k = {k}"));
        }
    }
    Ok(w.verdict())
}

fn evenness(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in 1..=12u32 {
        for k in EXACT_KS {
            for beta in grid(0.1, 0.1, 3.1) {
                let a = joint_moment_exact(n, k, beta)?;
                let b = joint_moment_exact(n, k, -beta)?;
                w.see(rel(b, a), 1e-12, || format!("N = {n}, k = {k}, beta = {beta:.1}"));
            }
        }
    }
    Ok(w.verdict())
}

fn fk_series_bessel(ctx: &Ctx) -> Result<Verdict> {
    let sign = match ctx.fault {
        Some(Fault::FkSeriesSign) => 1.0,
        None => -1.0,
    };
    let mut w = Worst::new();
    for k in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        for x in grid(0.1, 0.1, 20.0) {
            let s = f_k_series_signed(k, x, sign)?;
            let b = f_k(k, x, FkMethod::Bessel)?;
            w.see((s - b).abs(), 1e-10, || format!("k = {k}, x = {x:.1}"));
        }
    }
    Ok(w.verdict())
}

fn fk_closed(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for k in [1.0, 2.0, 3.0] {
        for x in grid(0.1, 0.1, 20.0) {
            let c = f_k(k, x, FkMethod::Closed)?;
            for m in [FkMethod::Series, FkMethod::Bessel] {
                let v = f_k(k, x, m)?;
                w.see((v - c).abs(), 1e-10, || format!("k = {k}, x = {x:.1}, {m:?} vs closed"));
            }
        }
        let far = f_k(k, 200.0, FkMethod::Bessel)?;
        w.see((far - 1.0).abs(), 0.05, || format!("k = {k}, x = 200"));
    }
    Ok(w.verdict())
}

fn scaling(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for n in [3u32, 10, 25, 50] {
        for k in [0.5, 1.0, 2.0] {
            for x in [0.5, 1.0, 3.0] {
                let r = displaced_moment_leading(2 * n, k, x)? / displaced_moment_leading(n, k, x)?;
                w.see(rel(r, 2f64.powf(k * k)), 1e-12, || format!("N = {n}, k = {k}, x = {x}"));
            }
        }
    }
    Ok(w.verdict())
}

fn wz(_: &Ctx) -> Result<Verdict> {
    let mut w = Worst::new();
    for k in [0.5, 1.0, 2.0, 3.0, 5.0] {
        for p in 0..=30u32 {
            w.see((wz_check(k, p)? - 1.0).abs(), 1e-10, || format!("k = {k}, p = {p}"));
        }
    }
    Ok(w.verdict())
}

/// Relative deviation of the exact displaced moment from its leading term
/// should halve as `N` doubles.
fn convergence(_: &Ctx) -> Result<Verdict> {
    let mut ok = true;
    let mut worst = (0.0f64, String::new());
    for k in [1.0, 2.0] {
        for x in [0.5, 1.0, 5.0] {
            let dev = |n: u32| -> Result<f64> {
                let lead = displaced_moment_leading(n, k, x)?;
                Ok((factorization_rhs(n, k, 2.0 * x / n as f64)? / lead - 1.0).abs())
            };
            let devs = [dev(25)?, dev(50)?, dev(100)?, dev(200)?];
            for i in 0..3 {
                let r = devs[i + 1] / devs[i];
                let off = (r - 0.5).abs();
                if !(0.3..=0.7).contains(&r) {
                    ok = false;
                }
                if off >= worst.0 {
                    worst = (off, format!("ratio {r:.3} at k = {k}, x = {x}, N = {}", 25 << i));
                }
            }
        }
    }
    Ok(Verdict {
        passed: ok,
        detail: format!("ratios must lie in [0.3, 0.7]; furthest from 1/2: {}", worst.1),
    })
}

fn reproducibility(_: &Ctx) -> Result<Verdict> {
    let s = RngStream::new(7, 3);
    let a = mc_joint_moment(5, 1.0, 0.5, 2000, &s)?;
    let b = mc_joint_moment(5, 1.0, 0.5, 2000, &s)?;
    let c = mc_joint_moment(5, 1.0, 0.5, 2000, &RngStream::new(7, 4))?;
    let d = mc_displaced_moment(5, 1.0, 0.5, 2000, &s)?;
    let e = mc_displaced_moment(5, 1.0, 0.5, 2000, &s)?;
    let same = a.mean.to_bits() == b.mean.to_bits()
        && a.std_error.to_bits() == b.std_error.to_bits()
        && d.mean.to_bits() == e.mean.to_bits();
    let separated = a.mean != c.mean;
    Ok(Verdict {
        passed: same && separated,
        detail: format!("repeat bit-identical: {same}; other stream differs: {separated}"),
    })
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn haar_traces(_: &Ctx, seed: u64) -> Result<Verdict> {
    let mut worst = (0.0f64, String::new());
    for (i, &n) in MC_SIZES.iter().enumerate() {
        let mut rng = RngStream::new(seed, 10 + i as u64).rng();
        let mut tr = Vec::with_capacity(HAAR_SAMPLES);
        for _ in 0..HAAR_SAMPLES {
            let s = sample_haar_eigenangles_with(n, &mut rng)?;
            tr.push(s.angles().iter().map(|&a| Complex64::from_polar(1.0, a)).sum::<Complex64>());
        }
        let re: Vec<f64> = tr.iter().map(|t| t.re).collect();
        let im: Vec<f64> = tr.iter().map(|t| t.im).collect();
        let sq: Vec<f64> = tr.iter().map(|t| t.norm_sqr()).collect();
        for (name, xs, want) in [("Re Tr U", &re, 0.0), ("Im Tr U", &im, 0.0), ("|Tr U|^2", &sq, 1.0)] {
            let (m, se) = mean_se(xs);
            let z = (m - want).abs() / se;
            if z >= worst.0 {
                worst = (z, format!("{name} at N = {n}"));
            }
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 3.0,
        detail: format!("largest |z| = {:.2} ({})", worst.0, worst.1),
    })
}

fn mc_joint(ctx: &Ctx, seed: u64) -> Result<Verdict> {
    let batches = ctx.batches(seed)?;
    let mut worst = (0.0f64, String::new());
    for (b, &n) in batches.iter().zip(&MC_SIZES) {
        for (ki, &k) in MC_KS.iter().enumerate() {
            for (bi, &beta) in MC_BETAS.iter().enumerate() {
                let z = b.joint[ki][bi].z_score(joint_moment_exact(n as u32, k, beta)?);
                if z >= worst.0 {
                    worst = (z, format!("N = {n}, k = {k}, beta = {beta}"));
                }
            }
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 3.0,
        detail: format!("largest |z| = {:.2} at {} ({MC_SAMPLES} samples)", worst.0, worst.1),
    })
}

fn mc_displaced(ctx: &Ctx, seed: u64) -> Result<Verdict> {
    let batches = ctx.batches(seed)?;
    let mut worst = (0.0f64, String::new());
    for (b, &n) in batches.iter().zip(&MC_SIZES) {
        for (ki, &k) in MC_KS.iter().enumerate() {
            for (bi, &beta) in MC_BETAS.iter().enumerate() {
                let z = b.displaced[ki][bi].z_score(factorization_rhs(n as u32, k, beta)?);
                if z >= worst.0 {
                    worst = (z, format!("N = {n}, k = {k}, x = {}", beta * n as f64 / 2.0));
                }
            }
        }
    }
    Ok(Verdict {
        passed: worst.0 <= 3.0,
        detail: format!("largest |z| = {:.2} at {} ({MC_SAMPLES} samples)", worst.0, worst.1),
    })
}

fn mc_large_n(_: &Ctx, seed: u64) -> Result<Verdict> {
    let lead = displaced_moment_leading(50, 1.0, 3.0)?;
    let e = mc_displaced_moment(50, 1.0, 3.0, LARGE_N_SAMPLES, &RngStream::new(seed, 200))?;
    let dev = (e.mean / lead - 1.0).abs();
    Ok(Verdict {
        passed: dev < 0.10,
        detail: format!("k = 1, x = 3: MC {:.4} +- {:.4} vs leading {lead:.4} (off by {:.1}%)", e.mean, e.std_error, 100.0 * dev),
    })
}

fn zero_table(ctx: &Ctx) -> Result<Verdict> {
    let t = ctx.zeros()?;
    t.check_invariants()?;
    let mut w = Worst::new();
    for h in [100.0, 1000.0, ZETA_HEIGHT] {
        let n = t.ordinates().iter().filter(|&&g| g <= h).count();
        let diff = (n as f64 - zero_count_main(h)?).abs();
        w.see(diff, 3.0, || format!("T = {h} ({n} zeros)"));
    }
    let mut v = w.verdict();
    v.detail = format!("{} zeros to T = {ZETA_HEIGHT}, |Z| < 1e-6 at each; count check {}", t.len(), v.detail);
    Ok(v)
}

fn identity_web(_: &Ctx) -> Result<Verdict> {
    let t = ZETA_HEIGHT;
    let lt4 = (t / TAU).ln().powi(4);
    let mut w = Worst::new();
    for a in grid(0.1, 0.1, 5.0) {
        w.see(rel(conjecture3_rhs(t, 1.0, a)?, gonek_rhs(t, a)?), 1e-8, || format!("Gonek, alpha = {a:.1}"));
        let c = cgg_eta1_closed(t, a)?;
        let f2 = f_k(2.0, PI * a, FkMethod::Closed)? * lt4 / (2.0 * PI * PI);
        w.see(rel(c, f2), 1e-8, || format!("closed vs F_2, alpha = {a:.1}"));
        w.see(rel(cgg_rhs(t, a, 1.0)?, c), 1e-8, || format!("series vs closed, alpha = {a:.1}"));
    }
    Ok(w.verdict())
}

fn small_alpha_limit(_: &Ctx) -> Result<Verdict> {
    let t = ZETA_HEIGHT;
    let l = DensityScale::new(t)?.value();
    let mut w = Worst::new();
    for k in [1.0, 2.0] {
        let lim = conjecture3_alpha0_limit(t, k)?;
        let a: f64 = 1e-3;
        w.see(rel(conjecture3_rhs(t, k, a)? / a.powf(2.0 * k), lim), 1e-4, || format!("alpha = 1e-3, k = {k}"));
        w.see(rel(l.powf(2.0 * k) * lim, hko_rhs(t, k)?), 1e-10, || format!("L^2k limit vs HKO, k = {k}"));
    }
    Ok(w.verdict())
}

fn track_gonek(ctx: &Ctx) -> Result<Verdict> {
    let t = ctx.zeros()?;
    let mut w = Worst::new();
    let mut ratios = Vec::new();
    for a in [0.25, 0.5, 1.0, 2.0] {
        let r = discrete_displaced_moment(t, 1.0, a)? / gonek_rhs(ZETA_HEIGHT, a)?;
        ratios.push(format!("{a}: {r:.3}"));
        w.see((r - 1.0).abs(), 0.15, || format!("alpha = {a}"));
    }
    let mut v = w.verdict();
    v.detail = format!("ratios [{}]; {}", ratios.join(", "), v.detail);
    Ok(v)
}

fn track_hko(ctx: &Ctx) -> Result<Verdict> {
    let t = ctx.zeros()?;
    let r = discrete_deriv_moment(t, 1.0)? / hko_rhs(ZETA_HEIGHT, 1.0)?;
    Ok(Verdict {
        passed: (r - 1.0).abs() <= 0.20,
        detail: format!("ratio {r:.3} (tolerance 20%)"),
    })
}

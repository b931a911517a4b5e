//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use dismo::rmt_exact::*;
use dismo::rmt_mc::{mc_batch, weyl_quadrature_moment, Anchor, McPlan, RngStream};
use dismo::zeta_lab::*;

struct Line {
    passed: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Worst error over a sweep, each point carrying its own tolerance.
#[derive(Default)]
struct Sweep {
    worst: f64,
    err: f64,
    tol: f64,
    at: String,
}

impl Sweep {
    fn see(&mut self, err: f64, tol: f64, at: impl FnOnce() -> String) {
        let r = if err.is_nan() { f64::INFINITY } else { err / tol };
        if r > self.worst || self.at.is_empty() {
            self.worst = r;
            self.err = err;
            self.tol = tol;
            self.at = at();
        }
    }

    fn ok(&self) -> bool {
        self.worst <= 1.0
    }

    fn line(self) -> Line {
        Line {
            passed: self.ok(),
            detail: format!("worst {:.2e} against {:e} at {}", self.err, self.tol, self.at),
        }
    }
}

fn within(line: Line, budget: Duration, took: Duration) -> Line {
    if took <= budget {
        line
    } else {
        Line {
            passed: false,
            detail: format!("{}; took {:.0?}, budget {:.0?}", line.detail, took, budget),
        }
    }
}

fn c1_oracle_equivalence() -> Line {
    let mut s = Sweep::default();
    for n in 1..=3u32 {
        let tol = if n <= 2 { 1e-8 } else { 1e-6 };
        for k in [0.5, 1.0, 2.0] {
            for beta in [0.0, 0.5, 1.5, 3.0] {
                let q = weyl_quadrature_moment(n as usize, k, beta, 1024).unwrap();
                let e = joint_moment_exact(n, k, beta).unwrap();
                let t = joint_moment_trig_form(n, k, beta).unwrap();
                s.see(rel(e, q), tol, || format!("exact, N={n} k={k} beta={beta}"));
                s.see(rel(t, q), tol, || format!("trig, N={n} k={k} beta={beta}"));
            }
        }
    }
    s.line()
}

fn c2_beta_zero() -> Line {
    let mut s = Sweep::default();
    for n in 1..=50u32 {
        for k in [0.5, 1.0, 2.0, 3.0] {
            let a = joint_moment_exact(n, k, 0.0).unwrap();
            let b = moment_mn(n, k + 1.0).unwrap();
            s.see(rel(a, b), 1e-10, || format!("N={n} k={k}"));
        }
    }
    s.line()
}

fn c3_fk_triple() -> Line {
    let mut s = Sweep::default();
    let methods = [FkMethod::Series, FkMethod::Bessel, FkMethod::Closed];
    for k in [1.0, 2.0, 3.0] {
        for i in 1..=400 {
            let x = 0.05 * i as f64;
            let v: Vec<f64> = methods.iter().map(|&m| f_k(k, x, m).unwrap()).collect();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                s.see((v[a] - v[b]).abs(), 1e-10, || {
                    format!("k={k} x={x:.2} {:?}/{:?}", methods[a], methods[b])
                });
            }
        }
        for m in [FkMethod::Bessel, FkMethod::Closed] {
            let far = f_k(k, 200.0, m).unwrap();
            s.see((far - 1.0).abs(), 0.05, || format!("k={k} x=200 {m:?}"));
        }
    }
    s.line()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// The WZ sum evaluated exactly over the rationals.
fn wz_rational(k: u64, p: u64) -> BigRational {
    let mut sum = BigRational::zero();
    for n in 0..=p {
        let num = factorial(k + n) * factorial(p) * factorial(2 * k + p);
        let den = BigInt::from(k) * factorial(p - n) * factorial(n) * factorial(2 * k + n) * factorial(k - 1 + p);
        let term = BigRational::new(num, den);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

fn c4_wz() -> Line {
    let mut s = Sweep::default();
    for k in [0.5, 1.0, 2.0, 3.0, 5.0] {
        for p in 0..=30u32 {
            s.see((wz_check(k, p).unwrap() - 1.0).abs(), 1e-10, || format!("k={k} p={p}"));
        }
    }
    let mut exact = true;
    for k in [1u64, 2, 3, 5] {
        for p in 0..=30u64 {
            exact &= wz_rational(k, p).is_one();
        }
    }
    let mut line = s.line();
    line.passed &= exact;
    line.detail = format!("{}; rational oracle exactly 1: {exact}", line.detail);
    line
}

fn c5_barnes_coefficients() -> Line {
    let mut s = Sweep::default();
    let nine_fact = 362_880.0;
    for (k, want) in [(1.0, 1.0), (2.0, 1.0 / 12.0), (3.0, 42.0 / nine_fact)] {
        s.see(rel(leading_coeff(k).unwrap(), want), 1e-10, || format!("f_{k}"));
    }
    for t in [1e3, 5e3, 1e5] {
        let lt: f64 = (t / TAU).ln();
        let c = hko_rhs(t, 2.0).unwrap() / lt.powi(8);
        s.see(rel(c, 1.0 / (1440.0 * PI * PI)), 1e-10, || format!("HKO k=2 at T={t}"));
    }
    s.line()
}

const MC_SIZES: [usize; 3] = [2, 5, 10];
const MC_KS: [f64; 3] = [0.5, 1.0, 2.0];
const MC_BETAS: [f64; 3] = [0.0, 0.5, 1.5];

fn c6_monte_carlo() -> Line {
    let samples = 1_000_000;
    let mut worst = (0.0f64, String::new());
    for &n in &MC_SIZES {
        let plan = McPlan {
            matrix_size: n,
            ks: MC_KS.to_vec(),
            joint_betas: MC_BETAS.to_vec(),
            displaced_xs: MC_BETAS.iter().map(|b| b * n as f64 / 2.0).collect(),
            anchor: Anchor::All,
        };
        let b = mc_batch(&plan, samples, &RngStream::new(2024, n as u64)).unwrap();
        for (ki, &k) in MC_KS.iter().enumerate() {
            for (bi, &beta) in MC_BETAS.iter().enumerate() {
                let nn = n as u32;
                let zj = b.joint[ki][bi].z_score(joint_moment_exact(nn, k, beta).unwrap());
                let zd = b.displaced[ki][bi].z_score(factorization_rhs(nn, k, beta).unwrap());
                for (z, what) in [(zj, "joint"), (zd, "displaced")] {
                    if z >= worst.0 {
                        worst = (z, format!("{what} N={n} k={k} beta={beta}"));
                    }
                }
            }
        }
    }
    Line {
        passed: worst.0 <= 3.0,
        detail: format!("largest |z| {:.2} at {} over 54 estimates of 1e6 samples", worst.0, worst.1),
    }
}

fn c7_convergence_order() -> Line {
    let mut ok = true;
    let mut far = (0.0f64, String::new());
    for k in [1.0, 2.0] {
        for x in [0.5, 1.0, 5.0] {
            let dev = |n: u32| {
                let lead = displaced_moment_leading(n, k, x).unwrap();
                (factorization_rhs(n, k, 2.0 * x / n as f64).unwrap() / lead - 1.0).abs()
            };
            let d: Vec<f64> = [25, 50, 100, 200].into_iter().map(dev).collect();
            for i in 0..3 {
                let r = d[i + 1] / d[i];
                ok &= (0.3..=0.7).contains(&r);
                if (r - 0.5).abs() >= far.0 {
                    far = ((r - 0.5).abs(), format!("{r:.3} at k={k} x={x} N={}", 25 << i));
                }
            }
        }
    }
    Line {
        passed: ok,
        detail: format!("ratios in [0.3, 0.7]; furthest from 1/2: {}", far.1),
    }
}

fn c8_arith() -> Line {
    let a2 = arith_a(ArithParams::new(2.0, 100_000, 1e-15).unwrap()).unwrap();
    let a1 = arith_a(ArithParams::new(1.0, 100_000, 1e-15).unwrap()).unwrap();
    let mut s = Sweep::default();
    s.see((a2.value - 6.0 / (PI * PI)).abs(), 1e-4, || "a(2)".into());
    s.see((a1.value - 1.0).abs(), 1e-8, || "a(1)".into());
    s.line()
}

/// Zeros by a 0.005 sign scan of `Z` and bisection.
fn scan_zeros(a: f64, b: f64) -> Vec<f64> {
    let step = 0.005;
    let mut out = Vec::new();
    let (mut t0, mut z0) = (a, hardy_z(a).unwrap());
    while t0 < b {
        let t1 = (t0 + step).min(b);
        let z1 = hardy_z(t1).unwrap();
        if z0 * z1 < 0.0 {
            let (mut lo, mut hi, mut zlo) = (t0, t1, z0);
            while hi - lo > 1e-11 {
                let m = 0.5 * (lo + hi);
                let zm = hardy_z(m).unwrap();
                if zm * zlo > 0.0 {
                    lo = m;
                    zlo = zm;
                } else {
                    hi = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        t0 = t1;
        z0 = z1;
    }
    out
}

fn c9_zeros() -> Line {
    let found = find_zeros(10.0, 100.0).unwrap();
    let oracle = scan_zeros(10.0, 100.0);
    let mut s = Sweep::default();
    s.see((found.len() as f64 - 29.0).abs(), 0.5, || format!("count {}", found.len()));
    s.see((oracle.len() as f64 - 29.0).abs(), 0.5, || format!("oracle count {}", oracle.len()));
    s.see((found.ordinates()[0] - 14.134725).abs(), 1e-5, || "gamma_1".into());
    for (g, o) in found.ordinates().iter().zip(&oracle) {
        s.see((g - o).abs(), 1e-6, || format!("zero near {g:.4} vs scan"));
    }
    let table = find_zeros(10.0, 5000.0).unwrap();
    let inv = table.check_invariants();
    for t in [100.0, 1000.0, 5000.0] {
        let n = table.ordinates().iter().filter(|&&g| g <= t).count() as f64;
        s.see((n - zero_count_main(t).unwrap()).abs(), 3.0, || format!("count to T={t}"));
    }
    let mut line = s.line();
    line.passed &= inv.is_ok();
    line.detail = format!("{}; {} zeros to 5000, invariants {:?}", line.detail, table.len(), inv);
    line
}

fn c10_zeta_experiment() -> Line {
    let t = 5000.0;
    let table = find_zeros(10.0, t).unwrap();
    let mut s = Sweep::default();
    let mut ratios = Vec::new();
    for a in [0.25, 0.5, 1.0, 2.0] {
        let r = discrete_displaced_moment(&table, 1.0, a).unwrap() / gonek_rhs(t, a).unwrap();
        ratios.push(format!("{a}:{r:.3}"));
        s.see((r - 1.0).abs(), 0.15, || format!("alpha={a}"));
    }
    let d = discrete_deriv_moment(&table, 1.0).unwrap() / hko_rhs(t, 1.0).unwrap();
    s.see((d - 1.0).abs(), 0.20, || "derivative moment".into());
    let mut line = s.line();
    line.detail = format!("{}; displaced/Gonek [{}], derivative/HKO {d:.3}", line.detail, ratios.join(" "));
    line
}

fn c11_cgg_web() -> Line {
    let mut s = Sweep::default();
    for t in [5e3, 1e4] {
        let lt4 = (t / TAU).ln().powi(4);
        for i in 0..=98 {
            let a = 0.1 + 0.05 * i as f64;
            let series = cgg_rhs(t, a, 1.0).unwrap();
            let closed = cgg_eta1_closed(t, a).unwrap();
            let shape = f_k(2.0, PI * a, FkMethod::Series).unwrap() * lt4 / (2.0 * PI * PI);
            s.see(rel(series, closed), 1e-8, || format!("series/closed alpha={a:.2}"));
            s.see(rel(closed, shape), 1e-8, || format!("closed/F_2 alpha={a:.2}"));
            s.see(rel(series, shape), 1e-8, || format!("series/F_2 alpha={a:.2}"));
        }
    }
    s.line()
}

fn c12_small_alpha_limit() -> Line {
    let t = 5000.0;
    let l = DensityScale::new(t).unwrap().value();
    let mut s = Sweep::default();
    for k in [1.0, 2.0] {
        // Richardson on g(alpha) = rhs / alpha^{2k} = c (1 + O(alpha^2)).
        let g = |a: f64| conjecture3_rhs(t, k, a).unwrap() / a.powf(2.0 * k);
        let a = 1e-3;
        let lim = (4.0 * g(a / 2.0) - g(a)) / 3.0;
        let hko = hko_rhs(t, k).unwrap();
        s.see(rel(l.powf(2.0 * k) * lim, hko), 1e-10, || format!("numerical limit, k={k}"));
        let closed = conjecture3_alpha0_limit(t, k).unwrap();
        s.see(rel(l.powf(2.0 * k) * closed, hko), 1e-10, || format!("closed limit, k={k}"));
    }
    s.line()
}

type Criterion = (&'static str, fn() -> Line, Duration);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        ("exact-formula oracle equivalence", c1_oracle_equivalence, secs(120)),
        ("beta = 0 reduction", c2_beta_zero, secs(60)),
        ("F_k triple agreement and limit", c3_fk_triple, secs(60)),
        ("WZ identity", c4_wz, secs(60)),
        ("Barnes coefficients", c5_barnes_coefficients, secs(60)),
        ("Monte Carlo concordance", c6_monte_carlo, secs(15 * 60)),
        ("convergence order in N", c7_convergence_order, secs(60)),
        ("arithmetic factor", c8_arith, secs(60)),
        ("zeta zero machinery", c9_zeros, secs(5 * 60)),
        ("zeta-side experiment", c10_zeta_experiment, secs(10 * 60)),
        ("CGG identity web", c11_cgg_web, secs(60)),
        ("small-alpha limit identity", c12_small_alpha_limit, secs(60)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let line = within(run(), budget, start.elapsed());
        let mark = if line.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {mark}  {name}: {} [{:.1} s]",
            i + 1,
            line.detail,
            start.elapsed().as_secs_f64()
        );
        if !line.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

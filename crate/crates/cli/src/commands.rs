//! The experiment drivers behind each `--command`.

use std::f64::consts::PI;
use std::path::PathBuf;

use dismo::rmt_exact::{
    displaced_moment_leading, factorization_rhs_with, joint_moment_asymptotic, joint_moment_exact,
    joint_moment_trig_form, JointForm,
};
use dismo::rmt_mc::{mc_batch, Anchor, McPlan, RngStream};
use dismo::verify::{run_verify_with, CheckOutcome, Fault, VerifyOptions, VerifyReport};
use dismo::zeta_lab::{
    conjecture3_rhs, discrete_deriv_moment, discrete_displaced_moment, find_zeros, gonek_rhs, hko_rhs, DensityScale,
    ZeroTable,
};
use dismo::Error;

use crate::range::Range;
use crate::table::{fmt_num, Cell, Format, Table};

/// Column layout of the random-matrix tables. Changing it is a format
/// break; the schema test pins it.
pub const RMT_COLUMNS: [&str; 9] = [
    "N",
    "k",
    "displacement",
    "exact",
    "trig",
    "asymptotic",
    "mc_mean",
    "mc_std_error",
    "seed",
];

pub const ZETA_COLUMNS: [&str; 6] = ["alpha", "k", "empirical", "conjecture3_rhs", "gonek_rhs", "ratio"];

pub const ZEROS_COLUMNS: [&str; 1] = ["gamma"];

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    RmtExact,
    RmtMc,
    ZetaZeros,
    ZetaMoment,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::RmtExact => "rmt-exact",
            Command::RmtMc => "rmt-mc",
            Command::ZetaZeros => "zeta-zeros",
            Command::ZetaMoment => "zeta-moment",
            Command::Verify => "verify",
        }
    }
}

/// Which random-matrix moment a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `E |Z(0)|^{2k} |Z(beta)|^2`.
    Joint,
    /// `E |Z(theta_1 + beta)|^{2k}` next to an eigenangle.
    Displaced,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Joint => "joint",
            Mode::Displaced => "displaced",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub mode: Mode,
    pub n: Range,
    pub k: Range,
    pub beta: Range,
    pub alpha: Range,
    pub samples: usize,
    pub seed: u64,
    pub t_min: f64,
    pub t_max: f64,
    pub zeros_file: Option<PathBuf>,
    pub format: Format,
    pub fault: Option<Fault>,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad configuration or input file.
    Invalid(String),
    /// An evaluator refused or failed.
    Numeric(Error),
    /// The verification suite found a failing property.
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Numeric(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(s) => write!(f, "invalid configuration: {s}"),
            Failure::Numeric(e) => write!(f, "{e}"),
            Failure::Verification(s) => write!(f, "verification failed: {s}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format { .. } | Error::Io(_) => Failure::Invalid(e.to_string()),
            e => Failure::Numeric(e),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.command == Command::RmtMc && self.samples < MIN_SAMPLES {
            return Err(Failure::Invalid(format!(
                "--samples {} is below the minimum of {MIN_SAMPLES}",
                self.samples
            )));
        }
        if matches!(self.command, Command::RmtExact | Command::RmtMc) {
            self.n.sizes().map_err(Failure::Invalid)?;
        }
        let zeta = matches!(self.command, Command::ZetaZeros | Command::ZetaMoment);
        if zeta && self.zeros_file.is_none() {
            if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min < self.t_max) {
                return Err(Failure::Invalid(format!(
                    "--t-min {} must be below --t-max {}",
                    self.t_min, self.t_max
                )));
            }
            if self.t_min < 10.0 || self.t_max > 1e5 {
                return Err(Failure::Invalid("zero search needs 10 <= t-min < t-max <= 1e5".into()));
            }
        }
        if self.command == Command::ZetaZeros && self.zeros_file.is_some() {
            return Err(Failure::Invalid("--zeros-file applies to zeta-moment only".into()));
        }
        Ok(())
    }

    /// Configuration echo for the metadata header. Wall time is reported on
    /// the error stream instead so that outputs stay byte-identical.
    fn meta(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("tool".to_string(), format!("dismo {}", env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), self.command.name().to_string()),
        ];
        let mut put = |k: &str, v: String| m.push((k.to_string(), v));
        match self.command {
            Command::RmtExact | Command::RmtMc => {
                put("mode", self.mode.name().into());
                put("n", self.n.to_string());
                put("k", self.k.to_string());
                put("beta", self.beta.to_string());
                if self.command == Command::RmtMc {
                    put("samples", self.samples.to_string());
                    put("seed", self.seed.to_string());
                }
            }
            Command::ZetaZeros => {
                put("t_min", fmt_num(self.t_min));
            }
            Command::ZetaMoment => {
                put("k", self.k.to_string());
                put("alpha", self.alpha.to_string());
                match &self.zeros_file {
                    Some(p) => put("zeros_file", p.display().to_string()),
                    None => {
                        put("t_min", fmt_num(self.t_min));
                        put("t_max", fmt_num(self.t_max));
                    }
                }
            }
            Command::Verify => put("seed", self.seed.to_string()),
        }
        m
    }
}

/// What a command produced: the rendered output and whether it counts as
/// a success.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failure: Option<Failure>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    cfg.validate()?;
    let table = match cfg.command {
        Command::RmtExact => rmt_table(cfg, false)?,
        Command::RmtMc => rmt_table(cfg, true)?,
        Command::ZetaZeros => zeros_table(cfg)?,
        Command::ZetaMoment => zeta_table(cfg)?,
        Command::Verify => return verify(cfg),
    };
    Ok(Outcome {
        bytes: table.render(cfg.format),
        failure: None,
    })
}

fn chord_pow(k: f64, beta: f64) -> Result<f64, Error> {
    let chord = (2.0 * (0.5 * beta).sin()).abs();
    if k == 0.0 {
        Ok(1.0)
    } else if chord == 0.0 && k < 0.0 {
        Err(Error::Singularity {
            op: "displaced moment",
            detail: format!("k = {k} at zero displacement"),
        })
    } else {
        Ok(chord.powf(2.0 * k))
    }
}

/// Exact displaced moment; at `N = 1` it is `|2 sin(beta/2)|^{2k}`.
fn displaced_exact(form: JointForm, n: u32, k: f64, beta: f64) -> Result<f64, Error> {
    if n == 1 {
        chord_pow(k, beta)
    } else {
        factorization_rhs_with(form, n, k, beta)
    }
}

fn rmt_table(cfg: &ExperimentConfig, with_mc: bool) -> Result<Table, Failure> {
    let sizes = cfg.n.sizes().map_err(Failure::Invalid)?;
    let ks = cfg.k.values();
    let betas = cfg.beta.values();
    let mut table = Table::new(cfg.meta(), &RMT_COLUMNS);
    for n in sizes {
        let nf = n as f64;
        let mc = if with_mc {
            let xs: Vec<f64> = betas.iter().map(|b| b * nf / 2.0).collect();
            let plan = McPlan {
                matrix_size: n as usize,
                ks: ks.clone(),
                joint_betas: if cfg.mode == Mode::Joint { betas.clone() } else { Vec::new() },
                displaced_xs: if cfg.mode == Mode::Displaced { xs } else { Vec::new() },
                anchor: Anchor::All,
            };
            Some(mc_batch(&plan, cfg.samples, &RngStream::new(cfg.seed, n as u64))?)
        } else {
            None
        };
        for (ki, &k) in ks.iter().enumerate() {
            for (bi, &beta) in betas.iter().enumerate() {
                let (exact, trig, asym) = match cfg.mode {
                    Mode::Joint => (
                        joint_moment_exact(n, k, beta)?,
                        joint_moment_trig_form(n, k, beta)?,
                        Some(joint_moment_asymptotic(n, k, beta * nf)?),
                    ),
                    Mode::Displaced => {
                        let x = beta * nf / 2.0;
                        let lead = if x.abs() < PI * nf {
                            Some(displaced_moment_leading(n, k, x)?)
                        } else {
                            None
                        };
                        (
                            displaced_exact(JointForm::Exact, n, k, beta)?,
                            displaced_exact(JointForm::Trig, n, k, beta)?,
                            lead,
                        )
                    }
                };
                let (mean, se, seed) = match &mc {
                    Some(b) => {
                        let e = match cfg.mode {
                            Mode::Joint => &b.joint[ki][bi],
                            Mode::Displaced => &b.displaced[ki][bi],
                        };
                        (Cell::Num(e.mean), Cell::Num(e.std_error), Cell::Int(cfg.seed))
                    }
                    None => (Cell::Empty, Cell::Empty, Cell::Empty),
                };
                table.push(vec![
                    Cell::Int(n as u64),
                    Cell::Num(k),
                    Cell::Num(beta),
                    Cell::Num(exact),
                    Cell::Num(trig),
                    asym.into(),
                    mean,
                    se,
                    seed,
                ]);
            }
        }
    }
    Ok(table)
}

fn zeros_table(cfg: &ExperimentConfig) -> Result<Table, Failure> {
    let zeros = find_zeros(cfg.t_min, cfg.t_max)?;
    let mut meta = cfg.meta();
    meta.push(("t_max".into(), fmt_num(zeros.t_max())));
    meta.push(("count".into(), zeros.len().to_string()));
    let mut table = Table::new(meta, &ZEROS_COLUMNS);
    for &g in zeros.ordinates() {
        table.push(vec![Cell::Text(format!("{g:.12}"))]);
    }
    Ok(table)
}

fn zeta_table(cfg: &ExperimentConfig) -> Result<Table, Failure> {
    let zeros = match &cfg.zeros_file {
        Some(p) => ZeroTable::read_file(p)?,
        None => find_zeros(cfg.t_min, cfg.t_max)?,
    };
    if zeros.is_empty() {
        return Err(Failure::Invalid("the zero table is empty".into()));
    }
    let t = zeros.t_max();
    let l = DensityScale::new(t)?.value();
    let ks = cfg.k.values();
    let alphas = cfg.alpha.values();
    if let Some(a) = alphas.iter().find(|a| a.abs() > l) {
        log::warn!("alpha = {a} exceeds L = {l:.4}, outside the range where the conjecture is stated uniformly");
    }
    let mut table = Table::new(cfg.meta(), &ZETA_COLUMNS);
    for &k in &ks {
        for &a in &alphas {
            let emp = discrete_displaced_moment(&zeros, k, a)?;
            let rhs = conjecture3_rhs(t, k, a)?;
            let gonek = if k == 1.0 { Some(gonek_rhs(t, a)?) } else { None };
            let ratio = if rhs != 0.0 { Some(emp / rhs) } else { None };
            table.push(vec![
                Cell::Num(a),
                Cell::Num(k),
                Cell::Num(emp),
                Cell::Num(rhs),
                gonek.into(),
                ratio.into(),
            ]);
        }
    }
    let s = &mut table.summary;
    s.push(("T".into(), fmt_num(t)));
    s.push(("zero_count".into(), zeros.len().to_string()));
    s.push(("L".into(), fmt_num(l)));
    for &k in &ks {
        let d = discrete_deriv_moment(&zeros, k)?;
        let h = hko_rhs(t, k)?;
        s.push((
            format!("deriv_moment[k={}]", fmt_num(k)),
            format!("{} (hko_rhs {}, ratio {})", fmt_num(d), fmt_num(h), fmt_num(d / h)),
        ));
    }
    Ok(table)
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_outcome(o: &CheckOutcome) {
    println!("{:<5} {:<10} {:<46} {:>7.2}s  {}", status(o.passed), o.module, o.name, o.seconds, o.detail);
}

/// Properties of this harness itself, appended to the library suite.
fn cli_checks(seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut check = |name: &'static str, f: &dyn Fn() -> Result<(bool, String), Failure>| {
        let start = std::time::Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        out.push(CheckOutcome {
            module: "cli",
            name,
            passed,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        });
    };
    let probe = |command: Command| ExperimentConfig {
        command,
        mode: Mode::Displaced,
        n: "2:1:3".parse().expect("literal range"),
        k: "0.5:0.5:1".parse().expect("literal range"),
        beta: "0.5".parse().expect("literal range"),
        alpha: "1".parse().expect("literal range"),
        samples: MIN_SAMPLES,
        seed,
        t_min: 10.0,
        t_max: 100.0,
        zeros_file: None,
        format: Format::Csv,
        fault: None,
    };
    check("output determinism", &|| {
        let mut same = true;
        for c in [Command::RmtMc, Command::RmtExact, Command::ZetaMoment] {
            let a = run(&probe(c))?.bytes;
            let b = run(&probe(c))?.bytes;
            same &= a == b;
        }
        Ok((same, format!("repeated runs byte-identical: {same}")))
    });
    check("CSV schema", &|| {
        let text = String::from_utf8(run(&probe(Command::RmtMc))?.bytes).unwrap_or_default();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
        let want = RMT_COLUMNS.join(",");
        Ok((header == want, format!("header '{header}'")))
    });
    out
}

fn verify(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let opts = VerifyOptions {
        seed: cfg.seed,
        fault: cfg.fault,
    };
    let mut report: VerifyReport = run_verify_with(opts, print_outcome);
    for o in cli_checks(cfg.seed) {
        print_outcome(&o);
        report.outcomes.push(o);
    }
    let n_pass = report.outcomes.iter().filter(|o| o.passed).count();
    println!("{n_pass}/{} properties passed", report.outcomes.len());

    let mut table = Table::new(cfg.meta(), &["module", "property", "result", "detail"]);
    for o in &report.outcomes {
        table.push(vec![
            Cell::Text(o.module.into()),
            Cell::Text(o.name.into()),
            Cell::Text(status(o.passed).into()),
            Cell::Text(o.detail.clone()),
        ]);
    }
    let failure = report
        .first_failure()
        .map(|o| Failure::Verification(format!("first failing property: {} / {}", o.module, o.name)));
    Ok(Outcome {
        bytes: table.render(cfg.format),
        failure,
    })
}

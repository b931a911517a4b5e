//! Locating zeros of `Z(t)` and storing them.

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;

use super::zeta::{hardy_z, theta, zero_count_main, T_MIN};
use crate::error::{check_finite, Error, Result};

/// Upper end of the supported search range.
pub const T_LIMIT: f64 = 1e5;
/// Bisection stops once the bracket is this narrow.
const ZERO_TOL: f64 = 1e-9;
/// Largest `|Z|` accepted at a stored ordinate.
pub const ZERO_RESIDUAL: f64 = 1e-6;
/// Allowed disagreement between the table size and the smooth count.
pub const COUNT_SLACK: f64 = 3.0;
/// Ordinates closer than this suggest a multiple zero.
pub const MIN_SEPARATION: f64 = 1e-6;
/// Sub-intervals per Gram interval on the first pass.
const BASE_SPLIT: usize = 2;
/// Each refinement multiplies the resolution by 4, up to 4^REFINEMENTS.
const REFINEMENTS: u32 = 4;
/// Imported tables re-evaluate every this-many-th ordinate.
pub const SPOT_STRIDE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSource {
    Computed,
    Imported,
}

/// Ordinates of zeta zeros in increasing order, up to height `t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    t_max: f64,
    source: ZeroSource,
}

impl ZeroTable {
    /// Builds a table, rejecting ordinates that are not strictly
    /// increasing or exceed `t_max`.
    pub fn new(ordinates: Vec<f64>, t_max: f64, source: ZeroSource) -> Result<Self> {
        const OP: &str = "ZeroTable::new";
        check_finite(OP, "t_max", t_max)?;
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Format {
                    line: i + 2,
                    detail: format!("{} does not exceed {}", w[1], w[0]),
                });
            }
        }
        if let Some(&last) = ordinates.last() {
            if last > t_max {
                return Err(Error::domain(OP, format!("ordinate {last} exceeds t_max = {t_max}")));
            }
        }
        if let Some(&first) = ordinates.first() {
            if !(first > 0.0) {
                return Err(Error::domain(OP, format!("ordinate {first} is not positive")));
            }
        }
        Ok(ZeroTable {
            ordinates,
            t_max,
            source,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Re-evaluates `Z` at every ordinate and, for a table starting at the
    /// first zero, compares its size with the smooth count.
    pub fn check_invariants(&self) -> Result<()> {
        const OP: &str = "ZeroTable::check_invariants";
        for &g in &self.ordinates {
            let z = hardy_z(g)?;
            if !(z.abs() < ZERO_RESIDUAL) {
                return Err(Error::Degenerate {
                    op: OP,
                    detail: format!("|Z({g})| = {:e} is not below {ZERO_RESIDUAL:e}", z.abs()),
                });
            }
        }
        check_separation(&self.ordinates)?;
        if self.ordinates.first().is_some_and(|&g| g < 15.0) {
            let expected = zero_count_main(self.t_max)?;
            let found = self.len();
            if (found as f64 - expected).abs() > COUNT_SLACK {
                return Err(Error::MissedZeros {
                    t_min: 0.0,
                    t_max: self.t_max,
                    found,
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Reads a table: one ordinate per line under an optional `gamma`
    /// header, `#` lines are comments, and a `# t_max = <value>` comment
    /// sets the height (otherwise the last ordinate). Every 100th ordinate
    /// is re-evaluated.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut ords = Vec::new();
        let mut t_max = None;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            if let Some(c) = s.strip_prefix('#') {
                if let Some(v) = c.trim().strip_prefix("t_max") {
                    let v = v.trim().trim_start_matches(['=', ':']).trim();
                    t_max = Some(v.parse::<f64>().map_err(|e| Error::Format {
                        line: i + 1,
                        detail: format!("bad t_max '{v}': {e}"),
                    })?);
                }
                continue;
            }
            if ords.is_empty() && s == "gamma" {
                continue;
            }
            let g: f64 = s.parse().map_err(|e| Error::Format {
                line: i + 1,
                detail: format!("'{s}': {e}"),
            })?;
            if !g.is_finite() {
                return Err(Error::Format {
                    line: i + 1,
                    detail: format!("'{s}' is not finite"),
                });
            }
            if let Some(&prev) = ords.last() {
                if !(g > prev) {
                    return Err(Error::Format {
                        line: i + 1,
                        detail: format!("{g} does not exceed the previous ordinate {prev}"),
                    });
                }
            }
            ords.push(g);
        }
        let t_max = t_max.or(ords.last().copied()).unwrap_or(0.0);
        let table = ZeroTable::new(ords, t_max, ZeroSource::Imported)?;
        table.spot_check()?;
        Ok(table)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read(std::io::BufReader::new(f))
    }

    fn spot_check(&self) -> Result<()> {
        for &g in self.ordinates.iter().step_by(SPOT_STRIDE) {
            let z = hardy_z(g)?;
            if !(z.abs() < ZERO_RESIDUAL) {
                return Err(Error::Degenerate {
                    op: "ZeroTable::read",
                    detail: format!("imported ordinate {g} is not a zero: |Z| = {:e}", z.abs()),
                });
            }
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# zeros of Z(t), {} ordinates", self.len())?;
        writeln!(w, "# t_max = {}", self.t_max)?;
        for g in &self.ordinates {
            writeln!(w, "{g:.12}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_separation(ords: &[f64]) -> Result<()> {
    for w in ords.windows(2) {
        if w[1] - w[0] <= MIN_SEPARATION {
            return Err(Error::MultipleZero { a: w[0], b: w[1] });
        }
    }
    Ok(())
}

/// Solves `theta(g) = m pi` by Newton's method.
fn gram_point(m: i64, guess: f64) -> f64 {
    let target = m as f64 * PI;
    let mut t = guess;
    for _ in 0..50 {
        let d = 0.5 * (t / (2.0 * PI)).ln();
        let step = (theta(t) - target) / d;
        t -= step;
        if step.abs() < 1e-12 * t {
            break;
        }
    }
    t
}

/// A stretch of the line whose zero count is predicted in advance.
struct Segment {
    nodes: Vec<f64>,
    expected: usize,
    /// Whether `expected` is exact (a Gram block) or an estimate.
    exact: bool,
}

fn sign(z: f64) -> bool {
    z >= 0.0
}

/// Bisects a bracketing interval of `Z` down to [`ZERO_TOL`].
fn bisect(mut a: f64, mut b: f64, mut za: f64) -> Result<f64> {
    while b - a > ZERO_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let zm = hardy_z(m)?;
        if zm == 0.0 {
            return Ok(m);
        }
        if sign(zm) == sign(za) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sign changes on an evenly subdivided copy of `nodes`.
fn brackets(nodes: &[f64], split: usize) -> Result<Vec<(f64, f64, f64)>> {
    let mut pts = Vec::with_capacity((nodes.len() - 1) * split + 1);
    for w in nodes.windows(2) {
        for s in 0..split {
            pts.push(w[0] + (w[1] - w[0]) * s as f64 / split as f64);
        }
    }
    pts.push(*nodes.last().expect("segment has nodes"));
    let vals: Vec<f64> = pts.iter().map(|&t| hardy_z(t)).collect::<Result<_>>()?;
    Ok(pts
        .windows(2)
        .zip(vals.windows(2))
        .filter(|(_, v)| sign(v[0]) != sign(v[1]))
        .map(|(p, v)| (p[0], p[1], v[0]))
        .collect())
}

fn search_segment(seg: &Segment) -> Result<Vec<f64>> {
    let mut split = BASE_SPLIT;
    let mut found = brackets(&seg.nodes, split)?;
    for _ in 0..REFINEMENTS {
        if found.len() >= seg.expected {
            break;
        }
        split *= 4;
        found = brackets(&seg.nodes, split)?;
    }
    if seg.exact && found.len() != seg.expected {
        log::warn!(
            target: "dismo::zeta_lab",
            "Gram block [{}, {}] holds {} sign changes, expected {}",
            seg.nodes[0],
            seg.nodes[seg.nodes.len() - 1],
            found.len(),
            seg.expected
        );
    }
    found.into_iter().map(|(a, b, za)| bisect(a, b, za)).collect()
}

/// All zeros of `Z` in `[t_min, t_max]`.
///
/// The range is cut at Gram points; between consecutive good Gram points
/// (`(-1)^m Z(g_m) > 0`) Rosser's rule predicts exactly one zero per Gram
/// interval, and blocks that come up short are rescanned at 4x, 16x, ...
/// resolution. The total is checked against the smooth count.
pub fn find_zeros(t_min: f64, t_max: f64) -> Result<ZeroTable> {
    const OP: &str = "find_zeros";
    check_finite(OP, "t_min", t_min)?;
    check_finite(OP, "t_max", t_max)?;
    if !(T_MIN <= t_min && t_min < t_max && t_max <= T_LIMIT) {
        return Err(Error::domain(
            OP,
            format!("need {T_MIN} <= t_min < t_max <= {T_LIMIT}, got [{t_min}, {t_max}]"),
        ));
    }
    let segments = segments(t_min, t_max)?;
    let parts: Vec<Vec<f64>> = segments
        .par_iter()
        .map(search_segment)
        .collect::<Result<_>>()?;
    let mut ords: Vec<f64> = parts.into_iter().flatten().collect();
    ords.sort_by(f64::total_cmp);
    check_separation(&ords)?;

    let smooth = |t: f64| zero_count_main(t).unwrap_or(0.0).max(0.0);
    let expected = smooth(t_max) - smooth(t_min);
    if (ords.len() as f64 - expected).abs() > COUNT_SLACK {
        return Err(Error::MissedZeros {
            t_min,
            t_max,
            found: ords.len(),
            expected,
        });
    }
    ZeroTable::new(ords, t_max, ZeroSource::Computed)
}

fn segments(t_min: f64, t_max: f64) -> Result<Vec<Segment>> {
    // Gram points strictly inside the range, with their Z values.
    let mut gram: Vec<(i64, f64, f64)> = Vec::new();
    let mut m = (theta(t_min) / PI).floor() as i64 + 1;
    let mut g = gram_point(m, t_min.max(17.8));
    while g < t_max {
        if g > t_min {
            gram.push((m, g, hardy_z(g)?));
        }
        m += 1;
        g = gram_point(m, g + PI / (0.5 * (g / (2.0 * PI)).ln()).max(0.1));
    }
    let good: Vec<usize> = gram
        .iter()
        .enumerate()
        .filter(|(_, &(m, _, z))| (z > 0.0) == (m % 2 == 0) && z != 0.0)
        .map(|(i, _)| i)
        .collect();

    let estimate = |a: f64, b: f64, za: f64, zb: f64| -> usize {
        // Nearest count with the parity the end signs force.
        let raw = ((theta(b) - theta(a)) / PI).max(0.0);
        let parity = usize::from(sign(za) != sign(zb));
        let mut n = raw.round() as usize;
        if n % 2 != parity {
            n = if (n as f64) < raw { n + 1 } else { n.saturating_sub(1).max(parity) };
        }
        n
    };
    let mut segs = Vec::new();
    let z_min = hardy_z(t_min)?;
    let z_max = hardy_z(t_max)?;
    match (good.first(), good.last()) {
        (Some(&first), Some(&last)) => {
            let mut nodes = vec![t_min];
            nodes.extend(gram[..=first].iter().map(|g| g.1));
            segs.push(Segment {
                expected: estimate(t_min, gram[first].1, z_min, gram[first].2),
                nodes,
                exact: false,
            });
            for w in good.windows(2) {
                segs.push(Segment {
                    nodes: gram[w[0]..=w[1]].iter().map(|g| g.1).collect(),
                    expected: w[1] - w[0],
                    exact: true,
                });
            }
            let mut nodes: Vec<f64> = gram[last..].iter().map(|g| g.1).collect();
            nodes.push(t_max);
            segs.push(Segment {
                expected: estimate(gram[last].1, t_max, gram[last].2, z_max),
                nodes,
                exact: false,
            });
        }
        _ => {
            let mut nodes = vec![t_min];
            nodes.extend(gram.iter().map(|g| g.1));
            nodes.push(t_max);
            segs.push(Segment {
                expected: estimate(t_min, t_max, z_min, z_max),
                nodes,
                exact: false,
            });
        }
    }
    Ok(segs)
}

//! `min:step:max` grids.

use std::fmt;
use std::str::FromStr;

/// Upper bound on grid size, to catch typos like `0:1e-9:1`.
const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    min: f64,
    step: f64,
    max: f64,
    /// Decimal places written in the input; grid values are rounded to
    /// these so `0:0.1:0.3` yields 0.3 rather than 0.30000000000000004.
    decimals: usize,
    text: String,
}

fn decimals(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa.split_once('.').map_or(0, |(_, f)| f.len())
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let (min, step, max) = match parts.as_slice() {
            [v] => {
                let v = number(v)?;
                (v, 1.0, v)
            }
            [a, b, c] => (number(a)?, number(b)?, number(c)?),
            _ => return Err(format!("'{s}' is neither a value nor min:step:max")),
        };
        if step.is_nan() || step <= 0.0 {
            return Err(format!("step in '{s}' must be positive"));
        }
        if min > max {
            return Err(format!("range '{s}' is empty (min exceeds max)"));
        }
        if (max - min) / step >= MAX_POINTS as f64 {
            return Err(format!("range '{s}' has more than {MAX_POINTS} points"));
        }
        let d = parts.iter().map(|p| decimals(p.trim())).max().unwrap_or(0);
        Ok(Range {
            min,
            step,
            max,
            decimals: d.min(15),
            text: s.to_string(),
        })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize;
        let scale = 10f64.powi(self.decimals as i32);
        (0..=n)
            .map(|i| {
                let v = self.min + self.step * i as f64;
                if self.decimals < 15 {
                    (v * scale).round() / scale
                } else {
                    v
                }
            })
            .collect()
    }

    /// The grid as positive integers (matrix sizes).
    pub fn sizes(&self) -> Result<Vec<u32>, String> {
        self.values()
            .into_iter()
            .map(|v| {
                if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                    Ok(v as u32)
                } else {
                    Err(format!("matrix size {v} in '{}' is not a positive integer", self.text))
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grids() {
        let r: Range = "0:0.1:0.3".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 0.1, 0.2, 0.3]);
        let r: Range = "2".parse().unwrap();
        assert_eq!(r.values(), vec![2.0]);
        let r: Range = "1:2:6".parse().unwrap();
        assert_eq!(r.sizes().unwrap(), vec![1, 3, 5]);
        let r: Range = "0.5:0.25:1.5".parse().unwrap();
        assert_eq!(r.values(), vec![0.5, 0.75, 1.0, 1.25, 1.5]);
        let r: Range = "-1:0.5:0".parse().unwrap();
        assert_eq!(r.values(), vec![-1.0, -0.5, 0.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["1:0:2", "1:-1:2", "3:1:2", "a", "1:2", "1:1:inf", "0:1e-9:1", ""] {
            assert!(s.parse::<Range>().is_err(), "{s}");
        }
        let r: Range = "0.5".parse().unwrap();
        assert!(r.sizes().is_err());
        let r: Range = "0".parse().unwrap();
        assert!(r.sizes().is_err());
    }
}

use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument outside domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: result exceeds the floating-point range ({detail})")]
    Overflow { op: &'static str, detail: String },

    #[error("{op}: method not supported ({detail})")]
    Unsupported { op: &'static str, detail: String },

    #[error("{op}: evaluation at a singular point ({detail})")]
    Singularity { op: &'static str, detail: String },

    #[error("{op}: numerically degenerate input ({detail})")]
    Degenerate { op: &'static str, detail: String },

    #[error("zero search found {found} zeros in [{t_min}, {t_max}] but the smooth count predicts {expected:.2}")]
    MissedZeros {
        t_min: f64,
        t_max: f64,
        found: usize,
        expected: f64,
    },

    #[error("zeros at {a} and {b} are not separated (multiple zero suspected)")]
    MultipleZero { a: f64, b: f64 },

    #[error("zero table line {line}: {detail}")]
    Format { line: usize, detail: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn overflow(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Overflow {
            op,
            detail: detail.into(),
        }
    }

    /// True for errors that originate in a numeric domain or range check.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::Overflow { .. }
                | Error::Singularity { .. }
                | Error::Degenerate { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} = {v} is not finite")))
    }
}

//! Compensated accumulation.

use crate::dd::Dd;

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Sums a slice with Neumaier compensation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<NeumaierSum>().value()
}

/// Double-double accumulator for sums whose terms cancel heavily.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct DdSum(Dd);

impl DdSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        self.0 = self.0 + x;
    }

    #[inline]
    pub fn add_dd(&mut self, x: Dd) {
        self.0 = self.0 + x;
    }

    pub fn value(&self) -> f64 {
        self.0.to_f64()
    }
}

//! Moments of unitary characteristic polynomials near an eigenangle and
//! the matching discrete moments of the zeta function over its zeros.
//!
//! * [`specfun`]: log-Gamma, Barnes G, spherical Bessel, Pochhammer.
//! * [`rmt_exact`]: closed forms for the random-matrix moments.
//! * [`rmt_mc`]: Haar sampling, Monte Carlo estimators, Weyl quadrature.
//! * [`zeta_lab`]: Riemann–Siegel evaluation, zeros, discrete moments and
//!   the conjectured right-hand sides they are compared with.
//! * [`verify`]: the property suite behind `dismo --command verify`.

// Reference constants keep all published digits; `!(a > b)` is used on
// purpose so that NaN lands in the rejecting branch.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod error;
pub mod rmt_exact;
pub mod rmt_mc;
pub mod specfun;
pub mod sum;
pub mod verify;
pub mod zeta_lab;

pub use error::{Error, Result};

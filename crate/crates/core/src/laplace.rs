//! The Laplace primitive: inverse-CDF sampling and the two-sided tail.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Draws from the zero-centred Laplace distribution with the given scale.
///
/// Consumes exactly one uniform from `rng`.
pub fn laplace_sample(scale: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("scale", scale)?;
    Ok(laplace_from_uniform(scale, rng.uniform_open()))
}

/// Inverse CDF of Laplace(0, `scale`) evaluated at `u ∈ (0, 1)`.
///
/// `laplace_from_uniform(s, 1 - u) == -laplace_from_uniform(s, u)`.
#[inline]
pub fn laplace_from_uniform(scale: f64, u: f64) -> f64 {
    debug_assert!(u > 0.0 && u < 1.0, "u = {u}");
    if u < 0.5 {
        scale * (2.0 * u).ln()
    } else {
        -scale * (2.0 * (1.0 - u)).ln()
    }
}

/// `P(|X| > b)` for `X ~ Laplace(0, scale)`, i.e. `exp(-b / scale)`.
pub fn laplace_tail(b: f64, scale: f64) -> Result<f64> {
    check_positive("b", b)?;
    check_positive("scale", scale)?;
    Ok((-b / scale).exp())
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{x} is not > 0")))
    }
}

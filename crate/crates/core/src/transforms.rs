//! Tukey and Box-Cox power transformations.
//!
//! Both families share the shifted argument `y + lambda2`, which must be
//! strictly positive. A power of (numerically) zero selects the logarithmic
//! branch; logarithms use [`LOG_BASE`] throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base of every logarithm produced by the crate.
pub const LOG_BASE: f64 = 2.0;

/// Powers with magnitude below this are evaluated on the logarithmic branch.
pub const ZERO_POWER_EPS: f64 = 1e-12;

/// Logarithm in [`LOG_BASE`].
#[inline]
pub fn log(x: f64) -> f64 {
    x.ln() / LOG_BASE.ln()
}

/// Power parameter `lambda1` and shift `lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl PowerParams {
    pub const fn new(lambda1: f64, lambda2: f64) -> Self {
        Self { lambda1, lambda2 }
    }

    pub fn is_log_branch(&self) -> bool {
        self.lambda1.abs() < ZERO_POWER_EPS
    }

    fn shifted(&self, y: f64) -> Result<f64> {
        let x = y + self.lambda2;
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(Error::domain(format!(
                "y + lambda2 must be positive, got {y} + {} = {x}",
                self.lambda2
            )))
        }
    }
}

/// `(y + lambda2)^lambda1`, or `log(y + lambda2)` when `lambda1 == 0`.
///
/// Negative powers are not sign-flipped, so the result decreases in `y`.
pub fn tukey_transform(y: f64, params: PowerParams) -> Result<f64> {
    let x = params.shifted(y)?;
    if params.is_log_branch() {
        Ok(log(x))
    } else {
        Ok(x.powf(params.lambda1))
    }
}

/// `((y + lambda2)^lambda1 - 1) / lambda1`, or `log(y + lambda2)` when
/// `lambda1 == 0`.
pub fn boxcox_transform(y: f64, params: PowerParams) -> Result<f64> {
    let x = params.shifted(y)?;
    if params.is_log_branch() {
        Ok(log(x))
    } else {
        let p = params.lambda1;
        Ok((x.powf(p) - 1.0) / p)
    }
}

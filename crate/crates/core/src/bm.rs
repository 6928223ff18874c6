//! Best-Match local weights: BM25 and its BM11 (`b = 1`) and BM15 (`b = 0`)
//! special cases, the saturating 2-Poisson core `f / (f + k)`, and BM25IR,
//! which swaps the core for the inverse-regression curve `1 - 1 / (f + K)`.
//!
//! Document length enters through `B = (1 - b) + b * dl / avedl` and the
//! attenuation factor `K = k1 * B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_K1: f64 = 1.2;
pub const DEFAULT_B: f64 = 0.75;

/// Saturation `k1`, length normalization `b`, and whether the `(k1 + 1)`
/// scaling factor is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmParams {
    k1: f64,
    b: f64,
    pub apply_scale: bool,
}

impl BmParams {
    pub fn new(k1: f64, b: f64, apply_scale: bool) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) {
            return Err(Error::domain(format!("k1 must be positive, got {k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::domain(format!("b must lie in [0, 1], got {b}")));
        }
        let params = Self { k1, b, apply_scale };
        if params.outside_ratio_heuristic() {
            log::warn!("b/k1 = {} >= 1; BM parameters outside the usual operating range", b / k1);
        }
        Ok(params)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn with_scale(mut self, apply_scale: bool) -> Self {
        self.apply_scale = apply_scale;
        self
    }

    /// True when `b / k1 >= 1`. Settings that work well in practice keep
    /// the ratio below one; this is a diagnostic, never an error.
    pub fn outside_ratio_heuristic(&self) -> bool {
        self.b / self.k1 >= 1.0
    }

    /// Multiplier applied to the unscaled weight.
    pub fn scale(&self) -> f64 {
        if self.apply_scale {
            self.k1 + 1.0
        } else {
            1.0
        }
    }
}

impl Default for BmParams {
    fn default() -> Self {
        Self { k1: DEFAULT_K1, b: DEFAULT_B, apply_scale: true }
    }
}

/// Document length relative to the corpus average, `dl / avedl`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LengthRatio(f64);

impl LengthRatio {
    pub const AVERAGE: LengthRatio = LengthRatio(1.0);

    pub fn new(ratio: f64) -> Result<Self> {
        if ratio > 0.0 && ratio.is_finite() {
            Ok(Self(ratio))
        } else {
            Err(Error::domain(format!("length ratio must be positive, got {ratio}")))
        }
    }

    pub fn from_lengths(doc_length: u64, ave_doc_length: f64) -> Result<Self> {
        Self::new(doc_length as f64 / ave_doc_length)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `B = (1 - b) + b * ratio`.
pub fn length_norm_b(b: f64, ratio: LengthRatio) -> Result<f64> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::domain(format!("b must lie in [0, 1], got {b}")));
    }
    Ok((1.0 - b) + b * ratio.get())
}

/// `K = k1 * B`.
pub fn attenuation_k(params: &BmParams, ratio: LengthRatio) -> Result<f64> {
    Ok(params.k1 * length_norm_b(params.b, ratio)?)
}

/// `f / (f + k)`. With `k = 0` this is the binary indicator `f > 0`.
pub fn poisson2_core(f: u64, k: f64) -> f64 {
    if f == 0 {
        return 0.0;
    }
    let f = f as f64;
    f / (f + k)
}

/// `1 - 1 / (f + k)` evaluated literally, including at `f = 0` where the
/// value is negative for `k < 1`. Scoring code should use [`bm25ir_local`].
pub fn inverse_regression_core(f: f64, k: f64) -> Result<f64> {
    let x = f + k;
    if x > 0.0 {
        Ok(1.0 - 1.0 / x)
    } else {
        Err(Error::domain(format!("f + K must be positive, got {x}")))
    }
}

/// BM25 local weight `f / (f + K)`, times `(k1 + 1)` when scaling is on.
/// `b = 1` gives BM11 and `b = 0` gives BM15.
pub fn bm_local(f: u64, params: &BmParams, ratio: LengthRatio) -> Result<f64> {
    let k = attenuation_k(params, ratio)?;
    Ok(poisson2_core(f, k) * params.scale())
}

/// BM25IR local weight `1 - 1 / (f + K)`, times `(k1 + 1)` when scaling is
/// on. An absent term (`f = 0`) weighs exactly 0.
pub fn bm25ir_local(f: u64, params: &BmParams, ratio: LengthRatio) -> Result<f64> {
    let k = attenuation_k(params, ratio)?;
    if f == 0 {
        return Ok(0.0);
    }
    Ok(inverse_regression_core(f as f64, k)? * params.scale())
}

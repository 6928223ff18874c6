//! Profile curves, occurrence-to-occurrence increments and the critical
//! attenuation below which the second occurrence of a term carries the
//! largest weight increment.
//!
//! Increments are measured from the absent-term baseline `L(0) = 0`. With
//! `L(f) = 1 - 1/(f + k)` for `f >= 1` the first two increments are
//! `k/(1+k)` and `1/((1+k)(2+k))`; they cross where `k^2 + 2k - 1 = 0`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bm::{attenuation_k, bm_local, inverse_regression_core, poisson2_core, BmParams, LengthRatio};
use crate::catalog::{local_weight, DocStats, SchemeId};
use crate::error::{Error, Result};
use crate::transforms::{boxcox_transform, tukey_transform, PowerParams};

/// Coefficients of `y = beta0 + beta1 / x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseRegressionParams {
    pub beta0: f64,
    pub beta1: f64,
}

impl InverseRegressionParams {
    /// The `(1, -1)` pair under which the curve coincides with Box-Cox at
    /// power -1.
    pub const BOXCOX_RECIPROCAL: Self = Self { beta0: 1.0, beta1: -1.0 };
}

pub fn inverse_regression_eval(x: f64, params: InverseRegressionParams) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    Ok(params.beta0 + params.beta1 / x)
}

/// The function sampled by a [`ProfileCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum CurveModel {
    /// `f / (f + k)`.
    Poisson2 { k: f64 },
    /// Any catalog scheme evaluated against fixed document statistics.
    Scheme { scheme: SchemeId, stats: DocStats },
    Bm25 { params: BmParams, ratio: LengthRatio },
    Bm25Ir { params: BmParams, ratio: LengthRatio },
}

impl CurveModel {
    /// Box-Cox at power -1 with shift `k`, i.e. `1 - 1/(f + k)`.
    pub fn reciprocal(k: f64) -> Self {
        CurveModel::Scheme {
            scheme: SchemeId::BoxCox { p: -1.0, k },
            stats: DocStats { doc_length: 1, ave_doc_length: 1.0, ave_term_freq: 1.0 },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveModel::Poisson2 { .. } => "poisson2",
            CurveModel::Scheme { scheme, .. } => scheme.family(),
            CurveModel::Bm25 { .. } => "bm25",
            CurveModel::Bm25Ir { .. } => "bm25ir",
        }
    }

    /// Attenuation `K` for Best-Match models, or the shift `k` for the
    /// 2-Poisson core and the Tukey/Box-Cox families.
    pub fn effective_k(&self) -> Option<f64> {
        match self {
            CurveModel::Poisson2 { k } => Some(*k),
            CurveModel::Scheme { scheme, stats } => match scheme {
                SchemeId::Tukey { k, .. } | SchemeId::BoxCox { k, .. } => Some(*k),
                s => s
                    .bm_params()
                    .and_then(|p| stats.length_ratio().and_then(|r| attenuation_k(p, r)).ok()),
            },
            CurveModel::Bm25 { params, ratio } | CurveModel::Bm25Ir { params, ratio } => {
                attenuation_k(params, *ratio).ok()
            }
        }
    }

    /// Supremum of the curve over `f`, where one exists.
    pub fn upper_bound(&self) -> Option<f64> {
        match self {
            CurveModel::Poisson2 { .. } => Some(1.0),
            CurveModel::Bm25 { params, .. } | CurveModel::Bm25Ir { params, .. } => {
                Some(params.scale())
            }
            CurveModel::Scheme { scheme, .. } => match scheme {
                SchemeId::BoxCox { p, .. } if *p < 0.0 => Some(-1.0 / p),
                SchemeId::Bm25(p) | SchemeId::Bm11(p) | SchemeId::Bm15(p) | SchemeId::Bm25Ir(p) => {
                    Some(p.scale())
                }
                _ => None,
            },
        }
    }

    /// `(name, value)` pairs identifying the parameterization.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            CurveModel::Poisson2 { k } => vec![("k", *k)],
            CurveModel::Scheme { scheme, stats } => match scheme {
                SchemeId::Tukey { p, k } | SchemeId::BoxCox { p, k } => vec![("p", *p), ("k", *k)],
                SchemeId::Bm25(bm) | SchemeId::Bm25Ir(bm) | SchemeId::Bm11(bm) | SchemeId::Bm15(bm) => vec![
                    ("k1", bm.k1()),
                    ("b", bm.b()),
                    ("dl", stats.doc_length as f64),
                    ("avedl", stats.ave_doc_length),
                ],
                SchemeId::Logn => vec![("avetf", stats.ave_term_freq)],
                SchemeId::Logln => vec![("dl", stats.doc_length as f64)],
                _ => vec![],
            },
            CurveModel::Bm25 { params, ratio } | CurveModel::Bm25Ir { params, ratio } => {
                vec![("k1", params.k1()), ("b", params.b()), ("ratio", ratio.get())]
            }
        }
    }

    /// File stem `<model>_<name>=<value>_...`, with `K=` appended for
    /// Best-Match models.
    pub fn file_stem(&self) -> String {
        let mut stem = self.name().to_string();
        for (name, value) in self.params() {
            let _ = write!(stem, "_{name}={}", fmt_param(value));
        }
        if self.is_bm() {
            if let Some(k) = self.effective_k() {
                let _ = write!(stem, "_K={}", fmt_param(k));
            }
        }
        stem
    }

    fn is_bm(&self) -> bool {
        match self {
            CurveModel::Bm25 { .. } | CurveModel::Bm25Ir { .. } => true,
            CurveModel::Scheme { scheme, .. } => scheme.bm_params().is_some(),
            CurveModel::Poisson2 { .. } => false,
        }
    }

    /// Weight under the absent-term convention (`L(0) = 0`).
    pub fn weight(&self, f: u64) -> Result<f64> {
        match self {
            CurveModel::Poisson2 { k } => {
                if *k < 0.0 {
                    return Err(Error::domain(format!("k must be non-negative, got {k}")));
                }
                Ok(poisson2_core(f, *k))
            }
            CurveModel::Scheme { scheme, stats } => local_weight(scheme, f, stats),
            CurveModel::Bm25 { params, ratio } => bm_local(f, params, *ratio),
            CurveModel::Bm25Ir { params, ratio } => crate::bm::bm25ir_local(f, params, *ratio),
        }
    }

    /// The literal formula at `f = 0`, or `None` where it is undefined.
    pub fn raw_at_zero(&self) -> Result<Option<f64>> {
        let ir = |params: &BmParams, ratio: LengthRatio| -> Result<Option<f64>> {
            let k = attenuation_k(params, ratio)?;
            Ok(inverse_regression_core(0.0, k).ok().map(|v| v * params.scale()))
        };
        match self {
            CurveModel::Poisson2 { .. } | CurveModel::Bm25 { .. } => self.weight(0).map(Some),
            CurveModel::Bm25Ir { params, ratio } => ir(params, *ratio),
            CurveModel::Scheme { scheme, stats } => Ok(match scheme {
                SchemeId::Tukey { p, k } => tukey_transform(0.0, PowerParams::new(*p, *k)).ok(),
                SchemeId::BoxCox { p, k } => boxcox_transform(0.0, PowerParams::new(*p, *k)).ok(),
                SchemeId::Freq | SchemeId::Logln => Some(0.0),
                SchemeId::Logg => Some(0.2),
                SchemeId::Sqrt | SchemeId::Loga | SchemeId::Logn => None,
                SchemeId::Bm25(_) | SchemeId::Bm11(_) | SchemeId::Bm15(_) => Some(0.0),
                SchemeId::Bm25Ir(p) => return ir(p, stats.length_ratio()?),
            }),
        }
    }
}

/// Sampled `(f, L)` points for one parameterization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub model: CurveModel,
    /// Whether `f = 0` was evaluated with the literal formula.
    pub raw: bool,
    pub points: Vec<(u64, f64)>,
}

impl ProfileCurve {
    pub fn file_name(&self) -> String {
        let raw = if self.raw { "_raw" } else { "" };
        format!("{}{raw}.csv", self.model.file_stem())
    }

    /// CSV body with header `f,L` and weights at six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("f,L\n");
        for (f, l) in &self.points {
            let _ = writeln!(out, "{f},{l:.6}");
        }
        out
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1)
    }

    /// All points lie at or below the model's supremum (vacuously true for
    /// unbounded models).
    pub fn within_upper_bound(&self) -> bool {
        match self.model.upper_bound() {
            Some(sup) => self.points.iter().all(|&(_, l)| l <= sup),
            None => true,
        }
    }
}

/// Sample `model` at `f = 0..=f_max`. With `raw`, `f = 0` uses the literal
/// formula and is omitted when that formula is undefined there, so the
/// curve then starts at `f = 1`.
pub fn profile_curve(model: CurveModel, f_max: u64, raw: bool) -> Result<ProfileCurve> {
    if f_max < 1 {
        return Err(Error::domain("f_max must be at least 1"));
    }
    let mut points = Vec::with_capacity(f_max as usize + 1);
    if raw {
        if let Some(l0) = model.raw_at_zero()? {
            points.push((0, l0));
        }
    } else {
        points.push((0, model.weight(0)?));
    }
    for f in 1..=f_max {
        points.push((f, model.weight(f)?));
    }
    Ok(ProfileCurve { model, raw, points })
}

/// Weight increments of `L(f) = 1 - 1/(f + k)` over successive occurrences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncrementReport {
    pub k: f64,
    /// `(n, L(n) - L(n - 1))` for `n = 1..=n_max`.
    pub increments: Vec<(u64, f64)>,
    /// Smallest `n` achieving the largest increment.
    pub argmax_n: u64,
}

fn reciprocal_weight(f: u64, k: f64) -> f64 {
    if f == 0 {
        0.0
    } else {
        1.0 - 1.0 / (f as f64 + k)
    }
}

pub fn increment_report(k: f64, n_max: u64) -> Result<IncrementReport> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::domain(format!("k must be positive, got {k}")));
    }
    if n_max < 2 {
        return Err(Error::domain("n_max must be at least 2"));
    }
    let increments: Vec<(u64, f64)> = (1..=n_max)
        .map(|n| (n, reciprocal_weight(n, k) - reciprocal_weight(n - 1, k)))
        .collect();
    let mut argmax_n = 1;
    let mut best = f64::NEG_INFINITY;
    for &(n, delta) in &increments {
        if delta > best {
            best = delta;
            argmax_n = n;
        }
    }
    Ok(IncrementReport { k, increments, argmax_n })
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The shift `k` at which the first and second increments are equal,
/// located by bisection on `(0, 1)`.
pub fn critical_k(tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let gap = |k: f64| {
        let first = reciprocal_weight(1, k);
        let second = reciprocal_weight(2, k) - first;
        first - second
    };
    Ok(bisect(0.0, 1.0, tolerance, gap))
}

/// Which occurrence carries the largest increment under BM25IR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub k: f64,
    pub argmax_n: u64,
    pub second_occurrence: bool,
}

pub fn bm25ir_regime(params: &BmParams, ratio: LengthRatio) -> Result<Regime> {
    let k = attenuation_k(params, ratio)?;
    let report = increment_report(k, 10)?;
    Ok(Regime { k, argmax_n: report.argmax_n, second_occurrence: report.argmax_n == 2 })
}

/// Shifts sampled for the 2-Poisson and reciprocal profile figure.
pub const FIGURE1_K: [f64; 6] = [0.0, 0.1, 0.42, 1.0, 2.0, 10.0];
/// Relative document lengths sampled for the BM25IR profile figure.
pub const FIGURE2_RATIOS: [f64; 3] = [0.1, 1.0, 10.0];
pub const FIGURE2_K1: [f64; 4] = [1.0, 1.2, 1.5, 2.0];
pub const FIGURE2_B: [f64; 5] = [0.3, 0.5, 0.75, 0.8, 1.0];

/// Models behind the two profile figures: figure 1 pairs `f/(f+k)` with
/// `1 - 1/(f+k)`; figure 2 is unscaled BM25IR over `(k1, b)` pairs with
/// `0.3 <= b/k1 <= 0.8` at short, average and long lengths.
pub fn figure_models(figure: u8) -> Result<Vec<CurveModel>> {
    match figure {
        1 => Ok(FIGURE1_K
            .iter()
            .map(|&k| CurveModel::Poisson2 { k })
            .chain(FIGURE1_K.iter().map(|&k| CurveModel::reciprocal(k)))
            .collect()),
        2 => {
            let mut models = Vec::new();
            for &ratio in &FIGURE2_RATIOS {
                for &k1 in &FIGURE2_K1 {
                    for &b in &FIGURE2_B {
                        let r = b / k1;
                        if !(0.3 - 1e-12..=0.8 + 1e-12).contains(&r) {
                            continue;
                        }
                        models.push(CurveModel::Bm25Ir {
                            params: BmParams::new(k1, b, false)?,
                            ratio: LengthRatio::new(ratio)?,
                        });
                    }
                }
            }
            Ok(models)
        }
        other => Err(Error::domain(format!("no profile figure {other}; expected 1 or 2"))),
    }
}

/// One entry of `manifest.json`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestEntry {
    pub file: String,
    pub model: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    pub raw: bool,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveManifest {
    pub curves: Vec<ManifestEntry>,
}

impl From<&ProfileCurve> for ManifestEntry {
    fn from(curve: &ProfileCurve) -> Self {
        let params = curve
            .model
            .params()
            .into_iter()
            .map(|(name, v)| (name.to_string(), json_number(v)))
            .collect();
        ManifestEntry {
            file: curve.file_name(),
            model: curve.model.name().to_string(),
            params,
            k: curve.model.effective_k().map(round6),
            raw: curve.raw,
            points: curve.points.len(),
        }
    }
}

/// Write one CSV per curve into `dir` plus `manifest.json` listing them.
pub fn write_curves(dir: &Path, curves: &[ProfileCurve]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(curves.len() + 1);
    for curve in curves {
        let path = dir.join(curve.file_name());
        fs::write(&path, curve.to_csv())?;
        written.push(path);
    }
    let manifest = CurveManifest { curves: curves.iter().map(ManifestEntry::from).collect() };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    written.push(path);
    Ok(written)
}

fn round6(x: f64) -> f64 {
    fmt_param(x).parse().unwrap_or(x)
}

fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round6(x)).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// Six-decimal rendering with trailing zeros removed (`0.280000` -> `0.28`).
pub fn fmt_param(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

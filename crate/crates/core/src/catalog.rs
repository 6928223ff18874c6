//! Named local-weight models and the generic Tukey/Box-Cox families,
//! dispatched through [`SchemeId`].
//!
//! Every scheme weighs an absent term (`f = 0`) as exactly 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bm::{bm25ir_local, bm_local, BmParams, LengthRatio};
use crate::error::{Error, Result};
use crate::transforms::{boxcox_transform, log, tukey_transform, PowerParams};

/// A local-weight model. Canonical text forms:
/// `freq`, `sqrt`, `loga`, `logn`, `logln`, `logg`, `tukey:p:k`,
/// `boxcox:p:k`, `bm25:k1:b`, `bm11:k1`, `bm15:k1`, `bm25ir:k1:b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SchemeId {
    Freq,
    Sqrt,
    Loga,
    Logn,
    Logln,
    Logg,
    Tukey { p: f64, k: f64 },
    BoxCox { p: f64, k: f64 },
    Bm25(BmParams),
    /// BM25 with `b = 1`.
    Bm11(BmParams),
    /// BM25 with `b = 0`.
    Bm15(BmParams),
    Bm25Ir(BmParams),
}

impl SchemeId {
    pub fn bm25(k1: f64, b: f64) -> Result<Self> {
        Ok(SchemeId::Bm25(BmParams::new(k1, b, true)?))
    }

    pub fn bm11(k1: f64) -> Result<Self> {
        Ok(SchemeId::Bm11(BmParams::new(k1, 1.0, true)?))
    }

    pub fn bm15(k1: f64) -> Result<Self> {
        Ok(SchemeId::Bm15(BmParams::new(k1, 0.0, true)?))
    }

    pub fn bm25ir(k1: f64, b: f64) -> Result<Self> {
        Ok(SchemeId::Bm25Ir(BmParams::new(k1, b, true)?))
    }

    pub fn bm_params(&self) -> Option<&BmParams> {
        match self {
            SchemeId::Bm25(p) | SchemeId::Bm11(p) | SchemeId::Bm15(p) | SchemeId::Bm25Ir(p) => {
                Some(p)
            }
            _ => None,
        }
    }

    /// Toggle the `(k1 + 1)` factor on Best-Match schemes; other schemes
    /// are returned unchanged.
    pub fn with_bm_scale(self, apply_scale: bool) -> Self {
        match self {
            SchemeId::Bm25(p) => SchemeId::Bm25(p.with_scale(apply_scale)),
            SchemeId::Bm11(p) => SchemeId::Bm11(p.with_scale(apply_scale)),
            SchemeId::Bm15(p) => SchemeId::Bm15(p.with_scale(apply_scale)),
            SchemeId::Bm25Ir(p) => SchemeId::Bm25Ir(p.with_scale(apply_scale)),
            other => other,
        }
    }

    /// Lower-case family name without parameters.
    pub fn family(&self) -> &'static str {
        match self {
            SchemeId::Freq => "freq",
            SchemeId::Sqrt => "sqrt",
            SchemeId::Loga => "loga",
            SchemeId::Logn => "logn",
            SchemeId::Logln => "logln",
            SchemeId::Logg => "logg",
            SchemeId::Tukey { .. } => "tukey",
            SchemeId::BoxCox { .. } => "boxcox",
            SchemeId::Bm25(_) => "bm25",
            SchemeId::Bm11(_) => "bm11",
            SchemeId::Bm15(_) => "bm15",
            SchemeId::Bm25Ir(_) => "bm25ir",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.family();
        match self {
            SchemeId::Tukey { p, k } | SchemeId::BoxCox { p, k } => write!(f, "{name}:{p}:{k}"),
            SchemeId::Bm25(bm) | SchemeId::Bm25Ir(bm) => write!(f, "{name}:{}:{}", bm.k1(), bm.b()),
            SchemeId::Bm11(bm) | SchemeId::Bm15(bm) => write!(f, "{name}:{}", bm.k1()),
            _ => f.write_str(name),
        }
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "scheme", input: s.to_string() };
        let mut parts = s.trim().split(':');
        let name = parts.next().ok_or_else(bad)?.to_ascii_lowercase();
        let args = parts
            .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let scheme = match (name.as_str(), args.as_slice()) {
            ("freq", []) => SchemeId::Freq,
            ("sqrt", []) => SchemeId::Sqrt,
            ("loga", []) => SchemeId::Loga,
            ("logn", []) => SchemeId::Logn,
            ("logln", []) => SchemeId::Logln,
            ("logg", []) => SchemeId::Logg,
            ("tukey", &[p, k]) => SchemeId::Tukey { p, k },
            ("boxcox", &[p, k]) => SchemeId::BoxCox { p, k },
            ("bm25", &[k1, b]) => SchemeId::bm25(k1, b)?,
            ("bm11", &[k1]) => SchemeId::bm11(k1)?,
            ("bm15", &[k1]) => SchemeId::bm15(k1)?,
            ("bm25ir", &[k1, b]) => SchemeId::bm25ir(k1, b)?,
            _ => return Err(bad()),
        };
        Ok(scheme)
    }
}

impl From<SchemeId> for String {
    fn from(s: SchemeId) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SchemeId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Per-document statistics consumed by the local-weight models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocStats {
    /// Token count of the document.
    pub doc_length: u64,
    /// Mean token count over the corpus.
    pub ave_doc_length: f64,
    /// Mean occurrence count over the document's distinct terms.
    pub ave_term_freq: f64,
}

impl DocStats {
    pub fn new(doc_length: u64, ave_doc_length: f64, ave_term_freq: f64) -> Result<Self> {
        let stats = Self { doc_length, ave_doc_length, ave_term_freq };
        stats.validate()?;
        Ok(stats)
    }

    pub fn validate(&self) -> Result<()> {
        if self.doc_length < 1 {
            return Err(Error::domain("doc_length must be at least 1"));
        }
        if !(self.ave_doc_length > 0.0 && self.ave_doc_length.is_finite()) {
            return Err(Error::domain(format!(
                "ave_doc_length must be positive, got {}",
                self.ave_doc_length
            )));
        }
        if !(self.ave_term_freq >= 1.0 && self.ave_term_freq.is_finite()) {
            return Err(Error::domain(format!(
                "ave_term_freq must be at least 1, got {}",
                self.ave_term_freq
            )));
        }
        Ok(())
    }

    pub fn length_ratio(&self) -> Result<LengthRatio> {
        LengthRatio::from_lengths(self.doc_length, self.ave_doc_length)
    }
}

/// Local weight of a term occurring `f` times in a document described by
/// `stats`.
pub fn local_weight(scheme: &SchemeId, f: u64, stats: &DocStats) -> Result<f64> {
    stats.validate()?;
    if matches!(scheme, SchemeId::Logln) && stats.doc_length < 2 {
        return Err(Error::domain("logln needs doc_length >= 2"));
    }
    if f == 0 {
        return Ok(0.0);
    }
    let ff = f as f64;
    let w = match scheme {
        SchemeId::Freq => ff,
        SchemeId::Sqrt => 1.0 + (ff - 0.5).sqrt(),
        SchemeId::Loga => 1.0 + log(ff),
        SchemeId::Logn => (1.0 + log(ff)) / (1.0 + log(stats.ave_term_freq)),
        SchemeId::Logln => log(ff + 1.0) / log(stats.doc_length as f64),
        SchemeId::Logg => 0.2 + 0.8 * log(ff + 1.0),
        SchemeId::Tukey { p, k } => tukey_transform(ff, PowerParams::new(*p, *k))?,
        SchemeId::BoxCox { p, k } => boxcox_transform(ff, PowerParams::new(*p, *k))?,
        SchemeId::Bm25(bm) | SchemeId::Bm11(bm) | SchemeId::Bm15(bm) => {
            bm_local(f, bm, stats.length_ratio()?)?
        }
        SchemeId::Bm25Ir(bm) => bm25ir_local(f, bm, stats.length_ratio()?)?,
    };
    Ok(w)
}

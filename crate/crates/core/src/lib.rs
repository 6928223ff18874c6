//! Local term-weight models derived from Tukey and Box-Cox power
//! transformations, the Best-Match family (BM25, BM11, BM15) with the
//! inverse-regression variant BM25IR, curve analysis, and a small
//! inverted-index ranking engine.
//!
//! All weight functions are pure and may be called from any thread.

pub mod analysis;
pub mod bm;
pub mod catalog;
pub mod cli;
pub mod engine;
mod error;
pub mod transforms;

pub use analysis::{
    bm25ir_regime, critical_k, increment_report, inverse_regression_eval, profile_curve,
    CurveModel, IncrementReport, InverseRegressionParams, ProfileCurve, Regime,
};
pub use bm::{
    attenuation_k, bm25ir_local, bm_local, length_norm_b, poisson2_core, BmParams, LengthRatio,
};
pub use catalog::{local_weight, DocStats, SchemeId};
pub use engine::{
    idf, ingest_corpus, kendall_tau, rank_query, score_document, tokenize, Index, QueryResult,
};
pub use error::{Error, Result};
pub use transforms::{boxcox_transform, tukey_transform, PowerParams, LOG_BASE};

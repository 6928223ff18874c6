//! Command-line front end. Every subcommand parses its flags, calls the
//! library, and formats the result; no numeric logic lives here.
//!
//! Exit status: 0 on success, 1 when the library reports an error, 2 on
//! usage errors.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, fmt_param, CurveModel};
use crate::bm::{BmParams, LengthRatio};
use crate::catalog::{local_weight, DocStats, SchemeId};
use crate::engine::{self, Index};
use crate::error::Error;
use crate::transforms::{boxcox_transform, tukey_transform, PowerParams};

pub const LOG_ENV: &str = "POWERWEIGHT_LOG";

#[derive(Debug, Parser)]
#[command(name = "powerweight", version, about = "Power-transformation term weights, BM25 and BM25IR")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a Tukey or Box-Cox transformation at y.
    Transform(TransformArgs),
    /// Evaluate a local-weight scheme at a term frequency.
    Weigh(WeighArgs),
    /// Write profile curves as CSV plus a manifest.
    Profile(ProfileArgs),
    /// Print the shift at which the second occurrence overtakes the first.
    CriticalK(CriticalKArgs),
    /// Build an index file from a JSON-lines corpus.
    Index(IndexArgs),
    /// Rank documents for a query.
    Rank(RankArgs),
    /// Rank under two schemes and report Kendall's tau between them.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Tukey,
    Boxcox,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub model: Family,
    /// Power (lambda1).
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    /// Shift (lambda2).
    #[arg(long, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct WeighArgs {
    /// Scheme such as `loga`, `tukey:0.5:-0.5` or `bm25ir:1.2:0.75`.
    #[arg(long)]
    pub scheme: String,
    /// Term frequency.
    #[arg(long)]
    pub f: u64,
    /// Document length in tokens.
    #[arg(long, default_value_t = 100)]
    pub dl: u64,
    /// Average document length; defaults to `dl` (or `dl / ratio`).
    #[arg(long)]
    pub avedl: Option<f64>,
    /// Relative length dl/avedl, an alternative to --avedl.
    #[arg(long, conflicts_with = "avedl")]
    pub ratio: Option<f64>,
    /// Average frequency over the document's distinct terms.
    #[arg(long, default_value_t = 1.0)]
    pub avetf: f64,
    /// Drop the (k1 + 1) factor from Best-Match schemes.
    #[arg(long)]
    pub unscaled: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// poisson2, boxcox, tukey, bm25, bm25ir, or a named scheme.
    #[arg(long, required_unless_present = "figure", conflicts_with = "figure")]
    pub model: Option<String>,
    /// Emit every curve of profile figure 1 or 2.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub figure: Option<u8>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub k1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ratio: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub fmax: u64,
    /// Evaluate the literal formula at f = 0 instead of weighing it 0.
    #[arg(long)]
    pub raw: bool,
    /// Apply the (k1 + 1) factor (default for bm25).
    #[arg(long, conflicts_with = "unscaled")]
    pub scaled: bool,
    /// Omit the (k1 + 1) factor (default for bm25ir).
    #[arg(long)]
    pub unscaled: bool,
    /// Output directory; without it the CSVs go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CriticalKArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also print the increment table just below and above the mark.
    #[arg(long)]
    pub report: bool,
    #[arg(long, default_value_t = 5)]
    pub nmax: u64,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// JSON-lines corpus, `-` for stdin.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value = "bm25:1.2:0.75")]
    pub scheme: String,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value = "bm25:1.2:0.75")]
    pub scheme_a: String,
    #[arg(long, default_value = "bm25ir:1.2:0.75")]
    pub scheme_b: String,
    /// Rows printed per ranking; tau is computed over all matches.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

/// Initialize logging from `POWERWEIGHT_LOG` (off, error, warn, info, debug).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parse `argv` (including the program name) and run one subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn parse_scheme(text: &str) -> Result<SchemeId, Failure> {
    text.parse::<SchemeId>().map_err(|e| match e {
        Error::Parse { .. } => Failure::Usage(format!("invalid scheme {text:?}")),
        other => Failure::Domain(other),
    })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Transform(a) => {
            let params = PowerParams::new(a.p, a.k);
            let v = match a.model {
                Family::Tukey => tukey_transform(a.y, params)?,
                Family::Boxcox => boxcox_transform(a.y, params)?,
            };
            writeln!(out, "{v:.6}")?;
        }
        Command::Weigh(a) => {
            let mut scheme = parse_scheme(&a.scheme)?;
            if a.unscaled {
                scheme = scheme.with_bm_scale(false);
            }
            let avedl = match (a.avedl, a.ratio) {
                (Some(avedl), _) => avedl,
                (None, Some(r)) => a.dl as f64 / LengthRatio::new(r)?.get(),
                (None, None) => a.dl as f64,
            };
            let stats = DocStats::new(a.dl, avedl, a.avetf)?;
            writeln!(out, "{:.6}", local_weight(&scheme, a.f, &stats)?)?;
        }
        Command::Profile(a) => profile(a, out)?,
        Command::CriticalK(a) => {
            let k = analysis::critical_k(a.tol)?;
            writeln!(out, "{k:.6}")?;
            if a.report {
                for probe in [k - 0.01, k + 0.01] {
                    let r = analysis::increment_report(probe, a.nmax.max(2))?;
                    writeln!(out, "k={probe:.6} argmax_n={}", r.argmax_n)?;
                    for (n, d) in &r.increments {
                        writeln!(out, "  n={n} delta={d:.6}")?;
                    }
                }
            }
        }
        Command::Index(a) => {
            let index = if a.corpus.as_os_str() == "-" {
                engine::ingest_corpus(io::stdin().lock())?
            } else {
                engine::ingest_corpus(BufReader::new(File::open(&a.corpus)?))?
            };
            index.save(&a.out)?;
            writeln!(out, "indexed {} documents, avedl {:.6}", index.num_docs(), index.avedl())?;
        }
        Command::Rank(a) => {
            let scheme = parse_scheme(&a.scheme)?;
            let index = Index::load(&a.index)?;
            let result = engine::rank_query(&a.query, &index, &scheme, a.top_k)?;
            out.write_all(result.to_jsonl().as_bytes())?;
        }
        Command::Compare(a) => {
            let sa = parse_scheme(&a.scheme_a)?;
            let sb = parse_scheme(&a.scheme_b)?;
            let index = Index::load(&a.index)?;
            let all = index.num_docs().max(1);
            let ra = engine::rank_query(&a.query, &index, &sa, all)?;
            let rb = engine::rank_query(&a.query, &index, &sb, all)?;
            match engine::kendall_tau(&ra.doc_ids(), &rb.doc_ids()) {
                Ok(tau) => writeln!(out, "kendall_tau\t{tau:.6}")?,
                Err(_) => writeln!(out, "kendall_tau\tnan")?,
            }
            for r in [ra, rb] {
                let mut r = r;
                r.hits.truncate(a.top_k);
                writeln!(out, "# {}", r.scheme)?;
                out.write_all(r.to_jsonl().as_bytes())?;
            }
        }
    }
    Ok(())
}

fn or_default(values: &[f64], default: f64) -> Vec<f64> {
    if values.is_empty() {
        vec![default]
    } else {
        values.to_vec()
    }
}

fn profile_models(a: &ProfileArgs) -> Result<Vec<CurveModel>, Failure> {
    if let Some(figure) = a.figure {
        return Ok(analysis::figure_models(figure)?);
    }
    let name = a.model.as_deref().unwrap_or_default().to_ascii_lowercase();
    let mut models = Vec::new();
    match name.as_str() {
        "poisson2" => {
            for k in or_default(&a.k, 1.0) {
                models.push(CurveModel::Poisson2 { k });
            }
        }
        "boxcox" | "tukey" => {
            for p in or_default(&a.p, -1.0) {
                for k in or_default(&a.k, 1.0) {
                    let scheme = if name == "boxcox" { SchemeId::BoxCox { p, k } } else { SchemeId::Tukey { p, k } };
                    models.push(CurveModel::Scheme { scheme, stats: DocStats::new(100, 100.0, 1.0)? });
                }
            }
        }
        "bm25" | "bm25ir" => {
            let scaled = if a.scaled {
                true
            } else if a.unscaled {
                false
            } else {
                name == "bm25"
            };
            for ratio in or_default(&a.ratio, 1.0) {
                for k1 in or_default(&a.k1, crate::bm::DEFAULT_K1) {
                    for b in or_default(&a.b, crate::bm::DEFAULT_B) {
                        let params = BmParams::new(k1, b, scaled)?;
                        let ratio = LengthRatio::new(ratio)?;
                        models.push(if name == "bm25" {
                            CurveModel::Bm25 { params, ratio }
                        } else {
                            CurveModel::Bm25Ir { params, ratio }
                        });
                    }
                }
            }
        }
        other => {
            let scheme = parse_scheme(other)?;
            models.push(CurveModel::Scheme { scheme, stats: DocStats::new(100, 100.0, 1.0)? });
        }
    }
    Ok(models)
}

fn profile(a: ProfileArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let curves = profile_models(&a)?
        .into_iter()
        .map(|m| analysis::profile_curve(m, a.fmax, a.raw))
        .collect::<Result<Vec<_>, _>>()?;
    match &a.out {
        Some(dir) => {
            let written = analysis::write_curves(dir, &curves)?;
            for path in written {
                writeln!(out, "{}", path.display())?;
            }
        }
        None => {
            for c in &curves {
                if let Some(k) = c.model.effective_k() {
                    writeln!(out, "# {} K={}", c.file_name(), fmt_param(k))?;
                } else {
                    writeln!(out, "# {}", c.file_name())?;
                }
                out.write_all(c.to_csv().as_bytes())?;
            }
        }
    }
    Ok(())
}

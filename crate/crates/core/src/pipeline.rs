//! End-to-end pure-pair searches and their JSON reports.
//!
//! The symmetric pipelines extract a sparse or dense `m x m` window with
//! [`sparsify`](crate::sparsify::sparsify) and run an embedding engine on the
//! window (or on its bicomplement). A report carries everything needed to
//! re-check it against the host: the pattern, the outcome and the size bound,
//! which [`verify_report`] recomputes from scratch.

use crate::bigraph::{OrderedBigraph, VertexSetPair};
use crate::containment::{verify_embedding, Embedding};
use crate::error::{Error, Result};
use crate::numeric::ceil_exp;
use crate::pairs::greedy_anticomplete;
use crate::rainbow::{embed_or_pair_linear, linear_bounds, linear_constants, LinearOutcome, LinearSide};
use crate::sparse::{compute_constants, embed_or_pair_sparse, SparseOptions, SparseOutcome};
use crate::sparsify::{sparsify, SparsifyOutcome, SparsifyParams};
use crate::tree::TreePattern;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sparse,
    Linear,
    Symmetric,
    LinearSymmetric,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sparse => "sparse",
            Mode::Linear => "linear",
            Mode::Symmetric => "symmetric",
            Mode::LinearSymmetric => "linear-symmetric",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "sparse" => Ok(Mode::Sparse),
            "linear" => Ok(Mode::Linear),
            "symmetric" => Ok(Mode::Symmetric),
            "linear-symmetric" => Ok(Mode::LinearSymmetric),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportOutcome {
    Anticomplete { z1: Vec<usize>, z2: Vec<usize> },
    Complete { z1: Vec<usize>, z2: Vec<usize> },
    Embedding { row_map: Vec<usize>, col_map: Vec<usize> },
    EmbeddingBicomplement { row_map: Vec<usize>, col_map: Vec<usize> },
}

impl ReportOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            ReportOutcome::Anticomplete { .. } => "anticomplete",
            ReportOutcome::Complete { .. } => "complete",
            ReportOutcome::Embedding { .. } => "embedding",
            ReportOutcome::EmbeddingBicomplement { .. } => "embedding-bicomplement",
        }
    }

    pub fn sizes(&self) -> Option<(usize, usize)> {
        match self {
            ReportOutcome::Anticomplete { z1, z2 } | ReportOutcome::Complete { z1, z2 } => Some((z1.len(), z2.len())),
            _ => None,
        }
    }

    fn pair(p: VertexSetPair, complete: bool) -> Self {
        if complete {
            ReportOutcome::Complete { z1: p.z1, z2: p.z2 }
        } else {
            ReportOutcome::Anticomplete { z1: p.z1, z2: p.z2 }
        }
    }

    fn embedding(e: Embedding, bicomplement: bool) -> Self {
        if bicomplement {
            ReportOutcome::EmbeddingBicomplement { row_map: e.row_map, col_map: e.col_map }
        } else {
            ReportOutcome::Embedding { row_map: e.row_map, col_map: e.col_map }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurePairReport {
    pub schema: u32,
    pub mode: Mode,
    pub seed: u64,
    pub n1: usize,
    pub n2: usize,
    /// Pattern rows as `0`/`1` strings.
    pub pattern: Vec<String>,
    /// Exponent of the linear modes.
    pub c: Option<f64>,
    pub outcome: ReportOutcome,
    /// Which side carries the linear bound, for the linear modes.
    pub linear_side: Option<LinearSide>,
    /// Guaranteed sizes of a pair outcome, when one is claimed.
    pub bound: Option<(usize, usize)>,
    pub route: String,
    pub constants: BTreeMap<String, Value>,
}

impl PurePairReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: PurePairReport = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {}", r.schema)));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Exponent for the linear modes; values above one are clamped.
    pub c: f64,
    /// Window size for the symmetric modes in place of `floor(2cn)`; also
    /// skips the small-bound shortcut. For exercising the reduction on
    /// small hosts.
    pub window: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { seed: 0, c: 0.5, window: None }
    }
}

/// `ln c` with `c = (16 t^2)^(-t)`.
pub fn ln_sym_c(t: usize) -> f64 {
    -(t as f64) * (16.0 * (t * t) as f64).ln()
}

/// The size guarantee of `mode` for this host and pattern; `side` picks
/// the orientation of the linear bounds. `None` when no bound is claimed.
pub fn required_sizes(
    mode: Mode,
    host: &OrderedBigraph,
    pattern: &TreePattern,
    c: f64,
    side: Option<LinearSide>,
) -> Result<Option<(usize, usize)>> {
    let (n1, n2) = (host.n1(), host.n2());
    let n = n1.min(n2);
    let t = pattern.t();
    Ok(match mode {
        Mode::Sparse => {
            let k = compute_constants(t, pattern.radius(), n)?;
            let cap = n as f64 / (4.0 * (t * t) as f64);
            (host.max_degree() as f64 <= cap).then_some((k.bound, k.bound))
        }
        Mode::Linear => {
            let k = linear_constants(pattern, c)?;
            let b = linear_bounds(&k, n1, n2);
            side.map(|s| match s {
                LinearSide::First => b[0],
                LinearSide::Second => b[1],
            })
        }
        Mode::Symmetric => {
            let k = compute_constants(t, pattern.radius(), n)?;
            let b = ceil_exp(ln_sym_c(t) + k.ln_bound);
            Some((b, b))
        }
        Mode::LinearSymmetric => {
            let k = linear_constants(pattern, c)?;
            let ln_delta = ln_sym_c(t) + k.ln_eps;
            let lin = ceil_exp(ln_delta + (n as f64).ln());
            let pw = ceil_exp(ln_delta + (1.0 - k.c) * (n as f64).ln());
            side.map(|s| match s {
                LinearSide::First => (lin, pw),
                LinearSide::Second => (pw, lin),
            })
        }
    })
}

/// Runs `mode` on `host`. Pair outcomes are checked against the bound
/// before a report is returned.
pub fn find_pair(mode: Mode, host: &OrderedBigraph, pattern: &TreePattern, opts: &PipelineOptions) -> Result<PurePairReport> {
    let mut report = PurePairReport {
        schema: SCHEMA,
        mode,
        seed: opts.seed,
        n1: host.n1(),
        n2: host.n2(),
        pattern: pattern.graph().row_strings(),
        c: matches!(mode, Mode::Linear | Mode::LinearSymmetric).then_some(opts.c),
        outcome: ReportOutcome::Anticomplete { z1: vec![], z2: vec![] },
        linear_side: None,
        bound: None,
        route: String::new(),
        constants: BTreeMap::new(),
    };
    match mode {
        Mode::Sparse => {
            let run = embed_or_pair_sparse(host, pattern, &SparseOptions { seed: opts.seed, ..Default::default() })?;
            report.outcome = match run.outcome {
                SparseOutcome::Pair(p) => ReportOutcome::pair(p, false),
                SparseOutcome::Found(e) => ReportOutcome::embedding(e, false),
            };
            report.route = format!("{:?}", run.route);
            sparse_constants(&mut report.constants, &run.constants);
            report.constants.insert("degree_cap_ok".into(), json!(run.degree_cap_ok));
        }
        Mode::Linear => {
            let run = embed_or_pair_linear(host, pattern, opts.c, opts.seed)?;
            report.outcome = match run.outcome {
                LinearOutcome::Pair { pair, linear } => {
                    report.linear_side = Some(linear);
                    ReportOutcome::pair(pair, false)
                }
                LinearOutcome::Found(e) => ReportOutcome::embedding(e, false),
            };
            report.route = format!("{:?}", run.route);
            linear_constants_into(&mut report.constants, pattern, opts.c)?;
            report.constants.insert("degree_cap_ok".into(), json!(run.degree_cap_ok));
        }
        Mode::Symmetric | Mode::LinearSymmetric => symmetric(mode, host, pattern, opts, &mut report)?,
    }
    if report.outcome.sizes().is_some() {
        report.bound = required_sizes(mode, host, pattern, opts.c, report.linear_side)?;
    }
    check_bound(&report).map_err(Error::HypothesisViolated)?;
    Ok(report)
}

pub fn symmetric_pure_pair(host: &OrderedBigraph, pattern: &TreePattern, opts: &PipelineOptions) -> Result<PurePairReport> {
    find_pair(Mode::Symmetric, host, pattern, opts)
}

pub fn linear_symmetric(host: &OrderedBigraph, pattern: &TreePattern, opts: &PipelineOptions) -> Result<PurePairReport> {
    find_pair(Mode::LinearSymmetric, host, pattern, opts)
}

fn sparse_constants(map: &mut BTreeMap<String, Value>, k: &crate::sparse::MainConstants) {
    map.insert("t".into(), json!(k.t));
    map.insert("r".into(), json!(k.r));
    map.insert("eps".into(), json!(k.eps));
    map.insert("K".into(), json!(k.k));
    map.insert("ln_bound".into(), json!(k.ln_bound));
}

fn linear_constants_into(map: &mut BTreeMap<String, Value>, pattern: &TreePattern, c: f64) -> Result<()> {
    let k = linear_constants(pattern, c)?;
    map.insert("c".into(), json!(k.c));
    map.insert("k".into(), json!(k.k));
    map.insert("r".into(), json!(k.r));
    map.insert("K".into(), json!(k.big_k));
    map.insert("ln_gamma".into(), json!(k.ln_gamma));
    map.insert("ln_eps".into(), json!(k.ln_eps));
    Ok(())
}

/// Best pure pair found greedily in the host or its bicomplement.
fn greedy_pure_pair(host: &OrderedBigraph) -> Option<(VertexSetPair, bool)> {
    let key = |p: &VertexSetPair| (p.min_side(), p.z1.len() + p.z2.len());
    let a = greedy_anticomplete(host).map(|p| (p, false));
    let b = greedy_anticomplete(&host.bicomplement()).map(|p| (p, true));
    match (a, b) {
        (Some(a), Some(b)) => Some(if key(&b.0) > key(&a.0) { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn symmetric(mode: Mode, host: &OrderedBigraph, pattern: &TreePattern, opts: &PipelineOptions, report: &mut PurePairReport) -> Result<()> {
    let n = host.n1().min(host.n2());
    let t = pattern.t();
    let eps = 1.0 / (4.0 * (t * t) as f64);
    let ln_c = ln_sym_c(t);
    let c = &mut report.constants;
    c.insert("t".into(), json!(t));
    c.insert("eps".into(), json!(eps));
    c.insert("d".into(), json!((t * t) as u64));
    c.insert("ln_c".into(), json!(ln_c));
    // ln of the guaranteed size; at most zero means a single pair suffices
    let ln_target = match mode {
        Mode::Symmetric => {
            let k = compute_constants(t, pattern.radius(), n)?;
            c.insert("r".into(), json!(k.r));
            c.insert("K".into(), json!(k.k));
            ln_c + k.ln_bound
        }
        _ => {
            linear_constants_into(c, pattern, opts.c)?;
            let k = linear_constants(pattern, opts.c)?;
            c.insert("ln_delta".into(), json!(ln_c + k.ln_eps));
            ln_c + k.ln_eps + (1.0 - k.c) * (n as f64).ln()
        }
    };
    c.insert("ln_target".into(), json!(ln_target));
    if opts.window.is_none() && ln_target <= 0.0 {
        let (p, complete) = greedy_pure_pair(host).ok_or_else(|| Error::PreconditionViolated("host has an empty side".into()))?;
        report.route = "SingleEntry".into();
        if mode == Mode::LinearSymmetric {
            report.linear_side = Some(LinearSide::First);
        }
        report.outcome = ReportOutcome::pair(p, complete);
        return Ok(());
    }
    let m = match opts.window {
        Some(w) => w,
        None => {
            let two_cn = 2.0 * (ln_c + (n as f64).ln()).exp();
            (two_cn + crate::numeric::SNAP).floor() as usize
        }
    };
    c.insert("m".into(), json!(m));
    let params = SparsifyParams::new(eps, m, m)?;
    let (y, dense) = match sparsify(host, pattern.graph(), &params)? {
        SparsifyOutcome::Found(e) => {
            report.route = "Sparsify".into();
            report.outcome = ReportOutcome::embedding(e, false);
            return Ok(());
        }
        SparsifyOutcome::SparsePair(y) => (y, false),
        SparsifyOutcome::DensePair(y) => (y, true),
    };
    let mut sub = host.induced_sub(&y.z1, &y.z2)?;
    if dense {
        sub = sub.bicomplement();
    }
    let lift = |p: VertexSetPair| VertexSetPair::new(p.z1.iter().map(|&i| y.z1[i]).collect(), p.z2.iter().map(|&j| y.z2[j]).collect());
    if mode == Mode::Symmetric {
        let run = embed_or_pair_sparse(&sub, pattern, &SparseOptions { seed: opts.seed, ..Default::default() })?;
        report.constants.insert("J".into(), json!(run.constants.k));
        report.route = format!("{}{:?}", if dense { "Dense" } else { "Sparse" }, run.route);
        report.outcome = match run.outcome {
            SparseOutcome::Pair(p) => ReportOutcome::pair(lift(p), dense),
            SparseOutcome::Found(e) => ReportOutcome::embedding(e.lift(&y.z1, &y.z2), dense),
        };
    } else {
        let run = embed_or_pair_linear(&sub, pattern, opts.c, opts.seed)?;
        report.route = format!("{}{:?}", if dense { "Dense" } else { "Sparse" }, run.route);
        report.outcome = match run.outcome {
            LinearOutcome::Pair { pair, linear } => {
                report.linear_side = Some(linear);
                ReportOutcome::pair(lift(pair), dense)
            }
            LinearOutcome::Found(e) => ReportOutcome::embedding(e.lift(&y.z1, &y.z2), dense),
        };
    }
    Ok(())
}

fn check_bound(report: &PurePairReport) -> std::result::Result<(), String> {
    match (report.outcome.sizes(), report.bound) {
        (Some((a, b)), Some((m1, m2))) if a < m1 || b < m2 => Err(format!("pair sizes ({a}, {b}) below the bound ({m1}, {m2})")),
        _ => Ok(()),
    }
}

/// Re-checks a report against `host` using only the report's contents.
pub fn verify_report(report: &PurePairReport, host: &OrderedBigraph) -> std::result::Result<(), String> {
    if report.schema != SCHEMA {
        return Err(format!("unsupported schema {}", report.schema));
    }
    if (report.n1, report.n2) != (host.n1(), host.n2()) {
        return Err(format!("report is for a {}x{} host", report.n1, report.n2));
    }
    let pattern = TreePattern::new(OrderedBigraph::from_row_strings(&report.pattern, None).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    match &report.outcome {
        ReportOutcome::Anticomplete { z1, z2 } | ReportOutcome::Complete { z1, z2 } => {
            let p = VertexSetPair { z1: z1.clone(), z2: z2.clone() };
            p.validate(host).map_err(|e| e.to_string())?;
            if z1.is_empty() || z2.is_empty() {
                return Err("pair has an empty side".into());
            }
            let ok = match report.outcome {
                ReportOutcome::Anticomplete { .. } => host.is_anticomplete(z1, z2),
                _ => host.is_complete(z1, z2),
            };
            if !ok {
                return Err(format!("pair is not {}", report.outcome.tag()));
            }
            let c = report.c.unwrap_or(0.5);
            let expect = required_sizes(report.mode, host, &pattern, c, report.linear_side).map_err(|e| e.to_string())?;
            if expect != report.bound {
                return Err(format!("bound {:?} differs from recomputed {expect:?}", report.bound));
            }
            check_bound(report)
        }
        ReportOutcome::Embedding { row_map, col_map } | ReportOutcome::EmbeddingBicomplement { row_map, col_map } => {
            let e = Embedding { row_map: row_map.clone(), col_map: col_map.clone() };
            let target = match report.outcome {
                ReportOutcome::Embedding { .. } => pattern.graph().clone(),
                _ => pattern.graph().bicomplement(),
            };
            if verify_embedding(host, &target, &e) {
                Ok(())
            } else {
                Err("embedding fails verification".into())
            }
        }
    }
}

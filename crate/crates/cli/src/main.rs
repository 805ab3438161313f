use clap::{Parser, Subcommand, ValueEnum};
use ppk_core::containment::{contains, contains_either, Either, Embedding};
use ppk_core::generators::{gen_girth, gen_random, GirthParams};
use ppk_core::oracle::{oracle_max_anticomplete, Objective};
use ppk_core::pipeline::{find_pair, verify_report, Mode, PipelineOptions, PurePairReport};
use ppk_core::{OrderedBigraph, TreePattern};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod suites;

#[derive(Parser)]
#[command(name = "ppk", version, about = "Pure pairs and ordered tree embeddings in 0/1 matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether the host contains the pattern as an ordered submatrix.
    Contain {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        /// Also try the bicomplement of the pattern.
        #[arg(long)]
        bicomplement: bool,
    },
    /// Find a pure pair or an embedding of a tree pattern.
    FindPair {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, env = "PPK_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a host.
    Gen {
        #[command(subcommand)]
        kind: GenCmd,
    },
    /// Exact brute-force answers for small hosts.
    Oracle {
        #[command(subcommand)]
        kind: OracleCmd,
    },
    /// Re-check a report against its host.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        host: PathBuf,
    },
    /// Run a benchmark suite and write one CSV row per run.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "PPK_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    Random {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, env = "PPK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    Girth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
        #[arg(long, env = "PPK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    MaxAnticomplete {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sparse,
    Linear,
    Symmetric,
    LinearSymmetric,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sparse => Mode::Sparse,
            ModeArg::Linear => Mode::Linear,
            ModeArg::Symmetric => Mode::Symmetric,
            ModeArg::LinearSymmetric => Mode::LinearSymmetric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Maxmin,
    Maxsum,
}

fn read_obm(path: &Path) -> Result<OrderedBigraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    OrderedBigraph::from_obm(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes through a temporary sibling so readers never see a partial file.
fn write_atomic(path: &Path, data: &str) -> Result<(), String> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, data).map_err(|e| format!("{}: {e}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| format!("{}: {e}", path.display()))
}

fn embedding_json(e: &Embedding) -> serde_json::Value {
    json!({ "row_map": e.row_map, "col_map": e.col_map })
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.cmd {
        Cmd::Contain { host, pattern, bicomplement } => {
            let (g, p) = (read_obm(&host)?, read_obm(&pattern)?);
            let out = if bicomplement {
                match contains_either(&g, &p) {
                    Either::No => json!({ "found": false }),
                    Either::Pattern(e) => json!({ "found": true, "which": "pattern", "embedding": embedding_json(&e) }),
                    Either::Bicomplement(e) => json!({ "found": true, "which": "bicomplement", "embedding": embedding_json(&e) }),
                }
            } else {
                match contains(&g, &p) {
                    None => json!({ "found": false }),
                    Some(e) => json!({ "found": true, "which": "pattern", "embedding": embedding_json(&e) }),
                }
            };
            println!("{out}");
        }
        Cmd::FindPair { mode, host, pattern, c, seed, json } => {
            let g = read_obm(&host)?;
            let p = TreePattern::new(read_obm(&pattern)?).map_err(|e| e.to_string())?;
            let opts = PipelineOptions { seed, c, window: None };
            let report = find_pair(mode.into(), &g, &p, &opts).map_err(|e| e.to_string())?;
            match json {
                Some(path) => {
                    write_atomic(&path, &report.to_json())?;
                    let sizes = report.outcome.sizes().map_or(String::new(), |(a, b)| format!(" {a} x {b}"));
                    println!("{}{sizes} via {}", report.outcome.tag(), report.route);
                }
                None => print!("{}", report.to_json()),
            }
        }
        Cmd::Gen { kind } => {
            let (g, out) = match kind {
                GenCmd::Random { n1, n2, p, seed, out } => (gen_random(n1, n2, p, seed), out),
                GenCmd::Girth { n, g, seed, out } => (GirthParams::new(n, g, seed).and_then(|q| gen_girth(&q)), out),
            };
            let g = g.map_err(|e| e.to_string())?;
            write_atomic(&out, &g.to_obm())?;
        }
        Cmd::Oracle { kind: OracleCmd::MaxAnticomplete { host, objective } } => {
            let g = read_obm(&host)?;
            let obj = match objective {
                ObjectiveArg::Maxmin => Objective::MaxMin,
                ObjectiveArg::Maxsum => Objective::MaxSum,
            };
            let p = oracle_max_anticomplete(&g, obj).map_err(|e| e.to_string())?;
            println!("{}", json!({ "z1": p.z1, "z2": p.z2 }));
        }
        Cmd::Verify { report, host } => {
            let text = std::fs::read_to_string(&report).map_err(|e| format!("{}: {e}", report.display()))?;
            let r = PurePairReport::from_json(&text).map_err(|e| e.to_string())?;
            verify_report(&r, &read_obm(&host)?)?;
            println!("ok");
        }
        Cmd::Bench { suite, out, seed } => {
            let rows = suites::run_suite(&suite, seed)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            let data = String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            write_atomic(&out, &data)?;
            let failures = rows.iter().filter(|r| r.outcome.starts_with("error")).count();
            println!("{} runs, {failures} errors", rows.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

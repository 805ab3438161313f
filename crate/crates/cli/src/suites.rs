//! Benchmark suites for `ppk bench`.

use ppk_core::generators::{gen_girth, gen_random, rng, GirthParams};
use ppk_core::pipeline::{find_pair, verify_report, Mode, PipelineOptions};
use ppk_core::tree::all_tree_patterns;
use ppk_core::{OrderedBigraph, TreePattern};
use rand::Rng;
use serde::Serialize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub instance: String,
    pub n1: usize,
    pub n2: usize,
    pub pattern: String,
    pub mode: String,
    pub outcome: String,
    pub z1: Option<usize>,
    pub z2: Option<usize>,
    pub bound: String,
    pub time_ms: f64,
    pub seed: u64,
}

struct Job {
    instance: String,
    host: std::sync::Arc<OrderedBigraph>,
    pattern: TreePattern,
    mode: Mode,
    seed: u64,
}

pub const SUITES: [&str; 3] = ["smoke", "random", "girth"];

fn jobs(suite: &str, seed: u64) -> Result<Vec<Job>, String> {
    let mut out = Vec::new();
    let mut push = |instance: String, host: &std::sync::Arc<OrderedBigraph>, pats: &[TreePattern], modes: &[Mode], s: u64| {
        for p in pats {
            for &mode in modes {
                out.push(Job { instance: instance.clone(), host: host.clone(), pattern: p.clone(), mode, seed: s });
            }
        }
    };
    let all = [Mode::Sparse, Mode::Linear, Mode::Symmetric, Mode::LinearSymmetric];
    match suite {
        "smoke" => {
            let pats = all_tree_patterns(3);
            for (k, n) in [16usize, 32, 64].into_iter().enumerate() {
                let s = seed.wrapping_add(k as u64);
                let h = std::sync::Arc::new(gen_random(n, n, 0.05, s).map_err(|e| e.to_string())?);
                push(format!("random-{n}x{n}-0.05-{s}"), &h, &pats, &all, s);
            }
        }
        "random" => {
            let pats = all_tree_patterns(5);
            let mut r = rng(seed);
            for k in 0..500u64 {
                let (n1, n2) = (r.gen_range(16..=512), r.gen_range(16..=512));
                let p = [0.02, 0.05, 0.1][r.gen_range(0..3)];
                let s = seed.wrapping_add(k);
                let h = std::sync::Arc::new(gen_random(n1, n2, p, s).map_err(|e| e.to_string())?);
                let pat = pats[r.gen_range(0..pats.len())].clone();
                push(format!("random-{n1}x{n2}-{p}-{s}"), &h, &[pat], &[Mode::Sparse, Mode::Linear], s);
            }
        }
        "girth" => {
            let pats = all_tree_patterns(4);
            for g in [4usize, 6] {
                let h = gen_girth(&GirthParams::new(50, g, seed).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let h = std::sync::Arc::new(h);
                push(format!("girth-50-{g}-{seed}"), &h, &pats, &all, seed);
            }
        }
        _ => return Err(format!("unknown suite {suite:?}; expected one of {SUITES:?}")),
    }
    Ok(out)
}

fn run_job(j: &Job) -> Row {
    let start = Instant::now();
    let opts = PipelineOptions { seed: j.seed, ..Default::default() };
    let res = find_pair(j.mode, &j.host, &j.pattern, &opts);
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut row = Row {
        instance: j.instance.clone(),
        n1: j.host.n1(),
        n2: j.host.n2(),
        pattern: j.pattern.graph().row_strings().join(";"),
        mode: j.mode.name().into(),
        outcome: String::new(),
        z1: None,
        z2: None,
        bound: String::new(),
        time_ms,
        seed: j.seed,
    };
    match res {
        Ok(rep) => {
            row.outcome = match verify_report(&rep, &j.host) {
                Ok(()) => rep.outcome.tag().into(),
                Err(e) => format!("error: unverified ({e})"),
            };
            if let Some((a, b)) = rep.outcome.sizes() {
                row.z1 = Some(a);
                row.z2 = Some(b);
            }
            if let Some((a, b)) = rep.bound {
                row.bound = format!("{a};{b}");
            }
        }
        Err(e) => row.outcome = format!("error: {e}"),
    }
    row
}

/// Runs every job of `suite`, spread over the available cores; rows come
/// back in job order.
pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<Row>, String> {
    let jobs = jobs(suite, seed)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = run_job(&jobs[i]);
                rows.lock().unwrap()[i] = Some(r);
            });
        }
    });
    Ok(rows.into_inner().unwrap().into_iter().map(|r| r.expect("every job ran")).collect())
}

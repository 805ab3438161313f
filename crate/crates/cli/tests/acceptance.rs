//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use ppk_core::bigraph::View;
use ppk_core::containment::{contains, verify_embedding};
use ppk_core::generators::{gen_girth, gen_random, rng, GirthParams};
use ppk_core::leaf_cover::{check_leaf_cover, leaf_cover};
use ppk_core::oracle::{all_embeddings, enumerate_max_anticomplete, girth, has_c4, oracle_max_anticomplete, Objective};
use ppk_core::pairs::greedy_anticomplete;
use ppk_core::parade::{
    build_interval_parade, check_band, check_shrink_resistant, exhaustive_grid, find_band, pair_type,
    pigeonhole_grid, shrink_resist, BandCertificate, CheckKind, Parade, ShrinkOutcome,
};
use ppk_core::pipeline::{find_pair, Mode, PipelineOptions, ReportOutcome};
use ppk_core::rainbow::{
    check_certificate, check_linear, embed_or_pair_linear, linear_bounds, rainbow, LinearOutcome, LinearSide,
    RainbowOutcome,
};
use ppk_core::sparse::{check_sound, embed_or_pair_sparse, SparseOptions, SparseOutcome};
use ppk_core::tree::all_tree_patterns;
use ppk_core::{OrderedBigraph, TreePattern};
use rand::Rng;
use std::process::Command;
use std::time::Instant;

type Outcome = Result<String, String>;

struct SoundRun {
    host: OrderedBigraph,
    pattern: TreePattern,
    sparse: Result<ppk_core::sparse::SparseRun, String>,
    linear: Result<ppk_core::rainbow::LinearRun, String>,
}

fn soundness_runs() -> (Vec<SoundRun>, f64) {
    let start = Instant::now();
    let pats = all_tree_patterns(5);
    let mut r = rng(2024);
    let mut runs = Vec::new();
    for k in 0..500u64 {
        let (n1, n2) = (r.gen_range(16..=512), r.gen_range(16..=512));
        let p = [0.02, 0.05, 0.1][r.gen_range(0..3)];
        let host = gen_random(n1, n2, p, k).unwrap();
        let pattern = pats[k as usize % pats.len()].clone();
        let sparse = embed_or_pair_sparse(&host, &pattern, &SparseOptions { seed: k, ..Default::default() }).map_err(|e| e.to_string());
        let linear = embed_or_pair_linear(&host, &pattern, 0.5, k).map_err(|e| e.to_string());
        runs.push(SoundRun { host, pattern, sparse, linear });
    }
    (runs, start.elapsed().as_secs_f64())
}

fn c1(runs: &[SoundRun], secs: f64) -> Outcome {
    let mut pairs = 0;
    let mut found = 0;
    for (i, run) in runs.iter().enumerate() {
        let s = run.sparse.as_ref().map_err(|e| format!("run {i} sparse: {e}"))?;
        check_sound(&run.host, &run.pattern, &s.outcome).map_err(|e| format!("run {i} sparse: {e}"))?;
        let l = run.linear.as_ref().map_err(|e| format!("run {i} linear: {e}"))?;
        match &l.outcome {
            LinearOutcome::Pair { pair, .. } => {
                if pair.z1.is_empty() || pair.z2.is_empty() || !run.host.is_anticomplete(&pair.z1, &pair.z2) {
                    return Err(format!("run {i} linear: pair not anticomplete"));
                }
            }
            LinearOutcome::Found(e) => {
                if !verify_embedding(&run.host, run.pattern.graph(), e) {
                    return Err(format!("run {i} linear: embedding fails"));
                }
            }
        }
        for o in [matches!(s.outcome, SparseOutcome::Pair(_)), matches!(l.outcome, LinearOutcome::Pair { .. })] {
            if o {
                pairs += 1;
            } else {
                found += 1;
            }
        }
    }
    if secs >= 600.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("{} runs, {pairs} pairs, {found} embeddings, {secs:.1}s", 2 * runs.len()))
}

fn c2(runs: &[SoundRun]) -> Outcome {
    let (mut sparse_cases, mut linear_cases) = (0, 0);
    for (i, run) in runs.iter().enumerate() {
        if contains(&run.host, run.pattern.graph()).is_some() {
            continue;
        }
        let s = run.sparse.as_ref().map_err(|e| e.clone())?;
        if s.degree_cap_ok {
            sparse_cases += 1;
            match &s.outcome {
                SparseOutcome::Pair(p) if p.min_side() >= s.constants.bound => {}
                o => return Err(format!("run {i} sparse: {o:?} below {}", s.constants.bound)),
            }
        }
        let l = run.linear.as_ref().map_err(|e| e.clone())?;
        if l.degree_cap_ok {
            linear_cases += 1;
            let b = linear_bounds(&l.constants, run.host.n1(), run.host.n2());
            match &l.outcome {
                LinearOutcome::Pair { pair, linear } => {
                    let (m1, m2) = if *linear == LinearSide::First { b[0] } else { b[1] };
                    if pair.z1.len() < m1 || pair.z2.len() < m2 {
                        return Err(format!("run {i} linear: sizes below ({m1}, {m2})"));
                    }
                    check_linear(&run.host, &run.pattern, l)?;
                }
                LinearOutcome::Found(_) => return Err(format!("run {i} linear: embedding in a pattern-free host")),
            }
        }
    }
    // random hosts almost always contain every small tree, so permutation
    // matrices (which avoid every tree with a vertex of degree two) are
    // added to exercise the bound
    let pats: Vec<TreePattern> = all_tree_patterns(5).into_iter().filter(|p| p.t() > 2).collect();
    let mut r = rng(22);
    let mut extra = 0;
    for k in 0..50u64 {
        let n = r.gen_range(16..=512);
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut r);
        let host = OrderedBigraph::from_fn(n, n, |i, j| perm[i] == j);
        let pat = &pats[k as usize % pats.len()];
        if contains(&host, pat.graph()).is_some() {
            return Err(format!("permutation host {k} contains a tree with a degree-two vertex"));
        }
        let s = embed_or_pair_sparse(&host, pat, &SparseOptions { seed: k, ..Default::default() }).map_err(|e| e.to_string())?;
        if s.degree_cap_ok {
            extra += 1;
            match &s.outcome {
                SparseOutcome::Pair(p) if p.min_side() >= s.constants.bound && host.is_anticomplete(&p.z1, &p.z2) => {}
                o => return Err(format!("permutation host {k}: {o:?} below {}", s.constants.bound)),
            }
        }
    }
    Ok(format!(
        "{sparse_cases} sparse and {linear_cases} linear runs of the suite met the hypotheses; {extra} permutation hosts met them; no shortfall"
    ))
}

fn c3() -> Outcome {
    let host = OrderedBigraph::from_fn(9, 9, |i, j| i == j);
    let pat = TreePattern::from_rows_str("11").unwrap();
    let run = embed_or_pair_sparse(&host, &pat, &SparseOptions::default()).map_err(|e| e.to_string())?;
    match run.outcome {
        SparseOutcome::Pair(p) if p.z1.len() == 4 && p.z2.len() >= 5 && host.is_anticomplete(&p.z1, &p.z2) => {
            Ok(format!("sizes ({}, {})", p.z1.len(), p.z2.len()))
        }
        o => Err(format!("{o:?}")),
    }
}

fn c4() -> Outcome {
    let mut r = rng(4);
    for seed in 0..200u64 {
        let (n1, n2) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let g = gen_random(n1, n2, r.gen_range(0.0..1.0), seed).unwrap();
        for obj in [Objective::MaxMin, Objective::MaxSum] {
            let p = oracle_max_anticomplete(&g, obj).map_err(|e| e.to_string())?;
            let got = (!p.z1.is_empty()).then(|| obj.key(p.z1.len(), p.z2.len()));
            if got != enumerate_max_anticomplete(&g, obj) || (got.is_some() && !g.is_anticomplete(&p.z1, &p.z2)) {
                return Err(format!("seed {seed}: branch-and-bound disagrees with enumeration on {g:?}"));
            }
        }
    }
    let pats = all_tree_patterns(4);
    for k in 0..100u64 {
        let (n1, n2) = (r.gen_range(2..=18), r.gen_range(2..=18));
        let g = gen_random(n1, n2, [0.1, 0.2, 0.3][k as usize % 3], 1000 + k).unwrap();
        let best = oracle_max_anticomplete(&g, Objective::MaxMin).map_err(|e| e.to_string())?.min_side();
        let pat = &pats[k as usize % pats.len()];
        let mut mins = Vec::new();
        if let Some(p) = greedy_anticomplete(&g) {
            mins.push(p.min_side());
        }
        for mode in [Mode::Sparse, Mode::Linear] {
            if let Ok(rep) = find_pair(mode, &g, pat, &PipelineOptions { seed: k, ..Default::default() }) {
                if let ReportOutcome::Anticomplete { z1, z2 } = &rep.outcome {
                    mins.push(z1.len().min(z2.len()));
                }
            }
        }
        if let Some(&m) = mins.iter().find(|&&m| m > best) {
            return Err(format!("instance {k}: pair with min side {m} beats the optimum {best}"));
        }
    }
    Ok("200 tiny hosts agree; 100 hosts up to 18 x 18 within the optimum".into())
}

fn c5() -> Outcome {
    let mut patterns = Vec::new();
    for h1 in 1..=3usize {
        for h2 in 1..=3usize {
            for mask in 0u32..(1 << (h1 * h2)) {
                patterns.push(OrderedBigraph::from_fn(h1, h2, |i, j| mask >> (i * h2 + j) & 1 == 1));
            }
        }
    }
    let mut r = rng(5);
    let mut checks = 0;
    for seed in 0..100u64 {
        let (n1, n2) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let host = gen_random(n1, n2, r.gen_range(0.2..0.8), seed).unwrap();
        for p in &patterns {
            let all = all_embeddings(&host, p);
            let got = contains(&host, p);
            if got.as_ref() != all.first() {
                return Err(format!("seed {seed}: contains disagrees on pattern {p:?}"));
            }
            checks += 1;
        }
    }
    let host = OrderedBigraph::from_rows_str("10").unwrap();
    if contains(&host, &OrderedBigraph::from_rows_str("01").unwrap()).is_some() {
        return Err("[10] reported to contain [01]".into());
    }
    Ok(format!("{checks} host/pattern pairs agree; [10] avoids [01]"))
}

fn c6() -> Outcome {
    let mut r = rng(6);
    let (mut exact, mut bands, mut anti) = (0, 0, 0);
    for seed in 0..40u64 {
        let k = 1 + seed as usize % 2;
        let n = r.gen_range(4 * k + 2..=28 * k);
        let g = gen_random(n, n, r.gen_range(0.6..=1.0), seed).unwrap();
        let v = View::new(&g);
        let a = build_interval_parade(&v, k).map_err(|e| e.to_string())?;
        let (phi, mu) = ([0.25, 0.5][seed as usize / 2 % 2], 0.25);
        match shrink_resist(&v, &a, phi, mu, seed).map_err(|e| e.to_string())? {
            ShrinkOutcome::Anticomplete(w) => {
                if !w.holds(&v) {
                    return Err(format!("seed {seed}: witness not anticomplete"));
                }
                anti += 1;
            }
            ShrinkOutcome::Contraction { parade, steps } => {
                let idx = parade.indices().len() as f64;
                if steps as f64 > (idx * idx / phi).floor() {
                    return Err(format!("seed {seed}: {steps} contractions"));
                }
                if !parade.is_contraction_of(&a) {
                    return Err(format!("seed {seed}: not a contraction"));
                }
                match check_shrink_resistant(&v, &parade, phi, mu, seed)? {
                    CheckKind::Exact => exact += 1,
                    CheckKind::Sampled => return Err(format!("seed {seed}: blocks above the exhaustive limit")),
                }
                if let Ok(cert) = find_band(&v, &parade, 1, phi, mu) {
                    let sp = parade.sub(&cert.index);
                    let d = sp.max_degree_fn(&v);
                    for h in sp.neg() {
                        for j in sp.pos() {
                            if pair_type(d.get(j, h), sp.block(h).len(), v.n1(), phi) != cert.s {
                                return Err(format!("seed {seed}: pair ({h}, {j}) has another type"));
                            }
                        }
                    }
                    check_band(&v, &parade, &cert, seed)?;
                    bands += 1;
                }
            }
        }
    }
    for seed in 0..50u64 {
        let mut cr = rng(600 + seed);
        let table: Vec<Vec<u32>> = (0..3).map(|_| (0..9).map(|_| cr.gen_range(0..2)).collect()).collect();
        let (p, e) = (pigeonhole_grid(&table, 2, 2), exhaustive_grid(&table, 2));
        let mono = |g: &Option<(Vec<usize>, Vec<usize>)>| {
            g.as_ref().is_some_and(|(rs, cs)| {
                let c = table[rs[0]][cs[0]];
                rs.iter().all(|&a| cs.iter().all(|&b| table[a][b] == c))
            })
        };
        if !mono(&p) || !mono(&e) {
            return Err(format!("colouring {seed}: grid searches disagree"));
        }
    }
    Ok(format!("{anti} anticomplete witnesses, {exact} exact shrink checks, {bands} bands re-typed, 50 colourings agree"))
}

/// Columns each see a random eighth of the rows; the band is confirmed by
/// `check_band` before the cover is built.
fn banded_fixture(a: usize, b: usize, seed: u64) -> (OrderedBigraph, Parade, BandCertificate) {
    let mut r = rng(seed);
    let mut adj = vec![vec![false; b]; a];
    for j in 0..b {
        for i in rand::seq::index::sample(&mut r, a, a / 8) {
            adj[i][j] = true;
        }
    }
    let g = OrderedBigraph::from_fn(a, b, |i, j| adj[i][j]);
    let p = Parade::new(&View::new(&g), vec![(-1, (0..a).collect()), (1, (0..b).collect())]).unwrap();
    let cert = BandCertificate { tau: 0.125, phi: 0.75, mu: 0.125, index: vec![-1, 1], s: None };
    (g, p, cert)
}

fn c7() -> Outcome {
    for f in 0..20u64 {
        let (a, b) = (256 + 64 * (f as usize % 5), 256 + 64 * (f as usize / 5));
        let (g, p, cert) = banded_fixture(a, b, 700 + f);
        let v = View::new(&g);
        check_band(&v, &p, &cert, f).map_err(|e| format!("fixture {f} is not banded: {e}"))?;
        let res = leaf_cover(&v, &p, 1, cert.tau, cert.phi, cert.mu).map_err(|e| format!("fixture {f}: {e}"))?;
        check_leaf_cover(&v, &p, &res).map_err(|e| format!("fixture {f}: {e}"))?;
    }
    Ok("20 banded fixtures, every cover passes the exact checker".into())
}

fn c8() -> Outcome {
    let mut trees = 0;
    for k in 1..=4usize {
        for seed in 0..5u64 {
            let g = gen_random(10 * k, 10 * k, 0.3, seed).unwrap();
            let v = View::new(&g);
            let a: Parade = build_interval_parade(&v, k).map_err(|e| e.to_string())?;
            match rainbow(&v, &a, 0, k, 0.5, seed).map_err(|e| e.to_string())? {
                RainbowOutcome::Certificate(cert) => {
                    if cert.ln_gamma != 0.0 || cert.levels != vec![a.clone()] {
                        return Err("base certificate differs from the parade".into());
                    }
                    if a.neg().iter().any(|&h| cert.c_of(h) != Some(a.block(h))) {
                        return Err("C differs from A".into());
                    }
                    trees += check_certificate(&v, &cert, seed)?;
                }
                o => return Err(format!("{o:?}")),
            }
        }
    }
    Ok(format!("{trees} trees checked over all shapes"))
}

fn c9() -> Outcome {
    for run in 0..50u64 {
        let g = if run % 2 == 0 { 4 } else { 6 };
        let m = gen_girth(&GirthParams::new(50, g, run).unwrap()).map_err(|e| e.to_string())?;
        if girth(&m).is_some_and(|c| c <= g) || (g == 4 && has_c4(&m)) {
            return Err(format!("run {run}: short cycle"));
        }
    }
    Ok("50 hosts, girth verified by BFS".into())
}

fn c10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ppk");
    let dir = std::env::temp_dir().join(format!("ppk-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let p = |s: &str| dir.join(s).to_string_lossy().into_owned();
    std::fs::write(p("pat.obm"), "1 2\n11\n").map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<(), String> {
        let out = Command::new(bin).args(args).env("PPK_SEED", "17").output().map_err(|e| e.to_string())?;
        if out.status.success() {
            Ok(())
        } else {
            Err(String::from_utf8_lossy(&out.stderr).into_owned())
        }
    };
    let mut outputs = Vec::new();
    for round in 0..2 {
        let tag = |s: &str| p(&format!("{s}{round}"));
        run(&["gen", "random", "--n1", "60", "--n2", "40", "--p", "0.08", "--out", &tag("r.obm")])?;
        run(&["gen", "girth", "--n", "30", "--g", "4", "--out", &tag("g.obm")])?;
        let mut files = vec![tag("r.obm"), tag("g.obm")];
        for mode in ["sparse", "linear", "symmetric", "linear-symmetric"] {
            let out = tag(&format!("{mode}.json"));
            run(&["find-pair", "--mode", mode, "--host", &tag("r.obm"), "--pattern", &p("pat.obm"), "--json", &out])?;
            run(&["verify", "--report", &out, "--host", &tag("r.obm")])?;
            files.push(out);
        }
        outputs.push(files.iter().map(std::fs::read).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if outputs[0] != outputs[1] {
        return Err("outputs differ between invocations".into());
    }
    Ok(format!("{} files byte-identical across two invocations", outputs[0].len()))
}

fn main() {
    // numeric arguments select criteria; cargo's own flags are ignored
    let only: Vec<String> = std::env::args().skip(1).filter(|a| a.parse::<u32>().is_ok()).collect();
    let want = |n: &str| only.is_empty() || only.iter().any(|o| o == n);
    let (runs, secs) = if want("1") || want("2") { soundness_runs() } else { (Vec::new(), 0.0) };
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 soundness suite", Box::new(|| c1(&runs, secs))),
        ("2 completeness under the hypotheses", Box::new(|| c2(&runs))),
        ("3 radius-1 star on the 9x9 matching", Box::new(c3)),
        ("4 oracle agreement", Box::new(c4)),
        ("5 containment correctness", Box::new(c5)),
        ("6 parade machinery", Box::new(c6)),
        ("7 leaf cover invariants", Box::new(c7)),
        ("8 rainbow base case", Box::new(c8)),
        ("9 girth generator", Box::new(c9)),
        ("10 determinism", Box::new(c10)),
    ];
    let mut failed = 0;
    for (name, f) in &checks {
        if !want(name.split(' ').next().unwrap()) {
            continue;
        }
        match f() {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Anticomplete pairs in bounded-degree hosts that avoid a tree pattern.
//!
//! Radius one is the star argument. For larger radius the engine keeps a
//! state `(x, A1, A2)` and interval blocks `B_u`, grows the sets
//! `X_uv, Y_uv`, and pins one vertex per pattern vertex level by level.
//! Every failure of the construction is turned into an explicit witness: a
//! new state with larger `x`, a strictly larger `Y_uv`, or an anticomplete
//! pair. If no witness applies the engine falls back to exhaustive
//! containment and a greedy pair, so the result is always certified.

use crate::bigraph::{OrderedBigraph, VertexSetPair};
use crate::bitset::BitSet;
use crate::containment::{contains, verify_embedding, Embedding};
use crate::error::{Error, Result};
use crate::numeric::{ceil_exp, ceil_real, floor_real, ln_ge, ln_usize};
use crate::pairs::greedy_anticomplete;
use crate::sparsify::lowest_by;
use crate::tree::{Side, TreePattern};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainConstants {
    pub t: usize,
    pub r: usize,
    pub n: usize,
    pub eps: f64,
    /// `K` with `t^(K^r) = n`.
    pub k: f64,
    /// `k_s` for `s = 1..r-1`, stored at index `s - 1`.
    pub k_s: Vec<f64>,
    /// `ln(n * t^(-5 K^(r-1)))`.
    pub ln_bound: f64,
    pub bound: usize,
}

impl MainConstants {
    pub fn ln_t(&self) -> f64 {
        (self.t as f64).ln()
    }

    pub fn k_sub(&self, s: usize) -> f64 {
        self.k_s[s - 1]
    }

    /// `K^(r-1) - k_(r-1)`, the ceiling on `x` (claim (1) of the construction).
    pub fn x_limit(&self) -> f64 {
        let top = self.k.powi(self.r as i32 - 1);
        if self.r >= 2 {
            top - self.k_sub(self.r - 1)
        } else {
            top
        }
    }
}

pub fn compute_constants(t: usize, r: usize, n: usize) -> Result<MainConstants> {
    if t < 2 || r < 1 || n < 2 {
        return Err(Error::PreconditionViolated(format!(
            "need t >= 2, r >= 1, n >= 2; got t = {t}, r = {r}, n = {n}"
        )));
    }
    let ln_t = (t as f64).ln();
    let ln_n = (n as f64).ln();
    let k = (ln_n / ln_t).powf(1.0 / r as f64);
    let k = snap(k);
    let k_s = (1..r)
        .map(|s| 4.0 * (0..s).map(|i| k.powi(i as i32)).sum::<f64>())
        .collect();
    let ln_bound = ln_n - 5.0 * k.powi(r as i32 - 1) * ln_t;
    Ok(MainConstants {
        t,
        r,
        n,
        eps: 1.0 / (4.0 * (t * t) as f64),
        k,
        k_s,
        ln_bound,
        bound: ceil_exp(ln_bound),
    })
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparseOutcome {
    Pair(VertexSetPair),
    Found(Embedding),
}

/// Which branch produced the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Star,
    TrivialBound,
    AnticompleteState,
    ClaimOne,
    LastLevel,
    Levels,
    Fallback,
}

#[derive(Debug, Clone)]
pub struct SparseOptions {
    pub seed: u64,
    /// Largest transversal product searched exhaustively.
    pub transversal_budget: u64,
    /// Random transversals tried above the budget.
    pub samples: usize,
    /// Run the level construction even when the bound is at most one.
    pub force_levels: bool,
    /// Skip the `x` ceiling so small hosts reach the level construction.
    pub ignore_x_limit: bool,
}

impl Default for SparseOptions {
    fn default() -> Self {
        SparseOptions {
            seed: 0,
            transversal_budget: 1_000_000,
            samples: 1000,
            force_levels: false,
            ignore_x_limit: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparseRun {
    pub outcome: SparseOutcome,
    pub route: Route,
    pub constants: MainConstants,
    pub degree_cap_ok: bool,
    /// Number of state or `Y_uv` augmentations applied.
    pub augmentations: usize,
}

/// Soundness of an outcome: exact anticompleteness or a verified embedding.
pub fn check_sound(host: &OrderedBigraph, pattern: &TreePattern, out: &SparseOutcome) -> std::result::Result<(), String> {
    match out {
        SparseOutcome::Found(e) => {
            if verify_embedding(host, pattern.graph(), e) {
                Ok(())
            } else {
                Err("embedding fails verification".into())
            }
        }
        SparseOutcome::Pair(p) => {
            p.validate(host).map_err(|e| e.to_string())?;
            if p.z1.is_empty() || p.z2.is_empty() {
                return Err("empty side".into());
            }
            if host.is_anticomplete(&p.z1, &p.z2) {
                Ok(())
            } else {
                Err("pair is not anticomplete".into())
            }
        }
    }
}

pub fn embed_or_pair_sparse(host: &OrderedBigraph, pattern: &TreePattern, opts: &SparseOptions) -> Result<SparseRun> {
    let n = host.n1().min(host.n2());
    let t = pattern.t();
    let r = pattern.radius();
    let constants = compute_constants(t, r, n)?;
    let cap = n as f64 / (4.0 * (t * t) as f64);
    let degree_cap_ok = host.max_degree() as f64 <= cap;
    let mut run = SparseRun {
        outcome: SparseOutcome::Pair(VertexSetPair::default()),
        route: Route::Fallback,
        constants,
        degree_cap_ok,
        augmentations: 0,
    };

    let attempt = if r == 1 {
        star_case(host, pattern, n).map(|o| (o, Route::Star))
    } else if run.constants.bound <= 1 && !opts.force_levels {
        greedy_anticomplete(host).map(|p| (SparseOutcome::Pair(p), Route::TrivialBound))
    } else {
        let mut eng = Engine::new(host, pattern, &run.constants, opts);
        let res = eng.run();
        run.augmentations = eng.augmentations;
        res
    };

    if let Some((o, route)) = attempt {
        if check_sound(host, pattern, &o).is_ok() {
            run.outcome = o;
            run.route = route;
            return Ok(run);
        }
    }
    if let Some(e) = contains(host, pattern.graph()) {
        run.outcome = SparseOutcome::Found(e);
        return Ok(run);
    }
    match greedy_anticomplete(host) {
        Some(p) if p.min_side() >= run.constants.bound || !degree_cap_ok => {
            run.outcome = SparseOutcome::Pair(p);
            Ok(run)
        }
        _ => Err(Error::HypothesisViolated(format!(
            "no certified outcome (degree cap {cap:.3}, max degree {})",
            host.max_degree()
        ))),
    }
}

fn star_case(host: &OrderedBigraph, pattern: &TreePattern, n: usize) -> Option<SparseOutcome> {
    let w = pattern.center();
    let side = pattern.side(w);
    let d = pattern.t() - 1;
    let (len, other_len) = match side {
        Side::One => (host.n1(), host.n2()),
        Side::Two => (host.n2(), host.n1()),
    };
    let nb = |v: usize| match side {
        Side::One => host.row(v),
        Side::Two => host.col(v),
    };
    for v in 0..len {
        let set = BitSet::from_words(nb(v).to_vec(), other_len);
        if set.count() >= d {
            let leaves: Vec<usize> = set.iter().take(d).collect();
            return Some(SparseOutcome::Found(match side {
                Side::One => Embedding { row_map: vec![v], col_map: leaves },
                Side::Two => Embedding { row_map: leaves, col_map: vec![v] },
            }));
        }
    }
    let z: Vec<usize> = (0..n / d).collect();
    if z.is_empty() {
        return None;
    }
    let mut free = BitSet::full(other_len);
    for &v in &z {
        free.subtract(nb(v));
    }
    if free.is_empty() {
        return None;
    }
    let pair = match side {
        Side::One => VertexSetPair::new(z, free.to_vec()),
        Side::Two => VertexSetPair::new(free.to_vec(), z),
    };
    Some(SparseOutcome::Pair(pair))
}

/// One sample of the state `(x, A1, A2)`: both sets sorted.
#[derive(Debug, Clone)]
pub struct LevelState {
    pub x: f64,
    pub a: [Vec<usize>; 2],
}

impl LevelState {
    /// Violations of the state's defining inequalities.
    pub fn violations(&self, host: &OrderedBigraph, c: &MainConstants) -> Vec<String> {
        let mut out = Vec::new();
        let ln_size = (c.n as f64).ln() - self.x * c.ln_t();
        for (k, a) in self.a.iter().enumerate() {
            if !ln_ge(ln_usize(a.len()), ln_size) {
                out.push(format!("|A{}| = {} below n t^-x", k + 1, a.len()));
            }
        }
        let lim = floor_real(c.eps * c.n as f64 * (-c.k * self.x * c.ln_t()).exp());
        let m2 = BitSet::from_indices(host.n2(), self.a[1].iter().copied());
        let m1 = BitSet::from_indices(host.n1(), self.a[0].iter().copied());
        if self.a[0].iter().any(|&i| m2.and_count(host.row(i)) > lim)
            || self.a[1].iter().any(|&j| m1.and_count(host.col(j)) > lim)
        {
            out.push(format!("a degree exceeds d = {lim}"));
        }
        out
    }
}

enum Step {
    Done(SparseOutcome, Route),
    Augment(LevelState),
    Stuck,
}

enum Level {
    Done(SparseOutcome, Route),
    Augment(LevelState),
    Restart,
    Stuck,
}

const MAX_OUTER: usize = 10_000;
const MAX_RESTARTS: usize = 100_000;
const WITNESS_ASSIGNMENTS: usize = 64;

struct Engine<'a> {
    host: &'a OrderedBigraph,
    pat: &'a TreePattern,
    c: &'a MainConstants,
    opts: &'a SparseOptions,
    rng: ChaCha8Rng,
    augmentations: usize,
}

/// Per-edge sets for the edge from the parent of `v` to `v`.
#[derive(Clone)]
struct EdgeSets {
    x: BitSet,
    y: BitSet,
}

fn side_ix(s: Side) -> usize {
    match s {
        Side::One => 0,
        Side::Two => 1,
    }
}

impl<'a> Engine<'a> {
    fn new(host: &'a OrderedBigraph, pat: &'a TreePattern, c: &'a MainConstants, opts: &'a SparseOptions) -> Self {
        Engine {
            host,
            pat,
            c,
            opts,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            augmentations: 0,
        }
    }

    fn len(&self, s: Side) -> usize {
        match s {
            Side::One => self.host.n1(),
            Side::Two => self.host.n2(),
        }
    }

    /// Neighbourhood (on the other side) of host vertex `v` on side `s`.
    fn nbrs(&self, s: Side, v: usize) -> &'a [u64] {
        match s {
            Side::One => self.host.row(v),
            Side::Two => self.host.col(v),
        }
    }

    fn run(&mut self) -> Option<(SparseOutcome, Route)> {
        let mut st = LevelState {
            x: 0.0,
            a: [(0..self.host.n1()).collect(), (0..self.host.n2()).collect()],
        };
        for _ in 0..MAX_OUTER {
            match self.one_state(&st) {
                Step::Done(o, r) => return Some((o, r)),
                Step::Augment(next) => {
                    self.augmentations += 1;
                    st = next;
                }
                Step::Stuck => return None,
            }
        }
        None
    }

    fn ln_p(&self, ln_d: f64, s: usize) -> f64 {
        if s == self.c.r {
            0.0
        } else {
            ln_d - self.c.k * self.c.k_sub(s) * self.c.ln_t()
        }
    }

    /// Validates a candidate state with sets on sides `(sa, other)`.
    fn try_state(&self, x_new: f64, sa: Side, set_a: Vec<usize>, set_b: Vec<usize>) -> Option<LevelState> {
        let c = self.c;
        if x_new > c.k.powi(c.r as i32 - 1) + 1e-9 || set_a.is_empty() || set_b.is_empty() {
            return None;
        }
        let mut a = [Vec::new(), Vec::new()];
        a[side_ix(sa)] = set_a;
        a[side_ix(sa.other())] = set_b;
        for v in a.iter_mut() {
            v.sort_unstable();
        }
        let st = LevelState { x: x_new, a };
        if st.violations(self.host, c).is_empty() {
            Some(st)
        } else {
            None
        }
    }

    fn one_state(&mut self, st: &LevelState) -> Step {
        let c = self.c;
        let host = self.host;
        let ln_t = c.ln_t();
        let ln_n = (c.n as f64).ln();
        let ln_d = c.eps.ln() + ln_n - c.k * st.x * ln_t;

        if host.is_anticomplete(&st.a[0], &st.a[1]) {
            return Step::Done(
                SparseOutcome::Pair(VertexSetPair::new(st.a[0].clone(), st.a[1].clone())),
                Route::AnticompleteState,
            );
        }

        if !self.opts.ignore_x_limit && st.x >= c.x_limit() - 1e-9 {
            let x: Vec<usize> = st.a[0].iter().copied().take(c.bound).collect();
            let mut free = BitSet::from_indices(host.n2(), st.a[1].iter().copied());
            for &i in &x {
                free.subtract(host.row(i));
            }
            if x.len() >= c.bound && free.count() >= c.bound {
                return Step::Done(SparseOutcome::Pair(VertexSetPair::new(x, free.to_vec())), Route::ClaimOne);
            }
            return Step::Stuck;
        }

        let b = ceil_exp(ln_n - (st.x + 1.0) * ln_t);
        let pat = self.pat;
        if st.a[0].len() < pat.h1().saturating_mul(b) || st.a[1].len() < pat.h2().saturating_mul(b) {
            return Step::Stuck;
        }
        let blocks: Vec<Vec<usize>> = (0..pat.t())
            .map(|v| {
                let k = pat.index(v);
                st.a[side_ix(pat.side(v))][k * b..(k + 1) * b].to_vec()
            })
            .collect();
        let block_masks: Vec<BitSet> = (0..pat.t())
            .map(|v| BitSet::from_indices(self.len(pat.side(v)), blocks[v].iter().copied()))
            .collect();

        let root = pat.center();
        let levels = pat.levels(root);
        let r = c.r;
        let cut: Vec<usize> = (0..=r)
            .map(|s| if s == 0 { 0 } else { ceil_real(self.ln_p(ln_d, s).exp()) })
            .collect();
        let ln_f: Vec<f64> = (0..=r)
            .map(|s| if s >= 2 { (c.k * c.k_sub(s - 1) + 2.0) * ln_t } else { 0.0 })
            .collect();
        let f_cap = |s: usize, xs: usize| -> usize {
            if xs == 0 {
                0
            } else {
                floor_real((ln_f[s] + ln_usize(xs)).exp())
            }
        };

        // grow X_uv, Y_uv for every edge below level 1
        let mut edges: Vec<Option<EdgeSets>> = vec![None; pat.t()];
        for s in 2..=r {
            for &v in &levels[s] {
                let u = pat.w_parent(root, v).expect("non-root vertex");
                edges[v] = Some(self.grow_edge(u, v, &blocks, &block_masks, cut[s], |xs| f_cap(s, xs)));
            }
        }

        for _ in 0..MAX_RESTARTS {
            // claim (2): a large X_uv is a witness for a larger x, or a pair
            for s in 2..=r {
                for &v in &levels[s] {
                    let u = pat.w_parent(root, v).unwrap();
                    let e = edges[v].as_ref().unwrap();
                    let xs = e.x.to_vec();
                    let mut rest = block_masks[v].clone();
                    rest.subtract(e.y.words());
                    if s == r {
                        if xs.len() >= c.bound && rest.count() >= c.bound {
                            let anti = xs.iter().all(|&x| rest.is_disjoint(self.nbrs(pat.side(u), x)));
                            if anti {
                                let pair = match pat.side(u) {
                                    Side::One => VertexSetPair::new(xs, rest.to_vec()),
                                    Side::Two => VertexSetPair::new(rest.to_vec(), xs),
                                };
                                return Step::Done(SparseOutcome::Pair(pair), Route::LastLevel);
                            }
                        }
                    } else {
                        let ln_need = ln_n - (st.x + c.k_sub(s)) * ln_t;
                        if !xs.is_empty() && ln_ge(ln_usize(xs.len()), ln_need) {
                            let xm = BitSet::from_indices(self.len(pat.side(u)), xs.iter().copied());
                            let others = lowest_by(&rest.to_vec(), xs.len(), |z| {
                                xm.and_count(self.nbrs(pat.side(v), z))
                            });
                            if let Some(next) = self.try_state(st.x + c.k_sub(s), pat.side(u), xs, others) {
                                return Step::Augment(next);
                            }
                        }
                    }
                }
            }

            match self.levels(st, &levels, &blocks, &block_masks, &mut edges, &cut, &f_cap) {
                Level::Done(o, route) => return Step::Done(o, route),
                Level::Augment(next) => return Step::Augment(next),
                Level::Restart => {
                    self.augmentations += 1;
                    continue;
                }
                Level::Stuck => return Step::Stuck,
            }
        }
        Step::Stuck
    }

    fn grow_edge(
        &self,
        u: usize,
        v: usize,
        blocks: &[Vec<usize>],
        masks: &[BitSet],
        cut: usize,
        f_cap: impl Fn(usize) -> usize,
    ) -> EdgeSets {
        let pat = self.pat;
        let (su, sv) = (pat.side(u), pat.side(v));
        let mut x = BitSet::new(self.len(su));
        let mut y = BitSet::new(self.len(sv));
        let half = blocks[v].len() / 2;
        loop {
            let mut rest = masks[v].clone();
            rest.subtract(y.words());
            let fresh: Vec<usize> = blocks[u]
                .iter()
                .copied()
                .filter(|&a| !x.contains(a) && rest.and_count(self.nbrs(su, a)) < cut)
                .collect();
            if fresh.is_empty() {
                break;
            }
            for a in fresh {
                x.insert(a);
            }
            let room = f_cap(x.count()).min(half);
            if y.count() >= room {
                break;
            }
            let mut pool = masks[u].clone();
            pool.subtract(x.words());
            let mut cands: Vec<(usize, usize)> = blocks[v]
                .iter()
                .copied()
                .filter(|&z| !y.contains(z))
                .map(|z| (usize::MAX - pool.and_count(self.nbrs(sv, z)), z))
                .collect();
            cands.sort_unstable();
            let need = room - y.count();
            for &(_, z) in cands.iter().take(need) {
                y.insert(z);
            }
        }
        // keep exactly ceil(|Y|/f) members of X
        let ycount = y.count();
        let mut keep = 0;
        while f_cap(keep) < ycount {
            keep += 1;
        }
        let trimmed = BitSet::from_indices(x.len(), x.iter().take(keep));
        EdgeSets { x: trimmed, y }
    }

    #[allow(clippy::too_many_arguments)]
    fn levels(
        &mut self,
        st: &LevelState,
        levels: &[Vec<usize>],
        blocks: &[Vec<usize>],
        masks: &[BitSet],
        edges: &mut [Option<EdgeSets>],
        cut: &[usize],
        f_cap: &dyn Fn(usize, usize) -> usize,
    ) -> Level {
        let pat = self.pat;
        let c = self.c;
        let root = pat.center();
        let r = c.r;
        let t = pat.t();

        // X_u: union of X_uv over children v
        let mut x_of: Vec<BitSet> = (0..t).map(|v| BitSet::new(self.len(pat.side(v)))).collect();
        for v in 0..t {
            if let Some(e) = &edges[v] {
                let u = pat.w_parent(root, v).unwrap();
                x_of[u].union_with(e.x.words());
            }
        }

        let mut y: Vec<Option<usize>> = vec![None; t];
        let mut p: Vec<Vec<usize>> = vec![Vec::new(); t];

        // level 1: pin the root
        let mut avail: Vec<BitSet> = levels[1]
            .iter()
            .map(|&v| {
                let mut m = masks[v].clone();
                m.subtract(x_of[v].words());
                m
            })
            .collect();
        let sroot = pat.side(root);
        let pinned = blocks[root].iter().copied().find(|&a| {
            avail
                .iter()
                .all(|m| m.and_count(self.nbrs(sroot, a)) >= cut[1])
        });
        match pinned {
            Some(a) => {
                y[root] = Some(a);
                for (k, &v) in levels[1].iter().enumerate() {
                    avail[k].intersect_with(self.nbrs(sroot, a));
                    p[v] = avail[k].to_vec();
                }
            }
            None => {
                let ln_n = (c.n as f64).ln();
                let want = ceil_exp(ln_n - (st.x + 2.0) * c.ln_t());
                let (k, bad) = levels[1]
                    .iter()
                    .enumerate()
                    .map(|(k, _)| {
                        let bad: Vec<usize> = blocks[root]
                            .iter()
                            .copied()
                            .filter(|&a| avail[k].and_count(self.nbrs(sroot, a)) < cut[1])
                            .collect();
                        (k, bad)
                    })
                    .max_by_key(|(k, bad)| (bad.len(), std::cmp::Reverse(*k)))
                    .unwrap();
                let xs: Vec<usize> = bad.into_iter().take(want).collect();
                let v = levels[1][k];
                let xm = BitSet::from_indices(self.len(sroot), xs.iter().copied());
                let others = lowest_by(&avail[k].to_vec(), xs.len(), |z| {
                    xm.and_count(self.nbrs(pat.side(v), z))
                });
                return match self.try_state(st.x + 4.0, sroot, xs, others) {
                    Some(next) => Level::Augment(next),
                    None => Level::Stuck,
                };
            }
        }

        for s in 2..=r {
            let us = &levels[s - 1];
            let vs = &levels[s];
            let sigma = pat.side(vs[0]);
            let mut cset = BitSet::new(self.len(sigma));
            for w in 0..t {
                if pat.dist(root, w) + 2 <= s {
                    let yw = y[w].unwrap();
                    if pat.side(w) == sigma {
                        cset.insert(yw);
                    } else {
                        cset.union_with(self.nbrs(pat.side(w), yw));
                    }
                }
            }
            let avail: Vec<BitSet> = vs
                .iter()
                .map(|&v| {
                    let mut m = masks[v].clone();
                    m.subtract(cset.words());
                    m.subtract(x_of[v].words());
                    m
                })
                .collect();
            let parent_pos: Vec<usize> = vs
                .iter()
                .map(|&v| {
                    let u = pat.w_parent(root, v).unwrap();
                    us.iter().position(|&w| w == u).unwrap()
                })
                .collect();
            let su = pat.side(us[0]);
            let sizes: Vec<usize> = us.iter().map(|&u| p[u].len()).collect();
            if sizes.contains(&0) {
                return Level::Stuck;
            }

            let mut rng = ChaCha8Rng::seed_from_u64(self.rng.gen());
            // qualifying vertices of B_v for each child
            let eval = |choice: &[usize]| -> Vec<BitSet> {
                vs.iter()
                    .enumerate()
                    .map(|(k, _)| {
                        let pu = parent_pos[k];
                        let mut m = avail[k].clone();
                        m.intersect_with(self.nbrs(su, p[us[pu]][choice[pu]]));
                        for (o, &uo) in us.iter().enumerate() {
                            if o != pu {
                                m.subtract(self.nbrs(su, p[uo][choice[o]]));
                            }
                        }
                        m
                    })
                    .collect()
            };
            let need = cut[s];
            let is_valid = |q: &[BitSet]| q.iter().all(|m| m.count() >= need);

            let product = sizes.iter().fold(1u64, |acc, &k| acc.saturating_mul(k as u64));
            let mut tried: Vec<Vec<usize>> = Vec::new();
            let mut found: Option<(Vec<usize>, Vec<BitSet>)> = None;
            if product <= self.opts.transversal_budget {
                let mut choice = vec![0usize; us.len()];
                'odo: loop {
                    let q = eval(&choice);
                    if is_valid(&q) {
                        found = Some((choice.clone(), q));
                        break;
                    }
                    if tried.len() < WITNESS_ASSIGNMENTS {
                        tried.push(choice.clone());
                    }
                    let mut i = us.len();
                    loop {
                        if i == 0 {
                            break 'odo;
                        }
                        i -= 1;
                        choice[i] += 1;
                        if choice[i] < sizes[i] {
                            break;
                        }
                        choice[i] = 0;
                    }
                }
            } else {
                for a in 0..self.opts.samples {
                    let choice: Vec<usize> = if a == 0 {
                        vec![0; us.len()]
                    } else {
                        sizes.iter().map(|&k| rng.gen_range(0..k)).collect()
                    };
                    let q = eval(&choice);
                    if is_valid(&q) {
                        found = Some((choice, q));
                        break;
                    }
                    if tried.len() < WITNESS_ASSIGNMENTS {
                        tried.push(choice);
                    }
                }
            }

            match found {
                Some((choice, q)) => {
                    for (i, &u) in us.iter().enumerate() {
                        y[u] = Some(p[u][choice[i]]);
                    }
                    for (k, &v) in vs.iter().enumerate() {
                        p[v] = q[k].to_vec();
                    }
                }
                None => {
                    // claim (4): a problem edge yields a larger Y_uv
                    for choice in &tried {
                        for (k, &v) in vs.iter().enumerate() {
                            let pu = parent_pos[k];
                            let u = us[pu];
                            let mut others = BitSet::new(self.len(sigma));
                            for (o, &uo) in us.iter().enumerate() {
                                if o != pu {
                                    others.union_with(self.nbrs(su, p[uo][choice[o]]));
                                }
                            }
                            let mut free = avail[k].clone();
                            free.subtract(others.words());
                            let xs: Vec<usize> = p[u]
                                .iter()
                                .copied()
                                .filter(|&a| free.and_count(self.nbrs(su, a)) < need)
                                .collect();
                            if xs.is_empty() {
                                continue;
                            }
                            let e = edges[v].as_ref().unwrap();
                            let mut extra = cset.clone();
                            extra.union_with(others.words());
                            extra.union_with(x_of[v].words());
                            extra.intersect_with(masks[v].words());
                            extra.subtract(e.y.words());
                            if extra.is_empty() {
                                let mut rest = masks[v].clone();
                                rest.subtract(e.y.words());
                                match rest.iter().next() {
                                    Some(z) => extra.insert(z),
                                    None => continue,
                                }
                            }
                            let mut nx = e.x.clone();
                            for &a in &xs {
                                nx.insert(a);
                            }
                            let mut ny = e.y.clone();
                            ny.union_with(extra.words());
                            let mut rest = masks[v].clone();
                            rest.subtract(ny.words());
                            let ok = ny.count() <= f_cap(s, nx.count())
                                && ny.count() <= blocks[v].len() / 2
                                && nx.iter().all(|a| rest.and_count(self.nbrs(su, a)) < cut[s]);
                            if ok {
                                edges[v] = Some(EdgeSets { x: nx, y: ny });
                                return Level::Restart;
                            }
                        }
                    }
                    return Level::Stuck;
                }
            }
        }

        for &v in &levels[r] {
            y[v] = p[v].first().copied();
        }
        if y.iter().any(|v| v.is_none()) {
            return Level::Stuck;
        }
        let row_map: Vec<usize> = (0..pat.h1()).map(|i| y[pat.id(Side::One, i)].unwrap()).collect();
        let col_map: Vec<usize> = (0..pat.h2()).map(|j| y[pat.id(Side::Two, j)].unwrap()).collect();
        let e = Embedding { row_map, col_map };
        if verify_embedding(self.host, pat.graph(), &e) {
            Level::Done(SparseOutcome::Found(e), Route::Levels)
        } else {
            Level::Stuck
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_examples() {
        let c = compute_constants(2, 1, 32).unwrap();
        assert_eq!(c.k, 5.0);
        assert_eq!(c.bound, 1);
        let c = compute_constants(3, 1, 729).unwrap();
        assert_eq!(c.k, 6.0);
        assert_eq!(c.bound, 3);
        let c = compute_constants(2, 2, 1 << 25).unwrap();
        assert_eq!(c.k, 5.0);
        assert_eq!(c.k_s, vec![4.0]);
        assert_eq!(c.bound, 1);
        assert!(compute_constants(1, 1, 10).is_err());
    }

    #[test]
    fn k_s_increasing() {
        let c = compute_constants(4, 4, 1 << 20).unwrap();
        assert_eq!(c.k_s[0], 4.0);
        assert!(c.k_s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn star_on_matching() {
        let host = OrderedBigraph::from_fn(9, 9, |i, j| i == j);
        let star = TreePattern::from_rows_str("11").unwrap();
        let run = embed_or_pair_sparse(&host, &star, &SparseOptions::default()).unwrap();
        assert_eq!(run.route, Route::Star);
        match run.outcome {
            SparseOutcome::Pair(p) => {
                assert_eq!(p.z1, vec![0, 1, 2, 3]);
                assert_eq!(p.z2, vec![4, 5, 6, 7, 8]);
                assert!(host.is_anticomplete(&p.z1, &p.z2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_found_on_dense_row() {
        let host = OrderedBigraph::from_rows_str("11;00").unwrap();
        let star = TreePattern::from_rows_str("11").unwrap();
        let run = embed_or_pair_sparse(&host, &star, &SparseOptions::default()).unwrap();
        assert_eq!(
            run.outcome,
            SparseOutcome::Found(Embedding { row_map: vec![0], col_map: vec![0, 1] })
        );
    }

    #[test]
    fn column_centred_path_on_empty_host() {
        let host = OrderedBigraph::new(9, 9);
        let path = TreePattern::from_rows_str("1;1").unwrap();
        let run = embed_or_pair_sparse(&host, &path, &SparseOptions::default()).unwrap();
        match run.outcome {
            SparseOutcome::Pair(p) => {
                assert!(p.min_side() >= run.constants.bound);
                assert!(host.is_anticomplete(&p.z1, &p.z2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forced_levels_stay_sound() {
        let path = TreePattern::from_rows_str("110;011").unwrap();
        let opts = SparseOptions { force_levels: true, ..Default::default() };
        for seed in 0..20u64 {
            let host = OrderedBigraph::from_fn(40, 40, |i, j| (i * 7 + j * 13 + seed as usize * 5) % 23 == 0);
            let run = embed_or_pair_sparse(&host, &path, &opts).unwrap();
            check_sound(&host, &path, &run.outcome).unwrap();
        }
    }

    #[test]
    fn level_construction_embeds() {
        let path = TreePattern::from_rows_str("110;011").unwrap();
        let opts = SparseOptions { force_levels: true, ignore_x_limit: true, ..Default::default() };
        let mut routes = Vec::new();
        for seed in 0..6usize {
            let host = OrderedBigraph::from_fn(200, 200, |i, j| (i * 7 + j * 13 + seed * 5) % 3 == 0 || i == j);
            let run = embed_or_pair_sparse(&host, &path, &opts).unwrap();
            check_sound(&host, &path, &run.outcome).unwrap();
            routes.push(run.route);
        }
        assert!(routes.contains(&Route::Levels));
    }
}

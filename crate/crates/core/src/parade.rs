//! Parades: indexed families of disjoint blocks, negative indices on side 1
//! and positive indices on side 2, with the contraction and band machinery.

use crate::bigraph::View;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::numeric::{ceil_real, floor_real, SNAP};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Blocks keyed by nonzero signed indices, kept sorted by index. Vertices
/// refer to the sides of whatever [`View`] the parade is used with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parade {
    index: Vec<i64>,
    blocks: Vec<Vec<usize>>,
}

impl Parade {
    pub fn new(view: &View, mut entries: Vec<(i64, Vec<usize>)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        let mut used = [BitSet::new(view.n1()), BitSet::new(view.n2())];
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::PreconditionViolated(format!("index {} repeated", w[0].0)));
            }
        }
        for (i, b) in entries.iter_mut() {
            if *i == 0 {
                return Err(Error::PreconditionViolated("index 0 is not allowed".into()));
            }
            if b.is_empty() {
                return Err(Error::PreconditionViolated(format!("block {i} is empty")));
            }
            b.sort_unstable();
            b.dedup();
            let (side, len) = if *i < 0 { (0, view.n1()) } else { (1, view.n2()) };
            for &v in b.iter() {
                if v >= len {
                    return Err(Error::OutOfRange { index: v, len });
                }
                if used[side].contains(v) {
                    return Err(Error::PreconditionViolated(format!("vertex {v} in two blocks")));
                }
                used[side].insert(v);
            }
        }
        let (index, blocks) = entries.into_iter().unzip();
        Ok(Parade { index, blocks })
    }

    pub fn indices(&self) -> &[i64] {
        &self.index
    }

    pub fn neg(&self) -> Vec<i64> {
        self.index.iter().copied().filter(|&i| i < 0).collect()
    }

    pub fn pos(&self) -> Vec<i64> {
        self.index.iter().copied().filter(|&i| i > 0).collect()
    }

    pub fn block(&self, i: i64) -> &[usize] {
        let k = self.index.binary_search(&i).expect("index in parade");
        &self.blocks[k]
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.index.iter().copied().zip(self.blocks.iter().map(|b| b.as_slice()))
    }

    pub fn length(&self) -> (usize, usize) {
        (self.neg().len(), self.pos().len())
    }

    /// Smallest block per side, or the side size when a side has no blocks.
    pub fn width(&self, view: &View) -> (usize, usize) {
        let min = |neg: bool, dflt: usize| {
            self.entries()
                .filter(|(i, _)| (*i < 0) == neg)
                .map(|(_, b)| b.len())
                .min()
                .unwrap_or(dflt)
        };
        (min(true, view.n1()), min(false, view.n2()))
    }

    pub fn sub(&self, keep: &[i64]) -> Parade {
        let (index, blocks) = self
            .entries()
            .filter(|(i, _)| keep.contains(i))
            .map(|(i, b)| (i, b.to_vec()))
            .unzip();
        Parade { index, blocks }
    }

    /// The same blocks with every index negated, for the transposed view.
    pub fn negate(&self) -> Parade {
        let mut e: Vec<(i64, Vec<usize>)> = self.entries().map(|(i, b)| (-i, b.to_vec())).collect();
        e.sort_by_key(|x| x.0);
        let (index, blocks) = e.into_iter().unzip();
        Parade { index, blocks }
    }

    /// Replaces block `i` by a subset of it.
    pub fn contract(&mut self, i: i64, subset: Vec<usize>) {
        let k = self.index.binary_search(&i).expect("index in parade");
        debug_assert!(subset.iter().all(|v| self.blocks[k].binary_search(v).is_ok()));
        debug_assert!(!subset.is_empty());
        self.blocks[k] = subset;
    }

    pub fn is_contraction_of(&self, other: &Parade) -> bool {
        self.index == other.index
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| !a.is_empty() && a.iter().all(|v| b.binary_search(v).is_ok()))
    }

    pub fn mask(&self, view: &View, i: i64) -> BitSet {
        let len = if i < 0 { view.n1() } else { view.n2() };
        BitSet::from_indices(len, self.block(i).iter().copied())
    }

    pub fn max_degree_fn(&self, view: &View) -> MaxDegreeFunction {
        let neg = self.neg();
        let pos = self.pos();
        let masks_n: Vec<BitSet> = neg.iter().map(|&h| self.mask(view, h)).collect();
        let masks_p: Vec<BitSet> = pos.iter().map(|&j| self.mask(view, j)).collect();
        let hj = neg
            .iter()
            .map(|&h| masks_p.iter().map(|m| max_deg(self.block(h), |v| m.and_count(view.nbrs1(v)))).collect())
            .collect();
        let jh = neg
            .iter()
            .enumerate()
            .map(|(a, _)| {
                pos.iter()
                    .map(|&j| max_deg(self.block(j), |v| masks_n[a].and_count(view.nbrs2(v))))
                    .collect()
            })
            .collect();
        MaxDegreeFunction { neg, pos, hj, jh }
    }
}

fn max_deg(block: &[usize], deg: impl Fn(usize) -> usize) -> usize {
    block.iter().map(|&v| deg(v)).max().unwrap_or(0)
}

/// `d_{i,j}` for indices of opposite sign; zero otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxDegreeFunction {
    neg: Vec<i64>,
    pos: Vec<i64>,
    hj: Vec<Vec<usize>>,
    jh: Vec<Vec<usize>>,
}

impl MaxDegreeFunction {
    pub fn get(&self, i: i64, j: i64) -> usize {
        let find = |v: &[i64], x: i64| v.iter().position(|&y| y == x);
        match (i < 0, j < 0) {
            (true, false) => match (find(&self.neg, i), find(&self.pos, j)) {
                (Some(a), Some(b)) => self.hj[a][b],
                _ => 0,
            },
            (false, true) => match (find(&self.neg, j), find(&self.pos, i)) {
                (Some(a), Some(b)) => self.jh[a][b],
                _ => 0,
            },
            _ => 0,
        }
    }

    /// `ln` of the max-degree product, `-inf` when some factor is zero.
    pub fn ln_product(&self) -> f64 {
        self.jh
            .iter()
            .flatten()
            .map(|&d| (d as f64).ln())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnticompleteWitness {
    pub h: i64,
    pub j: i64,
    /// Subset of block `h` (side 1).
    pub x: Vec<usize>,
    /// Subset of block `j` (side 2).
    pub y: Vec<usize>,
}

impl AnticompleteWitness {
    pub fn holds(&self, view: &View) -> bool {
        let ym = BitSet::from_indices(view.n2(), self.y.iter().copied());
        !self.x.is_empty() && !self.y.is_empty() && self.x.iter().all(|&u| ym.is_disjoint(view.nbrs1(u)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShrinkOutcome {
    Anticomplete(AnticompleteWitness),
    /// A contraction and the number of contraction steps `s`; every block
    /// keeps at least a `mu^s` fraction.
    Contraction { parade: Parade, steps: usize },
}

/// Blocks up to this size are searched and checked exhaustively.
pub const EXHAUSTIVE_BLOCK: usize = 14;
/// Random subsets drawn by the sampled checks.
pub const CHECK_SAMPLES: usize = 10_000;

/// `ceil(mu * size)`, at least one.
pub fn fraction(mu: f64, size: usize) -> usize {
    ceil_real(mu * size as f64).max(1)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns false.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for t in i + 1..k {
                    c[t] = c[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Degrees of the side-2 vertices of `yb` into the side-1 set `x`, and the
/// `ysize` smallest of them as `(max degree, Y)`.
fn lightest(view: &View, x: &BitSet, yb: &[usize], ysize: usize) -> (usize, Vec<usize>) {
    let mut d: Vec<(usize, usize)> = yb.iter().map(|&v| (x.and_count(view.nbrs2(v)), v)).collect();
    d.sort_unstable();
    let mut y: Vec<usize> = d[..ysize].iter().map(|p| p.1).collect();
    y.sort_unstable();
    (d[ysize - 1].0, y)
}

/// Looks for `X ⊆ xb`, `Y ⊆ yb` of the given sizes whose max-degree from `Y`
/// to `X` is at most `allowed`.
fn low_pair(
    view: &View,
    xb: &[usize],
    yb: &[usize],
    xsize: usize,
    ysize: usize,
    allowed: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n1 = view.n1();
    if xb.len() <= EXHAUSTIVE_BLOCK {
        let mut out = None;
        for_each_combination(xb.len(), xsize, |c| {
            let x = BitSet::from_indices(n1, c.iter().map(|&a| xb[a]));
            let (m, y) = lightest(view, &x, yb, ysize);
            if m <= allowed {
                out = Some((x.to_vec(), y));
                false
            } else {
                true
            }
        });
        return out;
    }
    // alternate: X lightest towards the current Y, Y lightest towards X
    let ymask0 = BitSet::from_indices(view.n2(), yb.iter().copied());
    let mut ym = ymask0;
    for _ in 0..4 {
        let mut dx: Vec<(usize, usize)> = xb.iter().map(|&u| (ym.and_count(view.nbrs1(u)), u)).collect();
        dx.sort_unstable();
        let x = BitSet::from_indices(n1, dx[..xsize].iter().map(|p| p.1));
        let (m, y) = lightest(view, &x, yb, ysize);
        if m <= allowed {
            return Some((x.to_vec(), y));
        }
        ym = BitSet::from_indices(view.n2(), y.iter().copied());
    }
    for _ in 0..64 {
        let x = BitSet::from_indices(n1, sample(rng, xb.len(), xsize).into_iter().map(|a| xb[a]));
        let (m, y) = lightest(view, &x, yb, ysize);
        if m <= allowed {
            return Some((x.to_vec(), y));
        }
    }
    None
}

/// Contraction towards a `(phi, mu)`-shrink-resistant parade, or an
/// anticomplete pair of large sub-blocks.
pub fn shrink_resist(view: &View, p: &Parade, phi: f64, mu: f64, seed: u64) -> Result<ShrinkOutcome> {
    if !(phi > 0.0 && mu > 0.0 && mu <= 1.0) {
        return Err(Error::PreconditionViolated(format!("need phi > 0 and 0 < mu <= 1; got {phi}, {mu}")));
    }
    let ln_n = (view.n1() as f64).ln();
    let scale = (-phi * ln_n).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = p.clone();
    let mut steps = 0usize;
    let mut d = cur.max_degree_fn(view);
    loop {
        for h in cur.neg() {
            for j in cur.pos() {
                if d.get(j, h) == 0 {
                    return Ok(ShrinkOutcome::Anticomplete(AnticompleteWitness {
                        h,
                        j,
                        x: cur.block(h).to_vec(),
                        y: cur.block(j).to_vec(),
                    }));
                }
            }
        }
        let mut hit = None;
        'search: for h in cur.neg() {
            for j in cur.pos() {
                let allowed = floor_real(d.get(j, h) as f64 * scale);
                let xsize = fraction(mu, cur.block(h).len());
                let ysize = fraction(mu, cur.block(j).len());
                if let Some(pair) = low_pair(view, cur.block(h), cur.block(j), xsize, ysize, allowed, &mut rng) {
                    hit = Some((h, j, pair));
                    break 'search;
                }
            }
        }
        let Some((h, j, (x, y))) = hit else {
            return Ok(ShrinkOutcome::Contraction { parade: cur, steps });
        };
        let before = d.ln_product();
        cur.contract(h, x);
        cur.contract(j, y);
        steps += 1;
        d = cur.max_degree_fn(view);
        let after = d.ln_product();
        assert!(
            after <= before - phi * ln_n + SNAP,
            "contraction must cut the max-degree product by |V1|^-phi"
        );
    }
}

/// How a property was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    Exact,
    Sampled,
}

/// Checks that every `X ⊆ B_h`, `Y ⊆ B_j` with `|X| >= mu|B_h|`,
/// `|Y| >= mu|B_j|` has max-degree from `Y` to `X` above `limit(h, j)`.
/// Only minimum-size `X` need testing, and for each `X` the worst `Y` is the
/// lightest one.
fn check_lower(
    view: &View,
    p: &Parade,
    mu: f64,
    seed: u64,
    limit: impl Fn(i64, i64) -> f64,
) -> std::result::Result<CheckKind, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kind = CheckKind::Exact;
    for h in p.neg() {
        for j in p.pos() {
            let (xb, yb) = (p.block(h), p.block(j));
            let xsize = fraction(mu, xb.len());
            let ysize = fraction(mu, yb.len());
            let lim = limit(h, j);
            let mut bad = None;
            let mut test = |c: &mut dyn Iterator<Item = usize>| {
                let x = BitSet::from_indices(view.n1(), c.map(|a| xb[a]));
                let (m, y) = lightest(view, &x, yb, ysize);
                if m as f64 <= lim + SNAP {
                    bad = Some((x.to_vec(), y, m));
                    false
                } else {
                    true
                }
            };
            if xb.len() <= EXHAUSTIVE_BLOCK {
                for_each_combination(xb.len(), xsize, |c| test(&mut c.iter().copied()));
            } else {
                kind = CheckKind::Sampled;
                for _ in 0..CHECK_SAMPLES {
                    if !test(&mut sample(&mut rng, xb.len(), xsize).into_iter()) {
                        break;
                    }
                }
            }
            if let Some((x, y, m)) = bad {
                return Err(format!("blocks ({h}, {j}): X = {x:?}, Y = {y:?} has max-degree {m} <= {lim:.4}"));
            }
        }
    }
    Ok(kind)
}

pub fn check_shrink_resistant(view: &View, p: &Parade, phi: f64, mu: f64, seed: u64) -> std::result::Result<CheckKind, String> {
    let d = p.max_degree_fn(view);
    let scale = (-phi * (view.n1() as f64).ln()).exp();
    check_lower(view, p, mu, seed, |h, j| d.get(j, h) as f64 * scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCertificate {
    pub tau: f64,
    pub phi: f64,
    pub mu: f64,
    /// The certified index set `J`.
    pub index: Vec<i64>,
    /// The common type `s`, when the band came from a type-colouring.
    pub s: Option<u32>,
}

/// Both band conditions on the sub-parade `J`: the upper bound exactly, the
/// lower bound exactly for small blocks and by sampling otherwise.
pub fn check_band(view: &View, p: &Parade, cert: &BandCertificate, seed: u64) -> std::result::Result<CheckKind, String> {
    let sp = p.sub(&cert.index);
    let d = sp.max_degree_fn(view);
    for h in sp.neg() {
        for j in sp.pos() {
            let cap = cert.tau * sp.block(h).len() as f64;
            if d.get(j, h) as f64 > cap + SNAP {
                return Err(format!("max-degree from block {j} to block {h} is {} > {cap:.4}", d.get(j, h)));
            }
        }
    }
    let scale = cert.tau * (-cert.phi * (view.n1() as f64).ln()).exp();
    check_lower(view, &sp, cert.mu, seed, |h, _| scale * sp.block(h).len() as f64)
}

/// Type `s` of a pair: `|V1|^-(s+1)phi < d/|B_h| <= |V1|^-s phi`.
pub fn pair_type(d: usize, block: usize, n1: usize, phi: f64) -> Option<u32> {
    if d == 0 || block == 0 {
        return None;
    }
    let ln_n = (n1 as f64).ln();
    if ln_n <= 0.0 {
        return Some(0);
    }
    let x = ((block as f64) / d as f64).ln() / (phi * ln_n);
    let r = x.round();
    let s = if (x - r).abs() <= SNAP { r } else { x.floor() };
    Some(s.max(0.0) as u32)
}

/// Length that forces a monochromatic `k x k` grid under `colours` colours:
/// `m = colours(k-1)+1` rows, then `(k-1)colours^m + 1` columns. Saturates.
pub fn ramsey_length(k: u64, colours: u64) -> u64 {
    if k <= 1 {
        return k.max(1);
    }
    let m = colours.saturating_mul(k - 1).saturating_add(1);
    let pow = u32::try_from(m).ok().and_then(|m| colours.checked_pow(m)).unwrap_or(u64::MAX);
    m.max((k - 1).saturating_mul(pow).saturating_add(1))
}

pub fn colours(phi: f64) -> u64 {
    (1.0 / phi + 1.0 + SNAP).floor() as u64
}

/// Pigeonhole search for a monochromatic `k x k` grid in an `a x b` colour
/// table: rows are the first `m` rows, columns grouped by colour vector.
pub fn pigeonhole_grid(table: &[Vec<u32>], k: usize, colours: u64) -> Option<(Vec<usize>, Vec<usize>)> {
    let a = table.len();
    let b = table.first().map_or(0, |r| r.len());
    if k == 0 {
        return Some((vec![], vec![]));
    }
    let m = (colours as usize).saturating_mul(k - 1).saturating_add(1);
    if a < m {
        return None;
    }
    let mut groups: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    for col in 0..b {
        let key: Vec<u32> = (0..m).map(|r| table[r][col]).collect();
        let g = match groups.iter().position(|g| g.0 == key) {
            Some(g) => g,
            None => {
                groups.push((key, Vec::new()));
                groups.len() - 1
            }
        };
        groups[g].1.push(col);
        if groups[g].1.len() == k {
            let key = &groups[g].0;
            let mut counts = std::collections::BTreeMap::new();
            for &c in key {
                *counts.entry(c).or_insert(0usize) += 1;
            }
            let colour = *counts.iter().find(|(_, &n)| n >= k)?.0;
            let rows: Vec<usize> = (0..m).filter(|&r| key[r] == colour).take(k).collect();
            return Some((rows, groups[g].1.clone()));
        }
    }
    None
}

/// Least monochromatic `k x k` grid by exhaustive row-subset search.
pub fn exhaustive_grid(table: &[Vec<u32>], k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let a = table.len();
    let b = table.first().map_or(0, |r| r.len());
    if k == 0 {
        return Some((vec![], vec![]));
    }
    let mut out = None;
    for_each_combination(a, k, |rows| {
        let mut seen: Vec<u32> = Vec::new();
        for col in 0..b {
            let c = table[rows[0]][col];
            if seen.contains(&c) {
                continue;
            }
            seen.push(c);
            let cols: Vec<usize> = (0..b).filter(|&x| rows.iter().all(|&r| table[r][x] == c)).take(k).collect();
            if cols.len() == k {
                out = Some((rows.to_vec(), cols));
                return false;
            }
        }
        true
    });
    out
}

/// Sub-parade of `k + k` blocks whose pairs share one type, certified as a
/// `(2 phi, mu)`-band.
pub fn find_band(view: &View, p: &Parade, k: usize, phi: f64, mu: f64) -> Result<BandCertificate> {
    let neg = p.neg();
    let pos = p.pos();
    let d = p.max_degree_fn(view);
    let mut table = vec![vec![0u32; pos.len()]; neg.len()];
    for (a, &h) in neg.iter().enumerate() {
        for (b, &j) in pos.iter().enumerate() {
            table[a][b] = pair_type(d.get(j, h), p.block(h).len(), view.n1(), phi).ok_or_else(|| {
                Error::HypothesisViolated(format!("blocks {h} and {j} are anticomplete"))
            })?;
        }
    }
    let cols = colours(phi);
    let grid = pigeonhole_grid(&table, k, cols).or_else(|| exhaustive_grid(&table, k));
    let Some((rows, cs)) = grid else {
        return Err(Error::ParadeTooShort {
            required: ramsey_length(k as u64, cols),
            have_neg: neg.len(),
            have_pos: pos.len(),
        });
    };
    let s = rows.first().map(|&r| table[r][cs[0]]).unwrap_or(0);
    let mut index: Vec<i64> = rows.iter().map(|&r| neg[r]).chain(cs.iter().map(|&c| pos[c])).collect();
    index.sort_unstable();
    let ln_n = (view.n1() as f64).ln();
    Ok(BandCertificate {
        tau: (-(s as f64) * phi * ln_n).exp(),
        phi: 2.0 * phi,
        mu,
        index,
        s: Some(s),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum HomogOutcome {
    Anticomplete(AnticompleteWitness),
    Band { parade: Parade, cert: BandCertificate, steps: usize },
}

/// Length `K` used for `(k, phi)`: the grid bound at `phi / 2`.
pub fn homog_length(k: usize, phi: f64) -> u64 {
    ramsey_length(k as u64, colours(phi / 2.0))
}

/// `ln beta` with `beta = mu^(1 + 2 K^2 / phi)`.
pub fn homog_ln_beta(big_k: u64, phi: f64, mu: f64) -> f64 {
    let k = big_k as f64;
    (1.0 + 2.0 * k * k / phi) * mu.ln()
}

/// Contraction at `phi / 2` on the first `K` blocks of each side, then a
/// band on `k + k` of them.
pub fn homog(view: &View, p: &Parade, k: usize, phi: f64, mu: f64, seed: u64) -> Result<HomogOutcome> {
    let big_k = homog_length(k, phi);
    let take = usize::try_from(big_k).unwrap_or(usize::MAX);
    let keep: Vec<i64> = p.neg().into_iter().take(take).chain(p.pos().into_iter().take(take)).collect();
    let q = p.sub(&keep);
    match shrink_resist(view, &q, phi / 2.0, mu, seed)? {
        ShrinkOutcome::Anticomplete(w) => Ok(HomogOutcome::Anticomplete(w)),
        ShrinkOutcome::Contraction { parade, steps } => {
            let cert = find_band(view, &parade, k, phi / 2.0, mu).map_err(|e| match e {
                Error::ParadeTooShort { have_neg, have_pos, .. } => Error::ParadeTooShort {
                    required: big_k,
                    have_neg,
                    have_pos,
                },
                e => e,
            })?;
            let parade = parade.sub(&cert.index);
            Ok(HomogOutcome::Band { parade, cert, steps })
        }
    }
}

/// Blocks `-K..-1` on side 1 and `1..K` on side 2: block `i < 0` holds side-1
/// positions `(K+i)p .. (K+i+1)p` with `p = ceil(n1 / 2K)`, block `i > 0` holds
/// side-2 positions `(i-1)q .. iq`.
pub fn build_interval_parade(view: &View, k: usize) -> Result<Parade> {
    if k == 0 || view.n1() <= 2 * k || view.n2() <= 2 * k {
        return Err(Error::PreconditionViolated(format!(
            "interval parade needs both sides larger than 2K = {}; have {} x {}",
            2 * k,
            view.n1(),
            view.n2()
        )));
    }
    let p = view.n1().div_ceil(2 * k);
    let q = view.n2().div_ceil(2 * k);
    let kk = k as i64;
    let mut e = Vec::with_capacity(2 * k);
    for i in -kk..0 {
        let lo = ((kk + i) as usize) * p;
        e.push((i, (lo..lo + p).collect()));
    }
    for i in 1..=kk {
        let lo = (i as usize - 1) * q;
        e.push((i, (lo..lo + q).collect()));
    }
    Parade::new(view, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::OrderedBigraph;

    #[test]
    fn interval_parade_examples() {
        let g = OrderedBigraph::new(8, 8);
        let p = build_interval_parade(&View::new(&g), 2).unwrap();
        assert_eq!(p.indices(), &[-2, -1, 1, 2]);
        assert_eq!(p.block(-2), &[0, 1]);
        assert_eq!(p.block(-1), &[2, 3]);
        assert_eq!(p.block(1), &[0, 1]);
        assert_eq!(p.block(2), &[2, 3]);
        let g = OrderedBigraph::new(10, 10);
        let p = build_interval_parade(&View::new(&g), 2).unwrap();
        assert_eq!(p.block(-2), &[0, 1, 2]);
        assert_eq!(p.block(-1), &[3, 4, 5]);
        let g = OrderedBigraph::new(4, 4);
        let p = build_interval_parade(&View::new(&g), 1).unwrap();
        assert_eq!(p.block(-1), &[0, 1]);
        assert_eq!(p.block(1), &[0, 1]);
        assert!(build_interval_parade(&View::new(&OrderedBigraph::new(4, 4)), 2).is_err());
    }

    #[test]
    fn parade_validation_and_width() {
        let g = OrderedBigraph::new(5, 5);
        let v = View::new(&g);
        assert!(Parade::new(&v, vec![(-1, vec![0]), (-2, vec![0])]).is_err());
        assert!(Parade::new(&v, vec![(0, vec![0])]).is_err());
        assert!(Parade::new(&v, vec![(1, vec![])]).is_err());
        assert!(Parade::new(&v, vec![(1, vec![7])]).is_err());
        let p = Parade::new(&v, vec![(-1, vec![0, 1]), (2, vec![3])]).unwrap();
        assert_eq!(p.width(&v), (2, 1));
        assert_eq!(p.length(), (1, 1));
        let q = Parade::new(&v, vec![(1, vec![3])]).unwrap();
        assert_eq!(q.width(&v), (5, 1));
    }

    #[test]
    fn max_degree_function() {
        let g = OrderedBigraph::from_rows_str("1100;0110;0000;0001").unwrap();
        let v = View::new(&g);
        let p = Parade::new(&v, vec![(-1, vec![0, 1]), (-2, vec![2, 3]), (1, vec![0, 1, 2]), (2, vec![3])]).unwrap();
        let d = p.max_degree_fn(&v);
        assert_eq!(d.get(-1, 1), 2);
        assert_eq!(d.get(1, -1), 2);
        assert_eq!(d.get(-2, 1), 0);
        assert_eq!(d.get(2, -2), 1);
        assert_eq!(d.get(-1, -2), 0);
        assert_eq!(d.ln_product(), f64::NEG_INFINITY);
    }

    #[test]
    fn combinations_enumerate() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }

    #[test]
    fn zero_host_shrinks_to_witness() {
        let g = OrderedBigraph::new(6, 6);
        let v = View::new(&g);
        let p = build_interval_parade(&v, 2).unwrap();
        match shrink_resist(&v, &p, 0.5, 0.5, 0).unwrap() {
            ShrinkOutcome::Anticomplete(w) => {
                assert_eq!(w.x, p.block(w.h));
                assert_eq!(w.y, p.block(w.j));
                assert!(w.holds(&v));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complete_host_is_already_resistant() {
        let g = OrderedBigraph::new(8, 8).bicomplement();
        let v = View::new(&g);
        let p = build_interval_parade(&v, 2).unwrap();
        match shrink_resist(&v, &p, 0.5, 0.5, 0).unwrap() {
            ShrinkOutcome::Contraction { parade, steps } => {
                assert_eq!(parade, p);
                assert_eq!(steps, 0);
                assert_eq!(check_shrink_resistant(&v, &parade, 0.5, 0.5, 0), Ok(CheckKind::Exact));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn types_are_half_open() {
        // n1 = 16, phi = 1/4: |V1|^-phi = 1/2
        assert_eq!(pair_type(8, 8, 16, 0.25), Some(0));
        assert_eq!(pair_type(4, 8, 16, 0.25), Some(1));
        assert_eq!(pair_type(5, 8, 16, 0.25), Some(0));
        assert_eq!(pair_type(3, 8, 16, 0.25), Some(1));
        assert_eq!(pair_type(2, 8, 16, 0.25), Some(2));
        assert_eq!(pair_type(0, 8, 16, 0.25), None);
    }

    #[test]
    fn ramsey_bounds() {
        assert_eq!(ramsey_length(1, 9), 1);
        assert_eq!(ramsey_length(2, 2), 2 * 2 * 2 + 1);
        assert_eq!(colours(0.5), 3);
        assert_eq!(colours(1.0 / 3.0), 4);
        assert_eq!(ramsey_length(2, 9), 9u64.pow(10) + 1);
    }

    #[test]
    fn pigeonhole_forces_grid_for_two_colours() {
        // every 2-colouring of a 3 x 9 table holds a monochromatic 2 x 2 grid
        let k = 2;
        let (a, b) = (3usize, ramsey_length(2, 2) as usize);
        assert_eq!(b, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        for _ in 0..2000 {
            let t: Vec<Vec<u32>> = (0..a).map(|_| (0..b).map(|_| rng.gen_range(0..2)).collect()).collect();
            let (rows, cols) = pigeonhole_grid(&t, k, 2).expect("bound forces a grid");
            let c = t[rows[0]][cols[0]];
            assert!(rows.iter().all(|&r| cols.iter().all(|&x| t[r][x] == c)));
            assert!(exhaustive_grid(&t, k).is_some());
        }
    }

    #[test]
    fn uniform_types_take_least_indices() {
        let g = OrderedBigraph::new(12, 12).bicomplement();
        let v = View::new(&g);
        let p = build_interval_parade(&v, 3).unwrap();
        let cert = find_band(&v, &p, 2, 0.5, 0.25).unwrap();
        assert_eq!(cert.index, vec![-3, -2, 1, 2]);
        assert_eq!(cert.s, Some(0));
        assert_eq!(cert.tau, 1.0);
    }

    #[test]
    fn checkerboard_types_give_grid() {
        // 128 x 128, K = 4, blocks of 16; phi = 1/2 puts d = 16 in type 0 and
        // d = 1 in type 1
        let g = OrderedBigraph::from_fn(128, 128, |i, j| {
            let (a, b) = (i / 16, j / 16);
            j % 16 == 0 && a < 4 && b < 4 && ((a + b) % 2 == 0 || i % 16 == 0)
        });
        let v = View::new(&g);
        let p = build_interval_parade(&v, 4).unwrap();
        let d = p.max_degree_fn(&v);
        let neg = p.neg();
        let pos = p.pos();
        let table: Vec<Vec<u32>> = neg
            .iter()
            .map(|&h| pos.iter().map(|&j| pair_type(d.get(j, h), 16, 128, 0.5).unwrap()).collect())
            .collect();
        assert!(table.iter().flatten().any(|&s| s == 0));
        assert!(table.iter().flatten().any(|&s| s == 1));
        let (rows, cols) = pigeonhole_grid(&table, 2, colours(0.5)).unwrap();
        let c = table[rows[0]][cols[0]];
        assert!(rows.iter().all(|&r| cols.iter().all(|&x| table[r][x] == c)));
        let cert = find_band(&v, &p, 2, 0.5, 0.25).unwrap();
        assert_eq!(cert.index.len(), 4);
        let s = cert.s.unwrap();
        for h in cert.index.iter().filter(|&&i| i < 0) {
            for j in cert.index.iter().filter(|&&i| i > 0) {
                assert_eq!(pair_type(d.get(*j, *h), 16, 128, 0.5), Some(s));
            }
        }
    }

    #[test]
    fn single_pair_band() {
        let g = OrderedBigraph::from_fn(8, 8, |i, j| (i + j) % 2 == 0);
        let v = View::new(&g);
        let p = build_interval_parade(&v, 1).unwrap();
        let cert = find_band(&v, &p, 1, 0.5, 0.5).unwrap();
        assert_eq!(cert.index, vec![-1, 1]);
        assert_eq!(cert.s, Some(0));
    }
}

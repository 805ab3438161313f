//! Small cover sets inside a banded parade.
//!
//! For each negative block `h` the construction finds `C_h ⊆ B_h ⊆ A_h` and,
//! for each positive block `j`, a small `D_{h,j} ⊆ A_j` that covers `C_h`
//! while missing `B_h \ C_h` and every other `B_i`.

use crate::bigraph::View;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::numeric::{ceil_real, floor_real};
use crate::parade::{homog, homog_length, homog_ln_beta, AnticompleteWitness, BandCertificate, HomogOutcome, Parade};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafCoverResult {
    pub k: usize,
    pub tau: f64,
    pub phi: f64,
    pub mu: f64,
    pub neg: Vec<i64>,
    pub pos: Vec<i64>,
    /// `B_h`, aligned with `neg`.
    pub b: Vec<Vec<usize>>,
    /// `C_h`, aligned with `neg`.
    pub c: Vec<Vec<usize>>,
    /// `D_{h,j}` at `[h][j]`, aligned with `neg` and `pos`.
    pub d: Vec<Vec<Vec<usize>>>,
}

impl LeafCoverResult {
    fn h_pos(&self, h: i64) -> usize {
        self.neg.iter().position(|&x| x == h).expect("negative index")
    }

    pub fn b_of(&self, h: i64) -> &[usize] {
        &self.b[self.h_pos(h)]
    }

    pub fn c_of(&self, h: i64) -> &[usize] {
        &self.c[self.h_pos(h)]
    }

    pub fn d_of(&self, h: i64, j: i64) -> &[usize] {
        let b = self.pos.iter().position(|&x| x == j).expect("positive index");
        &self.d[self.h_pos(h)][b]
    }
}

fn has_nbr_in(view: &View, u: usize, set: &BitSet) -> bool {
    !set.is_disjoint(view.nbrs1(u))
}

/// Leaf covers for a parade with band `tau` (the band itself is not
/// re-checked; a failure of its lower bound surfaces as an error naming the
/// offending blocks and sets).
pub fn leaf_cover(view: &View, a: &Parade, k: usize, tau: f64, phi: f64, mu: f64) -> Result<LeafCoverResult> {
    let neg = a.neg();
    let pos = a.pos();
    let kf = k as f64;
    if k == 0 || neg.len() > k || pos.len() > k {
        return Err(Error::PreconditionViolated(format!(
            "need k >= 1 and at most k blocks per side; k = {k}, length = {:?}",
            a.length()
        )));
    }
    if !(mu > 0.0 && mu <= 1.0 / (8.0 * kf) + 1e-12) || !(tau > 0.0 && tau <= 1.0 / (8.0 * kf * kf) + 1e-12) || phi <= 0.0 {
        return Err(Error::PreconditionViolated(format!(
            "need 0 < mu <= 1/(8k), 0 < tau <= 1/(8k^2), phi > 0; got mu = {mu}, tau = {tau}, phi = {phi}"
        )));
    }
    let (n1, n2) = (view.n1(), view.n2());
    let vpow = (n1 as f64).powf(phi);
    let amask: Vec<BitSet> = pos.iter().map(|&j| a.mask(view, j)).collect();

    // P_h: fewer than 2k tau |A_j| neighbours in every A_j
    let p_sets: Vec<Vec<usize>> = neg
        .iter()
        .map(|&h| {
            a.block(h)
                .iter()
                .copied()
                .filter(|&u| {
                    pos.iter().enumerate().all(|(b, &j)| {
                        amask[b].and_count(view.nbrs1(u)) < ceil_real(2.0 * kf * tau * a.block(j).len() as f64)
                    })
                })
                .collect()
        })
        .collect();

    let chunk = floor_real(1.0 / (8.0 * kf * kf * tau)).max(1);
    let budget = floor_real(2.0 * vpow / tau);
    let mut q: Vec<Option<Vec<usize>>> = vec![None; neg.len()];
    let mut d: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); pos.len()]; neg.len()];
    let mut all_d = BitSet::new(n2);

    for (gi, &g) in neg.iter().enumerate() {
        let ag = a.block(g).len();
        // T_g: P_g minus neighbours of earlier cover sets
        let t: Vec<usize> = p_sets[gi].iter().copied().filter(|&u| !has_nbr_in(view, u, &all_d)).collect();
        let tmask = BitSet::from_indices(n1, t.iter().copied());
        let lim = tau * ag as f64 / vpow;
        let mut xs: Vec<Vec<usize>> = Vec::with_capacity(pos.len());
        let mut ys: Vec<BitSet> = Vec::with_capacity(pos.len());
        for &j in &pos {
            // S_j: fewer than 4k^2 tau |Q_h| neighbours in each earlier Q_h
            let qmasks: Vec<(BitSet, usize)> = q
                .iter()
                .flatten()
                .map(|qh| (BitSet::from_indices(n1, qh.iter().copied()), ceil_real(4.0 * kf * kf * tau * qh.len() as f64)))
                .collect();
            let s: Vec<usize> = a
                .block(j)
                .iter()
                .copied()
                .filter(|&v| qmasks.iter().all(|(m, cap)| m.and_count(view.nbrs2(v)) < *cap))
                .collect();
            let mut x: Vec<usize> = Vec::new();
            let mut in_x = BitSet::new(n2);
            let mut uncovered = tmask.clone();
            while uncovered.count() as f64 >= mu * ag as f64 {
                let best = s
                    .iter()
                    .copied()
                    .filter(|&v| !in_x.contains(v))
                    .map(|v| (uncovered.and_count(view.nbrs2(v)), v))
                    .max_by_key(|&(c, v)| (c, std::cmp::Reverse(v)));
                let Some((gain, v)) = best.filter(|&(c, _)| c as f64 > lim) else {
                    return Err(Error::HypothesisViolated(format!(
                        "band fails for ({g}, {j}): {} vertices of block {g} and {} of block {j} have max-degree <= {lim:.4}",
                        uncovered.count(),
                        s.len()
                    )));
                };
                if x.len() + 1 > budget {
                    return Err(Error::HypothesisViolated(format!("cover for ({g}, {j}) exceeds {budget} vertices")));
                }
                debug_assert!(gain > 0);
                x.push(v);
                in_x.insert(v);
                uncovered.subtract(view.nbrs2(v));
            }
            let mut y = tmask.clone();
            y.subtract(uncovered.words());
            x.sort_unstable();
            xs.push(x);
            ys.push(y);
        }
        let mut y_all = tmask.clone();
        for y in &ys {
            y_all.intersect_with(y.words());
        }
        // j-type: chunk of the least covering vertex
        let mut classes: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = std::collections::BTreeMap::new();
        for v in y_all.iter() {
            let key: Vec<usize> = xs
                .iter()
                .map(|x| {
                    let p = x.iter().position(|&u| view.adj(v, u)).expect("Y is covered");
                    p / chunk
                })
                .collect();
            classes.entry(key).or_default().push(v);
        }
        let Some((key, qg)) = classes.into_iter().fold(None, |best: Option<(Vec<usize>, Vec<usize>)>, (k, v)| match best {
            Some(b) if b.1.len() >= v.len() => Some(b),
            _ => Some((k, v)),
        }) else {
            return Err(Error::HypothesisViolated(format!("no vertex of block {g} is covered for every j")));
        };
        for (b, x) in xs.iter().enumerate() {
            let lo = key[b] * chunk;
            d[gi][b] = x[lo..(lo + chunk).min(x.len())].to_vec();
            for &v in &d[gi][b] {
                all_d.insert(v);
            }
        }
        q[gi] = Some(qg);
    }

    let mut b_sets = Vec::with_capacity(neg.len());
    let mut c_sets = Vec::with_capacity(neg.len());
    for (i, &h) in neg.iter().enumerate() {
        let mut others = BitSet::new(n2);
        for (hh, row) in d.iter().enumerate() {
            if hh != i {
                for s in row {
                    for &v in s {
                        others.insert(v);
                    }
                }
            }
        }
        let c: Vec<usize> = q[i].as_ref().unwrap().iter().copied().filter(|&u| !has_nbr_in(view, u, &others)).collect();
        let cm = BitSet::from_indices(n1, c.iter().copied());
        let b: Vec<usize> = a
            .block(h)
            .iter()
            .copied()
            .filter(|&u| cm.contains(u) || !has_nbr_in(view, u, &all_d))
            .collect();
        b_sets.push(b);
        c_sets.push(c);
    }
    Ok(LeafCoverResult {
        k,
        tau,
        phi,
        mu,
        neg,
        pos,
        b: b_sets,
        c: c_sets,
        d,
    })
}

fn subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Exact check of every leaf-cover property against the parade `a`.
pub fn check_leaf_cover(view: &View, a: &Parade, r: &LeafCoverResult) -> std::result::Result<(), String> {
    let (n1, n2) = (view.n1(), view.n2());
    let kf = r.k as f64;
    let cmin = (n1 as f64).powf(-kf * r.phi) / 16.0;
    let dmax = floor_real(1.0 / (8.0 * kf * kf * r.tau));
    if r.neg != a.neg() || r.pos != a.pos() {
        return Err("index sets differ from the parade".into());
    }
    for (i, &h) in r.neg.iter().enumerate() {
        let (b, c, ah) = (&r.b[i], &r.c[i], a.block(h));
        if !subset(c, b) || !subset(b, ah) {
            return Err(format!("block {h}: need C ⊆ B ⊆ A"));
        }
        if 2 * b.len() < ah.len() {
            return Err(format!("block {h}: |B| = {} < |A|/2", b.len()));
        }
        if c.len() < ceil_real(cmin * ah.len() as f64) {
            return Err(format!("block {h}: |C| = {} below |V1|^(-k phi)|A|/16", c.len()));
        }
    }
    for (i, &h) in r.neg.iter().enumerate() {
        for (b, &j) in r.pos.iter().enumerate() {
            let dset = &r.d[i][b];
            if !subset(dset, a.block(j)) {
                return Err(format!("D({h},{j}) is not inside block {j}"));
            }
            if dset.len() > dmax {
                return Err(format!("|D({h},{j})| = {} > {dmax}", dset.len()));
            }
            let dm = BitSet::from_indices(n2, dset.iter().copied());
            if let Some(u) = r.c[i].iter().find(|&&u| !has_nbr_in(view, u, &dm)) {
                return Err(format!("D({h},{j}) misses vertex {u} of C({h})"));
            }
            let cm = BitSet::from_indices(n1, r.c[i].iter().copied());
            for (i2, &h2) in r.neg.iter().enumerate() {
                let bad = r.b[i2]
                    .iter()
                    .find(|&&u| (i2 != i || !cm.contains(u)) && has_nbr_in(view, u, &dm));
                if let Some(u) = bad {
                    return Err(format!("D({h},{j}) touches vertex {u} of B({h2})"));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum CombinedOutcome {
    Anticomplete(AnticompleteWitness),
    /// Vertex `v` of block `j` with many neighbours in block `h`.
    HighDegree { h: i64, j: i64, v: usize },
    Cover {
        /// The contracted blocks `F_i`, `i ∈ J`, that carry the band.
        band_parade: Parade,
        band: BandCertificate,
        cover: LeafCoverResult,
    },
}

/// Length `K` required by [`combined_cover`] for `(k, c)`.
pub fn combined_length(k: usize, c: f64) -> u64 {
    if k == 0 {
        return 1;
    }
    homog_length(k, c / k as f64)
}

/// `ln beta` with `beta = (8k)^(-1 - 2 K^2 k / c)`.
pub fn combined_ln_beta(k: usize, c: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    homog_ln_beta(combined_length(k, c), c / kf, 1.0 / (8.0 * kf))
}

pub fn combined_cover(view: &View, a: &Parade, k: usize, c: f64, seed: u64) -> Result<CombinedOutcome> {
    if c <= 0.0 {
        return Err(Error::PreconditionViolated(format!("c = {c} must be positive")));
    }
    if k == 0 {
        let empty = Parade::new(view, vec![])?;
        return Ok(CombinedOutcome::Cover {
            band_parade: empty,
            band: BandCertificate { tau: 1.0, phi: c, mu: 1.0, index: vec![], s: None },
            cover: LeafCoverResult {
                k,
                tau: 1.0,
                phi: c,
                mu: 1.0,
                neg: vec![],
                pos: vec![],
                b: vec![],
                c: vec![],
                d: vec![],
            },
        });
    }
    let kf = k as f64;
    let (phi, mu) = (c / kf, 1.0 / (8.0 * kf));
    let ln_beta = combined_ln_beta(k, c);
    let (f, band) = match homog(view, a, k, phi, mu, seed)? {
        HomogOutcome::Anticomplete(w) => return Ok(CombinedOutcome::Anticomplete(w)),
        HomogOutcome::Band { parade, cert, .. } => (parade, cert),
    };
    for h in f.neg() {
        let ah = a.block(h);
        let hm = a.mask(view, h);
        let need = ceil_real((ln_beta - (8.0 * kf * kf).ln()).exp() * ah.len() as f64).max(1);
        for j in f.pos() {
            if let Some(&v) = a.block(j).iter().find(|&&v| hm.and_count(view.nbrs2(v)) >= need) {
                return Ok(CombinedOutcome::HighDegree { h, j, v });
            }
        }
    }
    let tau = band.tau.min(1.0 / (8.0 * kf * kf));
    let cover = leaf_cover(view, &f, k, tau, band.phi, mu)?;
    Ok(CombinedOutcome::Cover { band_parade: f, band, cover })
}

/// Checks the outcome's witness and size bounds relative to `a`.
pub fn check_combined(view: &View, a: &Parade, k: usize, c: f64, out: &CombinedOutcome) -> std::result::Result<(), String> {
    let kf = k.max(1) as f64;
    let ln_beta = combined_ln_beta(k, c);
    let beta = ln_beta.exp();
    match out {
        CombinedOutcome::Anticomplete(w) => {
            if !w.holds(view) || !subset(&w.x, a.block(w.h)) || !subset(&w.y, a.block(w.j)) {
                return Err("witness is not an anticomplete pair of sub-blocks".into());
            }
            let okx = w.x.len() >= ceil_real(beta * a.block(w.h).len() as f64);
            let oky = w.y.len() >= ceil_real(beta * a.block(w.j).len() as f64);
            if okx && oky {
                Ok(())
            } else {
                Err("witness sides below beta".into())
            }
        }
        CombinedOutcome::HighDegree { h, j, v } => {
            let hm = a.mask(view, *h);
            let need = ceil_real(beta / (8.0 * kf * kf) * a.block(*h).len() as f64).max(1);
            if a.block(*j).contains(v) && hm.and_count(view.nbrs2(*v)) >= need {
                Ok(())
            } else {
                Err(format!("vertex {v} has fewer than {need} neighbours in block {h}"))
            }
        }
        CombinedOutcome::Cover { band_parade, cover, .. } => {
            if cover.neg.len() != k || cover.pos.len() != k {
                return Err("J has the wrong size".into());
            }
            let ja = a.sub(band_parade.indices());
            if !band_parade.is_contraction_of(&ja) {
                return Err("band blocks are not sub-blocks".into());
            }
            check_leaf_cover(view, band_parade, cover)?;
            let n1 = view.n1() as f64;
            for (i, &h) in cover.neg.iter().enumerate() {
                let ah = a.block(h).len() as f64;
                if cover.b[i].len() < ceil_real(beta * ah / 2.0) {
                    return Err(format!("|B({h})| below beta|A|/2"));
                }
                if cover.c[i].len() < ceil_real(beta * n1.powf(-c) * ah / 16.0) {
                    return Err(format!("|C({h})| below beta|V1|^-c|A|/16"));
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::OrderedBigraph;
    use crate::parade::build_interval_parade;

    #[test]
    fn single_cover_vertex() {
        let g = OrderedBigraph::from_fn(8, 8, |_, j| j == 0);
        let v = View::new(&g);
        let a = Parade::new(&v, vec![(-1, (0..8).collect()), (1, (0..8).collect())]).unwrap();
        let r = leaf_cover(&v, &a, 1, 0.125, 0.5, 0.125).unwrap();
        assert_eq!(r.d_of(-1, 1), &[0]);
        assert_eq!(r.c_of(-1), (0..8).collect::<Vec<_>>().as_slice());
        check_leaf_cover(&v, &a, &r).unwrap();
    }

    #[test]
    fn empty_negative_side() {
        let g = OrderedBigraph::new(4, 4);
        let v = View::new(&g);
        let a = Parade::new(&v, vec![(1, vec![0, 1])]).unwrap();
        let r = leaf_cover(&v, &a, 1, 0.1, 0.5, 0.1).unwrap();
        assert!(r.neg.is_empty() && r.c.is_empty());
        check_leaf_cover(&v, &a, &r).unwrap();
    }

    #[test]
    fn preconditions() {
        let g = OrderedBigraph::new(4, 4);
        let v = View::new(&g);
        let a = Parade::new(&v, vec![(-1, vec![0]), (1, vec![0])]).unwrap();
        assert!(leaf_cover(&v, &a, 1, 0.2, 0.5, 0.1).is_err());
        assert!(leaf_cover(&v, &a, 1, 0.1, 0.5, 0.2).is_err());
        assert!(leaf_cover(&v, &a, 0, 0.1, 0.5, 0.1).is_err());
    }

    #[test]
    fn band_failure_is_reported() {
        // no edges at all: nothing covers, so the lower band bound fails
        let g = OrderedBigraph::new(8, 8);
        let v = View::new(&g);
        let a = Parade::new(&v, vec![(-1, (0..8).collect()), (1, (0..8).collect())]).unwrap();
        let e = leaf_cover(&v, &a, 1, 0.125, 0.5, 0.125).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolated(_)));
    }

    #[test]
    fn combined_on_zero_host() {
        let g = OrderedBigraph::new(16, 16);
        let v = View::new(&g);
        let a = build_interval_parade(&v, 2).unwrap();
        let out = combined_cover(&v, &a, 1, 0.5, 0).unwrap();
        match &out {
            CombinedOutcome::Anticomplete(w) => {
                assert_eq!(w.x, a.block(w.h));
                assert_eq!(w.y, a.block(w.j));
            }
            other => panic!("{other:?}"),
        }
        check_combined(&v, &a, 1, 0.5, &out).unwrap();
    }

    #[test]
    fn combined_reports_high_degree() {
        // contraction ends at adjacent singletons; beta is tiny, so a single
        // neighbour in the original block crosses the threshold
        let g = OrderedBigraph::new(16, 16).bicomplement();
        let v = View::new(&g);
        let a = build_interval_parade(&v, 1).unwrap();
        let out = combined_cover(&v, &a, 1, 0.5, 0).unwrap();
        assert!(matches!(out, CombinedOutcome::HighDegree { .. }), "{out:?}");
        check_combined(&v, &a, 1, 0.5, &out).unwrap();
    }
}

//! Extraction of a sparse or dense `m1 x m2` window from a host that avoids a
//! pattern, or an embedding of the pattern.

use crate::bigraph::{OrderedBigraph, VertexSetPair};
use crate::bitset::{and_count, BitSet};
use crate::containment::{verify_embedding, Embedding};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparsifyParams {
    pub eps: f64,
    pub m1: usize,
    pub m2: usize,
}

impl SparsifyParams {
    pub fn new(eps: f64, m1: usize, m2: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.125) {
            return Err(Error::PreconditionViolated(format!(
                "eps = {eps} must lie in (0, 1/8)"
            )));
        }
        if m1 == 0 || m2 == 0 {
            return Err(Error::PreconditionViolated("m1 and m2 must be positive".into()));
        }
        Ok(SparsifyParams { eps, m1, m2 })
    }

    pub fn d(&self) -> u64 {
        (1.0 / (4.0 * self.eps)).ceil() as u64
    }

    /// Smallest `(n1, n2)` accepted for a pattern with sides `(h1, h2)`;
    /// `None` if it overflows.
    pub fn required_sizes(&self, h1: usize, h2: usize) -> Option<(u128, u128)> {
        let mut r1 = (h1 as u128).checked_mul(self.m1 as u128)?;
        for _ in 0..h2 {
            r1 = r1.checked_mul(self.d() as u128)?;
        }
        let r2 = 2u128
            .checked_mul(h1 as u128)?
            .checked_mul(h2 as u128)?
            .checked_mul(self.m2 as u128)?;
        Some((r1, r2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparsifyOutcome {
    SparsePair(VertexSetPair),
    DensePair(VertexSetPair),
    Found(Embedding),
}

/// Consecutive blocks of near-equal size; the remainder joins the last block.
pub(crate) fn interval_blocks(n: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let size = n / parts;
    (0..parts)
        .map(|p| {
            let end = if p + 1 == parts { n } else { (p + 1) * size };
            p * size..end
        })
        .collect()
}

/// The `m` members of `cands` with the smallest key, ties to the smaller
/// index, returned in increasing index order.
pub(crate) fn lowest_by(cands: &[usize], m: usize, key: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut v: Vec<(usize, usize)> = cands.iter().map(|&x| (key(x), x)).collect();
    v.sort_unstable();
    let mut out: Vec<usize> = v.into_iter().take(m).map(|(_, x)| x).collect();
    out.sort_unstable();
    out
}

pub fn sparsify(host: &OrderedBigraph, h: &OrderedBigraph, p: &SparsifyParams) -> Result<SparsifyOutcome> {
    let (h1, h2) = (h.n1(), h.n2());
    if h1 == 0 || h2 == 0 {
        return Err(Error::PreconditionViolated("pattern needs both sides nonempty".into()));
    }
    let (need1, need2) = p
        .required_sizes(h1, h2)
        .ok_or_else(|| Error::PreconditionViolated("size bound overflows".into()))?;
    if (host.n1() as u128) < need1 {
        return Err(Error::PreconditionViolated(format!(
            "|V1| = {} < h1*d^h2*m1 = {need1}",
            host.n1()
        )));
    }
    if (host.n2() as u128) < need2 {
        return Err(Error::PreconditionViolated(format!(
            "|V2| = {} < 2*h1*h2*m2 = {need2}",
            host.n2()
        )));
    }
    let d = p.d() as usize;
    let row_blocks = interval_blocks(host.n1(), h1);
    let col_blocks = interval_blocks(host.n2(), h2);
    let mut q: Vec<BitSet> = row_blocks
        .iter()
        .map(|b| BitSet::from_indices(host.n1(), b.clone()))
        .collect();
    let mut xs = Vec::with_capacity(h2);

    // count of neighbours (or non-neighbours) of column x inside q[u]
    let hit = |q: &BitSet, x: usize, adjacent: bool| -> usize {
        let a = q.and_count(host.col(x));
        if adjacent {
            a
        } else {
            q.count() - a
        }
    };

    for v in 0..h2 {
        let chosen = col_blocks[v].clone().find(|&x| {
            (0..h1).all(|u| hit(&q[u], x, h.get(u, v)) * d >= q[u].count())
        });
        if let Some(x) = chosen {
            for (u, qu) in q.iter_mut().enumerate() {
                if h.get(u, v) {
                    qu.intersect_with(host.col(x));
                } else {
                    qu.subtract(host.col(x));
                }
            }
            xs.push(x);
            continue;
        }

        // every x in B_v has a problem u; keep the most frequent one
        let mut problem_sets: Vec<Vec<usize>> = vec![Vec::new(); h1];
        for x in col_blocks[v].clone() {
            for (u, qu) in q.iter().enumerate() {
                if hit(qu, x, h.get(u, v)) * d < qu.count() {
                    problem_sets[u].push(x);
                }
            }
        }
        let u = (0..h1)
            .max_by_key(|&u| (problem_sets[u].len(), std::cmp::Reverse(u)))
            .unwrap();
        let dense = !h.get(u, v);
        let c = std::mem::take(&mut problem_sets[u]);
        let qu: Vec<usize> = q[u].to_vec();
        if qu.len() < 2 * p.m1 || c.len() < 2 * p.m2 {
            return Err(Error::HypothesisViolated(format!(
                "window too small: |Q_u| = {}, |C| = {}",
                qu.len(),
                c.len()
            )));
        }
        let pair = thin_out(host, &qu, &c, p.m1, p.m2, dense);
        return Ok(if dense {
            SparsifyOutcome::DensePair(pair)
        } else {
            SparsifyOutcome::SparsePair(pair)
        });
    }

    let row_map: Vec<usize> = q
        .iter()
        .map(|qu| qu.iter().next().expect("Q_u stays nonempty"))
        .collect();
    Ok(SparsifyOutcome::Found(Embedding { row_map, col_map: xs }))
}

/// Averaging step: 2m1 rows, then 2m2 columns, then the m1 and m2 lightest.
fn thin_out(
    host: &OrderedBigraph,
    rows: &[usize],
    cols: &[usize],
    m1: usize,
    m2: usize,
    dense: bool,
) -> VertexSetPair {
    let deg_row = |i: usize, mask: &BitSet, size: usize| {
        let a = mask.and_count(host.row(i));
        if dense {
            size - a
        } else {
            a
        }
    };
    let deg_col = |j: usize, mask: &BitSet, size: usize| {
        let a = mask.and_count(host.col(j));
        if dense {
            size - a
        } else {
            a
        }
    };
    let cmask = BitSet::from_indices(host.n2(), cols.iter().copied());
    let x1 = lowest_by(rows, 2 * m1, |i| deg_row(i, &cmask, cols.len()));
    let x1mask = BitSet::from_indices(host.n1(), x1.iter().copied());
    let x2 = lowest_by(cols, 2 * m2, |j| deg_col(j, &x1mask, x1.len()));
    let x2mask = BitSet::from_indices(host.n2(), x2.iter().copied());
    let y1 = lowest_by(&x1, m1, |i| deg_row(i, &x2mask, x2.len()));
    let y2 = lowest_by(&x2, m2, |j| deg_col(j, &x1mask, x1.len()));
    VertexSetPair::new(y1, y2)
}

/// Exact check of an outcome against its tagged invariant.
pub fn check_outcome(
    host: &OrderedBigraph,
    h: &OrderedBigraph,
    p: &SparsifyParams,
    out: &SparsifyOutcome,
) -> std::result::Result<(), String> {
    let (pair, dense) = match out {
        SparsifyOutcome::Found(e) => {
            return if verify_embedding(host, h, e) {
                Ok(())
            } else {
                Err("embedding fails verification".into())
            }
        }
        SparsifyOutcome::SparsePair(pair) => (pair, false),
        SparsifyOutcome::DensePair(pair) => (pair, true),
    };
    pair.validate(host).map_err(|e| e.to_string())?;
    if pair.z1.len() != p.m1 || pair.z2.len() != p.m2 {
        return Err(format!(
            "sizes ({}, {}) differ from ({}, {})",
            pair.z1.len(),
            pair.z2.len(),
            p.m1,
            p.m2
        ));
    }
    let m2 = BitSet::from_indices(host.n2(), pair.z2.iter().copied());
    let m1 = BitSet::from_indices(host.n1(), pair.z1.iter().copied());
    let lim2 = p.eps * p.m2 as f64;
    let lim1 = p.eps * p.m1 as f64;
    for &i in &pair.z1 {
        let a = and_count(host.row(i), m2.words());
        let k = if dense { p.m2 - a } else { a };
        if k as f64 > lim2 {
            return Err(format!("row {i} has {k} > eps*m2 crossing entries"));
        }
    }
    for &j in &pair.z2 {
        let a = and_count(host.col(j), m1.words());
        let k = if dense { p.m1 - a } else { a };
        if k as f64 > lim1 {
            return Err(format!("column {j} has {k} > eps*m1 crossing entries"));
        }
    }
    Ok(())
}

//! Exact, slow ground truth: girth, 4-cycles, embeddings and optimal
//! anticomplete pairs.

use crate::bigraph::{OrderedBigraph, VertexSetPair};
use crate::containment::Embedding;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Length of a shortest cycle, by BFS from every vertex.
pub fn girth(g: &OrderedBigraph) -> Option<usize> {
    let (n1, n2) = (g.n1(), g.n2());
    let n = n1 + n2;
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            if u < n1 {
                (0..n2).filter(|&j| g.get(u, j)).map(|j| n1 + j).collect()
            } else {
                (0..n1).filter(|&i| g.get(i, u - n1)).collect()
            }
        })
        .collect();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut par = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    par[v] = u;
                    q.push_back(v);
                } else if par[u] != v {
                    let c = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

/// Whether some two rows share two columns.
pub fn has_c4(g: &OrderedBigraph) -> bool {
    for a in 0..g.n1() {
        for b in a + 1..g.n1() {
            let common: u32 = g.row(a).iter().zip(g.row(b)).map(|(x, y)| (x & y).count_ones()).sum();
            if common >= 2 {
                return true;
            }
        }
    }
    false
}

fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Every order-preserving induced embedding, in lexicographic order.
pub fn all_embeddings(host: &OrderedBigraph, pattern: &OrderedBigraph) -> Vec<Embedding> {
    let rows = increasing(host.n1(), pattern.n1());
    let cols = increasing(host.n2(), pattern.n2());
    let mut out = Vec::new();
    for r in &rows {
        for c in &cols {
            let ok = (0..pattern.n1()).all(|a| (0..pattern.n2()).all(|b| host.get(r[a], c[b]) == pattern.get(a, b)));
            if ok {
                out.push(Embedding { row_map: r.clone(), col_map: c.clone() });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// Maximise the smaller side, then the total.
    MaxMin,
    /// Maximise the total, then the smaller side.
    MaxSum,
}

impl Objective {
    pub fn key(self, a: usize, b: usize) -> (usize, usize) {
        match self {
            Objective::MaxMin => (a.min(b), a + b),
            Objective::MaxSum => (a + b, a.min(b)),
        }
    }
}

/// Largest `n1 + n2` accepted by [`oracle_max_anticomplete`].
pub const ORACLE_LIMIT: usize = 40;

/// Optimal anticomplete pair with both sides nonempty; `(∅, ∅)` when none
/// exists. Branches on rows in order, keeping the common non-neighbourhood
/// of the chosen rows as the column side.
pub fn oracle_max_anticomplete(g: &OrderedBigraph, objective: Objective) -> Result<VertexSetPair> {
    let (n1, n2) = (g.n1(), g.n2());
    if n1 + n2 > ORACLE_LIMIT {
        return Err(Error::TooLarge(format!("{n1} + {n2} > {ORACLE_LIMIT}")));
    }
    let full: u64 = if n2 == 64 { u64::MAX } else { (1u64 << n2) - 1 };
    let nonnb: Vec<u64> = (0..n1).map(|i| !g.row(i).first().copied().unwrap_or(0) & full).collect();
    let mut s = Search { nonnb: &nonnb, objective, best: None, chosen: Vec::new() };
    s.go(0, full);
    Ok(match s.best {
        Some((_, rows, cols)) => VertexSetPair::new(rows, (0..n2).filter(|&j| cols >> j & 1 == 1).collect()),
        None => VertexSetPair::default(),
    })
}

struct Search<'a> {
    nonnb: &'a [u64],
    objective: Objective,
    best: Option<((usize, usize), Vec<usize>, u64)>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, cols: u64) {
        let c = cols.count_ones() as usize;
        let k = self.chosen.len();
        if k > 0 && c > 0 {
            let key = self.objective.key(k, c);
            if self.best.as_ref().is_none_or(|b| key > b.0) {
                self.best = Some((key, self.chosen.clone(), cols));
            }
        }
        if i == self.nonnb.len() || c == 0 {
            return;
        }
        let rows_max = k + self.nonnb.len() - i;
        let bound = self.objective.key(rows_max, c);
        if self.best.as_ref().is_some_and(|b| bound <= b.0) {
            return;
        }
        self.chosen.push(i);
        self.go(i + 1, cols & self.nonnb[i]);
        self.chosen.pop();
        self.go(i + 1, cols);
    }
}

/// Full enumeration over all pairs of nonempty subsets; for tiny hosts only.
pub fn enumerate_max_anticomplete(g: &OrderedBigraph, objective: Objective) -> Option<(usize, usize)> {
    let (n1, n2) = (g.n1(), g.n2());
    assert!(n1 <= 12 && n2 <= 12);
    let mut best: Option<(usize, usize)> = None;
    for rm in 1u32..(1 << n1) {
        for cm in 1u32..(1 << n2) {
            let anti = (0..n1).all(|i| rm >> i & 1 == 0 || (0..n2).all(|j| cm >> j & 1 == 0 || !g.get(i, j)));
            if anti {
                let key = objective.key(rm.count_ones() as usize, cm.count_ones() as usize);
                if best.is_none_or(|b| key > b) {
                    best = Some(key);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> OrderedBigraph {
        OrderedBigraph::from_rows_str(s).unwrap()
    }

    #[test]
    fn girth_small_cases() {
        assert_eq!(girth(&m("11;11")), Some(4));
        assert_eq!(girth(&m("10;01")), None);
        assert_eq!(girth(&m("110;011;101")), Some(6));
        assert!(has_c4(&m("11;11")));
        assert!(!has_c4(&m("110;011;101")));
    }

    #[test]
    fn embeddings_respect_order() {
        assert!(all_embeddings(&m("10"), &m("01")).is_empty());
        assert_eq!(all_embeddings(&m("10;01"), &m("1")).len(), 2);
    }

    #[test]
    fn anticomplete_examples() {
        let p = oracle_max_anticomplete(&m("10;01"), Objective::MaxMin).unwrap();
        assert_eq!(p.min_side(), 1);
        assert!(m("10;01").is_anticomplete(&p.z1, &p.z2));
        let z = oracle_max_anticomplete(&OrderedBigraph::new(3, 3), Objective::MaxSum).unwrap();
        assert_eq!((z.z1, z.z2), (vec![0, 1, 2], vec![0, 1, 2]));
        let one = oracle_max_anticomplete(&m("11;11"), Objective::MaxMin).unwrap();
        assert_eq!(one, VertexSetPair::default());
        assert!(matches!(
            oracle_max_anticomplete(&OrderedBigraph::new(21, 20), Objective::MaxMin),
            Err(Error::TooLarge(_))
        ));
    }
}

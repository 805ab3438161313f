//! Ordered tree patterns with rooted-distance caches.

use crate::bigraph::OrderedBigraph;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }
}

/// A validated ordered tree bigraph. Vertices get flat ids: rows `0..h1`,
/// then columns `h1..h1+h2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePattern {
    g: OrderedBigraph,
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
    radius: usize,
    center: usize,
}

impl TreePattern {
    pub fn new(g: OrderedBigraph) -> Result<Self> {
        let (h1, h2) = (g.n1(), g.n2());
        let t = h1 + h2;
        if t == 0 {
            return Err(Error::NotATree("empty pattern".into()));
        }
        let mut adj = vec![Vec::new(); t];
        let mut edges = 0;
        for i in 0..h1 {
            for j in 0..h2 {
                if g.get(i, j) {
                    adj[i].push(h1 + j);
                    adj[h1 + j].push(i);
                    edges += 1;
                }
            }
        }
        if edges + 1 != t {
            return Err(Error::NotATree(format!(
                "{t} vertices but {edges} edges"
            )));
        }
        let dist: Vec<Vec<usize>> = (0..t).map(|s| bfs(&adj, s)).collect();
        if dist[0].contains(&usize::MAX) {
            return Err(Error::NotATree("disconnected".into()));
        }
        let radius = radius_double_bfs(&adj);
        let center = (0..t)
            .find(|&v| dist[v].iter().copied().max() == Some(radius))
            .expect("a tree has a center");
        Ok(TreePattern {
            g,
            adj,
            dist,
            radius,
            center,
        })
    }

    pub fn from_rows_str(s: &str) -> Result<Self> {
        Self::new(OrderedBigraph::from_rows_str(s)?)
    }

    pub fn graph(&self) -> &OrderedBigraph {
        &self.g
    }

    pub fn t(&self) -> usize {
        self.adj.len()
    }

    pub fn h1(&self) -> usize {
        self.g.n1()
    }

    pub fn h2(&self) -> usize {
        self.g.n2()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Least-id vertex whose eccentricity equals the radius.
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn side(&self, v: usize) -> Side {
        if v < self.h1() {
            Side::One
        } else {
            Side::Two
        }
    }

    /// Index of `v` within its side.
    pub fn index(&self, v: usize) -> usize {
        if v < self.h1() {
            v
        } else {
            v - self.h1()
        }
    }

    pub fn id(&self, side: Side, index: usize) -> usize {
        match side {
            Side::One => index,
            Side::Two => self.h1() + index,
        }
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.dist[u][v] == 1
    }

    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    /// Eccentricity of `w`: the `w`-radius.
    pub fn w_radius(&self, w: usize) -> usize {
        self.dist[w].iter().copied().max().unwrap_or(0)
    }

    /// Neighbour of `v` on the path towards `w`; `None` for `v == w`.
    pub fn w_parent(&self, w: usize, v: usize) -> Option<usize> {
        if v == w {
            return None;
        }
        self.adj[v]
            .iter()
            .copied()
            .find(|&u| self.dist[w][u] + 1 == self.dist[w][v])
    }

    /// `levels(w)[s]` lists the vertices at distance exactly `s` from `w`.
    pub fn levels(&self, w: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.w_radius(w) + 1];
        for v in 0..self.t() {
            out[self.dist[w][v]].push(v);
        }
        out
    }

    /// Smallest `w`-radius over the vertices `w` on `side`.
    pub fn side_radius(&self, side: Side) -> Option<(usize, usize)> {
        (0..self.t())
            .filter(|&w| self.side(w) == side)
            .map(|w| (self.w_radius(w), w))
            .min()
    }
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if d[v] == usize::MAX {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

/// Radius of a tree from its diameter, found by two sweeps.
fn radius_double_bfs(adj: &[Vec<usize>]) -> usize {
    let d0 = bfs(adj, 0);
    let far = (0..adj.len()).max_by_key(|&v| (d0[v], usize::MAX - v)).unwrap();
    let d1 = bfs(adj, far);
    let diam = d1.iter().copied().max().unwrap();
    diam.div_ceil(2)
}

/// Every ordered tree bigraph with between 2 and `max_t` vertices, in order
/// of `(h1, h2)` then row strings.
pub fn all_tree_patterns(max_t: usize) -> Vec<TreePattern> {
    let mut out = Vec::new();
    for t in 2..=max_t {
        for h1 in 1..t {
            let h2 = t - h1;
            let cells = h1 * h2;
            if cells > 24 {
                continue;
            }
            for mask in 0u32..(1 << cells) {
                if mask.count_ones() as usize != t - 1 {
                    continue;
                }
                let g = OrderedBigraph::from_fn(h1, h2, |i, j| mask >> (i * h2 + j) & 1 == 1);
                if let Ok(p) = TreePattern::new(g) {
                    out.push(p);
                }
            }
        }
    }
    out
}

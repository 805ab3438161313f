//! Ordered bigraphs: 0/1 matrices whose row and column indices are the
//! vertex orders of the two sides.

use crate::bitset::{and_count, words_for, BitSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Row/column adjacency stored twice, once per side, so that degree counts
/// from either side are a masked popcount.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedBigraph {
    n1: usize,
    n2: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairStatus {
    Anticomplete,
    Complete,
    Mixed,
}

/// Sorted row set `z1` and sorted column set `z2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VertexSetPair {
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
}

impl VertexSetPair {
    /// Sorts and deduplicates both sides.
    pub fn new(mut z1: Vec<usize>, mut z2: Vec<usize>) -> Self {
        z1.sort_unstable();
        z1.dedup();
        z2.sort_unstable();
        z2.dedup();
        VertexSetPair { z1, z2 }
    }

    pub fn validate(&self, g: &OrderedBigraph) -> Result<()> {
        check_sorted(&self.z1, g.n1())?;
        check_sorted(&self.z2, g.n2())
    }

    pub fn min_side(&self) -> usize {
        self.z1.len().min(self.z2.len())
    }
}

fn check_sorted(v: &[usize], len: usize) -> Result<()> {
    for w in v.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::PreconditionViolated(format!(
                "index list not strictly increasing at {}",
                w[1]
            )));
        }
    }
    match v.last() {
        Some(&i) if i >= len => Err(Error::OutOfRange { index: i, len }),
        _ => Ok(()),
    }
}

impl OrderedBigraph {
    pub fn new(n1: usize, n2: usize) -> Self {
        OrderedBigraph {
            n1,
            n2,
            rows: vec![0; n1 * words_for(n2)],
            cols: vec![0; n2 * words_for(n1)],
        }
    }

    pub fn from_fn(n1: usize, n2: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = OrderedBigraph::new(n1, n2);
        for i in 0..n1 {
            for j in 0..n2 {
                if f(i, j) {
                    g.set(i, j);
                }
            }
        }
        g
    }

    /// Builds from `;`-separated rows, e.g. `"10;01"`. The empty string is 0x0.
    pub fn from_rows_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(OrderedBigraph::new(0, 0));
        }
        let rows: Vec<&str> = s.split(';').collect();
        Self::from_row_strings(&rows, None)
    }

    /// Builds from row strings over `{0,1}`. `n2` is needed when there are no rows.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S], n2: Option<usize>) -> Result<Self> {
        let n1 = rows.len();
        let n2 = match (rows.first(), n2) {
            (Some(r), _) => r.as_ref().len(),
            (None, Some(n)) => n,
            (None, None) => 0,
        };
        let mut g = OrderedBigraph::new(n1, n2);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n2 {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {n2}",
                    r.len()
                )));
            }
            for (j, ch) in r.bytes().enumerate() {
                match ch {
                    b'1' => g.set(i, j),
                    b'0' => {}
                    _ => {
                        return Err(Error::Parse(format!(
                            "row {i} column {j}: unexpected character {:?}",
                            ch as char
                        )))
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn row_strings(&self) -> Vec<String> {
        (0..self.n1)
            .map(|i| {
                (0..self.n2)
                    .map(|j| if self.get(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    fn set(&mut self, i: usize, j: usize) {
        let w2 = words_for(self.n2);
        let w1 = words_for(self.n1);
        self.rows[i * w2 + j / 64] |= 1 << (j % 64);
        self.cols[j * w1 + i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let w2 = words_for(self.n2);
        (self.rows[i * w2 + j / 64] >> (j % 64)) & 1 == 1
    }

    /// Neighbourhood of row `i` as words over the columns.
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        let w2 = words_for(self.n2);
        &self.rows[i * w2..(i + 1) * w2]
    }

    /// Neighbourhood of column `j` as words over the rows.
    #[inline]
    pub fn col(&self, j: usize) -> &[u64] {
        let w1 = words_for(self.n1);
        &self.cols[j * w1..(j + 1) * w1]
    }

    pub fn row_degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_degree(&self, j: usize) -> usize {
        self.col(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        let r = (0..self.n1).map(|i| self.row_degree(i)).max().unwrap_or(0);
        let c = (0..self.n2).map(|j| self.col_degree(j)).max().unwrap_or(0);
        r.max(c)
    }

    pub fn bicomplement(&self) -> OrderedBigraph {
        OrderedBigraph::from_fn(self.n1, self.n2, |i, j| !self.get(i, j))
    }

    /// Swaps the two sides; row `i` becomes column `i`.
    pub fn transpose(&self) -> OrderedBigraph {
        OrderedBigraph {
            n1: self.n2,
            n2: self.n1,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Sub-bigraph on the given rows and columns, each taken in increasing order.
    pub fn induced_sub(&self, rows: &[usize], cols: &[usize]) -> Result<OrderedBigraph> {
        let mut r = rows.to_vec();
        let mut c = cols.to_vec();
        r.sort_unstable();
        r.dedup();
        c.sort_unstable();
        c.dedup();
        if let Some(&i) = r.last().filter(|&&i| i >= self.n1) {
            return Err(Error::OutOfRange { index: i, len: self.n1 });
        }
        if let Some(&j) = c.last().filter(|&&j| j >= self.n2) {
            return Err(Error::OutOfRange { index: j, len: self.n2 });
        }
        Ok(OrderedBigraph::from_fn(r.len(), c.len(), |a, b| {
            self.get(r[a], c[b])
        }))
    }

    pub fn pair_status(&self, p: &VertexSetPair) -> PairStatus {
        let mask = BitSet::from_indices(self.n2, p.z2.iter().copied());
        let mut edges = 0usize;
        for &i in &p.z1 {
            edges += and_count(self.row(i), mask.words());
        }
        if edges == 0 {
            PairStatus::Anticomplete
        } else if edges == p.z1.len() * p.z2.len() {
            PairStatus::Complete
        } else {
            PairStatus::Mixed
        }
    }

    /// True when no row of `z1` meets any column of `z2`.
    pub fn is_anticomplete(&self, z1: &[usize], z2: &[usize]) -> bool {
        let mask = BitSet::from_indices(self.n2, z2.iter().copied());
        z1.iter().all(|&i| mask.is_disjoint(self.row(i)))
    }

    pub fn is_complete(&self, z1: &[usize], z2: &[usize]) -> bool {
        let mask = BitSet::from_indices(self.n2, z2.iter().copied());
        z1.iter()
            .all(|&i| and_count(self.row(i), mask.words()) == z2.len())
    }

    /// Serializes in `.obm` form: header line `n1 n2`, then one line per row.
    pub fn to_obm(&self) -> String {
        let mut s = format!("{} {}\n", self.n1, self.n2);
        for r in self.row_strings() {
            s.push_str(&r);
            s.push('\n');
        }
        s
    }

    /// Parses `.obm` text; leading `#` lines are comments.
    pub fn from_obm(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let mut it = header.split_whitespace();
        let mut dim = |name: &str| -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("header lacks {name}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {name}: {e}")))
        };
        let n1 = dim("n1")?;
        let n2 = dim("n2")?;
        let rows: Vec<&str> = lines.by_ref().take(n1).collect();
        if rows.len() != n1 {
            return Err(Error::Parse(format!(
                "expected {n1} rows, found {}",
                rows.len()
            )));
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("trailing data: {extra:?}")));
        }
        let g = Self::from_row_strings(&rows, Some(n2))?;
        if g.n2 != n2 {
            return Err(Error::Parse(format!("rows have {} columns, header says {n2}", g.n2)));
        }
        Ok(g)
    }
}

impl std::fmt::Debug for OrderedBigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrderedBigraph({}x{}", self.n1, self.n2)?;
        if self.n1 * self.n2 <= 400 {
            write!(f, "; {}", self.row_strings().join(";"))?;
        }
        write!(f, ")")
    }
}

/// A bigraph seen with its sides possibly swapped. Side 1 of a transposed
/// view is the column side of the underlying matrix.
#[derive(Clone, Copy, Debug)]
pub struct View<'a> {
    pub g: &'a OrderedBigraph,
    pub transposed: bool,
}

impl<'a> View<'a> {
    pub fn new(g: &'a OrderedBigraph) -> Self {
        View { g, transposed: false }
    }

    pub fn transpose(self) -> Self {
        View {
            g: self.g,
            transposed: !self.transposed,
        }
    }

    #[inline]
    pub fn n1(&self) -> usize {
        if self.transposed {
            self.g.n2()
        } else {
            self.g.n1()
        }
    }

    #[inline]
    pub fn n2(&self) -> usize {
        if self.transposed {
            self.g.n1()
        } else {
            self.g.n2()
        }
    }

    /// Neighbours (on side 2) of side-1 vertex `u`.
    #[inline]
    pub fn nbrs1(&self, u: usize) -> &'a [u64] {
        if self.transposed {
            self.g.col(u)
        } else {
            self.g.row(u)
        }
    }

    /// Neighbours (on side 1) of side-2 vertex `v`.
    #[inline]
    pub fn nbrs2(&self, v: usize) -> &'a [u64] {
        if self.transposed {
            self.g.row(v)
        } else {
            self.g.col(v)
        }
    }

    #[inline]
    pub fn adj(&self, u: usize, v: usize) -> bool {
        if self.transposed {
            self.g.get(v, u)
        } else {
            self.g.get(u, v)
        }
    }

    /// Maps a (side-1, side-2) pair of view vertices to (row, column).
    #[inline]
    pub fn to_host(&self, u: usize, v: usize) -> (usize, usize) {
        if self.transposed {
            (v, u)
        } else {
            (u, v)
        }
    }
}

//! Ordered induced-submatrix containment.
//!
//! Rows of the pattern are placed left to right by depth-first search. After
//! each placement every pattern column keeps a mask of host columns whose
//! entries agree on the rows placed so far; a prefix survives only if the
//! masks admit an increasing column choice, which a greedy scan decides.

use crate::bigraph::OrderedBigraph;
use crate::bitset::BitSet;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
}

impl Embedding {
    /// Re-indexes through the row and column lists of an induced sub-bigraph.
    pub fn lift(&self, rows: &[usize], cols: &[usize]) -> Embedding {
        Embedding {
            row_map: self.row_map.iter().map(|&i| rows[i]).collect(),
            col_map: self.col_map.iter().map(|&j| cols[j]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Either {
    No,
    Pattern(Embedding),
    Bicomplement(Embedding),
}

pub fn verify_embedding(host: &OrderedBigraph, pattern: &OrderedBigraph, e: &Embedding) -> bool {
    if e.row_map.len() != pattern.n1() || e.col_map.len() != pattern.n2() {
        return false;
    }
    let increasing = |m: &[usize], n: usize| {
        m.windows(2).all(|w| w[0] < w[1]) && m.last().is_none_or(|&x| x < n)
    };
    if !increasing(&e.row_map, host.n1()) || !increasing(&e.col_map, host.n2()) {
        return false;
    }
    (0..pattern.n1()).all(|a| {
        (0..pattern.n2()).all(|b| pattern.get(a, b) == host.get(e.row_map[a], e.col_map[b]))
    })
}

/// Lexicographically least embedding (row map first, then column map).
pub fn contains(host: &OrderedBigraph, pattern: &OrderedBigraph) -> Option<Embedding> {
    let (h1, h2) = (pattern.n1(), pattern.n2());
    if h1 > host.n1() || h2 > host.n2() {
        return None;
    }
    let mut masks: Vec<Vec<BitSet>> = vec![vec![BitSet::full(host.n2()); h2]];
    let mut row_map = Vec::with_capacity(h1);
    let cols = greedy_columns(&masks[0])?;
    if h1 == 0 {
        return Some(Embedding { row_map, col_map: cols });
    }
    let mut next = vec![0usize; h1 + 1];
    let mut depth = 0;
    loop {
        let limit = host.n1() + depth + 1 - h1;
        let mut placed = false;
        while next[depth] < limit {
            let r = next[depth];
            next[depth] += 1;
            let row = host.row(r);
            let child: Vec<BitSet> = masks[depth]
                .iter()
                .enumerate()
                .map(|(b, m)| {
                    let mut m = m.clone();
                    if pattern.get(depth, b) {
                        m.intersect_with(row);
                    } else {
                        m.subtract(row);
                    }
                    m
                })
                .collect();
            if let Some(cols) = greedy_columns(&child) {
                row_map.push(r);
                if depth + 1 == h1 {
                    return Some(Embedding { row_map, col_map: cols });
                }
                masks.push(child);
                depth += 1;
                next[depth] = r + 1;
                placed = true;
                break;
            }
        }
        if !placed {
            if depth == 0 {
                return None;
            }
            masks.pop();
            row_map.pop();
            depth -= 1;
        }
    }
}

fn greedy_columns(masks: &[BitSet]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(masks.len());
    let mut from = 0;
    for m in masks {
        let c = m.next_from(from)?;
        out.push(c);
        from = c + 1;
    }
    Some(out)
}

/// Tests the pattern, then its bicomplement.
pub fn contains_either(host: &OrderedBigraph, pattern: &OrderedBigraph) -> Either {
    if let Some(e) = contains(host, pattern) {
        return Either::Pattern(e);
    }
    match contains(host, &pattern.bicomplement()) {
        Some(e) => Either::Bicomplement(e),
        None => Either::No,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> OrderedBigraph {
        OrderedBigraph::from_rows_str(s).unwrap()
    }

    #[test]
    fn least_one_entry() {
        let e = contains(&m("01;10"), &m("1")).unwrap();
        assert_eq!(e.row_map, vec![0]);
        assert_eq!(e.col_map, vec![1]);
    }

    #[test]
    fn order_matters() {
        assert_eq!(contains(&m("10"), &m("01")), None);
        assert!(contains(&m("01"), &m("01")).is_some());
    }

    #[test]
    fn empty_pattern_embeds() {
        let e = contains(&m("10;01"), &OrderedBigraph::new(0, 0)).unwrap();
        assert!(e.row_map.is_empty() && e.col_map.is_empty());
        let e = contains(&m("10;01"), &OrderedBigraph::new(0, 2)).unwrap();
        assert_eq!(e.col_map, vec![0, 1]);
    }

    #[test]
    fn verify_rejects_bad_maps() {
        let host = m("110;011;101");
        let pat = m("10;01");
        let e = contains(&host, &pat).unwrap();
        assert!(verify_embedding(&host, &pat, &e));
        let mut swapped = e.clone();
        swapped.row_map.swap(0, 1);
        assert!(!verify_embedding(&host, &pat, &swapped));
    }

    #[test]
    fn verify_is_induced() {
        // the pattern's 0 sits on a host 1
        let host = m("11;01");
        let pat = m("10;01");
        let e = Embedding { row_map: vec![0, 1], col_map: vec![0, 1] };
        assert!(!verify_embedding(&host, &pat, &e));
    }

    #[test]
    fn either_examples() {
        let zero = OrderedBigraph::new(3, 3);
        assert!(matches!(contains_either(&zero, &m("1")), Either::Bicomplement(_)));
        assert!(matches!(contains_either(&m("10;01"), &m("1")), Either::Pattern(_)));
        assert_eq!(contains_either(&OrderedBigraph::new(0, 0), &m("1")), Either::No);
    }
}

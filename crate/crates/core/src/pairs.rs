//! Cheap anticomplete pairs used when the size guarantee is already met by
//! any nonempty pair.

use crate::bigraph::{OrderedBigraph, VertexSetPair};
use crate::bitset::BitSet;

/// First zero entry in row-major order.
pub fn least_non_edge(g: &OrderedBigraph) -> Option<VertexSetPair> {
    (0..g.n1()).find_map(|i| {
        let nb = BitSet::from_words(g.row(i).to_vec(), g.n2());
        nb.complement()
            .iter()
            .next()
            .map(|j| VertexSetPair::new(vec![i], vec![j]))
    })
}

/// Best prefix of rows in increasing degree order, paired with their common
/// non-neighbourhood; also tried with the sides swapped. Ranked by the
/// smaller side, then the total.
pub fn greedy_anticomplete(g: &OrderedBigraph) -> Option<VertexSetPair> {
    let a = sweep(g);
    let b = sweep(&g.transpose()).map(|p| VertexSetPair::new(p.z2, p.z1));
    let key = |p: &VertexSetPair| (p.min_side(), p.z1.len() + p.z2.len());
    match (a, b) {
        (Some(a), Some(b)) => Some(if key(&b) > key(&a) { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn sweep(g: &OrderedBigraph) -> Option<VertexSetPair> {
    let mut order: Vec<usize> = (0..g.n1()).collect();
    order.sort_by_key(|&i| (g.row_degree(i), i));
    let mut free = BitSet::full(g.n2());
    let mut best: Option<(usize, usize, usize)> = None;
    for (k, &i) in order.iter().enumerate() {
        free.subtract(g.row(i));
        let c = free.count();
        if c == 0 {
            break;
        }
        let key = ((k + 1).min(c), k + 1 + c, k + 1);
        if best.is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
            best = Some(key);
        }
    }
    let (_, _, rows) = best?;
    let z1: Vec<usize> = order[..rows].to_vec();
    let mut free = BitSet::full(g.n2());
    for &i in &z1 {
        free.subtract(g.row(i));
    }
    Some(VertexSetPair::new(z1, free.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_edge_search() {
        let g = OrderedBigraph::from_rows_str("11;10").unwrap();
        assert_eq!(least_non_edge(&g), Some(VertexSetPair::new(vec![1], vec![1])));
        assert_eq!(least_non_edge(&OrderedBigraph::new(2, 2).bicomplement()), None);
    }

    #[test]
    fn greedy_is_anticomplete() {
        let g = OrderedBigraph::from_fn(9, 9, |i, j| i == j);
        let p = greedy_anticomplete(&g).unwrap();
        assert!(g.is_anticomplete(&p.z1, &p.z2));
        assert!(p.min_side() >= 4);
        let empty = OrderedBigraph::new(3, 4);
        let p = greedy_anticomplete(&empty).unwrap();
        assert_eq!((p.z1.len(), p.z2.len()), (3, 4));
    }
}

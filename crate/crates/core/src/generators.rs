//! Seeded instance generators. All randomness comes from `ChaCha8Rng`, whose
//! output stream is fixed by its specification and identical on every
//! platform; see the reference vector in the tests.

use crate::bigraph::OrderedBigraph;
use crate::error::{Error, Result};
use crate::oracle::girth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each entry is 1 independently with probability `p`.
pub fn gen_random(n1: usize, n2: usize, p: f64, seed: u64) -> Result<OrderedBigraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::PreconditionViolated(format!("p = {p} must lie in [0, 1]")));
    }
    let mut r = rng(seed);
    Ok(OrderedBigraph::from_fn(n1, n2, |_, _| r.gen::<f64>() < p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GirthParams {
    pub n: usize,
    pub g: usize,
    pub seed: u64,
}

impl GirthParams {
    pub fn new(n: usize, g: usize, seed: u64) -> Result<Self> {
        if g < 4 || g % 2 == 1 || n < 2 {
            return Err(Error::PreconditionViolated(format!("need even g >= 4 and n >= 2; got n = {n}, g = {g}")));
        }
        Ok(GirthParams { n, g, seed })
    }

    pub fn probability(&self) -> f64 {
        0.5 * (self.n as f64).powf(1.0 / self.g as f64 - 1.0)
    }
}

/// Seeds tried by [`gen_girth`] before giving up.
pub const GIRTH_RETRIES: u32 = 32;

/// An `n x n` ordered bigraph with girth greater than `g`: a random
/// `2n x 2n` bigraph loses one vertex per short cycle and is then trimmed
/// from the end to `n` vertices per side.
pub fn gen_girth(params: &GirthParams) -> Result<OrderedBigraph> {
    let GirthParams { n, g, .. } = GirthParams::new(params.n, params.g, params.seed)?;
    for attempt in 0..GIRTH_RETRIES {
        let big = gen_random(2 * n, 2 * n, params.probability(), params.seed.wrapping_add(attempt as u64))?;
        let dead = short_cycle_deletions(&big, g);
        let keep = |side: &[bool]| -> Option<Vec<usize>> {
            let alive: Vec<usize> = (0..side.len()).filter(|&v| !side[v]).collect();
            (alive.len() >= n).then(|| alive[..n].to_vec())
        };
        let (Some(rows), Some(cols)) = (keep(&dead[..2 * n]), keep(&dead[2 * n..])) else {
            continue;
        };
        let out = big.induced_sub(&rows, &cols)?;
        if girth(&out).is_some_and(|c| c <= g) {
            return Err(Error::CertificateBroken(format!("girth check failed for seed {}", params.seed)));
        }
        return Ok(out);
    }
    Err(Error::RetriesExhausted(GIRTH_RETRIES))
}

/// Vertices (rows first, then columns) deleted so that no cycle of length
/// at most `g` survives: in increasing order, a vertex is deleted when it is
/// the least vertex of such a cycle.
fn short_cycle_deletions(h: &OrderedBigraph, g: usize) -> Vec<bool> {
    let (n1, n2) = (h.n1(), h.n2());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n1 + n2];
    for i in 0..n1 {
        for j in 0..n2 {
            if h.get(i, j) {
                adj[i].push(n1 + j);
                adj[n1 + j].push(i);
            }
        }
    }
    let mut dead = vec![false; n1 + n2];
    let mut on_path = vec![false; n1 + n2];
    for s in 0..n1 + n2 {
        on_path[s] = true;
        dead[s] = closes(&adj, s, s, 1, g, &mut on_path);
        on_path[s] = false;
    }
    dead
}

/// Whether a path from `s` ending at `u` with `len` vertices, all above `s`
/// except `s`, extends to a cycle of length at most `g`.
fn closes(adj: &[Vec<usize>], s: usize, u: usize, len: usize, g: usize, on_path: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if v == s && len >= 4 {
            return true;
        }
        if v > s && !on_path[v] && len < g {
            on_path[v] = true;
            let hit = closes(adj, s, v, len + 1, g, on_path);
            on_path[v] = false;
            if hit {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::has_c4;

    #[test]
    fn chacha_reference_stream() {
        let mut r = rng(0);
        let got: Vec<u64> = (0..3).map(|_| r.gen()).collect();
        assert_eq!(got, REFERENCE);
    }

    const REFERENCE: [u64; 3] = [13080132717333068652, 8594738769458413623, 12896916468484187878];

    #[test]
    fn random_extremes_and_determinism() {
        assert_eq!(gen_random(4, 4, 0.0, 3).unwrap().edge_count(), 0);
        assert_eq!(gen_random(4, 4, 1.0, 3).unwrap().edge_count(), 16);
        assert_eq!(gen_random(4, 4, 0.5, 1).unwrap(), gen_random(4, 4, 0.5, 1).unwrap());
        assert!(gen_random(2, 2, 1.5, 0).is_err());
    }

    #[test]
    fn girth_examples() {
        let a = gen_girth(&GirthParams::new(50, 4, 7).unwrap()).unwrap();
        assert_eq!((a.n1(), a.n2()), (50, 50));
        assert!(!has_c4(&a));
        let b = gen_girth(&GirthParams::new(50, 6, 7).unwrap()).unwrap();
        assert!(girth(&b).is_none_or(|c| c > 6));
    }

    #[test]
    fn girth_params_validation() {
        assert!(GirthParams::new(50, 5, 0).is_err());
        assert!(GirthParams::new(1, 4, 0).is_err());
        assert!(GirthParams::new(50, 2, 0).is_err());
    }
}

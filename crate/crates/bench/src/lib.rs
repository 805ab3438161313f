//! Fixtures shared by the criterion benches.

use ppk_core::generators::{gen_girth, gen_random, GirthParams};
use ppk_core::{OrderedBigraph, TreePattern};

pub fn sparse_host(n: usize) -> OrderedBigraph {
    gen_random(n, n, 0.02, 11).expect("valid p")
}

pub fn dense_host(n: usize) -> OrderedBigraph {
    gen_random(n, n, 0.5, 12).expect("valid p")
}

pub fn girth_host(n: usize) -> OrderedBigraph {
    gen_girth(&GirthParams::new(n, 6, 13).expect("valid params")).expect("girth host")
}

/// A path on five vertices, centred on a column.
pub fn path5() -> TreePattern {
    TreePattern::from_rows_str("110;011").expect("tree")
}

pub fn star(k: usize) -> TreePattern {
    TreePattern::from_rows_str(&"1".repeat(k)).expect("tree")
}

//! Certified pure-pair and ordered tree-embedding algorithms for ordered
//! bigraphs (0/1 matrices with ordered rows and columns).
//!
//! Every algorithm returns a certificate: an anticomplete or complete pair of
//! vertex sets, or an order-preserving induced embedding of a pattern. The
//! certificates are cheap to re-check with the functions in [`bigraph`] and
//! [`containment`].

pub mod bigraph;
pub mod bitset;
pub mod containment;
pub mod error;
pub mod generators;
pub mod leaf_cover;
pub mod numeric;
pub mod oracle;
pub mod pairs;
pub mod parade;
pub mod pipeline;
pub mod rainbow;
pub mod sparse;
pub mod sparsify;
pub mod tree;

pub use bigraph::{OrderedBigraph, PairStatus, VertexSetPair, View};
pub use containment::{contains, contains_either, verify_embedding, Embedding};
pub use error::{Error, Result};
pub use tree::{Side, TreePattern};

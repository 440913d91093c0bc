//! Gadget reductions from Label Cover to hypergraph coloring, together with the
//! t-agreeing family machinery they rely on and brute-force oracles that make
//! the completeness and soundness arguments checkable on small instances.
//!
//! Module map:
//!
//! * [`families`]: words over `[q]`, agreement sets, k-wise t-agreeing and
//!   t-intersecting predicates, shifting, extremal bounds and exact search.
//! * [`labelcover`]: bipartite and layered Label Cover instances, planted
//!   generators, assignment evaluation, smoothness and weak-density checks.
//! * [`reduction`]: the 2k-uniform and (k+1)-uniform gadget hypergraphs as
//!   implicit edge predicates, completeness colorings and verification.
//! * [`decode`]: the soundness procedures (heavy clouds, label lists, star
//!   picks, randomized labelings).
//! * [`solvers`]: independence checks, maximum independent set and proper
//!   colorability on explicit hypergraphs.
//! * [`hypergraph`]: the explicit hypergraph type and its `p hgr` text format.

pub mod decode;
pub mod families;
pub mod hypergraph;
pub mod labelcover;
pub mod reduction;
pub mod rng;
pub mod solvers;

mod error;

pub use error::{Error, ErrorKind};

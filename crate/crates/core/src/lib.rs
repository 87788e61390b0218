//! Rhomboidal C4C8 nanotori `TRC4C8(R)[m, n]`: graph construction, the
//! symmetries `g1..g4` realised as permutations, exact verification of their
//! relations and of the regular action they generate, and a Cayley-graph
//! decision procedure backed by an exhaustive automorphism search.
//!
//! ```
//! use c4c8_torus::{decide_cayley, Decision, TorusParams, DEFAULT_BUDGET};
//!
//! let verdict = decide_cayley(TorusParams::new(3, 3).unwrap(), DEFAULT_BUDGET).unwrap();
//! assert_eq!(verdict.is_cayley, Decision::Yes);
//! assert_eq!(verdict.witness_group_order, Some(36));
//! ```

pub mod cayley;
pub mod cli;
pub mod error;
pub mod graph;
pub mod perm;
pub mod reports;
pub mod symmetry;
pub mod torus;

pub use cayley::{
    brute_force_aut, build_cayley, connection_set, decide_cayley, find_regular_subgroup, verify_cayley_isomorphism,
    CayleyVerdict, ConnectionSet, Decision, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use graph::{Adjacency, SimpleGraph};
pub use perm::{closure, compose, intersect, inverse, is_automorphism, is_normal, is_regular_action, orbit, PermGroup, Permutation};
pub use symmetry::{make_generators, transport, verify_group_structure, verify_relations, Generator, GeneratorSet, GroupWord};
pub use torus::{build_torus, decode_vertex, encode_vertex, neighbors, validate_torus, TorusGraph, TorusParams, VertexId};

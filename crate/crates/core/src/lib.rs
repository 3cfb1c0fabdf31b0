//! Computations with right-angled Coxeter groups `W_Γ` of finite simple graphs.
//!
//! The crate covers word arithmetic in canonical ShortLex form, special
//! subgroups and their double cosets, the group algebra with its conditional
//! expectations, exact growth series, and the graph-side classification of
//! amenability, `ℤ × 𝔽₂` containment, strong solidity and hyperbolicity.
//!
//! Exhaustive verifier sweeps live next to the operations they check and take
//! an [`Exec`] so they can run on a rayon pool (feature `parallel`, on by
//! default) or sequentially; their output does not depend on the worker count.

pub mod algebra;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod graph;
pub mod growth;
pub mod parabolic;
pub mod report;
pub mod word;

pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{Embedding, PatternName, SimpleGraph, VertexSet};
pub use report::{Mismatch, Report};
pub use word::{Ball, CoxeterGroup, Element, Word};

//! Hypergraph-based distribution discriminators over finite vertex universes.
//!
//! A k-ary hypergraph `g` turns two distributions into a scalar gap
//! `|ℒ_{p₁}(g) − ℒ_{p₂}(g)|`, where `ℒ_p(g)` is the probability that `k` IID
//! draws form an edge. Taking the supremum over a class gives an integral
//! probability metric. This crate computes those metrics exactly, measures
//! class capacity, runs ERM discriminators and closeness testers, builds
//! separating instances, and checks the associated numeric bounds.

pub mod capacity;
pub mod class;
pub mod constructions;
pub mod discrimination;
pub mod distribution;
pub mod error;
pub mod experiments;
pub mod frequency;
pub mod hypergraph;
pub mod io;
pub mod metrics;
pub mod sample;
pub mod scalar;
pub mod seed;
pub mod universe;
pub mod vandermonde;

pub use class::DistinguishingClass;
pub use distribution::{sample_from, Distribution, MixtureSampler, Sampler};
pub use error::{Error, Result};
pub use frequency::{edge_freq_empirical, edge_freq_true, Budget, EmpiricalFreq};
pub use hypergraph::{Edge, Hypergraph};
pub use sample::Sample;
pub use scalar::{Exact, Scalar};
pub use universe::{Universe, Vertex, VertexUniverse};

//! Exact lattice computations for negative definite plumbing graphs.

pub mod catalog;
pub mod cycle;
pub mod engine;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod lattice;
pub mod oracle;
pub mod rational;
pub mod series;

pub use cycle::{Cycle, RatCycle};
pub use engine::{BoxBounds, MinQuery, MinResult, Region};
pub use error::{Error, Result};
pub use graph::{parse_graph, Definiteness, IntersectionForm, PlumbingGraph, Vertex};
pub use lattice::{DiscriminantGroup, HClass, Lattice};
pub use rational::Rat;
pub use invariants::{Classification, ComputationSequence, H1Result, Hypothesis, Singularity};
pub use series::{verify_convolution, SeriesKind, SeriesTruncation};

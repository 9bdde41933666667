//! Spectral radii of `A_alpha` matrices for graphs with pendant paths.
//!
//! A connected graph `G` with root `v` gets one path per part of a partition
//! `a` of `n` hung at `v`, giving `G(a, v)`. Listing the partitions of `n` in
//! shortlex order lists these graphs by nondecreasing `A_alpha` spectral
//! radius. The crate builds the graphs, computes their radii directly and
//! through equitable quotients, and checks the ordering together with the
//! polynomial identities behind it.

pub mod charpoly;
pub mod matrix;
pub mod number;
pub mod partition;
pub mod quotient;
pub mod spectra;
pub mod tolerances;
pub mod verify;
pub mod wgraph;

pub use charpoly::Poly;
pub use matrix::{FloatMatrix, Matrix, RationalMatrix, SurdMatrix};
pub use number::{Alpha, Rational, Surd};
pub use partition::{ConsecutiveCase, Partition, PendantShape};
pub use quotient::{EquitablePartition, QuotientPair};
pub use spectra::RadiusResult;
pub use verify::{Verdict, VerificationReport};
pub use wgraph::{PendantGraph, RootedGraph, WeightedGraph};

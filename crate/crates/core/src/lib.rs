//! Enumeration and verification engine for combinatorial bases of standard
//! modules and Feigin-Stoyanovsky subspaces of the affine Lie algebras
//! B2(1) and A1(1).
//!
//! Three independent computation paths are implemented and cross-checked:
//!
//! - [`partitions`]: colored partitions with difference and initial
//!   conditions; admissible-monomial enumeration (finite and semi-infinite).
//! - [`presentation`]: defining ideals in a graded polynomial ring and exact
//!   graded quotient dimensions (rational and multi-prime modular ranks).
//! - [`characters`]: truncated Weyl-Kac character oracle for standard
//!   modules, with a Freudenthal cross-oracle at small cuts.
//!
//! [`verify`] turns the expected equalities between the paths into
//! machine-readable check reports.

pub mod algebra;
pub mod cache;
pub mod characters;
pub mod error;
pub mod partitions;
pub mod presentation;
pub mod verify;
pub mod weights;

pub use algebra::{Color, Part, Sl2Symbol};
pub use error::{Error, Result};
pub use partitions::{
    ColoredPartition, DominantWeight, SemiInfiniteMonomial, Sl2Partition, Sl2Weight,
    WeightedCount,
};
pub use presentation::{AlphabetKind, ArithmeticMode, GradedPolynomial, IdealTruncation, RingSpec};
pub use characters::{AffineDatum, AffineKind, TruncatedSeries};
pub use verify::{CheckReport, CheckStatus};
pub use weights::FiniteWeight;

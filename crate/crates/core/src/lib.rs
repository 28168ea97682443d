//! Exact counting machinery for pinned distance sets in F_q^d.
//!
//! A point set `E` in `F_q^d` determines, for every pin `y`, the histogram
//! `t -> #{x in E : ||x - y|| = t}` where `||v|| = sum v_j^2`. This crate
//! computes those histograms over the whole space (directly or through
//! cyclic cross-correlations), and checks the second-moment identity, the
//! good-pin bound, and the resulting pinned-distance lower bounds in exact
//! integer arithmetic.

pub mod error;
pub mod field;
pub mod generators;
pub mod geometry;
pub mod pinned;
pub mod pointset;
pub mod verify;

pub use error::{Error, Result};
pub use field::{make_field, make_field_with_cap, FieldElement, FieldSpec};
pub use generators::{generate, SetSpec, GENERATOR_ID};
pub use geometry::{Point, Space};
pub use pinned::{Backend, PinProfile, SweepResult};
pub use pointset::PointSet;
pub use verify::{RationalParam, VerificationReport};

/// Default upper bound on q^d (and on q itself).
pub const DEFAULT_CAP: u64 = 1 << 26;

/// Largest cap accepted anywhere; keeps q^(3d) inside u128.
pub const MAX_CAP: u64 = 1 << 40;

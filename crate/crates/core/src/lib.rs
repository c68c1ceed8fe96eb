//! Covering line segments with axis-parallel unit squares.
//!
//! A square covers a segment when it contains one of the segment's
//! endpoints. The crate provides exact solvers for small instances,
//! constant-factor sweeps and a shifting-strategy scheme for the continuous
//! problem, and an LP-based pipeline for the discrete problem where the
//! squares are given.
//!
//! ```
//! use segcover::io::{gen_random, ClassTag};
//! use segcover::sweep::hv1_three_approx;
//! use segcover::verify_cover;
//!
//! let inst = gen_random(ClassTag::Hv1, 50, 3, 10, None).unwrap();
//! let res = hv1_three_approx(&inst.segments).unwrap();
//! assert!(verify_cover(&inst.segments, &res.cover).unwrap().feasible);
//! assert!(res.cover.len() <= 3 * res.independent.len());
//! ```

pub mod discrete;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod ptas;
pub mod range_tree;
pub mod scalar;
pub mod strip;
pub mod sweep;

pub use error::SolveError;
pub use geometry::{covers, is_independent_set, jointly_coverable, verify_cover, Cover, CoverReport, Point, Segment, UnitSquare};
pub use scalar::Scalar;

//! Two-dimensional variation of functions on finite planar point sets.
//!
//! The crate is layered:
//!
//! * [`geom`]: exact rational points, lists, oriented lines, affine maps and
//!   convex hulls.
//! * [`variation_factor`]: crossing segments of a polyline on a line and the
//!   variation factor `vf(S)`.
//! * [`engine`]: curve variation, the supremum search, and certified
//!   `[lower, upper]` intervals for `Var(f, σ)`.
//! * [`algebra`]: norm arithmetic on function tables, lattice operations and
//!   convex relabelling.
//! * [`circle`]: samples on the unit circle and the comparison with the
//!   classical one-dimensional variation there.

pub mod algebra;
pub mod circle;
pub mod engine;
pub mod error;
pub mod fsum;
pub mod function;
pub mod geom;
pub mod variation_factor;

pub use error::{Error, Result};
pub use function::FunctionTable;
pub use geom::{AffineMap, Line, Point, PointList, PointSet, Rational};
pub use num_complex::Complex64;

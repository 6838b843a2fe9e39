//! Exact-arithmetic differential cohomology on finite simplicial complexes.
//!
//! The crate realizes the character diagram of ordinary differential cohomology
//! in two models: differential cocycles `(c, h, ω)` ([`diffcocycle`]) and
//! homomorphisms on cycles ([`characters`]), together with the comparison map
//! between them, the graded product ([`product`]), and combinatorial cycle
//! surgery ([`geometry`]). Real coefficients are modeled by `Q` and `R/Z` by
//! `Q/Z`; all arithmetic is exact.

pub mod arith;
pub mod characters;
pub mod cochains;
pub mod complex;
pub mod corpus;
pub mod diagram;
pub mod diffcocycle;
pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod product;
pub mod report;
pub mod zlin;

pub use arith::{Integer, Rational};
pub use characters::Character;
pub use cochains::{Cochain, CohomologyClass, QuotientForm, Ring};
pub use complex::{Complex, SimplicialMap, Subcomplex};
pub use diffcocycle::{DiffClass, DifferentialCocycle};
pub use error::{Error, Result};
pub use geometry::Pseudomanifold;
pub use report::{Check, Report, Status};
pub use zlin::{FgAbelianGroup, IntMatrix, SnfResult};

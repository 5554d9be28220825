//! Analysis of reality-based algebras (RBAs) with positive degree map.
//!
//! An RBA is given by a real structure-constant tensor `λ[i][j][k]` for
//! `b_i b_j = Σ_k λ_ijk b_k` together with an involution `*` on the basis
//! indices. This crate validates the axioms, finds the degree map,
//! decomposes the algebra into simple components, computes characters,
//! multiplicities and Frobenius-Schur indicators, extracts real
//! *-representations, builds the quaternion symbol of the degree-2
//! component and decides its splitting, and checks the 2-adic integrality
//! obstruction for rank-7 algebras with a quaternionic component.
//!
//! Module map:
//!
//! - [`rba`], [`validate`], [`degree`]: the data model, axiom checks,
//!   degree map, standard basis, Gram form of the feasible trace.
//! - [`decomp`]: regular representation, center, central idempotents,
//!   character table, *-representations and symmetrization.
//! - [`indicator`]: normalized Frobenius-Schur indicators and the
//!   real-element count.
//! - [`quaternion`]: quaternion arithmetic, the `(a, β)` symbol of the
//!   degree-2 component, Hilbert symbols over ℚ.
//! - [`integrality`]: integrality checks, the 2-adic obstruction, and the
//!   rank-7 quaternionic example.
//! - [`ingest`], [`report`]: group and association-scheme input, the
//!   end-to-end analysis pipeline and its JSON report.

pub mod decomp;
pub mod degree;
pub mod error;
pub mod indicator;
pub mod ingest;
pub mod integrality;
pub mod linalg;
pub mod quaternion;
pub mod rba;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod tolerance;
pub mod validate;

pub use decomp::{CentralIdempotent, Character, CharacterTable, RegularRep, StarRep};
pub use degree::{DegreeMap, FeasibleTrace};
pub use error::{RbaError, Result};
pub use indicator::IndicatorReport;
pub use quaternion::{Quaternion, QuaternionSymbol};
pub use rba::Rba;
pub use scalar::{Rational, Scalar};
pub use tolerance::ToleranceConfig;
pub use validate::ValidationReport;

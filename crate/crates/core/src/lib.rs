//! Numerical invariants of hyperelliptic curves covering a fixed elliptic
//! curve, through the rational quotient of a blown-up ruled surface over it.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: divisor classes on the blow-up and on its quotient.
//! - [`curves`]: exceptional and (-2)-curves of the quotient.
//! - [`cover`]: numerical constraints on covers `(n, d, ρ, m, γ)`.
//! - [`nef`]: nefness of `Λ(n, d, ρ, γ)`, linear systems and moduli dimension.
//! - [`families`]: explicit families of nef and non-nef types.
//! - [`census`]: parallel census over a parameter grid.
//! - [`expr`]: text form of divisor classes.
//! - [`verify`]: the self-check suite shared by the CLI and the tests.

pub mod census;
pub mod cover;
pub mod curves;
pub mod error;
pub mod expr;
pub mod families;
pub mod lattice;
pub mod nef;
pub mod types;
pub mod verify;

pub use census::{census, write_csv, CensusGrid, CensusRecord};
pub use cover::{validate_cover, validate_type, Check, CoverInvariants, CoverReport};
pub use curves::{enumerate_exceptional, exceptional_class, negative_curve_catalog, CatalogEntry, ExceptionalSpec};
pub use error::{Error, Result, MAX_PARAM};
pub use expr::{format, parse, ParseError};
pub use families::{construction_kit, generate_nef_types, generate_non_nef_types, FamilyMember, KitDivisors};
pub use lattice::{
    arithmetic_genus, canonical_class, intersect, quotient_genus, quotient_intersect, DivisorClass, QuotientClass,
};
pub use nef::{
    decompose_type, lambda_class, linear_system_dims, moduli_dimension, nef_check, verify_minimizer_claim, z_divisor,
    Decomposition, LambdaSpec, LinearSystemDims, NefMode, NefOptions, NefReport, Reading, Verdict,
};
pub use types::{CharPConfig, Vec4};

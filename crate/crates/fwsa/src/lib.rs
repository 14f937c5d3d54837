//! Exact-arithmetic engine for modules over the labeled-surjection categories
//! FWS_A and tilde-FWS_A attached to a finite abelian group A.
//!
//! The objects of both categories are finite sets whose points carry labels in
//! A. A morphism of FWS_A is a surjection under which the label of every
//! target point equals the sum of the labels in its fiber; a morphism of
//! tilde-FWS_A additionally carries a pointing g: X -> A, with the twisted
//! composition (f2, g2) . (f1, g1) = (f2 f1, g1 + g2 f1). FS denotes plain
//! finite sets with surjections and FS_A the zero-labeled objects with
//! tilde morphisms.
//!
//! Modules are contravariant functors into vector spaces over Q or a
//! cyclotomic field Q(zeta_e). The crate provides:
//!
//! * [`group`]: finite abelian groups, subgroups, quotients, characters.
//! * [`cyclo`]: exact arithmetic in Q(zeta_e), power basis mod the e-th
//!   cyclotomic polynomial.
//! * [`category`]: object and hom-set enumeration, twisted composition.
//! * [`linalg`]: exact sparse rank, column space, cokernel, quotient spaces.
//! * [`module`]: the functor-module engine and the explicit modules
//!   (principal projectives, V0-tilde, V0-bar, shifts, Day convolution,
//!   coinvariants, pushforward, Fourier duality).
//! * [`cert`]: generation-degree certification through eta-tilde
//!   surjectivity, factorization and restriction witnesses, and the
//!   bound-recursion table.
//! * [`hilbert`]: truncated multivariate Hilbert series and fitting to
//!   rational forms with linear denominator factors.
//! * [`parse`]: the string grammars used by the command-line front end.
//!
//! All arithmetic is exact; every certification is a rank computation over
//! Q or Q(zeta_e) with deterministic pivoting, so repeated runs produce
//! identical reports.

pub mod category;
pub mod cert;
pub mod cyclo;
pub mod group;
pub mod hilbert;
pub mod linalg;
pub mod module;
pub mod parse;

use thiserror::Error as ThisError;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    /// A string failed to parse; `field` names the grammar and `token` the
    /// offending fragment.
    #[error("parse error in {field}: {token}")]
    Parse { field: &'static str, token: String },
    /// A value failed a domain precondition.
    #[error("validation error: {0}")]
    Validation(String),
    /// Two cyclotomic numbers live in different ambient fields.
    #[error("mismatched ambient fields Q(zeta_{0}) and Q(zeta_{1})")]
    FieldMismatch(u64, u64),
    /// Two values belong to different ambient groups.
    #[error("mismatched ambient groups")]
    GroupMismatch,
    /// A module or morphism was used in the wrong category.
    #[error("category mismatch: {0}")]
    CategoryMismatch(String),
    /// Morphism endpoints do not line up for composition.
    #[error("composition endpoints do not match")]
    ComposeMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

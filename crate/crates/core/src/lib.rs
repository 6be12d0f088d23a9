//! Commutation groups over `Z_d`.
//!
//! A commutation group `G(mu)` is presented by generators `x1 < ... < xn`,
//! central phases `J_k` (`k` in `Z_d`) and relations `x y = J_mu(x,y) y x`,
//! `x^d = 1`, where `mu` is a skew-symmetric zero-diagonal matrix over `Z_d`.
//! This crate decides the word problem by rewriting, computes in the
//! isomorphic group `H(mu)`, produces contextuality certificates (contextual
//! words or non-contextual value assignments), reduces commutator matrices to
//! Darboux normal form, and represents the group by qudit clock and shift
//! operators.

pub mod algebra;
pub mod contextuality;
pub mod darboux;
pub mod fixtures;
pub mod group;
pub mod representation;
pub mod rewrite;
pub mod word;

pub use algebra::{CommutatorMatrix, ExponentVector, Modulus, Scalar};
pub use group::{Group, GroupElement};
pub use rewrite::{normalize, NormalForm};
pub use word::{format_word, parse_word, Letter, Word};
pub use contextuality::{verify_contextual_word, ContextualWord, ContextualityError, Verdict};
pub use darboux::{darboux_form, decide_darboux, standard_form, DarbouxError, Decision};
pub use representation::{represent, to_dense, DenseOperator, RepresentationError, WeylOperator};

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Parse(#[from] word::ParseError),
    #[error(transparent)]
    Rewrite(#[from] rewrite::RewriteError),
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Contextuality(#[from] ContextualityError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Algebra(_) => "invalid_matrix",
            Error::Parse(_) => "parse_error",
            Error::Rewrite(_) => "rewrite_error",
            Error::Group(_) => "group_error",
            Error::Contextuality(_) => "contextuality_error",
            Error::Darboux(_) => "darboux_error",
            Error::Representation(_) => "representation_error",
        }
    }
}

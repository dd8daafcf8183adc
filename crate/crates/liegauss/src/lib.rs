//! Exact-arithmetic root systems, Gauss sums, and modular/Hecke representations.
//!
//! The crate constructs the simple root systems `A_r ... G_2` with a rational
//! Gram matrix normalised so long roots have squared length 2, builds the
//! lattice chain (coroot ⊆ ℓ ⊆ coweight) describing a compact group form, and
//! verifies a family of identities relating a center-normalised sum of phases
//! `e^{iπ(μ|μ)}` over miniscule weights to its Langlands-dual counterpart:
//!
//! * reciprocity of the Gauss-sum analog under Langlands duality,
//! * the classical quadratic Gauss sum, generalized Gauss sums and quadratic
//!   reciprocity as the `SU(pq)/Z_p` special case,
//! * the van der Blij / Milgram formula for even lattices,
//! * the modular group relations `S⁴ = 1`, `(ST)³ = S²` on `C[Λ*/Λ]` in the
//!   simply laced case,
//! * the Hecke group relations `S̃⁴ = 1`, `(S̃T)^{2n} = S̃²` on the two-sector
//!   space `C[Λ*/Λ̌] ⊕ C[(ᴸΛ)*/(ᴸΛ)̌]` in the non-simply laced case,
//! * theta-function transformation laws (numerically, with certified tails)
//!   and the Landsberg limit recovering the exact Gauss sum.
//!
//! All identity checks are decided in exact cyclotomic arithmetic
//! ([`cyclo::CycScalar`], [`cyclo::RadScalar`]); floating point appears only
//! in the theta-function module, where every truncation carries an explicit
//! tail bound.
//!
//! Coordinates: every vector is stored in the simple-root basis, so all inner
//! products are rational. On the dual side of a non-simply laced algebra the
//! `√n` scale is kept symbolic: stored coordinates are plain rationals and
//! norms pick up an integer factor `n`.
//!
//! The `liegauss` binary exposes each verification as a CLI subcommand; see
//! the README or `liegauss --help`.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix formulas

pub mod cli;
pub mod cyclo;
pub mod gauss;
pub mod heckerep;
pub mod lattices;
pub mod modrep;
pub mod ratmat;
pub mod rootsys;
pub mod sweep;
pub mod theta;

pub use cyclo::{CycScalar, RadScalar};
pub use lattices::{GroupForm, Lattice, QuotientGroup};
pub use rootsys::{Family, RootSystem};

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid simple type: {0}")]
    InvalidType(String),
    #[error("{0} requires a simply laced type")]
    NotSimplyLaced(String),
    #[error("{0} requires a non-simply laced type; use the modular-group routines instead")]
    NotNonSimplyLaced(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("theta tail bound unachievable within budget: achieved {achieved:e}, requested {requested:e}")]
    ThetaTail { achieved: f64, requested: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

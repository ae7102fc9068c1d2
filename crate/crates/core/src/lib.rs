//! Exact computation of the Goldman bracket and Turaev cobracket on free
//! homotopy classes of directed loops in an oriented surface with boundary,
//! together with identity checkers, conjecture searches and the Euler
//! characteristic ledger of string diagrams.
//!
//! Surfaces are one-vertex fat graphs ([`surface::FatGraph`]); loops are
//! cyclic words in the free fundamental group ([`words::ConjClass`]).
//! Crossings are found combinatorially by comparing the rays a curve emits
//! from the vertex in the universal cover ([`goldman_turaev`]).

pub mod bialgebra;
pub mod diagrams;
pub mod goldman_turaev;
pub mod linear;
pub mod search;
pub mod surface;
pub mod words;

pub use bialgebra::TensorCubeSum;
pub use goldman_turaev::{bracket, cobracket, intersection_count, is_simple, self_link_count};
pub use linear::{FormalSum, TensorSquareSum};
pub use surface::{FatGraph, SurfaceSig};
pub use words::{canonical_class, free_reduce, ConjClass, Letter, Word};

pub const ENGINE_VERSION: &str = concat!("gtlie-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid letter {0:?}: expected a-z or A-Z")]
    BadLetter(char),
    #[error("generator {generator} out of range for {k} generators")]
    GeneratorOutOfRange { generator: usize, k: usize },
    #[error("word reduces to the trivial class")]
    TrivialClass,
    #[error("power 0 of a class is trivial")]
    ZeroPower,
    #[error("invalid fat graph: {0}")]
    BadSigma(String),
    #[error("unsupported surface: {0}")]
    BadSurface(String),
    #[error("classes {0} and {1} share a primitive root; their curves are parallel")]
    ParallelClasses(ConjClass, ConjClass),
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("invalid gluing: {0}")]
    BadGluing(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("identity defect: {0}")]
    IdentityDefect(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

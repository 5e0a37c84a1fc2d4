use thiserror::Error;

/// Every fallible operation in this crate returns one of these variants.
/// `Parse` marks rejected input text; the rest are domain errors on
/// well-formed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    /// Mixing the natural-number and {x,y} alphabets, or calling an
    /// operation on the alphabet it is not defined for.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    /// lambda-shuffle with lambda != 0 needs letters that can be added;
    /// {x,y} has no such product.
    #[error("unsupported semigroup: {0}")]
    UnsupportedSemigroup(String),
    /// Input is not in the image of the binarisation being inverted.
    #[error("not in image: {0}")]
    NotInImage(String),
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("not tree-like: {0}")]
    NotTreeLike(String),
    /// A sum that does not converge was asked for a value or a reduction.
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

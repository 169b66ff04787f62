//! Ramified `p`-adic towers `W(F_{p^f})[π]`, `π^e = -p`, at finite precision.

mod element;
mod poly;
mod token;
mod tower;

use thiserror::Error;

pub use element::{q_to_f64, ExactTerm, PadicElement};
pub use poly::PadicPoly;
pub use token::{parse_token, parse_token_list, Token};
pub use tower::{FieldTower, DEFAULT_PRECISION_UNITS};

/// Rational valuations, normalized by `v(p) = 1`.
pub type Q = num_rational::Ratio<i64>;

/// A valuation, `Infinity` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<Q> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("invalid tower: {0}")]
    InvalidTower(&'static str),
    /// The smallest tower `(e, f)` in which the value exists.
    #[error("needs an extension with e = {e}, f = {f}")]
    NeedsExtension { e: u32, f: u32 },
    #[error("insufficient precision")]
    InsufficientPrecision,
    #[error("negative valuation")]
    NegativeValuation,
    #[error("division by an element indistinguishable from zero")]
    DivisionByIndistinguishableZero,
    #[error("elements live in incompatible towers")]
    TowerMismatch,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("cannot parse token at byte {pos}: {msg}")]
    Parse { pos: usize, msg: &'static str },
}

//! Exact computer algebra for formal group laws, Adams operations on
//! K-theory and SU-bordism, cannibalistic classes and 2-adic checks.
//!
//! Everything is generic over a coefficient ring implementing
//! [`scalar::CoeffRing`]; the aliases below fix the common choices.

pub mod scalar;
pub mod poly;
pub mod series;
pub mod fgl;
pub mod linalg;
pub mod chern;
pub mod adams;
pub mod cannibal;
pub mod mahler;

use thiserror::Error;

pub use scalar::{CoeffRing, Field, Gf2, Padic2, Rat};

pub type RatPoly = poly::Poly<Rat>;
pub type Gf2Poly = poly::Poly<Gf2>;
pub type PadicPoly = poly::Poly<Padic2>;

pub type RatSeries = series::MultiSeries<Rat>;
/// Series over `Q[b1, b2, ...]`.
pub type SymSeries = series::MultiSeries<RatPoly>;
pub type Gf2Series = series::MultiSeries<Gf2>;
pub type PadicSeries = series::MultiSeries<Padic2>;

pub type RatFgl = fgl::Fgl<Rat>;
pub type SymFgl = fgl::Fgl<RatPoly>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] scalar::ScalarError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Fgl(#[from] fgl::FglError),
    #[error(transparent)]
    Chern(#[from] chern::ChernError),
    #[error(transparent)]
    Adams(#[from] adams::AdamsError),
    #[error(transparent)]
    Cannibal(#[from] cannibal::CannibalError),
    #[error(transparent)]
    Mahler(#[from] mahler::MahlerError),
    #[error(transparent)]
    Parse(#[from] poly::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

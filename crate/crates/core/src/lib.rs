//! Exact truncated-series algebra for elliptic-genus computations.
//!
//! Everything is computed over exact coefficient rings (arbitrary-precision
//! rationals and integers, residue rings Z/N); there is no floating point.
//! The crate provides:
//!
//! - truncated power series in one and several variables ([`qseries`],
//!   [`multiseries`]), Laurent polynomials ([`laurent`]), and sections with
//!   divisor bookkeeping ([`section`]);
//! - formal group laws, including the formal group of a Weierstrass cubic
//!   ([`fgl`]);
//! - rigid symmetric 2-cocycle checks on formal groups and the
//!   augmentation-ideal correspondence for finite groups ([`cocycle`],
//!   [`augideal`]);
//! - the Tate-curve theta function and theorem-of-the-cube witnesses
//!   ([`theta`], [`sigma`]);
//! - level-1 modular forms, the ring Z[c4, c6, Delta], and the index-24
//!   sublattice of weight 12 ([`modforms`]);
//! - the Witten genus on Pontryagin-number data ([`witten`]);
//! - the Atkin operator U_p and kernels of 1 - U_p at finite p-adic
//!   precision ([`atkin`]).

pub mod atkin;
pub mod augideal;
pub mod cocycle;
pub mod error;
pub mod fgl;
pub mod io;
pub mod laurent;
pub mod modforms;
pub mod multiseries;
pub mod qseries;
pub mod scalar;
pub mod section;
pub mod sigma;
pub mod snf;
pub mod theta;
pub mod witten;

pub use error::SeriesError;
pub use scalar::{CoeffRing, Int, Mod, Rat, Scalar};

/// One-variable q-expansion with exact rational coefficients.
pub type QSeriesQ = qseries::QSeries<Rat>;
/// One-variable q-expansion with integer coefficients.
pub type QSeriesZ = qseries::QSeries<Int>;
/// One-variable q-expansion over Z/N.
pub type QSeriesMod = qseries::QSeries<Mod>;

/// Multivariate series with exact rational coefficients.
pub type MultiSeriesQ = multiseries::MultiSeries<Rat>;
/// Multivariate series with integer coefficients.
pub type MultiSeriesZ = multiseries::MultiSeries<Int>;
/// Multivariate series over Z/N.
pub type MultiSeriesMod = multiseries::MultiSeries<Mod>;

/// z-expansion whose coefficients are q-expansions (both exact rational).
pub type ZQSeries = qseries::QSeries<qseries::QSeries<Rat>>;

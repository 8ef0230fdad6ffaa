//! Minimal surfaces in four-dimensional Euclidean space, built from
//! holomorphic data.
//!
//! A conformally immersed minimal surface x(u, v) in R^4 is encoded by the
//! isotropic curve Phi = x_u - i x_v, a quadruple of holomorphic functions
//! with Phi^2 = 0. This crate represents such data as truncated complex
//! Taylor series and provides, on top of the series arithmetic:
//!
//! * the four classical representation shapes built from a function pair and
//!   a scale factor, plus their canonical (normalized) variants
//!   ([`weierstrass`]),
//! * surface evaluation, fundamental forms, frames, and ambient motions
//!   ([`geometry`]),
//! * Gauss and normal curvature through both the intrinsic formulas and the
//!   closed forms in the generating data ([`curvature`]),
//! * reparameterization into canonical coordinates of first or second type
//!   ([`canonize`]),
//! * the R^3 pipeline, natural-equation residuals, the split/combine
//!   correspondence, and Mobius equivalence of generating pairs
//!   ([`correspond`]).
//!
//! The crate is `no_std` (it allocates through `alloc`); file formats, the
//! expression language, and the command-line driver live in the companion
//! `weier4` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod canonize;
pub mod correspond;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod series;
pub mod weierstrass;

pub use error::Error;
pub use series::{TaylorSeries, DEFAULT_ORDER};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Real transcendentals routed through `num_traits` (libm-backed) so the
/// crate builds without std; the inherent `f64` methods only exist when std
/// is linked.
pub(crate) mod real {
    pub(crate) fn sqrt(x: f64) -> f64 {
        num_traits::Float::sqrt(x)
    }

    pub(crate) fn cosh(x: f64) -> f64 {
        num_traits::Float::cosh(x)
    }

    pub(crate) fn round(x: f64) -> f64 {
        num_traits::Float::round(x)
    }

    pub(crate) fn ln(x: f64) -> f64 {
        num_traits::Float::ln(x)
    }
}

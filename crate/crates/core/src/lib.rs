//! Exact computation with finitely generated nilpotent groups given by
//! polycyclic presentations over ℤ.
//!
//! Generators are indexed from 0 in this crate. Periods use [`Period`], with
//! infinity encoded as `0` wherever an integer code is needed.

#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod bilinear;
pub mod deformation;
mod error;
pub mod fixtures;
pub mod linalg;
pub mod morphism;
pub mod pc;
pub mod section;
pub mod series;
pub mod subgroup;

pub use error::Error;
pub use num_bigint::BigInt;
pub use pc::{GroupElement, Period, Presentation, PresentationBuilder};
pub use subgroup::Subgroup;

pub type Result<T> = core::result::Result<T, Error>;

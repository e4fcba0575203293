//! Exact computational algebra for group rings of free groups acting on
//! hyperbolic spaces: a geometric replacement for the Euclidean algorithm.
//!
//! The crate provides
//! - free-group word arithmetic and two metric oracles (the Cayley tree and
//!   finite enlarged-generating-set balls) with exact half-integer distances,
//! - group-ring arithmetic over `F_p`, the rationals, and the integers,
//! - extremal graphs of families of elements and the reduction step that
//!   strictly shrinks diameters of dependent families,
//! - free bases for finitely generated ideals and submodules, factorization
//!   of invertible matrices into elementary and diagonal operations, and
//!   Bass descent over the integral group ring,
//! - a seeded audit harness exercising the geometric lemmas the reduction
//!   rests on.
//!
//! Every computation is exact; every basis or factorization comes with a
//! replayable transformation log.

pub mod audit;
pub mod bass;
pub mod error;
pub mod extremal;
pub mod kernel;
pub mod reduce;
pub mod ring;
pub mod scalar;
pub mod space;
pub mod words;

pub use error::{Error, Result};
pub use ring::{parse_element, parse_vector, ColorKey, RingElement, RingVector};
pub use scalar::{Domain, Scalar};
pub use space::{Point, Rat, Size, SpaceOracle};
pub use words::{Alphabet, Word};

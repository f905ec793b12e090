//! Exact-arithmetic toolkit for Kac-Moody flag combinatorics at truncated
//! depth: integrable highest-weight modules, thin/thick Demazure families,
//! the multigraded section ring with its Plücker quadrics and Demazure
//! ideals, and char-p Frobenius splittings of the truncated rings.

pub mod chars;
pub mod error;
pub mod families;
pub mod frobenius;
pub mod fword;
pub mod gcm;
pub mod linalg;
pub mod modules;
pub mod presets;
pub mod ring;
pub mod weyl;

pub use chars::{CharacterPoly, RootTable};
pub use error::{KmError, Result};
pub use families::{DemazureFamily, DemazureKind, Subspace};
pub use frobenius::{FpTruncation, SplittingCandidate};
pub use fword::FWord;
pub use gcm::{pairing, reflect, validate_gcm, Gcm, Weight};
pub use modules::{Module, ModuleVector};
pub use ring::RingTruncation;
pub use weyl::{bruhat_leq, canonicalize, enumerate, minimal_upper_bounds, WeylElement};

//! Exact computer algebra for noncommutative Kähler geometry.
//!
//! The crate is layered bottom-up:
//!
//! * [`qarith`]: exact scalars in `s = √q` and quantum integers.
//! * [`rewrite`]: presented algebras, normal forms and confluence checks.
//! * [`hopf`]: the quantum group `O_q(SU_2)`, its `U_q(sl_2)` pairing and actions, and the Haar state.
//! * [`peter_weyl`]: Haar-orthogonal matrix-coefficient blocks.
//! * [`exterior`]: the local exterior algebra of quantum projective space.
//! * [`kahler`]: Lefschetz, Hodge and metric operators on a graded space with a Kähler form.
//! * [`dirac`]: the Dolbeault complex of the Podleś sphere, its line-bundle twists and spectra.
//! * [`ledger`]: the pinned conventions and their hash.

pub mod dirac;
pub mod error;
pub mod exterior;
pub mod hopf;
pub mod kahler;
pub mod ledger;
pub mod linalg;
pub mod peter_weyl;
pub mod qarith;
pub mod rewrite;

pub use error::{Error, Result};

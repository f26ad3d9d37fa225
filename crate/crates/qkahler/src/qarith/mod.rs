//! Exact scalars: Laurent polynomials in `s = √q`, rational functions, exact quadratic extensions,
//! and quantum combinatorics.

mod combinat;
mod eval;
mod field;
pub mod gauss;
mod poly;
mod qscalar;
mod quad;
mod ratfunc;

pub use combinat::{altint, qbinom, qfact, qfact_in, qint, qint_in, qint_signed, AltVariant};
pub use eval::{evaluate, parse_rational, EvalMode, EvalPoint, EvalValue, Q0};
pub use field::{Ctx, Field, C64, FLOAT_TOL};
pub use gauss::Gauss;
pub use poly::Poly;
pub use qscalar::QScalar;
pub use quad::{rational_sqrt, QuadExact};
pub use ratfunc::RatFunc;

//! Truncated formal-series calculus for the infinitesimal braid algebra.
//!
//! The crate is organised bottom-up:
//!
//! * [`freealg`]: graded series over a free associative algebra with exact
//!   rational coefficients, shuffle coproduct, antipode and `exp`/`log`.
//! * [`freelie`]: Lyndon bases, bracket expansion, primitive and group-like
//!   tests, Witt dimension counts.
//! * [`kohno`]: good-word normal forms in the enveloping algebra of the
//!   Kohno Lie algebra, projections and the block factorization.
//! * [`groupcal`]: BCH products, group inverses, ordered exponentials.
//! * [`analysis`]: per-degree norms, quotient norms by linear programming
//!   and growth diagnostics.
//! * [`represent`]: mixed-Casimir matrix representations.
//! * [`poisson`]: exact Poisson brackets for the `so(3)^n` and `gl(m)*`
//!   Hamiltonians.
//! * [`kzflow`]: numerical monodromy of the KZ connection and Hamiltonian
//!   flows on products of spheres.
//! * [`cli`]: the command-line driver used by the `liebraid` binary.

pub mod analysis;
pub mod cli;
pub mod coeff;
pub mod error;
pub mod freealg;
pub mod freelie;
pub mod groupcal;
pub mod kohno;
pub mod kzflow;
pub mod poisson;
pub mod represent;

pub use coeff::Q;
pub use error::{AlgebraError, Result};
pub use freealg::{Alphabet, FreeAlgebra, Letter, Series, SeriesAlgebra, TensorSeries, Word};
pub use freelie::LieElement;
pub use kohno::KohnoAlgebra;

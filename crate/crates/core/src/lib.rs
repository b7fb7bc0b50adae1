//! Exact lambda-bracket calculus for classical affine, finite and fractional
//! W-superalgebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalar`]: Laurent polynomials in the level `k` with rational coefficients.
//! * [`diffpoly`]: normal-form supersymmetric differential polynomials.
//! * [`superalgebra`]: Lie superalgebras from structure constants, built-in examples.
//! * [`lambda`]: lambda-brackets extended by sesquilinearity and Leibniz rules.
//! * [`brst`]: the classical BRST complex and its identities.
//! * [`wred`]: Hamiltonian reduction, W-membership, generators, brackets.
//! * [`zhufin`]: finitization to classical finite W-superalgebras.
//! * [`fractional`]: truncated loop algebras and fractional W-superalgebras.
//! * [`props`]: randomized property suites.

pub mod brst;
pub mod diffpoly;
pub mod fractional;
pub mod lambda;
pub mod linalg;
pub mod props;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod superalgebra;
pub mod table;
pub mod text;
pub mod weight;
pub mod wred;
pub mod zhufin;

pub use diffpoly::{DiffPoly, DiffSymbol, GeneratorSpace, Monomial, Parity};
pub use lambda::{LambdaBracket, LambdaPoly};
pub use scalar::{Q, Scalar};
pub use superalgebra::{Elem, LieSuperalgebra};
pub use weight::HalfInt;

//! Operator-algebraic analysis of quadratic (non-)Hermitian Hamiltonians.
//!
//! A quadratic Hamiltonian H in K bosonic modes acts on the span of the
//! dynamical variables O = (x_1..x_K, p_1..p_K) by commutation:
//! [H, O_i] = Σ_j H_ji O_j. The crate builds that adjoint matrix exactly
//! from the canonical commutation relations, then studies its spectrum,
//! symmetries, ladder operators and Heisenberg dynamics.
//!
//! Modules:
//! - [`algebra`]: exact polynomial operator algebra over x's and p's
//! - [`adjoint`]: the 2K x 2K adjoint matrix and its U-structure
//! - [`spectrum`]: eigen-analysis, classification, Jordan forms, ladders
//! - [`symmetry`]: unitary/antiunitary symmetry checks and exactness
//! - [`dynamics`]: propagators e^{itH} and ODE consistency checks
//! - [`models`]: the built-in model catalog with closed-form spectra
//! - [`model_file`]: the JSON model-file format
//! - [`cli`]: engines behind the command-line interface

pub mod adjoint;
pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod model_file;
pub mod models;
pub mod spectrum;
pub mod symmetry;

pub use adjoint::{build_adjoint, build_u, AdjointRep, GammaMatrix};
pub use algebra::{Monomial, OperatorPoly};
pub use models::{instantiate, ModelKind, ModelSpec};
pub use spectrum::{eigen, Classification, SpectrumReport};

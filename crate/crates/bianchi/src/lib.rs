//! Numerical automorphic functions on hyperbolic 3-space for the Bianchi
//! groups `PSL2(O_K)` over the class-number-one imaginary quadratic fields.
//!
//! The crate computes Eisenstein series, Niebur-Poincare series, and the
//! resolvent (Green's) kernel both by direct truncated summation and through
//! their Fourier expansions at the cusp, together with the arithmetic layer
//! behind the Fourier coefficients (Kloosterman sums over `O_K`, scattering
//! sums, residue rings) and the special-function kernel (Bessel I/J/K of real
//! order, adaptive quadrature, a machine-checked identity corpus). On top of
//! that sits the Kronecker-limit layer: the Asai eta function, the
//! `log|j(tau_1)-j(tau_2)|` analogue on `H^3`, and a Monte Carlo verifier for
//! the Jensen-Rohrlich mean-value formula on `PSL2(Z[i])\H^3`.
//!
//! Start with the `examples/` directory for runnable tours of each layer, or
//! the `bianchi` binary for the command-line interface.

pub mod arith;
pub mod cli;
pub mod field;
pub mod geom;
pub mod jensen;
pub mod series;
pub mod special;

pub use field::{make_field, AlgInt, DualPoint, FieldContext};

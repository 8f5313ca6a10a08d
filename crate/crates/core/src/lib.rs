//! Operad calculus on dense multilinear operations.
//!
//! Operations of the endomorphism and coendomorphism operads over a
//! finite-dimensional space are stored as dense coefficient tensors. On top of
//! partial composition the crate builds the cup product, braces, the
//! Gerstenhaber bracket, the coboundary operator and its cohomology, and the
//! operadic Lax equation with its harmonic-oscillator example.

pub mod algebras;
pub mod braces;
pub mod coboundary;
pub mod dynamics;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod op;
pub mod oscillator;
pub mod rational;
pub mod scalar;
pub mod sign;
pub mod verify;

pub use algebras::AlgebraSpec;
pub use braces::{bracket, cup, getzler_associator, mu_squared, tetrabrace, total_compose, tribrace, BinaryMu};
pub use coboundary::{right_adjoint_action, CoboundaryContext};
pub use error::{OperadError, Result};
pub use op::{apply, partial_compose, MultiOp, Variance};
pub use rational::Rational;
pub use scalar::{Backend, Scalar};
pub use sign::{Degree, Sign};

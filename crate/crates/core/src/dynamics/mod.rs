//! Operadic evolution and Lax equations, integrated with fixed-step RK4.
//!
//! For a constant generator `M` of degree 1 the Lax flow `dL/dt = M•L - L•M`
//! is solved in closed form by conjugation, `L(t) = e^{tM} ∘ L0 ∘ (e^{-tM})^{⊗n}`,
//! which is what the integrator is checked against.

mod expm;
mod integrate;
mod observe;
mod system;

pub use expm::expm;
pub use integrate::{integrate, integrate_collect, TrajectorySample};
pub use observe::{CsvWriter, ObsContext, Observer, ObserverRegistry};
pub use system::{ClassicalState, Generator, LaxSystem, OpFile, SystemFile, VectorField};

use crate::braces::{bracket, mu_squared, total_compose, BinaryMu};
use crate::error::{OperadError, Result};
use crate::linalg::Matrix;
use crate::op::{transform, MultiOp, Variance};
use crate::scalar::Scalar;

fn require_generator<S: Scalar>(m: &MultiOp<S>) -> Result<()> {
    if m.deg() != 1 {
        return Err(OperadError::DegreeMismatch { expected: 1, got: m.deg() });
    }
    Ok(())
}

/// `M•L - L•M` for a generator of degree 1, where the bracket sign is always `+1`.
pub fn lax_rhs<S: Scalar>(m: &MultiOp<S>, l: &MultiOp<S>) -> Result<MultiOp<S>> {
    require_generator(m)?;
    m.check_compatible(l)?;
    total_compose(m, l)?.sub(&total_compose(l, m)?)
}

/// `[H, f] = H•f - (-1)^{|H||f|} f•H` for an operadic Hamiltonian of any degree.
pub fn evolution_rhs<S: Scalar>(h: &MultiOp<S>, f: &MultiOp<S>) -> Result<MultiOp<S>> {
    bracket(h, f)
}

/// The generator as a square matrix (row = output index).
pub fn as_matrix(m: &MultiOp<f64>) -> Result<Matrix<f64>> {
    require_generator(m)?;
    Ok(Matrix::from_rows(m.dim(), m.dim(), m.coeffs().to_vec()))
}

/// Closed-form solution of the Lax equation with constant `M`.
pub fn conjugation_oracle(m: &MultiOp<f64>, l0: &MultiOp<f64>, t: f64) -> Result<MultiOp<f64>> {
    m.check_compatible(l0)?;
    if l0.variance() != Variance::Endo {
        return Err(OperadError::VarianceMismatch { left: l0.variance(), right: Variance::Endo });
    }
    if t == 0.0 {
        return Ok(l0.clone());
    }
    let tm = as_matrix(&m.scale(&t))?;
    let neg = Matrix::from_rows(tm.rows(), tm.cols(), tm.data().iter().map(|x| -x).collect());
    let fwd = expm(&tm)?;
    let back = expm(&neg)?;
    let out = transform(l0, fwd.data(), back.data())?;
    if !out.all_finite() {
        return Err(OperadError::NonFinite { t });
    }
    Ok(out)
}

/// `tr(L^k)` for a degree-1 operation viewed as a matrix.
pub fn trace_power(l: &MultiOp<f64>, k: u32) -> Result<f64> {
    let m = as_matrix(l)?;
    let mut p = Matrix::<f64>::identity(m.rows());
    for _ in 0..k {
        p = p.mul(&m);
    }
    Ok((0..p.rows()).map(|i| p.get(i, i)).sum())
}

/// Max-norm of the micro-associator of a binary operation.
pub fn monitor_associator(l: &MultiOp<f64>) -> Result<f64> {
    if l.deg() != 2 {
        return Err(OperadError::DegreeMismatch { expected: 2, got: l.deg() });
    }
    Ok(mu_squared(&BinaryMu::new(l.clone())?)?.norm())
}

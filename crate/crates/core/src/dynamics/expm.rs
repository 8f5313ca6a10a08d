//! Matrix exponential for small dense matrices.

use crate::error::{OperadError, Result};
use crate::linalg::Matrix;

const MAX_TERMS: usize = 60;

fn max_abs(m: &Matrix<f64>) -> f64 {
    m.data().iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn add_scaled(acc: &mut Matrix<f64>, term: &Matrix<f64>) {
    let n = acc.cols();
    for r in 0..acc.rows() {
        for c in 0..n {
            let v = acc.get(r, c) + term.get(r, c);
            acc.set(r, c, v);
        }
    }
}

/// `exp(a)` by scaling and squaring a truncated Taylor series.
///
/// The argument is halved until its max-norm is at most 1/2; the series is then
/// summed until the next term drops below `1e-18` relative to the partial sum.
pub fn expm(a: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = a.rows();
    if n != a.cols() {
        return Err(OperadError::ShapeMismatch(format!("expm of a {}x{} matrix", a.rows(), a.cols())));
    }
    if a.data().iter().any(|x| !x.is_finite()) {
        return Err(OperadError::NonFinite { t: f64::NAN });
    }
    let norm = max_abs(a) * n as f64;
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = Matrix::from_rows(n, n, a.data().iter().map(|x| x * scale).collect());

    let mut sum = Matrix::<f64>::identity(n);
    let mut term = Matrix::<f64>::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.mul(&scaled);
        let inv = 1.0 / k as f64;
        term = Matrix::from_rows(n, n, term.data().iter().map(|x| x * inv).collect());
        add_scaled(&mut sum, &term);
        if max_abs(&term) <= 1e-18 * max_abs(&sum).max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    if sum.data().iter().any(|x| !x.is_finite()) {
        return Err(OperadError::NonFinite { t: f64::NAN });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix<f64>, b: &[f64], tol: f64) -> bool {
        a.data().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn zero_gives_identity() {
        let e = expm(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(e, Matrix::identity(3));
    }

    #[test]
    fn diagonal() {
        let a = Matrix::from_rows(2, 2, vec![1.0, 0.0, 0.0, -2.0]);
        let e = expm(&a).unwrap();
        assert!(close(&e, &[1f64.exp(), 0.0, 0.0, (-2f64).exp()], 1e-14));
    }

    #[test]
    fn rotation_by_pi() {
        let pi = std::f64::consts::PI;
        let a = Matrix::from_rows(2, 2, vec![0.0, -pi, pi, 0.0]);
        assert!(close(&expm(&a).unwrap(), &[-1.0, 0.0, 0.0, -1.0], 1e-13));
    }

    #[test]
    fn nilpotent_is_exact() {
        let a = Matrix::from_rows(2, 2, vec![0.0, 3.0, 0.0, 0.0]);
        assert!(close(&expm(&a).unwrap(), &[1.0, 3.0, 0.0, 1.0], 1e-14));
    }

    #[test]
    fn inverse_pair() {
        let a = Matrix::from_rows(3, 3, vec![0.3, -1.2, 0.5, 2.0, 0.1, -0.7, 0.4, 0.9, -0.2]);
        let neg = Matrix::from_rows(3, 3, a.data().iter().map(|x| -x).collect());
        let prod = expm(&a).unwrap().mul(&expm(&neg).unwrap());
        assert!(close(&prod, Matrix::<f64>::identity(3).data(), 1e-13));
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(expm(&Matrix::zeros(2, 3)).is_err());
        let a = Matrix::from_rows(1, 1, vec![f64::NAN]);
        assert!(matches!(expm(&a), Err(OperadError::NonFinite { .. })));
    }
}

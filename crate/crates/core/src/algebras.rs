//! Structure-constant files and a small catalog of associative algebras.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::braces::{mu_squared, BinaryMu};
use crate::error::{OperadError, Result};
use crate::op::{entry_count, transform, MultiOp, Variance};
use crate::rational::Rational;

/// A binary multiplication on a `dim`-dimensional space. `mu[a*d*d + b1*d + b2]`
/// is the coefficient of `e_a` in `e_b1 · e_b2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub mu: Vec<Rational>,
}

impl AlgebraSpec {
    pub fn new(name: impl Into<String>, dim: usize, mu: Vec<Rational>) -> Result<Self> {
        let spec = AlgebraSpec { name: name.into(), dim, mu };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(OperadError::Parse("dim must be positive".into()));
        }
        let expected = entry_count(self.dim, 2).map_err(|e| OperadError::Parse(e.to_string()))?;
        if self.mu.len() != expected {
            return Err(OperadError::Parse(format!(
                "dim {} needs {expected} structure constants, got {}",
                self.dim,
                self.mu.len()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AlgebraSpec = serde_json::from_str(text).map_err(|e| OperadError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical text form (pretty JSON, trailing newline). Canonical inputs round-trip byte for byte.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("algebra spec serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| OperadError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn op(&self) -> MultiOp<Rational> {
        MultiOp::new(self.dim, 2, Variance::Endo, self.mu.clone()).expect("validated spec")
    }

    pub fn binary_mu(&self) -> BinaryMu<Rational> {
        BinaryMu::new(self.op()).expect("degree 2")
    }

    pub fn associator_norm(&self) -> Rational {
        mu_squared(&self.binary_mu()).expect("compatible shapes").norm()
    }

    pub fn is_associative(&self) -> bool {
        self.associator_norm().is_zero()
    }

    fn from_products(name: &str, dim: usize, product: impl Fn(usize, usize) -> Vec<(usize, i64)>) -> Self {
        let mut mu = vec![Rational::ZERO; dim * dim * dim];
        for b1 in 0..dim {
            for b2 in 0..dim {
                for (a, v) in product(b1, b2) {
                    mu[a * dim * dim + b1 * dim + b2] = Rational::from_integer(v);
                }
            }
        }
        AlgebraSpec { name: name.into(), dim, mu }
    }

    /// The ground field itself.
    pub fn ground_field() -> Self {
        Self::from_products("ground field", 1, |_, _| vec![(0, 1)])
    }

    /// `K[ε]/(ε²)` in the basis `(1, ε)`.
    pub fn dual_numbers() -> Self {
        Self::truncated_polynomials(2)
    }

    /// `K[x]/(x^dim)` in the monomial basis.
    pub fn truncated_polynomials(dim: usize) -> Self {
        let name = if dim == 2 { "dual numbers".to_string() } else { format!("K[x]/(x^{dim})") };
        Self::from_products(&name, dim, |i, j| if i + j < dim { vec![(i + j, 1)] } else { vec![] })
    }

    /// `K^dim` with the coordinatewise product.
    pub fn coordinatewise(dim: usize) -> Self {
        Self::from_products(&format!("K^{dim}"), dim, |i, j| if i == j { vec![(i, 1)] } else { vec![] })
    }

    /// `n×n` matrices in the basis `E_ij` ordered `i*n + j`.
    pub fn matrix_algebra(n: usize) -> Self {
        Self::from_products(&format!("{n}x{n} matrices"), n * n, |x, y| {
            let (i, j) = (x / n, x % n);
            let (k, l) = (y / n, y % n);
            if j == k {
                vec![(i * n + l, 1)]
            } else {
                vec![]
            }
        })
    }

    /// Upper triangular 2×2 matrices in the basis `(E11, E12, E22)`.
    pub fn upper_triangular() -> Self {
        let pairs = [(0usize, 0usize), (0, 1), (1, 1)];
        Self::from_products("upper triangular 2x2", 3, |x, y| {
            let (i, j) = pairs[x];
            let (k, l) = pairs[y];
            if j == k {
                vec![(pairs.iter().position(|&p| p == (i, l)).unwrap(), 1)]
            } else {
                vec![]
            }
        })
    }

    /// Associative algebras of the given dimension available in the catalog.
    pub fn associative_catalog(dim: usize) -> Vec<AlgebraSpec> {
        match dim {
            1 => vec![Self::ground_field()],
            2 => vec![Self::dual_numbers(), Self::coordinatewise(2)],
            3 => vec![Self::truncated_polynomials(3), Self::coordinatewise(3), Self::upper_triangular()],
            4 => vec![Self::matrix_algebra(2), Self::truncated_polynomials(4), Self::coordinatewise(4)],
            d => vec![Self::truncated_polynomials(d), Self::coordinatewise(d)],
        }
    }

    /// Same algebra in the basis `P e_i`: `μ'(x, y) = P μ(P⁻¹x, P⁻¹y)`.
    pub fn change_basis(&self, p: &[Rational], p_inv: &[Rational]) -> Result<Self> {
        let mu = transform(&self.op(), p, p_inv)?.into_coeffs();
        Ok(AlgebraSpec { name: self.name.clone(), dim: self.dim, mu })
    }

    /// Random unimodular change of basis; integer structure constants stay integral.
    pub fn scrambled<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Self> {
        let (p, p_inv) = random_unimodular(self.dim, rng);
        self.change_basis(&p, &p_inv)
    }
}

/// A random product of elementary integer matrices together with its inverse.
pub fn random_unimodular<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (Vec<Rational>, Vec<Rational>) {
    let mut p = identity(d);
    let mut p_inv = identity(d);
    if d < 2 {
        return (p, p_inv);
    }
    for _ in 0..2 * d {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(-2i64..=2);
        if k == 0 {
            continue;
        }
        // P <- (I + k E_ij) P, P⁻¹ <- P⁻¹ (I - k E_ij)
        for c in 0..d {
            let v = p[i * d + c].clone() + Rational::from_integer(k) * p[j * d + c].clone();
            p[i * d + c] = v;
        }
        for r in 0..d {
            let v = p_inv[r * d + j].clone() - Rational::from_integer(k) * p_inv[r * d + i].clone();
            p_inv[r * d + j] = v;
        }
    }
    (p, p_inv)
}

fn identity(d: usize) -> Vec<Rational> {
    (0..d * d).map(|k| if k / d == k % d { Rational::ONE } else { Rational::ZERO }).collect()
}

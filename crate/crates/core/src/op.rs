//! Dense homogeneous operations of the endomorphism and coendomorphism operads.
//!
//! An operation of degree `n` on a `d`-dimensional space stores `d^(n+1)`
//! coefficients. The single index (the output of an endomorphism, the input of a
//! coendomorphism) is most significant, followed by the `n` multi-index slots in
//! order: entry `f^a_{b1..bn}` lives at `a*d^n + sum_k b_k*d^(n-k)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result, MAX_ENTRIES};
use crate::scalar::Scalar;
use crate::sign::{Degree, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    /// `Hom(L^{⊗n}, L)`
    Endo,
    /// `Hom(L, L^{⊗n})`
    Coendo,
}

/// Number of coefficients of a degree-`degree` operation on a `dim`-dimensional space.
pub fn entry_count(dim: usize, degree: usize) -> Result<usize> {
    let exp = u32::try_from(degree + 1).map_err(|_| OperadError::SizeCap { dim, degree })?;
    match dim.checked_pow(exp) {
        Some(n) if n <= MAX_ENTRIES => Ok(n),
        _ => Err(OperadError::SizeCap { dim, degree }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiOp<S> {
    dim: usize,
    degree: Degree,
    variance: Variance,
    coeffs: Vec<S>,
}

impl<S: Scalar> MultiOp<S> {
    pub fn new(dim: usize, degree: usize, variance: Variance, coeffs: Vec<S>) -> Result<Self> {
        if dim == 0 {
            return Err(OperadError::ShapeMismatch("dimension must be positive".into()));
        }
        let len = entry_count(dim, degree)?;
        if coeffs.len() != len {
            return Err(OperadError::ShapeMismatch(format!(
                "degree {degree} on dimension {dim} needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(MultiOp { dim, degree: Degree(degree), variance, coeffs })
    }

    pub fn zero(dim: usize, degree: usize, variance: Variance) -> Result<Self> {
        if dim == 0 {
            return Err(OperadError::ShapeMismatch("dimension must be positive".into()));
        }
        let len = entry_count(dim, degree)?;
        Ok(MultiOp { dim, degree: Degree(degree), variance, coeffs: vec![S::zero(); len] })
    }

    /// The operadic unit: the identity map, Kronecker delta coefficients.
    pub fn identity(dim: usize, variance: Variance) -> Result<Self> {
        let mut op = Self::zero(dim, 1, variance)?;
        for a in 0..dim {
            op.coeffs[a * dim + a] = S::one();
        }
        Ok(op)
    }

    /// Deterministic random operation for a fixed seed; see [`Scalar::sample`].
    pub fn random(dim: usize, degree: usize, variance: Variance, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng, dim, degree, variance)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        degree: usize,
        variance: Variance,
    ) -> Result<Self> {
        let len = entry_count(dim, degree)?;
        let coeffs = (0..len).map(|_| S::sample(rng)).collect();
        Self::new(dim, degree, variance, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Shorthand for `degree().get()`.
    pub fn deg(&self) -> usize {
        self.degree.0
    }

    /// Reduced degree `|f| = deg f - 1`.
    pub fn reduced(&self) -> i64 {
        self.degree.reduced()
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient `f^a_{b1..bn}` (or `f_a^{b1..bn}` for coendomorphisms).
    pub fn get(&self, a: usize, slots: &[usize]) -> &S {
        debug_assert_eq!(slots.len(), self.deg());
        let idx = slots.iter().fold(a, |acc, &b| acc * self.dim + b);
        &self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(S::is_zero)
    }

    /// All coefficients within `tol` of zero (exactly zero in the exact backend).
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    /// Maximum absolute coefficient.
    pub fn norm(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |m, c| {
            let a = c.abs();
            if a > m {
                a
            } else {
                m
            }
        })
    }

    /// Same dimension and variance (degrees may differ).
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(OperadError::DimMismatch { left: self.dim, right: other.dim });
        }
        if self.variance != other.variance {
            return Err(OperadError::VarianceMismatch { left: self.variance, right: other.variance });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        self.check_compatible(other)
            .map_err(|e| OperadError::ShapeMismatch(e.to_string()))?;
        if self.degree != other.degree {
            return Err(OperadError::ShapeMismatch(format!(
                "degree {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scale(&self, s: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * s.clone()).collect();
        self.with_coeffs(coeffs)
    }

    pub fn signed(self, sign: Sign) -> Self {
        match sign {
            Sign::Plus => self,
            Sign::Minus => -self,
        }
    }

    /// `self + sign * other`, accumulated in place.
    pub fn add_signed(&mut self, sign: Sign, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            let cur = std::mem::replace(a, S::zero());
            *a = match sign {
                Sign::Plus => cur + b.clone(),
                Sign::Minus => cur - b.clone(),
            };
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<S>) -> Self {
        MultiOp { dim: self.dim, degree: self.degree, variance: self.variance, coeffs }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiOp<T> {
        MultiOp {
            dim: self.dim,
            degree: self.degree,
            variance: self.variance,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs.iter().all(S::is_finite)
    }
}

impl<S: Scalar> std::ops::Neg for MultiOp<S> {
    type Output = MultiOp<S>;

    fn neg(mut self) -> MultiOp<S> {
        for c in &mut self.coeffs {
            *c = -std::mem::replace(c, S::zero());
        }
        self
    }
}

/// Partial composition `f ∘_i g` of the endomorphism (or coendomorphism) operad.
///
/// Endo: `(f ∘_i g)(x..) = (-1)^{i|g|} f(x_1..x_i, g(x_{i+1}..x_{i+n}), ..)`.
/// Coendo: `(-1)^{i|g|} (1^{⊗i} ⊗ g ⊗ 1^{⊗(|f|-i)}) ∘ f`. In coordinates both contract
/// the single index of `g` into slot `i` of `f`, so they share one kernel.
pub fn partial_compose<S: Scalar>(f: &MultiOp<S>, g: &MultiOp<S>, i: usize) -> Result<MultiOp<S>> {
    let m = f.deg();
    let n = g.deg();
    if i >= m {
        return Err(OperadError::IndexOutOfRange { index: i, degree: m });
    }
    f.check_compatible(g)?;
    let d = f.dim;
    let r = m + n - 1;
    let mut out: MultiOp<S> = MultiOp::zero(d, r, f.variance)?;
    let sign = Sign::pow(i as i64 * g.reduced());

    let pre_len = d.pow(i as u32);
    let mid_len = d.pow(n as u32);
    let suf_len = d.pow((m - 1 - i) as u32);
    let f_out_stride = d.pow(m as u32);
    let f_pre_stride = d.pow((m - i) as u32);
    let out_out_stride = d.pow(r as u32);
    let out_pre_stride = mid_len * suf_len;

    for a in 0..d {
        for pre in 0..pre_len {
            let f_base = a * f_out_stride + pre * f_pre_stride;
            let o_base = a * out_out_stride + pre * out_pre_stride;
            for mid in 0..mid_len {
                for suf in 0..suf_len {
                    let acc = &mut out.coeffs[o_base + mid * suf_len + suf];
                    for c in 0..d {
                        let fv = &f.coeffs[f_base + c * suf_len + suf];
                        if fv.is_zero() {
                            continue;
                        }
                        acc.add_product(fv, &g.coeffs[c * mid_len + mid]);
                    }
                }
            }
        }
    }
    Ok(out.signed(sign))
}

/// Evaluate an endomorphism on `n` vectors: `Σ f^a_{b..} Π args[k]^{b_k}`.
pub fn apply<S: Scalar>(f: &MultiOp<S>, args: &[Vec<S>]) -> Result<Vec<S>> {
    if f.variance != Variance::Endo {
        return Err(OperadError::VarianceMismatch { left: f.variance, right: Variance::Endo });
    }
    if args.len() != f.deg() {
        return Err(OperadError::ArityMismatch { expected: f.deg(), got: args.len() });
    }
    let d = f.dim;
    if let Some(v) = args.iter().find(|v| v.len() != d) {
        return Err(OperadError::DimMismatch { left: d, right: v.len() });
    }
    // Contract the last slot first, peeling one input at a time.
    let mut cur = f.coeffs.clone();
    for v in args.iter().rev() {
        cur = cur
            .chunks(d)
            .map(|chunk| {
                let mut acc = S::zero();
                for (c, x) in chunk.iter().zip(v) {
                    acc.add_product(c, x);
                }
                acc
            })
            .collect();
    }
    Ok(cur)
}

/// Evaluate a coendomorphism on a vector, returning the dense tensor in `L^{⊗n}`.
pub fn coapply<S: Scalar>(f: &MultiOp<S>, v: &[S]) -> Result<Vec<S>> {
    if f.variance != Variance::Coendo {
        return Err(OperadError::VarianceMismatch { left: f.variance, right: Variance::Coendo });
    }
    let d = f.dim;
    if v.len() != d {
        return Err(OperadError::DimMismatch { left: d, right: v.len() });
    }
    let block = f.coeffs.len() / d;
    let mut out = vec![S::zero(); block];
    for (a, x) in v.iter().enumerate() {
        for (o, c) in out.iter_mut().zip(&f.coeffs[a * block..(a + 1) * block]) {
            o.add_product(c, x);
        }
    }
    Ok(out)
}

/// Apply a `d×d` matrix (row-major) along one tensor mode of a flat tensor
/// whose modes all have length `d`. `mode` 0 is most significant.
pub fn mode_product<S: Scalar>(tensor: &[S], d: usize, modes: usize, mode: usize, matrix: &[S]) -> Vec<S> {
    debug_assert_eq!(matrix.len(), d * d);
    let inner = d.pow((modes - 1 - mode) as u32);
    let outer = tensor.len() / (inner * d);
    let mut out = vec![S::zero(); tensor.len()];
    for o in 0..outer {
        for r in 0..d {
            for c in 0..d {
                let m = &matrix[r * d + c];
                if m.is_zero() {
                    continue;
                }
                for k in 0..inner {
                    let src = &tensor[(o * d + c) * inner + k];
                    out[(o * d + r) * inner + k].add_product(m, src);
                }
            }
        }
    }
    out
}

/// Multilinear change of frame for an endomorphism: `A ∘ f ∘ (B ⊗ .. ⊗ B)`,
/// i.e. `A` acts on the output index and `B` on every input index.
pub fn transform<S: Scalar>(f: &MultiOp<S>, a: &[S], b: &[S]) -> Result<MultiOp<S>> {
    let d = f.dim;
    if a.len() != d * d || b.len() != d * d {
        return Err(OperadError::ShapeMismatch("transform matrices must be d×d".into()));
    }
    let modes = f.deg() + 1;
    let mut t = mode_product(&f.coeffs, d, modes, 0, a);
    // Input slot k carries coefficient index b_k; f(.., B x, ..) contracts with B's row index.
    let bt: Vec<S> = (0..d * d).map(|idx| b[(idx % d) * d + idx / d].clone()).collect();
    for k in 1..modes {
        t = mode_product(&t, d, modes, k, &bt);
    }
    MultiOp::new(d, f.deg(), f.variance, t)
}

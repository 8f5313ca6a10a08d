//! Cohomology `H^n = Ker(∂: C^n → C^{n+1}) / Im(∂: C^{n-1} → C^n)` by exact linear algebra.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::AlgebraSpec;
use crate::coboundary::CoboundaryContext;
use crate::error::{OperadError, Result};
use crate::linalg::Matrix;
use crate::op::{entry_count, MultiOp};
use crate::rational::Rational;

type Q = Rational;

/// `∂: C^n → C^{n+1}` in the elementary-tensor basis: column `c` is `∂(e_c)`.
#[derive(Debug, Clone)]
pub struct CoboundaryMatrix {
    pub n: usize,
    pub matrix: Matrix<Q>,
    /// Whether `μ² = 0`; without it `∂² ≠ 0` and cohomology is not defined.
    pub associative: bool,
}

impl CoboundaryMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

pub fn coboundary_matrix(ctx: &CoboundaryContext<Q>, n: usize) -> Result<CoboundaryMatrix> {
    let d = ctx.dim();
    let cols = entry_count(d, n)?;
    let rows = entry_count(d, n + 1)?;
    let variance = ctx.variance();
    let columns = (0..cols)
        .into_par_iter()
        .map(|c| {
            let mut basis = vec![Q::ZERO; cols];
            basis[c] = Q::ONE;
            let e = MultiOp::new(d, n, variance, basis)?;
            Ok(ctx.coboundary(&e)?.into_coeffs())
        })
        .collect::<Result<Vec<_>>>()?;
    let associative = ctx.mu_squared()?.is_zero();
    Ok(CoboundaryMatrix { n, matrix: Matrix::from_columns(rows, columns), associative })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiRow {
    pub n: usize,
    pub dim_cochains: usize,
    /// Rank of `∂` restricted to `C^n`.
    pub rank: usize,
    pub dim_kernel: usize,
    pub dim_cohomology: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub algebra: String,
    pub dim: usize,
    pub rows: Vec<BettiRow>,
}

impl BettiTable {
    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.dim_cohomology).collect()
    }
}

/// Default top degree: keeps the largest coboundary matrix near `256×1024`.
pub fn default_max_degree(dim: usize) -> usize {
    match dim {
        0..=2 => 4,
        3 => 3,
        _ => 2,
    }
}

pub fn betti_table(spec: &AlgebraSpec, n_max: usize) -> Result<BettiTable> {
    let norm = spec.associator_norm();
    if !norm.is_zero() {
        return Err(OperadError::NotAssociative { norm: norm.to_string() });
    }
    let ctx = CoboundaryContext::new(spec.binary_mu())?;
    // Validate sizes up front so no work is done on an oversize request.
    entry_count(spec.dim, n_max + 1)?;
    let ranks = (0..=n_max)
        .into_par_iter()
        .map(|n| Ok(coboundary_matrix(&ctx, n)?.matrix.rank()))
        .collect::<Result<Vec<usize>>>()?;
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut prev_rank = 0;
    for (n, &rank) in ranks.iter().enumerate() {
        let dim_cochains = entry_count(spec.dim, n)?;
        let dim_kernel = dim_cochains - rank;
        rows.push(BettiRow { n, dim_cochains, rank, dim_kernel, dim_cohomology: dim_kernel - prev_rank });
        prev_rank = rank;
    }
    Ok(BettiTable { algebra: spec.name.clone(), dim: spec.dim, rows })
}

/// Caches coboundary matrices and cocycle bases of a fixed context, per degree.
pub struct CochainComplex {
    ctx: CoboundaryContext<Q>,
    matrices: BTreeMap<usize, CoboundaryMatrix>,
    cocycles: BTreeMap<usize, Vec<Vec<Q>>>,
}

impl CochainComplex {
    /// Requires `μ² = 0`.
    pub fn new(ctx: CoboundaryContext<Q>) -> Result<Self> {
        let norm = ctx.mu_squared()?.norm();
        if !norm.is_zero() {
            return Err(OperadError::NotAssociative { norm: norm.to_string() });
        }
        Ok(CochainComplex { ctx, matrices: BTreeMap::new(), cocycles: BTreeMap::new() })
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self> {
        Self::new(CoboundaryContext::new(spec.binary_mu())?)
    }

    pub fn context(&self) -> &CoboundaryContext<Q> {
        &self.ctx
    }

    pub fn matrix(&mut self, n: usize) -> Result<&CoboundaryMatrix> {
        if !self.matrices.contains_key(&n) {
            let m = coboundary_matrix(&self.ctx, n)?;
            self.matrices.insert(n, m);
        }
        Ok(&self.matrices[&n])
    }

    /// Some `g` with `∂g = f`, or `None` when `f ∉ Im ∂`.
    pub fn preimage(&mut self, f: &MultiOp<Q>) -> Result<Option<MultiOp<Q>>> {
        if f.deg() == 0 {
            return Err(OperadError::DegreeUnderflow(-1));
        }
        self.ctx.mu().op().check_compatible(f)?;
        let n = f.deg() - 1;
        let (d, variance) = (self.ctx.dim(), self.ctx.variance());
        let m = self.matrix(n)?;
        match m.matrix.solve(f.coeffs()) {
            Some(g) => Ok(Some(MultiOp::new(d, n, variance, g)?)),
            None => Ok(None),
        }
    }

    /// Basis of `Ker(∂: C^n → C^{n+1})`.
    pub fn cocycle_basis(&mut self, n: usize) -> Result<&[Vec<Q>]> {
        if !self.cocycles.contains_key(&n) {
            let basis = self.matrix(n)?.matrix.kernel();
            self.cocycles.insert(n, basis);
        }
        Ok(&self.cocycles[&n])
    }

    /// A random integer combination of the cocycle basis of `C^n`.
    pub fn random_cocycle<R: Rng + ?Sized>(&mut self, n: usize, rng: &mut R) -> Result<MultiOp<Q>> {
        let (d, variance) = (self.ctx.dim(), self.ctx.variance());
        let len = entry_count(d, n)?;
        let basis = self.cocycle_basis(n)?;
        let mut acc = vec![Q::ZERO; len];
        for v in basis {
            let k = Q::from_integer(rng.gen_range(-2..=2));
            if k.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(v) {
                a.add_product(&k, b);
            }
        }
        MultiOp::new(d, n, variance, acc)
    }
}

/// Some `g` with `∂g = f` under the multiplication of `spec`.
pub fn is_coboundary(spec: &AlgebraSpec, f: &MultiOp<Q>) -> Result<Option<MultiOp<Q>>> {
    CochainComplex::from_spec(spec)?.preimage(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::Variance;

    #[test]
    fn ground_field_matrices() {
        let ctx = CoboundaryContext::new(AlgebraSpec::ground_field().binary_mu()).unwrap();
        let entry = |n| coboundary_matrix(&ctx, n).unwrap().matrix.get(0, 0).clone();
        assert_eq!(entry(0), Q::ZERO);
        assert_eq!(entry(1), Q::from_integer(-1));
        assert_eq!(entry(2), Q::ZERO);
        assert_eq!(entry(3), Q::from_integer(-1));
    }

    #[test]
    fn ground_field_cohomology() {
        let t = betti_table(&AlgebraSpec::ground_field(), 3).unwrap();
        assert_eq!(t.cohomology_dims(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn dual_numbers_low_degrees() {
        let t = betti_table(&AlgebraSpec::dual_numbers(), 1).unwrap();
        assert_eq!(t.cohomology_dims(), vec![2, 1]);
    }

    #[test]
    fn not_associative_is_rejected() {
        let mut a = AlgebraSpec::coordinatewise(2);
        a.mu[1] = Q::ONE;
        assert!(matches!(betti_table(&a, 1), Err(OperadError::NotAssociative { .. })));
        let ctx = CoboundaryContext::new(a.binary_mu()).unwrap();
        assert!(!coboundary_matrix(&ctx, 1).unwrap().associative);
    }

    #[test]
    fn size_cap_is_reported() {
        assert!(matches!(
            betti_table(&AlgebraSpec::matrix_algebra(2), 7),
            Err(OperadError::SizeCap { .. })
        ));
    }

    #[test]
    fn complex_property() {
        let spec = AlgebraSpec::dual_numbers();
        let ctx = CoboundaryContext::new(spec.binary_mu()).unwrap();
        for n in 1..4 {
            let a = coboundary_matrix(&ctx, n - 1).unwrap().matrix;
            let b = coboundary_matrix(&ctx, n).unwrap().matrix;
            assert!(b.mul(&a).is_zero());
            assert!(a.rank() + b.rank() <= a.rows());
        }
    }

    #[test]
    fn preimage_round_trip() {
        let spec = AlgebraSpec::dual_numbers();
        let mut cx = CochainComplex::from_spec(&spec).unwrap();
        let g = MultiOp::<Q>::random(2, 2, Variance::Endo, 3).unwrap();
        let f = cx.context().coboundary(&g).unwrap();
        let pre = cx.preimage(&f).unwrap().expect("coboundary");
        assert_eq!(cx.context().coboundary(&pre).unwrap(), f);
        assert!(is_coboundary(&spec, &f).unwrap().is_some());
        let c = MultiOp::<Q>::zero(2, 0, Variance::Endo).unwrap();
        assert!(cx.preimage(&c).is_err());
    }

    #[test]
    fn outer_derivation_is_not_a_coboundary() {
        // D(1) = 0, D(ε) = ε is a cocycle in C^1 that is not inner.
        let spec = AlgebraSpec::dual_numbers();
        let mut cx = CochainComplex::from_spec(&spec).unwrap();
        let dq = |v| Q::from_integer(v);
        let d = MultiOp::new(2, 1, Variance::Endo, vec![dq(0), dq(0), dq(0), dq(1)]).unwrap();
        assert!(cx.context().coboundary(&d).unwrap().is_zero());
        assert!(cx.preimage(&d).unwrap().is_none());
    }

    #[test]
    fn random_cocycles_are_closed() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut cx = CochainComplex::from_spec(&AlgebraSpec::upper_triangular()).unwrap();
        for n in 0..3 {
            let z = cx.random_cocycle(n, &mut rng).unwrap();
            assert!(cx.context().coboundary(&z).unwrap().is_zero());
        }
    }
}

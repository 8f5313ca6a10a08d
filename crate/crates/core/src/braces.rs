//! Cup product, total composition, braces and the Gerstenhaber bracket.
//!
//! Every sum with an empty index range yields an explicit zero operation of the
//! nominal degree; a negative nominal degree is a [`OperadError::DegreeUnderflow`].

use crate::error::{OperadError, Result};
use crate::op::{partial_compose, MultiOp};
use crate::scalar::Scalar;
use crate::sign::Sign;

/// A fixed binary operation `μ ∈ C²`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMu<S>(MultiOp<S>);

impl<S: Scalar> BinaryMu<S> {
    pub fn new(mu: MultiOp<S>) -> Result<Self> {
        if mu.deg() != 2 {
            return Err(OperadError::DegreeMismatch { expected: 2, got: mu.deg() });
        }
        Ok(BinaryMu(mu))
    }

    pub fn op(&self) -> &MultiOp<S> {
        &self.0
    }

    pub fn into_op(self) -> MultiOp<S> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

fn nominal_zero<S: Scalar>(like: &MultiOp<S>, degree: i64) -> Result<MultiOp<S>> {
    if degree < 0 {
        return Err(OperadError::DegreeUnderflow(degree));
    }
    MultiOp::zero(like.dim(), degree as usize, like.variance())
}

/// `f ⌣ g = (-1)^f (μ ∘_0 f) ∘_f g`, degree `f + g`.
pub fn cup<S: Scalar>(mu: &BinaryMu<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    mu.op().check_compatible(f)?;
    mu.op().check_compatible(g)?;
    let left = partial_compose(mu.op(), f, 0)?;
    Ok(partial_compose(&left, g, f.deg())?.signed(Sign::pow(f.deg() as i64)))
}

/// `f • g = Σ_{i=0}^{|f|} f ∘_i g`, degree `f + |g|`.
pub fn total_compose<S: Scalar>(f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    f.check_compatible(g)?;
    let mut acc = nominal_zero(f, f.deg() as i64 + g.reduced())?;
    for i in 0..f.deg() {
        acc.add_signed(Sign::Plus, &partial_compose(f, g, i)?)?;
    }
    Ok(acc)
}

/// `{h, f, g} = Σ_{i=0}^{|h|-1} Σ_{j=i+f}^{|h|+|f|} (h ∘_i f) ∘_j g`.
pub fn tribrace<S: Scalar>(h: &MultiOp<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    h.check_compatible(f)?;
    h.check_compatible(g)?;
    let (hr, fr) = (h.reduced(), f.reduced());
    let mut acc = nominal_zero(h, h.deg() as i64 + fr + g.reduced())?;
    for i in 0..hr.max(0) {
        let hf = partial_compose(h, f, i as usize)?;
        for j in (i + f.deg() as i64)..=(hr + fr) {
            acc.add_signed(Sign::Plus, &partial_compose(&hf, g, j as usize)?)?;
        }
    }
    Ok(acc)
}

/// `{h, f, g, b}`: the triple sum over `i ≤ |h|-2`, `j ≥ i+f`, `k ≥ j+g` of
/// `((h ∘_i f) ∘_j g) ∘_k b`.
pub fn tetrabrace<S: Scalar>(
    h: &MultiOp<S>,
    f: &MultiOp<S>,
    g: &MultiOp<S>,
    b: &MultiOp<S>,
) -> Result<MultiOp<S>> {
    for x in [f, g, b] {
        h.check_compatible(x)?;
    }
    let (hr, fr, gr) = (h.reduced(), f.reduced(), g.reduced());
    let mut acc = nominal_zero(h, h.deg() as i64 + fr + gr + b.reduced())?;
    for i in 0..(hr - 1).max(0) {
        let hf = partial_compose(h, f, i as usize)?;
        for j in (i + f.deg() as i64)..=(hr + fr - 1) {
            let hfg = partial_compose(&hf, g, j as usize)?;
            for k in (j + g.deg() as i64)..=(hr + fr + gr) {
                acc.add_signed(Sign::Plus, &partial_compose(&hfg, b, k as usize)?)?;
            }
        }
    }
    Ok(acc)
}

/// Gerstenhaber bracket `[f, g] = f • g - (-1)^{|f||g|} g • f`.
pub fn bracket<S: Scalar>(f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    let mut fg = total_compose(f, g)?;
    let gf = total_compose(g, f)?;
    fg.add_signed(Sign::pow(f.reduced() * g.reduced()).flip(), &gf)?;
    Ok(fg)
}

/// Micro-associator `μ² = μ • μ`.
pub fn mu_squared<S: Scalar>(mu: &BinaryMu<S>) -> Result<MultiOp<S>> {
    total_compose(mu.op(), mu.op())
}

/// `(h, f, g) = (h • f) • g - h • (f • g)`.
pub fn getzler_associator<S: Scalar>(h: &MultiOp<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    let left = total_compose(&total_compose(h, f)?, g)?;
    let right = total_compose(h, &total_compose(f, g)?)?;
    left.sub(&right)
}

//! The coboundary operator `∂ = [·, μ]` and its derivation deviations.
//!
//! Deviations are returned as operations so callers can check both that they
//! vanish and that they equal the stated obstruction terms.

use crate::braces::{bracket, cup, mu_squared, total_compose, tribrace, BinaryMu};
use crate::error::Result;
use crate::op::{MultiOp, Variance};
use crate::scalar::Scalar;
use crate::sign::Sign;

#[derive(Debug, Clone)]
pub struct CoboundaryContext<S> {
    mu: BinaryMu<S>,
    unit: MultiOp<S>,
}

impl<S: Scalar> CoboundaryContext<S> {
    pub fn new(mu: BinaryMu<S>) -> Result<Self> {
        let unit = MultiOp::identity(mu.dim(), mu.op().variance())?;
        Ok(CoboundaryContext { mu, unit })
    }

    pub fn mu(&self) -> &BinaryMu<S> {
        &self.mu
    }

    pub fn unit(&self) -> &MultiOp<S> {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn variance(&self) -> Variance {
        self.mu.op().variance()
    }

    /// `∂f = f • μ - (-1)^{|f|} μ • f`.
    pub fn coboundary(&self, f: &MultiOp<S>) -> Result<MultiOp<S>> {
        bracket(f, self.mu.op())
    }

    /// `∂f = f ⌣ 𝕀 + f • μ + (-1)^{|f|} 𝕀 ⌣ f`.
    pub fn coboundary_via_cup(&self, f: &MultiOp<S>) -> Result<MultiOp<S>> {
        let mut acc = cup(&self.mu, f, &self.unit)?;
        acc.add_signed(Sign::Plus, &total_compose(f, self.mu.op())?)?;
        acc.add_signed(Sign::pow(f.reduced()), &cup(&self.mu, &self.unit, f)?)?;
        Ok(acc)
    }

    /// `(dev_• ∂)(f ⊗ g) = ∂(f • g) - f • ∂g - (-1)^{|g|} ∂f • g`.
    pub fn dev_total(&self, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
        let mut acc = self.coboundary(&total_compose(f, g)?)?;
        acc.add_signed(Sign::Minus, &total_compose(f, &self.coboundary(g)?)?)?;
        acc.add_signed(
            Sign::pow(g.reduced()).flip(),
            &total_compose(&self.coboundary(f)?, g)?,
        )?;
        Ok(acc)
    }

    /// `∂{h,f,g} - {h,f,∂g} - (-1)^{|g|}{h,∂f,g} - (-1)^{|g|+|f|}{∂h,f,g}`.
    pub fn dev_tribrace(&self, h: &MultiOp<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
        let (fr, gr) = (f.reduced(), g.reduced());
        let mut acc = self.coboundary(&tribrace(h, f, g)?)?;
        acc.add_signed(Sign::Minus, &tribrace(h, f, &self.coboundary(g)?)?)?;
        acc.add_signed(Sign::pow(gr).flip(), &tribrace(h, &self.coboundary(f)?, g)?)?;
        acc.add_signed(Sign::pow(gr + fr).flip(), &tribrace(&self.coboundary(h)?, f, g)?)?;
        Ok(acc)
    }

    /// `∂(f ⌣ g) - f ⌣ ∂g - (-1)^g ∂f ⌣ g`; equals `(-1)^g {μ², f, g}`.
    pub fn cup_deviation(&self, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
        let mut acc = self.coboundary(&cup(&self.mu, f, g)?)?;
        acc.add_signed(Sign::Minus, &cup(&self.mu, f, &self.coboundary(g)?)?)?;
        acc.add_signed(
            Sign::pow(g.deg() as i64).flip(),
            &cup(&self.mu, &self.coboundary(f)?, g)?,
        )?;
        Ok(acc)
    }

    /// `∂(∂f)`, to be compared with [`Self::square_action`].
    pub fn coboundary_square(&self, f: &MultiOp<S>) -> Result<MultiOp<S>> {
        self.coboundary(&self.coboundary(f)?)
    }

    /// `∂_{μ²} f = [f, μ²]`.
    pub fn square_action(&self, f: &MultiOp<S>) -> Result<MultiOp<S>> {
        bracket(f, &mu_squared(&self.mu)?)
    }

    pub fn mu_squared(&self) -> Result<MultiOp<S>> {
        mu_squared(&self.mu)
    }
}

/// `∂_f x = [x, f]`.
pub fn right_adjoint_action<S: Scalar>(f: &MultiOp<S>, x: &MultiOp<S>) -> Result<MultiOp<S>> {
    bracket(x, f)
}

/// Cup commutator `f ⌣ g - (-1)^{fg} g ⌣ f`.
pub fn cup_commutator<S: Scalar>(mu: &BinaryMu<S>, f: &MultiOp<S>, g: &MultiOp<S>) -> Result<MultiOp<S>> {
    let mut acc = cup(mu, f, g)?;
    acc.add_signed(Sign::pow((f.deg() * g.deg()) as i64).flip(), &cup(mu, g, f)?)?;
    Ok(acc)
}

/// `(h • f) ⌣ g + (-1)^{|h|f} f ⌣ (h • g) - h • (f ⌣ g)`.
pub fn tribrace_deviation_via_compose<S: Scalar>(
    mu: &BinaryMu<S>,
    h: &MultiOp<S>,
    f: &MultiOp<S>,
    g: &MultiOp<S>,
) -> Result<MultiOp<S>> {
    let mut acc = cup(mu, &total_compose(h, f)?, g)?;
    acc.add_signed(
        Sign::pow(h.reduced() * f.deg() as i64),
        &cup(mu, f, &total_compose(h, g)?)?,
    )?;
    acc.add_signed(Sign::Minus, &total_compose(h, &cup(mu, f, g)?)?)?;
    Ok(acc)
}

/// `[h, f] ⌣ g + (-1)^{|h|f} f ⌣ [h, g] - [h, f ⌣ g]`.
pub fn tribrace_deviation_via_bracket<S: Scalar>(
    mu: &BinaryMu<S>,
    h: &MultiOp<S>,
    f: &MultiOp<S>,
    g: &MultiOp<S>,
) -> Result<MultiOp<S>> {
    let mut acc = cup(mu, &bracket(h, f)?, g)?;
    acc.add_signed(Sign::pow(h.reduced() * f.deg() as i64), &cup(mu, f, &bracket(h, g)?)?)?;
    acc.add_signed(Sign::Minus, &bracket(h, &cup(mu, f, g)?)?)?;
    Ok(acc)
}

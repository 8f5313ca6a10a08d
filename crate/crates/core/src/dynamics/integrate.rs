use std::sync::Arc;

use crate::error::{OperadError, Result};
use crate::op::MultiOp;

use super::observe::observe_all;
use super::{lax_rhs, LaxSystem, Observer};

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub step: usize,
    /// Always `step * dt`, never accumulated.
    pub t: f64,
    pub state: Option<Vec<f64>>,
    pub l: MultiOp<f64>,
    /// Observer values in selection order.
    pub invariants: Vec<(String, f64)>,
}

impl TrajectorySample {
    pub fn invariant(&self, name: &str) -> Option<f64> {
        self.invariants.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

struct Flat<'a> {
    system: &'a LaxSystem,
    split: usize,
}

impl Flat<'_> {
    fn rhs(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let (state, coeffs) = y.split_at(self.split);
        let mut out = match &self.system.classical {
            Some(c) => c.field.eval(t, state),
            None => Vec::new(),
        };
        let l0 = &self.system.l0;
        let l = MultiOp::new(l0.dim(), l0.deg(), l0.variance(), coeffs.to_vec())?;
        out.extend(lax_rhs(&self.system.m.at(t), &l)?.into_coeffs());
        Ok(out)
    }

    fn sample(&self, step: usize, t: f64, y: &[f64], observers: &[Arc<dyn Observer>]) -> Result<TrajectorySample> {
        let (state, coeffs) = y.split_at(self.split);
        let l0 = &self.system.l0;
        let mut sample = TrajectorySample {
            step,
            t,
            state: self.system.classical.as_ref().map(|_| state.to_vec()),
            l: MultiOp::new(l0.dim(), l0.deg(), l0.variance(), coeffs.to_vec())?,
            invariants: Vec::new(),
        };
        sample.invariants = observe_all(observers, &sample)?;
        Ok(sample)
    }
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical RK4 with a fixed step, streaming one sample per step (plus `t = 0`)
/// to `sink`. Returns the final sample.
pub fn integrate(
    system: &LaxSystem,
    observers: &[Arc<dyn Observer>],
    mut sink: impl FnMut(&TrajectorySample) -> Result<()>,
) -> Result<TrajectorySample> {
    system.validate()?;
    let split = system.classical.as_ref().map_or(0, |c| c.state.len());
    let flat = Flat { system, split };
    let mut y: Vec<f64> = system.classical.as_ref().map(|c| c.state.clone()).unwrap_or_default();
    y.extend_from_slice(system.l0.coeffs());

    let dt = system.dt;
    let mut last = flat.sample(0, 0.0, &y, observers)?;
    sink(&last)?;
    for step in 1..=system.steps() {
        let t = (step - 1) as f64 * dt;
        let k1 = flat.rhs(t, &y)?;
        let k2 = flat.rhs(t + dt / 2.0, &axpy(&y, dt / 2.0, &k1))?;
        let k3 = flat.rhs(t + dt / 2.0, &axpy(&y, dt / 2.0, &k2))?;
        let k4 = flat.rhs(t + dt, &axpy(&y, dt, &k3))?;
        for i in 0..y.len() {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = step as f64 * dt;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(OperadError::NonFinite { t: t_next });
        }
        last = flat.sample(step, t_next, &y, observers)?;
        sink(&last)?;
    }
    Ok(last)
}

pub fn integrate_collect(system: &LaxSystem, observers: &[Arc<dyn Observer>]) -> Result<Vec<TrajectorySample>> {
    let mut out = Vec::with_capacity(system.steps() + 1);
    integrate(system, observers, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

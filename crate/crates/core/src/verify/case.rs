use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebras::AlgebraSpec;
use crate::braces::BinaryMu;
use crate::error::Result;
use crate::op::{MultiOp, Variance};
use crate::scalar::Scalar;

use super::VerifyConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Inadmissible draw; the runner redraws.
    Skip,
}

/// Random inputs for one case, recorded so a failure can be reported with them.
pub struct Case<S: Scalar> {
    rng: ChaCha8Rng,
    pub dim: usize,
    pub variance: Variance,
    pub max_degree: usize,
    pub tol: f64,
    pub corrupt_sign: bool,
    inputs: Vec<(String, String)>,
    _scalar: std::marker::PhantomData<S>,
}

impl<S: Scalar> Case<S> {
    pub fn new(seed: u64, dim: usize, variance: Variance, config: &VerifyConfig) -> Self {
        Case {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            variance,
            max_degree: config.max_degree,
            tol: config.tol,
            corrupt_sign: config.corrupt_sign,
            inputs: Vec::new(),
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `0..=max_degree`.
    pub fn degree(&mut self) -> usize {
        self.rng.gen_range(0..=self.max_degree)
    }

    pub fn degree_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn op(&mut self, label: &str, degree: usize) -> Result<MultiOp<S>> {
        let op = MultiOp::random_with(&mut self.rng, self.dim, degree, self.variance)?;
        self.record(label, &op);
        Ok(op)
    }

    pub fn random_op(&mut self, label: &str) -> Result<MultiOp<S>> {
        let deg = self.degree();
        self.op(label, deg)
    }

    /// A random, generally non-associative, binary operation.
    pub fn mu(&mut self) -> Result<BinaryMu<S>> {
        BinaryMu::new(self.op("mu", 2)?)
    }

    /// A catalog algebra of the case dimension in a random integer basis.
    pub fn associative_spec(&mut self) -> Result<AlgebraSpec> {
        let catalog = AlgebraSpec::associative_catalog(self.dim);
        let pick = self.rng.gen_range(0..catalog.len());
        let spec = catalog[pick].scrambled(&mut self.rng)?;
        self.inputs.push(("algebra".into(), spec.name.clone()));
        Ok(spec)
    }

    pub fn associative_mu(&mut self) -> Result<BinaryMu<S>> {
        let spec = self.associative_spec()?;
        let op = MultiOp::new(self.dim, 2, self.variance, spec.mu.iter().map(S::from_rational).collect())?;
        self.record("mu", &op);
        BinaryMu::new(op)
    }

    pub fn vector(&mut self, label: &str) -> Vec<S> {
        let v: Vec<S> = (0..self.dim).map(|_| S::sample(&mut self.rng)).collect();
        self.inputs.push((label.into(), fmt_coeffs(&v)));
        v
    }

    pub fn record<T: Scalar>(&mut self, label: &str, op: &MultiOp<T>) {
        self.inputs.push((label.into(), format!("deg={} coeffs={}", op.deg(), fmt_coeffs(op.coeffs()))));
    }

    pub fn note(&mut self, label: &str, value: impl ToString) {
        self.inputs.push((label.into(), value.to_string()));
    }

    pub fn describe_inputs(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "{k}: {v}");
        }
        s.trim_end().to_string()
    }

    pub fn expect_zero(&self, what: &str, x: &MultiOp<S>) -> Verdict {
        if x.is_negligible(self.tol) {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("{what}: residual norm {}", x.norm()))
        }
    }

    pub fn expect_eq(&self, what: &str, lhs: &MultiOp<S>, rhs: &MultiOp<S>) -> Result<Verdict> {
        if lhs.degree() != rhs.degree() {
            return Ok(Verdict::Fail(format!("{what}: degree {} vs {}", lhs.degree(), rhs.degree())));
        }
        Ok(self.expect_zero(what, &lhs.sub(rhs)?))
    }

    pub fn expect_vec_eq(&self, what: &str, lhs: &[S], rhs: &[S]) -> Verdict {
        let bad = lhs.len() != rhs.len()
            || lhs.iter().zip(rhs).any(|(a, b)| !(a.clone() - b.clone()).is_negligible(self.tol));
        if bad {
            Verdict::Fail(format!("{what}: {} vs {}", fmt_coeffs(lhs), fmt_coeffs(rhs)))
        } else {
            Verdict::Pass
        }
    }
}

fn fmt_coeffs<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Combine verdicts, keeping the first failure.
pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut any_pass = false;
    for v in verdicts {
        match v {
            Verdict::Fail(_) => return v,
            Verdict::Pass => any_pass = true,
            Verdict::Skip => {}
        }
    }
    if any_pass {
        Verdict::Pass
    } else {
        Verdict::Skip
    }
}

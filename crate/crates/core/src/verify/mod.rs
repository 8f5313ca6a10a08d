//! Randomized identity suites behind a common trait, registered by name.
//!
//! Each suite checks one identity on freshly drawn operations. The runner fans
//! cases out over a thread pool but derives every case seed from
//! `(seed, suite, dim, variance, case, attempt)`, so reports are identical for any
//! worker count.

mod case;
pub mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OperadError, Result};
use crate::op::Variance;
use crate::scalar::{Backend, Scalar};

pub use case::{Case, Verdict};

/// Redraws allowed when a case lands on an inadmissible degree combination.
const MAX_ATTEMPTS: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Cases run for every dimension `1..=max_dim`.
    pub max_dim: usize,
    pub max_degree: usize,
    /// Cases per `(dim, variance)` pair.
    pub cases: usize,
    /// Float backend only; the exact backend compares exactly.
    pub tol: f64,
    /// Replace the graded bracket sign by `+1` inside the Jacobi suite (negative control).
    pub corrupt_sign: bool,
    /// Restrict to these suite names (all when empty).
    pub only: Vec<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, max_dim: 2, max_degree: 3, cases: 200, tol: 1e-9, corrupt_sign: false, only: Vec::new() }
    }
}

pub trait IdentitySuite<S: Scalar>: Send + Sync {
    fn name(&self) -> &'static str;

    /// One-line statement of the identity.
    fn statement(&self) -> &'static str;

    fn variances(&self) -> &'static [Variance] {
        &[Variance::Endo, Variance::Coendo]
    }

    /// Largest dimension worth drawing (cost control for the linear-algebra suites).
    fn max_dim(&self) -> usize {
        usize::MAX
    }

    fn check(&self, case: &mut Case<S>) -> Result<Verdict>;
}

pub struct SuiteRegistry<S: Scalar> {
    suites: BTreeMap<&'static str, Box<dyn IdentitySuite<S>>>,
}

impl<S: Scalar> Default for SuiteRegistry<S> {
    fn default() -> Self {
        SuiteRegistry { suites: BTreeMap::new() }
    }
}

impl<S: Scalar> SuiteRegistry<S> {
    pub fn register(&mut self, suite: Box<dyn IdentitySuite<S>>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn get(&self, name: &str) -> Option<&dyn IdentitySuite<S>> {
        self.suites.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    /// Runs the selected suites in name order.
    pub fn run(&self, config: &VerifyConfig) -> Result<VerifyReport> {
        for name in &config.only {
            if !self.suites.contains_key(name.as_str()) {
                return Err(OperadError::Config(format!("unknown suite {name:?}")));
            }
        }
        if config.max_dim == 0 {
            return Err(OperadError::Config("dim must be at least 1".into()));
        }
        let suites = self
            .suites
            .values()
            .filter(|s| config.only.is_empty() || config.only.iter().any(|n| n == s.name()))
            .map(|s| run_suite(s.as_ref(), config))
            .collect();
        Ok(VerifyReport { seed: config.seed, backend: S::BACKEND, cases_per_shape: config.cases, suites })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub case_seed: u64,
    pub dim: usize,
    pub variance: Variance,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub statement: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases with no admissible draw after all redraws.
    pub skipped: usize,
    pub first_failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub backend: Backend,
    pub cases_per_shape: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify seed={} backend={} cases_per_shape={}", self.seed, self.backend, self.cases_per_shape);
        if self.cases_per_shape == 0 {
            let _ = writeln!(out, "warning: cases=0, every suite passes vacuously");
        }
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{:<4} {:<40} cases={:<6} passed={:<6} failed={:<4} skipped={:<4} {}",
                if s.ok() { "PASS" } else { "FAIL" },
                s.name,
                s.cases,
                s.passed,
                s.failed,
                s.skipped,
                s.statement
            );
            if let Some(cx) = &s.first_failure {
                let _ = writeln!(
                    out,
                    "     first counterexample: case_seed={} dim={} variance={:?}\n     {}",
                    cx.case_seed,
                    cx.dim,
                    cx.variance,
                    cx.detail.replace('\n', "\n     ")
                );
            }
        }
        let failed = self.suites.iter().filter(|s| !s.ok()).count();
        let _ = writeln!(out, "summary: {} suites, {} failed", self.suites.len(), failed);
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

enum Outcome {
    Pass,
    Fail(Counterexample),
    Skipped,
}

fn run_suite<S: Scalar>(suite: &dyn IdentitySuite<S>, config: &VerifyConfig) -> SuiteReport {
    let mut shapes = Vec::new();
    for dim in 1..=config.max_dim.min(suite.max_dim()) {
        for &variance in suite.variances() {
            shapes.push((dim, variance));
        }
    }
    let jobs: Vec<(usize, Variance, usize)> = shapes
        .iter()
        .flat_map(|&(d, v)| (0..config.cases).map(move |k| (d, v, k)))
        .collect();
    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|&(dim, variance, k)| run_case(suite, config, dim, variance, k))
        .collect();

    let mut report = SuiteReport {
        name: suite.name().to_string(),
        statement: suite.statement().to_string(),
        cases: jobs.len(),
        passed: 0,
        failed: 0,
        skipped: 0,
        first_failure: None,
    };
    for o in outcomes {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skipped => report.skipped += 1,
            Outcome::Fail(cx) => {
                report.failed += 1;
                report.first_failure.get_or_insert(cx);
            }
        }
    }
    report
}

fn run_case<S: Scalar>(
    suite: &dyn IdentitySuite<S>,
    config: &VerifyConfig,
    dim: usize,
    variance: Variance,
    k: usize,
) -> Outcome {
    for attempt in 0..MAX_ATTEMPTS {
        let seed = case_seed(config.seed, suite.name(), dim, variance, k, attempt);
        let mut case = Case::new(seed, dim, variance, config);
        let verdict = match suite.check(&mut case) {
            Ok(v) => v,
            Err(OperadError::DegreeUnderflow(_)) | Err(OperadError::SizeCap { .. }) => Verdict::Skip,
            Err(e) => Verdict::Fail(format!("error: {e}")),
        };
        match verdict {
            Verdict::Pass => return Outcome::Pass,
            Verdict::Skip => continue,
            Verdict::Fail(msg) => {
                return Outcome::Fail(Counterexample {
                    case_seed: seed,
                    dim,
                    variance,
                    detail: format!("{msg}\n{}", case.describe_inputs()),
                })
            }
        }
    }
    Outcome::Skipped
}

/// FNV-1a over the case coordinates, finished with a SplitMix64 mix.
pub fn case_seed(seed: u64, suite: &str, dim: usize, variance: Variance, case: usize, attempt: u32) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(&seed.to_le_bytes());
    eat(suite.as_bytes());
    eat(&(dim as u64).to_le_bytes());
    eat(&[matches!(variance, Variance::Coendo) as u8]);
    eat(&(case as u64).to_le_bytes());
    eat(&attempt.to_le_bytes());
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Every suite shipped with the crate.
pub fn standard_registry<S: Scalar>() -> SuiteRegistry<S> {
    let mut reg = SuiteRegistry::default();
    suites::register_all(&mut reg);
    reg
}

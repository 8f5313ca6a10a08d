use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result};
use crate::op::{MultiOp, Variance};

/// Right-hand side of a classical ODE carried alongside `L`.
pub trait VectorField: Send + Sync {
    fn name(&self) -> &str;
    fn eval(&self, t: f64, state: &[f64]) -> Vec<f64>;
}

#[derive(Clone)]
pub struct ClassicalState {
    pub state: Vec<f64>,
    pub field: Arc<dyn VectorField>,
}

/// The Lax generator `M`, of degree 1.
#[derive(Clone)]
pub enum Generator {
    Constant(MultiOp<f64>),
    /// Not covered by the conjugation oracle.
    TimeDependent(Arc<dyn Fn(f64) -> MultiOp<f64> + Send + Sync>),
}

impl Generator {
    pub fn at(&self, t: f64) -> MultiOp<f64> {
        match self {
            Generator::Constant(m) => m.clone(),
            Generator::TimeDependent(f) => f(t),
        }
    }

    pub fn constant(&self) -> Option<&MultiOp<f64>> {
        match self {
            Generator::Constant(m) => Some(m),
            Generator::TimeDependent(_) => None,
        }
    }
}

#[derive(Clone)]
pub struct LaxSystem {
    pub m: Generator,
    pub l0: MultiOp<f64>,
    pub classical: Option<ClassicalState>,
    pub dt: f64,
    pub t_end: f64,
}

impl LaxSystem {
    pub fn new(m: MultiOp<f64>, l0: MultiOp<f64>, dt: f64, t_end: f64) -> Result<Self> {
        if m.deg() != 1 {
            return Err(OperadError::DegreeMismatch { expected: 1, got: m.deg() });
        }
        m.check_compatible(&l0)?;
        let sys = LaxSystem { m: Generator::Constant(m), l0, classical: None, dt, t_end };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_classical(mut self, state: Vec<f64>, field: Arc<dyn VectorField>) -> Self {
        self.classical = Some(ClassicalState { state, field });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(OperadError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.t_end.is_finite() || self.t_end < self.dt {
            return Err(OperadError::Config(format!("t_end must be at least dt, got {}", self.t_end)));
        }
        if self.l0.variance() != Variance::Endo || self.l0.deg() == 0 {
            return Err(OperadError::Config("L0 must be an endomorphism of degree at least 1".into()));
        }
        Ok(())
    }

    /// Number of RK4 steps; `t_end` is rounded to a whole number of steps.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// An operation as stored in files: `{"dim"?, "degree", "coeffs"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl OpFile {
    pub fn to_op(&self, dim: usize) -> Result<MultiOp<f64>> {
        if let Some(d) = self.dim {
            if d != dim {
                return Err(OperadError::DimMismatch { left: dim, right: d });
            }
        }
        MultiOp::new(dim, self.degree, Variance::Endo, self.coeffs.clone())
    }

    /// Reads a standalone operation file, which must carry its own `dim`.
    pub fn load(path: impl AsRef<Path>) -> Result<MultiOp<f64>> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| OperadError::Parse(format!("{}: {e}", path.as_ref().display())))?;
        let file: OpFile = serde_json::from_str(&text).map_err(|e| OperadError::Parse(e.to_string()))?;
        let dim = file.dim.ok_or_else(|| OperadError::Parse("operation file needs \"dim\"".into()))?;
        file.to_op(dim)
    }
}

/// On-disk description of a Lax run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub dim: usize,
    #[serde(rename = "M")]
    pub m: Vec<f64>,
    #[serde(rename = "L0")]
    pub l0: OpFile,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub observe: Vec<String>,
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| OperadError::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| OperadError::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn system(&self) -> Result<LaxSystem> {
        let m = MultiOp::new(self.dim, 1, Variance::Endo, self.m.clone())?;
        LaxSystem::new(m, self.l0.to_op(self.dim)?, self.dt, self.t_end)
    }
}

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use crate::error::{OperadError, Result};
use crate::op::MultiOp;

use super::{conjugation_oracle, monitor_associator, trace_power, LaxSystem, TrajectorySample};

/// What an observer sees at one sample.
pub struct ObsContext<'a> {
    pub t: f64,
    pub state: Option<&'a [f64]>,
    pub l: &'a MultiOp<f64>,
}

pub trait Observer: Send + Sync {
    fn name(&self) -> &str;
    fn observe(&self, ctx: &ObsContext<'_>) -> Result<f64>;
}

struct FnObserver<F> {
    name: String,
    f: F,
}

impl<F> Observer for FnObserver<F>
where
    F: Fn(&ObsContext<'_>) -> Result<f64> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }
    fn observe(&self, ctx: &ObsContext<'_>) -> Result<f64> {
        (self.f)(ctx)
    }
}

/// Observers addressable by name, e.g. from the `observe` list of a system file.
#[derive(Default, Clone)]
pub struct ObserverRegistry {
    observers: BTreeMap<String, Arc<dyn Observer>>,
}

impl ObserverRegistry {
    pub fn register(&mut self, observer: Arc<dyn Observer>) {
        self.observers.insert(observer.name().to_string(), observer);
    }

    pub fn register_fn<F>(&mut self, name: &str, f: F)
    where
        F: Fn(&ObsContext<'_>) -> Result<f64> + Send + Sync + 'static,
    {
        self.register(Arc::new(FnObserver { name: name.to_string(), f }));
    }

    pub fn names(&self) -> Vec<&str> {
        self.observers.keys().map(String::as_str).collect()
    }

    /// Resolves names in the given order.
    pub fn select(&self, names: &[String]) -> Result<Vec<Arc<dyn Observer>>> {
        names
            .iter()
            .map(|n| {
                self.observers.get(n).cloned().ok_or_else(|| {
                    OperadError::Config(format!("unknown observer {n:?} (known: {})", self.names().join(", ")))
                })
            })
            .collect()
    }

    /// `trace1..trace3`, `assoc_defect`, `norm`, and `oracle_dist` when `M` is constant.
    pub fn standard(system: &LaxSystem) -> Self {
        let mut reg = ObserverRegistry::default();
        for k in 1..=3u32 {
            reg.register_fn(&format!("trace{k}"), move |c| trace_power(c.l, k));
        }
        reg.register_fn("assoc_defect", |c| monitor_associator(c.l));
        reg.register_fn("norm", |c| Ok(c.l.norm()));
        if let Some(m) = system.m.constant() {
            let (m, l0) = (m.clone(), system.l0.clone());
            reg.register_fn("oracle_dist", move |c| Ok(conjugation_oracle(&m, &l0, c.t)?.sub(c.l)?.norm()));
        }
        reg
    }
}

/// Evaluates observers on a sample in order.
pub fn observe_all(observers: &[Arc<dyn Observer>], sample: &TrajectorySample) -> Result<Vec<(String, f64)>> {
    let ctx = ObsContext { t: sample.t, state: sample.state.as_deref(), l: &sample.l };
    observers.iter().map(|o| Ok((o.name().to_string(), o.observe(&ctx)?))).collect()
}

/// CSV with a `t` column, one column per observer, then optionally every entry of `L`.
pub struct CsvWriter<W: Write> {
    out: W,
    emit_l: bool,
    header_written: bool,
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W, emit_l: bool) -> Self {
        CsvWriter { out, emit_l, header_written: false }
    }

    pub fn write(&mut self, sample: &TrajectorySample) -> Result<()> {
        let io = |e: std::io::Error| OperadError::Config(format!("write failed: {e}"));
        if !self.header_written {
            let mut cols = vec!["t".to_string()];
            cols.extend(sample.invariants.iter().map(|(n, _)| n.clone()));
            if self.emit_l {
                cols.extend((0..sample.l.coeffs().len()).map(|i| format!("L{i}")));
            }
            writeln!(self.out, "{}", cols.join(",")).map_err(io)?;
            self.header_written = true;
        }
        let mut row = vec![fmt_float(sample.t)];
        row.extend(sample.invariants.iter().map(|(_, v)| fmt_float(*v)));
        if self.emit_l {
            row.extend(sample.l.coeffs().iter().map(|v| fmt_float(*v)));
        }
        writeln!(self.out, "{}", row.join(",")).map_err(io)
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

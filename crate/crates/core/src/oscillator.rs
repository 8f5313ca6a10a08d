//! The harmonic oscillator as a Lax pair, and its operadic generalisation.
//!
//! `L = (p, ωq; ωq, -p)` and `M = (0, -ω/2; ω/2, 0)` satisfy `dL/dt = ML - LM`
//! along the Hamiltonian flow of `H = (p² + ω²q²)/2`. Operations of higher degree
//! are transported along the same trajectory by the operadic Lax equation.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{conjugation_oracle, lax_rhs, LaxSystem, ObserverRegistry, VectorField};
use crate::error::{OperadError, Result};
use crate::op::{MultiOp, Variance};

/// Transport is periodic when its defect after one period is at most this.
pub const PERIODIC_TOL: f64 = 1e-8;

fn matrix(entries: [f64; 4]) -> MultiOp<f64> {
    MultiOp::new(2, 1, Variance::Endo, entries.to_vec()).expect("2x2 shape")
}

pub fn classical_lax(q: f64, p: f64, omega: f64) -> MultiOp<f64> {
    matrix([p, omega * q, omega * q, -p])
}

pub fn m_matrix(omega: f64) -> MultiOp<f64> {
    matrix([0.0, -omega / 2.0, omega / 2.0, 0.0])
}

pub fn hamiltonian(q: f64, p: f64, omega: f64) -> f64 {
    0.5 * (p * p + omega * omega * q * q)
}

/// `(dq/dt, dp/dt) = (p, -ω²q)`.
pub fn canonical_flow(q: f64, p: f64, omega: f64) -> (f64, f64) {
    (p, -omega * omega * q)
}

pub struct HarmonicField {
    pub omega: f64,
}

impl VectorField for HarmonicField {
    fn name(&self) -> &str {
        "harmonic"
    }
    fn eval(&self, _t: f64, state: &[f64]) -> Vec<f64> {
        let (dq, dp) = canonical_flow(state[0], state[1], self.omega);
        vec![dq, dp]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub q0: f64,
    pub p0: f64,
    pub degree: usize,
    l_init: MultiOp<f64>,
}

impl OscillatorParams {
    /// `l_init` defaults to the classical matrix in degree 1 and is required otherwise.
    pub fn new(omega: f64, q0: f64, p0: f64, degree: usize, l_init: Option<MultiOp<f64>>) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(OperadError::Config(format!("omega must be positive, got {omega}")));
        }
        if degree == 0 {
            return Err(OperadError::Config("degree must be at least 1".into()));
        }
        let l_init = match l_init {
            Some(l) => {
                if l.dim() != 2 || l.variance() != Variance::Endo {
                    return Err(OperadError::Config("L_init must be a 2-dimensional endomorphism".into()));
                }
                if l.deg() != degree {
                    return Err(OperadError::DegreeMismatch { expected: degree, got: l.deg() });
                }
                l
            }
            None if degree == 1 => classical_lax(q0, p0, omega),
            None => return Err(OperadError::MissingInitialData { degree }),
        };
        Ok(OscillatorParams { omega, q0, p0, degree, l_init })
    }

    pub fn l_init(&self) -> &MultiOp<f64> {
        &self.l_init
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }
}

/// Closed-form solution of the canonical equations.
pub fn exact_flow(params: &OscillatorParams, t: f64) -> (f64, f64) {
    let (w, q0, p0) = (params.omega, params.q0, params.p0);
    let (s, c) = (w * t).sin_cos();
    (q0 * c + p0 / w * s, p0 * c - w * q0 * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    /// Differentiate the closed-form trajectory.
    Exact,
    /// Central differences with the given step.
    FiniteDifference(f64),
}

/// Which side of the Lax equation the residual compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `dL/dt = M•L - L•M`.
    Standard,
    /// `dL/dt = L•M - M•L`; a deliberately wrong sign.
    Reversed,
}

/// Max-norm of `d/dt L_cl(q(t), p(t)) - (M•L - L•M)` along the exact trajectory.
pub fn lax_residual_classical(params: &OscillatorParams, t: f64, mode: Derivative, convention: Convention) -> Result<f64> {
    let w = params.omega;
    let (q, p) = exact_flow(params, t);
    let dl = match mode {
        Derivative::Exact => {
            let (dq, dp) = canonical_flow(q, p, w);
            matrix([dp, w * dq, w * dq, -dp])
        }
        Derivative::FiniteDifference(h) => {
            let at = |s: f64| {
                let (q, p) = exact_flow(params, s);
                classical_lax(q, p, w)
            };
            at(t + h).sub(&at(t - h))?.scale(&(0.5 / h))
        }
    };
    let mut rhs = lax_rhs(&m_matrix(w), &classical_lax(q, p, w))?;
    if convention == Convention::Reversed {
        rhs = -rhs;
    }
    Ok(dl.sub(&rhs)?.norm())
}

/// The operation of degree `n` attached to the phase point `exact_flow(t)`.
pub fn transport_solution(params: &OscillatorParams, t: f64) -> Result<MultiOp<f64>> {
    conjugation_oracle(&m_matrix(params.omega), &params.l_init, t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyReport {
    pub degree: usize,
    pub periodic: bool,
    /// `|transport(T) - L_init|` at the period `T = 2π/ω`.
    pub defect: f64,
}

impl MonodromyReport {
    pub fn to_text(&self) -> String {
        format!("monodromy degree={} periodic={} defect={:.16e}\n", self.degree, self.periodic, self.defect)
    }
}

pub fn monodromy_report(params: &OscillatorParams) -> Result<MonodromyReport> {
    let end = transport_solution(params, params.period())?;
    let defect = end.sub(&params.l_init)?.norm();
    Ok(MonodromyReport { degree: params.degree, periodic: defect <= PERIODIC_TOL, defect })
}

/// The coupled `(q, p, L)` system integrated by the CLI.
pub fn oscillator_system(params: &OscillatorParams, dt: f64, t_end: f64) -> Result<LaxSystem> {
    Ok(LaxSystem::new(m_matrix(params.omega), params.l_init.clone(), dt, t_end)?
        .with_classical(vec![params.q0, params.p0], Arc::new(HarmonicField { omega: params.omega })))
}

/// Standard observers plus `q`, `p` and `H` read from the classical state.
pub fn observer_registry(system: &LaxSystem, omega: f64) -> ObserverRegistry {
    let mut reg = ObserverRegistry::standard(system);
    let state = |c: &crate::dynamics::ObsContext<'_>| {
        c.state.map(|s| (s[0], s[1])).ok_or_else(|| OperadError::Config("no classical state".into()))
    };
    reg.register_fn("q", move |c| Ok(state(c)?.0));
    reg.register_fn("p", move |c| Ok(state(c)?.1));
    reg.register_fn("H", move |c| {
        let (q, p) = state(c)?;
        Ok(hamiltonian(q, p, omega))
    });
    reg
}

/// `q, p, H`, then `trace2` in degree 1 or `assoc_defect` in degree 2.
pub fn default_columns(degree: usize) -> Vec<String> {
    let mut cols: Vec<String> = ["q", "p", "H"].iter().map(|s| s.to_string()).collect();
    match degree {
        1 => cols.push("trace2".into()),
        2 => cols.push("assoc_defect".into()),
        _ => {}
    }
    cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{expm, integrate, trace_power};

    fn params(degree: usize, l: Option<MultiOp<f64>>) -> OscillatorParams {
        OscillatorParams::new(2.0, 1.0, 0.0, degree, l).unwrap()
    }

    #[test]
    fn classical_matrices() {
        assert_eq!(classical_lax(1.0, 0.0, 2.0).coeffs(), &[0.0, 2.0, 2.0, 0.0]);
        assert!(classical_lax(0.0, 0.0, 2.0).is_zero());
        assert_eq!(trace_power(&classical_lax(0.3, -1.7, 1.3), 1).unwrap(), 0.0);
        let m = m_matrix(2.0);
        assert_eq!(m.coeffs(), &[0.0, -1.0, 1.0, 0.0]);
        let mt = [m.coeffs()[0], m.coeffs()[2], m.coeffs()[1], m.coeffs()[3]];
        assert!(m.coeffs().iter().zip(mt).all(|(a, b)| a + b == 0.0));
    }

    #[test]
    fn half_turn_generator() {
        for omega in [0.5, 1.0, 2.0, 3.7] {
            let tm = crate::dynamics::as_matrix(&m_matrix(omega).scale(&(2.0 * PI / omega))).unwrap();
            let e = expm(&tm).unwrap();
            for (x, y) in e.data().iter().zip([-1.0, 0.0, 0.0, -1.0]) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_and_flow() {
        assert_eq!(hamiltonian(0.0, 0.0, 2.0), 0.0);
        assert_eq!(hamiltonian(1.0, 0.0, 2.0), 2.0);
        assert_eq!(canonical_flow(0.0, 0.0, 2.0), (0.0, 0.0));
        assert_eq!(canonical_flow(1.0, 0.0, 2.0), (0.0, -4.0));
        for (q, p) in [(1.0, 0.0), (0.3, -2.0), (-1.1, 0.4)] {
            let l = classical_lax(q, p, 1.7);
            assert!((trace_power(&l, 2).unwrap() / 4.0 - hamiltonian(q, p, 1.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_flow_properties() {
        let prm = OscillatorParams::new(1.3, 0.7, -0.4, 1, None).unwrap();
        assert_eq!(exact_flow(&prm, 0.0), (0.7, -0.4));
        let (q, p) = exact_flow(&prm, prm.period());
        assert!((q - 0.7).abs() < 1e-12 && (p + 0.4).abs() < 1e-12);
        let h0 = hamiltonian(0.7, -0.4, 1.3);
        let h = 1e-5;
        for k in 0..50 {
            let t = prm.period() * k as f64 / 50.0;
            let (q, p) = exact_flow(&prm, t);
            assert!((hamiltonian(q, p, 1.3) - h0).abs() < 1e-10);
            let (qa, pa) = exact_flow(&prm, t + h);
            let (qb, pb) = exact_flow(&prm, t - h);
            let (dq, dp) = canonical_flow(q, p, 1.3);
            assert!(((qa - qb) / (2.0 * h) - dq).abs() < 1e-6);
            assert!(((pa - pb) / (2.0 * h) - dp).abs() < 1e-6);
        }
    }

    #[test]
    fn lax_residuals() {
        let prm = params(1, None);
        for k in 0..20 {
            let t = k as f64 * 0.37;
            assert!(lax_residual_classical(&prm, t, Derivative::Exact, Convention::Standard).unwrap() <= 1e-12);
            let fd = lax_residual_classical(&prm, t, Derivative::FiniteDifference(1e-5), Convention::Standard).unwrap();
            assert!(fd < 1e-6, "{fd}");
            assert!(lax_residual_classical(&prm, t, Derivative::Exact, Convention::Reversed).unwrap() > 1.0);
        }
    }

    #[test]
    fn missing_and_mismatched_initial_data() {
        assert_eq!(
            OscillatorParams::new(2.0, 1.0, 0.0, 2, None),
            Err(OperadError::MissingInitialData { degree: 2 })
        );
        let l3 = MultiOp::<f64>::random(2, 3, Variance::Endo, 1).unwrap();
        assert!(matches!(
            OscillatorParams::new(2.0, 1.0, 0.0, 2, Some(l3)),
            Err(OperadError::DegreeMismatch { .. })
        ));
        assert!(OscillatorParams::new(0.0, 1.0, 0.0, 1, None).is_err());
    }

    #[test]
    fn transport_in_degree_one_is_classical() {
        let prm = params(1, None);
        for k in 0..10 {
            let t = k as f64 * 0.41;
            let (q, p) = exact_flow(&prm, t);
            let diff = transport_solution(&prm, t).unwrap().sub(&classical_lax(q, p, 2.0)).unwrap().norm();
            assert!(diff <= 1e-10, "{diff}");
        }
    }

    #[test]
    fn monodromy_by_degree() {
        assert!(monodromy_report(&params(1, None)).unwrap().periodic);
        let l2 = MultiOp::<f64>::random(2, 2, Variance::Endo, 3).unwrap();
        let r2 = monodromy_report(&params(2, Some(l2.clone()))).unwrap();
        assert!(!r2.periodic);
        assert!((r2.defect - 2.0 * l2.norm()).abs() < 1e-10);
        let l3 = MultiOp::<f64>::random(2, 3, Variance::Endo, 4).unwrap();
        assert!(monodromy_report(&params(3, Some(l3))).unwrap().periodic);
    }

    #[test]
    fn integrated_system_tracks_transport() {
        let l2 = MultiOp::<f64>::random(2, 2, Variance::Endo, 8).unwrap();
        let prm = params(2, Some(l2));
        let sys = oscillator_system(&prm, 1e-3, 1.0).unwrap();
        let end = integrate(&sys, &[], |_| Ok(())).unwrap();
        let diff = end.l.sub(&transport_solution(&prm, 1.0).unwrap()).unwrap().norm();
        assert!(diff <= 1e-6, "{diff}");
        let (q, p) = exact_flow(&prm, 1.0);
        let state = end.state.unwrap();
        assert!((state[0] - q).abs() < 1e-10 && (state[1] - p).abs() < 1e-10);
    }
}

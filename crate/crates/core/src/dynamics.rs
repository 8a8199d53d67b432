//! Fixed-step integration, trajectory bookkeeping and stationary states.

use std::io::{self, Write};

use log::{debug, warn};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{hermitian_eigenvalues, DensityMatrix, LinalgError, Matrix4, C64};
use crate::model::{off_x_magnitude, Generator, GeneratorMode, X_ENTRIES};
use crate::output::{fmt_float, write_row};

/// Eigenvalues below this are reported as positivity violations.
pub const POSITIVITY_WARNING: f64 = -1e-6;
/// Entries above this magnitude mean the step size is unstable.
pub const BLOWUP_THRESHOLD: f64 = 1e6;
/// Singular values below this count as null directions.
pub const NULL_SINGULAR_VALUE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("integration blew up at t = {time} (entry magnitude {magnitude:e})")]
    StepSizeUnstable { time: f64, magnitude: f64 },
    #[error("initial state is not an X state (largest off-X entry {0:e})")]
    NotXState(f64),
    #[error("no convergence: residual {residual:e} at t = {time}")]
    NoConvergence { residual: f64, time: f64 },
    #[error("generator has no null vector (smallest singular value {0:e})")]
    NoNullVector(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Record every `record_stride`-th step. The final step is always recorded.
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_max: 20.0,
            record_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!(
                "t_max ({}) must be at least dt ({})",
                self.t_max, self.dt
            )));
        }
        if self.record_stride == 0 {
            return Err(DynamicsError::InvalidConfig("record_stride must be >= 1".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityWarning {
    pub time: f64,
    pub eigenvalue: f64,
}

/// Health metrics gathered along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryHealth {
    pub max_trace_drift: f64,
    /// Largest `max |ρ - (ρ+ρ†)/2|` removed by re-symmetrization.
    pub max_hermiticity_correction: f64,
    pub min_eigenvalue: f64,
    pub positivity_warnings: Vec<PositivityWarning>,
}

impl Default for TrajectoryHealth {
    fn default() -> Self {
        Self {
            max_trace_drift: 0.0,
            max_hermiticity_correction: 0.0,
            min_eigenvalue: f64::INFINITY,
            positivity_warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Smallest eigenvalue of each recorded state.
    pub min_eigenvalues: Vec<f64>,
    pub health: TrajectoryHealth,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    pub fn csv_header() -> Vec<String> {
        let mut cols = vec!["t".to_string()];
        for &(i, j) in &X_ENTRIES {
            cols.push(format!("re_rho{}{}", i + 1, j + 1));
            cols.push(format!("im_rho{}{}", i + 1, j + 1));
        }
        cols.push("trace".into());
        cols.push("min_eigenvalue".into());
        cols
    }

    /// Columns: `t`, re/im of the eight X-sector entries, trace, min eigenvalue.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        write_row(w, &Self::csv_header())?;
        for ((t, rho), lmin) in self.times.iter().zip(&self.states).zip(&self.min_eigenvalues) {
            let mut row = vec![fmt_float(*t)];
            for &(i, j) in &X_ENTRIES {
                row.push(fmt_float(rho[(i, j)].re));
                row.push(fmt_float(rho[(i, j)].im));
            }
            row.push(fmt_float(rho.trace().re));
            row.push(fmt_float(*lmin));
            write_row(w, &row)?;
        }
        Ok(())
    }
}

fn rk4_step<G: Generator + ?Sized>(g: &G, rho: &Matrix4, dt: f64) -> Matrix4 {
    let k1 = g.apply(rho);
    let k2 = g.apply(&(*rho + k1 * (0.5 * dt)));
    let k3 = g.apply(&(*rho + k2 * (0.5 * dt)));
    let k4 = g.apply(&(*rho + k3 * dt));
    *rho + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// One RK4 step followed by re-symmetrization. Returns the new state and the
/// size of the Hermiticity correction that was applied.
fn step_symmetrized<G: Generator + ?Sized>(g: &G, rho: &Matrix4, dt: f64, time: f64) -> Result<(Matrix4, f64), DynamicsError> {
    let raw = rk4_step(g, rho, dt);
    let sym = raw.hermitian_part();
    let magnitude = sym.max_abs();
    if !sym.is_finite() || magnitude > BLOWUP_THRESHOLD {
        return Err(DynamicsError::StepSizeUnstable { time, magnitude });
    }
    Ok((sym, raw.max_abs_diff(&sym)))
}

fn check_initial<G: Generator + ?Sized>(g: &G, rho0: &DensityMatrix) -> Result<(), DynamicsError> {
    if g.mode() == GeneratorMode::Appendix {
        let off = off_x_magnitude(rho0.matrix());
        if off > 1e-12 {
            return Err(DynamicsError::NotXState(off));
        }
    }
    Ok(())
}

/// Classical fixed-step RK4 from `rho0` over `[0, t_max]`.
pub fn integrate<G: Generator + ?Sized>(rho0: &DensityMatrix, g: &G, cfg: &IntegratorConfig) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    check_initial(g, rho0)?;
    let steps = cfg.steps();
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps / cfg.record_stride + 2),
        states: Vec::with_capacity(steps / cfg.record_stride + 2),
        min_eigenvalues: Vec::with_capacity(steps / cfg.record_stride + 2),
        health: TrajectoryHealth::default(),
    };
    let mut rho = *rho0.matrix();
    record(&mut traj, 0.0, &rho)?;
    for k in 1..=steps {
        let t = k as f64 * cfg.dt;
        let (next, correction) = step_symmetrized(g, &rho, cfg.dt, t)?;
        rho = next;
        traj.health.max_hermiticity_correction = traj.health.max_hermiticity_correction.max(correction);
        if k % cfg.record_stride == 0 || k == steps {
            record(&mut traj, t, &rho)?;
        }
    }
    if let Some(first) = traj.health.positivity_warnings.first() {
        warn!(
            "positivity violated at {} recorded times from t = {} (min eigenvalue {:e})",
            traj.health.positivity_warnings.len(),
            first.time,
            traj.health.min_eigenvalue
        );
    }
    if traj.health.max_hermiticity_correction > 0.0 {
        debug!(
            "hermiticity correction up to {:e} over {} steps",
            traj.health.max_hermiticity_correction, steps
        );
    }
    Ok(traj)
}

fn record(traj: &mut Trajectory, t: f64, rho: &Matrix4) -> Result<(), DynamicsError> {
    let drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
    let lmin = hermitian_eigenvalues(rho)?[0];
    let h = &mut traj.health;
    h.max_trace_drift = h.max_trace_drift.max(drift);
    h.min_eigenvalue = h.min_eigenvalue.min(lmin);
    if lmin < POSITIVITY_WARNING {
        h.positivity_warnings.push(PositivityWarning { time: t, eigenvalue: lmin });
    }
    traj.times.push(t);
    traj.states.push(DensityMatrix::new_unchecked(*rho));
    traj.min_eigenvalues.push(lmin);
    Ok(())
}

/// State at time `t` without recording intermediate points.
pub fn evolve_to<G: Generator + ?Sized>(rho0: &DensityMatrix, g: &G, t: f64, dt: f64) -> Result<DensityMatrix, DynamicsError> {
    check_initial(g, rho0)?;
    if t == 0.0 {
        return Ok(*rho0);
    }
    let steps = (t / dt).round().max(1.0) as usize;
    let h = t / steps as f64;
    let mut rho = *rho0.matrix();
    for k in 1..=steps {
        rho = step_symmetrized(g, &rho, h, k as f64 * h)?.0;
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// `max |y(dt) - y(dt/2)| / max |y(dt/2) - y(dt/4)|` at time `t`; about 16
/// for a fourth-order method in its asymptotic regime.
pub fn halving_ratio<G: Generator + ?Sized>(rho0: &DensityMatrix, g: &G, t: f64, dt: f64) -> Result<f64, DynamicsError> {
    let coarse = evolve_to(rho0, g, t, dt)?;
    let mid = evolve_to(rho0, g, t, dt / 2.0)?;
    let fine = evolve_to(rho0, g, t, dt / 4.0)?;
    Ok(coarse.max_abs_diff(&mid) / mid.max_abs_diff(&fine))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryMethod {
    LongTime,
    NullSpace,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryResult {
    pub state: DensityMatrix,
    /// `max |dρ/dt|` at the returned state.
    pub residual: f64,
    pub method: StationaryMethod,
    pub null_space_dimension: Option<usize>,
    /// Integration time used (long-time method only).
    pub time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    pub tol: f64,
    pub t_max: f64,
    pub dt: f64,
    /// Steps between residual checks.
    pub check_every: usize,
    /// Consecutive non-improving checks tolerated before giving up.
    pub stall_limit: usize,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            t_max: 200.0,
            dt: 1e-3,
            check_every: 100,
            stall_limit: 50,
        }
    }
}

/// Integrates until `max |dρ/dt| < tol`.
pub fn stationary_from<G: Generator + ?Sized>(
    rho0: &DensityMatrix,
    g: &G,
    opts: &StationaryOptions,
) -> Result<StationaryResult, DynamicsError> {
    check_initial(g, rho0)?;
    if !(opts.dt > 0.0) || opts.check_every == 0 {
        return Err(DynamicsError::InvalidConfig("dt and check_every must be positive".into()));
    }
    let mut rho = *rho0.matrix();
    let mut best = f64::INFINITY;
    let mut stalled = 0usize;
    let max_steps = (opts.t_max / opts.dt).round() as usize;
    let mut step = 0usize;
    loop {
        let residual = g.apply(&rho).max_abs();
        let time = step as f64 * opts.dt;
        if residual < opts.tol {
            return Ok(StationaryResult {
                state: DensityMatrix::new_unchecked(rho),
                residual,
                method: StationaryMethod::LongTime,
                null_space_dimension: None,
                time: Some(time),
            });
        }
        if residual < best {
            best = residual;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if stalled >= opts.stall_limit || step >= max_steps {
            return Err(DynamicsError::NoConvergence { residual, time });
        }
        for _ in 0..opts.check_every {
            step += 1;
            rho = step_symmetrized(g, &rho, opts.dt, step as f64 * opts.dt)?.0;
        }
    }
}

/// Null space of the vectorized generator.
#[derive(Debug, Clone)]
pub struct NullSpaceAnalysis {
    pub dimension: usize,
    /// All singular values, ascending.
    pub singular_values: Vec<f64>,
    /// Null vectors reshaped to matrices (entries outside the generator's
    /// domain are zero).
    pub basis: Vec<Matrix4>,
    /// The unique stationary state when `dimension == 1`. For larger null
    /// spaces the stationary state depends on the initial condition; use
    /// [`stationary_from`].
    pub unique: Option<StationaryResult>,
}

pub fn null_space_steady<G: Generator + ?Sized>(g: &G) -> Result<NullSpaceAnalysis, DynamicsError> {
    let sup = g.superoperator();
    let svd = sup.matrix.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let smallest = singular_values[0];
    if smallest > 1e-8 {
        return Err(DynamicsError::NoNullVector(smallest));
    }
    let basis: Vec<Matrix4> = order
        .iter()
        .filter(|&&k| svd.singular_values[k] < NULL_SINGULAR_VALUE)
        .map(|&k| {
            let v: Vec<C64> = v_t.row(k).iter().map(|z| z.conj()).collect();
            sup.unvectorize(&v)
        })
        .collect();
    let dimension = basis.len();
    let unique = if dimension == 1 {
        let raw = basis[0];
        let tr = raw.trace();
        if tr.norm() < 1e-12 {
            None
        } else {
            let m = raw.scale(tr.inv()).hermitian_part();
            let state = DensityMatrix::new(m)?;
            Some(StationaryResult {
                residual: g.apply(state.matrix()).max_abs(),
                state,
                method: StationaryMethod::NullSpace,
                null_space_dimension: Some(1),
                time: None,
            })
        }
    } else {
        None
    };
    Ok(NullSpaceAnalysis {
        dimension,
        singular_values,
        basis,
        unique,
    })
}

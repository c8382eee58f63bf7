//! Semi-implicit time integration of the coupled volume / momentum /
//! temperature system: explicit volume transport and pressure coupling,
//! implicit (coefficient-lagged) viscosity and degenerate heat diffusion via
//! tridiagonal solves, with positivity-guarded adaptive step control.
//!
//! One step, in order:
//! 1. volume per cell from the exact discrete identity `v_t = u_x`,
//! 2. one tridiagonal solve for the new velocity with viscous flux implicit
//!    and pressure frozen at `(v_new, theta_old)`,
//! 3. the temperature solve with diffusion and compression work implicit,
//!    the power-law conductivity lagged and refreshed a configured number of
//!    times, and the viscous heating evaluated with the new velocity,
//! 4. boundary re-application.
//!
//! An attempt that drives `v` or `theta` below the positivity floor is
//! rejected and retried with dt halved, down to `dt_min`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::grid::{apply_boundary, build_initial_state, Grid, ProblemKind, State};
use crate::scalar::{cast, fold_max, Scalar};
use crate::tridiag;

/// Time-step controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig<T> {
    /// Upper bound on dt; the acoustic CFL bound may lower it further.
    pub dt_initial: T,
    /// Safety factor in (0, 1] applied to the acoustic CFL bound.
    pub cfl_safety: T,
    /// Hard lower bound on dt; falling below it aborts the run.
    pub dt_min: T,
    /// Number of conductivity re-lag sweeps per temperature solve
    /// (each sweep is one more tridiagonal solve).
    pub max_newton_lag: u32,
    /// Hard lower admissibility bound for `v` and `theta` during an attempt.
    pub positivity_floor: T,
    /// Cap on rejected attempts within one step.
    pub max_rejects: u32,
}

impl<T: Scalar> SchemeConfig<T> {
    pub fn new(
        dt_initial: T,
        cfl_safety: T,
        dt_min: T,
        max_newton_lag: u32,
        positivity_floor: T,
        max_rejects: u32,
    ) -> Result<Self> {
        if !(dt_initial > T::zero()) || !(dt_min > T::zero()) || dt_min > dt_initial {
            return Err(Error::InvalidParameter(
                "need 0 < dt_min <= dt_initial".into(),
            ));
        }
        if !(cfl_safety > T::zero()) || cfl_safety > T::one() {
            return Err(Error::InvalidParameter("cfl_safety must be in (0, 1]".into()));
        }
        if !(positivity_floor > T::zero()) {
            return Err(Error::InvalidParameter(
                "positivity_floor must be > 0".into(),
            ));
        }
        Ok(Self {
            dt_initial,
            cfl_safety,
            dt_min,
            max_newton_lag,
            positivity_floor,
            max_rejects,
        })
    }
}

impl<T: Scalar> Default for SchemeConfig<T> {
    fn default() -> Self {
        Self {
            dt_initial: cast(0.01),
            cfl_safety: cast(0.4),
            dt_min: cast(1e-10),
            max_newton_lag: 2,
            positivity_floor: cast(1e-7),
            max_rejects: 60,
        }
    }
}

/// Per-step outcome summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport<T> {
    pub dt_used: T,
    pub rejected_attempts: u32,
    /// Max-norm residual of the discrete momentum relation at step end.
    pub max_flux_residual: T,
}

/// Manufactured forcing terms added to the right-hand sides; volume forcing
/// is sampled at the old time level, momentum and temperature forcing at the
/// new one, matching the splitting.
pub(crate) struct Sources<'a, T> {
    pub v: &'a dyn Fn(T, T) -> T,
    pub u: &'a dyn Fn(T, T) -> T,
    pub theta: &'a dyn Fn(T, T) -> T,
}

/// Why a step attempt did not produce a state. `Retry` covers conditions
/// cured by a smaller dt (positivity-floor violations and loss of the
/// advection margin in the temperature rows); `Fatal` is surfaced as-is.
pub(crate) enum Rejection {
    Retry,
    Fatal(Error),
}

impl From<Error> for Rejection {
    fn from(e: Error) -> Self {
        Rejection::Fatal(e)
    }
}

/// Acoustic CFL bound: `cfl_safety * dx / max_i c_i` with the per-cell sound
/// speed in mass coordinates `c = sqrt(R * theta * (1 + R / c_v)) / v`.
/// Diffusion is implicit and does not constrain dt.
pub fn stable_dt<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
) -> T {
    let gamma_factor = T::one() + params.gas_constant / params.heat_capacity;
    let max_speed = fold_max(
        T::zero(),
        state
            .v
            .iter()
            .zip(&state.theta)
            .map(|(&v, &t)| (params.gas_constant * t * gamma_factor).sqrt() / v),
    );
    config.cfl_safety * grid.dx / max_speed
}

/// Advances the state by one adaptive step.
pub fn step<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
) -> Result<(State<T>, StepReport<T>)> {
    step_with_sources(state, grid, params, config, None)
}

pub(crate) fn step_with_sources<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
    sources: Option<&Sources<'_, T>>,
) -> Result<(State<T>, StepReport<T>)> {
    debug_assert!(state.is_sized_for(grid));
    let dt0 = config.dt_initial.min(stable_dt(state, grid, params, config));
    if !dt0.is_finite() || !(dt0 > T::zero()) {
        return Err(Error::StepFailure {
            time: state.time.to_f64().unwrap_or(f64::NAN),
            dt: dt0.to_f64().unwrap_or(f64::NAN),
            dt_min: config.dt_min.to_f64().unwrap_or(f64::NAN),
            rejected: 0,
        });
    }

    let mut dt = dt0;
    let mut rejected = 0u32;
    loop {
        if dt < config.dt_min || rejected > config.max_rejects {
            return Err(Error::StepFailure {
                time: state.time.to_f64().unwrap_or(f64::NAN),
                dt: dt.to_f64().unwrap_or(f64::NAN),
                dt_min: config.dt_min.to_f64().unwrap_or(f64::NAN),
                rejected,
            });
        }
        match attempt_step(state, grid, params, config, sources, dt) {
            Ok(new_state) => {
                let residual = momentum_residual(state, &new_state, grid, params, sources, dt);
                return Ok((
                    new_state,
                    StepReport {
                        dt_used: dt,
                        rejected_attempts: rejected,
                        max_flux_residual: residual,
                    },
                ));
            }
            Err(Rejection::Retry) => {
                rejected += 1;
                dt = dt * cast::<T>(0.5);
            }
            Err(Rejection::Fatal(e)) => return Err(e),
        }
    }
}

fn attempt_step<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
    sources: Option<&Sources<'_, T>>,
    dt: T,
) -> std::result::Result<State<T>, Rejection> {
    let n = grid.n_cells;
    let dx = grid.dx;
    let t_old = state.time;
    let t_new = t_old + dt;
    let floor = config.positivity_floor;

    // (a) exact discrete volume identity, explicit in the old velocity.
    let mut v_new = Vec::with_capacity(n);
    for i in 0..n {
        let ux = (state.u[i + 1] - state.u[i]) / dx;
        let mut val = state.v[i] + dt * ux;
        if let Some(s) = sources {
            val = val + dt * (s.v)(grid.cell_center(i), t_old);
        }
        if !(val >= floor) {
            return Err(Rejection::Retry);
        }
        v_new.push(val);
    }

    // (b) implicit momentum on the interior edges; window-end velocities are
    // pinned to zero by the boundary conditions of all three problems.
    let u_new = solve_momentum(state, &v_new, grid, params, sources, dt, t_new)?;

    // (c) implicit temperature with lagged conductivity.
    let ux_new: Vec<T> = (0..n).map(|i| (u_new[i + 1] - u_new[i]) / dx).collect();
    let theta_new = solve_temperature(
        &state.theta,
        &v_new,
        &ux_new,
        grid,
        params,
        dt,
        config.max_newton_lag,
        floor,
        sources.map(|s| (s.theta, t_new)),
    )?;

    let mut out = State {
        time: t_new,
        v: v_new,
        theta: theta_new,
        u: u_new,
    };
    apply_boundary(&mut out, grid);
    Ok(out)
}

fn solve_momentum<T: Scalar>(
    state: &State<T>,
    v_new: &[T],
    grid: &Grid<T>,
    params: &GasParams<T>,
    sources: Option<&Sources<'_, T>>,
    dt: T,
    t_new: T,
) -> std::result::Result<Vec<T>, Rejection> {
    let n = grid.n_cells;
    let dx = grid.dx;
    let lam = dt * params.viscosity_coeff / (dx * dx);
    let m = n - 1;

    let mut sub = vec![T::zero(); m];
    let mut diag = vec![T::zero(); m];
    let mut sup = vec![T::zero(); m];
    let mut rhs = vec![T::zero(); m];
    for j in 1..n {
        let row = j - 1;
        let inv_l = T::one() / v_new[j - 1];
        let inv_r = T::one() / v_new[j];
        diag[row] = T::one() + lam * (inv_l + inv_r);
        if row > 0 {
            sub[row] = -lam * inv_l;
        }
        if row + 1 < m {
            sup[row] = -lam * inv_r;
        }
        let p_l = params.gas_constant * state.theta[j - 1] * inv_l;
        let p_r = params.gas_constant * state.theta[j] * inv_r;
        rhs[row] = state.u[j] - dt / dx * (p_r - p_l);
        if let Some(s) = sources {
            rhs[row] = rhs[row] + dt * (s.u)(grid.edge(j), t_new);
        }
    }
    let inner = tridiag::solve("momentum", &sub, &diag, &sup, &rhs)?;

    let mut u_new = vec![T::zero(); n + 1];
    u_new[1..n].copy_from_slice(&inner);
    Ok(u_new)
}

/// Thermal boundary treatment of one window end in the implicit solve.
#[derive(Clone, Copy)]
enum ThermalBc<T> {
    /// Ghost cell pinned to the far-field equilibrium `(v, theta) = (1, 1)`.
    FarField,
    /// Insulated wall: the boundary heat flux is identically zero.
    ZeroFlux,
    /// Fixed wall temperature, enforced through the implicit linear ghost
    /// `theta_ghost = 2 w - theta_adjacent`.
    FixedWall(T),
}

fn thermal_bcs<T: Scalar>(problem: ProblemKind) -> (ThermalBc<T>, ThermalBc<T>) {
    match problem {
        ProblemKind::Cauchy => (ThermalBc::FarField, ThermalBc::FarField),
        ProblemKind::HalfLineInsulated => (ThermalBc::ZeroFlux, ThermalBc::FarField),
        ProblemKind::HalfLineIsothermal => (ThermalBc::FixedWall(T::one()), ThermalBc::FarField),
    }
}

/// Edge diffusion coefficient `kappa * mean(theta)^beta * mean(1/v)`:
/// arithmetic mean for the lagged temperature, harmonic mean for the volume
/// (the flux coefficient is `1/v`).
fn edge_coefficient<T: Scalar>(params: &GasParams<T>, tl: T, tr: T, vl: T, vr: T) -> T {
    let half = cast::<T>(0.5);
    let mean_theta = half * (tl + tr);
    let inv_v = half * (T::one() / vl + T::one() / vr);
    params.conductivity_coeff * mean_theta.powf(params.conductivity_exponent) * inv_v
}

/// Forcing term of the temperature solve, sampled at the new time level.
pub(crate) type ThetaSource<'a, T> = (&'a dyn Fn(T, T) -> T, T);

/// One implicit temperature update with `lag_sweeps` conductivity refreshes.
/// Exposed within the crate so the pure-diffusion maximum principle can be
/// exercised directly with a frozen velocity field.
#[allow(clippy::too_many_arguments)]
pub(crate) fn solve_temperature<T: Scalar>(
    theta_old: &[T],
    v_new: &[T],
    ux: &[T],
    grid: &Grid<T>,
    params: &GasParams<T>,
    dt: T,
    lag_sweeps: u32,
    positivity_floor: T,
    source: Option<ThetaSource<'_, T>>,
) -> std::result::Result<Vec<T>, Rejection> {
    let n = grid.n_cells;
    let dx = grid.dx;
    let cv = params.heat_capacity;
    let r_over_cv = params.gas_constant / cv;
    let heating = params.viscosity_coeff / cv;
    let eta = dt / (cv * dx * dx);
    let two = cast::<T>(2.0);
    let (bc_left, bc_right) = thermal_bcs::<T>(grid.problem);

    let mut theta_lag = theta_old.to_vec();
    let mut theta_new = theta_old.to_vec();

    for sweep in 0..=lag_sweeps {
        // Interior edge coefficients: k[j] couples cells j-1 and j.
        let mut k = vec![T::zero(); n + 1];
        for j in 1..n {
            k[j] = edge_coefficient(
                params,
                theta_lag[j - 1],
                theta_lag[j],
                v_new[j - 1],
                v_new[j],
            );
        }

        let mut sub = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        let mut sup = vec![T::zero(); n];
        let mut rhs = vec![T::zero(); n];
        for i in 0..n {
            let adv = dt * r_over_cv * ux[i] / v_new[i];
            // The compression term carries the whole dominance margin of the
            // row; a nonpositive margin is a too-large-dt condition.
            if !(T::one() + adv > T::zero()) {
                return Err(Rejection::Retry);
            }
            let k_left = if i > 0 { k[i] } else { T::zero() };
            let k_right = if i + 1 < n { k[i + 1] } else { T::zero() };
            diag[i] = T::one() + adv + eta * (k_left + k_right);
            if i > 0 {
                sub[i] = -eta * k_left;
            }
            if i + 1 < n {
                sup[i] = -eta * k_right;
            }
            rhs[i] = theta_old[i] + dt * heating * ux[i] * ux[i] / v_new[i];
            if let Some((s, t_new)) = source {
                rhs[i] = rhs[i] + dt * s(grid.cell_center(i), t_new);
            }
        }

        match bc_left {
            ThermalBc::FarField => {
                let kb = edge_coefficient(params, T::one(), theta_lag[0], T::one(), v_new[0]);
                diag[0] = diag[0] + eta * kb;
                rhs[0] = rhs[0] + eta * kb;
            }
            ThermalBc::ZeroFlux => {}
            ThermalBc::FixedWall(w) => {
                let ghost = two * w - theta_lag[0];
                let kb = edge_coefficient(params, ghost, theta_lag[0], v_new[0], v_new[0]);
                diag[0] = diag[0] + two * eta * kb;
                rhs[0] = rhs[0] + two * eta * kb * w;
            }
        }
        match bc_right {
            ThermalBc::FarField => {
                let kb = edge_coefficient(
                    params,
                    theta_lag[n - 1],
                    T::one(),
                    v_new[n - 1],
                    T::one(),
                );
                diag[n - 1] = diag[n - 1] + eta * kb;
                rhs[n - 1] = rhs[n - 1] + eta * kb;
            }
            ThermalBc::ZeroFlux => {}
            ThermalBc::FixedWall(w) => {
                let ghost = two * w - theta_lag[n - 1];
                let kb = edge_coefficient(params, theta_lag[n - 1], ghost, v_new[n - 1], v_new[n - 1]);
                diag[n - 1] = diag[n - 1] + two * eta * kb;
                rhs[n - 1] = rhs[n - 1] + two * eta * kb * w;
            }
        }

        theta_new = tridiag::solve("temperature", &sub, &diag, &sup, &rhs)?;
        for &t in &theta_new {
            if !(t >= positivity_floor) {
                return Err(Rejection::Retry);
            }
        }
        if sweep < lag_sweeps {
            theta_lag.copy_from_slice(&theta_new);
        }
    }
    Ok(theta_new)
}

/// Residual of the implicit momentum relation on the interior edges, with
/// the stress evaluated from the solved state. Near machine zero whenever
/// the tridiagonal solve succeeded.
fn momentum_residual<T: Scalar>(
    old: &State<T>,
    new: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
    sources: Option<&Sources<'_, T>>,
    dt: T,
) -> T {
    let n = grid.n_cells;
    let dx = grid.dx;
    let stress = |i: usize| {
        params.viscosity_coeff * (new.u[i + 1] - new.u[i]) / (dx * new.v[i])
            - params.gas_constant * old.theta[i] / new.v[i]
    };
    let mut res = T::zero();
    for j in 1..n {
        let mut r = (new.u[j] - old.u[j]) / dt - (stress(j) - stress(j - 1)) / dx;
        if let Some(s) = sources {
            r = r - (s.u)(grid.edge(j), new.time);
        }
        res = res.max(r.abs());
    }
    res
}

/// Observation sink invoked by [`run`]: once on the initial state (with no
/// report) and then at the configured step cadence.
pub trait Observer<T: Scalar> {
    fn observe(&mut self, state: &State<T>, grid: &Grid<T>, report: Option<&StepReport<T>>);
}

/// Shared-ownership initial profile function.
pub type ProfileFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// The three initial profiles as functions of the mass coordinate.
#[derive(Clone)]
pub struct InitialProfiles<T> {
    pub v0: ProfileFn<T>,
    pub u0: ProfileFn<T>,
    pub theta0: ProfileFn<T>,
}

impl<T: Scalar> InitialProfiles<T> {
    pub fn new(
        v0: impl Fn(T) -> T + Send + Sync + 'static,
        u0: impl Fn(T) -> T + Send + Sync + 'static,
        theta0: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            v0: Arc::new(v0),
            u0: Arc::new(u0),
            theta0: Arc::new(theta0),
        }
    }

    /// The far-field equilibrium `(1, 0, 1)`.
    pub fn equilibrium() -> Self {
        Self::new(|_| T::one(), |_| T::zero(), |_| T::one())
    }
}

/// A complete problem description: window, mesh resolution, initial data.
#[derive(Clone)]
pub struct ProblemSetup<T> {
    pub problem: ProblemKind,
    pub truncation_length: T,
    pub n_cells: usize,
    pub initial: InitialProfiles<T>,
}

impl<T: Scalar> ProblemSetup<T> {
    pub fn grid(&self) -> Result<Grid<T>> {
        Grid::new(self.problem, self.truncation_length, self.n_cells)
    }

    pub fn initial_state(&self, grid: &Grid<T>) -> Result<State<T>> {
        build_initial_state(
            grid,
            self.initial.v0.as_ref(),
            self.initial.u0.as_ref(),
            self.initial.theta0.as_ref(),
        )
    }
}

/// Successful run summary.
#[derive(Debug, Clone)]
pub struct RunOutcome<T> {
    pub state: State<T>,
    pub steps: u64,
    pub rejected_total: u64,
}

/// Failed run: the error plus the last state that was still valid.
#[derive(Debug)]
pub struct RunFailure<T> {
    pub error: Error,
    pub last_state: State<T>,
}

impl<T: Scalar> std::fmt::Display for RunFailure<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "run failed at t = {}: {}", self.last_state.time, self.error)
    }
}

impl<T: Scalar> std::error::Error for RunFailure<T> {}

/// Integrates from `t = 0` to `t_end`, notifying every observer on the
/// initial state and then every `observe_every`-th step plus the final one.
/// Fully deterministic: fixed iteration order, no randomness anywhere.
pub fn run<T: Scalar>(
    setup: &ProblemSetup<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
    t_end: T,
    observe_every: u64,
    observers: &mut [&mut dyn Observer<T>],
) -> std::result::Result<RunOutcome<T>, RunFailure<T>> {
    let fail_early = |error: Error| RunFailure {
        error,
        last_state: State {
            time: T::zero(),
            v: vec![],
            theta: vec![],
            u: vec![],
        },
    };
    if !(t_end >= T::zero()) {
        return Err(fail_early(Error::InvalidParameter(
            "t_end must be >= 0".into(),
        )));
    }
    let observe_every = observe_every.max(1);
    let grid = setup.grid().map_err(fail_early)?;
    let mut state = setup.initial_state(&grid).map_err(fail_early)?;

    for obs in observers.iter_mut() {
        obs.observe(&state, &grid, None);
    }

    let mut steps = 0u64;
    let mut rejected_total = 0u64;
    while t_end - state.time > config.dt_min {
        let remaining = t_end - state.time;
        let mut cfg = *config;
        if remaining < cfg.dt_initial {
            cfg.dt_initial = remaining;
        }
        match step(&state, &grid, params, &cfg) {
            Ok((next, report)) => {
                state = next;
                steps += 1;
                rejected_total += u64::from(report.rejected_attempts);
                let done = t_end - state.time <= config.dt_min;
                if done || steps.is_multiple_of(observe_every) {
                    for obs in observers.iter_mut() {
                        obs.observe(&state, &grid, Some(&report));
                    }
                }
            }
            Err(error) => {
                return Err(RunFailure {
                    error,
                    last_state: state,
                })
            }
        }
    }

    Ok(RunOutcome {
        state,
        steps,
        rejected_total,
    })
}

//! Manufactured-solution convergence studies, an independent fully explicit
//! reference integrator, and window-truncation studies.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::grid::{apply_boundary, ghost_from, Grid, ProblemKind, State};
use crate::scalar::{cast, Scalar};
use crate::solver::{
    step, step_with_sources, InitialProfiles, ProblemSetup, SchemeConfig, Sources,
};

type Field2<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// A closed-form field of `(x, t)` with the derivatives needed to assemble
/// forcing terms.
#[derive(Clone)]
pub struct FieldSpec<T> {
    pub value: Field2<T>,
    pub d_x: Field2<T>,
    pub d_xx: Field2<T>,
    pub d_t: Field2<T>,
}

impl<T: Scalar> FieldSpec<T> {
    pub fn new(
        value: impl Fn(T, T) -> T + Send + Sync + 'static,
        d_x: impl Fn(T, T) -> T + Send + Sync + 'static,
        d_xx: impl Fn(T, T) -> T + Send + Sync + 'static,
        d_t: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            d_x: Arc::new(d_x),
            d_xx: Arc::new(d_xx),
            d_t: Arc::new(d_t),
        }
    }

    fn constant(c: f64) -> Self {
        let c: T = cast(c);
        Self::new(
            move |_, _| c,
            |_, _| T::zero(),
            |_, _| T::zero(),
            |_, _| T::zero(),
        )
    }
}

/// Smooth exact fields plus the closed-form residuals they induce in each
/// equation, used as additive forcing so the discrete solution can be
/// compared against a known answer.
#[derive(Clone)]
pub struct ManufacturedCase<T> {
    pub name: &'static str,
    pub problem: ProblemKind,
    pub length: T,
    pub v: FieldSpec<T>,
    pub u: FieldSpec<T>,
    pub theta: FieldSpec<T>,
}

impl<T: Scalar> ManufacturedCase<T> {
    /// Exact fields constant at the far-field equilibrium; every forcing
    /// term is identically zero.
    pub fn equilibrium(problem: ProblemKind, length: T) -> Self {
        Self {
            name: "equilibrium",
            problem,
            length,
            v: FieldSpec::constant(1.0),
            u: FieldSpec::constant(0.0),
            theta: FieldSpec::constant(1.0),
        }
    }

    /// Half-wave profiles decaying in time on the insulated half line:
    /// `u` vanishes at both window edges, the temperature has zero slope at
    /// the wall and matches the far-field value at the outer edge.
    pub fn decaying_wave(length: f64) -> Self {
        let l = length;
        let s = std::f64::consts::PI / l;
        let (a, b, c) = (0.1, 0.1, 0.2);
        let sx = move |x: T| s * x.to_f64().unwrap();
        let et = move |t: T| (-t.to_f64().unwrap()).exp();
        Self {
            name: "decaying-wave",
            problem: ProblemKind::HalfLineInsulated,
            length: cast(l),
            v: FieldSpec::new(
                move |x, t| cast::<T>(1.0 + a * sx(x).sin() * et(t)),
                move |x, t| cast::<T>(a * s * sx(x).cos() * et(t)),
                move |x, t| cast::<T>(-a * s * s * sx(x).sin() * et(t)),
                move |x, t| cast::<T>(-a * sx(x).sin() * et(t)),
            ),
            u: FieldSpec::new(
                move |x, t| cast::<T>(b * sx(x).sin() * et(t)),
                move |x, t| cast::<T>(b * s * sx(x).cos() * et(t)),
                move |x, t| cast::<T>(-b * s * s * sx(x).sin() * et(t)),
                move |x, t| cast::<T>(-b * sx(x).sin() * et(t)),
            ),
            theta: FieldSpec::new(
                move |x, t| cast::<T>(1.0 + 0.5 * c * (1.0 + sx(x).cos()) * et(t)),
                move |x, t| cast::<T>(-0.5 * c * s * sx(x).sin() * et(t)),
                move |x, t| cast::<T>(-0.5 * c * s * s * sx(x).cos() * et(t)),
                move |x, t| cast::<T>(-0.5 * c * (1.0 + sx(x).cos()) * et(t)),
            ),
        }
    }

    /// A second smooth case with full-wave profiles and mixed decay rates,
    /// compatible with the same boundary operators.
    pub fn modulated_hump(length: f64) -> Self {
        let l = length;
        let s = std::f64::consts::PI / l;
        let (a, b, c) = (0.12, 0.08, 0.15);
        let sx2 = move |x: T| 2.0 * s * x.to_f64().unwrap();
        let eh = move |t: T| (-0.5 * t.to_f64().unwrap()).exp();
        let et = move |t: T| (-t.to_f64().unwrap()).exp();
        Self {
            name: "modulated-hump",
            problem: ProblemKind::HalfLineInsulated,
            length: cast(l),
            v: FieldSpec::new(
                move |x, t| cast::<T>(1.0 + 0.5 * a * (1.0 - sx2(x).cos()) * eh(t)),
                move |x, t| cast::<T>(a * s * sx2(x).sin() * eh(t)),
                move |x, t| cast::<T>(2.0 * a * s * s * sx2(x).cos() * eh(t)),
                move |x, t| cast::<T>(-0.25 * a * (1.0 - sx2(x).cos()) * eh(t)),
            ),
            u: FieldSpec::new(
                move |x, t| cast::<T>(b * sx2(x).sin() * eh(t)),
                move |x, t| cast::<T>(2.0 * b * s * sx2(x).cos() * eh(t)),
                move |x, t| cast::<T>(-4.0 * b * s * s * sx2(x).sin() * eh(t)),
                move |x, t| cast::<T>(-0.5 * b * sx2(x).sin() * eh(t)),
            ),
            theta: FieldSpec::new(
                move |x, t| cast::<T>(1.0 + 0.5 * c * (1.0 - sx2(x).cos()) * et(t)),
                move |x, t| cast::<T>(c * s * sx2(x).sin() * et(t)),
                move |x, t| cast::<T>(2.0 * c * s * s * sx2(x).cos() * et(t)),
                move |x, t| cast::<T>(-0.5 * c * (1.0 - sx2(x).cos()) * et(t)),
            ),
        }
    }

    /// Residual of the volume equation on the exact fields.
    pub fn source_v(&self, x: T, t: T) -> T {
        (self.v.d_t)(x, t) - (self.u.d_x)(x, t)
    }

    /// Residual of the momentum equation on the exact fields.
    pub fn source_u(&self, params: &GasParams<T>, x: T, t: T) -> T {
        let v = (self.v.value)(x, t);
        let vx = (self.v.d_x)(x, t);
        let th = (self.theta.value)(x, t);
        let thx = (self.theta.d_x)(x, t);
        let ux = (self.u.d_x)(x, t);
        let uxx = (self.u.d_xx)(x, t);
        let r = params.gas_constant;
        let mu = params.viscosity_coeff;
        (self.u.d_t)(x, t) + r * (thx / v - th * vx / (v * v))
            - mu * (uxx / v - ux * vx / (v * v))
    }

    /// Residual of the temperature equation on the exact fields.
    pub fn source_theta(&self, params: &GasParams<T>, x: T, t: T) -> T {
        let v = (self.v.value)(x, t);
        let vx = (self.v.d_x)(x, t);
        let th = (self.theta.value)(x, t);
        let thx = (self.theta.d_x)(x, t);
        let thxx = (self.theta.d_xx)(x, t);
        let ux = (self.u.d_x)(x, t);
        let cv = params.heat_capacity;
        let r = params.gas_constant;
        let kappa = params.conductivity_coeff;
        let beta = params.conductivity_exponent;
        let mu = params.viscosity_coeff;
        let diffusion = kappa
            * ((beta * th.powf(beta - T::one()) * thx * thx + th.powf(beta) * thxx) / v
                - th.powf(beta) * thx * vx / (v * v));
        (self.theta.d_t)(x, t) + r / cv * th / v * ux - diffusion / cv
            - mu / cv * ux * ux / v
    }

    /// Exact fields sampled on the staggered mesh at time `t`.
    pub fn exact_state(&self, grid: &Grid<T>, t: T) -> State<T> {
        State {
            time: t,
            v: (0..grid.n_cells)
                .map(|i| (self.v.value)(grid.cell_center(i), t))
                .collect(),
            theta: (0..grid.n_cells)
                .map(|i| (self.theta.value)(grid.cell_center(i), t))
                .collect(),
            u: (0..=grid.n_cells)
                .map(|j| (self.u.value)(grid.edge(j), t))
                .collect(),
        }
    }

    /// The exact fields at `t = 0` as initial profiles.
    pub fn initial_profiles(&self) -> InitialProfiles<T> {
        let v = self.v.value.clone();
        let u = self.u.value.clone();
        let th = self.theta.value.clone();
        InitialProfiles {
            v0: Arc::new(move |x| v(x, T::zero())),
            u0: Arc::new(move |x| u(x, T::zero())),
            theta0: Arc::new(move |x| th(x, T::zero())),
        }
    }
}

/// Integrates the forced system on `n_cells` cells with a fixed step.
pub fn mms_run<T: Scalar>(
    case: &ManufacturedCase<T>,
    params: &GasParams<T>,
    n_cells: usize,
    dt: T,
    t_end: T,
) -> Result<(Grid<T>, State<T>)> {
    let grid = Grid::new(case.problem, case.length, n_cells)?;
    let mut state = case.exact_state(&grid, T::zero());
    apply_boundary(&mut state, &grid);
    let steps = (t_end / dt)
        .round()
        .to_f64()
        .map(|s| s as u64)
        .unwrap_or(0)
        .max(1);
    let config = SchemeConfig::new(dt, T::one(), dt * cast::<T>(1e-8), 2, cast(1e-10), 80)?;

    let sv = |x: T, t: T| case.source_v(x, t);
    let su = |x: T, t: T| case.source_u(params, x, t);
    let st = |x: T, t: T| case.source_theta(params, x, t);
    let sources = Sources {
        v: &sv,
        u: &su,
        theta: &st,
    };
    for _ in 0..steps {
        let (next, report) = step_with_sources(&state, &grid, params, &config, Some(&sources))?;
        if report.dt_used != dt {
            return Err(Error::InvalidParameter(format!(
                "study dt = {dt} was limited by the acoustic bound; lower it"
            )));
        }
        state = next;
    }
    Ok((grid, state))
}

/// Max-norm error over all three fields against the exact solution at the
/// state's own time.
pub fn error_vs_exact<T: Scalar>(
    case: &ManufacturedCase<T>,
    grid: &Grid<T>,
    state: &State<T>,
) -> T {
    let exact = case.exact_state(grid, state.time);
    max_state_difference(state, &exact)
}

fn max_state_difference<T: Scalar>(a: &State<T>, b: &State<T>) -> T {
    let mut m = T::zero();
    for (x, y) in a.v.iter().zip(&b.v) {
        m = m.max((*x - *y).abs());
    }
    for (x, y) in a.theta.iter().zip(&b.theta) {
        m = m.max((*x - *y).abs());
    }
    for (x, y) in a.u.iter().zip(&b.u) {
        m = m.max((*x - *y).abs());
    }
    m
}

/// Which parameter a convergence study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementMode {
    /// Halve dx and dt together; the base dt must be small enough that the
    /// time error stays subdominant on the finest level.
    Spatial,
    /// Halve dt on a fixed grid, measured against a much finer-dt run of the
    /// same discretization so the fixed spatial error cancels.
    Temporal,
}

/// Resolution ladder of a convergence study.
#[derive(Debug, Clone, Copy)]
pub struct StudySettings<T> {
    pub base_cells: usize,
    pub base_dt: T,
    pub t_end: T,
    pub levels: usize,
}

/// One refinement level of a convergence table.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow<T> {
    pub level: usize,
    pub dx: T,
    pub dt: T,
    pub error: T,
    /// `log2(e_prev / e)`; absent on the coarsest level.
    pub order: Option<T>,
}

/// Runs the refinement ladder and reports max-norm errors with observed
/// orders between consecutive levels.
pub fn convergence_study<T: Scalar>(
    case: &ManufacturedCase<T>,
    params: &GasParams<T>,
    settings: &StudySettings<T>,
    mode: RefinementMode,
) -> Result<Vec<ConvergenceRow<T>>> {
    if settings.levels < 3 {
        return Err(Error::InvalidParameter("levels must be >= 3".into()));
    }
    let two = cast::<T>(2.0);

    let reference = match mode {
        RefinementMode::Spatial => None,
        RefinementMode::Temporal => {
            let dt_ref = settings.base_dt
                / cast::<T>(f64::powi(2.0, settings.levels as i32 + 4));
            let (_, state) = mms_run(case, params, settings.base_cells, dt_ref, settings.t_end)
                .map_err(|e| Error::StudyLevel {
                    level: usize::MAX,
                    source: Box::new(e),
                })?;
            Some(state)
        }
    };

    let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(settings.levels);
    for level in 0..settings.levels {
        let scale = f64::powi(2.0, level as i32);
        let (n, dt) = match mode {
            RefinementMode::Spatial => (
                settings.base_cells * scale as usize,
                settings.base_dt / cast::<T>(scale),
            ),
            RefinementMode::Temporal => (settings.base_cells, settings.base_dt / cast::<T>(scale)),
        };
        let (grid, state) = mms_run(case, params, n, dt, settings.t_end)
            .map_err(|e| Error::StudyLevel {
                level,
                source: Box::new(e),
            })?;
        let error = match (&mode, &reference) {
            (RefinementMode::Spatial, _) => error_vs_exact(case, &grid, &state),
            (RefinementMode::Temporal, Some(ref_state)) => max_state_difference(&state, ref_state),
            (RefinementMode::Temporal, None) => unreachable!(),
        };
        let order = rows
            .last()
            .map(|prev: &ConvergenceRow<T>| (prev.error / error).ln() / two.ln());
        rows.push(ConvergenceRow {
            level,
            dx: grid.dx,
            dt,
            error,
            order,
        });
    }
    Ok(rows)
}

/// Settings of the explicit-reference comparison.
#[derive(Debug, Clone, Copy)]
pub struct OracleSettings<T> {
    /// Fixed production step; must sit below the acoustic bound.
    pub dt: T,
    /// The explicit reference runs at `dt / ref_ratio`.
    pub ref_ratio: u64,
    pub t_end: T,
}

/// Runs the semi-implicit production scheme and a fully explicit reference
/// of the same spatial discretization on the same grid; returns the max-norm
/// discrepancy over all fields at the final time.
pub fn oracle_compare<T: Scalar>(
    setup: &ProblemSetup<T>,
    params: &GasParams<T>,
    settings: &OracleSettings<T>,
) -> Result<T> {
    let grid = setup.grid()?;
    let initial = setup.initial_state(&grid)?;
    let steps = (settings.t_end / settings.dt)
        .round()
        .to_f64()
        .map(|s| s as u64)
        .unwrap_or(0)
        .max(1);

    let config = SchemeConfig::new(
        settings.dt,
        T::one(),
        settings.dt * cast::<T>(1e-8),
        2,
        cast(1e-10),
        80,
    )?;
    let mut produced = initial.clone();
    for _ in 0..steps {
        let (next, report) = step(&produced, &grid, params, &config)?;
        if report.dt_used != settings.dt {
            return Err(Error::InvalidParameter(format!(
                "oracle dt = {} was limited by the acoustic bound; lower it",
                settings.dt
            )));
        }
        produced = next;
    }

    let dt_ref = settings.dt / cast::<T>(settings.ref_ratio as f64);
    let reference = explicit_reference_run(&grid, &initial, params, dt_ref, steps * settings.ref_ratio)?;

    Ok(max_state_difference(&produced, &reference))
}

/// Forward-Euler integration of the same spatial discretization, written
/// independently of the implicit path. Used purely as a reference.
pub fn explicit_reference_run<T: Scalar>(
    grid: &Grid<T>,
    initial: &State<T>,
    params: &GasParams<T>,
    dt: T,
    steps: u64,
) -> Result<State<T>> {
    let n = grid.n_cells;
    let dx = grid.dx;
    let half = cast::<T>(0.5);
    let r = params.gas_constant;
    let cv = params.heat_capacity;
    let mu = params.viscosity_coeff;
    let kappa = params.conductivity_coeff;
    let beta = params.conductivity_exponent;

    let mut s = initial.clone();
    let mut check_counter = 0u32;
    for _ in 0..steps {
        let gh = ghost_from(grid.problem, &s.v, &s.theta);

        // Cell quantities at the current level.
        let ux: Vec<T> = (0..n).map(|i| (s.u[i + 1] - s.u[i]) / dx).collect();
        let stress: Vec<T> = (0..n)
            .map(|i| (mu * ux[i] - r * s.theta[i]) / s.v[i])
            .collect();

        // Heat flux on every edge, ghost cells included.
        let edge_flux = |tl: T, tr: T, vl: T, vr: T| {
            let mean_theta = half * (tl + tr);
            let inv_v = half * (T::one() / vl + T::one() / vr);
            kappa * mean_theta.powf(beta) * inv_v * (tr - tl) / dx
        };
        let mut flux = vec![T::zero(); n + 1];
        flux[0] = match grid.problem {
            ProblemKind::HalfLineInsulated => T::zero(),
            _ => edge_flux(gh.theta_left, s.theta[0], gh.v_left, s.v[0]),
        };
        for (j, f) in flux.iter_mut().enumerate().take(n).skip(1) {
            *f = edge_flux(s.theta[j - 1], s.theta[j], s.v[j - 1], s.v[j]);
        }
        flux[n] = edge_flux(s.theta[n - 1], gh.theta_right, s.v[n - 1], gh.v_right);

        let mut v_new = Vec::with_capacity(n);
        let mut theta_new = Vec::with_capacity(n);
        for i in 0..n {
            v_new.push(s.v[i] + dt * ux[i]);
            let rate = -r * s.theta[i] * ux[i] / s.v[i]
                + (flux[i + 1] - flux[i]) / dx
                + mu * ux[i] * ux[i] / s.v[i];
            theta_new.push(s.theta[i] + dt * rate / cv);
        }
        let mut u_new = vec![T::zero(); n + 1];
        for j in 1..n {
            u_new[j] = s.u[j] + dt * (stress[j] - stress[j - 1]) / dx;
        }

        s = State {
            time: s.time + dt,
            v: v_new,
            theta: theta_new,
            u: u_new,
        };

        check_counter += 1;
        if check_counter == 1024 {
            check_counter = 0;
            if !explicit_state_ok(&s) {
                return Err(Error::OracleUnstable(s.time.to_f64().unwrap_or(f64::NAN)));
            }
        }
    }
    if !explicit_state_ok(&s) {
        return Err(Error::OracleUnstable(s.time.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(s)
}

fn explicit_state_ok<T: Scalar>(s: &State<T>) -> bool {
    s.v.iter().all(|x| x.is_finite() && *x > T::zero())
        && s.theta.iter().all(|x| x.is_finite() && *x > T::zero())
        && s.u.iter().all(|x| x.is_finite())
}

/// One window length of a truncation study.
#[derive(Debug, Clone, Copy)]
pub struct TruncationRow<T> {
    pub length: T,
    /// Max-norm difference to the largest-window run on the common interior.
    pub discrepancy: T,
}

/// Runs the same problem on nested windows sharing `dx` and compares every
/// run against the largest window on the cells of the smallest one.
pub fn truncation_study<T: Scalar>(
    problem: ProblemKind,
    initial: &InitialProfiles<T>,
    params: &GasParams<T>,
    config: &SchemeConfig<T>,
    t_end: T,
    dx: T,
    lengths: &[T],
) -> Result<Vec<TruncationRow<T>>> {
    if lengths.len() < 2 {
        return Err(Error::InvalidParameter(
            "truncation study needs at least two lengths".into(),
        ));
    }
    for w in lengths.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "lengths must be strictly increasing".into(),
            ));
        }
    }

    let mut runs: Vec<(Grid<T>, State<T>)> = Vec::with_capacity(lengths.len());
    for (idx, &length) in lengths.iter().enumerate() {
        let cells = (length / dx)
            .round()
            .to_f64()
            .map(|c| c as usize)
            .unwrap_or(0);
        let setup = ProblemSetup {
            problem,
            truncation_length: dx * cast::<T>(cells as f64),
            n_cells: cells,
            initial: initial.clone(),
        };
        let outcome = crate::solver::run(&setup, params, config, t_end, u64::MAX, &mut [])
            .map_err(|f| Error::StudyLevel {
                level: idx,
                source: Box::new(f.error),
            })?;
        runs.push((setup.grid()?, outcome.state));
    }

    let (small_grid, _) = &runs[0];
    let (large_grid, large_state) = &runs[runs.len() - 1];
    let offset_of = |grid: &Grid<T>| -> Result<usize> {
        let shift = (small_grid.x_left - grid.x_left) / dx;
        let cells = shift.round();
        if (shift - cells).abs() > cast(1e-6) {
            return Err(Error::InvalidParameter(
                "windows do not align on the shared mesh".into(),
            ));
        }
        Ok(cells.to_f64().map(|c| c as usize).unwrap_or(0))
    };
    let off_large = offset_of(large_grid)?;

    let mut rows = Vec::with_capacity(runs.len() - 1);
    for (k, &length) in lengths.iter().enumerate().take(runs.len() - 1) {
        let (grid_k, state_k) = &runs[k];
        let off_k = offset_of(grid_k)?;
        let mut disc = T::zero();
        for i in 0..small_grid.n_cells {
            disc = disc
                .max((state_k.v[i + off_k] - large_state.v[i + off_large]).abs())
                .max((state_k.theta[i + off_k] - large_state.theta[i + off_large]).abs());
        }
        for j in 0..=small_grid.n_cells {
            disc = disc.max((state_k.u[j + off_k] - large_state.u[j + off_large]).abs());
        }
        rows.push(TruncationRow {
            length,
            discrepancy: disc,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_params(beta: f64) -> GasParams<f64> {
        GasParams::normalized(beta)
    }

    /// Finite-difference cross-check of the hand-written derivatives.
    fn check_field(f: &FieldSpec<f64>, x: f64, t: f64) {
        let h = 1e-5;
        let v = |x: f64, t: f64| (f.value)(x, t);
        let dx_fd = (v(x + h, t) - v(x - h, t)) / (2.0 * h);
        let dxx_fd = (v(x + h, t) - 2.0 * v(x, t) + v(x - h, t)) / (h * h);
        let dt_fd = (v(x, t + h) - v(x, t - h)) / (2.0 * h);
        assert!(((f.d_x)(x, t) - dx_fd).abs() < 1e-7, "d_x at ({x}, {t})");
        assert!(((f.d_xx)(x, t) - dxx_fd).abs() < 1e-4, "d_xx at ({x}, {t})");
        assert!(((f.d_t)(x, t) - dt_fd).abs() < 1e-7, "d_t at ({x}, {t})");
    }

    #[test]
    fn manufactured_derivatives_match_finite_differences() {
        for case in [
            ManufacturedCase::<f64>::decaying_wave(2.0),
            ManufacturedCase::<f64>::modulated_hump(2.0),
        ] {
            for &x in &[0.13, 0.77, 1.31, 1.9] {
                for &t in &[0.02, 0.4] {
                    check_field(&case.v, x, t);
                    check_field(&case.u, x, t);
                    check_field(&case.theta, x, t);
                }
            }
        }
    }

    #[test]
    fn manufactured_fields_are_boundary_compatible() {
        for case in [
            ManufacturedCase::<f64>::decaying_wave(2.0),
            ManufacturedCase::<f64>::modulated_hump(2.0),
        ] {
            for &t in &[0.0, 0.3, 1.0] {
                assert!((case.u.value)(0.0, t).abs() < 1e-15);
                assert!(((case.u.value)(2.0, t)).abs() < 1e-12);
                assert!(((case.theta.d_x)(0.0, t)).abs() < 1e-15);
                assert!(((case.theta.value)(2.0, t) - 1.0).abs() < 1e-12);
                assert!(((case.theta.d_x)(2.0, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_source_case_reduces_to_plain_step_bitwise() {
        let grid = Grid::new(ProblemKind::HalfLineInsulated, 2.0, 32).unwrap();
        let params = unit_params(1.0);
        let case = ManufacturedCase::equilibrium(ProblemKind::HalfLineInsulated, 2.0);
        // Non-trivial state, zero forcing.
        let mut state = State::equilibrium(&grid);
        for i in 0..grid.n_cells {
            let x: f64 = grid.cell_center(i);
            state.v[i] = 1.0 + 0.2 * (std::f64::consts::PI * x / 2.0).sin();
            state.theta[i] = 1.0 + 0.1 * (std::f64::consts::PI * x / 2.0).cos().powi(2);
        }
        let config = SchemeConfig::new(1e-3, 1.0, 1e-12, 2, 1e-10, 10).unwrap();

        let sv = |x: f64, t: f64| case.source_v(x, t);
        let su = |x: f64, t: f64| case.source_u(&params, x, t);
        let st = |x: f64, t: f64| case.source_theta(&params, x, t);
        let sources = Sources {
            v: &sv,
            u: &su,
            theta: &st,
        };
        assert_eq!(sv(0.7, 0.1), 0.0);
        assert_eq!(su(0.7, 0.1), 0.0);
        assert_eq!(st(0.7, 0.1), 0.0);

        let (plain, _) = step(&state, &grid, &params, &config).unwrap();
        let (forced, _) =
            step_with_sources(&state, &grid, &params, &config, Some(&sources)).unwrap();
        assert_eq!(plain, forced);
    }

    #[test]
    fn equilibrium_case_error_is_machine_zero_on_every_level() {
        let case = ManufacturedCase::equilibrium(ProblemKind::Cauchy, 4.0);
        let rows = convergence_study(
            &case,
            &unit_params(1.0),
            &StudySettings {
                base_cells: 8,
                base_dt: 1e-3,
                t_end: 1e-2,
                levels: 3,
            },
            RefinementMode::Spatial,
        )
        .unwrap();
        for row in rows {
            assert!(row.error < 1e-13, "level {}: {}", row.level, row.error);
        }
    }

    #[test]
    fn study_rejects_too_few_levels() {
        let case = ManufacturedCase::equilibrium(ProblemKind::Cauchy, 4.0);
        let err = convergence_study(
            &case,
            &unit_params(1.0),
            &StudySettings {
                base_cells: 8,
                base_dt: 1e-3,
                t_end: 1e-2,
                levels: 2,
            },
            RefinementMode::Spatial,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn oracle_equilibrium_discrepancy_is_zero() {
        let setup = ProblemSetup {
            problem: ProblemKind::Cauchy,
            truncation_length: 4.0,
            n_cells: 16,
            initial: InitialProfiles::equilibrium(),
        };
        let d = oracle_compare(
            &setup,
            &unit_params(1.0),
            &OracleSettings {
                dt: 1e-3,
                ref_ratio: 10,
                t_end: 1e-2,
            },
        )
        .unwrap();
        assert!(d < 1e-14, "discrepancy {d}");
    }

    #[test]
    fn single_step_matches_explicit_reference_on_theta_bump() {
        let setup = ProblemSetup {
            problem: ProblemKind::Cauchy,
            truncation_length: 10.0,
            n_cells: 64,
            initial: InitialProfiles::new(
                |_| 1.0,
                |_| 0.0,
                |x: f64| 1.0 + 0.5 * (-x * x).exp(),
            ),
        };
        let d = oracle_compare(
            &setup,
            &unit_params(1.0),
            &OracleSettings {
                dt: 1e-4,
                ref_ratio: 10_000,
                t_end: 1e-4,
            },
        )
        .unwrap();
        assert!(d < 1e-6, "one-step discrepancy {d}");
    }

    #[test]
    fn truncation_study_equilibrium_is_exact() {
        let rows = truncation_study(
            ProblemKind::Cauchy,
            &InitialProfiles::equilibrium(),
            &unit_params(1.0),
            &SchemeConfig::default(),
            1.0,
            0.25,
            &[8.0, 16.0, 32.0],
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            // Tridiagonal arithmetic leaves ulp-level noise at equilibrium.
            assert!(row.discrepancy < 1e-13, "{}", row.discrepancy);
        }
    }
}

//! Lagrangian mass mesh, staggered state layout, and boundary handling for
//! the three window problems.
//!
//! The unbounded domains are truncated to a finite mass window: the whole
//! line becomes `[-L/2, L/2]`, the half line `[0, L]`, and the artificial
//! ends carry the far-field equilibrium `(v, u, theta) = (1, 0, 1)`.
//! Velocities live on cell edges, specific volume and temperature on cell
//! centers, so the volume equation telescopes exactly per cell.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Which of the three window problems is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Whole line, far-field `(1, 0, 1)` on both ends.
    Cauchy,
    /// Half line with an insulated wall: `u(0) = 0`, zero heat flux at `x = 0`.
    HalfLineInsulated,
    /// Half line with a fixed-temperature wall: `u(0) = 0`, `theta(0) = 1`.
    HalfLineIsothermal,
}

impl ProblemKind {
    /// Left coordinate of the computational window of mass length `length`.
    pub fn window_left<T: Scalar>(self, length: T) -> T {
        match self {
            ProblemKind::Cauchy => -length / cast::<T>(2.0),
            ProblemKind::HalfLineInsulated | ProblemKind::HalfLineIsothermal => T::zero(),
        }
    }
}

/// Uniform Lagrangian mass mesh over a truncated window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub n_cells: usize,
    /// Mass-coordinate cell width.
    pub dx: T,
    /// Left coordinate of the window.
    pub x_left: T,
    pub problem: ProblemKind,
}

impl<T: Scalar> Grid<T> {
    /// Builds the mesh for `problem` on a window of mass length
    /// `truncation_length` with `n_cells` uniform cells.
    pub fn new(problem: ProblemKind, truncation_length: T, n_cells: usize) -> Result<Self> {
        if n_cells < 4 {
            return Err(Error::InvalidParameter(format!(
                "n_cells must be >= 4, got {n_cells}"
            )));
        }
        if !(truncation_length > T::zero()) {
            return Err(Error::InvalidParameter(
                "truncation_length must be > 0".into(),
            ));
        }
        let dx = truncation_length / cast::<T>(n_cells as f64);
        Ok(Self {
            n_cells,
            dx,
            x_left: problem.window_left(truncation_length),
            problem,
        })
    }

    /// Center coordinate of cell `i`.
    pub fn cell_center(&self, i: usize) -> T {
        self.x_left + (cast::<T>(i as f64) + cast::<T>(0.5)) * self.dx
    }

    /// Coordinate of edge `j` (`0..=n_cells`).
    pub fn edge(&self, j: usize) -> T {
        self.x_left + cast::<T>(j as f64) * self.dx
    }

    /// Mass length of the window.
    pub fn length(&self) -> T {
        self.dx * cast::<T>(self.n_cells as f64)
    }

    /// Right coordinate of the window.
    pub fn x_right(&self) -> T {
        self.x_left + self.length()
    }
}

/// Staggered discrete fields: `v`, `theta` on the `n_cells` centers, `u` on
/// the `n_cells + 1` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub time: T,
    pub v: Vec<T>,
    pub theta: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Scalar> State<T> {
    /// The far-field equilibrium `(1, 0, 1)` sampled on `grid`.
    pub fn equilibrium(grid: &Grid<T>) -> Self {
        Self {
            time: T::zero(),
            v: vec![T::one(); grid.n_cells],
            theta: vec![T::one(); grid.n_cells],
            u: vec![T::zero(); grid.n_cells + 1],
        }
    }

    /// Checks array lengths against the grid.
    pub fn is_sized_for(&self, grid: &Grid<T>) -> bool {
        self.v.len() == grid.n_cells
            && self.theta.len() == grid.n_cells
            && self.u.len() == grid.n_cells + 1
    }

    pub fn min_v(&self) -> T {
        self.v.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn min_theta(&self) -> T {
        self.theta.iter().copied().fold(T::infinity(), T::min)
    }

    /// Velocity averaged from edges to the center of cell `i`.
    pub fn u_center(&self, i: usize) -> T {
        (self.u[i] + self.u[i + 1]) * cast::<T>(0.5)
    }
}

/// Ghost-cell values of `(v, theta)` just outside the two window ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhostCells<T> {
    pub v_left: T,
    pub theta_left: T,
    pub v_right: T,
    pub theta_right: T,
}

/// Ghost cells for the current state under the grid's boundary conditions.
///
/// Far-field ends take the equilibrium values `(1, 1)`. The insulated wall
/// reflects both fields (discrete zero gradient). The isothermal wall
/// reflects `v` and mirrors `theta` linearly so the reconstructed wall value
/// `(ghost + theta[0]) / 2` equals one.
pub fn ghost_cells<T: Scalar>(state: &State<T>, grid: &Grid<T>) -> GhostCells<T> {
    ghost_from(grid.problem, &state.v, &state.theta)
}

pub(crate) fn ghost_from<T: Scalar>(problem: ProblemKind, v: &[T], theta: &[T]) -> GhostCells<T> {
    let one = T::one();
    let _ = v.len();
    let (v_left, theta_left) = match problem {
        ProblemKind::Cauchy => (one, one),
        ProblemKind::HalfLineInsulated => (v[0], theta[0]),
        ProblemKind::HalfLineIsothermal => (v[0], cast::<T>(2.0) - theta[0]),
    };
    GhostCells {
        v_left,
        theta_left,
        v_right: one,
        theta_right: one,
    }
}

/// Enforces the velocity boundary values for the grid's problem: zero at
/// both window-end edges (far-field velocity or wall, depending on variant).
/// Idempotent by construction.
pub fn apply_boundary<T: Scalar>(state: &mut State<T>, grid: &Grid<T>) {
    debug_assert!(state.is_sized_for(grid));
    state.u[0] = T::zero();
    state.u[grid.n_cells] = T::zero();
}

/// Samples the three initial profiles on the staggered mesh and validates
/// positivity and compatibility with the selected problem.
pub fn build_initial_state<T: Scalar>(
    grid: &Grid<T>,
    v0: &dyn Fn(T) -> T,
    u0: &dyn Fn(T) -> T,
    theta0: &dyn Fn(T) -> T,
) -> Result<State<T>> {
    let tol = cast::<T>(1e-8);
    let one = T::one();

    let v: Vec<T> = (0..grid.n_cells).map(|i| v0(grid.cell_center(i))).collect();
    let theta: Vec<T> = (0..grid.n_cells)
        .map(|i| theta0(grid.cell_center(i)))
        .collect();
    let u: Vec<T> = (0..=grid.n_cells).map(|j| u0(grid.edge(j))).collect();

    for (i, &vi) in v.iter().enumerate() {
        if !(vi > T::zero()) {
            return Err(Error::InvalidInitialData(format!(
                "v0 must be strictly positive; v0(x = {}) = {vi}",
                grid.cell_center(i)
            )));
        }
    }
    for (i, &ti) in theta.iter().enumerate() {
        if !(ti > T::zero()) {
            return Err(Error::InvalidInitialData(format!(
                "theta0 must be strictly positive; theta0(x = {}) = {ti}",
                grid.cell_center(i)
            )));
        }
    }

    let check_far_field = |x: T| -> Result<()> {
        let dv = (v0(x) - one).abs();
        if dv > tol {
            return Err(Error::IncompatibleData(format!(
                "far-field mismatch: |v0({x}) - 1| = {dv} exceeds 1e-8"
            )));
        }
        let du = u0(x).abs();
        if du > tol {
            return Err(Error::IncompatibleData(format!(
                "far-field mismatch: |u0({x})| = {du} exceeds 1e-8"
            )));
        }
        let dt = (theta0(x) - one).abs();
        if dt > tol {
            return Err(Error::IncompatibleData(format!(
                "far-field mismatch: |theta0({x}) - 1| = {dt} exceeds 1e-8"
            )));
        }
        Ok(())
    };

    match grid.problem {
        ProblemKind::Cauchy => {
            check_far_field(grid.x_left)?;
            check_far_field(grid.x_right())?;
        }
        ProblemKind::HalfLineInsulated | ProblemKind::HalfLineIsothermal => {
            check_far_field(grid.x_right())?;
            let u_wall = u0(T::zero()).abs();
            if u_wall > tol {
                return Err(Error::IncompatibleData(format!(
                    "wall mismatch: |u0(0)| = {u_wall} exceeds 1e-8"
                )));
            }
            if grid.problem == ProblemKind::HalfLineIsothermal {
                let t_wall = (theta0(T::zero()) - one).abs();
                if t_wall > tol {
                    return Err(Error::IncompatibleData(format!(
                        "wall mismatch: |theta0(0) - 1| = {t_wall} exceeds 1e-8"
                    )));
                }
            }
        }
    }

    let mut state = State {
        time: T::zero(),
        v,
        theta,
        u,
    };
    apply_boundary(&mut state, grid);
    Ok(state)
}

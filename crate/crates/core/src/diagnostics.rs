//! Analytic functionals and bound/decay observables computed from discrete
//! states: the energy-entropy functional, its dissipation rate, deviation
//! norms, unit-mass cell averages with their convexity envelope, and the
//! pointwise flux-decay probe.

use crate::error::{Error, Result};
use crate::gas::{entropy_potential, jensen_roots, GasParams};
use crate::grid::{Grid, State};
use crate::scalar::{cast, Scalar};
use crate::solver::{Observer, StepReport};

fn require_positive<T: Scalar>(state: &State<T>) -> Result<()> {
    if !(state.min_v() > T::zero()) || !(state.min_theta() > T::zero()) {
        return Err(Error::Domain(
            "state violates positivity of v or theta".into(),
        ));
    }
    Ok(())
}

/// Energy-entropy functional: midpoint quadrature of
/// `u^2/2 + (v - ln v - 1) + (theta - ln theta - 1)` over the window,
/// with the edge velocity averaged to cell centers. Zero exactly at the
/// far-field equilibrium.
pub fn energy_entropy<T: Scalar>(state: &State<T>, grid: &Grid<T>) -> Result<T> {
    require_positive(state)?;
    let half = cast::<T>(0.5);
    let mut sum = T::zero();
    for i in 0..grid.n_cells {
        let uc = state.u_center(i);
        sum = sum
            + half * uc * uc
            + entropy_potential(state.v[i])?
            + entropy_potential(state.theta[i])?;
    }
    Ok(sum * grid.dx)
}

/// Energy-entropy functional with the natural constitutive weights:
/// `u^2/2 + R (v - ln v - 1) + c_v (theta - ln theta - 1)`. This is the
/// quantity whose decay the dissipation rate below balances; it reduces to
/// [`energy_entropy`] when `R = c_v = 1`.
pub fn energy_entropy_weighted<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
) -> Result<T> {
    require_positive(state)?;
    let half = cast::<T>(0.5);
    let mut sum = T::zero();
    for i in 0..grid.n_cells {
        let uc = state.u_center(i);
        sum = sum
            + half * uc * uc
            + params.gas_constant * entropy_potential(state.v[i])?
            + params.heat_capacity * entropy_potential(state.theta[i])?;
    }
    Ok(sum * grid.dx)
}

/// Dissipation rate: quadrature of
/// `kappa theta^beta theta_x^2 / (v theta^2) + mu u_x^2 / (v theta)` with
/// centered temperature differences on the interior edges (arithmetic mean
/// for `theta`, harmonic mean for `v`) and the exact `u_x` on cell centers.
pub fn dissipation<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParams<T>,
) -> Result<T> {
    require_positive(state)?;
    let half = cast::<T>(0.5);
    let n = grid.n_cells;
    let dx = grid.dx;
    let mut sum = T::zero();
    for j in 1..n {
        let mean_theta = half * (state.theta[j - 1] + state.theta[j]);
        let inv_v = half * (T::one() / state.v[j - 1] + T::one() / state.v[j]);
        let theta_x = (state.theta[j] - state.theta[j - 1]) / dx;
        sum = sum
            + params.conductivity_coeff
                * mean_theta.powf(params.conductivity_exponent)
                * theta_x
                * theta_x
                * inv_v
                / (mean_theta * mean_theta);
    }
    for i in 0..n {
        let ux = (state.u[i + 1] - state.u[i]) / dx;
        sum = sum + params.viscosity_coeff * ux * ux / (state.v[i] * state.theta[i]);
    }
    Ok(sum * dx)
}

/// Joint discrete `L^p` norms of `(v - 1, u, theta - 1)` for each requested
/// exponent, with `u` averaged to cell centers. `p = infinity` takes the max
/// over all three fields and all cells; finite `p >= 1` takes
/// `(sum |.|^p dx)^(1/p)` over the three fields jointly.
pub fn deviation_norms<T: Scalar>(state: &State<T>, grid: &Grid<T>, p_list: &[T]) -> Result<Vec<T>> {
    let one = T::one();
    let mut out = Vec::with_capacity(p_list.len());
    for &p in p_list {
        if !(p >= one) {
            return Err(Error::Domain(format!("norm exponent must be >= 1, got {p}")));
        }
        let devs = (0..grid.n_cells).map(|i| {
            (
                (state.v[i] - one).abs(),
                state.u_center(i).abs(),
                (state.theta[i] - one).abs(),
            )
        });
        if p.is_infinite() {
            let m = devs.fold(T::zero(), |m, (a, b, c)| m.max(a).max(b).max(c));
            out.push(m);
        } else if p == cast::<T>(2.0) {
            // Hot default path: square directly instead of powf.
            let s = devs.fold(T::zero(), |s, (a, b, c)| s + a * a + b * b + c * c);
            out.push((s * grid.dx).sqrt());
        } else {
            let s = devs.fold(T::zero(), |s, (a, b, c)| {
                s + a.powf(p) + b.powf(p) + c.powf(p)
            });
            out.push((s * grid.dx).powf(one / p));
        }
    }
    Ok(out)
}

/// Discrete `L^2` norm of `(v_x, u_x, theta_x)`: centered differences of the
/// cell fields on interior edges with one-sided stencils at the window ends
/// (trapezoid weights over edges), plus the exact `u_x` on centers.
pub fn gradient_norm_l2<T: Scalar>(state: &State<T>, grid: &Grid<T>) -> T {
    let n = grid.n_cells;
    let dx = grid.dx;
    let half = cast::<T>(0.5);
    let slope = |a: T, b: T| (b - a) / dx;

    let mut sum = T::zero();
    for field in [&state.v, &state.theta] {
        let end_l = slope(field[0], field[1]);
        let end_r = slope(field[n - 2], field[n - 1]);
        sum = sum + half * (end_l * end_l + end_r * end_r);
        for j in 1..n {
            let g = slope(field[j - 1], field[j]);
            sum = sum + g * g;
        }
    }
    for i in 0..n {
        let g = slope(state.u[i], state.u[i + 1]);
        sum = sum + g * g;
    }
    (sum * dx).sqrt()
}

/// Unit-mass cell averages of `v` and `theta`: the window is tiled with
/// disjoint blocks of `round(1/dx)` cells (mass one each) and each block is
/// averaged. With `dx >= 1` every cell is its own block.
pub fn unit_mass_averages<T: Scalar>(state: &State<T>, grid: &Grid<T>) -> (Vec<T>, Vec<T>) {
    let per = (T::one() / grid.dx)
        .round()
        .to_f64()
        .map(|k| (k as usize).max(1))
        .unwrap_or(1);
    let blocks = grid.n_cells / per;
    let mut avg_v = Vec::with_capacity(blocks);
    let mut avg_theta = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let lo = b * per;
        let hi = lo + per;
        let mass = grid.dx * cast::<T>(per as f64);
        let sv = state.v[lo..hi].iter().fold(T::zero(), |a, &x| a + x);
        let st = state.theta[lo..hi].iter().fold(T::zero(), |a, &x| a + x);
        avg_v.push(sv * grid.dx / mass);
        avg_theta.push(st * grid.dx / mass);
    }
    (avg_v, avg_theta)
}

/// Largest distance by which any unit-mass average of `v` or `theta` leaves
/// the envelope `[alpha1, alpha2]` of the given energy level; zero when all
/// averages are inside.
pub fn jensen_envelope_violation<T: Scalar>(
    state: &State<T>,
    grid: &Grid<T>,
    energy: T,
) -> Result<T> {
    let (a1, a2) = jensen_roots(energy.max(T::zero()))?;
    let (avg_v, avg_theta) = unit_mass_averages(state, grid);
    let mut worst = T::zero();
    for x in avg_v.into_iter().chain(avg_theta) {
        worst = worst.max(a1 - x).max(x - a2);
    }
    Ok(worst)
}

/// Pointwise flux-decay probe at a fixed reference cell: the effective flux
/// `sigma = (u_x - theta) / v`, its running time integral (the log of the
/// decay factor), and the displacement factor at a second probe cell.
#[derive(Debug, Clone)]
pub struct FluxDecayRecord<T> {
    /// Reference cell index for `sigma`.
    pub reference_cell: usize,
    /// Cell where the displacement factor is evaluated.
    pub probe_cell: usize,
    pub sigma_n: T,
    /// Trapezoid accumulation of `integral_0^t sigma dt`.
    pub log_y_n: T,
    pub d_n_at_probe: T,
    u0_centers: Vec<T>,
    v0_probe: T,
    last: Option<(T, T)>,
}

impl<T: Scalar> FluxDecayRecord<T> {
    /// Captures the initial data needed by the displacement factor and
    /// evaluates the probe on the initial state.
    pub fn new(
        initial: &State<T>,
        grid: &Grid<T>,
        reference_cell: usize,
        probe_cell: usize,
    ) -> Result<Self> {
        if reference_cell >= grid.n_cells || probe_cell >= grid.n_cells {
            return Err(Error::Domain(format!(
                "probe cells ({reference_cell}, {probe_cell}) out of range for {} cells",
                grid.n_cells
            )));
        }
        let u0_centers = (0..grid.n_cells).map(|i| initial.u_center(i)).collect();
        let mut rec = Self {
            reference_cell,
            probe_cell,
            sigma_n: T::zero(),
            log_y_n: T::zero(),
            d_n_at_probe: T::one(),
            u0_centers,
            v0_probe: initial.v[probe_cell],
            last: None,
        };
        rec.update(initial, grid)?;
        Ok(rec)
    }

    /// Advances the probe to `state`, accumulating the time integral by the
    /// trapezoid rule.
    pub fn update(&mut self, state: &State<T>, grid: &Grid<T>) -> Result<()> {
        require_positive(state)?;
        let half = cast::<T>(0.5);
        let i = self.reference_cell;
        let ux = (state.u[i + 1] - state.u[i]) / grid.dx;
        let sigma = (ux - state.theta[i]) / state.v[i];

        if let Some((t_prev, sigma_prev)) = self.last {
            self.log_y_n = self.log_y_n + half * (sigma_prev + sigma) * (state.time - t_prev);
        }
        self.last = Some((state.time, sigma));
        self.sigma_n = sigma;

        // Displacement factor: v0(probe) * exp of the mass integral of
        // (u - u0) between the reference and probe cells (trapezoid).
        let (lo, hi, sign) = if self.probe_cell >= self.reference_cell {
            (self.reference_cell, self.probe_cell, T::one())
        } else {
            (self.probe_cell, self.reference_cell, -T::one())
        };
        let mut integral = T::zero();
        for k in lo..hi {
            let f0 = state.u_center(k) - self.u0_centers[k];
            let f1 = state.u_center(k + 1) - self.u0_centers[k + 1];
            integral = integral + half * (f0 + f1) * grid.dx;
        }
        self.d_n_at_probe = self.v0_probe * (sign * integral).exp();
        Ok(())
    }
}

/// One scalar observation of a run.
#[derive(Debug, Clone)]
pub struct DiagnosticsRecord<T> {
    pub time: T,
    pub energy_entropy: T,
    pub dissipation: T,
    /// Initial energy-entropy value, constant along the run.
    pub e0: T,
    pub inf_v: T,
    pub sup_v: T,
    pub inf_theta: T,
    pub sup_theta: T,
    /// Deviation norms aligned with the collector's exponent list.
    pub lp_dev: Vec<T>,
    pub l2_grad: T,
    /// Trapezoid accumulation of the dissipation integral.
    pub cum_dissipation: T,
}

/// A diagnostics record together with the flux probe values and the weighted
/// energy used by the dissipation-inequality check. The dissipation rate
/// already carries the constitutive weights, so `record.cum_dissipation` is
/// the integral that balances `energy_weighted`.
#[derive(Debug, Clone)]
pub struct ObservationRow<T> {
    pub record: DiagnosticsRecord<T>,
    pub sigma_n: T,
    pub log_y_n: T,
    pub d_n: T,
    pub energy_weighted: T,
}

/// Header of the diagnostics stream.
pub const CSV_HEADER: &str =
    "t,E,V,cumV,inf_v,sup_v,inf_theta,sup_theta,L2_dev,Linf_dev,L2_grad,sigma_N,log_Y_N";

impl<T: Scalar> ObservationRow<T> {
    /// Formats the row for the diagnostics CSV stream.
    pub fn csv_line(&self, idx_l2: usize, idx_linf: usize) -> String {
        let r = &self.record;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.time,
            r.energy_entropy,
            r.dissipation,
            r.cum_dissipation,
            r.inf_v,
            r.sup_v,
            r.inf_theta,
            r.sup_theta,
            r.lp_dev[idx_l2],
            r.lp_dev[idx_linf],
            r.l2_grad,
            self.sigma_n,
            self.log_y_n
        )
    }
}

/// Observer that evaluates every functional on each observed state and keeps
/// the full history in memory.
pub struct DiagnosticsCollector<T> {
    params: GasParams<T>,
    p_list: Vec<T>,
    reference_cell: usize,
    probe_cell: usize,
    pub rows: Vec<ObservationRow<T>>,
    flux: Option<FluxDecayRecord<T>>,
    e0: Option<T>,
    cum_v: T,
    prev: Option<(T, T)>,
    idx_l2: usize,
    idx_linf: usize,
}

impl<T: Scalar> DiagnosticsCollector<T> {
    /// `p_list` must contain 2 and infinity (the CSV stream carries both).
    pub fn new(
        params: GasParams<T>,
        p_list: Vec<T>,
        reference_cell: usize,
        probe_cell: usize,
    ) -> Result<Self> {
        let two = cast::<T>(2.0);
        let idx_l2 = p_list
            .iter()
            .position(|&p| p == two)
            .ok_or_else(|| Error::InvalidParameter("p_list must contain 2".into()))?;
        let idx_linf = p_list
            .iter()
            .position(|&p| p.is_infinite())
            .ok_or_else(|| Error::InvalidParameter("p_list must contain infinity".into()))?;
        Ok(Self {
            params,
            p_list,
            reference_cell,
            probe_cell,
            rows: Vec::new(),
            flux: None,
            e0: None,
            cum_v: T::zero(),
            prev: None,
            idx_l2,
            idx_linf,
        })
    }

    /// Default exponents `{2, infinity}` and both probes at `cell`.
    pub fn with_probe(params: GasParams<T>, cell: usize) -> Self {
        Self::new(params, vec![cast(2.0), T::infinity()], cell, cell)
            .expect("default p list contains 2 and infinity")
    }

    pub fn csv_indices(&self) -> (usize, usize) {
        (self.idx_l2, self.idx_linf)
    }

    pub fn last(&self) -> Option<&ObservationRow<T>> {
        self.rows.last()
    }
}

impl<T: Scalar> Observer<T> for DiagnosticsCollector<T> {
    fn observe(&mut self, state: &State<T>, grid: &Grid<T>, _report: Option<&StepReport<T>>) {
        let energy = energy_entropy(state, grid).expect("positivity holds on accepted states");
        let energy_weighted = energy_entropy_weighted(state, grid, &self.params)
            .expect("positivity holds on accepted states");
        let v_rate =
            dissipation(state, grid, &self.params).expect("positivity holds on accepted states");
        let e0 = *self.e0.get_or_insert(energy);

        let half = cast::<T>(0.5);
        if let Some((t_prev, v_prev)) = self.prev {
            let dt = state.time - t_prev;
            self.cum_v = self.cum_v + half * (v_prev + v_rate) * dt;
        }
        self.prev = Some((state.time, v_rate));

        let flux = match self.flux.as_mut() {
            Some(f) => {
                f.update(state, grid).expect("probe stays in range");
                f
            }
            None => self.flux.insert(
                FluxDecayRecord::new(state, grid, self.reference_cell, self.probe_cell)
                    .expect("probe cells validated against the grid"),
            ),
        };

        let lp_dev =
            deviation_norms(state, grid, &self.p_list).expect("exponent list validated at build");
        let record = DiagnosticsRecord {
            time: state.time,
            energy_entropy: energy,
            dissipation: v_rate,
            e0,
            inf_v: state.min_v(),
            sup_v: state.v.iter().copied().fold(T::neg_infinity(), T::max),
            inf_theta: state.min_theta(),
            sup_theta: state.theta.iter().copied().fold(T::neg_infinity(), T::max),
            lp_dev,
            l2_grad: gradient_norm_l2(state, grid),
            cum_dissipation: self.cum_v,
        };
        self.rows.push(ObservationRow {
            record,
            sigma_n: flux.sigma_n,
            log_y_n: flux.log_y_n,
            d_n: flux.d_n_at_probe,
            energy_weighted,
        });
    }
}

/// Run-wide extrema of the pointwise bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSummary<T> {
    pub min_inf_v: T,
    pub max_sup_v: T,
    pub min_inf_theta: T,
    pub max_sup_theta: T,
}

/// Folds a record stream into its running extrema.
pub fn bound_monitor<T: Scalar>(records: &[DiagnosticsRecord<T>]) -> Result<BoundSummary<T>> {
    if records.is_empty() {
        return Err(Error::Domain("bound_monitor needs at least one record".into()));
    }
    Ok(BoundSummary {
        min_inf_v: records.iter().map(|r| r.inf_v).fold(T::infinity(), T::min),
        max_sup_v: records
            .iter()
            .map(|r| r.sup_v)
            .fold(T::neg_infinity(), T::max),
        min_inf_theta: records
            .iter()
            .map(|r| r.inf_theta)
            .fold(T::infinity(), T::min),
        max_sup_theta: records
            .iter()
            .map(|r| r.sup_theta)
            .fold(T::neg_infinity(), T::max),
    })
}

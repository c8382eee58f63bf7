//! Flat `key = value` run configuration: dotted sections, hard errors on
//! unknown keys, every default documented in one table.
//!
//! | key                      | default            | meaning |
//! |--------------------------|--------------------|---------|
//! | `problem.kind`           | `cauchy`           | `cauchy`, `half-line-insulated`, `half-line-isothermal` |
//! | `problem.length`         | `80`               | mass length of the computational window |
//! | `grid.n_cells`           | `1600`             | number of uniform cells (>= 4) |
//! | `gas.r`                  | `1`                | specific gas constant |
//! | `gas.c_v`                | `1`                | heat capacity at constant volume |
//! | `gas.mu`                 | `1`                | viscosity coefficient |
//! | `gas.kappa`              | `1`                | conductivity coefficient |
//! | `gas.beta`               | `1`                | conductivity exponent (> 0 for runs) |
//! | `gas.gamma`              | `0`                | viscosity exponent (must be 0) |
//! | `init.profile`           | `equilibrium`      | `equilibrium`, `gaussian-bump`, `cold-spot`, `large-data-composite` |
//! | `init.field`             | `theta`            | bumped field for `gaussian-bump`: `v`, `u`, or `theta` |
//! | `init.amplitude`         | `0.5`              | bump amplitude |
//! | `init.width`             | `1`                | bump width |
//! | `init.center`            | window midpoint    | bump center |
//! | `init.theta_min`         | `0.1`              | minimum temperature of `cold-spot` |
//! | `scheme.dt_initial`      | `0.01`             | upper bound on dt |
//! | `scheme.cfl_safety`      | `0.4`              | acoustic CFL safety factor in (0, 1] |
//! | `scheme.dt_min`          | `1e-10`            | abort threshold for dt |
//! | `scheme.max_newton_lag`  | `2`                | conductivity re-lag sweeps per step |
//! | `scheme.positivity_floor`| `1e-7`             | admissibility floor for v, theta |
//! | `scheme.max_rejects`     | `60`               | cap on rejected attempts per step |
//! | `run.t_end`              | `50`               | integration horizon |
//! | `run.cadence`            | `1`                | observe every N-th step |
//! | `output.dir`             | `out`              | output directory |
//! | `norms.p`                | `2,inf`            | deviation-norm exponents (must include 2 and inf) |
//! | `probe.cell`             | `n_cells / 2`      | reference cell of the flux-decay probe |
//! | `probe.displacement_cell`| half a mass unit right of `probe.cell` | cell of the displacement factor |
//! | `verify.case`            | `decaying-wave`    | manufactured case: `decaying-wave` or `modulated-hump` |
//! | `verify.mms_length`      | `2`                | manufactured window length |
//! | `verify.levels`          | `3`                | spatial refinement levels (>= 3) |
//! | `verify.spatial_base_cells` | `32`            | coarsest spatial level |
//! | `verify.spatial_base_dt` | `2e-5`             | dt on the coarsest spatial level |
//! | `verify.spatial_t_end`   | `0.05`             | horizon of the spatial study |
//! | `verify.temporal_levels` | `4`                | dt-refinement levels |
//! | `verify.temporal_cells`  | `128`              | fixed grid of the temporal study |
//! | `verify.temporal_base_dt`| `2e-3`             | coarsest dt of the temporal study |
//! | `verify.temporal_t_end`  | `0.1`              | horizon of the temporal study |
//! | `verify.oracle_dt`       | `2.5e-4`           | production dt of the explicit-reference comparison |
//! | `verify.oracle_ratio`    | `10000`            | explicit reference runs at dt / ratio |
//! | `verify.oracle_t_end`    | `0.1`              | horizon of the comparison |
//! | `verify.oracle_tolerance`| `1e-4`             | pass threshold on the discrepancy |
//! | `verify.lengths`         | `16,32,64`         | truncation-study window lengths |
//! | `verify.dx`              | `0.1`              | shared cell width of the truncation study |
//! | `verify.truncation_t_end`| `40`               | horizon of the truncation study |

use std::path::PathBuf;

use lagns_core::grid::ProblemKind;
use lagns_core::solver::InitialProfiles;
use lagns_core::{GasParams64, SchemeConfig64};

/// Parse or validation failure; the message carries the line number where
/// one applies.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError(msg.into()))
}

/// Which field a Gaussian bump perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpField {
    V,
    U,
    Theta,
}

/// Named built-in initial profiles.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Equilibrium,
    GaussianBump {
        field: BumpField,
        amplitude: f64,
        width: f64,
        center: f64,
    },
    ColdSpot {
        theta_min: f64,
        width: f64,
        center: f64,
    },
    /// The large-data composite: volume and temperature bumps of width 2
    /// with an odd velocity bump, all centered at `center`.
    LargeDataComposite { center: f64 },
}

impl ProfileSpec {
    pub fn build(&self) -> InitialProfiles<f64> {
        match *self {
            ProfileSpec::Equilibrium => InitialProfiles::equilibrium(),
            ProfileSpec::GaussianBump {
                field,
                amplitude,
                width,
                center,
            } => {
                let bump = move |x: f64| {
                    let s = (x - center) / width;
                    amplitude * (-s * s).exp()
                };
                match field {
                    BumpField::V => {
                        InitialProfiles::new(move |x| 1.0 + bump(x), |_| 0.0, |_| 1.0)
                    }
                    BumpField::U => InitialProfiles::new(|_| 1.0, bump, |_| 1.0),
                    BumpField::Theta => {
                        InitialProfiles::new(|_| 1.0, |_| 0.0, move |x| 1.0 + bump(x))
                    }
                }
            }
            ProfileSpec::ColdSpot {
                theta_min,
                width,
                center,
            } => InitialProfiles::new(
                |_| 1.0,
                |_| 0.0,
                move |x| {
                    let s = (x - center) / width;
                    1.0 - (1.0 - theta_min) * (-s * s).exp()
                },
            ),
            ProfileSpec::LargeDataComposite { center } => InitialProfiles::new(
                move |x: f64| {
                    let s = (x - center) / 2.0;
                    1.0 + 0.8 * (-s * s).exp()
                },
                move |x: f64| {
                    let s = (x - center) / 2.0;
                    0.5 * s * ((1.0 - s * s) * 0.5).exp()
                },
                move |x: f64| {
                    let s = (x - center) / 2.0;
                    1.0 - 0.5 * (-s * s).exp()
                },
            ),
        }
    }
}

/// Manufactured case selector for the convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmsCase {
    DecayingWave,
    ModulatedHump,
}

/// Verification-study settings.
#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub case: MmsCase,
    pub mms_length: f64,
    pub levels: usize,
    pub spatial_base_cells: usize,
    pub spatial_base_dt: f64,
    pub spatial_t_end: f64,
    pub temporal_levels: usize,
    pub temporal_cells: usize,
    pub temporal_base_dt: f64,
    pub temporal_t_end: f64,
    pub oracle_dt: f64,
    pub oracle_ratio: u64,
    pub oracle_t_end: f64,
    pub oracle_tolerance: f64,
    pub lengths: Vec<f64>,
    pub dx: f64,
    pub truncation_t_end: f64,
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub length: f64,
    pub n_cells: usize,
    pub gas: GasParams64,
    pub profile: ProfileSpec,
    pub scheme: SchemeConfig64,
    pub t_end: f64,
    pub cadence: u64,
    pub out_dir: PathBuf,
    pub p_list: Vec<f64>,
    pub probe_cell: usize,
    pub displacement_cell: usize,
    pub verify: VerifySettings,
}

struct RawEntry {
    line: usize,
    key: String,
    value: String,
    used: bool,
}

struct Raw {
    entries: Vec<RawEntry>,
}

impl Raw {
    fn parse(text: &str) -> ConfigResult<Self> {
        let mut entries = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if stripped.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return err(format!("line {line}: expected `key = value`, got `{raw_line}`"));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return err(format!("line {line}: empty key"));
            }
            if entries.iter().any(|e: &RawEntry| e.key == key) {
                return err(format!("line {line}: duplicate key `{key}`"));
            }
            entries.push(RawEntry {
                line,
                key,
                value,
                used: false,
            });
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.iter_mut().find(|e| e.key == key).map(|e| {
            e.used = true;
            (e.line, e.value.clone())
        })
    }

    fn f64_or(&mut self, key: &str, default: f64) -> ConfigResult<f64> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("line {line}: `{key}` expects a number, got `{v}`"))),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> ConfigResult<usize> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<usize>().map_err(|_| {
                ConfigError(format!("line {line}: `{key}` expects a nonnegative integer, got `{v}`"))
            }),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> ConfigResult<u64> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v.parse::<u64>().map_err(|_| {
                ConfigError(format!("line {line}: `{key}` expects a nonnegative integer, got `{v}`"))
            }),
        }
    }

    fn string_or(&mut self, key: &str, default: &str) -> (usize, String) {
        self.take(key)
            .unwrap_or_else(|| (0, default.to_string()))
    }

    fn finish(self) -> ConfigResult<()> {
        if let Some(e) = self.entries.iter().find(|e| !e.used) {
            return err(format!("line {}: unknown key `{}`", e.line, e.key));
        }
        Ok(())
    }
}

fn parse_norm_list(line: usize, text: &str) -> ConfigResult<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let p = if part.eq_ignore_ascii_case("inf") || part.eq_ignore_ascii_case("infinity") {
            f64::INFINITY
        } else {
            part.parse::<f64>().map_err(|_| {
                ConfigError(format!("line {line}: `norms.p` entry `{part}` is not a number or `inf`"))
            })?
        };
        if !(p >= 1.0) {
            return err(format!("line {line}: `norms.p` entries must be >= 1, got {part}"));
        }
        out.push(p);
    }
    if !out.contains(&2.0) || !out.iter().any(|p| p.is_infinite()) {
        return err(format!("line {line}: `norms.p` must include both 2 and inf"));
    }
    Ok(out)
}

fn parse_length_list(line: usize, text: &str) -> ConfigResult<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let v: f64 = part.trim().parse().map_err(|_| {
            ConfigError(format!("line {line}: `verify.lengths` entry `{part}` is not a number"))
        })?;
        if !(v > 0.0) {
            return err(format!("line {line}: `verify.lengths` entries must be > 0"));
        }
        out.push(v);
    }
    if out.len() < 2 {
        return err(format!("line {line}: `verify.lengths` needs at least two entries"));
    }
    Ok(out)
}

/// Parses and fully validates a configuration file. Unknown keys are hard
/// errors carrying their line number.
pub fn parse_config(text: &str) -> ConfigResult<RunConfig> {
    let mut raw = Raw::parse(text)?;

    let (kind_line, kind) = raw.string_or("problem.kind", "cauchy");
    let problem = match kind.as_str() {
        "cauchy" => ProblemKind::Cauchy,
        "half-line-insulated" => ProblemKind::HalfLineInsulated,
        "half-line-isothermal" => ProblemKind::HalfLineIsothermal,
        other => {
            return err(format!(
                "line {kind_line}: `problem.kind` must be cauchy, half-line-insulated, \
                 or half-line-isothermal, got `{other}`"
            ))
        }
    };
    let length = raw.f64_or("problem.length", 80.0)?;
    if !(length > 0.0) {
        return err("`problem.length` must be > 0");
    }
    let n_cells = raw.usize_or("grid.n_cells", 1600)?;
    if n_cells < 4 {
        return err("`grid.n_cells` must be >= 4");
    }

    let r = raw.f64_or("gas.r", 1.0)?;
    let c_v = raw.f64_or("gas.c_v", 1.0)?;
    let mu = raw.f64_or("gas.mu", 1.0)?;
    let kappa = raw.f64_or("gas.kappa", 1.0)?;
    let beta = raw.f64_or("gas.beta", 1.0)?;
    let gamma = raw.f64_or("gas.gamma", 0.0)?;
    if !(beta > 0.0) {
        return err(format!(
            "`gas.beta` must be >= 0 for the constitutive law and > 0 for runs \
             (degenerate conductivity hypothesis), got {beta}"
        ));
    }
    if gamma != 0.0 {
        return err(format!("`gas.gamma` must be 0 (constant viscosity), got {gamma}"));
    }
    let gas = GasParams64::new(r, c_v, mu, kappa, beta, gamma)
        .map_err(|e| ConfigError(format!("gas parameters: {e}")))?;

    let midpoint = match problem {
        ProblemKind::Cauchy => 0.0,
        _ => length / 2.0,
    };
    let (profile_line, profile_name) = raw.string_or("init.profile", "equilibrium");
    let field = {
        let (line, name) = raw.string_or("init.field", "theta");
        match name.as_str() {
            "v" => BumpField::V,
            "u" => BumpField::U,
            "theta" => BumpField::Theta,
            other => {
                return err(format!(
                    "line {line}: `init.field` must be v, u, or theta, got `{other}`"
                ))
            }
        }
    };
    let amplitude = raw.f64_or("init.amplitude", 0.5)?;
    let width = raw.f64_or("init.width", 1.0)?;
    if !(width > 0.0) {
        return err("`init.width` must be > 0");
    }
    let center = raw.f64_or("init.center", midpoint)?;
    let theta_min = raw.f64_or("init.theta_min", 0.1)?;
    let profile = match profile_name.as_str() {
        "equilibrium" => ProfileSpec::Equilibrium,
        "gaussian-bump" => {
            if matches!(field, BumpField::V | BumpField::Theta) && amplitude <= -1.0 {
                return err(format!(
                    "`init.amplitude` = {amplitude} drives the bumped field nonpositive"
                ));
            }
            ProfileSpec::GaussianBump {
                field,
                amplitude,
                width,
                center,
            }
        }
        "cold-spot" => {
            if !(theta_min > 0.0 && theta_min <= 1.0) {
                return err(format!(
                    "`init.theta_min` must be in (0, 1], got {theta_min}"
                ));
            }
            ProfileSpec::ColdSpot {
                theta_min,
                width,
                center,
            }
        }
        "large-data-composite" => ProfileSpec::LargeDataComposite { center },
        other => {
            return err(format!(
                "line {profile_line}: `init.profile` must be equilibrium, gaussian-bump, \
                 cold-spot, or large-data-composite, got `{other}`"
            ))
        }
    };

    let dt_initial = raw.f64_or("scheme.dt_initial", 0.01)?;
    let cfl_safety = raw.f64_or("scheme.cfl_safety", 0.4)?;
    let dt_min = raw.f64_or("scheme.dt_min", 1e-10)?;
    let max_newton_lag = raw.usize_or("scheme.max_newton_lag", 2)? as u32;
    let positivity_floor = raw.f64_or("scheme.positivity_floor", 1e-7)?;
    let max_rejects = raw.usize_or("scheme.max_rejects", 60)? as u32;
    let scheme = SchemeConfig64::new(
        dt_initial,
        cfl_safety,
        dt_min,
        max_newton_lag,
        positivity_floor,
        max_rejects,
    )
    .map_err(|e| ConfigError(format!("scheme settings: {e}")))?;

    let t_end = raw.f64_or("run.t_end", 50.0)?;
    if !(t_end >= 0.0) {
        return err("`run.t_end` must be >= 0");
    }
    let cadence = raw.u64_or("run.cadence", 1)?.max(1);
    let out_dir = PathBuf::from(raw.string_or("output.dir", "out").1);

    let p_list = match raw.take("norms.p") {
        None => vec![2.0, f64::INFINITY],
        Some((line, v)) => parse_norm_list(line, &v)?,
    };

    let probe_cell = raw.usize_or("probe.cell", n_cells / 2)?;
    if probe_cell >= n_cells {
        return err(format!(
            "`probe.cell` = {probe_cell} out of range for {n_cells} cells"
        ));
    }
    let dx = length / n_cells as f64;
    let default_displacement = (probe_cell + (0.5 / dx).round() as usize).min(n_cells - 1);
    let displacement_cell = raw.usize_or("probe.displacement_cell", default_displacement)?;
    if displacement_cell >= n_cells {
        return err(format!(
            "`probe.displacement_cell` = {displacement_cell} out of range for {n_cells} cells"
        ));
    }

    let verify = {
        let (case_line, case_name) = raw.string_or("verify.case", "decaying-wave");
        let case = match case_name.as_str() {
            "decaying-wave" => MmsCase::DecayingWave,
            "modulated-hump" => MmsCase::ModulatedHump,
            other => {
                return err(format!(
                    "line {case_line}: `verify.case` must be decaying-wave or modulated-hump, \
                     got `{other}`"
                ))
            }
        };
        let lengths = match raw.take("verify.lengths") {
            None => vec![16.0, 32.0, 64.0],
            Some((line, v)) => parse_length_list(line, &v)?,
        };
        VerifySettings {
            case,
            mms_length: raw.f64_or("verify.mms_length", 2.0)?,
            levels: raw.usize_or("verify.levels", 3)?,
            spatial_base_cells: raw.usize_or("verify.spatial_base_cells", 32)?,
            spatial_base_dt: raw.f64_or("verify.spatial_base_dt", 2e-5)?,
            spatial_t_end: raw.f64_or("verify.spatial_t_end", 0.05)?,
            temporal_levels: raw.usize_or("verify.temporal_levels", 4)?,
            temporal_cells: raw.usize_or("verify.temporal_cells", 128)?,
            temporal_base_dt: raw.f64_or("verify.temporal_base_dt", 2e-3)?,
            temporal_t_end: raw.f64_or("verify.temporal_t_end", 0.1)?,
            oracle_dt: raw.f64_or("verify.oracle_dt", 2.5e-4)?,
            oracle_ratio: raw.u64_or("verify.oracle_ratio", 10_000)?,
            oracle_t_end: raw.f64_or("verify.oracle_t_end", 0.1)?,
            oracle_tolerance: raw.f64_or("verify.oracle_tolerance", 1e-4)?,
            lengths,
            dx: raw.f64_or("verify.dx", 0.1)?,
            truncation_t_end: raw.f64_or("verify.truncation_t_end", 40.0)?,
        }
    };

    raw.finish()?;
    Ok(RunConfig {
        problem,
        length,
        n_cells,
        gas,
        profile,
        scheme,
        t_end,
        cadence,
        out_dir,
        p_list,
        probe_cell,
        displacement_cell,
        verify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_yields_documented_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.problem, ProblemKind::Cauchy);
        assert_eq!(cfg.length, 80.0);
        assert_eq!(cfg.n_cells, 1600);
        assert_eq!(cfg.gas.conductivity_exponent, 1.0);
        assert_eq!(cfg.profile, ProfileSpec::Equilibrium);
        assert_eq!(cfg.scheme.dt_initial, 0.01);
        assert_eq!(cfg.t_end, 50.0);
        assert_eq!(cfg.cadence, 1);
        assert_eq!(cfg.p_list, vec![2.0, f64::INFINITY]);
        assert_eq!(cfg.probe_cell, 800);
        assert_eq!(cfg.displacement_cell, 810);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cfg = parse_config("# a comment\n\n gas.beta = 2.5 # trailing\n").unwrap();
        assert_eq!(cfg.gas.conductivity_exponent, 2.5);
    }

    #[test]
    fn zero_beta_is_rejected_for_runs() {
        let e = parse_config("gas.beta = 0").unwrap_err();
        assert!(e.to_string().contains("> 0 for runs"), "{e}");
    }

    #[test]
    fn negative_beta_names_both_constraints() {
        let e = parse_config("gas.beta = -1").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains(">= 0"), "{msg}");
        assert!(msg.contains("> 0 for runs"), "{msg}");
    }

    #[test]
    fn unknown_key_reports_line_number() {
        let e = parse_config("gas.beta = 1\ngas.betta = 2\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("gas.betta"), "{msg}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let e = parse_config("gas.beta 1").unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = parse_config("gas.beta = fast").unwrap_err();
        assert!(e.to_string().contains("number"), "{e}");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let e = parse_config("gas.beta = 1\ngas.beta = 2\n").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
    }

    #[test]
    fn nonzero_gamma_is_rejected() {
        let e = parse_config("gas.gamma = 0.5").unwrap_err();
        assert!(e.to_string().contains("gas.gamma"), "{e}");
        assert!(parse_config("gas.gamma = 0").is_ok());
    }

    #[test]
    fn destructive_amplitude_is_rejected_before_running() {
        let e = parse_config("init.profile = gaussian-bump\ninit.field = v\ninit.amplitude = -1.5")
            .unwrap_err();
        assert!(e.to_string().contains("nonpositive"), "{e}");
    }

    #[test]
    fn cold_spot_theta_min_must_be_positive() {
        let e = parse_config("init.profile = cold-spot\ninit.theta_min = 0").unwrap_err();
        assert!(e.to_string().contains("theta_min"), "{e}");
    }

    #[test]
    fn norm_list_must_cover_csv_columns() {
        let e = parse_config("norms.p = 2,4").unwrap_err();
        assert!(e.to_string().contains("inf"), "{e}");
        let cfg = parse_config("norms.p = 2, 4, inf").unwrap();
        assert_eq!(cfg.p_list, vec![2.0, 4.0, f64::INFINITY]);
    }

    #[test]
    fn half_line_default_center_is_the_midpoint() {
        let cfg = parse_config(
            "problem.kind = half-line-insulated\ninit.profile = gaussian-bump\n",
        )
        .unwrap();
        match cfg.profile {
            ProfileSpec::GaussianBump { center, .. } => assert_eq!(center, 40.0),
            other => panic!("unexpected profile {other:?}"),
        }
    }

    #[test]
    fn probe_cells_must_be_in_range() {
        let e = parse_config("grid.n_cells = 100
probe.cell = 100").unwrap_err();
        assert!(e.to_string().contains("probe.cell"), "{e}");
        let e = parse_config("grid.n_cells = 100
probe.displacement_cell = 200").unwrap_err();
        assert!(e.to_string().contains("displacement_cell"), "{e}");
    }

    #[test]
    fn profiles_sample_as_documented() {
        let spec = ProfileSpec::ColdSpot {
            theta_min: 0.1,
            width: 1.0,
            center: 0.0,
        };
        let profiles = spec.build();
        assert!(((profiles.theta0)(0.0) - 0.1).abs() < 1e-15);
        assert!(((profiles.theta0)(30.0) - 1.0).abs() < 1e-15);

        let spec = ProfileSpec::LargeDataComposite { center: 0.0 };
        let profiles = spec.build();
        assert!(((profiles.v0)(0.0) - 1.8).abs() < 1e-15);
        assert!(((profiles.theta0)(0.0) - 0.5).abs() < 1e-15);
        // Odd bump peaks at one width with unit height before scaling.
        assert!(((profiles.u0)(2.0) - 0.5).abs() < 1e-15);
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use ising_geometry::entanglement::{entanglement_closed_form, geometric_entanglement_full};
use ising_geometry::evolution::brute_force_evolve;
use ising_geometry::field_geometry::{
    classify_topology, diagonalized_field_metric, field_metric_closed_form, TransformedCoords,
};
use ising_geometry::geometry::{curvature_extrema, entanglement_vs_curvature, scalar_curvature};
use ising_geometry::spin_state::{BlochAngles, SystemConfig, DEFAULT_ORACLE_CAP};
use ising_geometry::verify::{run_suite, Level, CHECK_NAMES};

use crate::angles::parse_angle;
use crate::output::{emit, Cell, Format, Table};
use crate::CliError;

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EntanglementCurveArgs {
    #[arg(long, default_value_t = 6)]
    pub spins: usize,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    /// Comma-separated polar angles.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, allow_hyphen_values = true,
          default_value = "pi/8,pi/4,3pi/8,pi/2")]
    pub theta: Vec<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub phi: f64,
    /// Points on the uniform chi grid over [0, 2pi].
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    /// Largest N for which the full-space E_numeric column is computed.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CurvatureProfileArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,6,9")]
    pub spins: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Points on the uniform theta grid over [0, pi].
    #[arg(long, default_value_t = 181)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EntVsCurvatureArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,6,9")]
    pub spins: Vec<usize>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "pi/2")]
    pub chi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Points on the uniform R grid over [R_min, R_max].
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    #[arg(long, default_value_t = 6)]
    pub spins: usize,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub field: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub phi: f64,
    /// Points on the uniform theta grid over [0, pi].
    #[arg(long, default_value_t = 181)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyTopologyArgs {
    #[arg(long, default_value_t = 4)]
    pub spins: usize,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub field: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub phi: f64,
    /// Largest chi searched for a return of the state.
    #[arg(long, value_parser = parse_angle, default_value = "200")]
    pub horizon: f64,
    /// Also write the JSON to this file (with a manifest sidecar).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub level: LevelArg,
    /// `check=value`; replaces a check's tolerance (test harness hook).
    #[arg(long = "override-tolerance", hide = true)]
    pub override_tolerance: Vec<String>,
    /// Also write the report to this file (with a manifest sidecar).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn require_steps(steps: usize) -> Result<(), CliError> {
    if steps < 2 {
        return Err(CliError::Validation(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    Ok(())
}

fn require_spin_list(spins: &[usize]) -> Result<(), CliError> {
    if spins.is_empty() {
        return Err(CliError::Validation(
            "--spins needs at least one value".into(),
        ));
    }
    Ok(())
}

/// `steps` points from `a` to `b`, hitting both ends exactly.
fn grid(a: f64, b: f64, steps: usize) -> impl Iterator<Item = f64> {
    let last = steps - 1;
    (0..steps).map(move |i| {
        if i == last {
            b
        } else {
            a + (b - a) * i as f64 / last as f64
        }
    })
}

pub fn entanglement_curve(args: &EntanglementCurveArgs) -> Result<(), CliError> {
    require_steps(args.steps)?;
    if args.theta.is_empty() {
        return Err(CliError::Validation(
            "--theta needs at least one angle".into(),
        ));
    }
    let config = SystemConfig::new(args.spins)?
        .with_coupling(args.coupling)?
        .with_oracle_cap(args.oracle_cap)?;
    config.require_spins(2)?;
    let numeric = args.spins <= config.oracle_cap();

    let mut table = Table::new(&["chi", "theta", "E_closed", "E_numeric"]);
    for &theta in &args.theta {
        for chi in grid(0.0, 2.0 * std::f64::consts::PI, args.steps) {
            let closed = entanglement_closed_form(&config, theta, chi)?.value();
            let e_numeric = if numeric {
                let state = brute_force_evolve(&config, BlochAngles::new(theta, args.phi), chi)?;
                Cell::Num(geometric_entanglement_full(&state, 0)?.value())
            } else {
                Cell::Empty
            };
            table.push(vec![
                Cell::Num(chi),
                Cell::Num(theta),
                Cell::Num(closed),
                e_numeric,
            ]);
        }
    }
    let body = table.render(args.out.format);
    emit(
        "entanglement-curve",
        args,
        args.out.format,
        &body,
        args.out.output.as_deref(),
    )
}

pub fn curvature_profile(args: &CurvatureProfileArgs) -> Result<(), CliError> {
    require_steps(args.steps)?;
    require_spin_list(&args.spins)?;
    let mut table = Table::new(&["N", "theta", "R"]);
    for &n in &args.spins {
        let config = SystemConfig::new(n)?.with_gauge_factor(args.gamma)?;
        config.require_spins(2)?;
        for theta in grid(0.0, std::f64::consts::PI, args.steps) {
            let r = scalar_curvature(&config, theta)?.scalar_curvature;
            table.push(vec![Cell::Int(n as u64), Cell::Num(theta), Cell::Num(r)]);
        }
    }
    let body = table.render(args.out.format);
    emit(
        "curvature-profile",
        args,
        args.out.format,
        &body,
        args.out.output.as_deref(),
    )
}

pub fn ent_vs_curvature(args: &EntVsCurvatureArgs) -> Result<(), CliError> {
    require_steps(args.steps)?;
    require_spin_list(&args.spins)?;
    let mut table = Table::new(&["N", "R", "E", "error"]);
    for &n in &args.spins {
        let config = SystemConfig::new(n)?.with_gauge_factor(args.gamma)?;
        let extrema = curvature_extrema(&config)?;
        for r in grid(extrema.min, extrema.max, args.steps) {
            let (e, marker) = match entanglement_vs_curvature(&config, args.chi, r) {
                Ok(e) => (Cell::Num(e.value()), Cell::Empty),
                Err(ising_geometry::Error::CurvatureDomain { .. }) => {
                    (Cell::Empty, Cell::Text("domain-error".into()))
                }
                Err(e) => return Err(e.into()),
            };
            table.push(vec![Cell::Int(n as u64), Cell::Num(r), e, marker]);
        }
    }
    let body = table.render(args.out.format);
    emit(
        "ent-vs-curvature",
        args,
        args.out.format,
        &body,
        args.out.output.as_deref(),
    )
}

pub fn metric(args: &MetricArgs) -> Result<(), CliError> {
    require_steps(args.steps)?;
    let config = SystemConfig::new(args.spins)?
        .with_coupling(args.coupling)?
        .with_field(args.field)?
        .with_gauge_factor(args.gamma)?;
    let mut table = Table::new(&[
        "theta",
        "g_theta_theta",
        "g_chi_chi",
        "g_theta_chi",
        "gp_chi_chi",
    ]);
    for theta in grid(0.0, std::f64::consts::PI, args.steps) {
        let g = field_metric_closed_form(&config, theta, args.phi)?;
        let primed = if args.field != 0.0 {
            let coords = TransformedCoords {
                theta_prime: theta,
                chi_prime: 0.0,
                phi: args.phi,
            };
            Cell::Num(diagonalized_field_metric(&config, coords)?.g22)
        } else {
            Cell::Empty
        };
        table.push(vec![
            Cell::Num(theta),
            Cell::Num(g.g11),
            Cell::Num(g.g22),
            Cell::Num(g.g12),
            primed,
        ]);
    }
    let body = table.render(args.out.format);
    emit(
        "metric",
        args,
        args.out.format,
        &body,
        args.out.output.as_deref(),
    )
}

#[derive(Debug, Serialize)]
struct TopologySummary {
    spins: usize,
    field: f64,
    phi: f64,
    periodic: Option<bool>,
    period_chi: Option<f64>,
    classification: &'static str,
    horizon_limited: bool,
    horizon_chi: Option<f64>,
    return_fidelity: Option<f64>,
}

pub fn classify(args: &ClassifyTopologyArgs) -> Result<(), CliError> {
    if args.horizon <= 0.0 {
        return Err(CliError::Validation(format!(
            "--horizon must be positive, got {}",
            args.horizon
        )));
    }
    let config = SystemConfig::new(args.spins)?
        .with_coupling(args.coupling)?
        .with_field(args.field)?;
    let report = classify_topology(&config, args.phi, args.horizon)?;
    let p = report.periodicity.as_ref();
    let summary = TopologySummary {
        spins: args.spins,
        field: report.field,
        phi: report.phi,
        periodic: p.map(|p| p.periodic),
        period_chi: p.and_then(|p| p.period_chi),
        classification: report.classification.as_str(),
        horizon_limited: report.horizon_limited,
        horizon_chi: p.map(|p| p.horizon_chi),
        return_fidelity: p.map(|p| p.max_return_fidelity),
    };
    let mut body = serde_json::to_string_pretty(&summary).expect("summary serializes");
    body.push('\n');
    if let Some(path) = args.output.as_deref() {
        emit("classify-topology", args, Format::Json, &body, Some(path))?;
    }
    emit("classify-topology", args, Format::Json, &body, None)
}

fn parse_overrides(raw: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut overrides = BTreeMap::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("override `{item}` is not name=value")))?;
        if !CHECK_NAMES.contains(&name) {
            return Err(CliError::Validation(format!("unknown check `{name}`")));
        }
        let value: f64 = value.parse().map_err(|_| {
            CliError::Validation(format!("override `{item}` has a non-numeric value"))
        })?;
        overrides.insert(name.to_string(), value);
    }
    Ok(overrides)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let overrides = parse_overrides(&args.override_tolerance)?;
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let report = run_suite(level, &overrides)?;
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    if let Some(path) = args.output.as_deref() {
        emit("verify", args, Format::Json, &body, Some(path))?;
    }
    emit("verify", args, Format::Json, &body, None)?;
    match report.first_failure {
        None => Ok(()),
        Some(name) => Err(CliError::Verification(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_endpoints() {
        let g: Vec<f64> = grid(-1.5, 2.5, 7).collect();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], -1.5);
        assert_eq!(g[6], 2.5);
    }

    #[test]
    fn overrides_validated() {
        let ok = parse_overrides(&["metric_fd=-1".to_string()]).unwrap();
        assert_eq!(ok["metric_fd"], -1.0);
        assert!(parse_overrides(&["nope=1".to_string()]).is_err());
        assert!(parse_overrides(&["metric_fd".to_string()]).is_err());
        assert!(parse_overrides(&["metric_fd=x".to_string()]).is_err());
    }
}

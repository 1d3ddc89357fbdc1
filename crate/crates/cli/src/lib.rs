//! Scenario runner behind the `dirac-utm` binary.
//!
//! `run` solves one configuration with the transform representations (or
//! the exact massless transport) and with the characteristic mesh, then
//! writes `solution.csv`, `errors.csv` and `report.txt`. `convergence`
//! refines the mesh and the quadrature and writes `convergence.csv`.

mod convergence;
mod report;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dirac_utm::massive::{write_term_diagnostics_csv, MassiveEvaluator, QuadratureSpec, TermVariant};
use dirac_utm::reference::{solve_reference_covering, ReferenceSolution};
use dirac_utm::{Complex64, Component, ConfigError, MasslessScenario, QueryPoint, Region, Scenario, ScenarioConfig};

pub use convergence::{convergence, ConvergenceRow};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Solver(dirac_utm::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 1 for configuration problems, 2 for everything found while solving.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Solver(_) | CliError::Io { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Solver(e) => write!(f, "solver error: {e}"),
            CliError::Io { path, source } => write!(f, "cannot write {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<dirac_utm::Error> for CliError {
    fn from(e: dirac_utm::Error) -> Self {
        CliError::Solver(e)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Use the corrected term lists whatever the config says.
    pub erratum_fixes: bool,
    /// Also write `traces.csv` with the mesh boundary rows.
    pub dump_traces: bool,
    /// Also write `terms.csv` with per-integral partial sums.
    pub dump_terms: bool,
    /// Output directory; overrides the config.
    pub out: Option<PathBuf>,
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridValue {
    pub point: QueryPoint,
    pub component: Component,
    pub utm: Complex64,
    pub reference: Complex64,
}

impl GridValue {
    pub fn error(&self) -> f64 {
        (self.utm - self.reference).norm()
    }
}

/// Quadrature outcome of one (region, time) sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepInfo {
    pub region: Region,
    pub t: f64,
    pub k_max: f64,
    pub panels: usize,
    pub tails: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub values: Vec<GridValue>,
    pub linf: f64,
    pub l2_rms: f64,
    pub variant: Option<TermVariant>,
    pub sweeps: Vec<SweepInfo>,
}

pub(crate) fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn output_dir(config_path: &Path, cfg: &ScenarioConfig, opts: &RunOptions) -> PathBuf {
    if let Some(p) = &opts.out {
        return p.clone();
    }
    let base = config_path.parent().unwrap_or(Path::new("."));
    match &cfg.output.dir {
        Some(d) if d.is_absolute() => d.clone(),
        Some(d) => base.join(d),
        None => {
            let stem = config_path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
            PathBuf::from("out").join(stem)
        }
    }
}

/// How the transform side of a run is evaluated.
pub(crate) enum Utm<'a> {
    Massless(MasslessScenario<'a>),
    Massive(MassiveEvaluator<'a>),
}

impl<'a> Utm<'a> {
    pub(crate) fn new(
        scenario: &'a Scenario,
        reference: &'a ReferenceSolution,
        variant: TermVariant,
        spec: QuadratureSpec,
    ) -> Result<Utm<'a>, CliError> {
        if scenario.is_massless() {
            return Ok(Utm::Massless(MasslessScenario::new(scenario)?));
        }
        Ok(Utm::Massive(MassiveEvaluator::new(scenario, &reference.traces, variant, spec)?))
    }

    /// Both components at every `x` of `region` at `t`.
    pub(crate) fn grid(&self, region: Region, t: f64, xs: &[f64]) -> Result<([Vec<Complex64>; 2], Option<SweepInfo>), CliError> {
        match self {
            Utm::Massless(m) => {
                let mut out = [Vec::with_capacity(xs.len()), Vec::with_capacity(xs.len())];
                for comp in Component::BOTH {
                    for &x in xs {
                        out[comp.index() - 1].push(m.eval(QueryPoint::new(x, t, region), comp)?);
                    }
                }
                Ok((out, None))
            }
            Utm::Massive(ev) => {
                for &x in xs {
                    QueryPoint::new(x, t, region).validate(&ev_geometry(ev))?;
                }
                let extent = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let sweep = ev.sweep(region, t, extent, &Component::BOTH)?;
                let values = [
                    xs.iter().map(|&x| sweep.value(Component::Psi1, x)).collect(),
                    xs.iter().map(|&x| sweep.value(Component::Psi2, x)).collect(),
                ];
                let info = SweepInfo {
                    region,
                    t,
                    k_max: sweep.k_max(),
                    panels: sweep.panel_count(),
                    tails: [sweep.tail(Component::Psi1), sweep.tail(Component::Psi2)],
                };
                Ok((values, Some(info)))
            }
        }
    }
}

fn ev_geometry(ev: &MassiveEvaluator<'_>) -> dirac_utm::Geometry {
    ev.scenario().geometry
}

pub(crate) fn variant_for(cfg: &ScenarioConfig, opts: &RunOptions) -> TermVariant {
    if opts.erratum_fixes {
        TermVariant::Corrected
    } else {
        cfg.variant()
    }
}

/// Evaluates the query grid with both methods.
pub(crate) fn evaluate_grid(
    cfg: &ScenarioConfig,
    utm: &Utm<'_>,
    reference: &ReferenceSolution,
) -> Result<(Vec<GridValue>, Vec<SweepInfo>), CliError> {
    let mut values = Vec::new();
    let mut sweeps = Vec::new();
    for &t in &cfg.query.times {
        for region in Region::BOTH {
            let xs = cfg.xs(region);
            let (v, info) = utm.grid(region, t, &xs)?;
            sweeps.extend(info);
            for comp in Component::BOTH {
                for (i, &x) in xs.iter().enumerate() {
                    values.push(GridValue {
                        point: QueryPoint::new(x, t, region),
                        component: comp,
                        utm: v[comp.index() - 1][i],
                        reference: reference.value(region, comp, x, t)?,
                    });
                }
            }
        }
    }
    Ok((values, sweeps))
}

fn norms(values: &[GridValue]) -> (f64, f64) {
    let linf = values.iter().map(GridValue::error).fold(0.0, f64::max);
    let sq: f64 = values.iter().map(|v| v.error().powi(2)).sum();
    (linf, (sq / values.len().max(1) as f64).sqrt())
}

fn write_solution(path: &Path, values: &[GridValue]) -> Result<(), CliError> {
    let mut w = create(path)?;
    let e = io_err(path);
    writeln!(w, "region,component,x,t,re,im,method").map_err(&e)?;
    for (method, pick) in [("utm", 0), ("reference", 1)] {
        for v in values {
            let z = if pick == 0 { v.utm } else { v.reference };
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{method}",
                v.point.region.index(),
                v.component.index(),
                v.point.x,
                v.point.t,
                z.re,
                z.im
            )
            .map_err(&e)?;
        }
    }
    w.flush().map_err(&e)
}

fn write_errors(path: &Path, values: &[GridValue], linf: f64, l2: f64) -> Result<(), CliError> {
    let mut w = create(path)?;
    let e = io_err(path);
    writeln!(w, "kind,region,component,x,t,abs_error").map_err(&e)?;
    for v in values {
        writeln!(
            w,
            "point,{},{},{:.16e},{:.16e},{:.16e}",
            v.point.region.index(),
            v.component.index(),
            v.point.x,
            v.point.t,
            v.error()
        )
        .map_err(&e)?;
    }
    writeln!(w, "linf,,,,,{linf:.16e}").map_err(&e)?;
    writeln!(w, "l2_rms,,,,,{l2:.16e}").map_err(&e)?;
    w.flush().map_err(&e)
}

/// Solves one configuration and writes the artifacts.
pub fn run(config_path: &Path, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let cfg = ScenarioConfig::load(config_path)?;
    let scenario = cfg.scenario()?;
    let variant = variant_for(&cfg, opts);
    let out_dir = output_dir(config_path, &cfg, opts);
    std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;

    let reference = solve_reference_covering(&scenario, cfg.reference.dx, &cfg.query.times, cfg.x_extent())?;
    if opts.dump_traces {
        let path = out_dir.join("traces.csv");
        let mut w = create(&path)?;
        reference.traces.write_csv(&mut w).map_err(io_err(&path))?;
        w.flush().map_err(io_err(&path))?;
    }
    let utm = Utm::new(&scenario, &reference, variant, cfg.quadrature)?;
    let (values, sweeps) = evaluate_grid(&cfg, &utm, &reference)?;
    let (linf, l2_rms) = norms(&values);

    write_solution(&out_dir.join("solution.csv"), &values)?;
    write_errors(&out_dir.join("errors.csv"), &values, linf, l2_rms)?;
    if opts.dump_terms {
        if let Utm::Massive(ev) = &utm {
            let path = out_dir.join("terms.csv");
            let points: Vec<(QueryPoint, Component)> = cfg.query_points();
            let mut w = create(&path)?;
            write_term_diagnostics_csv(ev, &points, &mut w)?;
            w.flush().map_err(io_err(&path))?;
        }
    }
    let summary = RunSummary {
        out_dir: out_dir.clone(),
        values,
        linf,
        l2_rms,
        variant: matches!(utm, Utm::Massive(_)).then_some(variant),
        sweeps,
    };
    let text = report::render(&cfg, &scenario, &reference, &utm, &summary)?;
    let path = out_dir.join("report.txt");
    std::fs::write(&path, text).map_err(io_err(&path))?;
    Ok(summary)
}

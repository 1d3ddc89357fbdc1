//! Mesh self-convergence and quadrature panel doubling.

use std::io::Write;
use std::path::Path;

use dirac_utm::massive::QuadratureSpec;
use dirac_utm::reference::solve_reference_covering;
use dirac_utm::{Complex64, ConfigError, ScenarioConfig};

use crate::{create, evaluate_grid, io_err, output_dir, variant_for, CliError, RunOptions, Utm};

/// One refinement level. Fields that need an earlier level are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub dx: f64,
    /// `max |ref(dx) - ref(2 dx)|` over the query grid.
    pub ref_diff: Option<f64>,
    /// `log2` of successive `ref_diff` ratios.
    pub ref_order: Option<f64>,
    pub panels: usize,
    pub k_max: f64,
    /// `max |utm - ref|`; the reference is this level's mesh for massless
    /// runs and the finest mesh otherwise.
    pub utm_error: f64,
    /// `max |utm(level) - utm(level - 1)|`.
    pub utm_change: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Runs `levels` refinements and writes `convergence.csv`.
pub fn convergence(config_path: &Path, levels: usize, opts: &RunOptions) -> Result<Vec<ConvergenceRow>, CliError> {
    if levels < 3 {
        return Err(ConfigError::Invalid { field: "--levels".into(), message: format!("needs at least 3, got {levels}") }.into());
    }
    let cfg = ScenarioConfig::load(config_path)?;
    let scenario = cfg.scenario()?;
    let variant = variant_for(&cfg, opts);
    let out_dir = output_dir(config_path, &cfg, opts);
    std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;

    let points = cfg.query_points();
    let mut refs = Vec::with_capacity(levels);
    let mut solutions = Vec::with_capacity(levels);
    for level in 0..levels {
        let dx = cfg.reference.dx / (1u64 << level) as f64;
        let sol = solve_reference_covering(&scenario, dx, &cfg.query.times, cfg.x_extent())?;
        let v: Vec<Complex64> = points
            .iter()
            .map(|(q, c)| sol.value(q.region, *c, q.x, q.t))
            .collect::<dirac_utm::Result<_>>()?;
        refs.push((dx, v));
        solutions.push(sol);
    }
    let finest = solutions.last().expect("levels >= 3");

    let mut rows = Vec::with_capacity(levels);
    let mut prev_utm: Option<Vec<Complex64>> = None;
    for level in 0..levels {
        let (dx, ref_values) = &refs[level];
        let ref_diff = (level > 0).then(|| max_diff(ref_values, &refs[level - 1].1));
        let spec = QuadratureSpec {
            panels: cfg.quadrature.panels << level,
            adaptive: false,
            strict_tail: false,
            cap_width: false,
            ..cfg.quadrature
        };
        let (utm_values, against) = if scenario.is_massless() {
            let utm = Utm::new(&scenario, &solutions[level], variant, spec)?;
            let (grid, _) = evaluate_grid(&cfg, &utm, &solutions[level])?;
            (grid.iter().map(|g| g.utm).collect::<Vec<_>>(), ref_values.clone())
        } else {
            let utm = Utm::new(&scenario, finest, variant, spec)?;
            let (grid, _) = evaluate_grid(&cfg, &utm, finest)?;
            (grid.iter().map(|g| g.utm).collect::<Vec<_>>(), refs[levels - 1].1.clone())
        };
        // evaluate_grid walks the grid in the same order as query_points
        debug_assert_eq!(utm_values.len(), points.len());
        let utm_error = max_diff(&utm_values, &against);
        let utm_change = prev_utm.as_ref().map(|p| max_diff(&utm_values, p));
        rows.push(ConvergenceRow {
            level,
            dx: *dx,
            ref_diff,
            ref_order: None,
            panels: spec.panels,
            k_max: spec.k_max,
            utm_error,
            utm_change,
        });
        prev_utm = Some(utm_values);
    }
    for level in 2..levels {
        // exact meshes (massless transport) have no order to report
        if let (Some(a), Some(b)) = (rows[level - 1].ref_diff, rows[level].ref_diff) {
            rows[level].ref_order = (a > 0.0 && b > 0.0).then(|| (a / b).log2());
        }
    }

    let path = out_dir.join("convergence.csv");
    let mut w = create(&path)?;
    let e = io_err(&path);
    writeln!(w, "level,dx,ref_diff,ref_order,panels,k_max,utm_error,utm_change").map_err(&e)?;
    for r in &rows {
        writeln!(
            w,
            "{},{:.16e},{},{},{},{:.16e},{:.16e},{}",
            r.level,
            r.dx,
            opt(r.ref_diff),
            opt(r.ref_order),
            r.panels,
            r.k_max,
            r.utm_error,
            opt(r.utm_change)
        )
        .map_err(&e)?;
    }
    w.flush().map_err(&e)?;
    Ok(rows)
}

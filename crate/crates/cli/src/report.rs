//! `report.txt`: invariant checks for one run.

use std::fmt::Write as _;

use dirac_utm::massive::{structural_dependency_check, MassiveEvaluator, QuadratureSpec, TermVariant};
use dirac_utm::massless::massless_slots;
use dirac_utm::reference::{ReferenceSolution, TraceKind};
use dirac_utm::{Component, Region, Scenario, ScenarioConfig};

use crate::{CliError, RunSummary, Utm};

const RECOVERY_TIME: f64 = 1e-6;
const RECOVERY_TOL: f64 = 1e-5;
const CONTINUITY_TOL: f64 = 2e-3;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn interior(xs: &[f64], region: Region, scenario: &Scenario) -> Vec<f64> {
    let (a, b) = scenario.geometry.region_bounds(region);
    xs.iter().copied().filter(|&x| x > a && x < b).collect()
}

pub(crate) fn render(
    cfg: &ScenarioConfig,
    scenario: &Scenario,
    reference: &ReferenceSolution,
    utm: &Utm<'_>,
    summary: &RunSummary,
) -> Result<String, CliError> {
    let mut r = String::new();
    let [m1, m2] = scenario.masses();
    writeln!(r, "scenario: {}", cfg.name.as_deref().unwrap_or("(unnamed)")).ok();
    match scenario.geometry.length() {
        Some(l) => writeln!(r, "geometry: two finite intervals, L = {l}, T = {}", scenario.horizon()).ok(),
        None => writeln!(r, "geometry: two half-lines, T = {}", scenario.horizon()).ok(),
    };
    writeln!(r, "masses: m1 = {m1}, m2 = {m2}").ok();
    match summary.variant {
        Some(v) => writeln!(r, "method: integral representation, {} term lists", v.name()).ok(),
        None => writeln!(r, "method: massless transport").ok(),
    };
    let mesh = &reference.mesh;
    writeln!(r, "reference: dx = {:e}, {} nodes, {} steps", mesh.dx, mesh.len, mesh.steps).ok();
    writeln!(r).ok();

    writeln!(r, "[errors] utm vs reference over {} values", summary.values.len()).ok();
    writeln!(r, "linf = {:.6e}", summary.linf).ok();
    writeln!(r, "l2_rms = {:.6e}", summary.l2_rms).ok();
    writeln!(r).ok();

    if !summary.sweeps.is_empty() {
        writeln!(r, "[quadrature] tail tolerance {:e}", cfg.quadrature.tail_tolerance).ok();
        for s in &summary.sweeps {
            writeln!(
                r,
                "t = {:<8} region {}: k_max = {:.1}, panels = {}, tails = {:.2e} / {:.2e}",
                s.t,
                s.region.index(),
                s.k_max,
                s.panels,
                s.tails[0],
                s.tails[1]
            )
            .ok();
        }
        writeln!(r).ok();
    }

    // interface continuity
    let limit = if scenario.is_massless() { 0.0 } else { CONTINUITY_TOL };
    writeln!(r, "[continuity] max_i |psi_i(0-,t) - psi_i(0+,t)|, limit {limit:e}").ok();
    let mut worst = 0.0f64;
    for &t in &cfg.query.times {
        let (left, _) = utm.grid(Region::Left, t, &[0.0])?;
        let (right, _) = utm.grid(Region::Right, t, &[0.0])?;
        let d = (0..2).map(|c| (left[c][0] - right[c][0]).norm()).fold(0.0, f64::max);
        worst = worst.max(d);
        writeln!(r, "t = {t:<8} {d:.3e}").ok();
    }
    writeln!(r, "continuity: {}", verdict(worst <= limit)).ok();
    writeln!(r).ok();

    // initial-condition recovery
    if RECOVERY_TIME <= scenario.horizon() {
        let mut worst = 0.0f64;
        let mut count = 0;
        for region in Region::BOTH {
            let xs = interior(&cfg.xs(region), region, scenario);
            if xs.is_empty() {
                continue;
            }
            let (v, _) = utm.grid(region, RECOVERY_TIME, &xs)?;
            for comp in Component::BOTH {
                let p = scenario.initial_profile(region, comp);
                for (i, &x) in xs.iter().enumerate() {
                    worst = worst.max((v[comp.index() - 1][i] - p.value(x)).norm());
                    count += 1;
                }
            }
        }
        writeln!(r, "[initial recovery] t = {RECOVERY_TIME:e}, {count} values").ok();
        writeln!(r, "max |psi - psi_0| = {worst:.3e}, limit {RECOVERY_TOL:e}: {}", verdict(worst <= RECOVERY_TOL)).ok();
        writeln!(r).ok();
    }

    // conservation
    let res = reference.conservation_residual();
    writeln!(r, "[conservation] reference mesh").ok();
    writeln!(r, "max |d/dt mass + j(right) - j(left)| = {res:.3e} (= {:.3e} dx^2)", res / mesh.dx.powi(2)).ok();
    writeln!(r).ok();

    // data compatibility and outflow rows
    let c = scenario.compatibility();
    writeln!(r, "[compatibility] interface psi1 {:.2e}, psi2 {:.2e}", c.interface_psi1, c.interface_psi2).ok();
    if scenario.geometry.is_finite() {
        writeln!(r, "corners: -L {:.2e}, L {:.2e}", c.left_corner, c.right_corner).ok();
    }
    if let Some(b) = &scenario.boundary {
        for (label, prescribed, kind) in [
            ("psi2(-L,t)", &b.left_outflow, TraceKind::LeftEnd(Component::Psi2)),
            ("psi1(L,t)", &b.right_outflow, TraceKind::RightEnd(Component::Psi1)),
        ] {
            if let Some(p) = prescribed {
                let samples = reference.traces.samples(kind)?;
                let d = reference
                    .traces
                    .times()
                    .zip(samples)
                    .map(|(t, v)| (p.value(t) - v).norm())
                    .fold(0.0, f64::max);
                writeln!(r, "prescribed outflow {label} vs computed: max diff {d:.3e} (not imposed)").ok();
            }
        }
    }
    writeln!(r).ok();

    // structural dependencies
    writeln!(r, "[dependencies]").ok();
    match summary.variant {
        Some(variant) => {
            for region in Region::BOTH {
                for comp in Component::BOTH {
                    let rep = structural_dependency_check(scenario.geometry.kind(), variant, region, comp);
                    writeln!(r, "{rep}").ok();
                }
            }
        }
        None => {
            for region in Region::BOTH {
                for comp in Component::BOTH {
                    let slots = massless_slots(region, comp, scenario.geometry.is_finite());
                    writeln!(r, "massless {}^({}): {slots:?}", comp.name(), region.index()).ok();
                }
            }
        }
    }

    // deviation of the printed lists when the corrected ones were used
    if let (Some(TermVariant::Corrected), Utm::Massive(ev)) = (summary.variant, utm) {
        let mut worst = 0.0f64;
        for s in &summary.sweeps {
            let spec = QuadratureSpec { k_max: s.k_max, k_max_limit: s.k_max, adaptive: false, strict_tail: false, ..*ev.spec() };
            let printed = MassiveEvaluator::new(scenario, &reference.traces, TermVariant::Printed, spec)?;
            let xs = cfg.xs(s.region);
            let extent = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let sweep = printed.sweep(s.region, s.t, extent, &Component::BOTH)?;
            for comp in Component::BOTH {
                for &x in &xs {
                    let d = (sweep.value(comp, x) - reference.value(s.region, comp, x, s.t)?).norm();
                    worst = worst.max(d);
                }
            }
        }
        writeln!(r).ok();
        writeln!(r, "[printed term lists] linf vs reference = {worst:.3e} (reported, not gated)").ok();
    }
    Ok(r)
}

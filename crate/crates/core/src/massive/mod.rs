//! Massive solutions from their spectral integral representations.
//!
//! Each component is `∫ e^{ikx} G(k) dk` over the real line, where `G` is a
//! sum of term-list monomials, each multiplying one data slot: a spatial
//! transform of initial data or a time transform of a boundary row. Interface
//! and outflow rows come from a [`TraceTable`]; inflow rows at `±L` come from
//! the prescribed boundary profiles.
//!
//! The represented function jumps at the interface (and at `±L` in the finite
//! case), so `G` decays like `1/k`. Before quadrature we subtract the
//! transforms of `sgn(x-p) e^{-|x-p|}/2` and `e^{-|x-p|}/2` carrying the known
//! value and slope jumps, and add those functions back in closed form. This is
//! an exact identity for any term list.

pub mod formulas;
pub mod terms;

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{alpha, Component, GeometryKind, QueryPoint, Region, I};
use crate::quadrature::gauss_legendre;
use crate::reference::{TraceKind, TraceTable};
use crate::scenario::Scenario;
use terms::{Location, Slot};

pub use formulas::{structural_dependency_check, DependencyReport, FormulaSet, TermVariant};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncation and panel layout of the `k` integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    /// Initial truncation radius.
    pub k_max: f64,
    /// Minimum number of panels on `[-k_max, k_max]`; the oscillation rule
    /// may ask for more.
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Bound on `k_max * max|G|` over the outermost panels.
    pub tail_tolerance: f64,
    /// Largest radius the doubling loop may reach.
    pub k_max_limit: f64,
    /// Double `k_max` until the tail bound holds.
    pub adaptive: bool,
    /// Fail when the tail bound cannot be met; otherwise keep the last sum.
    pub strict_tail: bool,
    /// Shrink panels to the oscillation limit `π / (|x| + t + L_eff)`.
    pub cap_width: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            k_max: 64.0,
            panels: 32,
            nodes_per_panel: 16,
            tail_tolerance: 1e-5,
            k_max_limit: 8192.0,
            adaptive: true,
            strict_tail: true,
            cap_width: true,
        }
    }
}

impl QuadratureSpec {
    /// A single pass with the given radius and panel count.
    pub fn fixed(k_max: f64, panels: usize) -> QuadratureSpec {
        QuadratureSpec { k_max, panels, adaptive: false, strict_tail: false, ..QuadratureSpec::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.k_max.is_finite()
            && self.k_max > 0.0
            && self.panels > 0
            && self.nodes_per_panel > 0
            && self.tail_tolerance > 0.0
            && self.k_max_limit >= self.k_max;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("bad quadrature spec {self:?}")))
        }
    }

    /// Panel width: `2 k_max / panels`, capped at `π / (|x| + t + L_eff)`
    /// unless `cap_width` is off.
    pub fn panel_width(&self, x_extent: f64, t: f64, l_eff: f64) -> f64 {
        let by_count = 2.0 * self.k_max / self.panels as f64;
        let phase = x_extent.abs() + t + l_eff;
        if self.cap_width && phase > 0.0 {
            by_count.min(PI / phase)
        } else {
            by_count
        }
    }
}

/// A value jump `J` and slope jump `D` of the represented function at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub at: f64,
    pub value: Complex64,
    pub slope: Complex64,
    /// Side of `p` that lies inside the region, used when `x == p`.
    pub inside: f64,
}

impl Jump {
    /// `(1/2π) e^{-ikp} (J ŝ(k) + D d̂(k))`.
    fn transform(&self, k: f64) -> Complex64 {
        let d = 1.0 + k * k;
        let s_hat = Complex64::new(0.0, -k / d);
        let d_hat = -1.0 / d;
        Complex64::from_polar(1.0 / (2.0 * PI), -k * self.at) * (self.value * s_hat + self.slope * d_hat)
    }

    fn add_back(&self, x: f64) -> Complex64 {
        let r = x - self.at;
        let e = (-r.abs()).exp() / 2.0;
        let sgn = if r == 0.0 { self.inside } else { r.signum() };
        self.value * (sgn * e) - self.slope * e
    }
}

/// Values of the `k`-dependent atoms at one node.
struct Atoms {
    k: f64,
    alpha: [f64; 2],
    mass: [f64; 2],
    cos: [f64; 2],
    sin: [f64; 2],
    eat: [Complex64; 2],
    ekl: Complex64,
}

impl Atoms {
    fn new(k: f64, masses: [f64; 2], t: f64, l: f64) -> Atoms {
        let alpha = [alpha(masses[0], k), alpha(masses[1], k)];
        let (s1, c1) = (alpha[0] * t).sin_cos();
        let (s2, c2) = (alpha[1] * t).sin_cos();
        Atoms {
            k,
            alpha,
            mass: masses,
            cos: [c1, c2],
            sin: [s1, s2],
            eat: [Complex64::new(c1, s1), Complex64::new(c2, s2)],
            ekl: Complex64::from_polar(1.0, k * l),
        }
    }

    fn term(&self, t: &formulas::CompiledTerm, slots: &[Complex64]) -> Complex64 {
        let mut real = self.k.powi(t.k);
        for j in 0..2 {
            real *= self.alpha[j].powi(t.alpha[j])
                * self.mass[j].powi(t.mass[j])
                * self.cos[j].powi(t.cos[j])
                * self.sin[j].powi(t.sin[j]);
        }
        let mut c = t.coeff * real * slots[t.slot];
        for j in 0..2 {
            let n = t.exp_alpha_t[j][0] - t.exp_alpha_t[j][1];
            if n != 0 {
                c *= self.eat[j].powi(n);
            }
        }
        if t.exp_kl != 0 {
            c *= self.ekl.powi(t.exp_kl);
        }
        c
    }
}

/// Positive-side nodes of one panel with integrand values at `±k`.
struct Panel {
    k: Vec<f64>,
    w: Vec<f64>,
    /// `[side][node][integral]`, side 0 is `+k`.
    parts: [Vec<Vec<Complex64>>; 2],
    /// `[side][node][component]` after subtracting the jump transforms.
    rem: [Vec<[Complex64; 2]>; 2],
}

/// Partial sum of one integral at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TermPartial {
    pub component: Component,
    /// 1-based integral number, 0 for the jump add-back.
    pub integral: usize,
    pub value: Complex64,
}

/// Integrand tables for one region and time, shared by every `x`.
pub struct Sweep {
    region: Region,
    t: f64,
    width: f64,
    panels: Vec<Panel>,
    jumps: [Vec<Jump>; 2],
    /// Integral index ranges for Psi1 and Psi2 inside `Panel::parts`.
    ranges: [std::ops::Range<usize>; 2],
    tails: [f64; 2],
}

impl Sweep {
    pub fn region(&self) -> Region {
        self.region
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn k_max(&self) -> f64 {
        self.width * self.panels.len() as f64
    }

    pub fn panel_width(&self) -> f64 {
        self.width
    }

    /// Number of panels on `[-k_max, k_max]`.
    pub fn panel_count(&self) -> usize {
        2 * self.panels.len()
    }

    /// `k_max * max|G - S|` over the outermost panels.
    pub fn tail(&self, comp: Component) -> f64 {
        self.tails[comp.index() - 1]
    }

    pub fn jumps(&self, comp: Component) -> &[Jump] {
        &self.jumps[comp.index() - 1]
    }

    pub fn value(&self, comp: Component, x: f64) -> Complex64 {
        let c = comp.index() - 1;
        let mut acc = ZERO;
        for p in &self.panels {
            for (n, (&k, &w)) in p.k.iter().zip(&p.w).enumerate() {
                let e = Complex64::from_polar(1.0, k * x);
                acc += w * (e * p.rem[0][n][c] + e.conj() * p.rem[1][n][c]);
            }
        }
        acc + self.jumps[c].iter().map(|j| j.add_back(x)).sum::<Complex64>()
    }

    /// Truncated integral of each term-list integral at `x`, without the
    /// jump subtraction, plus the add-back row as integral 0. The partial
    /// sums over `1..` differ from [`Sweep::value`] by the truncated jump
    /// transforms.
    pub fn partial_sums(&self, comp: Component, x: f64) -> Vec<TermPartial> {
        let range = self.ranges[comp.index() - 1].clone();
        let mut sums = vec![ZERO; range.len()];
        for p in &self.panels {
            for (n, (&k, &w)) in p.k.iter().zip(&p.w).enumerate() {
                let e = Complex64::from_polar(1.0, k * x);
                for (s, j) in sums.iter_mut().zip(range.clone()) {
                    *s += w * (e * p.parts[0][n][j] + e.conj() * p.parts[1][n][j]);
                }
            }
        }
        let mut out = vec![TermPartial {
            component: comp,
            integral: 0,
            value: self.jumps[comp.index() - 1].iter().map(|j| j.add_back(x)).sum(),
        }];
        out.extend(sums.into_iter().enumerate().map(|(i, value)| TermPartial { component: comp, integral: i + 1, value }));
        out
    }
}

/// Evaluator for one scenario, trace table and term list.
pub struct MassiveEvaluator<'a> {
    scenario: &'a Scenario,
    traces: &'a TraceTable,
    set: &'a FormulaSet,
    spec: QuadratureSpec,
    rule: Vec<(f64, f64)>,
}

impl<'a> MassiveEvaluator<'a> {
    pub fn new(scenario: &'a Scenario, traces: &'a TraceTable, variant: TermVariant, spec: QuadratureSpec) -> Result<Self> {
        Self::with_terms(scenario, traces, FormulaSet::builtin(scenario.geometry.kind(), variant), spec)
    }

    pub fn with_terms(scenario: &'a Scenario, traces: &'a TraceTable, set: &'a FormulaSet, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if scenario.masses().iter().any(|&m| !(m > 0.0)) {
            return Err(Error::invalid("the integral representations need both masses positive"));
        }
        if set.geometry != scenario.geometry.kind() {
            return Err(Error::invalid(format!("term list {} does not match the scenario geometry", set.name)));
        }
        let mut needed = vec![TraceKind::Interface(Component::Psi1), TraceKind::Interface(Component::Psi2)];
        if scenario.geometry.is_finite() {
            needed.push(TraceKind::LeftEnd(Component::Psi2));
            needed.push(TraceKind::RightEnd(Component::Psi1));
        }
        for kind in needed {
            if !traces.has(kind) {
                return Err(Error::invalid(format!("trace table has no {} row", kind.label())));
            }
        }
        let rule = gauss_legendre(spec.nodes_per_panel)?;
        Ok(MassiveEvaluator { scenario, traces, set, spec, rule })
    }

    pub fn scenario(&self) -> &'a Scenario {
        self.scenario
    }

    pub fn traces(&self) -> &'a TraceTable {
        self.traces
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn terms(&self) -> &FormulaSet {
        self.set
    }

    fn l_eff(&self) -> f64 {
        self.scenario.geometry.length().unwrap_or_else(|| self.scenario.support_radius())
    }

    /// Value of a time slot: `∫_0^t e^{± i α s} row(s) ds`.
    fn time_slot(&self, location: Location, comp: Component, omega: Complex64, t: f64) -> Result<Complex64> {
        let boundary = self.scenario.boundary.as_ref();
        match (location, comp) {
            (Location::Interface, c) => self.traces.time_transform(TraceKind::Interface(c), omega, t),
            (Location::LeftEnd, Component::Psi1) => match boundary {
                Some(b) => b.left_inflow.exp_integral(omega, 0.0, t),
                None => Ok(ZERO),
            },
            (Location::RightEnd, Component::Psi2) => match boundary {
                Some(b) => b.right_inflow.exp_integral(omega, 0.0, t),
                None => Ok(ZERO),
            },
            (Location::LeftEnd, c) => self.traces.time_transform(TraceKind::LeftEnd(c), omega, t),
            (Location::RightEnd, c) => self.traces.time_transform(TraceKind::RightEnd(c), omega, t),
        }
    }

    /// `(Psi1, Psi2)` and their time derivatives at `-L` or `L`.
    fn end_state(&self, location: Location, t: f64) -> Result<[(Complex64, Complex64); 2]> {
        let b = self.scenario.boundary.as_ref().expect("finite scenario has boundary data");
        Ok(match location {
            Location::LeftEnd => [
                (b.left_inflow.value(t), b.left_inflow.derivative(t)),
                (
                    self.traces.value(TraceKind::LeftEnd(Component::Psi2), t)?,
                    self.traces.derivative(TraceKind::LeftEnd(Component::Psi2), t)?,
                ),
            ],
            Location::RightEnd => [
                (
                    self.traces.value(TraceKind::RightEnd(Component::Psi1), t)?,
                    self.traces.derivative(TraceKind::RightEnd(Component::Psi1), t)?,
                ),
                (b.right_inflow.value(t), b.right_inflow.derivative(t)),
            ],
            Location::Interface => unreachable!("interface jumps carry no slope"),
        })
    }

    /// Value and slope jumps of the represented function of each component.
    pub fn jumps(&self, region: Region, t: f64) -> Result<[Vec<Jump>; 2]> {
        let mut out = [Vec::new(), Vec::new()];
        let side = match region {
            Region::Left => -1.0,
            Region::Right => 1.0,
        };
        for comp in Component::BOTH {
            let g = self.traces.value(TraceKind::Interface(comp), t)?;
            // odd extension about the interface
            out[comp.index() - 1].push(Jump { at: 0.0, value: 2.0 * side * g, slope: ZERO, inside: side });
        }
        if let Some(l) = self.scenario.geometry.length() {
            let m = self.scenario.mass(region);
            let (location, near) = match region {
                Region::Left => (Location::LeftEnd, -l),
                Region::Right => (Location::RightEnd, l),
            };
            let [(p1, p1t), (p2, p2t)] = self.end_state(location, t)?;
            // x-derivatives from the equations
            let p1x = -p1t - I * m * p2;
            let p2x = p2t + I * m * p1;
            for (c, v, vx) in [(0, p1, p1x), (1, p2, p2x)] {
                // the region's own end and its mirror image
                let value = -side * v;
                out[c].push(Jump { at: near, value, slope: -side * vx, inside: -side });
                out[c].push(Jump { at: -near, value, slope: side * vx, inside: 0.0 });
            }
        }
        Ok(out)
    }

    /// Fills the time slots, which depend on `k` only through `α`.
    fn time_slots(&self, slots: &mut [Complex64], k: f64, t: f64) -> Result<()> {
        let masses = self.scenario.masses();
        let a = [alpha(masses[0], k), alpha(masses[1], k)];
        for (v, s) in slots.iter_mut().zip(&self.set.slots) {
            if let Slot::Time { location, comp, sign, alpha: which, .. } = *s {
                let omega = Complex64::new(0.0, sign.value() * a[which.index() - 1]);
                *v = self.time_slot(location, comp, omega, t)?;
            }
        }
        Ok(())
    }

    /// Fills the initial slots at `k` and returns every integral's integrand,
    /// `Psi1` integrals first.
    fn integrals_at(&self, slots: &mut [Complex64], region: Region, k: f64, t: f64) -> Vec<Complex64> {
        for (v, s) in slots.iter_mut().zip(&self.set.slots) {
            if let Slot::Initial { region: r, comp, reflected } = *s {
                let (lo, hi) = self.scenario.geometry.region_bounds(r);
                let arg = if reflected { -k } else { k };
                *v = self.scenario.initial_profile(r, comp).fourier(arg, lo, hi);
            }
        }
        let l = self.scenario.geometry.length().unwrap_or(0.0);
        let atoms = Atoms::new(k, self.scenario.masses(), t, l);
        [Component::Psi1, Component::Psi2]
            .iter()
            .flat_map(|&c| &self.set.formula(region, c).integrals)
            .map(|integral| integral.terms.iter().map(|term| atoms.term(term, slots)).sum())
            .collect()
    }

    /// Integrand of each integral of `comp` at one `k`, before the `e^{ikx}`
    /// factor and without the jump subtraction.
    pub fn integrand(&self, region: Region, comp: Component, t: f64, k: f64) -> Result<Vec<Complex64>> {
        let mut slots = vec![ZERO; self.set.slots.len()];
        self.time_slots(&mut slots, k, t)?;
        let parts = self.integrals_at(&mut slots, region, k, t);
        let n1 = self.set.formula(region, Component::Psi1).integrals.len();
        Ok(match comp {
            Component::Psi1 => parts[..n1].to_vec(),
            Component::Psi2 => parts[n1..].to_vec(),
        })
    }

    fn panel(&self, region: Region, t: f64, index: usize, width: f64, jumps: &[Vec<Jump>; 2]) -> Result<Panel> {
        let n1 = self.set.formula(region, Component::Psi1).integrals.len();
        let lo = index as f64 * width;
        let npp = self.rule.len();
        let mut panel = Panel {
            k: Vec::with_capacity(npp),
            w: Vec::with_capacity(npp),
            parts: [Vec::with_capacity(npp), Vec::with_capacity(npp)],
            rem: [Vec::with_capacity(npp), Vec::with_capacity(npp)],
        };
        let mut slots = vec![ZERO; self.set.slots.len()];
        for &(xg, wg) in &self.rule {
            let k = lo + 0.5 * width * (1.0 + xg);
            panel.k.push(k);
            panel.w.push(0.5 * width * wg);
            self.time_slots(&mut slots, k, t)?;
            for (side, kk) in [(0usize, k), (1, -k)] {
                let parts = self.integrals_at(&mut slots, region, kk, t);
                let g1: Complex64 = parts[..n1].iter().sum();
                let g2: Complex64 = parts[n1..].iter().sum();
                let s1: Complex64 = jumps[0].iter().map(|j| j.transform(kk)).sum();
                let s2: Complex64 = jumps[1].iter().map(|j| j.transform(kk)).sum();
                panel.parts[side].push(parts);
                panel.rem[side].push([g1 - s1, g2 - s2]);
            }
        }
        Ok(panel)
    }

    /// Builds the integrand tables for `region` at time `t`, doubling `k_max`
    /// until the tail bound holds for each of `comps`. `x_extent` is the
    /// largest `|x|` that will be queried.
    pub fn sweep(&self, region: Region, t: f64, x_extent: f64, comps: &[Component]) -> Result<Sweep> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("query time must be nonnegative, got {t}")));
        }
        if t > self.scenario.horizon() * (1.0 + 1e-12) {
            return Err(Error::TimeBeyondHorizon { t, horizon: self.scenario.horizon() });
        }
        let width = self.spec.panel_width(x_extent, t, self.l_eff());
        let jumps = self.jumps(region, t)?;
        let f = [self.set.formula(region, Component::Psi1), self.set.formula(region, Component::Psi2)];
        let n1 = f[0].integrals.len();
        let ranges = [0..n1, n1..n1 + f[1].integrals.len()];
        let mut n_side = (self.spec.k_max / width).ceil().max(1.0) as usize;
        let mut panels: Vec<Panel> = Vec::new();
        loop {
            let fresh: Vec<Panel> = (panels.len()..n_side)
                .into_par_iter()
                .map(|p| self.panel(region, t, p, width, &jumps))
                .collect::<Result<_>>()?;
            panels.extend(fresh);
            let k_max = width * n_side as f64;
            let outer = panels.last().expect("at least one panel");
            let mut tails = [0.0f64; 2];
            for (c, tail) in tails.iter_mut().enumerate() {
                let peak = outer.rem.iter().flatten().map(|r| r[c].norm()).fold(0.0, f64::max);
                *tail = k_max * peak;
            }
            let worst = comps
                .iter()
                .map(|c| (*c, tails[c.index() - 1]))
                .filter(|(_, tail)| *tail > self.spec.tail_tolerance)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            let done = |panels| Sweep { region, t, width, panels, jumps: jumps.clone(), ranges: ranges.clone(), tails };
            let Some((comp, tail)) = worst else {
                return Ok(done(panels));
            };
            let next = width * (2 * n_side) as f64;
            if !self.spec.adaptive || next > self.spec.k_max_limit * (1.0 + 1e-12) {
                if !self.spec.strict_tail {
                    return Ok(done(panels));
                }
                // blame the integral with the largest outer-panel magnitude
                let c = comp.index() - 1;
                let range = ranges[c].clone();
                let mut best = (0, 0.0f64);
                for j in range.clone() {
                    let peak = outer.parts.iter().flatten().map(|v| v[j].norm()).fold(0.0, f64::max);
                    if peak > best.1 {
                        best = (j - range.start + 1, peak);
                    }
                }
                return Err(Error::QuadratureBudgetExceeded {
                    term: format!("{} integral {} of {}", f[c].label(), best.0, self.set.name),
                    k_max,
                    tail,
                    tolerance: self.spec.tail_tolerance,
                });
            }
            n_side *= 2;
        }
    }

    pub fn eval(&self, q: QueryPoint, comp: Component) -> Result<Complex64> {
        q.validate(&self.scenario.geometry)?;
        Ok(self.sweep(q.region, q.t, q.x, &[comp])?.value(comp, q.x))
    }

    /// Both components at every `x` (all inside `region`) at time `t`.
    pub fn eval_grid(&self, region: Region, t: f64, xs: &[f64]) -> Result<[Vec<Complex64>; 2]> {
        for &x in xs {
            QueryPoint::new(x, t, region).validate(&self.scenario.geometry)?;
        }
        let extent = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let sweep = self.sweep(region, t, extent, &Component::BOTH)?;
        let values = |c| xs.par_iter().map(|&x| sweep.value(c, x)).collect();
        Ok([values(Component::Psi1), values(Component::Psi2)])
    }
}

fn eval_checked(
    kind: GeometryKind,
    scenario: &Scenario,
    traces: &TraceTable,
    q: QueryPoint,
    comp: Component,
    spec: QuadratureSpec,
    variant: TermVariant,
) -> Result<Complex64> {
    if scenario.geometry.kind() != kind {
        return Err(Error::invalid("scenario geometry does not match the evaluator"));
    }
    MassiveEvaluator::new(scenario, traces, variant, spec)?.eval(q, comp)
}

/// Half-line representation at one point.
pub fn eval_massive_halfline(
    scenario: &Scenario,
    traces: &TraceTable,
    q: QueryPoint,
    comp: Component,
    spec: QuadratureSpec,
    variant: TermVariant,
) -> Result<Complex64> {
    eval_checked(GeometryKind::TwoHalfLines, scenario, traces, q, comp, spec, variant)
}

/// Finite-interval representation at one point.
pub fn eval_massive_finite(
    scenario: &Scenario,
    traces: &TraceTable,
    q: QueryPoint,
    comp: Component,
    spec: QuadratureSpec,
    variant: TermVariant,
) -> Result<Complex64> {
    eval_checked(GeometryKind::TwoFiniteIntervals, scenario, traces, q, comp, spec, variant)
}

/// Per-integral partial sums at the given points as CSV.
pub fn write_term_diagnostics_csv<W: Write>(
    evaluator: &MassiveEvaluator<'_>,
    points: &[(QueryPoint, Component)],
    mut w: W,
) -> Result<()> {
    let io = |e: std::io::Error| Error::invalid(format!("writing diagnostics: {e}"));
    writeln!(w, "region,component,x,t,integral,re,im,k_max,tail").map_err(io)?;
    for &(q, comp) in points {
        q.validate(&evaluator.scenario.geometry)?;
        let sweep = evaluator.sweep(q.region, q.t, q.x, &[comp])?;
        for p in sweep.partial_sums(comp, q.x) {
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                q.region.index(),
                comp.index(),
                q.x,
                q.t,
                p.integral,
                p.value.re,
                p.value.im,
                sweep.k_max(),
                sweep.tail(comp)
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

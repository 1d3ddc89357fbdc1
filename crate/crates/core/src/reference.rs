//! Characteristic-mesh reference solver.
//!
//! With `dt = dx` both transport operators map nodes to nodes, so only the
//! mass coupling is discretized (trapezoid rule along each characteristic
//! segment, solved implicitly per node).

use std::io::Write;

use num_complex::Complex64;

use crate::cubic::PiecewiseCubic;
use crate::error::{Error, Result};
use crate::model::{Component, Region};
use crate::profile::Profile;
use crate::scenario::Scenario;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Node layout: `x_i = (i - origin) * dx` for `i = 0..len`, `t_n = n * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicMesh {
    pub dx: f64,
    /// Index of the interface node `x = 0`.
    pub origin: usize,
    /// Number of spatial nodes.
    pub len: usize,
    /// Number of time steps to reach the horizon.
    pub steps: usize,
}

impl CharacteristicMesh {
    pub fn for_scenario(scenario: &Scenario, dx: f64) -> Result<CharacteristicMesh> {
        CharacteristicMesh::covering(scenario, dx, 0.0)
    }

    /// Like [`CharacteristicMesh::for_scenario`], with half-lines reaching at
    /// least `|x| = extent`.
    pub fn covering(scenario: &Scenario, dx: f64, extent: f64) -> Result<CharacteristicMesh> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::Mesh(format!("spacing must be positive, got {dx}")));
        }
        let horizon = scenario.horizon();
        let steps = tile(horizon, dx, "time horizon")?;
        let half = match scenario.geometry.length() {
            Some(l) => tile(l, dx, "interval length")?,
            None => ((horizon + scenario.support_radius() + 2.0).max(extent.abs()) / dx).ceil() as usize,
        };
        Ok(CharacteristicMesh { dx, origin: half, len: 2 * half + 1, steps })
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.origin as f64) * self.dx
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.len - 1)
    }

    /// Step index of `t`, if `t` lies on the time grid.
    pub fn step_of(&self, t: f64) -> Option<usize> {
        let r = t / self.dx;
        let n = r.round();
        ((r - n).abs() <= 1e-9 * r.abs().max(1.0) && n >= 0.0 && n as usize <= self.steps).then_some(n as usize)
    }
}

fn tile(extent: f64, dx: f64, what: &str) -> Result<usize> {
    let r = extent / dx;
    let n = r.round();
    if n < 1.0 || (r - n).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::Mesh(format!("spacing {dx} does not tile the {what} {extent}")));
    }
    Ok(n as usize)
}

/// Which tabulated boundary row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceKind {
    /// `Psi_l(0, t)`.
    Interface(Component),
    /// `Psi_l(-L, t)`.
    LeftEnd(Component),
    /// `Psi_l(L, t)`.
    RightEnd(Component),
}

impl TraceKind {
    pub fn label(&self) -> String {
        match self {
            TraceKind::Interface(c) => format!("{}_at_0", c.name()),
            TraceKind::LeftEnd(c) => format!("{}_at_minusL", c.name()),
            TraceKind::RightEnd(c) => format!("{}_at_L", c.name()),
        }
    }
}

/// Boundary and interface values on the uniform time grid, with cubic
/// interpolants for the time transforms.
#[derive(Debug, Clone)]
pub struct TraceTable {
    dt: f64,
    horizon: f64,
    rows: Vec<(TraceKind, Vec<Complex64>, PiecewiseCubic)>,
}

impl TraceTable {
    pub fn new(dt: f64, rows: Vec<(TraceKind, Vec<Complex64>)>) -> Result<TraceTable> {
        let mut horizon = f64::INFINITY;
        let mut built = Vec::with_capacity(rows.len());
        for (kind, values) in rows {
            let p = PiecewiseCubic::uniform(0.0, dt, &values)?;
            horizon = horizon.min(p.end());
            built.push((kind, values, p));
        }
        Ok(TraceTable { dt, horizon, rows: built })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.rows.first().map_or(0, |r| r.1.len());
        (0..n).map(move |j| j as f64 * self.dt)
    }

    pub fn kinds(&self) -> Vec<TraceKind> {
        self.rows.iter().map(|r| r.0).collect()
    }

    pub fn has(&self, kind: TraceKind) -> bool {
        self.rows.iter().any(|r| r.0 == kind)
    }

    fn row(&self, kind: TraceKind) -> Result<&(TraceKind, Vec<Complex64>, PiecewiseCubic)> {
        self.rows
            .iter()
            .find(|r| r.0 == kind)
            .ok_or_else(|| Error::invalid(format!("trace table has no {} row", kind.label())))
    }

    pub fn samples(&self, kind: TraceKind) -> Result<&[Complex64]> {
        Ok(&self.row(kind)?.1)
    }

    fn check(&self, t: f64) -> Result<()> {
        if t > self.horizon * (1.0 + 1e-12) {
            return Err(Error::TraceHorizonExceeded { t, horizon: self.horizon });
        }
        Ok(())
    }

    pub fn value(&self, kind: TraceKind, t: f64) -> Result<Complex64> {
        self.check(t)?;
        Ok(self.row(kind)?.2.value(t.min(self.horizon)))
    }

    pub fn derivative(&self, kind: TraceKind, t: f64) -> Result<Complex64> {
        self.check(t)?;
        Ok(self.row(kind)?.2.derivative(t.min(self.horizon)))
    }

    /// `∫_0^t e^{Ωs} trace(s) ds` of the cubic interpolant.
    pub fn time_transform(&self, kind: TraceKind, omega: Complex64, t: f64) -> Result<Complex64> {
        self.check(t)?;
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("time transform needs t >= 0, got {t}")));
        }
        Ok(self.row(kind)?.2.exp_integral(omega, 0.0, t))
    }

    /// The tabulated row as a sampled profile.
    pub fn as_profile(&self, kind: TraceKind) -> Result<Profile> {
        Ok(Profile::SampledGrid(self.row(kind)?.2.clone()))
    }

    /// CSV with one column pair per row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for (kind, _, _) in &self.rows {
            write!(w, ",{0}_re,{0}_im", kind.label())?;
        }
        writeln!(w)?;
        for (j, t) in self.times().enumerate() {
            write!(w, "{t:.16e}")?;
            for (_, v, _) in &self.rows {
                write!(w, ",{:.16e},{:.16e}", v[j].re, v[j].im)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn trace_time_transform(traces: &TraceTable, which: TraceKind, omega: Complex64, t: f64) -> Result<Complex64> {
    traces.time_transform(which, omega, t)
}

/// Field at one time level.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
}

/// Discrete mass and outer-boundary fluxes at one time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance {
    pub t: f64,
    /// Trapezoid sum of `|Psi1|^2 + |Psi2|^2`.
    pub mass: f64,
    /// `|Psi1|^2 - |Psi2|^2` at the left and right mesh ends.
    pub flux_left: f64,
    pub flux_right: f64,
    /// Flux on either side of the interface (same node).
    pub flux_interface: f64,
}

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub mesh: CharacteristicMesh,
    pub snapshots: Vec<Snapshot>,
    pub traces: TraceTable,
    pub balance: Vec<Balance>,
}

impl ReferenceSolution {
    pub fn snapshot(&self, t: f64) -> Result<&Snapshot> {
        let n = self.mesh.step_of(t).ok_or_else(|| Error::Mesh(format!("t = {t} is not a mesh time")))?;
        self.snapshots
            .iter()
            .find(|s| s.step == n)
            .ok_or_else(|| Error::Mesh(format!("no snapshot stored for t = {t}")))
    }

    /// Value at `(x, t)` from the stored snapshot at `t`. Off-node positions
    /// use a four-point cubic that stays on the query's side of the interface.
    pub fn value(&self, region: Region, comp: Component, x: f64, t: f64) -> Result<Complex64> {
        let snap = self.snapshot(t)?;
        let field = match comp {
            Component::Psi1 => &snap.psi1,
            Component::Psi2 => &snap.psi2,
        };
        let m = &self.mesh;
        let r = x / m.dx + m.origin as f64;
        let (lo, hi) = match region {
            Region::Left => (0usize, m.origin),
            Region::Right => (m.origin, m.len - 1),
        };
        if r < lo as f64 - 1e-9 || r > hi as f64 + 1e-9 {
            return Err(Error::OutsideDomain { x, region });
        }
        let nearest = r.round();
        if (r - nearest).abs() <= 1e-9 {
            return Ok(field[nearest as usize]);
        }
        let base = (r.floor() as usize).saturating_sub(1).clamp(lo, hi.saturating_sub(3).max(lo));
        let idx: Vec<usize> = (base..(base + 4).min(hi + 1)).collect();
        let mut out = ZERO;
        for &i in &idx {
            let mut w = 1.0;
            for &j in &idx {
                if j != i {
                    w *= (r - j as f64) / (i as f64 - j as f64);
                }
            }
            out += field[i] * w;
        }
        Ok(out)
    }

    /// Largest observed `|d/dt ∫ρ + j(right) - j(left)|` over interior time
    /// levels, using centered differences of the stored mass.
    pub fn conservation_residual(&self) -> f64 {
        let h = self.mesh.dx;
        self.balance
            .windows(3)
            .map(|w| ((w[2].mass - w[0].mass) / (2.0 * h) + w[1].flux_right - w[1].flux_left).abs())
            .fold(0.0, f64::max)
    }
}

/// Called after every time level with `(step, t, psi1, psi2)`.
pub type Observer<'a> = dyn FnMut(usize, f64, &[Complex64], &[Complex64]) + 'a;

pub fn solve_reference(scenario: &Scenario, dx: f64, snapshot_times: &[f64]) -> Result<ReferenceSolution> {
    solve_reference_observed(scenario, dx, snapshot_times, None)
}

/// As [`solve_reference`] on a mesh reaching at least `|x| = extent`.
pub fn solve_reference_covering(scenario: &Scenario, dx: f64, snapshot_times: &[f64], extent: f64) -> Result<ReferenceSolution> {
    solve_on(CharacteristicMesh::covering(scenario, dx, extent)?, scenario, snapshot_times, None)
}

pub fn solve_reference_observed(
    scenario: &Scenario,
    dx: f64,
    snapshot_times: &[f64],
    observer: Option<&mut Observer<'_>>,
) -> Result<ReferenceSolution> {
    solve_on(CharacteristicMesh::for_scenario(scenario, dx)?, scenario, snapshot_times, observer)
}

fn solve_on(
    mesh: CharacteristicMesh,
    scenario: &Scenario,
    snapshot_times: &[f64],
    mut observer: Option<&mut Observer<'_>>,
) -> Result<ReferenceSolution> {
    let dx = mesh.dx;
    let mut wanted = Vec::with_capacity(snapshot_times.len());
    for &t in snapshot_times {
        let n = mesh.step_of(t).ok_or_else(|| Error::Mesh(format!("snapshot time {t} is not a multiple of dx = {dx}")))?;
        wanted.push(n);
    }
    wanted.sort_unstable();
    wanted.dedup();

    let n_x = mesh.len;
    let o = mesh.origin;
    let h = dx;
    let [m1, m2] = scenario.masses();
    let finite = scenario.geometry.is_finite();
    let boundary = scenario.boundary.clone();

    let init = |r, c| scenario.initial_profile(r, c);
    let mut a = vec![ZERO; n_x];
    let mut b = vec![ZERO; n_x];
    for i in 0..n_x {
        let x = mesh.x(i);
        // At the interface node, each component carries the value of the
        // region it is about to move into.
        let r1 = if i < o { Region::Left } else { Region::Right };
        let r2 = if i <= o { Region::Left } else { Region::Right };
        a[i] = init(r1, Component::Psi1).value(x);
        b[i] = init(r2, Component::Psi2).value(x);
    }
    // Psi1 moving from node i-1 to i sees the left mass iff x_i <= 0;
    // Psi2 moving from i+1 to i sees it iff x_i < 0.
    let ca: Vec<Complex64> =
        (0..n_x).map(|i| Complex64::new(0.0, 0.5 * h * if i <= o { m1 } else { m2 })).collect();
    let cb: Vec<Complex64> = (0..n_x).map(|i| Complex64::new(0.0, 0.5 * h * if i < o { m1 } else { m2 })).collect();

    let mut rows: Vec<(TraceKind, Vec<Complex64>)> = vec![
        (TraceKind::Interface(Component::Psi1), Vec::with_capacity(mesh.steps + 1)),
        (TraceKind::Interface(Component::Psi2), Vec::with_capacity(mesh.steps + 1)),
    ];
    if finite {
        for kind in [
            TraceKind::LeftEnd(Component::Psi1),
            TraceKind::LeftEnd(Component::Psi2),
            TraceKind::RightEnd(Component::Psi1),
            TraceKind::RightEnd(Component::Psi2),
        ] {
            rows.push((kind, Vec::with_capacity(mesh.steps + 1)));
        }
    }
    let record = |rows: &mut Vec<(TraceKind, Vec<Complex64>)>, a: &[Complex64], b: &[Complex64]| {
        rows[0].1.push(a[o]);
        rows[1].1.push(b[o]);
        if finite {
            rows[2].1.push(a[0]);
            rows[3].1.push(b[0]);
            rows[4].1.push(a[n_x - 1]);
            rows[5].1.push(b[n_x - 1]);
        }
    };
    let balance_of = |n: usize, a: &[Complex64], b: &[Complex64]| {
        let rho = |i: usize| a[i].norm_sqr() + b[i].norm_sqr();
        let mut mass = 0.5 * (rho(0) + rho(n_x - 1));
        for i in 1..n_x - 1 {
            mass += rho(i);
        }
        Balance {
            t: mesh.t(n),
            mass: mass * h,
            flux_left: a[0].norm_sqr() - b[0].norm_sqr(),
            flux_right: a[n_x - 1].norm_sqr() - b[n_x - 1].norm_sqr(),
            flux_interface: a[o].norm_sqr() - b[o].norm_sqr(),
        }
    };

    let mut snapshots = Vec::with_capacity(wanted.len());
    let mut balance = Vec::with_capacity(mesh.steps + 1);
    let mut next = wanted.iter().peekable();
    let mut take_snapshot = |n: usize, a: &[Complex64], b: &[Complex64], snapshots: &mut Vec<Snapshot>| {
        while let Some(&&w) = next.peek() {
            if w == n {
                snapshots.push(Snapshot { step: n, t: mesh.t(n), psi1: a.to_vec(), psi2: b.to_vec() });
            }
            if w <= n {
                next.next();
            } else {
                break;
            }
        }
    };

    record(&mut rows, &a, &b);
    balance.push(balance_of(0, &a, &b));
    take_snapshot(0, &a, &b, &mut snapshots);
    if let Some(obs) = observer.as_mut() {
        obs(0, 0.0, &a, &b);
    }

    let mut na = vec![ZERO; n_x];
    let mut nb = vec![ZERO; n_x];
    for n in 0..mesh.steps {
        let t_new = mesh.t(n + 1);
        for i in 1..n_x - 1 {
            let big_a = a[i - 1] - ca[i] * b[i - 1];
            let big_b = b[i + 1] - cb[i] * a[i + 1];
            let ai = (big_a - ca[i] * big_b) / (1.0 - ca[i] * cb[i]);
            na[i] = ai;
            nb[i] = big_b - cb[i] * ai;
        }
        // left end: Psi1 enters, Psi2 leaves
        na[0] = match &boundary {
            Some(bd) => bd.left_inflow.value(t_new),
            None => ZERO,
        };
        nb[0] = b[1] - cb[0] * (a[1] + na[0]);
        // right end: Psi2 enters, Psi1 leaves
        let last = n_x - 1;
        nb[last] = match &boundary {
            Some(bd) => bd.right_inflow.value(t_new),
            None => ZERO,
        };
        na[last] = a[last - 1] - ca[last] * (b[last - 1] + nb[last]);
        std::mem::swap(&mut a, &mut na);
        std::mem::swap(&mut b, &mut nb);

        record(&mut rows, &a, &b);
        balance.push(balance_of(n + 1, &a, &b));
        take_snapshot(n + 1, &a, &b, &mut snapshots);
        if let Some(obs) = observer.as_mut() {
            obs(n + 1, t_new, &a, &b);
        }
    }

    Ok(ReferenceSolution { mesh, snapshots, traces: TraceTable::new(dx, rows)?, balance })
}

/// Streams the mesh field every `stride` steps as CSV.
pub fn write_field_csv<W: Write>(scenario: &Scenario, dx: f64, stride: usize, mut w: W) -> Result<()> {
    let mesh = CharacteristicMesh::for_scenario(scenario, dx)?;
    let stride = stride.max(1);
    let mut io_err = None;
    writeln!(w, "x,t,region,re_psi1,im_psi1,re_psi2,im_psi2").map_err(|e| Error::Mesh(e.to_string()))?;
    let mut obs = |n: usize, t: f64, a: &[Complex64], b: &[Complex64]| {
        if n % stride != 0 || io_err.is_some() {
            return;
        }
        for i in 0..a.len() {
            let x = mesh.x(i);
            let regions: &[Region] = match i.cmp(&mesh.origin) {
                std::cmp::Ordering::Less => &[Region::Left],
                std::cmp::Ordering::Equal => &[Region::Left, Region::Right],
                std::cmp::Ordering::Greater => &[Region::Right],
            };
            for r in regions {
                if let Err(e) = writeln!(
                    w,
                    "{x:.16e},{t:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                    r.index(),
                    a[i].re,
                    a[i].im,
                    b[i].re,
                    b[i].im
                ) {
                    io_err = Some(e);
                    return;
                }
            }
        }
    };
    solve_reference_observed(scenario, dx, &[], Some(&mut obs))?;
    match io_err {
        Some(e) => Err(Error::Mesh(e.to_string())),
        None => Ok(()),
    }
}

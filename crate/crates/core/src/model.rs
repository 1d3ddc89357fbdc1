//! Domain types, dispersion branches and the 2x2 symbol algebra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Left region is `x <= 0`, right region is `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Left,
    Right,
}

impl Region {
    pub const BOTH: [Region; 2] = [Region::Left, Region::Right];

    /// 1 for the left region, 2 for the right one.
    pub fn index(self) -> usize {
        match self {
            Region::Left => 1,
            Region::Right => 2,
        }
    }

    pub fn from_index(j: usize) -> Option<Region> {
        match j {
            1 => Some(Region::Left),
            2 => Some(Region::Right),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Right => "right",
        }
    }
}

/// Spinor component. `Psi1` moves right with unit speed, `Psi2` moves left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Psi1,
    Psi2,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Psi1, Component::Psi2];

    pub fn index(self) -> usize {
        match self {
            Component::Psi1 => 1,
            Component::Psi2 => 2,
        }
    }

    pub fn from_index(l: usize) -> Option<Component> {
        match l {
            1 => Some(Component::Psi1),
            2 => Some(Component::Psi2),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Psi1 => "psi1",
            Component::Psi2 => "psi2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    TwoHalfLines,
    TwoFiniteIntervals,
}

/// Spatial layout plus time horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    length: Option<f64>,
    horizon: f64,
}

impl Geometry {
    pub fn half_lines(horizon: f64) -> Result<Geometry> {
        check_horizon(horizon)?;
        Ok(Geometry { kind: GeometryKind::TwoHalfLines, length: None, horizon })
    }

    pub fn finite(length: f64, horizon: f64) -> Result<Geometry> {
        check_horizon(horizon)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid(format!("interval length must be positive, got {length}")));
        }
        Ok(Geometry { kind: GeometryKind::TwoFiniteIntervals, length: Some(length), horizon })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn is_finite(&self) -> bool {
        self.kind == GeometryKind::TwoFiniteIntervals
    }

    /// Interval length `L` (finite case only).
    pub fn length(&self) -> Option<f64> {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Spatial extent of a region as a closed interval (infinite ends allowed).
    pub fn region_bounds(&self, region: Region) -> (f64, f64) {
        let l = self.length.unwrap_or(f64::INFINITY);
        match region {
            Region::Left => (-l, 0.0),
            Region::Right => (0.0, l),
        }
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("time horizon must be positive, got {t}")))
    }
}

/// Per-region mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    pub region: Region,
    pub mass: f64,
}

impl RegionParams {
    pub fn new(region: Region, mass: f64) -> Result<RegionParams> {
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::invalid(format!("mass must be nonnegative, got {mass}")));
        }
        Ok(RegionParams { region, mass })
    }

    pub fn is_massless(&self) -> bool {
        self.mass == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionBranch {
    pub mass: f64,
    pub branch: Branch,
}

impl DispersionBranch {
    pub fn value(&self, k: f64) -> Complex64 {
        dispersion(self.mass, self.branch, k)
    }
}

/// `sqrt(k^2 + m^2)` without overflow for large arguments.
pub fn alpha(mass: f64, k: f64) -> f64 {
    k.hypot(mass)
}

/// Massive branch `±i sqrt(k^2+m^2)`. For `mass == 0` this is `±i|k|`; the
/// massless solver uses [`massless_dispersion`] instead.
pub fn dispersion(mass: f64, branch: Branch, k: f64) -> Complex64 {
    Complex64::new(0.0, branch.sign() * alpha(mass, k))
}

/// Massless branches `±ik`, valid on the whole real line.
pub fn massless_dispersion(branch: Branch, k: f64) -> Complex64 {
    Complex64::new(0.0, branch.sign() * k)
}

pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Symbol `Λ(k)`, its diagonalizer `A(k)` and the eigenvalues `Ω₁,₂(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMatrices {
    pub mass: f64,
    pub k: f64,
    pub lambda: Mat2,
    pub a: Mat2,
    pub omega: [Complex64; 2],
}

/// Constant `diag(-1, 1)`.
pub const X: Mat2 = [
    [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

pub fn lambda(mass: f64, k: f64) -> Mat2 {
    let ik = I * k;
    let im = I * mass;
    [[ik, im], [im, -ik]]
}

pub fn diagonalizer(mass: f64, k: f64) -> Result<SpectralMatrices> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid(format!(
            "diagonalizer needs a positive mass, got {mass}; the massless symbol is already diagonal"
        )));
    }
    let o1 = dispersion(mass, Branch::Plus, k);
    let o2 = dispersion(mass, Branch::Minus, k);
    let ik = I * k;
    let im = I * mass;
    Ok(SpectralMatrices {
        mass,
        k,
        lambda: lambda(mass, k),
        a: [[im, o1 - ik], [im, o2 - ik]],
        omega: [o1, o2],
    })
}

impl SpectralMatrices {
    /// `A⁻¹` from the adjugate, with `det A = i m (Ω₂ − Ω₁)`.
    pub fn a_inverse(&self) -> Mat2 {
        let det = I * self.mass * (self.omega[1] - self.omega[0]);
        let a = &self.a;
        [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
    }

    pub fn omega_diag(&self) -> Mat2 {
        let z = Complex64::new(0.0, 0.0);
        [[self.omega[0], z], [z, self.omega[1]]]
    }

    /// `max |A Λ − Ω A|`.
    pub fn intertwining_residual(&self) -> f64 {
        mat_max_abs_diff(&mat_mul(&self.a, &self.lambda), &mat_mul(&self.omega_diag(), &self.a))
    }

    /// `max |A Λ A⁻¹ − Ω|`.
    pub fn similarity_residual(&self) -> f64 {
        let m = mat_mul(&mat_mul(&self.a, &self.lambda), &self.a_inverse());
        mat_max_abs_diff(&m, &self.omega_diag())
    }
}

/// `det(Λ(k) − ω I)`.
pub fn characteristic_det(lambda: &Mat2, omega: Complex64) -> Complex64 {
    (lambda[0][0] - omega) * (lambda[1][1] - omega) - lambda[0][1] * lambda[1][0]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryPoint {
    pub x: f64,
    pub t: f64,
    pub region: Region,
}

impl QueryPoint {
    pub fn new(x: f64, t: f64, region: Region) -> QueryPoint {
        QueryPoint { x, t, region }
    }

    /// Checks the point against the region extent and `0 <= t <= T`.
    pub fn validate(&self, geometry: &Geometry) -> Result<()> {
        let (lo, hi) = geometry.region_bounds(self.region);
        if !(self.x >= lo && self.x <= hi) {
            return Err(Error::OutsideDomain { x: self.x, region: self.region });
        }
        if !(self.t >= 0.0) {
            return Err(Error::invalid(format!("query time must be nonnegative, got {}", self.t)));
        }
        if self.t > geometry.horizon() * (1.0 + 1e-12) {
            return Err(Error::TimeBeyondHorizon { t: self.t, horizon: geometry.horizon() });
        }
        Ok(())
    }
}

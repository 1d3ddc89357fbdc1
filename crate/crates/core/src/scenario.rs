//! Full problem statement: geometry, masses, initial and outer boundary data.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Component, Geometry, Region, RegionParams};
use crate::profile::Profile;

/// Outer boundary data for the finite case. Inflow components (`Psi1` at
/// `-L`, `Psi2` at `L`) drive the problem; outflow components are optional
/// and only compared against the computed solution.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    /// `Psi1(-L, t)`.
    pub left_inflow: Arc<Profile>,
    /// `Psi2(L, t)`.
    pub right_inflow: Arc<Profile>,
    /// Prescribed `Psi2(-L, t)`, if any.
    pub left_outflow: Option<Arc<Profile>>,
    /// Prescribed `Psi1(L, t)`, if any.
    pub right_outflow: Option<Arc<Profile>>,
}

impl BoundaryData {
    pub fn zero() -> BoundaryData {
        BoundaryData {
            left_inflow: Arc::new(Profile::Zero),
            right_inflow: Arc::new(Profile::Zero),
            left_outflow: None,
            right_outflow: None,
        }
    }

    pub fn inflow(left: Profile, right: Profile) -> BoundaryData {
        BoundaryData { left_inflow: Arc::new(left), right_inflow: Arc::new(right), left_outflow: None, right_outflow: None }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: Geometry,
    pub regions: [RegionParams; 2],
    /// `initial[j][l]`: component `l+1` in region `j+1`.
    pub initial: [[Arc<Profile>; 2]; 2],
    pub boundary: Option<BoundaryData>,
}

/// Corner mismatches between data sets that the problem assumes compatible.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Compatibility {
    /// `|Psi1_0^(1)(0) - Psi1_0^(2)(0)|`.
    pub interface_psi1: f64,
    pub interface_psi2: f64,
    /// `|Psi1_0^(1)(-L) - boundary Psi1(-L, 0)|` (finite case).
    pub left_corner: f64,
    /// `|Psi2_0^(2)(L) - boundary Psi2(L, 0)|` (finite case).
    pub right_corner: f64,
}

impl Compatibility {
    pub fn max(&self) -> f64 {
        self.interface_psi1.max(self.interface_psi2).max(self.left_corner).max(self.right_corner)
    }
}

impl Scenario {
    pub fn new(
        geometry: Geometry,
        masses: [f64; 2],
        initial: [[Profile; 2]; 2],
        boundary: Option<BoundaryData>,
    ) -> Result<Scenario> {
        let regions = [RegionParams::new(Region::Left, masses[0])?, RegionParams::new(Region::Right, masses[1])?];
        let [[a, b], [c, d]] = initial;
        let s = Scenario {
            geometry,
            regions,
            initial: [[Arc::new(a), Arc::new(b)], [Arc::new(c), Arc::new(d)]],
            boundary,
        };
        s.validate()?;
        Ok(s)
    }

    /// Two half-lines.
    pub fn half_lines(horizon: f64, masses: [f64; 2], initial: [[Profile; 2]; 2]) -> Result<Scenario> {
        Scenario::new(Geometry::half_lines(horizon)?, masses, initial, None)
    }

    pub fn finite(length: f64, horizon: f64, masses: [f64; 2], initial: [[Profile; 2]; 2], boundary: BoundaryData) -> Result<Scenario> {
        Scenario::new(Geometry::finite(length, horizon)?, masses, initial, Some(boundary))
    }

    fn validate(&self) -> Result<()> {
        match (self.geometry.is_finite(), self.boundary.is_some()) {
            (true, false) => return Err(Error::invalid("finite intervals need outer boundary data")),
            (false, true) => return Err(Error::invalid("half-lines take no outer boundary data")),
            _ => {}
        }
        if !self.geometry.is_finite() {
            // decay towards the far end of each half-line
            for comp in Component::BOTH {
                for (region, far) in [(Region::Left, -1.0e6), (Region::Right, 1.0e6)] {
                    let v = self.initial_profile(region, comp).value(far);
                    if v.norm() > 1e-12 {
                        return Err(Error::invalid(format!(
                            "initial {} profile of the {} region does not decay at infinity",
                            comp.name(),
                            region.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn mass(&self, region: Region) -> f64 {
        self.regions[region.index() - 1].mass
    }

    pub fn masses(&self) -> [f64; 2] {
        [self.regions[0].mass, self.regions[1].mass]
    }

    pub fn is_massless(&self) -> bool {
        self.regions.iter().all(RegionParams::is_massless)
    }

    pub fn horizon(&self) -> f64 {
        self.geometry.horizon()
    }

    pub fn initial_profile(&self, region: Region, comp: Component) -> &Profile {
        &self.initial[region.index() - 1][comp.index() - 1]
    }

    pub fn initial_arc(&self, region: Region, comp: Component) -> Arc<Profile> {
        self.initial[region.index() - 1][comp.index() - 1].clone()
    }

    /// Same data with both masses set to zero.
    pub fn massless_limit(&self) -> Scenario {
        let mut s = self.clone();
        for r in s.regions.iter_mut() {
            r.mass = 0.0;
        }
        s
    }

    /// Same data and geometry with other masses.
    pub fn with_masses(&self, masses: [f64; 2]) -> Result<Scenario> {
        let mut s = self.clone();
        s.regions = [RegionParams::new(Region::Left, masses[0])?, RegionParams::new(Region::Right, masses[1])?];
        Ok(s)
    }

    /// Same data with a different time horizon.
    pub fn with_horizon(&self, horizon: f64) -> Result<Scenario> {
        let mut s = self.clone();
        s.geometry = match s.geometry.length() {
            Some(l) => Geometry::finite(l, horizon)?,
            None => Geometry::half_lines(horizon)?,
        };
        Ok(s)
    }

    pub fn compatibility(&self) -> Compatibility {
        let p = |r, c| self.initial_profile(r, c);
        let mut out = Compatibility {
            interface_psi1: (p(Region::Left, Component::Psi1).value(0.0) - p(Region::Right, Component::Psi1).value(0.0)).norm(),
            interface_psi2: (p(Region::Left, Component::Psi2).value(0.0) - p(Region::Right, Component::Psi2).value(0.0)).norm(),
            ..Default::default()
        };
        if let (Some(l), Some(b)) = (self.geometry.length(), &self.boundary) {
            out.left_corner = (p(Region::Left, Component::Psi1).value(-l) - b.left_inflow.value(0.0)).norm();
            out.right_corner = (p(Region::Right, Component::Psi2).value(l) - b.right_inflow.value(0.0)).norm();
        }
        out
    }

    /// Largest distance from the interface where initial data is nonnegligible.
    pub fn support_radius(&self) -> f64 {
        let mut r: f64 = 0.0;
        for region in Region::BOTH {
            for comp in Component::BOTH {
                if let Some((lo, hi)) = self.initial_profile(region, comp).support_hint() {
                    let (a, b) = self.geometry.region_bounds(region);
                    r = r.max(lo.max(a).abs()).max(hi.min(b).abs());
                }
            }
        }
        r
    }
}

//! Exact massless solutions by transport along characteristics.
//!
//! `Psi1` moves right and `Psi2` moves left with unit speed. Both components
//! pass through the interface unchanged; in the finite case `Psi1` enters at
//! `-L` and `Psi2` at `L`. On a characteristic through a corner the initial
//! data branch wins (`>=` ties).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Component, QueryPoint, Region};
use crate::scenario::Scenario;

/// Borrowed view of a scenario with both masses zero.
#[derive(Debug, Clone, Copy)]
pub struct MasslessScenario<'a> {
    scenario: &'a Scenario,
}

impl<'a> MasslessScenario<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<MasslessScenario<'a>> {
        if !scenario.is_massless() {
            return Err(Error::invalid("massless evaluation needs both masses equal to zero"));
        }
        Ok(MasslessScenario { scenario })
    }

    /// Uses only the data of `scenario`, whatever its masses.
    pub fn ignoring_masses(scenario: &'a Scenario) -> MasslessScenario<'a> {
        MasslessScenario { scenario }
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    pub fn eval(&self, q: QueryPoint, comp: Component) -> Result<Complex64> {
        q.validate(&self.scenario.geometry)?;
        Ok(self.value(q.region, comp, q.x, q.t))
    }

    fn value(&self, region: Region, comp: Component, x: f64, t: f64) -> Complex64 {
        let s = self.scenario;
        let init = |r, c| s.initial_profile(r, c);
        let len = s.geometry.length();
        match (region, comp) {
            (Region::Left, Component::Psi1) => match len {
                Some(l) if x - t < -l => {
                    let b = s.boundary.as_ref().expect("finite scenario has boundary data");
                    b.left_inflow.value(t - x - l)
                }
                _ => init(Region::Left, Component::Psi1).value(x - t),
            },
            (Region::Left, Component::Psi2) => {
                if -x >= t {
                    init(Region::Left, Component::Psi2).value(x + t)
                } else {
                    self.value(Region::Right, Component::Psi2, 0.0, x + t)
                }
            }
            (Region::Right, Component::Psi1) => {
                if x >= t {
                    init(Region::Right, Component::Psi1).value(x - t)
                } else {
                    self.value(Region::Left, Component::Psi1, 0.0, t - x)
                }
            }
            (Region::Right, Component::Psi2) => match len {
                Some(l) if x + t > l => {
                    let b = s.boundary.as_ref().expect("finite scenario has boundary data");
                    b.right_inflow.value(x + t - l)
                }
                _ => init(Region::Right, Component::Psi2).value(x + t),
            },
        }
    }
}

/// Massless solution at `q`; errors on masses other than zero, `t > T` or
/// points outside the region.
pub fn eval_massless(scenario: &Scenario, q: QueryPoint, comp: Component) -> Result<Complex64> {
    MasslessScenario::new(scenario)?.eval(q, comp)
}

/// Data a massless component reads: its own initial profile plus, for the
/// component arriving through the interface, the interface trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MasslessSlot {
    Initial(Region, Component),
    InterfaceTrace(Component),
    OuterBoundary(Component),
}

pub fn massless_slots(region: Region, comp: Component, finite: bool) -> Vec<MasslessSlot> {
    let mut out = vec![MasslessSlot::Initial(region, comp)];
    match (region, comp) {
        (Region::Left, Component::Psi2) | (Region::Right, Component::Psi1) => out.push(MasslessSlot::InterfaceTrace(comp)),
        _ => {
            if finite {
                out.push(MasslessSlot::OuterBoundary(comp));
            }
        }
    }
    out
}

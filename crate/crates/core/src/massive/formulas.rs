//! Term-list files: one formula per (region, component), one expression per
//! integral.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Deserialize;

use super::terms::{expand, Atom, Location, Monomial, Sign, Slot};
use crate::error::{Error, Result};
use crate::model::{Component, GeometryKind, Region};

/// Which reading of the integral representations to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermVariant {
    /// Term lists transcribed as printed.
    #[default]
    Printed,
    /// Rederived term lists.
    Corrected,
}

impl TermVariant {
    pub fn name(self) -> &'static str {
        match self {
            TermVariant::Printed => "printed",
            TermVariant::Corrected => "corrected",
        }
    }
}

const HALFLINE_PRINTED: &str = include_str!("../../terms/halfline_printed.toml");
const HALFLINE_CORRECTED: &str = include_str!("../../terms/halfline_corrected.toml");
const FINITE_PRINTED: &str = include_str!("../../terms/finite_printed.toml");
const FINITE_CORRECTED: &str = include_str!("../../terms/finite_corrected.toml");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    name: String,
    geometry: String,
    formula: Vec<RawFormula>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormula {
    region: usize,
    component: usize,
    integrals: Vec<String>,
}

/// Monomial with the `pi` powers folded into the coefficient and the
/// remaining exponents unpacked for fast evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledTerm {
    pub coeff: Complex64,
    pub k: i32,
    pub alpha: [i32; 2],
    pub mass: [i32; 2],
    pub cos: [i32; 2],
    pub sin: [i32; 2],
    /// `[region][0 = +, 1 = -]` powers of `e^{± i α_j t}`.
    pub exp_alpha_t: [[i32; 2]; 2],
    /// Powers of `e^{ikL}` minus powers of `e^{-ikL}`.
    pub exp_kl: i32,
    /// Index into [`FormulaSet::slots`].
    pub slot: usize,
}

#[derive(Debug, Clone)]
pub struct Integral {
    /// Expression text as stored in the term file.
    pub source: String,
    pub monomials: Vec<Monomial>,
    pub terms: Vec<CompiledTerm>,
}

#[derive(Debug, Clone)]
pub struct Formula {
    pub region: Region,
    pub component: Component,
    pub integrals: Vec<Integral>,
}

impl Formula {
    /// Every data slot the formula reads, as spelled in the term list.
    pub fn slots(&self) -> BTreeSet<Slot> {
        self.integrals.iter().flat_map(|i| i.monomials.iter().filter_map(|m| m.slot)).collect()
    }

    pub fn label(&self) -> String {
        format!("{}^({})", self.component.name(), self.region.index())
    }
}

#[derive(Debug, Clone)]
pub struct FormulaSet {
    pub name: String,
    pub geometry: GeometryKind,
    pub formulas: Vec<Formula>,
    /// Distinct slots after erasing spelling (see [`Slot::canonical`]).
    pub slots: Vec<Slot>,
}

fn slot_index(slots: &mut Vec<Slot>, s: Slot) -> usize {
    let c = s.canonical();
    match slots.iter().position(|x| *x == c) {
        Some(i) => i,
        None => {
            slots.push(c);
            slots.len() - 1
        }
    }
}

fn compile(m: &Monomial, slots: &mut Vec<Slot>) -> CompiledTerm {
    let r = |reg: Region| reg.index() - 1;
    let mut t = CompiledTerm {
        coeff: m.coeff * PI.powi(m.power(Atom::Pi)),
        k: 0,
        alpha: [0; 2],
        mass: [0; 2],
        cos: [0; 2],
        sin: [0; 2],
        exp_alpha_t: [[0; 2]; 2],
        exp_kl: 0,
        slot: slot_index(slots, m.slot.expect("expanded monomials carry a slot")),
    };
    for (atom, &p) in &m.powers {
        match *atom {
            Atom::K => t.k += p,
            Atom::Pi => {}
            Atom::Alpha(g) => t.alpha[r(g)] += p,
            Atom::Mass(g) => t.mass[r(g)] += p,
            Atom::Cos(g) => t.cos[r(g)] += p,
            Atom::Sin(g) => t.sin[r(g)] += p,
            Atom::ExpAlphaT(g, Sign::Plus) => t.exp_alpha_t[r(g)][0] += p,
            Atom::ExpAlphaT(g, Sign::Minus) => t.exp_alpha_t[r(g)][1] += p,
            Atom::ExpKL(Sign::Plus) => t.exp_kl += p,
            Atom::ExpKL(Sign::Minus) => t.exp_kl -= p,
        }
    }
    t
}

impl FormulaSet {
    /// Parses a TOML term file.
    pub fn parse(source_name: &str, text: &str) -> Result<FormulaSet> {
        let err = |message: String| Error::TermList { source_name: source_name.to_string(), message };
        let raw: RawSet = toml::from_str(text).map_err(|e| err(e.to_string()))?;
        let geometry = match raw.geometry.as_str() {
            "half-lines" => GeometryKind::TwoHalfLines,
            "finite" => GeometryKind::TwoFiniteIntervals,
            g => return Err(err(format!("unknown geometry {g:?}"))),
        };
        let mut slots = Vec::new();
        let mut formulas = Vec::with_capacity(raw.formula.len());
        for f in raw.formula {
            let region = Region::from_index(f.region).ok_or_else(|| err(format!("bad region {}", f.region)))?;
            let component =
                Component::from_index(f.component).ok_or_else(|| err(format!("bad component {}", f.component)))?;
            if formulas.iter().any(|g: &Formula| g.region == region && g.component == component) {
                return Err(err(format!("duplicate formula for {}^({})", component.name(), f.region)));
            }
            let mut integrals = Vec::with_capacity(f.integrals.len());
            for (n, src) in f.integrals.into_iter().enumerate() {
                let monomials = expand(&src).map_err(|e| {
                    err(format!("{}^({}) integral {}: {e}", component.name(), f.region, n + 1))
                })?;
                if geometry == GeometryKind::TwoHalfLines
                    && monomials.iter().any(|m| matches!(m.slot, Some(Slot::Time { location: Location::LeftEnd | Location::RightEnd, .. })) || m.power(Atom::ExpKL(Sign::Plus)) != 0 || m.power(Atom::ExpKL(Sign::Minus)) != 0)
                {
                    return Err(err(format!("{}^({}) integral {}: outer boundary terms on half-lines", component.name(), f.region, n + 1)));
                }
                let terms = monomials.iter().map(|m| compile(m, &mut slots)).collect();
                integrals.push(Integral { source: src, monomials, terms });
            }
            formulas.push(Formula { region, component, integrals });
        }
        for region in Region::BOTH {
            for comp in Component::BOTH {
                if !formulas.iter().any(|g| g.region == region && g.component == comp) {
                    return Err(err(format!("missing formula for {}^({})", comp.name(), region.index())));
                }
            }
        }
        Ok(FormulaSet { name: raw.name, geometry, formulas, slots })
    }

    /// One of the shipped term lists.
    pub fn builtin(geometry: GeometryKind, variant: TermVariant) -> &'static FormulaSet {
        static SETS: OnceLock<[FormulaSet; 4]> = OnceLock::new();
        let sets = SETS.get_or_init(|| {
            let load = |name, text| FormulaSet::parse(name, text).expect("shipped term list parses");
            [
                load("halfline_printed.toml", HALFLINE_PRINTED),
                load("halfline_corrected.toml", HALFLINE_CORRECTED),
                load("finite_printed.toml", FINITE_PRINTED),
                load("finite_corrected.toml", FINITE_CORRECTED),
            ]
        });
        let g = match geometry {
            GeometryKind::TwoHalfLines => 0,
            GeometryKind::TwoFiniteIntervals => 2,
        };
        let v = match variant {
            TermVariant::Printed => 0,
            TermVariant::Corrected => 1,
        };
        &sets[g + v]
    }

    pub fn formula(&self, region: Region, comp: Component) -> &Formula {
        self.formulas
            .iter()
            .find(|f| f.region == region && f.component == comp)
            .expect("term lists cover every region and component")
    }
}

/// Data slots read by one formula of a term list.
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyReport {
    pub geometry: GeometryKind,
    pub variant: TermVariant,
    pub region: Region,
    pub component: Component,
    pub slots: BTreeSet<Slot>,
}

impl DependencyReport {
    /// Whether any time-transform slot reads `comp` at `location`.
    pub fn reads_trace(&self, location: Location, comp: Component) -> bool {
        self.slots.iter().any(|s| matches!(*s, Slot::Time { location: l, comp: c, .. } if l == location && c == comp))
    }

    pub fn trace_slots(&self) -> BTreeSet<Slot> {
        self.slots.iter().filter(|s| s.is_time()).copied().collect()
    }
}

impl fmt::Display for DependencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let geometry = match self.geometry {
            GeometryKind::TwoHalfLines => "half-line",
            GeometryKind::TwoFiniteIntervals => "finite",
        };
        write!(f, "{geometry} {} {}^({}): {{", self.variant.name(), self.component.name(), self.region.index())?;
        for (n, s) in self.slots.iter().enumerate() {
            write!(f, "{}{s}", if n > 0 { ", " } else { "" })?;
        }
        write!(f, "}}")
    }
}

/// Inspects a shipped term list and reports the slots it reads.
pub fn structural_dependency_check(
    geometry: GeometryKind,
    variant: TermVariant,
    region: Region,
    component: Component,
) -> DependencyReport {
    let slots = FormulaSet::builtin(geometry, variant).formula(region, component).slots();
    DependencyReport { geometry, variant, region, component, slots }
}

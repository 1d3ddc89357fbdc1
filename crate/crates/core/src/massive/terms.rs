//! Integrand term lists.
//!
//! Each integral is written as an algebraic expression (the integrand
//! without the common `e^{ikx}` factor) and expanded into monomials. Every
//! monomial must carry exactly one data slot.
//!
//! Grammar: sums and products of numbers, `i`, `pi`, `k`, `a1`, `a2`
//! (`sqrt(k^2+m_j^2)`), `m1`, `m2`, `cos(a1t)`, `sin(a2t)`, `exp(ia1t)`,
//! `exp(-ia2t)`, `exp(ikL)`, `exp(-ikL)`, integer powers `^n`, parentheses
//! and bracketed slots:
//!
//! * `[psi1_0^1(k)]`, `[psi2_0^2(-k)]`: initial-data transforms at `±k`;
//! * `[h0,1^1(ia1)]`, `[B0,2^1(-ia1)]`: interface trace transforms;
//! * `[B-L,1^1(ia1)]`, `[BL,2^2(-ia2)]`: outer boundary transforms.
//!
//! Juxtaposition multiplies; `/` divides by the next factor only.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::model::{Component, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    K,
    Pi,
    Alpha(Region),
    Mass(Region),
    Cos(Region),
    Sin(Region),
    /// `e^{± i α_j t}`.
    ExpAlphaT(Region, Sign),
    /// `e^{± i k L}`.
    ExpKL(Sign),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Sign::Plus => "",
            Sign::Minus => "-",
        }
    }
}

/// Where a time-transformed boundary row lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Location {
    Interface,
    LeftEnd,
    RightEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// Transform of the initial profile of `comp` in `region`, at `k` or `-k`.
    Initial { region: Region, comp: Component, reflected: bool },
    /// `∫_0^t e^{± i α_j s} Psi_comp(location, s) ds`. `superscript` is the
    /// region label written on the symbol; `interface_symbol` records the
    /// `h` spelling used on the half-lines (`B` otherwise).
    Time { location: Location, comp: Component, superscript: Region, sign: Sign, alpha: Region, interface_symbol: bool },
}

impl Slot {
    pub fn is_time(&self) -> bool {
        matches!(self, Slot::Time { .. })
    }

    /// Same slot with the spelling details (`h` vs `B`, superscript) erased.
    pub fn canonical(&self) -> Slot {
        match *self {
            Slot::Time { location, comp, sign, alpha, .. } => Slot::Time {
                location,
                comp,
                superscript: Region::Left,
                sign,
                alpha,
                interface_symbol: false,
            },
            s => s,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slot::Initial { region, comp, reflected } => {
                write!(f, "psi{}_0^{}({}k)", comp.index(), region.index(), if reflected { "-" } else { "" })
            }
            Slot::Time { location, comp, superscript, sign, alpha, interface_symbol } => {
                let head = match (location, interface_symbol) {
                    (Location::Interface, true) => "h0",
                    (Location::Interface, false) => "B0",
                    (Location::LeftEnd, _) => "B-L",
                    (Location::RightEnd, _) => "BL",
                };
                write!(f, "{head},{}^{}({}ia{})", comp.index(), superscript.index(), sign.prefix(), alpha.index())
            }
        }
    }
}

/// `coeff * Π atom^power * slot`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub powers: BTreeMap<Atom, i32>,
    pub slot: Option<Slot>,
}

impl Monomial {
    fn scalar(c: Complex64) -> Monomial {
        Monomial { coeff: c, powers: BTreeMap::new(), slot: None }
    }

    fn atom(a: Atom) -> Monomial {
        let mut m = Monomial::scalar(Complex64::new(1.0, 0.0));
        m.powers.insert(a, 1);
        m
    }

    fn times(&self, other: &Monomial) -> Result<Monomial, String> {
        let slot = match (self.slot, other.slot) {
            (Some(_), Some(_)) => return Err("product of two data slots".into()),
            (a, b) => a.or(b),
        };
        let mut powers = self.powers.clone();
        for (a, p) in &other.powers {
            let e = powers.entry(*a).or_insert(0);
            *e += p;
            if *e == 0 {
                powers.remove(a);
            }
        }
        Ok(Monomial { coeff: self.coeff * other.coeff, powers, slot })
    }

    fn inverse(&self) -> Result<Monomial, String> {
        if self.slot.is_some() {
            return Err("division by a data slot".into());
        }
        if self.coeff == Complex64::new(0.0, 0.0) {
            return Err("division by zero".into());
        }
        Ok(Monomial {
            coeff: 1.0 / self.coeff,
            powers: self.powers.iter().map(|(a, p)| (*a, -p)).collect(),
            slot: None,
        })
    }

    pub fn power(&self, atom: Atom) -> i32 {
        self.powers.get(&atom).copied().unwrap_or(0)
    }
}

type Poly = Vec<Monomial>;

fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly, String> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.times(y)?);
        }
    }
    Ok(out)
}

fn poly_pow(base: &Poly, n: i32) -> Result<Poly, String> {
    if n < 0 {
        if base.len() != 1 {
            return Err("negative power of a sum".into());
        }
        return poly_pow(&vec![base[0].inverse()?], -n);
    }
    let mut out = vec![Monomial::scalar(Complex64::new(1.0, 0.0))];
    for _ in 0..n {
        out = poly_mul(&out, base)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Atom(Atom),
    Imag,
    Slot(Slot),
    Op(char),
}

fn parse_slot(s: &str) -> Result<Slot, String> {
    let bad = || format!("unrecognized slot [{s}]");
    let region = |c: &str| c.parse::<usize>().ok().and_then(Region::from_index).ok_or_else(bad);
    let comp = |c: &str| c.parse::<usize>().ok().and_then(Component::from_index).ok_or_else(bad);
    if let Some(rest) = s.strip_prefix("psi") {
        // psi{l}_0^{j}(k) or (-k)
        let (l, rest) = rest.split_once("_0^").ok_or_else(bad)?;
        let (j, arg) = rest.split_once('(').ok_or_else(bad)?;
        let reflected = match arg {
            "k)" => false,
            "-k)" => true,
            _ => return Err(bad()),
        };
        return Ok(Slot::Initial { region: region(j)?, comp: comp(l)?, reflected });
    }
    let (head, rest) = s.split_once(',').ok_or_else(bad)?;
    let (location, interface_symbol) = match head {
        "h0" => (Location::Interface, true),
        "B0" => (Location::Interface, false),
        "B-L" => (Location::LeftEnd, false),
        "BL" => (Location::RightEnd, false),
        _ => return Err(bad()),
    };
    let (l, rest) = rest.split_once('^').ok_or_else(bad)?;
    let (j, arg) = rest.split_once('(').ok_or_else(bad)?;
    let arg = arg.strip_suffix(')').ok_or_else(bad)?;
    let (sign, arg) = match arg.strip_prefix('-') {
        Some(a) => (Sign::Minus, a),
        None => (Sign::Plus, arg.strip_prefix('+').unwrap_or(arg)),
    };
    let alpha = region(arg.strip_prefix("ia").ok_or_else(bad)?)?;
    Ok(Slot::Time { location, comp: comp(l)?, superscript: region(j)?, sign, alpha, interface_symbol })
}

fn named_atom(name: &str, arg: Option<&str>) -> Result<Tok, String> {
    let reg = |d: char| match d {
        '1' => Ok(Region::Left),
        '2' => Ok(Region::Right),
        _ => Err(format!("unknown region digit in {name}")),
    };
    let tok = match (name, arg) {
        ("i", None) => Tok::Imag,
        ("pi", None) => Tok::Atom(Atom::Pi),
        ("k", None) => Tok::Atom(Atom::K),
        ("a1", None) | ("a2", None) => Tok::Atom(Atom::Alpha(reg(name.as_bytes()[1] as char)?)),
        ("m1", None) | ("m2", None) => Tok::Atom(Atom::Mass(reg(name.as_bytes()[1] as char)?)),
        ("cos", Some(a)) | ("sin", Some(a)) => {
            let r = match a {
                "a1t" => Region::Left,
                "a2t" => Region::Right,
                _ => return Err(format!("bad argument {name}({a})")),
            };
            Tok::Atom(if name == "cos" { Atom::Cos(r) } else { Atom::Sin(r) })
        }
        ("exp", Some(a)) => match a {
            "ikL" => Tok::Atom(Atom::ExpKL(Sign::Plus)),
            "-ikL" => Tok::Atom(Atom::ExpKL(Sign::Minus)),
            "ia1t" => Tok::Atom(Atom::ExpAlphaT(Region::Left, Sign::Plus)),
            "-ia1t" => Tok::Atom(Atom::ExpAlphaT(Region::Left, Sign::Minus)),
            "ia2t" => Tok::Atom(Atom::ExpAlphaT(Region::Right, Sign::Plus)),
            "-ia2t" => Tok::Atom(Atom::ExpAlphaT(Region::Right, Sign::Minus)),
            _ => return Err(format!("bad argument exp({a})")),
        },
        _ => return Err(format!("unknown symbol {name}")),
    };
    Ok(tok)
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| format!("bad number {s}"))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            if matches!(name.as_str(), "cos" | "sin" | "exp") {
                if chars.get(i) != Some(&'(') {
                    return Err(format!("{name} needs an argument"));
                }
                let close = chars[i..].iter().position(|&c| c == ')').ok_or("unclosed function argument")? + i;
                let arg: String = chars[i + 1..close].iter().filter(|c| !c.is_whitespace()).collect();
                out.push(named_atom(&name, Some(&arg))?);
                i = close + 1;
            } else {
                out.push(named_atom(&name, None)?);
            }
        } else if c == '[' {
            let close = chars[i..].iter().position(|&c| c == ']').ok_or("unclosed slot")? + i;
            let inner: String = chars[i + 1..close].iter().filter(|c| !c.is_whitespace()).collect();
            out.push(Tok::Slot(parse_slot(&inner)?));
            i = close + 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc.extend(self.product()?);
            } else if self.eat('-') {
                let rhs = self.product()?;
                acc.extend(rhs.into_iter().map(|mut m| {
                    m.coeff = -m.coeff;
                    m
                }));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Atom(_) | Tok::Imag | Tok::Slot(_) | Tok::Op('(')))
    }

    fn product(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = poly_mul(&acc, &rhs)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = poly_mul(&acc, &poly_pow(&rhs, -1)?)?;
            } else if self.starts_factor() {
                let rhs = self.power()?;
                acc = poly_mul(&acc, &rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, String> {
        if self.eat('-') {
            let mut p = self.unary()?;
            for m in p.iter_mut() {
                m.coeff = -m.coeff;
            }
            Ok(p)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek() {
                Some(Tok::Num(n)) if n.fract() == 0.0 => {
                    let n = *n as i32;
                    self.pos += 1;
                    poly_pow(&base, if neg { -n } else { n })
                }
                _ => Err("exponent must be an integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(vec![Monomial::scalar(Complex64::new(v, 0.0))]),
            Tok::Imag => Ok(vec![Monomial::scalar(Complex64::new(0.0, 1.0))]),
            Tok::Atom(a) => Ok(vec![Monomial::atom(a)]),
            Tok::Slot(s) => {
                let mut m = Monomial::scalar(Complex64::new(1.0, 0.0));
                m.slot = Some(s);
                Ok(vec![m])
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err("missing closing parenthesis".into());
                }
                Ok(inner)
            }
            Tok::Op(c) => Err(format!("unexpected operator {c:?}")),
        }
    }
}

/// Expands an integrand expression into monomials, merging like terms.
/// Fails unless every surviving monomial carries exactly one slot.
pub fn expand(src: &str) -> Result<Vec<Monomial>, String> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input after token {}", p.pos));
    }
    let mut merged: Vec<Monomial> = Vec::new();
    for m in poly {
        match merged.iter_mut().find(|o| o.slot == m.slot && o.powers == m.powers) {
            Some(o) => o.coeff += m.coeff,
            None => merged.push(m),
        }
    }
    merged.retain(|m| m.coeff.norm() > 1e-15);
    if let Some(m) = merged.iter().find(|m| m.slot.is_none()) {
        return Err(format!("term without a data slot (coefficient {})", m.coeff));
    }
    Ok(merged)
}

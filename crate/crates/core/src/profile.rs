//! Scalar complex profiles of one real variable (initial data, boundary
//! data) and their exponentially weighted integrals.

use std::f64::consts::PI;

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

use crate::cubic::PiecewiseCubic;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance for the adaptive fallback.
pub const FALLBACK_REL_TOL: f64 = 1e-10;
/// Panel budget for the adaptive fallback.
pub const FALLBACK_PANELS: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Zero,
    /// `amplitude * exp(-((x - center)/width)^2)` on `|x - center| <= radius`,
    /// zero outside.
    GaussianWindow { center: f64, width: f64, radius: f64, amplitude: Complex64 },
    /// `amplitude * exp(-rate * |x|)`.
    DecayingExponential { rate: f64, amplitude: Complex64 },
    /// Cubic interpolant of samples, zero outside the sample range.
    SampledGrid(PiecewiseCubic),
    Sum(Vec<Profile>),
}

impl Default for Profile {
    fn default() -> Profile {
        Profile::Zero
    }
}

impl Profile {
    pub fn gaussian(center: f64, width: f64) -> Profile {
        Profile::GaussianWindow { center, width, radius: 6.0 * width, amplitude: Complex64::new(1.0, 0.0) }
    }

    pub fn gaussian_window(center: f64, width: f64, radius: f64, amplitude: Complex64) -> Result<Profile> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid(format!("gaussian width must be positive, got {width}")));
        }
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::invalid("gaussian center and radius must be finite, radius positive"));
        }
        Ok(Profile::GaussianWindow { center, width, radius, amplitude })
    }

    pub fn exponential(rate: f64, amplitude: Complex64) -> Result<Profile> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid(format!("decay rate must be positive, got {rate}")));
        }
        Ok(Profile::DecayingExponential { rate, amplitude })
    }

    pub fn sampled(nodes: Vec<f64>, values: &[Complex64]) -> Result<Profile> {
        Ok(Profile::SampledGrid(PiecewiseCubic::new(nodes, values)?))
    }

    /// Multiplies every term by `c`.
    pub fn scaled(&self, c: Complex64) -> Profile {
        match self {
            Profile::Zero => Profile::Zero,
            Profile::GaussianWindow { center, width, radius, amplitude } => {
                Profile::GaussianWindow { center: *center, width: *width, radius: *radius, amplitude: amplitude * c }
            }
            Profile::DecayingExponential { rate, amplitude } => {
                Profile::DecayingExponential { rate: *rate, amplitude: amplitude * c }
            }
            Profile::SampledGrid(p) => {
                let vals: Vec<_> = p.knots().iter().map(|&x| p.value(x) * c).collect();
                Profile::SampledGrid(PiecewiseCubic::new(p.knots().to_vec(), &vals).expect("same knots"))
            }
            Profile::Sum(terms) => Profile::Sum(terms.iter().map(|t| t.scaled(c)).collect()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Sum(terms) => terms.iter().all(Profile::is_zero),
            _ => false,
        }
    }

    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Profile::Zero => ZERO,
            Profile::GaussianWindow { center, width, radius, amplitude } => {
                let d = x - center;
                if d.abs() <= *radius {
                    amplitude * (-(d / width).powi(2)).exp()
                } else {
                    ZERO
                }
            }
            Profile::DecayingExponential { rate, amplitude } => amplitude * (-rate * x.abs()).exp(),
            Profile::SampledGrid(p) => p.value(x),
            Profile::Sum(terms) => terms.iter().map(|t| t.value(x)).sum(),
        }
    }

    /// Derivative; one-sided conventions at kinks are unspecified.
    pub fn derivative(&self, x: f64) -> Complex64 {
        match self {
            Profile::Zero => ZERO,
            Profile::GaussianWindow { center, width, .. } => {
                self.value(x) * (-2.0 * (x - center) / (width * width))
            }
            Profile::DecayingExponential { rate, .. } => self.value(x) * (-rate * x.signum()),
            Profile::SampledGrid(p) => p.derivative(x),
            Profile::Sum(terms) => terms.iter().map(|t| t.derivative(x)).sum(),
        }
    }

    /// Interval outside which `|f|` is below roughly `1e-16 |amplitude|`.
    pub fn support_hint(&self) -> Option<(f64, f64)> {
        match self {
            Profile::Zero => None,
            Profile::GaussianWindow { center, radius, width, .. } => {
                let r = radius.min(6.1 * width);
                Some((center - r, center + r))
            }
            Profile::DecayingExponential { rate, .. } => {
                let r = 37.0 / rate;
                Some((-r, r))
            }
            Profile::SampledGrid(p) => Some((p.start(), p.end())),
            Profile::Sum(terms) => terms.iter().filter_map(Profile::support_hint).reduce(|a, b| (a.0.min(b.0), a.1.max(b.1))),
        }
    }

    /// True when the profile takes only real values.
    pub fn is_real(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::GaussianWindow { amplitude, .. } | Profile::DecayingExponential { amplitude, .. } => amplitude.im == 0.0,
            Profile::SampledGrid(p) => p.knots().iter().all(|&x| p.value(x).im == 0.0),
            Profile::Sum(terms) => terms.iter().all(Profile::is_real),
        }
    }

    /// `∫_a^b e^{-ikx} f(x) dx` for real `k`; `a` may be `-∞` and `b` may be `+∞`.
    pub fn fourier(&self, k: f64, a: f64, b: f64) -> Complex64 {
        match self {
            Profile::GaussianWindow { center, width, radius, amplitude } => {
                amplitude * gaussian_window_fourier(*center, *width, *radius, k, a, b)
            }
            Profile::Sum(terms) => terms.iter().map(|t| t.fourier(k, a, b)).sum(),
            // the remaining families have closed forms for every complex exponent
            _ => self.exp_integral(Complex64::new(0.0, -k), a, b).expect("closed form"),
        }
    }

    /// `∫_a^b e^{ωs} f(s) ds`. Closed form when available, otherwise adaptive
    /// Gauss-Kronrod with relative tolerance [`FALLBACK_REL_TOL`].
    pub fn exp_integral(&self, omega: Complex64, a: f64, b: f64) -> Result<Complex64> {
        if !(b >= a) {
            return Err(Error::invalid(format!("integration limits out of order: [{a}, {b}]")));
        }
        match self {
            Profile::Zero => Ok(ZERO),
            Profile::GaussianWindow { center, width, radius, amplitude } => {
                if omega.re == 0.0 {
                    return Ok(amplitude * gaussian_window_fourier(*center, *width, *radius, -omega.im, a, b));
                }
                let lo = a.max(center - radius);
                let hi = b.min(center + radius);
                if !(hi > lo) {
                    return Ok(ZERO);
                }
                adaptive_gk(|s| (omega * s).exp() * self.value(s), lo, hi, FALLBACK_REL_TOL, 1e-300, FALLBACK_PANELS)
            }
            Profile::DecayingExponential { rate, amplitude } => {
                let mut total = ZERO;
                if a < 0.0 {
                    total += exp_segment(omega + rate, a, b.min(0.0));
                }
                if b > 0.0 {
                    total += exp_segment(omega - rate, a.max(0.0), b);
                }
                Ok(amplitude * total)
            }
            Profile::SampledGrid(p) => Ok(p.exp_integral(omega, a, b)),
            Profile::Sum(terms) => {
                let mut total = ZERO;
                for t in terms {
                    total += t.exp_integral(omega, a, b)?;
                }
                Ok(total)
            }
        }
    }
}

/// `∫_a^b e^{cs} ds` where the integrand decays at infinite limits.
fn exp_segment(c: Complex64, a: f64, b: f64) -> Complex64 {
    if !(b > a) {
        return ZERO;
    }
    if c.norm() * (b - a).min(1.0) < 1e-8 {
        if a.is_infinite() || b.is_infinite() {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        // series for (e^{c(b-a)} - 1)/c
        let z = c * (b - a);
        return (c * a).exp() * (b - a) * (1.0 + z / 2.0 + z * z / 6.0);
    }
    let eb = if b.is_infinite() { ZERO } else { (c * b).exp() };
    let ea = if a.is_infinite() { ZERO } else { (c * a).exp() };
    (eb - ea) / c
}

/// `∫ e^{-ikx} exp(-((x-c)/w)^2) dx` over `[a, b] ∩ [c-r, c+r]`, real `k`.
pub fn gaussian_window_fourier(c: f64, w: f64, r: f64, k: f64, a: f64, b: f64) -> Complex64 {
    let lo = a.max(c - r);
    let hi = b.min(c + r);
    if !(hi > lo) {
        return ZERO;
    }
    let kappa = 0.5 * k * w;
    let ul = (lo - c) / w;
    let uh = (hi - c) / w;
    let g = |u: f64| scaled_erf(u, kappa);
    Complex64::from_polar(w * PI.sqrt() / 2.0, -k * c) * (g(uh) - g(ul))
}

/// `e^{-κ²} erf(u + iκ)`, evaluated without overflow.
fn scaled_erf(u: f64, kappa: f64) -> Complex64 {
    let z = Complex64::new(u, kappa);
    let damp = Complex64::new(-u * u, -2.0 * u * kappa).exp();
    let base = Complex64::new((-kappa * kappa).exp(), 0.0);
    let iz = Complex64::new(-kappa, u);
    if u >= 0.0 {
        base - damp * iz.w()
    } else {
        damp * (-z * Complex64::new(0.0, 1.0)).w() - base
    }
}

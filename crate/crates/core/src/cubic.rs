//! Piecewise cubic interpolation of tabulated complex data and exact
//! integrals of `e^{ωs}` times the interpolant.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Local four-point Lagrange cubic on each knot interval (stencil shifted
/// inward at the ends). Continuous, fourth-order accurate for smooth data.
/// Zero outside the knot range.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCubic {
    knots: Vec<f64>,
    /// Power-basis coefficients in `u = s - knots[j]` for interval `j`.
    coeffs: Vec<[Complex64; 4]>,
    step: Option<f64>,
}

impl PiecewiseCubic {
    pub fn new(knots: Vec<f64>, values: &[Complex64]) -> Result<PiecewiseCubic> {
        if knots.len() != values.len() {
            return Err(Error::invalid("knots and values differ in length"));
        }
        if knots.len() < 2 {
            return Err(Error::invalid("cubic interpolation needs at least two knots"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) || knots.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("knots must be finite and strictly increasing"));
        }
        let n = knots.len();
        let width = n.min(4);
        let mut coeffs = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            let first = j.saturating_sub(1).min(n - width);
            coeffs.push(local_poly(&knots[first..first + width], &values[first..first + width], knots[j]));
        }
        Ok(PiecewiseCubic { knots, coeffs, step: None })
    }

    /// Knots `start + j * step`, `j = 0..values.len()`.
    pub fn uniform(start: f64, step: f64, values: &[Complex64]) -> Result<PiecewiseCubic> {
        if !(step > 0.0) {
            return Err(Error::invalid("uniform step must be positive"));
        }
        let knots = (0..values.len()).map(|j| start + j as f64 * step).collect();
        let mut p = PiecewiseCubic::new(knots, values)?;
        p.step = Some(step);
        Ok(p)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    fn interval(&self, s: f64) -> Option<usize> {
        if !(s >= self.start() && s <= self.end()) {
            return None;
        }
        let last = self.coeffs.len() - 1;
        let j = match self.step {
            Some(h) => (((s - self.start()) / h).floor() as usize).min(last),
            None => self.knots.partition_point(|&x| x <= s).saturating_sub(1).min(last),
        };
        // Guard against rounding in the uniform index.
        let j = if s < self.knots[j] { j.saturating_sub(1) } else { j };
        Some(if j < last && s >= self.knots[j + 1] { j + 1 } else { j })
    }

    pub fn value(&self, s: f64) -> Complex64 {
        match self.interval(s) {
            Some(j) => {
                let u = s - self.knots[j];
                let c = &self.coeffs[j];
                ((c[3] * u + c[2]) * u + c[1]) * u + c[0]
            }
            None => ZERO,
        }
    }

    pub fn derivative(&self, s: f64) -> Complex64 {
        match self.interval(s) {
            Some(j) => {
                let u = s - self.knots[j];
                let c = &self.coeffs[j];
                (c[3] * (3.0 * u) + c[2] * 2.0) * u + c[1]
            }
            None => ZERO,
        }
    }

    /// `∫_a^b e^{ωs} p(s) ds`, with `p` zero outside the knot range.
    pub fn exp_integral(&self, omega: Complex64, a: f64, b: f64) -> Complex64 {
        let lo = a.max(self.start());
        let hi = b.min(self.end());
        if !(hi > lo) {
            return ZERO;
        }
        let first = self.interval(lo).unwrap_or(0);
        let last = self.interval(hi).unwrap_or(self.coeffs.len() - 1);
        if let Some(h) = self.step {
            return self.exp_integral_uniform(omega, lo, hi, first, last, h);
        }
        let mut total = ZERO;
        for j in first..=last {
            let s0 = self.knots[j].max(lo);
            let s1 = self.knots[j + 1].min(hi);
            if s1 > s0 {
                total += self.piece(j, omega, s0, s1);
            }
        }
        total
    }

    /// Integral over the part `[s0, s1]` of interval `j`.
    fn piece(&self, j: usize, omega: Complex64, s0: f64, s1: f64) -> Complex64 {
        let c = shift(&self.coeffs[j], s0 - self.knots[j]);
        let m = exp_moments(omega, s1 - s0);
        (omega * s0).exp() * (c[0] * m[0] + c[1] * m[1] + c[2] * m[2] + c[3] * m[3])
    }

    fn exp_integral_uniform(&self, omega: Complex64, lo: f64, hi: f64, first: usize, last: usize, h: f64) -> Complex64 {
        let mut total = ZERO;
        // Partial end intervals.
        let mut full_lo = first;
        if lo > self.knots[first] {
            let s1 = self.knots[first + 1].min(hi);
            total += self.piece(first, omega, lo, s1);
            full_lo = first + 1;
        }
        let mut full_hi = last + 1;
        if hi < self.knots[last + 1] && last >= full_lo {
            total += self.piece(last, omega, self.knots[last], hi);
            full_hi = last;
        }
        if full_hi <= full_lo {
            return total;
        }
        let m = exp_moments(omega, h);
        let step = (omega * h).exp();
        let mut acc = [ZERO; 4];
        let mut e = (omega * self.knots[full_lo]).exp();
        for (n, j) in (full_lo..full_hi).enumerate() {
            if n > 0 && n % 64 == 0 {
                e = (omega * self.knots[j]).exp();
            }
            let c = &self.coeffs[j];
            for d in 0..4 {
                acc[d] += e * c[d];
            }
            e *= step;
        }
        total + acc[0] * m[0] + acc[1] * m[1] + acc[2] * m[2] + acc[3] * m[3]
    }
}

/// Power-basis coefficients about `origin` of the Lagrange polynomial
/// through `(xs, ys)` (at most four points).
fn local_poly(xs: &[f64], ys: &[Complex64], origin: f64) -> [Complex64; 4] {
    let mut out = [ZERO; 4];
    for (i, &yi) in ys.iter().enumerate() {
        // Basis polynomial in u = x - origin.
        let mut basis = [1.0, 0.0, 0.0, 0.0];
        let mut denom = 1.0;
        let mut deg = 0;
        for (m, &xm) in xs.iter().enumerate() {
            if m == i {
                continue;
            }
            let root = xm - origin;
            // multiply by (u - root)
            for d in (0..=deg).rev() {
                basis[d + 1] += basis[d];
                basis[d] *= -root;
            }
            deg += 1;
            denom *= xs[i] - xm;
        }
        for d in 0..4 {
            out[d] += yi * (basis[d] / denom);
        }
    }
    out
}

/// Coefficients of `p(u + d)` in powers of `u`.
fn shift(c: &[Complex64; 4], d: f64) -> [Complex64; 4] {
    if d == 0.0 {
        return *c;
    }
    [
        c[0] + d * (c[1] + d * (c[2] + d * c[3])),
        c[1] + d * (2.0 * c[2] + 3.0 * d * c[3]),
        c[2] + 3.0 * d * c[3],
        c[3],
    ]
}

/// `I_n = ∫_0^h e^{ωu} u^n du` for `n = 0..3`.
pub fn exp_moments(omega: Complex64, h: f64) -> [Complex64; 4] {
    let z = omega * h;
    let mut out = [ZERO; 4];
    if z.norm() < 1.0 {
        // I_n = h^{n+1} Σ_j z^j / (j! (n+j+1))
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..30 {
            for (n, o) in out.iter_mut().enumerate() {
                *o += term / (n + j + 1) as f64;
            }
            term *= z / (j + 1) as f64;
            if term.norm() < 1e-18 {
                break;
            }
        }
        let mut hp = h;
        for o in out.iter_mut() {
            *o *= hp;
            hp *= h;
        }
    } else {
        let ez = z.exp();
        out[0] = (ez - 1.0) / omega;
        let mut hp = 1.0;
        for n in 1..4 {
            hp *= h;
            out[n] = (ez * hp - out[n - 1] * n as f64) / omega;
        }
    }
    out
}

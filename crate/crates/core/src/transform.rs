//! Spatial transforms over a region and time transforms of traces.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Geometry, Region};
use crate::profile::Profile;

/// `ĥ(k) = ∫ e^{-ikx} f(x) dx` over the region (half-line or interval),
/// memoized per `k`. Safe to share between threads.
#[derive(Debug)]
pub struct SpatialTransform {
    source: Arc<Profile>,
    region: Region,
    bounds: (f64, f64),
    cache: RwLock<HashMap<u64, Complex64>>,
}

impl SpatialTransform {
    pub fn new(source: Arc<Profile>, region: Region, geometry: &Geometry) -> SpatialTransform {
        SpatialTransform { source, region, bounds: geometry.region_bounds(region), cache: RwLock::new(HashMap::new()) }
    }

    pub fn source(&self) -> &Profile {
        &self.source
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn value(&self, k: f64) -> Complex64 {
        if self.source.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // +0.0 and -0.0 give the same transform
        let key = if k == 0.0 { 0 } else { k.to_bits() };
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return *v;
        }
        let v = self.source.fourier(k, self.bounds.0, self.bounds.1);
        self.cache.write().expect("cache lock").insert(key, v);
        v
    }

    /// `ĥ(-k)`.
    pub fn reflected(&self, k: f64) -> Complex64 {
        self.value(-k)
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

pub fn spatial_transform(profile: &Profile, region: Region, geometry: &Geometry, k: f64) -> Complex64 {
    let (a, b) = geometry.region_bounds(region);
    profile.fourier(k, a, b)
}

pub fn reflected_transform(transform: &SpatialTransform, k: f64) -> Complex64 {
    transform.reflected(k)
}

/// `∫_0^t e^{Ωs} f(s) ds`.
pub fn time_transform(trace: &Profile, omega: Complex64, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time transform needs t >= 0, got {t}")));
    }
    trace.exp_integral(omega, 0.0, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memo_hits_and_zero() {
        let g = Geometry::half_lines(1.0).unwrap();
        let st = SpatialTransform::new(Arc::new(Profile::gaussian(-2.0, 0.5)), Region::Left, &g);
        let a = st.value(3.0);
        assert_eq!(st.value(3.0), a);
        assert_eq!(st.cached_len(), 1);
        assert_eq!(st.value(0.0), st.value(-0.0));
        let z = SpatialTransform::new(Arc::new(Profile::Zero), Region::Right, &g);
        assert_eq!(z.value(1.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn constant_trace() {
        let one = Profile::sampled(vec![0.0, 1.0, 2.0, 3.0], &[Complex64::new(1.0, 0.0); 4]).unwrap();
        let w = Complex64::new(0.0, 1.0);
        let t = 2.5;
        let exact = ((w * t).exp() - 1.0) / w;
        assert!((time_transform(&one, w, t).unwrap() - exact).norm() < 1e-14);
        assert_eq!(time_transform(&Profile::Zero, w, t).unwrap(), Complex64::new(0.0, 0.0));
        assert!(time_transform(&one, w, -1.0).is_err());
    }
}

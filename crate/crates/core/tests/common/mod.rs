#![allow(dead_code)]

use std::path::PathBuf;

use dirac_utm::{Complex64, Profile, Scenario, ScenarioConfig};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.cfg"))
}

pub fn load(name: &str) -> (ScenarioConfig, Scenario) {
    let cfg = ScenarioConfig::load(&scenario_path(name)).expect("shipped config parses");
    let scenario = cfg.scenario().expect("shipped config builds");
    (cfg, scenario)
}

pub fn gauss(center: f64, width: f64, amplitude: f64) -> Profile {
    Profile::gaussian_window(center, width, 6.0 * width, Complex64::new(amplitude, 0.0)).unwrap()
}

/// Composite Simpson on `[a, b]` with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + h * i as f64) * w;
    }
    acc * (h / 3.0)
}

/// Composite trapezoid on `[a, b]` with `n` intervals.
pub fn trapezoid<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut acc = (f(a) + f(b)) * 0.5;
    for i in 1..n {
        acc += f(a + h * i as f64);
    }
    acc * h
}

/// `∫_a^b e^{-ikx} f(x) dx` by brute force, splitting at `breaks` so that
/// kinks and window edges fall on panel ends.
pub fn brute_fourier(p: &Profile, k: f64, a: f64, b: f64, breaks: &[f64], n_per_unit: usize) -> Complex64 {
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let n = (((w[1] - w[0]) * n_per_unit as f64).ceil() as usize).max(2);
        let n = n + n % 2;
        total += simpson(|x| Complex64::new(0.0, -k * x).exp() * p.value(x), w[0], w[1], n);
    }
    total
}

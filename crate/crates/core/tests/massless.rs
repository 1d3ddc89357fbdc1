mod common;

use dirac_utm::reference::solve_reference;
use dirac_utm::*;
use proptest::prelude::*;

use common::gauss;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn zero_pair() -> [Profile; 2] {
    [Profile::Zero, Profile::Zero]
}

#[test]
fn interface_example_matches_the_mesh() {
    let data = Profile::gaussian_window(3.0, 0.4, 2.4, c(1.0, 0.0)).unwrap();
    let s = Scenario::half_lines(1.0, [0.0, 0.0], [zero_pair(), [Profile::Zero, data.clone()]]).unwrap();
    let at = |x: f64, t: f64| eval_massless(&s, QueryPoint::new(x, t, Region::Left), Component::Psi2).unwrap();
    let v = at(-0.5, 1.0);
    assert_eq!(v, at(0.0, 0.5));
    assert_eq!(v, data.value(0.5));
    let r = solve_reference(&s, 1.0 / 256.0, &[1.0]).unwrap();
    assert!((r.value(Region::Left, Component::Psi2, -0.5, 1.0).unwrap() - v).norm() <= 1e-12);
}

#[test]
fn left_moving_component_keeps_its_sign() {
    // before the interface is reached, Psi2 in the left region is its own
    // initial profile transported, with a plus sign
    let data = gauss(-1.5, 0.3, 1.0);
    let s = Scenario::half_lines(1.0, [0.0, 0.0], [[Profile::Zero, data.clone()], zero_pair()]).unwrap();
    let r = solve_reference(&s, 1.0 / 256.0, &[0.5]).unwrap();
    let q = QueryPoint::new(-2.0, 0.5, Region::Left);
    let exact = eval_massless(&s, q, Component::Psi2).unwrap();
    assert_eq!(exact, data.value(-1.5));
    assert!(exact.re > 0.5);
    assert!((r.value(Region::Left, Component::Psi2, -2.0, 0.5).unwrap() - exact).norm() <= 1e-12);
}

#[test]
fn zero_data_gives_zero_everywhere() {
    let half = Scenario::half_lines(2.0, [0.0, 0.0], Default::default()).unwrap();
    let finite = Scenario::finite(1.0, 3.0, [0.0, 0.0], Default::default(), BoundaryData::zero()).unwrap();
    for s in [&half, &finite] {
        for i in 0..=40 {
            let t = s.horizon() * i as f64 / 40.0;
            for (x, region) in [(-0.9, Region::Left), (0.0, Region::Left), (0.0, Region::Right), (0.7, Region::Right)] {
                for comp in Component::BOTH {
                    assert_eq!(eval_massless(s, QueryPoint::new(x, t, region), comp).unwrap(), c(0.0, 0.0));
                }
            }
        }
    }
}

#[test]
fn rejects_bad_queries() {
    let s = Scenario::finite(1.0, 2.0, [0.0, 0.0], Default::default(), BoundaryData::zero()).unwrap();
    assert!(matches!(eval_massless(&s, QueryPoint::new(-0.5, 2.5, Region::Left), Component::Psi1), Err(Error::TimeBeyondHorizon { .. })));
    assert!(matches!(eval_massless(&s, QueryPoint::new(-1.5, 1.0, Region::Left), Component::Psi1), Err(Error::OutsideDomain { .. })));
    assert!(matches!(eval_massless(&s, QueryPoint::new(0.5, 1.0, Region::Left), Component::Psi1), Err(Error::OutsideDomain { .. })));
    let massive = Scenario::half_lines(1.0, [0.0, 1.0], Default::default()).unwrap();
    assert!(MasslessScenario::new(&massive).is_err());
}

#[test]
fn multiple_boundary_passes_match_the_mesh() {
    // T = 4L: data crosses the interface and reflects off the injected ends
    let b = BoundaryData::inflow(gauss(0.6, 0.1, 1.0), gauss(1.7, 0.15, -0.5));
    let s = Scenario::finite(0.5, 2.0, [0.0, 0.0], [[gauss(-0.25, 0.06, 1.0), Profile::Zero], [Profile::Zero, gauss(0.2, 0.05, 0.3)]], b).unwrap();
    let r = solve_reference(&s, 1.0 / 512.0, &[0.75, 1.3125, 2.0]).unwrap();
    for &t in &[0.75, 1.3125, 2.0] {
        for i in 0..=64 {
            let x = -0.5 + i as f64 / 64.0;
            let region = if x <= 0.0 { Region::Left } else { Region::Right };
            for comp in Component::BOTH {
                let e = eval_massless(&s, QueryPoint::new(x, t, region), comp).unwrap() - r.value(region, comp, x, t).unwrap();
                assert!(e.norm() <= 1e-12);
            }
        }
    }
}

/// Window inside `[lo, hi]`.
fn window_in(lo: f64, hi: f64) -> impl Strategy<Value = Profile> {
    (0.0f64..1.0, 0.03f64..0.15, -1.0f64..1.0, -1.0f64..1.0).prop_map(move |(u, width, re, im)| {
        let radius = (4.0 * width).min((hi - lo) / 2.0 * 0.99);
        let center = lo + radius + u * (hi - lo - 2.0 * radius);
        Profile::gaussian_window(center, width, radius, c(re, im)).unwrap()
    })
}

proptest! {
    #[test]
    fn interface_values_agree_exactly(
        a in window_in(-2.0, 0.0), b in window_in(-2.0, 0.0), cc in window_in(0.0, 2.0), d in window_in(0.0, 2.0),
        t in 0.0f64..3.0,
    ) {
        let s = Scenario::half_lines(3.0, [0.0, 0.0], [[a.clone(), b.clone()], [cc.clone(), d.clone()]]).unwrap();
        let bd = BoundaryData::inflow(gauss(1.0, 0.2, 0.7), gauss(1.5, 0.2, -0.2));
        let f = Scenario::finite(2.0, 3.0, [0.0, 0.0], [[a, b], [cc, d]], bd).unwrap();
        for s in [&s, &f] {
            for comp in Component::BOTH {
                let l = eval_massless(s, QueryPoint::new(0.0, t, Region::Left), comp).unwrap();
                let r = eval_massless(s, QueryPoint::new(0.0, t, Region::Right), comp).unwrap();
                prop_assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn signals_travel_at_unit_speed(
        center in -6.0f64..6.0, width in 0.05f64..0.3, comp_index in 1usize..=2, in_left in any::<bool>(),
        x in -5.0f64..5.0, t in 0.0f64..4.0,
    ) {
        let region = if in_left { Region::Left } else { Region::Right };
        // push the window inside its region
        let center = if in_left { -center.abs() - 2.0 * width } else { center.abs() + 2.0 * width };
        let p = Profile::gaussian_window(center, width, 2.0 * width, c(1.0, 0.0)).unwrap();
        let mut initial: [[Profile; 2]; 2] = Default::default();
        initial[region.index() - 1][comp_index - 1] = p;
        let s = Scenario::half_lines(4.0, [0.0, 0.0], initial).unwrap();
        let d = ((x - center).abs() - 2.0 * width).max(0.0);
        prop_assume!(t < d);
        let qr = if x <= 0.0 { Region::Left } else { Region::Right };
        for comp in Component::BOTH {
            prop_assert_eq!(eval_massless(&s, QueryPoint::new(x, t, qr), comp).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn short_times_on_intervals_reduce_to_half_lines(
        a in window_in(-2.0, 0.0), b in window_in(-2.0, 0.0), cc in window_in(0.0, 2.0), d in window_in(0.0, 2.0),
        u in 0.0f64..1.0, t in 0.0f64..1.9, left in any::<bool>(), comp_index in 1usize..=2,
    ) {
        let initial = [[a, b], [cc, d]];
        let half = Scenario::half_lines(1.9, [0.0, 0.0], initial.clone()).unwrap();
        let finite = Scenario::finite(2.0, 1.9, [0.0, 0.0], initial, BoundaryData::zero()).unwrap();
        let (region, x) = if left { (Region::Left, -2.0 * u) } else { (Region::Right, 2.0 * u) };
        let comp = Component::from_index(comp_index).unwrap();
        let q = QueryPoint::new(x, t, region);
        prop_assert_eq!(eval_massless(&half, q, comp).unwrap(), eval_massless(&finite, q, comp).unwrap());
    }
}

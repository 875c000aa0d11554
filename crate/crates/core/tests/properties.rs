//! Property suites for the moment map, the cycles and the character densities.

mod support;

use charloc::characters::{
    cycle_pairing, fixed_point_pairing, kirillov_pairing_su2, CycleQuadrature, FixedPointOptions,
    Monomial, MultiplicityRule, TestFunction,
};
use charloc::cycles::{discrete_cycle, principal_cycle, Hemisphere};
use charloc::{Chart, Sl2Element, Weight};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chart() -> impl Strategy<Value = Chart> {
    prop_oneof![Just(Chart::Z), Just(Chart::W)]
}

fn coord(bound: f64) -> impl Strategy<Value = (f64, f64)> {
    (-bound..bound, -bound..bound)
}

fn element() -> impl Strategy<Value = Sl2Element> {
    (-2.0..2.0, -2.0..2.0, -2.0..2.0).prop_map(|(a, b, c)| Sl2Element::new(a, b, c))
}

/// Regular semisimple elements kept away from the nilpotent cone.
fn regular() -> impl Strategy<Value = Sl2Element> {
    element().prop_filter("near the nilpotent cone", |g| g.discriminant().abs() > 0.05)
}

fn weight() -> impl Strategy<Value = Weight> {
    (-1.5..1.5f64, 0.2..1.5f64).prop_map(|(re, im)| Weight::new(charloc::Complex64::new(re, im)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn moment_values_are_nilpotent(c in chart(), z in coord(3.0), xi in coord(5.0)) {
        prop_assert!(support::nilpotency(&support::point(c, z, xi)) <= 1e-10);
    }

    #[test]
    fn chart_transition_is_consistent(c in chart(), z in coord(3.0), xi in coord(5.0)) {
        prop_assume!(z.0.hypot(z.1) > 1e-3);
        let (trip, drift) = support::chart_transition(&support::point(c, z, xi));
        prop_assert!(trip <= 1e-12, "round trip {trip}");
        prop_assert!(drift <= 1e-10, "moment drift {drift}");
    }

    #[test]
    fn moment_is_rotation_equivariant(c in chart(), z in coord(2.0), xi in coord(3.0), angle in -3.2..3.2f64) {
        prop_assert!(support::moment_equivariance(&support::point(c, z, xi), angle) <= 1e-10);
    }

    #[test]
    fn spectral_data_is_rotation_equivariant(g in regular(), angle in -3.2..3.2f64) {
        let (points, alpha) = support::spectral_equivariance(&g, angle);
        prop_assert!(points <= 1e-10, "fixed points moved by {points}");
        prop_assert!(alpha <= 1e-10, "alpha changed by {alpha}");
        prop_assert!(support::classify_invariant(&g, angle));
    }

    #[test]
    fn density_is_ad_invariant(g in regular(), angle in -3.2..3.2f64, lam in weight()) {
        for m in [MultiplicityRule::uniform(1), MultiplicityRule::hyperbolic(1, 0)] {
            prop_assert!(support::density_invariance(&g, angle, &lam, &m) <= 1e-8);
        }
    }

    #[test]
    fn conormal_points_have_imaginary_moment(seed in any::<u64>(), g in element()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for cycle in [principal_cycle(), discrete_cycle(Hemisphere::West)] {
            for (idx, p) in cycle.sample_points(64, 20.0, &mut rng) {
                if cycle.patches[idx].tag.contains("conormal") {
                    prop_assert!(support::conormal_real_part(&g, &p) <= 1e-10);
                }
            }
        }
    }
}

fn perturbation() -> Vec<Monomial> {
    vec![
        Monomial { powers: [0, 0, 0], coeff: 0.5 },
        Monomial { powers: [1, 0, 2], coeff: -1.5 },
        Monomial { powers: [0, 1, 0], coeff: 0.75 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn fixed_point_pairing_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let x = TestFunction::bump([1.2, 0.5, -0.3], 0.5);
        let y = x.clone().with_polynomial(perturbation());
        let combined = x.scaled(a).plus(&y.scaled(b)).unwrap();
        let lam = Weight::imaginary(1.0);
        let m = MultiplicityRule::uniform(1);
        let opts = FixedPointOptions { cone_depth: 2, ..FixedPointOptions::default() };
        let l = |phi: &TestFunction| fixed_point_pairing(&lam, &m, phi, &opts).value;
        prop_assert!(support::linearity_defect(l(&combined), l(&x), l(&y), a, b) <= 1e-10);
    }

    #[test]
    fn kirillov_pairing_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, n in 0u32..4) {
        let x = TestFunction::bump([0.2, -0.1, 0.3], 0.6);
        let y = x.clone().with_polynomial(perturbation());
        let combined = x.scaled(a).plus(&y.scaled(b)).unwrap();
        let l = |phi: &TestFunction| kirillov_pairing_su2(n, phi);
        prop_assert!(support::linearity_defect(l(&combined), l(&x), l(&y), a, b) <= 1e-10);
    }
}

#[test]
fn cycle_pairing_is_linear() {
    let x = TestFunction::bump([1.2, 0.5, -0.3], 0.5);
    let y = x.clone().with_polynomial(perturbation());
    let (a, b) = (0.7, -1.3);
    let combined = x.scaled(a).plus(&y.scaled(b)).unwrap();
    let lam = Weight::imaginary(1.0);
    let opts = CycleQuadrature { degree: 8, ..CycleQuadrature::default() };
    let l = |phi: &TestFunction| cycle_pairing(&principal_cycle(), &lam, phi, 4.0, &opts).unwrap().value;
    let defect = support::linearity_defect(l(&combined), l(&x), l(&y), a, b);
    assert!(defect <= 1e-10, "{defect}");
}

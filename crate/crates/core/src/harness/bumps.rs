//! Seeded bumps with supports inside a chosen region of `sl(2,R)` or `su(2)`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{Region, TestFunctionSpec};
use crate::characters::TestFunction;

const MARGIN: f64 = 0.05;
const RADIUS_RANGE: (f64, f64) = (0.3, 0.8);

/// Lower bound of `a^2 + bc` over the ball `|x - c| <= r`.
///
/// The discriminant is the quadratic form with eigenvalues `1, 1/2, -1/2`, so
/// `d(c + y) >= d(c) - |grad d(c)| r - r^2 / 2`.
pub fn discriminant_lower_bound(center: [f64; 3], radius: f64) -> f64 {
    let [a, b, c] = center;
    let grad = (4.0 * a * a + b * b + c * c).sqrt();
    a * a + b * c - grad * radius - 0.5 * radius * radius
}

/// Upper bound of `a^2 + bc` over the ball `|x - c| <= r`.
pub fn discriminant_upper_bound(center: [f64; 3], radius: f64) -> f64 {
    let [a, b, c] = center;
    let grad = (4.0 * a * a + b * b + c * c).sqrt();
    a * a + b * c + grad * radius + radius * radius
}

fn point_in_ball(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 3] {
    loop {
        let p: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return p.map(|x| x * radius);
        }
    }
}

/// One bump in `region`, redrawing until the support check passes.
pub fn seeded_bump(rng: &mut ChaCha8Rng, region: Region) -> TestFunction {
    loop {
        let radius = rng.gen_range(RADIUS_RANGE.0..RADIUS_RANGE.1);
        let (ball, ok): (f64, fn([f64; 3], f64) -> bool) = match region {
            Region::Hyperbolic => (3.0, |c, r| discriminant_lower_bound(c, r) > MARGIN),
            Region::Elliptic => (3.0, |c, r| discriminant_upper_bound(c, r) < -MARGIN),
            Region::Su2 => (1.5, |_, _| true),
        };
        let center = point_in_ball(rng, ball);
        if ok(center, radius) {
            return TestFunction::bump(center, radius);
        }
    }
}

/// Expands the specs in order, drawing seeded bumps from one stream.
pub fn expand(specs: &[TestFunctionSpec], rng: &mut ChaCha8Rng) -> Vec<TestFunction> {
    let mut out = Vec::new();
    for spec in specs {
        match spec {
            TestFunctionSpec::Bump(phi) => out.push(phi.clone()),
            TestFunctionSpec::Seeded { count, region } => {
                out.extend((0..*count).map(|_| seeded_bump(rng, *region)));
            }
        }
    }
    out
}

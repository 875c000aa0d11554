//! Residuals of the geometric and character invariants, shared by the property suite and the
//! acceptance runner. Each function returns a nonnegative residual for one sample.

#![allow(dead_code)]

use charloc::characters::{fixed_point_density, MultiplicityRule};
use charloc::lie::rotation;
use charloc::{classify, moment, spectral_data, Chart, Complex64 as C64, CotangentPoint, Sl2Element, Weight};

/// `|det mu(p)|` relative to `|mu(p)|^2`; the trace vanishes by representation.
pub fn nilpotency(p: &CotangentPoint) -> f64 {
    let m = moment(p);
    m.det().norm() / (1.0 + m.norm() * m.norm())
}

/// `|Re <g, mu(p)>|`, which vanishes when `p` lies on the conormal bundle of the real circle.
pub fn conormal_real_part(g: &Sl2Element, p: &CotangentPoint) -> f64 {
    moment(p).eval(g).re.abs()
}

/// Round trip through the other chart, and the change of `mu` when computed there.
/// `p.z` must be nonzero.
pub fn chart_transition(p: &CotangentPoint) -> (f64, f64) {
    let other = p.in_chart(p.chart.other()).expect("z is nonzero");
    let back = other.in_chart(p.chart).expect("w is nonzero");
    let trip = (back.z - p.z).norm() + (back.xi - p.xi).norm();
    let m = moment(p);
    let drift = (moment(&other) - m).norm() / (1.0 + m.norm());
    (trip / (1.0 + p.z.norm() + p.xi.norm()), drift)
}

/// `|mu(k p) - Ad*(k) mu(p)|` for the rotation `k` by `angle`, relative.
pub fn moment_equivariance(p: &CotangentPoint, angle: f64) -> f64 {
    let u = rotation(angle);
    let lhs = moment(&p.act(&u));
    let rhs = moment(p).coadjoint(&u);
    (lhs - rhs).norm() / (1.0 + rhs.norm())
}

/// Fixed points of `Ad(k) g` against the `k`-images of those of `g`, and the change of the
/// alpha multiset. `g` must be regular semisimple.
pub fn spectral_equivariance(g: &Sl2Element, angle: f64) -> (f64, f64) {
    let u = rotation(angle);
    let a = spectral_data(g).unwrap();
    let b = spectral_data(&g.rotate(angle)).unwrap();
    let moved = a.fixed_points.map(|x| x.act(&u));
    let point_err = |perm: [usize; 2]| {
        (0..2)
            .map(|k| moved[k].chordal_distance(&b.fixed_points[perm[k]]))
            .fold(0.0, f64::max)
    };
    let alpha_err = |perm: [usize; 2]| {
        (0..2)
            .map(|k| (a.alpha[k] - b.alpha[perm[k]]).norm())
            .fold(0.0, f64::max)
    };
    let scale = 1.0 + a.alpha[0].norm();
    [[0, 1], [1, 0]]
        .into_iter()
        .map(|perm| (point_err(perm), alpha_err(perm) / scale))
        .fold((f64::INFINITY, f64::INFINITY), |acc, v| (acc.0.min(v.0), acc.1.min(v.1)))
}

/// Whether `classify` agrees on `g` and `Ad(k) g`.
pub fn classify_invariant(g: &Sl2Element, angle: f64) -> bool {
    classify(g) == classify(&g.rotate(angle))
}

/// `|F(Ad(k) g) - F(g)|` relative, for the fixed point density `F`.
pub fn density_invariance(g: &Sl2Element, angle: f64, lam: &Weight, m: &MultiplicityRule) -> f64 {
    let f = fixed_point_density(g, lam, m).unwrap();
    let h = fixed_point_density(&g.rotate(angle), lam, m).unwrap();
    (f - h).norm() / f.norm().max(1e-300)
}

/// `|L(a x + b y) - a L(x) - b L(y)|` relative to the largest term.
pub fn linearity_defect(combined: C64, x: C64, y: C64, a: f64, b: f64) -> f64 {
    let expected = x * a + y * b;
    let scale = (x * a).norm().max((y * b).norm()).max(combined.norm()).max(1e-300);
    (combined - expected).norm() / scale
}

/// A point over chart `chart` with the given coordinates.
pub fn point(chart: Chart, z: (f64, f64), xi: (f64, f64)) -> CotangentPoint {
    CotangentPoint::new(chart, C64::new(z.0, z.1), C64::new(xi.0, xi.1))
}

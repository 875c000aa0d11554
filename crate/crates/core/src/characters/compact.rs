//! The compact case: Weyl and Kirillov formulas for SU(2), and the
//! Duistermaat–Heckman localization check on the round sphere.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::test_function::{fourier_table, TestFunction};
use crate::flag::kks_eval;
use crate::lie::CovectorValue;
use crate::quadrature::{uniform_edges, GaussRule};

/// `dbeta = (KKS form) / KIRILLOV_MEASURE_NORMALIZATION` on coadjoint orbits.
pub const KIRILLOV_MEASURE_NORMALIZATION: f64 = 2.0 * PI;

/// `theta_pi` on the Cartan element with root value `2 i theta`: `sin((n+1) theta) / theta`,
/// equal to `n + 1` at `theta = 0`.
pub fn weyl_character_su2(n: u32, theta: f64) -> f64 {
    let k = f64::from(n + 1);
    if theta.abs() < 1e-8 {
        k * (1.0 - (k * k - 1.0) * theta * theta / 6.0)
    } else {
        (k * theta).sin() / theta
    }
}

/// Coordinates on su(2): `x |-> [[i x1, x2 + i x3], [-x2 + i x3, -i x1]]`, with
/// eigenvalues `+- i |x|`. A covector with values `zeta_j` on these basis matrices,
/// extended complex-linearly to sl(2,C).
pub fn su2_covector(zeta: [C64; 3]) -> CovectorValue {
    let i = C64::new(0.0, 1.0);
    CovectorValue::new(
        -i * zeta[0],
        (zeta[1] - i * zeta[2]) * 0.5,
        (-zeta[1] - i * zeta[2]) * 0.5,
    )
}

/// `int theta_pi(x) phi(x) dx` in the su(2) coordinates above.
pub fn weyl_side_pairing(n: u32, phi: &TestFunction, degree: usize) -> f64 {
    let rule = GaussRule::new(degree);
    let axes: Vec<Vec<(f64, f64)>> = (0..3)
        .map(|a| {
            let (lo, hi) = phi.axis_range(a);
            rule.on(lo, hi).collect()
        })
        .collect();
    let mut total = 0.0;
    for (x, wx) in &axes[0] {
        for (y, wy) in &axes[1] {
            for (z, wz) in &axes[2] {
                let v = phi.value([*x, *y, *z]);
                if v != 0.0 {
                    let r = (x * x + y * y + z * z).sqrt();
                    total += wx * wy * wz * v * weyl_character_su2(n, r);
                }
            }
        }
    }
    total
}

fn orbit_point(k: f64, theta: f64, phi: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (
        [k * ct, k * st * cp, k * st * sp],
        [-k * st, k * ct * cp, k * ct * sp],
        [0.0, -k * st * sp, k * st * cp],
    )
}

fn imaginary(x: [f64; 3]) -> [C64; 3] {
    x.map(|v| C64::new(0.0, v))
}

/// `int_{Omega} phi_hat dbeta` over the orbit through the covector with value `n + 1` on the
/// Cartan direction; `dbeta = |KKS| / (2 pi)` evaluated pointwise through [`kks_eval`].
pub fn kirillov_pairing_su2(n: u32, phi: &TestFunction) -> C64 {
    kirillov_pairing_with(n, phi, super::test_function::FOURIER_DEGREE)
}

pub fn kirillov_pairing_with(n: u32, phi: &TestFunction, fourier_degree: usize) -> C64 {
    let k = f64::from(n + 1);
    let table = fourier_table(phi, fourier_degree);
    let rule = GaussRule::new(16);
    // the integrand oscillates at most like e^{i k |x| theta}
    let rate = k * phi.max_norm() + 1.0;
    let theta_panels = ((rate * PI / 6.0).ceil() as usize).max(2);
    let phi_panels = 2 * theta_panels;
    let thetas = rule.composite(&uniform_edges(0.0, PI, theta_panels));
    let phis = rule.composite(&uniform_edges(0.0, 2.0 * PI, phi_panels));
    let mut total = C64::new(0.0, 0.0);
    for (theta, wt) in &thetas {
        for (ph, wp) in &phis {
            let (x, dt, dp) = orbit_point(k, *theta, *ph);
            let zeta = imaginary(x);
            let area = orbit_area_element(zeta, imaginary(dt), imaginary(dp));
            total += table.transform(zeta) * (area * wt * wp);
        }
    }
    total
}

/// `|KKS| / (2 pi)` on a pair of tangent vectors at a point of an su(2) orbit.
pub fn orbit_area_element(zeta: [C64; 3], d1: [C64; 3], d2: [C64; 3]) -> f64 {
    let z = su2_covector(zeta);
    let w1 = su2_covector(d1);
    let w2 = su2_covector(d2);
    match kks_eval(&z, &w1, &w2) {
        Ok(s) => s.norm() / KIRILLOV_MEASURE_NORMALIZATION,
        Err(_) => 0.0,
    }
}

/// Total `dbeta`-mass of the orbit of `n`; expected `n + 1`.
pub fn orbit_mass_su2(n: u32) -> f64 {
    let k = f64::from(n + 1);
    let rule = GaussRule::new(16);
    let thetas = rule.composite(&uniform_edges(0.0, PI, 4));
    let phis = rule.composite(&uniform_edges(0.0, 2.0 * PI, 4));
    let mut total = 0.0;
    for (theta, wt) in &thetas {
        for (ph, wp) in &phis {
            let (x, dt, dp) = orbit_point(k, *theta, *ph);
            total += orbit_area_element(imaginary(x), imaginary(dt), imaginary(dp)) * wt * wp;
        }
    }
    total
}

/// Rotation of the unit sphere about the vertical axis with angular speed `speed`, and the
/// equivariantly closed form `e^{speed * h z} (area + moment)` with height function `h z`.
///
/// Returns `(int_{S^2} e^{speed * h z} dA, fixed point sum)`; the fixed point sum is
/// `2 pi e^{speed * h} / (speed * h) - 2 pi e^{-speed * h} / (speed * h)`, the sign at each
/// pole being the orientation of the linearized rotation there.
pub fn dh_localization_check(speed: f64, height_scale: f64) -> (C64, C64) {
    let s = speed * height_scale;
    let rule = GaussRule::new(24);
    let panels = ((s.abs() * PI / 4.0).ceil() as usize).max(2);
    let mut surface = 0.0;
    for (theta, w) in rule.composite(&uniform_edges(0.0, PI, panels)) {
        surface += w * theta.sin() * (s * theta.cos()).exp();
    }
    surface *= 2.0 * PI;
    let mut fixed = 0.0;
    for (height, sign) in [(1.0, 1.0), (-1.0, -1.0)] {
        fixed += 2.0 * PI * (s * height).exp() / (sign * s);
    }
    (C64::new(surface, 0.0), C64::new(fixed, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_examples() {
        for n in 0..5 {
            assert!((weyl_character_su2(n, 0.0) - f64::from(n + 1)).abs() < 1e-15);
            assert!((weyl_character_su2(n, 1e-9) - f64::from(n + 1)).abs() < 1e-12);
        }
        assert!(weyl_character_su2(1, PI / 2.0).abs() < 1e-15);
        for t in [0.3, 1.0, 2.5] {
            assert!((weyl_character_su2(0, t) - t.sin() / t).abs() < 1e-15);
        }
    }

    #[test]
    fn su2_covector_is_complex_linear_extension() {
        let zeta = [C64::new(0.3, 1.0), C64::new(-0.2, 0.5), C64::new(1.1, -0.4)];
        let cov = su2_covector(zeta);
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        // basis matrices of su(2) in (H, E, F) coordinates
        let basis = [[i, zero, zero], [zero, one, -one], [zero, i, i]];
        for (j, b) in basis.iter().enumerate() {
            assert!((cov.eval_complex(b) - zeta[j]).norm() < 1e-15);
        }
    }

    #[test]
    fn orbit_mass_is_dimension() {
        for n in 0..5 {
            let m = orbit_mass_su2(n);
            assert!((m - f64::from(n + 1)).abs() < 1e-10, "n={n}: {m}");
        }
    }

    #[test]
    fn kirillov_matches_weyl_on_a_bump() {
        let phi = TestFunction::bump([0.4, -0.3, 0.9], 0.6);
        for n in [0, 2] {
            let k = kirillov_pairing_su2(n, &phi);
            let w = weyl_side_pairing(n, &phi, 24);
            assert!((k.re - w).abs() < 1e-8 * w.abs(), "n={n}: {k} {w}");
            assert!(k.im.abs() < 1e-8 * w.abs());
        }
    }

    #[test]
    fn dh_examples() {
        for s in [0.5, 1.0, 2.0, -1.5] {
            let (surface, fixed) = dh_localization_check(s, 1.0);
            let closed = 2.0 * PI * (s.exp() - (-s).exp()) / s;
            assert!((surface.re - closed).abs() < 1e-12 * closed.abs());
            assert!((fixed.re - closed).abs() < 1e-12 * closed.abs());
        }
        let (surface, fixed) = dh_localization_check(1e-4, 1.0);
        assert!((surface.re - 4.0 * PI).abs() < 1e-6);
        assert!((fixed.re - 4.0 * PI).abs() < 1e-6);
    }
}

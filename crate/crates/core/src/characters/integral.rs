//! The integral side: `(1/2 pi i) int_{Ch} phi_hat(mu_lambda) mu_lambda^* sigma_lambda` over a
//! parametrized cycle, its deformed variant, and the Gaussian fiber integral.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{PairingReport, ShellContribution};
use super::test_function::{fourier_table, TestFunction, FOURIER_DEGREE};
use crate::cycles::{
    fiber_cycle, theta_map_with, AdaptedAtlas, CyclePatch, DeformationMap, ParamBox,
    ParametrizedCycle,
};
use crate::error::{Error, Result};
use crate::flag::{kks_unchecked, twisted_moment, CotangentPoint, Weight};
use crate::lie::{spectral_data, CovectorValue, Sl2Element};
use crate::quadrature::{dyadic_shells, uniform_edges, GaussRule};

/// Knobs of the cycle quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleQuadrature {
    /// Gauss degree per parameter on each panel.
    pub degree: usize,
    /// Largest phase change of the integrand allowed across one panel, in radians.
    pub phase_per_panel: f64,
    /// Gauss degree per axis of the Fourier transform.
    pub fourier_degree: usize,
}

impl Default for CycleQuadrature {
    fn default() -> Self {
        CycleQuadrature {
            degree: 16,
            phase_per_panel: 8.0,
            fourier_degree: FOURIER_DEGREE,
        }
    }
}

/// Knobs of [`deformed_cycle_pairing`]: the inner cycle rule and a spherical product rule over
/// the support ball of the test function (composite Gauss in the radius, Gauss in the cosine
/// of the polar angle, midpoint in the azimuth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformedQuadrature {
    pub inner: CycleQuadrature,
    pub radial_degree: usize,
    pub polar_degree: usize,
    pub azimuth_count: usize,
}

impl Default for DeformedQuadrature {
    fn default() -> Self {
        DeformedQuadrature {
            inner: CycleQuadrature {
                degree: 12,
                phase_per_panel: 12.0,
                fourier_degree: FOURIER_DEGREE,
            },
            radial_degree: 4,
            polar_degree: 4,
            azimuth_count: 8,
        }
    }
}

/// Radial panels in units of the bump radius; the profile flattens toward the rim.
const RADIAL_EDGES: [f64; 4] = [0.0, 0.6, 0.85, 1.0];

/// Nodes `(g, phi(g) * weight)` of the spherical product rule on the support of `phi`.
pub fn ball_nodes(phi: &TestFunction, opts: &DeformedQuadrature) -> Vec<([f64; 3], f64)> {
    let radial = GaussRule::new(opts.radial_degree).composite(&RADIAL_EDGES);
    let polar: Vec<(f64, f64)> = GaussRule::new(opts.polar_degree).on(-1.0, 1.0).collect();
    let n = opts.azimuth_count.max(1);
    let r = phi.radius;
    let c = phi.center;
    let mut out = Vec::with_capacity(radial.len() * polar.len() * n);
    for &(rho, wr) in &radial {
        for &(ct, wt) in &polar {
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..n {
                let az = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                let x = [
                    c[0] + r * rho * st * az.cos(),
                    c[1] + r * rho * st * az.sin(),
                    c[2] + r * rho * ct,
                ];
                let w = wr * wt * (2.0 * PI / n as f64) * r.powi(3) * rho * rho;
                out.push((x, phi.value(x) * w));
            }
        }
    }
    out
}

/// Below this real part the factor `e^{<g, zeta>}` is dropped (`e^{-40} ~ 4e-18`).
const NEGLIGIBLE_EXPONENT: f64 = -40.0;

#[derive(Debug, Clone, Copy)]
struct Panel {
    u: (f64, f64),
    v: (f64, f64),
    shell: usize,
}

/// `mu_lambda o map o embed` at `(u, v)` with its two partial derivatives.
fn jet<M: Fn(&CotangentPoint) -> CotangentPoint>(
    patch: &CyclePatch,
    map: &M,
    lam: &Weight,
    u: f64,
    v: f64,
) -> (CovectorValue, CovectorValue, CovectorValue) {
    let hu = 1e-5;
    let hv = 1e-5 * v.abs().max(1.0);
    let f = |u: f64, v: f64| twisted_moment(&map(&patch.embed(u, v)), lam);
    let zeta = f(u, v);
    let du = (f(u + hu, v) - f(u - hu, v)) * (0.5 / hu);
    let dv = (f(u, v + hv) - f(u, v - hv)) * (0.5 / hv);
    (zeta, du, dv)
}

/// Radial ranges of a patch inside each dyadic shell; zero-section patches sit in shell 0.
fn radial_pieces(patch: &CyclePatch, domain: &ParamBox, shells: &[(f64, f64)]) -> Vec<(usize, (f64, f64))> {
    if !patch.shape.is_conic() {
        return vec![(0, (domain.v[0], domain.v[1]))];
    }
    let mut out = Vec::new();
    for (idx, &(inner, outer)) in shells.iter().enumerate() {
        let pos = (domain.v[0].max(inner), domain.v[1].min(outer));
        if pos.1 > pos.0 {
            out.push((idx, pos));
        }
        let neg = (domain.v[0].max(-outer), domain.v[1].min(-inner));
        if neg.1 > neg.0 {
            out.push((idx, neg));
        }
    }
    out
}

/// Radial bands per shell piece; each band gets its own panel counts.
const BANDS_PER_PIECE: usize = 4;

fn plan_patch<M, K, P>(
    patch: &CyclePatch,
    domain: &ParamBox,
    shells: &[(f64, f64)],
    map: &M,
    lam: &Weight,
    kernel: &K,
    rate: &P,
    opts: &CycleQuadrature,
) -> Vec<Panel>
where
    M: Fn(&CotangentPoint) -> CotangentPoint,
    K: Fn(&CovectorValue) -> Option<C64>,
    P: Fn(&CovectorValue) -> f64,
{
    let (u0, u1) = (domain.u[0], domain.u[1]);
    let mut panels = Vec::new();
    for (shell, (p0, p1)) in radial_pieces(patch, domain, shells) {
        let bands = if patch.shape.is_conic() { BANDS_PER_PIECE } else { 1 };
        for band in uniform_edges(p0, p1, bands).windows(2) {
            let (v0, v1) = (band[0], band[1]);
            let mut du_max: f64 = 0.0;
            let mut dv_max: f64 = 0.0;
            let mut live = false;
            for i in 0..=24 {
                let u = u0 + (u1 - u0) * i as f64 / 24.0;
                for v in [v0, 0.5 * (v0 + v1), v1] {
                    let (zeta, du, dv) = jet(patch, map, lam, u, v);
                    // the kernel is a smooth modulus, so a sampled band that is negligible
                    // everywhere is dropped
                    if kernel(&zeta).is_some() {
                        live = true;
                        du_max = du_max.max(rate(&du));
                        dv_max = dv_max.max(rate(&dv));
                    }
                }
            }
            if !live {
                continue;
            }
            let count = |d: f64, len: f64| {
                ((d + 1.0) * len / opts.phase_per_panel).ceil().max(1.0) as usize
            };
            let ue = uniform_edges(u0, u1, count(du_max, u1 - u0));
            let ve = uniform_edges(v0, v1, count(dv_max, v1 - v0));
            for uw in ue.windows(2) {
                for vw in ve.windows(2) {
                    panels.push(Panel {
                        u: (uw[0], uw[1]),
                        v: (vw[0], vw[1]),
                        shell,
                    });
                }
            }
        }
    }
    panels
}

/// `sum_nodes w * kernel(zeta) * sigma(d_u zeta, d_v zeta)` on one panel.
fn integrate_panel<M, K>(
    patch: &CyclePatch,
    panel: &Panel,
    rule: &GaussRule,
    map: &M,
    lam: &Weight,
    kernel: &K,
) -> C64
where
    M: Fn(&CotangentPoint) -> CotangentPoint,
    K: Fn(&CovectorValue) -> Option<C64>,
{
    let mut sum = C64::new(0.0, 0.0);
    for (u, wu) in rule.on(panel.u.0, panel.u.1) {
        for (v, wv) in rule.on(panel.v.0, panel.v.1) {
            let zeta = twisted_moment(&map(&patch.embed(u, v)), lam);
            let Some(k) = kernel(&zeta) else { continue };
            let (zeta, du, dv) = jet(patch, map, lam, u, v);
            if let Ok(area) = kks_unchecked(&zeta, &du, &dv) {
                sum += k * area * (wu * wv);
            }
        }
    }
    sum
}

/// Per-shell integrals `sum_patches weight * int kernel(mu_lambda) mu_lambda^* sigma_lambda`.
fn integrate_cycle<M, K, P>(
    cycle: &ParametrizedCycle,
    shells: &[(f64, f64)],
    map: &M,
    lam: &Weight,
    kernel: &K,
    rate: &P,
    opts: &CycleQuadrature,
    parallel: bool,
) -> (Vec<C64>, usize)
where
    M: Fn(&CotangentPoint) -> CotangentPoint + Sync,
    K: Fn(&CovectorValue) -> Option<C64> + Sync,
    P: Fn(&CovectorValue) -> f64,
{
    let rule = GaussRule::new(opts.degree);
    let mut totals = vec![C64::new(0.0, 0.0); shells.len().max(1)];
    let mut points = 0;
    for patch in &cycle.patches {
        if patch.multiplicity == 0 {
            continue;
        }
        let domain = cycle.effective_domain(patch);
        let panels = plan_patch(patch, &domain, shells, map, lam, kernel, rate, opts);
        points += panels.len() * rule.len() * rule.len();
        let eval = |p: &Panel| integrate_panel(patch, p, &rule, map, lam, kernel);
        let values: Vec<C64> = if parallel {
            panels.par_iter().map(eval).collect()
        } else {
            panels.iter().map(eval).collect()
        };
        for (panel, value) in panels.iter().zip(values) {
            totals[panel.shell] += value * patch.weight();
        }
    }
    (totals, points)
}

fn check_inputs(lam: &Weight, r: f64) -> Result<()> {
    if !lam.is_regular() {
        return Err(Error::SingularWeight);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::config("R", "cutoff must be positive and finite"));
    }
    Ok(())
}

fn report(
    totals: Vec<C64>,
    shells: &[(f64, f64)],
    r: f64,
    degree: usize,
    theta_t: Option<f64>,
    points: usize,
) -> PairingReport {
    let contributions: Vec<ShellContribution> = shells
        .iter()
        .zip(&totals)
        .map(|(&(inner, outer), &value)| ShellContribution { inner, outer, value })
        .collect();
    PairingReport {
        value: totals.iter().sum(),
        quadrature_degree: degree,
        cutoff_r: Some(r),
        theta_t,
        tail_estimate: contributions.last().map_or(0.0, |s| s.value.norm()),
        shells: contributions,
        points,
    }
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

/// `(1/2 pi i) int_{cycle, ||zeta|| <= R} phi_hat(mu_lambda) mu_lambda^* sigma_lambda`.
pub fn cycle_pairing(
    cycle: &ParametrizedCycle,
    lam: &Weight,
    phi: &TestFunction,
    r: f64,
    opts: &CycleQuadrature,
) -> Result<PairingReport> {
    check_inputs(lam, r)?;
    let cut = cycle.with_cutoff(r);
    let shells = dyadic_shells(r);
    let table = fourier_table(phi, opts.fourier_degree);
    let kernel = |zeta: &CovectorValue| Some(table.fourier(zeta));
    let identity = |p: &CotangentPoint| *p;
    let center = Sl2Element::from_array(phi.center);
    let rate = |d: &CovectorValue| d.eval(&center).norm() + phi.radius * d.norm();
    let (totals, points) =
        integrate_cycle(&cut, &shells, &identity, lam, &kernel, &rate, opts, true);
    let totals = totals.into_iter().map(|v| v / two_pi_i()).collect();
    Ok(report(totals, &shells, r, opts.degree, None, points))
}

/// The same pairing with the integrand pulled back through the deformation `Theta_t(g)`:
/// `(1/2 pi i) int phi(g) int_{cycle} e^{<g, mu_lambda(Theta_t(g) p)>} (mu_lambda o Theta_t(g))^* sigma_lambda dg`.
///
/// The outer integral over the support of `phi` uses [`ball_nodes`]; nodes off the regular
/// semisimple set are skipped.
pub fn deformed_cycle_pairing(
    cycle: &ParametrizedCycle,
    lam: &Weight,
    phi: &TestFunction,
    t: f64,
    r: f64,
    opts: &DeformedQuadrature,
) -> Result<PairingReport> {
    check_inputs(lam, r)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::config("t", "deformation parameter must lie in (0, 1]"));
    }
    let cut = cycle.with_cutoff(r);
    let shells = dyadic_shells(r);
    let nodes: Vec<(Sl2Element, f64)> = ball_nodes(phi, opts)
        .into_iter()
        .map(|(x, w)| (Sl2Element::from_array(x), w))
        .filter(|(g, w)| *w != 0.0 && g.is_regular_semisimple())
        .collect();
    let per_node: Vec<Result<(Vec<C64>, usize)>> = nodes
        .par_iter()
        .map(|(g, w)| {
            let deformation = DeformationMap::new(g, t)?;
            let map = |p: &CotangentPoint| deformation.apply(p);
            let kernel = |zeta: &CovectorValue| {
                let e = zeta.eval(g);
                (e.re >= NEGLIGIBLE_EXPONENT).then(|| e.exp())
            };
            let rate = |d: &CovectorValue| d.eval(g).norm();
            let (totals, points) =
                integrate_cycle(&cut, &shells, &map, lam, &kernel, &rate, &opts.inner, false);
            Ok((totals.into_iter().map(|v| v * *w).collect(), points))
        })
        .collect();
    let mut totals = vec![C64::new(0.0, 0.0); shells.len()];
    let mut points = 0;
    for node in per_node {
        let (values, n) = node?;
        points += n;
        for (acc, v) in totals.iter_mut().zip(values) {
            *acc += v;
        }
    }
    let totals = totals.into_iter().map(|v| v / two_pi_i()).collect();
    Ok(report(totals, &shells, r, opts.inner.degree, Some(t), points))
}

/// `int_{T*_{x_k}, ||zeta|| <= R} e^{<g, mu_lambda(Theta_t p)>} (mu_lambda o Theta_t)^* sigma_lambda * phi(g)`,
/// which tends to `2 pi i e^{<g, lambda_{x_k}>} / alpha_k(g) * phi(g)`.
pub fn gaussian_fiber_limit(
    g: &Sl2Element,
    k: usize,
    lam: &Weight,
    phi: &TestFunction,
    t: f64,
    r: f64,
) -> Result<C64> {
    check_inputs(lam, r)?;
    let atlas = AdaptedAtlas::new(g)?;
    let sd = spectral_data(g)?;
    let cycle = fiber_cycle(&sd.fixed_points[k], 1).with_cutoff(r);
    let shells = dyadic_shells(r);
    let map = |p: &CotangentPoint| theta_map_with(&atlas, t, p);
    let kernel = |zeta: &CovectorValue| Some(zeta.eval(g).exp());
    let rate = |d: &CovectorValue| d.eval(g).norm();
    let (totals, _) = integrate_cycle(
        &cycle,
        &shells,
        &map,
        lam,
        &kernel,
        &rate,
        &CycleQuadrature::default(),
        true,
    );
    Ok(totals.iter().sum::<C64>() * phi.value(g.to_array()))
}

/// The closed form `2 pi i e^{<g, lambda_{x_k}>} / alpha_k(g) * phi(g)`.
pub fn gaussian_fiber_target(g: &Sl2Element, k: usize, lam: &Weight, phi: &TestFunction) -> Result<C64> {
    let sd = spectral_data(g)?;
    let lx = crate::flag::lambda_transport(&sd.fixed_points[k], lam);
    Ok(two_pi_i() * lx.eval(g).exp() / sd.alpha[k] * phi.value(g.to_array()))
}

/// `int_{|xi| <= R} t (conj(alpha)/|alpha|) e^{-t |alpha| |xi|^2} dxi ^ dxibar` in the orientation
/// of `(Re xi, Im xi)`, by Gauss quadrature in polar coordinates, and its closed form
/// `-(2 pi i / alpha) (1 - e^{-t |alpha| R^2})`.
pub fn gaussian_fiber_constant(alpha: C64, t: f64, r: f64) -> (C64, C64) {
    let a = alpha.norm();
    let rule = GaussRule::new(24);
    let scale = 1.0 / (t * a).sqrt();
    let panels = ((r / scale).ceil() as usize).clamp(1, 64);
    let mut radial = 0.0;
    for (rho, w) in rule.composite(&uniform_edges(0.0, r, panels)) {
        radial += w * rho * (-t * a * rho * rho).exp();
    }
    let phase = alpha.conj() / a;
    let numeric = phase * t * C64::new(0.0, -2.0) * (2.0 * PI) * radial;
    let closed = -two_pi_i() / alpha * (1.0 - (-t * a * r * r).exp());
    (numeric, closed)
}

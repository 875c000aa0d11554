//! Experiment execution: one row per knob combination, computed in parallel batches and
//! delivered in a fixed order.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bumps::expand;
use super::config::{ExperimentConfig, ExperimentId};
use super::rows::{Knobs, ReportRow};
use crate::characters::{
    cycle_pairing, deformed_cycle_pairing, dh_localization_check, fixed_point_pairing,
    gaussian_fiber_limit, gaussian_fiber_target, kirillov_pairing_with, weyl_side_pairing,
    CycleQuadrature, DeformedQuadrature, MultiplicityRule, TestFunction,
};
use crate::cycles::{discrete_cycle, principal_cycle, ParametrizedCycle};
use crate::error::Result;
use crate::lie::Sl2Element;

#[derive(Debug, Clone, Copy)]
enum Task {
    Kirillov { phi: usize, n: u32, degree: usize },
    Equivalence { phi: usize, r: f64, degree: usize },
    Gaussian { phi: usize, k: usize, t: f64, scale: f64 },
    Dh { speed: f64 },
    Residual { phi: usize, t: f64, r: f64, degree: usize },
    Fit { phi: usize, r: f64, degree: usize },
}

struct Context {
    config: ExperimentConfig,
    phis: Vec<TestFunction>,
}

fn tasks(ctx: &Context) -> Vec<Task> {
    let s = &ctx.config.sweep;
    let phis = 0..ctx.phis.len();
    let mut out = Vec::new();
    match ctx.config.experiment {
        ExperimentId::KirillovWeyl => {
            for phi in phis {
                for &n in &s.n {
                    for &degree in &s.degree {
                        out.push(Task::Kirillov { phi, n, degree });
                    }
                }
            }
        }
        ExperimentId::PrincipalEquivalence | ExperimentId::DiscreteEquivalence => {
            for phi in phis {
                for &r in &s.r {
                    for &degree in &s.degree {
                        out.push(Task::Equivalence { phi, r, degree });
                    }
                }
            }
        }
        ExperimentId::GaussianLimit => {
            for phi in phis {
                for k in 0..2 {
                    for &scale in &s.r {
                        for &t in &s.t {
                            out.push(Task::Gaussian { phi, k, t, scale });
                        }
                    }
                }
            }
        }
        ExperimentId::DhCheck => {
            out.extend(s.speed.iter().map(|&speed| Task::Dh { speed }));
        }
        ExperimentId::DeformationResiduals => {
            for phi in phis {
                for &t in &s.t {
                    for &r in &s.r {
                        for &degree in &s.degree {
                            out.push(Task::Residual { phi, t, r, degree });
                        }
                    }
                }
            }
        }
        ExperimentId::EllipticFit => {
            for phi in phis {
                for &r in &s.r {
                    for &degree in &s.degree {
                        out.push(Task::Fit { phi, r, degree });
                    }
                }
            }
        }
    }
    out
}

fn knobs(task: &Task, ctx: &Context) -> Knobs {
    let m = Some(ctx.config.multiplicity_rule());
    match *task {
        Task::Kirillov { phi, n, degree } => Knobs {
            phi: Some(phi),
            n: Some(n),
            degree: Some(degree),
            ..Knobs::default()
        },
        Task::Equivalence { phi, r, degree } => Knobs {
            phi: Some(phi),
            r: Some(r),
            degree: Some(degree),
            multiplicities: m,
            ..Knobs::default()
        },
        Task::Gaussian { phi, k, t, scale } => Knobs {
            phi: Some(phi),
            k: Some(k),
            t: Some(t),
            r: Some(scale),
            ..Knobs::default()
        },
        Task::Dh { speed } => Knobs {
            speed: Some(speed),
            ..Knobs::default()
        },
        Task::Residual { phi, t, r, degree } => Knobs {
            phi: Some(phi),
            t: Some(t),
            r: Some(r),
            degree: Some(degree),
            ..Knobs::default()
        },
        Task::Fit { phi, r, degree } => Knobs {
            phi: Some(phi),
            r: Some(r),
            degree: Some(degree),
            ..Knobs::default()
        },
    }
}

fn discrete(ctx: &Context) -> ParametrizedCycle {
    discrete_cycle(ctx.config.hemisphere)
}

fn cycle_options(degree: usize) -> CycleQuadrature {
    CycleQuadrature {
        degree,
        ..CycleQuadrature::default()
    }
}

/// Largest multiplicity magnitude tried by the elliptic fit.
const FIT_BOUND: i32 = 4;

/// Integers `(a, b)` with `|a|, |b| <= FIT_BOUND` minimizing `|target - a u - b v|`, ties going
/// to the smaller `|a| + |b|`. A search rather than a solve: for imaginary weights `u` and `v`
/// are both imaginary, so the real 2x2 system is singular.
fn integer_fit(target: C64, u: C64, v: C64) -> (i32, i32) {
    let mut best: ((i32, i32), f64) = ((0, 0), target.norm());
    for a in -FIT_BOUND..=FIT_BOUND {
        for b in -FIT_BOUND..=FIT_BOUND {
            let res = (target - u * f64::from(a) - v * f64::from(b)).norm();
            let (ba, bb) = best.0;
            let better = res < best.1 * (1.0 - 1e-12)
                || (res <= best.1 * (1.0 + 1e-12) && a.abs() + b.abs() < ba.abs() + bb.abs());
            if better {
                best = ((a, b), res);
            }
        }
    }
    best.0
}

/// Values `(left, right)` of one task, plus fitted multiplicities where applicable.
fn compute(task: &Task, ctx: &Context) -> Result<(C64, C64, Option<MultiplicityRule>)> {
    let lam = &ctx.config.weight;
    let fp = &ctx.config.fixed_point;
    match *task {
        Task::Kirillov { phi, n, degree } => {
            let phi = &ctx.phis[phi];
            let left = kirillov_pairing_with(n, phi, degree);
            let right = C64::new(weyl_side_pairing(n, phi, degree), 0.0);
            Ok((left, right, None))
        }
        Task::Equivalence { phi, r, degree } => {
            let phi = &ctx.phis[phi];
            let cycle = match ctx.config.experiment {
                ExperimentId::PrincipalEquivalence => principal_cycle(),
                _ => discrete(ctx),
            };
            let left = cycle_pairing(&cycle, lam, phi, r, &cycle_options(degree))?.value;
            let right = fixed_point_pairing(lam, &ctx.config.multiplicity_rule(), phi, fp).value;
            Ok((left, right, None))
        }
        Task::Gaussian { phi, k, t, scale } => {
            let phi = &ctx.phis[phi];
            let g = Sl2Element::from_array(phi.center);
            let left = gaussian_fiber_limit(&g, k, lam, phi, t, scale / t.sqrt())?;
            let right = gaussian_fiber_target(&g, k, lam, phi)?;
            Ok((left, right, None))
        }
        Task::Dh { speed } => {
            let (surface, fixed) = dh_localization_check(speed, 1.0);
            Ok((surface, fixed, None))
        }
        Task::Residual { phi, t, r, degree } => {
            let phi = &ctx.phis[phi];
            let cycle = principal_cycle();
            let left = cycle_pairing(&cycle, lam, phi, r, &cycle_options(degree))?.value;
            let deformed = DeformedQuadrature {
                inner: CycleQuadrature {
                    degree,
                    ..DeformedQuadrature::default().inner
                },
                ..DeformedQuadrature::default()
            };
            let right = deformed_cycle_pairing(&cycle, lam, phi, t, r, &deformed)?.value;
            Ok((left, right, None))
        }
        Task::Fit { phi, r, degree } => {
            let phi = &ctx.phis[phi];
            let left = cycle_pairing(&discrete(ctx), lam, phi, r, &cycle_options(degree))?.value;
            let upper = fixed_point_pairing(lam, &MultiplicityRule::elliptic(1, 0), phi, fp).value;
            let lower = fixed_point_pairing(lam, &MultiplicityRule::elliptic(0, 1), phi, fp).value;
            let (a, b) = integer_fit(left, upper, lower);
            let right = upper * f64::from(a) + lower * f64::from(b);
            Ok((left, right, Some(MultiplicityRule::elliptic(a, b))))
        }
    }
}

fn row(task: &Task, ctx: &Context) -> ReportRow {
    let start = Instant::now();
    let mut knobs = knobs(task, ctx);
    let experiment = ctx.config.experiment;
    let mut row = match compute(task, ctx) {
        Ok((left, right, fitted)) => {
            if fitted.is_some() {
                knobs.multiplicities = fitted;
            }
            ReportRow::new(experiment, knobs, left, right)
        }
        Err(e) => ReportRow::failed(experiment, knobs, &e),
    };
    if ctx.config.timing {
        row.runtime_s = start.elapsed().as_secs_f64();
    }
    row
}

/// Runs the experiment, handing each row to `sink` in sweep order as soon as its batch is done.
pub fn run_with<F: FnMut(&ReportRow)>(config: &ExperimentConfig, mut sink: F) -> Result<Vec<ReportRow>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let ctx = Context {
        config: config.clone(),
        phis: expand(&config.test_functions, &mut rng),
    };
    let all = tasks(&ctx);
    let batch = rayon::current_num_threads().max(1);
    let mut rows = Vec::with_capacity(all.len());
    for chunk in all.chunks(batch) {
        let done: Vec<ReportRow> = chunk.par_iter().map(|t| row(t, &ctx)).collect();
        for r in done {
            sink(&r);
            rows.push(r);
        }
    }
    Ok(rows)
}

pub fn run(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    run_with(config, |_| {})
}

/// The test functions a config expands to.
pub fn test_functions(config: &ExperimentConfig) -> Vec<TestFunction> {
    expand(&config.test_functions, &mut ChaCha8Rng::seed_from_u64(config.seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_fit_recovers_integers() {
        let u = C64::new(0.3, -1.2);
        let v = C64::new(-0.7, 0.4);
        for (a, b) in [(1, 0), (0, 1), (2, -1), (0, 0)] {
            let target = u * f64::from(a) + v * f64::from(b) + C64::new(1e-4, -1e-4);
            assert_eq!(integer_fit(target, u, v), (a, b));
        }
        // Collinear basis, as for elliptic g with an imaginary weight.
        let (u, v) = (C64::new(0.0, -0.0485), C64::new(0.0, 0.0042));
        assert_eq!(integer_fit(C64::new(-1e-5, -0.04847), u, v), (1, 0));
    }

    #[test]
    fn dh_rows_follow_the_sweep() {
        let config = ExperimentConfig::from_json(
            r#"{"experiment": "dh-check", "sweep": {"r": [1], "t": [0.1], "degree": [8], "speed": [0.5, 1, 2]}}"#,
        )
        .unwrap();
        let mut seen = Vec::new();
        let rows = run_with(&config, |r| seen.push(r.knobs.speed.unwrap())).unwrap();
        assert_eq!(seen, vec![0.5, 1.0, 2.0]);
        assert!(rows.iter().all(|r| r.is_ok() && r.rel_err < 1e-10));
    }
}

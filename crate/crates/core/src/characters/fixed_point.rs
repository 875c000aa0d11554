//! The fixed point side: the density `F(g) = sum_k m_k e^{<g, lambda_{x_k}>} / alpha_k(g)` and
//! its pairing with a test function.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::PairingReport;
use super::test_function::TestFunction;
use crate::error::Result;
use crate::flag::{lambda_transport, Chart, Weight};
use crate::lie::{spectral_data, Sl2Element};
use crate::quadrature::GaussRule;

/// Integer local invariants at the fixed points: keyed by stability for hyperbolic elements and
/// by the hemisphere containing the fixed point (`Im z > 0` is upper) for elliptic elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRule {
    pub attracting: i32,
    pub repelling: i32,
    pub elliptic_upper: i32,
    pub elliptic_lower: i32,
}

impl MultiplicityRule {
    pub fn uniform(m: i32) -> Self {
        MultiplicityRule {
            attracting: m,
            repelling: m,
            elliptic_upper: m,
            elliptic_lower: m,
        }
    }

    pub fn hyperbolic(attracting: i32, repelling: i32) -> Self {
        MultiplicityRule {
            attracting,
            repelling,
            elliptic_upper: 0,
            elliptic_lower: 0,
        }
    }

    pub fn elliptic(upper: i32, lower: i32) -> Self {
        MultiplicityRule {
            attracting: 0,
            repelling: 0,
            elliptic_upper: upper,
            elliptic_lower: lower,
        }
    }
}

/// `F(g) = sum_k m_k e^{<g, lambda_{x_k}>} / alpha_k(g)`.
pub fn fixed_point_density(g: &Sl2Element, lam: &Weight, m: &MultiplicityRule) -> Result<C64> {
    let sd = spectral_data(g)?;
    let mut total = C64::new(0.0, 0.0);
    for k in 0..2 {
        let mk = match sd.stable_index {
            Some(s) if s == k => m.attracting,
            Some(_) => m.repelling,
            None => {
                let z = sd.fixed_points[k]
                    .chart_coord(Chart::Z)
                    .expect("elliptic fixed points are not real");
                if z.im > 0.0 {
                    m.elliptic_upper
                } else {
                    m.elliptic_lower
                }
            }
        };
        if mk == 0 {
            continue;
        }
        let lx = lambda_transport(&sd.fixed_points[k], lam);
        total += lx.eval(g).exp() / sd.alpha[k] * f64::from(mk);
    }
    Ok(total)
}

/// Knobs for [`fixed_point_pairing`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedPointOptions {
    /// Gauss degree per axis in each cell.
    pub degree: usize,
    /// Initial cells per axis over the support box.
    pub cells: usize,
    /// Extra dyadic refinement levels for cells meeting the nilpotent cone.
    pub cone_depth: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            degree: 12,
            cells: 4,
            cone_depth: 7,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: [f64; 3],
    hi: [f64; 3],
    depth: usize,
}

fn range_sq(lo: f64, hi: f64) -> (f64, f64) {
    let m = lo.abs().max(hi.abs());
    if lo <= 0.0 && hi >= 0.0 {
        (0.0, m * m)
    } else {
        let n = lo.abs().min(hi.abs());
        (n * n, m * m)
    }
}

fn range_product(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let p = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    (
        p.iter().copied().fold(f64::INFINITY, f64::min),
        p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    )
}

impl Cell {
    /// Whether `a^2 + bc` can vanish on the cell.
    fn meets_cone(&self) -> bool {
        let a2 = range_sq(self.lo[0], self.hi[0]);
        let bc = range_product((self.lo[1], self.hi[1]), (self.lo[2], self.hi[2]));
        a2.0 + bc.0 <= 0.0 && a2.1 + bc.1 >= 0.0
    }

    fn meets_ball(&self, center: [f64; 3], radius: f64) -> bool {
        let mut d2 = 0.0;
        for i in 0..3 {
            let c = center[i].clamp(self.lo[i], self.hi[i]);
            d2 += (c - center[i]).powi(2);
        }
        d2 < radius * radius
    }

    fn split(&self) -> Vec<Cell> {
        let mid = [
            0.5 * (self.lo[0] + self.hi[0]),
            0.5 * (self.lo[1] + self.hi[1]),
            0.5 * (self.lo[2] + self.hi[2]),
        ];
        let mut out = Vec::with_capacity(8);
        for bits in 0..8 {
            let mut lo = self.lo;
            let mut hi = self.hi;
            for axis in 0..3 {
                if bits & (1 << axis) == 0 {
                    hi[axis] = mid[axis];
                } else {
                    lo[axis] = mid[axis];
                }
            }
            out.push(Cell {
                lo,
                hi,
                depth: self.depth + 1,
            });
        }
        out
    }
}

fn cells_for(phi: &TestFunction, opts: &FixedPointOptions) -> Vec<Cell> {
    let n = opts.cells.max(1);
    let mut queue = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = [i, j, k];
                let mut lo = [0.0; 3];
                let mut hi = [0.0; 3];
                for axis in 0..3 {
                    let (a, b) = phi.axis_range(axis);
                    let h = (b - a) / n as f64;
                    lo[axis] = a + h * idx[axis] as f64;
                    hi[axis] = lo[axis] + h;
                }
                queue.push(Cell { lo, hi, depth: 0 });
            }
        }
    }
    let mut done = Vec::new();
    while let Some(cell) = queue.pop() {
        if !cell.meets_ball(phi.center, phi.radius) {
            continue;
        }
        if cell.depth < opts.cone_depth && cell.meets_cone() {
            queue.extend(cell.split());
        } else {
            done.push(cell);
        }
    }
    done
}

/// Integrates `F * phi` over the support of `phi` with Gauss cells, refining dyadically toward
/// the nilpotent cone where `F` has an integrable singularity; non-regular nodes are skipped.
pub fn fixed_point_pairing(
    lam: &Weight,
    m: &MultiplicityRule,
    phi: &TestFunction,
    opts: &FixedPointOptions,
) -> PairingReport {
    let rule = GaussRule::new(opts.degree);
    let cells = cells_for(phi, opts);
    let per_cell: Vec<C64> = cells
        .par_iter()
        .map(|cell| {
            let axes: Vec<Vec<(f64, f64)>> = (0..3)
                .map(|a| rule.on(cell.lo[a], cell.hi[a]).collect())
                .collect();
            let mut sum = C64::new(0.0, 0.0);
            for (a, wa) in &axes[0] {
                for (b, wb) in &axes[1] {
                    for (c, wc) in &axes[2] {
                        let x = [*a, *b, *c];
                        let v = phi.value(x);
                        if v == 0.0 {
                            continue;
                        }
                        if let Ok(f) = fixed_point_density(&Sl2Element::from_array(x), lam, m) {
                            sum += f * (v * wa * wb * wc);
                        }
                    }
                }
            }
            sum
        })
        .collect();
    let value = per_cell.iter().sum();
    PairingReport {
        value,
        quadrature_degree: opts.degree,
        cutoff_r: None,
        theta_t: None,
        tail_estimate: 0.0,
        shells: Vec::new(),
        points: cells.len() * opts.degree.pow(3),
    }
}

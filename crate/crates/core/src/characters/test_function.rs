//! Compactly supported bumps on `R^3` and their Fourier–Laplace transforms.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::lie::CovectorValue;
use crate::quadrature::GaussRule;

/// Default Gauss–Legendre degree per axis for [`fourier`].
pub const FOURIER_DEGREE: usize = 24;

/// One term `coeff * y1^p1 y2^p2 y3^p3` of the polynomial factor, in the scaled
/// coordinates `y = (x - center) / radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub powers: [u32; 3],
    pub coeff: f64,
}

/// `phi(x) = poly(y) exp(-1 / (1 - |y|^2))` for `|y| < 1`, zero elsewhere, with
/// `y = (x - center) / radius`. An empty polynomial means the constant 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: [f64; 3],
    pub radius: f64,
    #[serde(default)]
    pub polynomial: Vec<Monomial>,
}

impl TestFunction {
    pub fn bump(center: [f64; 3], radius: f64) -> Self {
        assert!(radius > 0.0, "radius must be positive");
        TestFunction {
            center,
            radius,
            polynomial: Vec::new(),
        }
    }

    pub fn with_polynomial(mut self, polynomial: Vec<Monomial>) -> Self {
        self.polynomial = polynomial;
        self
    }

    fn terms(&self) -> Vec<Monomial> {
        if self.polynomial.is_empty() {
            vec![Monomial {
                powers: [0, 0, 0],
                coeff: 1.0,
            }]
        } else {
            self.polynomial.clone()
        }
    }

    /// `k * phi`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.polynomial = self
            .terms()
            .into_iter()
            .map(|m| Monomial {
                coeff: m.coeff * k,
                ..m
            })
            .collect();
        out
    }

    /// `self + other`; both must share the same support ball.
    pub fn plus(&self, other: &TestFunction) -> Option<Self> {
        if self.center != other.center || self.radius != other.radius {
            return None;
        }
        let mut out = self.clone();
        out.polynomial = self.terms();
        out.polynomial.extend(other.terms());
        Some(out)
    }

    pub fn poly(&self, y: [f64; 3]) -> f64 {
        if self.polynomial.is_empty() {
            return 1.0;
        }
        self.polynomial
            .iter()
            .map(|m| {
                m.coeff
                    * y[0].powi(m.powers[0] as i32)
                    * y[1].powi(m.powers[1] as i32)
                    * y[2].powi(m.powers[2] as i32)
            })
            .sum()
    }

    pub fn value(&self, x: [f64; 3]) -> f64 {
        let y = [
            (x[0] - self.center[0]) / self.radius,
            (x[1] - self.center[1]) / self.radius,
            (x[2] - self.center[2]) / self.radius,
        ];
        let rho2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        if rho2 >= 1.0 {
            return 0.0;
        }
        self.poly(y) * (-1.0 / (1.0 - rho2)).exp()
    }

    /// Upper bound of the Euclidean norm over the support.
    pub fn max_norm(&self) -> f64 {
        let c = self.center;
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() + self.radius
    }

    /// Axis-aligned box `[c - r, c + r]` along `axis`.
    pub fn axis_range(&self, axis: usize) -> (f64, f64) {
        (self.center[axis] - self.radius, self.center[axis] + self.radius)
    }

    fn cache_key(&self) -> Vec<u64> {
        let mut key: Vec<u64> = self.center.iter().map(|x| x.to_bits()).collect();
        key.push(self.radius.to_bits());
        for m in &self.polynomial {
            key.extend(m.powers.iter().map(|&p| u64::from(p)));
            key.push(m.coeff.to_bits());
        }
        key
    }
}

/// Tensor Gauss–Legendre data for `int phi(x) e^{<x, zeta>} dx` on the support box:
/// nodes per axis and `phi * weights` on the grid, with the nonzero `k`-range of each `(i, j)` row.
#[derive(Debug)]
pub struct FourierTable {
    pub degree: usize,
    nodes: [Vec<f64>; 3],
    values: Vec<f64>,
    rows: Vec<(usize, usize)>,
}

impl FourierTable {
    pub fn new(phi: &TestFunction, degree: usize) -> Self {
        let rule = GaussRule::new(degree);
        let mut nodes: [Vec<f64>; 3] = Default::default();
        let mut weights: [Vec<f64>; 3] = Default::default();
        for axis in 0..3 {
            let (a, b) = phi.axis_range(axis);
            for (x, w) in rule.on(a, b) {
                nodes[axis].push(x);
                weights[axis].push(w);
            }
        }
        let n = degree;
        let mut values = vec![0.0; n * n * n];
        let mut rows = vec![(0, 0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut lo = n;
                let mut hi = 0;
                for k in 0..n {
                    let v = phi.value([nodes[0][i], nodes[1][j], nodes[2][k]])
                        * weights[0][i]
                        * weights[1][j]
                        * weights[2][k];
                    values[(i * n + j) * n + k] = v;
                    if v != 0.0 {
                        lo = lo.min(k);
                        hi = hi.max(k + 1);
                    }
                }
                rows[i * n + j] = if lo < hi { (lo, hi) } else { (0, 0) };
            }
        }
        FourierTable {
            degree,
            nodes,
            values,
            rows,
        }
    }

    /// `int phi(x) e^{zeta_1 x_1 + zeta_2 x_2 + zeta_3 x_3} dx`.
    pub fn transform(&self, zeta: [C64; 3]) -> C64 {
        let n = self.degree;
        let ea: Vec<C64> = self.nodes[0].iter().map(|&x| (zeta[0] * x).exp()).collect();
        let eb: Vec<C64> = self.nodes[1].iter().map(|&x| (zeta[1] * x).exp()).collect();
        let ec: Vec<C64> = self.nodes[2].iter().map(|&x| (zeta[2] * x).exp()).collect();
        let mut total = C64::new(0.0, 0.0);
        for (i, ea_i) in ea.iter().enumerate() {
            let mut plane = C64::new(0.0, 0.0);
            for (j, eb_j) in eb.iter().enumerate() {
                let (lo, hi) = self.rows[i * n + j];
                if lo == hi {
                    continue;
                }
                let base = (i * n + j) * n;
                let (mut re, mut im) = (0.0, 0.0);
                for k in lo..hi {
                    let w = self.values[base + k];
                    re += w * ec[k].re;
                    im += w * ec[k].im;
                }
                plane += eb_j * C64::new(re, im);
            }
            total += ea_i * plane;
        }
        total
    }

    /// `phi_hat(zeta) = int phi(g) e^{<g, zeta>} dg` with `g = aH + bE + cF`.
    pub fn fourier(&self, zeta: &CovectorValue) -> C64 {
        self.transform(zeta.to_array())
    }

    /// `int phi`, the transform at zero.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum()
    }
}

type CacheKey = (Vec<u64>, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<FourierTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<FourierTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The shared table for `(phi, degree)`, built once and reused across threads.
pub fn fourier_table(phi: &TestFunction, degree: usize) -> Arc<FourierTable> {
    let key = (phi.cache_key(), degree);
    if let Some(t) = cache().read().get(&key) {
        return Arc::clone(t);
    }
    let table = Arc::new(FourierTable::new(phi, degree));
    let mut guard = cache().write();
    Arc::clone(guard.entry(key).or_insert(table))
}

/// `phi_hat(zeta)` at the default degree.
pub fn fourier(phi: &TestFunction, zeta: &CovectorValue) -> C64 {
    fourier_table(phi, FOURIER_DEGREE).fourier(zeta)
}

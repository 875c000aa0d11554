//! Gauss–Legendre rules and composite panel layouts.

use std::f64::consts::PI;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes are found by Newton iteration on `P_n` from the Chebyshev guess.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Composite rule: this rule applied on every consecutive pair of `edges`.
    pub fn composite(&self, edges: &[f64]) -> Vec<(f64, f64)> {
        edges
            .windows(2)
            .flat_map(|e| self.on(e[0], e[1]).collect::<Vec<_>>())
            .collect()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `count` equal panels on `[a, b]`, returned as edges.
pub fn uniform_edges(a: f64, b: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count)
        .map(|i| a + (b - a) * i as f64 / count as f64)
        .collect()
}

/// Dyadic shells `[0, 1], [1, 2], [2, 4], ..., [R/2, R]` (the last one clipped to `R`).
/// Returns the list of `(inner, outer)` radii.
pub fn dyadic_shells(r: f64) -> Vec<(f64, f64)> {
    let mut shells = Vec::new();
    if r <= 0.0 {
        return shells;
    }
    let first = r.min(1.0);
    shells.push((0.0, first));
    let mut inner = 1.0;
    while inner < r {
        let outer = (2.0 * inner).min(r);
        shells.push((inner, outer));
        inner = outer;
    }
    shells
}

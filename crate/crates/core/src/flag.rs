//! The flag variety `CP^1`, its cotangent bundle in the two standard charts,
//! the moment maps and the KKS form on coadjoint orbits.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{mat_apply, mat_mul, CovectorValue, Mat2, Sl2Element, I, ONE, ZERO};
use crate::quadrature::GaussRule;

/// A complex line in `C^2`, stored as a unit vector whose first nonzero
/// coordinate is positive real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlagPoint {
    v: [C64; 2],
}

impl FlagPoint {
    /// Normalizes `v`; panics on the zero vector.
    pub fn new(v: [C64; 2]) -> Self {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        assert!(n > 0.0 && n.is_finite(), "flag point needs a nonzero finite vector");
        let lead = if v[0].norm() > 1e-14 * n { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        FlagPoint {
            v: [v[0] * phase / n, v[1] * phase / n],
        }
    }

    /// `N = [1:0]`.
    pub fn north() -> Self {
        FlagPoint { v: [ONE, ZERO] }
    }

    /// `S = [0:1]`.
    pub fn south() -> Self {
        FlagPoint { v: [ZERO, ONE] }
    }

    /// The point with coordinate `coord` in `chart`.
    pub fn from_chart(chart: Chart, coord: C64) -> Self {
        match chart {
            Chart::Z => FlagPoint::new([ONE, coord]),
            Chart::W => FlagPoint::new([coord, ONE]),
        }
    }

    pub fn vector(&self) -> [C64; 2] {
        self.v
    }

    /// Coordinate in `chart`; fails at the chart's point at infinity.
    pub fn chart_coord(&self, chart: Chart) -> Result<C64> {
        let (num, den) = match chart {
            Chart::Z => (self.v[1], self.v[0]),
            Chart::W => (self.v[0], self.v[1]),
        };
        if den.norm() <= 1e-300 {
            return Err(Error::ChartOverflow);
        }
        Ok(num / den)
    }

    /// The chart in which this point has coordinate of modulus at most one.
    pub fn preferred_chart(&self) -> Chart {
        if self.v[0].norm() >= self.v[1].norm() {
            Chart::Z
        } else {
            Chart::W
        }
    }

    /// Fubini–Study chordal distance `sqrt(1 - |<v, w>|^2)`, evaluated as `|v ^ w|` to keep
    /// full precision near zero.
    pub fn chordal_distance(&self, other: &FlagPoint) -> f64 {
        let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        (self.v[0] * other.v[1] - self.v[1] * other.v[0]).norm() / (norm(&self.v) * norm(&other.v))
    }

    pub fn projective_eq(&self, other: &FlagPoint, tol: f64) -> bool {
        (self.v[0] * other.v[1] - self.v[1] * other.v[0]).norm() <= tol
    }

    /// The image `[u v]` under a matrix acting on `C^2`.
    pub fn act(&self, u: &Mat2) -> FlagPoint {
        FlagPoint::new(mat_apply(u, &self.v))
    }
}

/// The two standard affine charts: `z = v2/v1` centered at `N = [1:0]` and
/// `w = v1/v2` centered at `S = [0:1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    Z,
    W,
}

impl Chart {
    /// 1 for the chart around `[1:0]`, 2 for the chart around `[0:1]`.
    pub fn index(self) -> u8 {
        match self {
            Chart::Z => 1,
            Chart::W => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Chart> {
        match i {
            1 => Some(Chart::Z),
            2 => Some(Chart::W),
            _ => None,
        }
    }

    pub fn other(self) -> Chart {
        match self {
            Chart::Z => Chart::W,
            Chart::W => Chart::Z,
        }
    }
}

/// A covector `xi dz` above the point with coordinate `z` in `chart`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CotangentPoint {
    pub chart: Chart,
    pub z: C64,
    pub xi: C64,
}

/// A real tangent vector to `T*CP^1` in the chart coordinates of its base point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentVector {
    pub dz: C64,
    pub dxi: C64,
}

impl TangentVector {
    pub fn new(dz: C64, dxi: C64) -> Self {
        TangentVector { dz, dxi }
    }

    pub fn norm(&self) -> f64 {
        (self.dz.norm_sqr() + self.dxi.norm_sqr()).sqrt()
    }
}

impl CotangentPoint {
    pub fn new(chart: Chart, z: C64, xi: C64) -> Self {
        CotangentPoint { chart, z, xi }
    }

    /// The point of the zero section over `x`, in its preferred chart.
    pub fn zero_section(x: &FlagPoint) -> Self {
        let chart = x.preferred_chart();
        CotangentPoint::new(chart, x.chart_coord(chart).expect("preferred chart"), ZERO)
    }

    pub fn base(&self) -> FlagPoint {
        FlagPoint::from_chart(self.chart, self.z)
    }

    /// Re-expresses the point in `chart` via `w = 1/z`, `eta = -z^2 xi`.
    pub fn in_chart(&self, chart: Chart) -> Result<CotangentPoint> {
        if chart == self.chart {
            return Ok(*self);
        }
        if self.z.norm() <= 1e-300 {
            return Err(Error::ChartOverflow);
        }
        Ok(CotangentPoint::new(chart, self.z.inv(), -(self.z * self.z) * self.xi))
    }

    /// The same point in the chart where `|z| <= 1`.
    pub fn normalized(&self) -> CotangentPoint {
        if self.z.norm() <= 1.0 {
            *self
        } else {
            self.in_chart(self.chart.other()).expect("nonzero coordinate")
        }
    }

    pub fn offset(&self, t: &TangentVector, h: f64) -> CotangentPoint {
        CotangentPoint::new(self.chart, self.z + t.dz * h, self.xi + t.dxi * h)
    }

    /// Multiplies the fiber coordinate by `s`.
    pub fn scale_fiber(&self, s: f64) -> CotangentPoint {
        CotangentPoint::new(self.chart, self.z, self.xi * s)
    }

    /// Fiber norm `||mu(p)||`.
    pub fn fiber_norm(&self) -> f64 {
        moment(self).norm()
    }

    /// Image under the action of `u` on `C^2`: Möbius on the base, pushforward on the fiber.
    pub fn act(&self, u: &Mat2) -> CotangentPoint {
        let (v, dv) = match self.chart {
            Chart::Z => ([ONE, self.z], [ZERO, ONE]),
            Chart::W => ([self.z, ONE], [ONE, ZERO]),
        };
        let big = mat_apply(u, &v);
        let dbig = mat_apply(u, &dv);
        if big[0].norm() >= big[1].norm() {
            let d = (dbig[1] * big[0] - big[1] * dbig[0]) / (big[0] * big[0]);
            CotangentPoint::new(Chart::Z, big[1] / big[0], self.xi / d)
        } else {
            let d = (dbig[0] * big[1] - big[0] * dbig[1]) / (big[1] * big[1]);
            CotangentPoint::new(Chart::W, big[0] / big[1], self.xi / d)
        }
    }
}

/// `VF_g` in the chart around `[1:0]`: `c - 2 a z - b z^2`.
pub fn flow_velocity(g: &Sl2Element, x: &FlagPoint) -> Result<C64> {
    let z = x.chart_coord(Chart::Z)?;
    Ok(flow_velocity_in(g, Chart::Z, z))
}

/// `VF_g` in either chart; in the chart around `[0:1]` it is `b + 2 a w - c w^2`.
pub fn flow_velocity_in(g: &Sl2Element, chart: Chart, z: C64) -> C64 {
    match chart {
        Chart::Z => -(z * z) * g.b - z * (2.0 * g.a) + g.c,
        Chart::W => -(z * z) * g.c + z * (2.0 * g.a) + g.b,
    }
}

/// The moment map `mu(p)(g) = xi * VF_g(z)`.
pub fn moment(p: &CotangentPoint) -> CovectorValue {
    let (z, xi) = (p.z, p.xi);
    match p.chart {
        Chart::Z => CovectorValue::new(xi * z * -2.0, -(xi * z * z), xi),
        Chart::W => CovectorValue::new(xi * z * 2.0, xi, -(xi * z * z)),
    }
}

/// A weight `lambda`, determined by `lambda(H)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub lambda_h: C64,
}

impl Weight {
    pub fn new(lambda_h: C64) -> Self {
        Weight { lambda_h }
    }

    pub fn imaginary(s: f64) -> Self {
        Weight::new(C64::new(0.0, s))
    }

    /// The half-sum of positive roots, `rho(H) = 1`.
    pub fn rho() -> Self {
        Weight::new(ONE)
    }

    pub fn is_regular(&self) -> bool {
        self.lambda_h != ZERO
    }

    /// The covector `(lambda(H), 0, 0)` at the base point `[1:0]`.
    pub fn base_covector(&self) -> CovectorValue {
        CovectorValue::new(self.lambda_h, ZERO, ZERO)
    }
}

/// `lambda_x = Ad*(u) lambda_0` for any `u` in SU(2) with `u [1:0] = x`.
///
/// In matrix form this is `(lambda(H)/2) (2P - 1)` with `P` the orthogonal projection onto `x`.
pub fn lambda_transport(x: &FlagPoint, lam: &Weight) -> CovectorValue {
    let [v1, v2] = x.vector();
    let n = v1.norm_sqr() + v2.norm_sqr();
    let l = lam.lambda_h / n;
    CovectorValue::new(
        l * (v1.norm_sqr() - v2.norm_sqr()),
        l * v2 * v1.conj(),
        l * v1 * v2.conj(),
    )
}

/// `mu_lambda = mu + lambda_x`.
pub fn twisted_moment(p: &CotangentPoint, lam: &Weight) -> CovectorValue {
    moment(p) + lambda_transport(&p.base(), lam)
}

/// Coordinates `(alpha, beta, gamma)` of `x = alpha H + beta E + gamma F`.
type Coords = [C64; 3];

fn basis_matrix(k: usize) -> Mat2 {
    match k {
        0 => [[ONE, ZERO], [ZERO, -ONE]],
        1 => [[ZERO, ONE], [ZERO, ZERO]],
        _ => [[ZERO, ZERO], [ONE, ZERO]],
    }
}

fn commutator(x: &Mat2, y: &Mat2) -> Mat2 {
    let xy = mat_mul(x, y);
    let yx = mat_mul(y, x);
    [
        [xy[0][0] - yx[0][0], xy[0][1] - yx[0][1]],
        [xy[1][0] - yx[1][0], xy[1][1] - yx[1][1]],
    ]
}

/// `[x, y]` in `(H, E, F)` coordinates.
fn bracket_coords(x: &Coords, y: &Coords) -> Coords {
    [
        x[1] * y[2] - x[2] * y[1],
        (x[0] * y[1] - x[1] * y[0]) * 2.0,
        (x[0] * y[2] - x[2] * y[0]) * -2.0,
    ]
}

/// `ad*_x zeta`, which under the trace form is the commutator `[x, X]`.
pub fn coadjoint_action(x: &[C64; 3], zeta: &CovectorValue) -> CovectorValue {
    let xm = [[x[0], x[1]], [x[2], -x[0]]];
    CovectorValue::from_matrix(&commutator(&xm, &zeta.matrix()))
}

/// Solves `ad*_x zeta = w` for `x` by Gaussian elimination with full pivoting.
///
/// The map has rank two for every nonzero `zeta`; the free coordinate is set to zero.
fn solve_orbit_tangent(zeta: &CovectorValue, w: &CovectorValue) -> Result<Coords> {
    let x = zeta.matrix();
    let mut m = [[ZERO; 3]; 3];
    for k in 0..3 {
        let col = CovectorValue::from_matrix(&commutator(&basis_matrix(k), &x)).to_array();
        for (row, value) in col.iter().enumerate() {
            m[row][k] = *value;
        }
    }
    let mut rhs = w.to_array();
    let mut perm = [0usize, 1, 2];
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::NotRegular);
    }
    for step in 0..2 {
        let mut best = (step, step, -1.0);
        for (r, row) in m.iter().enumerate().skip(step) {
            for (c, value) in row.iter().enumerate().skip(step) {
                if value.norm() > best.2 {
                    best = (r, c, value.norm());
                }
            }
        }
        if best.2 <= 1e-12 * scale {
            return Err(Error::NotRegular);
        }
        m.swap(step, best.0);
        rhs.swap(step, best.0);
        for row in m.iter_mut() {
            row.swap(step, best.1);
        }
        perm.swap(step, best.1);
        for r in (step + 1)..3 {
            let factor = m[r][step] / m[step][step];
            for c in step..3 {
                let sub = factor * m[step][c];
                m[r][c] -= sub;
            }
            let sub = factor * rhs[step];
            rhs[r] -= sub;
        }
    }
    let mut sol = [ZERO; 3];
    sol[1] = rhs[1] / m[1][1];
    sol[0] = (rhs[0] - m[0][1] * sol[1]) / m[0][0];
    let mut out = [ZERO; 3];
    for (i, p) in perm.iter().enumerate() {
        out[*p] = sol[i];
    }
    Ok(out)
}

/// Relative tangency residual `|tr(X W)| / (|X| |W|)`.
pub fn tangency_residual(zeta: &CovectorValue, w: &CovectorValue) -> f64 {
    let denom = zeta.norm() * w.norm();
    if denom == 0.0 {
        0.0
    } else {
        zeta.trace_form(w).norm() / denom
    }
}

/// Tolerance of the tangency test in [`kks_eval`].
pub const TANGENCY_TOLERANCE: f64 = 1e-8;

/// The KKS form `sigma(w1, w2) = <zeta, [x1, x2]>` where `ad*_{x_i} zeta = w_i`.
pub fn kks_eval(zeta: &CovectorValue, w1: &CovectorValue, w2: &CovectorValue) -> Result<C64> {
    for w in [w1, w2] {
        let residual = tangency_residual(zeta, w);
        if residual > TANGENCY_TOLERANCE {
            return Err(Error::NotTangent { residual });
        }
    }
    kks_unchecked(zeta, w1, w2)
}

/// [`kks_eval`] without the tangency test, for vectors produced by finite differences.
pub fn kks_unchecked(
    zeta: &CovectorValue,
    w1: &CovectorValue,
    w2: &CovectorValue,
) -> Result<C64> {
    let x1 = solve_orbit_tangent(zeta, w1)?;
    let x2 = solve_orbit_tangent(zeta, w2)?;
    Ok(zeta.eval_complex(&bracket_coords(&x1, &x2)))
}

/// Finite-difference step used for `d mu_lambda`.
pub fn fd_step(p: &CotangentPoint) -> f64 {
    1e-5 * (p.z.norm_sqr() + p.xi.norm_sqr()).sqrt().max(1.0)
}

/// Central difference of `mu_lambda` along `t`.
pub fn twisted_moment_differential(
    p: &CotangentPoint,
    lam: &Weight,
    t: &TangentVector,
) -> CovectorValue {
    let tn = t.norm();
    if tn == 0.0 {
        return CovectorValue::ZERO;
    }
    let h = fd_step(p) / tn;
    let plus = twisted_moment(&p.offset(t, h), lam);
    let minus = twisted_moment(&p.offset(t, -h), lam);
    (plus - minus) * (0.5 / h)
}

/// `(mu_lambda^* sigma_lambda)(t1, t2)`, which equals `(-sigma + pi^* tau_lambda)(t1, t2)`.
pub fn pulled_back_area(
    p: &CotangentPoint,
    lam: &Weight,
    t1: &TangentVector,
    t2: &TangentVector,
) -> Result<C64> {
    if !lam.is_regular() {
        return Err(Error::SingularWeight);
    }
    let zeta = twisted_moment(p, lam);
    let w1 = twisted_moment_differential(p, lam, t1);
    let w2 = twisted_moment_differential(p, lam, t2);
    kks_eval(&zeta, &w1, &w2)
}

/// Unit vector along the real chart coordinate `k` of `(Re z, Im z, Re xi, Im xi)`.
pub fn coordinate_direction(k: usize) -> TangentVector {
    match k {
        0 => TangentVector::new(ONE, ZERO),
        1 => TangentVector::new(I, ZERO),
        2 => TangentVector::new(ZERO, ONE),
        _ => TangentVector::new(ZERO, I),
    }
}

/// Integral of `f * e^{<g, mu_lambda>} mu_lambda^* sigma_lambda` over the boundary of the coordinate
/// cube `p + h [0,1]^3` spanned by the chart directions `dirs`, together with the sum of the
/// absolute face integrals. `f` is an extra scalar factor (constant 1 for the closed form).
pub fn stokes_boundary<F>(
    p: &CotangentPoint,
    lam: &Weight,
    g: &Sl2Element,
    dirs: [usize; 3],
    h: f64,
    degree: usize,
    factor: F,
) -> Result<(C64, f64)>
where
    F: Fn(&CotangentPoint) -> C64,
{
    let rule = GaussRule::new(degree);
    let nodes: Vec<(f64, f64)> = rule.on(0.0, 1.0).collect();
    let e = dirs.map(coordinate_direction);
    let mut total = ZERO;
    let mut scale = 0.0;
    for i in 0..3 {
        let (a, b) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let ta = TangentVector::new(e[a].dz * h, e[a].dxi * h);
        let tb = TangentVector::new(e[b].dz * h, e[b].dxi * h);
        for (level, side) in [(0.0, -1.0), (1.0, 1.0)] {
            let mut face = ZERO;
            for &(sa, wa) in &nodes {
                for &(sb, wb) in &nodes {
                    let q = p
                        .offset(&e[i], h * level)
                        .offset(&e[a], h * sa)
                        .offset(&e[b], h * sb);
                    let weight = twisted_moment(&q, lam).eval(g).exp() * factor(&q);
                    face += weight * pulled_back_area(&q, lam, &ta, &tb)? * (wa * wb);
                }
            }
            let sign = if i == 1 { -side } else { side };
            total += face * sign;
            scale += face.norm();
        }
    }
    Ok((total, scale))
}

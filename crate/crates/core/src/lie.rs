//! sl(2,R) elements, covectors on sl(2,C), spectral data of regular semisimple elements.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag::FlagPoint;

/// A complex 2x2 matrix, row major.
pub type Mat2 = [[C64; 2]; 2];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub(crate) fn mat_inv(x: &Mat2) -> Mat2 {
    let det = x[0][0] * x[1][1] - x[0][1] * x[1][0];
    [
        [x[1][1] / det, -x[0][1] / det],
        [-x[1][0] / det, x[0][0] / det],
    ]
}

pub(crate) fn mat_apply(x: &Mat2, v: &[C64; 2]) -> [C64; 2] {
    [
        x[0][0] * v[0] + x[0][1] * v[1],
        x[1][0] * v[0] + x[1][1] * v[1],
    ]
}

/// The rotation `[[cos t, -sin t], [sin t, cos t]]` in SO(2).
pub fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

/// The real traceless matrix `[[a, b], [c, -a]] = aH + bE + cF`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Sl2Element {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sl2Element {
    pub const H: Sl2Element = Sl2Element { a: 1.0, b: 0.0, c: 0.0 };
    pub const E: Sl2Element = Sl2Element { a: 0.0, b: 1.0, c: 0.0 };
    pub const F: Sl2Element = Sl2Element { a: 0.0, b: 0.0, c: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Sl2Element { a, b, c }
    }

    pub fn from_array(x: [f64; 3]) -> Self {
        Sl2Element::new(x[0], x[1], x[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn matrix(&self) -> Mat2 {
        [
            [C64::new(self.a, 0.0), C64::new(self.b, 0.0)],
            [C64::new(self.c, 0.0), C64::new(-self.a, 0.0)],
        ]
    }

    /// Reads off `(a, b, c)` from a traceless real matrix; the imaginary parts are dropped.
    pub fn from_matrix(m: &Mat2) -> Self {
        Sl2Element::new(0.5 * (m[0][0].re - m[1][1].re), m[0][1].re, m[1][0].re)
    }

    /// The trace form `tr(XY) = 2aa' + bc' + cb'`.
    pub fn trace_pairing(&self, other: &Sl2Element) -> f64 {
        2.0 * self.a * other.a + self.b * other.c + self.c * other.b
    }

    /// `a^2 + bc = -det`; its sign decides the regularity class.
    pub fn discriminant(&self) -> f64 {
        self.a * self.a + self.b * self.c
    }

    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c).sqrt()
    }

    pub fn classify(&self) -> RegularityClass {
        classify(self)
    }

    pub fn is_regular_semisimple(&self) -> bool {
        matches!(
            self.classify(),
            RegularityClass::Hyperbolic | RegularityClass::Elliptic
        )
    }

    /// `Ad(u) g = u g u^{-1}` for a real matrix `u` (imaginary parts are discarded).
    pub fn conjugate(&self, u: &Mat2) -> Sl2Element {
        let m = mat_mul(&mat_mul(u, &self.matrix()), &mat_inv(u));
        Sl2Element::from_matrix(&m)
    }

    /// `Ad(k) g` for the rotation `k` by `angle`.
    pub fn rotate(&self, angle: f64) -> Sl2Element {
        self.conjugate(&rotation(angle))
    }

    pub fn bracket(&self, other: &Sl2Element) -> Sl2Element {
        let (x, y) = (self, other);
        Sl2Element::new(
            x.b * y.c - x.c * y.b,
            2.0 * (x.a * y.b - x.b * y.a),
            -2.0 * (x.a * y.c - x.c * y.a),
        )
    }
}

impl Add for Sl2Element {
    type Output = Sl2Element;
    fn add(self, o: Sl2Element) -> Sl2Element {
        Sl2Element::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Sub for Sl2Element {
    type Output = Sl2Element;
    fn sub(self, o: Sl2Element) -> Sl2Element {
        Sl2Element::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Mul<f64> for Sl2Element {
    type Output = Sl2Element;
    fn mul(self, s: f64) -> Sl2Element {
        Sl2Element::new(self.a * s, self.b * s, self.c * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularityClass {
    Hyperbolic,
    Elliptic,
    Nilpotent,
    Zero,
}

pub fn classify(g: &Sl2Element) -> RegularityClass {
    let d = g.discriminant();
    if d > 0.0 {
        RegularityClass::Hyperbolic
    } else if d < 0.0 {
        RegularityClass::Elliptic
    } else if g.a != 0.0 || g.b != 0.0 || g.c != 0.0 {
        RegularityClass::Nilpotent
    } else {
        RegularityClass::Zero
    }
}

/// An element of the dual of sl(2,C), stored by its values on `(H, E, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CovectorValue {
    pub h: C64,
    pub e: C64,
    pub f: C64,
}

impl CovectorValue {
    pub const ZERO: CovectorValue = CovectorValue { h: ZERO, e: ZERO, f: ZERO };

    pub const fn new(h: C64, e: C64, f: C64) -> Self {
        CovectorValue { h, e, f }
    }

    pub fn real(h: f64, e: f64, f: f64) -> Self {
        CovectorValue::new(C64::new(h, 0.0), C64::new(e, 0.0), C64::new(f, 0.0))
    }

    /// `<g, zeta> = a h + b e + c f`.
    pub fn eval(&self, g: &Sl2Element) -> C64 {
        self.h * g.a + self.e * g.b + self.f * g.c
    }

    /// Evaluation on a complex element `aH + bE + cF`.
    pub fn eval_complex(&self, x: &[C64; 3]) -> C64 {
        self.h * x[0] + self.e * x[1] + self.f * x[2]
    }

    /// Euclidean norm of `(h, e, f)`.
    pub fn norm(&self) -> f64 {
        (self.h.norm_sqr() + self.e.norm_sqr() + self.f.norm_sqr()).sqrt()
    }

    /// The matrix `X` with `zeta(Y) = tr(XY)`, i.e. `[[h/2, f], [e, -h/2]]`.
    pub fn matrix(&self) -> Mat2 {
        [[self.h * 0.5, self.f], [self.e, -self.h * 0.5]]
    }

    /// Inverse of [`CovectorValue::matrix`] on traceless matrices.
    pub fn from_matrix(m: &Mat2) -> Self {
        CovectorValue::new(m[0][0] - m[1][1], m[1][0], m[0][1])
    }

    /// `tr(X Y)` for the matrices of two covectors.
    pub fn trace_form(&self, other: &CovectorValue) -> C64 {
        self.h * other.h * 0.5 + self.e * other.f + self.f * other.e
    }

    /// `det` of the matrix of this covector.
    pub fn det(&self) -> C64 {
        -(self.h * self.h * 0.25 + self.e * self.f)
    }

    /// `Ad*(u) zeta`, which under the trace form is `u X u^{-1}`.
    pub fn coadjoint(&self, u: &Mat2) -> CovectorValue {
        let m = mat_mul(&mat_mul(u, &self.matrix()), &mat_inv(u));
        CovectorValue::from_matrix(&m)
    }

    pub fn to_array(self) -> [C64; 3] {
        [self.h, self.e, self.f]
    }
}

impl Add for CovectorValue {
    type Output = CovectorValue;
    fn add(self, o: CovectorValue) -> CovectorValue {
        CovectorValue::new(self.h + o.h, self.e + o.e, self.f + o.f)
    }
}

impl Sub for CovectorValue {
    type Output = CovectorValue;
    fn sub(self, o: CovectorValue) -> CovectorValue {
        CovectorValue::new(self.h - o.h, self.e - o.e, self.f - o.f)
    }
}

impl Neg for CovectorValue {
    type Output = CovectorValue;
    fn neg(self) -> CovectorValue {
        CovectorValue::new(-self.h, -self.e, -self.f)
    }
}

impl Mul<C64> for CovectorValue {
    type Output = CovectorValue;
    fn mul(self, s: C64) -> CovectorValue {
        CovectorValue::new(self.h * s, self.e * s, self.f * s)
    }
}

impl Mul<f64> for CovectorValue {
    type Output = CovectorValue;
    fn mul(self, s: f64) -> CovectorValue {
        CovectorValue::new(self.h * s, self.e * s, self.f * s)
    }
}

/// Eigen-data of a regular semisimple element and the linearized flow at its fixed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    /// Eigenvalue with `Re nu >= 0`, and `Im nu > 0` when `Re nu = 0`.
    pub nu: C64,
    /// `fixed_points[0]` is the eigenline of `nu`, `fixed_points[1]` that of `-nu`.
    pub fixed_points: [FlagPoint; 2],
    /// `alpha[k]` is the linearization eigenvalue of the flow at `fixed_points[k]`.
    pub alpha: [C64; 2],
    /// Index of the attracting fixed point, for hyperbolic elements.
    pub stable_index: Option<usize>,
}

impl SpectralData {
    /// Index of the repelling fixed point, for hyperbolic elements.
    pub fn unstable_index(&self) -> Option<usize> {
        self.stable_index.map(|k| 1 - k)
    }
}

fn eigenvector(g: &Sl2Element, mu: C64) -> [C64; 2] {
    let a = C64::new(g.a, 0.0);
    let b = C64::new(g.b, 0.0);
    let c = C64::new(g.c, 0.0);
    let v1 = [b, mu - a];
    let v2 = [mu + a, c];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    if n1 >= n2 {
        v1
    } else {
        v2
    }
}

/// Eigenvalues, fixed points and root values of a regular semisimple element.
///
/// The flow of `g` on `CP^1` near the eigenline of the eigenvalue `nu_k` is
/// `z' = (nu_{k'} - nu_k) z + O(z^2)`, so `alpha[0] = -2 nu` and `alpha[1] = 2 nu`.
pub fn spectral_data(g: &Sl2Element) -> Result<SpectralData> {
    let d = g.discriminant();
    let class = classify(g);
    let nu = match class {
        RegularityClass::Hyperbolic => C64::new(d.sqrt(), 0.0),
        RegularityClass::Elliptic => C64::new(0.0, (-d).sqrt()),
        _ => return Err(Error::NotRegularSemisimple { discriminant: d }),
    };
    let fixed_points = [
        FlagPoint::new(eigenvector(g, nu)),
        FlagPoint::new(eigenvector(g, -nu)),
    ];
    let alpha = [nu * -2.0, nu * 2.0];
    let stable_index = match class {
        RegularityClass::Hyperbolic => Some(0),
        _ => None,
    };
    Ok(SpectralData {
        nu,
        fixed_points,
        alpha,
        stable_index,
    })
}

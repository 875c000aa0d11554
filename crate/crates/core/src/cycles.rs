//! Parametrized conic cycles in `T*CP^1`, their deformations, and the fiber maps
//! that push them toward the fixed points of a regular semisimple element.
//!
//! Positioning: `N = [1:0]`, `S = [0:1]`, the circle `S^1` is the real projective
//! line, the western hemisphere is `Im z > 0` (equivalently `Im w < 0`). Sphere
//! coordinates `(beta, phi)` are taken around `S`: `w = tan(beta/2) e^{i phi}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flag::{moment, twisted_moment, Chart, CotangentPoint, FlagPoint, Weight};
use crate::lie::{mat_apply, mat_inv, spectral_data, CovectorValue, Mat2, Sl2Element, I, ONE, ZERO};

/// Orientation sign of the zero section in `(beta, phi)` order.
pub const ZERO_SECTION_ORIENTATION: i8 = 1;
/// Orientation sign of a full cotangent fiber in `(psi, s)` order, where the covector
/// is `s e^{i psi}` up to a positive factor.
pub const FIBER_ORIENTATION: i8 = 1;

/// A closed parameter rectangle `[u0, u1] x [v0, v1]`; `v` may be infinite on conic patches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamBox {
    pub u: [f64; 2],
    #[serde(with = "extended_bounds")]
    pub v: [f64; 2],
}

/// JSON has no infinities; unbounded ends are written as the strings `"-inf"` / `"inf"`.
mod extended_bounds {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Bound {
        Finite(f64),
        Symbolic(String),
    }

    fn encode(x: f64) -> Bound {
        if x == f64::INFINITY {
            Bound::Symbolic("inf".into())
        } else if x == f64::NEG_INFINITY {
            Bound::Symbolic("-inf".into())
        } else {
            Bound::Finite(x)
        }
    }

    fn decode<E: serde::de::Error>(b: Bound) -> Result<f64, E> {
        match b {
            Bound::Finite(x) => Ok(x),
            Bound::Symbolic(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("unknown bound {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
        [encode(v[0]), encode(v[1])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
        let [a, b] = <[Bound; 2]>::deserialize(d)?;
        Ok([decode(a)?, decode(b)?])
    }
}

impl ParamBox {
    pub fn new(u: [f64; 2], v: [f64; 2]) -> Self {
        ParamBox { u, v }
    }
}

/// Geometric shape of a patch; fixes how `(u, v)` map into `T*CP^1`.
///
/// On every conic shape the radial parameter is `v` and equals the fiber norm `||mu||`
/// (signed for the conormal of the real line).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PatchShape {
    /// Zero section, parameters `(beta, phi)`.
    ZeroSection,
    /// Conormal bundle of the real line, parameters `(theta, s)`: base `[cos(theta/2) : sin(theta/2)]`.
    /// Positive `s` points out of the western hemisphere.
    RealLineConormal,
    /// Outward conormal of the latitude circle `beta = const`, parameters `(phi, s)`.
    LatitudeConormal { beta: f64 },
    /// Sector of the fiber over the point with coordinate `coord` in `chart`, parameters `(psi, s)`;
    /// the fiber coordinate in that chart is a positive multiple of `s e^{i psi}`.
    FiberSector { chart: Chart, coord: C64 },
}

impl PatchShape {
    pub fn is_conic(&self) -> bool {
        !matches!(self, PatchShape::ZeroSection)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclePatch {
    pub tag: String,
    pub shape: PatchShape,
    pub domain: ParamBox,
    pub orientation: i8,
    pub multiplicity: i32,
}

fn unit_fiber_scale(chart: Chart, coord: C64) -> f64 {
    moment(&CotangentPoint::new(chart, coord, ONE)).norm()
}

fn sphere_point(beta: f64, phi: f64) -> (Chart, C64) {
    let e = C64::from_polar(1.0, phi);
    if beta <= FRAC_PI_2 {
        (Chart::W, e * (0.5 * beta).tan())
    } else {
        (Chart::Z, e.conj() / (0.5 * beta).tan())
    }
}

impl CyclePatch {
    pub fn new(tag: &str, shape: PatchShape, domain: ParamBox, orientation: i8) -> Self {
        CyclePatch {
            tag: tag.to_string(),
            shape,
            domain,
            orientation,
            multiplicity: 1,
        }
    }

    /// Signed weight `orientation * multiplicity`.
    pub fn weight(&self) -> f64 {
        f64::from(self.orientation) * f64::from(self.multiplicity)
    }

    pub fn embed(&self, u: f64, v: f64) -> CotangentPoint {
        match self.shape {
            PatchShape::ZeroSection => {
                let (chart, z) = sphere_point(u, v);
                CotangentPoint::new(chart, z, ZERO)
            }
            PatchShape::RealLineConormal => {
                let (sh, ch) = (0.5 * u).sin_cos();
                let k = 1.0 / (1.0 + 0.5 * u.sin().powi(2)).sqrt();
                if ch.abs() >= sh.abs() {
                    CotangentPoint::new(Chart::Z, C64::new(sh / ch, 0.0), I * (v * k * ch * ch))
                } else {
                    CotangentPoint::new(Chart::W, C64::new(ch / sh, 0.0), -I * (v * k * sh * sh))
                }
            }
            PatchShape::LatitudeConormal { beta } => {
                let r = (0.5 * beta).tan();
                let w = C64::from_polar(r, u);
                let eta = C64::from_polar(v / unit_fiber_scale(Chart::W, w), -u);
                let p = CotangentPoint::new(Chart::W, w, eta);
                if r > 1.0 {
                    p.in_chart(Chart::Z).expect("nonzero base coordinate")
                } else {
                    p
                }
            }
            PatchShape::FiberSector { chart, coord } => {
                let xi = C64::from_polar(v / unit_fiber_scale(chart, coord), u);
                CotangentPoint::new(chart, coord, xi)
            }
        }
    }

    /// `mu_lambda` at `(u, v)` and its partial derivatives in `u` and `v`, by central differences.
    pub fn twisted_moment_jet(
        &self,
        u: f64,
        v: f64,
        lam: &Weight,
    ) -> (CovectorValue, CovectorValue, CovectorValue) {
        let hu = 1e-5;
        let hv = 1e-5 * v.abs().max(1.0);
        let f = |u: f64, v: f64| twisted_moment(&self.embed(u, v), lam);
        let zeta = f(u, v);
        let du = (f(u + hu, v) - f(u - hu, v)) * (0.5 / hu);
        let dv = (f(u, v + hv) - f(u, v - hv)) * (0.5 / hv);
        (zeta, du, dv)
    }
}

/// A finite union of oriented patches with an optional fiber-norm cutoff `||zeta|| <= R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametrizedCycle {
    pub name: String,
    pub patches: Vec<CyclePatch>,
    pub cutoff: Option<f64>,
}

impl ParametrizedCycle {
    pub fn new(name: &str, patches: Vec<CyclePatch>) -> Self {
        ParametrizedCycle {
            name: name.to_string(),
            patches,
            cutoff: None,
        }
    }

    pub fn empty() -> Self {
        ParametrizedCycle::new("empty", Vec::new())
    }

    /// Restriction to `||zeta|| <= r`; repeated cutoffs keep the smaller radius.
    pub fn with_cutoff(&self, r: f64) -> Self {
        let mut out = self.clone();
        out.cutoff = Some(self.cutoff.map_or(r, |c| c.min(r)));
        out
    }

    /// The parameter box of a patch after applying the cutoff to its radial range.
    pub fn effective_domain(&self, patch: &CyclePatch) -> ParamBox {
        let mut d = patch.domain;
        if let (Some(r), true) = (self.cutoff, patch.shape.is_conic()) {
            d.v = [d.v[0].max(-r), d.v[1].min(r)];
            if d.v[0] > d.v[1] {
                d.v = [0.0, 0.0];
            }
        }
        d
    }

    /// Points drawn uniformly from the effective parameter boxes, patch chosen uniformly.
    /// Unbounded radial ranges are clipped to `radial_max`.
    pub fn sample_points<R: Rng>(
        &self,
        n: usize,
        radial_max: f64,
        rng: &mut R,
    ) -> Vec<(usize, CotangentPoint)> {
        if self.patches.is_empty() {
            return Vec::new();
        }
        (0..n)
            .map(|_| {
                let idx = rng.gen_range(0..self.patches.len());
                let patch = &self.patches[idx];
                let d = self.effective_domain(patch);
                let v0 = d.v[0].max(-radial_max);
                let v1 = d.v[1].min(radial_max);
                let u = rng.gen_range(d.u[0]..=d.u[1]);
                let v = if v1 > v0 { rng.gen_range(v0..=v1) } else { v0 };
                (idx, patch.embed(u, v))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle serializes")
    }
}

fn full_conormal(theta: [f64; 2], orientation: i8) -> CyclePatch {
    CyclePatch::new(
        "real-line-conormal",
        PatchShape::RealLineConormal,
        ParamBox::new(theta, [f64::NEG_INFINITY, f64::INFINITY]),
        orientation,
    )
}

/// The conormal bundle of the real circle; one patch in `(theta, s)`.
pub fn principal_cycle() -> ParametrizedCycle {
    ParametrizedCycle::new(
        "principal",
        vec![full_conormal([0.0, 2.0 * PI], ZERO_SECTION_ORIENTATION)],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hemisphere {
    /// `Im z > 0`.
    West,
    /// `Im z < 0`.
    East,
}

/// Zero section over a hemisphere plus the outward half of the conormal to its boundary.
pub fn discrete_cycle(hemisphere: Hemisphere) -> ParametrizedCycle {
    let (phi, s) = match hemisphere {
        Hemisphere::West => ([-PI, 0.0], [0.0, f64::INFINITY]),
        Hemisphere::East => ([0.0, PI], [f64::NEG_INFINITY, 0.0]),
    };
    ParametrizedCycle::new(
        match hemisphere {
            Hemisphere::West => "discrete-west",
            Hemisphere::East => "discrete-east",
        },
        vec![
            CyclePatch::new(
                "hemisphere",
                PatchShape::ZeroSection,
                ParamBox::new([0.0, PI], phi),
                ZERO_SECTION_ORIENTATION,
            ),
            CyclePatch::new(
                "outward-conormal",
                PatchShape::RealLineConormal,
                ParamBox::new([0.0, 2.0 * PI], s),
                -ZERO_SECTION_ORIENTATION,
            ),
        ],
    )
}

/// The full zero section.
pub fn zero_section_cycle() -> ParametrizedCycle {
    ParametrizedCycle::new(
        "zero-section",
        vec![CyclePatch::new(
            "sphere",
            PatchShape::ZeroSection,
            ParamBox::new([0.0, PI], [-PI, PI]),
            ZERO_SECTION_ORIENTATION,
        )],
    )
}

/// The full cotangent fiber over `x` with multiplicity `m`; parameters `(psi, s)`.
pub fn fiber_cycle(x: &FlagPoint, m: i32) -> ParametrizedCycle {
    if m == 0 {
        return ParametrizedCycle::new("fiber", Vec::new());
    }
    let chart = x.preferred_chart();
    let coord = x.chart_coord(chart).expect("preferred chart");
    let mut patch = fiber_sector(chart, coord, [0.0, 2.0 * PI], FIBER_ORIENTATION);
    patch.tag = "fiber".into();
    patch.multiplicity = m;
    ParametrizedCycle::new("fiber", vec![patch])
}

fn fiber_sector(chart: Chart, coord: C64, psi: [f64; 2], orientation: i8) -> CyclePatch {
    CyclePatch::new(
        "fiber-sector",
        PatchShape::FiberSector { chart, coord },
        ParamBox::new(psi, [0.0, f64::INFINITY]),
        orientation,
    )
}

/// Colatitude (from `S`) of the boundary of the latitude set `U_t`, for `t` in degrees.
pub fn latitude_colatitude(t_lat_deg: f64) -> f64 {
    FRAC_PI_2 + t_lat_deg.to_radians()
}

/// Radius `|w|` of the boundary of `U_t` in the chart around `S`.
pub fn latitude_radius(t_lat_deg: f64) -> f64 {
    (0.5 * latitude_colatitude(t_lat_deg)).tan()
}

/// The discrete cycle with its support clipped to `U_t`; equals [`discrete_cycle`] at 90 degrees.
///
/// The boundary of `H` intersected with `U_t` is the real segment `|w| <= r_t` and the lower
/// half of the circle `|w| = r_t`; the two corners at `w = +-r_t` carry quarter-plane cones.
pub fn deformed_discrete_cycle(t_lat_deg: f64) -> ParametrizedCycle {
    assert!(
        t_lat_deg > -90.0 && t_lat_deg <= 90.0,
        "latitude must lie in (-90, 90]"
    );
    if t_lat_deg >= 90.0 {
        return discrete_cycle(Hemisphere::West);
    }
    let beta = latitude_colatitude(t_lat_deg);
    let r = latitude_radius(t_lat_deg);
    let o = ZERO_SECTION_ORIENTATION;
    let mut corner_east = fiber_sector(Chart::W, C64::new(r, 0.0), [-FRAC_PI_2, 0.0], o);
    corner_east.tag = "corner-east".into();
    let mut corner_west = fiber_sector(Chart::W, C64::new(-r, 0.0), [-PI, -FRAC_PI_2], o);
    corner_west.tag = "corner-west".into();
    let mut name = format!("discrete-deformed-{t_lat_deg}");
    name.retain(|c| c != ' ');
    ParametrizedCycle::new(
        &name,
        vec![
            CyclePatch::new(
                "hemisphere-cap",
                PatchShape::ZeroSection,
                ParamBox::new([0.0, beta], [-PI, 0.0]),
                o,
            ),
            CyclePatch::new(
                "outward-conormal",
                PatchShape::RealLineConormal,
                ParamBox::new([PI - beta, PI + beta], [0.0, f64::INFINITY]),
                -o,
            ),
            CyclePatch::new(
                "latitude-conormal",
                PatchShape::LatitudeConormal { beta },
                ParamBox::new([-PI, 0.0], [0.0, f64::INFINITY]),
                -o,
            ),
            corner_east,
            corner_west,
        ],
    )
}

/// The principal cycle rewritten as the fiber over `N` plus the conormal of `S^1` clipped
/// to `U_t` with outward half-planes at the two boundary points; equals
/// [`principal_cycle`] at 90 degrees.
pub fn deformed_principal_cycle(t_lat_deg: f64) -> ParametrizedCycle {
    assert!(
        t_lat_deg > -90.0 && t_lat_deg <= 90.0,
        "latitude must lie in (-90, 90]"
    );
    if t_lat_deg >= 90.0 {
        return principal_cycle();
    }
    let beta = latitude_colatitude(t_lat_deg);
    let r = latitude_radius(t_lat_deg);
    let o = ZERO_SECTION_ORIENTATION;
    let mut north = fiber_sector(Chart::Z, ZERO, [0.0, 2.0 * PI], o);
    north.tag = "fiber-north".into();
    let mut east = fiber_sector(Chart::W, C64::new(r, 0.0), [-FRAC_PI_2, FRAC_PI_2], -o);
    east.tag = "half-plane-east".into();
    let mut west = fiber_sector(Chart::W, C64::new(-r, 0.0), [FRAC_PI_2, 1.5 * PI], -o);
    west.tag = "half-plane-west".into();
    let mut conormal = full_conormal([PI - beta, PI + beta], o);
    conormal.tag = "clipped-conormal".into();
    ParametrizedCycle::new(
        &format!("principal-deformed-{t_lat_deg}"),
        vec![north, conormal, east, west],
    )
}

/// The hyperbolic element `diag(-s, s)`, for which `S` is attracting and `N` repelling.
pub fn adapted_hyperbolic(s: f64) -> Sl2Element {
    Sl2Element::new(-s, 0.0, 0.0)
}

/// Largest `Re <g, mu(p)>` over the given points.
pub fn certificate_max(g: &Sl2Element, points: &[(usize, CotangentPoint)]) -> f64 {
    points
        .iter()
        .map(|(_, p)| moment(p).eval(g).re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Holomorphic charts centered at the fixed points of a regular semisimple `g`:
/// chart `k` is `z |-> [v_k + z v_{k'}]`, in which `VF_g = alpha_k z d/dz` exactly.
#[derive(Debug, Clone)]
pub struct AdaptedAtlas {
    pub vectors: [[C64; 2]; 2],
    pub alpha: [C64; 2],
}

impl AdaptedAtlas {
    pub fn new(g: &Sl2Element) -> Result<Self> {
        let sd = spectral_data(g)?;
        Ok(AdaptedAtlas {
            vectors: [sd.fixed_points[0].vector(), sd.fixed_points[1].vector()],
            alpha: sd.alpha,
        })
    }

    /// Index of the fixed point closest to `x` in the Fubini–Study metric.
    pub fn nearest(&self, x: &FlagPoint) -> usize {
        let d0 = x.chordal_distance(&FlagPoint::new(self.vectors[0]));
        let d1 = x.chordal_distance(&FlagPoint::new(self.vectors[1]));
        if d0 <= d1 {
            0
        } else {
            1
        }
    }

    fn frame(&self, k: usize) -> Mat2 {
        let (a, b) = (self.vectors[k], self.vectors[1 - k]);
        [[a[0], b[0]], [a[1], b[1]]]
    }

    /// Coordinates `(z_k, xi_k)` of `p` in chart `k`; `None` when the base is `x_{k'}`.
    pub fn to_chart(&self, k: usize, p: &CotangentPoint) -> Option<(C64, C64)> {
        let (v, dv) = match p.chart {
            Chart::Z => ([ONE, p.z], [ZERO, ONE]),
            Chart::W => ([p.z, ONE], [ONE, ZERO]),
        };
        let inv = mat_inv(&self.frame(k));
        let ab = mat_apply(&inv, &v);
        let dab = mat_apply(&inv, &dv);
        if ab[0].norm() <= 1e-300 {
            return None;
        }
        let z = ab[1] / ab[0];
        let dz = (dab[1] * ab[0] - ab[1] * dab[0]) / (ab[0] * ab[0]);
        Some((z, p.xi / dz))
    }

    /// The point with coordinates `(z, xi)` in chart `k`, in its preferred standard chart.
    pub fn from_chart(&self, k: usize, z: C64, xi: C64) -> CotangentPoint {
        let (a, b) = (self.vectors[k], self.vectors[1 - k]);
        let v = [a[0] + b[0] * z, a[1] + b[1] * z];
        let dv = b;
        if v[0].norm() >= v[1].norm() {
            let d = (dv[1] * v[0] - v[1] * dv[0]) / (v[0] * v[0]);
            CotangentPoint::new(Chart::Z, v[1] / v[0], xi / d)
        } else {
            let d = (dv[0] * v[1] - v[0] * dv[1]) / (v[1] * v[1]);
            CotangentPoint::new(Chart::W, v[0] / v[1], xi / d)
        }
    }

    fn shift(&self, k: usize, t: f64) -> C64 {
        self.alpha[k].conj() / self.alpha[k].norm() * t
    }

    /// The fiber map at `x_k` on all of `T*CP^1`: `(z, xi) |-> (z - tau conj(xi), xi)` near `x_k`,
    /// written in the opposite chart (`w = 1/z`, `eta = -z^2 xi`) away from it.
    pub fn theta_k(&self, k: usize, t: f64, p: &CotangentPoint) -> CotangentPoint {
        let tau = self.shift(k, t);
        match self.to_chart(k, p) {
            Some((z, xi)) if z.norm() <= 1.0 => self.from_chart(k, z - tau * xi.conj(), xi),
            _ => {
                let (w, eta) = self
                    .to_chart(1 - k, p)
                    .expect("one of the two adapted charts contains every point");
                let q = ONE + tau * w * w.conj() * w.conj() * eta.conj();
                self.from_chart(1 - k, w / q, eta * q * q)
            }
        }
    }
}

/// Applies the fiber map in the adapted chart of the fixed point nearest to the base of `p`.
pub fn theta_map(g: &Sl2Element, t: f64, p: &CotangentPoint) -> Result<CotangentPoint> {
    let atlas = AdaptedAtlas::new(g)?;
    Ok(theta_map_with(&atlas, t, p))
}

pub fn theta_map_with(atlas: &AdaptedAtlas, t: f64, p: &CotangentPoint) -> CotangentPoint {
    if t == 0.0 {
        return *p;
    }
    let k = atlas.nearest(&p.base());
    let (z, xi) = atlas.to_chart(k, p).expect("nearest chart contains the point");
    let tau = atlas.shift(k, t);
    atlas.from_chart(k, z - tau * xi.conj(), xi)
}

/// The smooth global deformation `Theta^(1)_t o Theta^(0)_t`, each factor being the fiber map
/// of one fixed point extended to the whole bundle.
///
/// Each factor lowers `Re <g, mu>` by `t |alpha_k| |xi_k|^2`, so the deformed integrand
/// decays like a Gaussian along conormal directions.
#[derive(Debug, Clone)]
pub struct DeformationMap {
    pub atlas: AdaptedAtlas,
    pub t: f64,
}

impl DeformationMap {
    pub fn new(g: &Sl2Element, t: f64) -> Result<Self> {
        Ok(DeformationMap {
            atlas: AdaptedAtlas::new(g)?,
            t,
        })
    }

    pub fn apply(&self, p: &CotangentPoint) -> CotangentPoint {
        let q = self.atlas.theta_k(0, self.t, p);
        self.atlas.theta_k(1, self.t, &q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn conic_patches_have_unit_radial_scale() {
        let patches = [
            CyclePatch::new("a", PatchShape::RealLineConormal, ParamBox::new([0.0, 1.0], [0.0, 1.0]), 1),
            CyclePatch::new(
                "b",
                PatchShape::LatitudeConormal { beta: 2.3 },
                ParamBox::new([0.0, 1.0], [0.0, 1.0]),
                1,
            ),
            CyclePatch::new(
                "c",
                PatchShape::LatitudeConormal { beta: 0.4 },
                ParamBox::new([0.0, 1.0], [0.0, 1.0]),
                1,
            ),
            CyclePatch::new(
                "d",
                PatchShape::FiberSector { chart: Chart::W, coord: c(0.3, -2.0) },
                ParamBox::new([0.0, 1.0], [0.0, 1.0]),
                1,
            ),
        ];
        for p in &patches {
            for (u, v) in [(0.3, 2.0), (2.9, -1.5), (5.0, 7.0)] {
                let q = p.embed(u, v);
                assert!((q.fiber_norm() - v.abs()).abs() < 1e-12, "{}: {}", p.tag, q.fiber_norm());
            }
        }
    }

    #[test]
    fn real_line_conormal_is_conormal() {
        let p = principal_cycle();
        let patch = &p.patches[0];
        for k in 0..50 {
            let theta = 2.0 * PI * k as f64 / 50.0 + 0.01;
            let q = patch.embed(theta, 1.7);
            let z = q.base().chart_coord(Chart::Z);
            if let Ok(z) = z {
                assert!(z.im.abs() < 1e-12);
            }
            for g in [Sl2Element::H, Sl2Element::E, Sl2Element::new(0.3, -1.0, 2.0)] {
                assert!(moment(&q).eval(&g).re.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn discrete_outward_conormal_points_out_of_the_west() {
        // at w = 0 (theta = pi), the outward direction of {Im w < 0} is +Im w, so the real
        // covector must be positive on d/d(Im w): Re(eta * i) > 0
        let cyc = discrete_cycle(Hemisphere::West);
        let q = cyc.patches[1].embed(PI, 1.0).in_chart(Chart::W).unwrap();
        assert!(q.z.norm() < 1e-12);
        assert!((q.xi * I).re > 0.0);
    }

    #[test]
    fn deformed_families_reach_their_endpoints() {
        assert_eq!(deformed_discrete_cycle(90.0), discrete_cycle(Hemisphere::West));
        assert_eq!(deformed_principal_cycle(90.0), principal_cycle());
        let d = deformed_discrete_cycle(-89.999);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (_, p) in d.sample_points(500, 5.0, &mut rng) {
            let dist = p.base().chordal_distance(&FlagPoint::south());
            assert!(dist < 1e-4, "{dist}");
        }
    }

    #[test]
    fn certificate_on_deformed_families() {
        let g = adapted_hyperbolic(1.3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in [89.0, 45.0, 0.0, -45.0, -89.0] {
            for cyc in [deformed_discrete_cycle(t), deformed_principal_cycle(t)] {
                let pts = cyc.sample_points(2000, 50.0, &mut rng);
                assert!(certificate_max(&g, &pts) <= 1e-12);
            }
        }
    }

    #[test]
    fn theta_map_example() {
        let g = Sl2Element::H;
        let p = CotangentPoint::new(Chart::W, ZERO, ONE);
        let q = theta_map(&g, 1.0, &p).unwrap().in_chart(Chart::W).unwrap();
        assert!((q.z - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((q.xi - ONE).norm() < 1e-14);
        let p = CotangentPoint::new(Chart::Z, c(0.2, 0.1), c(0.5, -1.0));
        assert_eq!(theta_map(&g, 0.0, &p).unwrap(), p);
        let zero = CotangentPoint::new(Chart::Z, c(0.2, 0.1), ZERO);
        let q = theta_map(&g, 0.7, &zero).unwrap();
        assert!(q.base().projective_eq(&zero.base(), 1e-14));
        assert!(q.xi.norm() < 1e-14);
    }

    #[test]
    fn adapted_chart_linearizes_the_flow() {
        let g = Sl2Element::new(0.4, 1.1, 0.8);
        let atlas = AdaptedAtlas::new(&g).unwrap();
        for k in 0..2 {
            for z in [c(0.1, 0.2), c(-0.5, 0.3)] {
                let p = atlas.from_chart(k, z, ONE);
                let lhs = moment(&p).eval(&g);
                assert!((lhs - atlas.alpha[k] * z).norm() < 1e-12);
                let (z2, xi2) = atlas.to_chart(k, &p).unwrap();
                assert!((z2 - z).norm() < 1e-12 && (xi2 - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn global_factors_lower_the_real_part() {
        let g = Sl2Element::new(0.9, 0.3, -0.2);
        let atlas = AdaptedAtlas::new(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = CotangentPoint::new(
                Chart::Z,
                c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            );
            for k in 0..2 {
                let (_, xi) = atlas.to_chart(k, &p).unwrap();
                let q = atlas.theta_k(k, 0.3, &p);
                let drop = moment(&p).eval(&g).re - moment(&q).eval(&g).re;
                let expect = 0.3 * atlas.alpha[k].norm() * xi.norm_sqr();
                assert!((drop - expect).abs() < 1e-9 * (1.0 + expect), "{drop} {expect}");
            }
        }
    }

    #[test]
    fn cycle_serializes() {
        let json = deformed_discrete_cycle(10.0).to_json();
        let back: ParametrizedCycle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, deformed_discrete_cycle(10.0));
    }
}

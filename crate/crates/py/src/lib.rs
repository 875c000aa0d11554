use charloc::characters::{self, CycleQuadrature, DeformedQuadrature, MultiplicityRule};
use charloc::cycles::{self, Hemisphere, ParametrizedCycle};
use charloc::harness::{self, ExperimentConfig};
use charloc::{flag, lie, Chart, CotangentPoint, CovectorValue, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn covector(z: &CovectorValue) -> (Complex64, Complex64, Complex64) {
    (z.h, z.e, z.f)
}

fn chart(index: u8) -> PyResult<Chart> {
    Chart::from_index(index).ok_or_else(|| PyValueError::new_err("chart must be 1 or 2"))
}

/// `aH + bE + cF` in sl(2,R).
#[pyclass(name = "Sl2Element", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySl2Element(lie::Sl2Element);

#[pymethods]
impl PySl2Element {
    #[new]
    fn new(a: f64, b: f64, c: f64) -> Self {
        PySl2Element(lie::Sl2Element::new(a, b, c))
    }

    #[getter]
    fn coords(&self) -> (f64, f64, f64) {
        (self.0.a, self.0.b, self.0.c)
    }

    fn discriminant(&self) -> f64 {
        self.0.discriminant()
    }

    fn classify(&self) -> &'static str {
        match self.0.classify() {
            lie::RegularityClass::Hyperbolic => "hyperbolic",
            lie::RegularityClass::Elliptic => "elliptic",
            lie::RegularityClass::Nilpotent => "nilpotent",
            lie::RegularityClass::Zero => "zero",
        }
    }

    /// `(fixed points as chart-1 coordinates or None, alpha values, stable index)`.
    fn spectral_data(&self) -> PyResult<(Vec<Option<Complex64>>, Vec<Complex64>, Option<usize>)> {
        let sd = lie::spectral_data(&self.0).map_err(py_err)?;
        let points = sd
            .fixed_points
            .iter()
            .map(|x| x.chart_coord(Chart::Z).ok())
            .collect();
        Ok((points, sd.alpha.to_vec(), sd.stable_index))
    }

    fn __repr__(&self) -> String {
        format!("Sl2Element({}, {}, {})", self.0.a, self.0.b, self.0.c)
    }
}

/// A bump `phi(x) = exp(-1 / (1 - |x - center|^2 / radius^2))`.
#[pyclass(name = "TestFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTestFunction(characters::TestFunction);

#[pymethods]
impl PyTestFunction {
    #[new]
    fn new(center: [f64; 3], radius: f64) -> PyResult<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(PyValueError::new_err("radius must be positive"));
        }
        Ok(PyTestFunction(characters::TestFunction::bump(center, radius)))
    }

    fn __call__(&self, x: [f64; 3]) -> f64 {
        self.0.value(x)
    }

    /// `int phi(g) e^{<g, zeta>} dg` for a covector `(h, e, f)`.
    fn fourier(&self, zeta: (Complex64, Complex64, Complex64)) -> Complex64 {
        characters::fourier(&self.0, &CovectorValue::new(zeta.0, zeta.1, zeta.2))
    }

    fn __repr__(&self) -> String {
        format!("TestFunction({:?}, {})", self.0.center, self.0.radius)
    }
}

/// A parametrized conic Lagrangian cycle in `T*CP^1`.
#[pyclass(name = "Cycle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCycle(ParametrizedCycle);

#[pymethods]
impl PyCycle {
    #[staticmethod]
    fn principal() -> Self {
        PyCycle(cycles::principal_cycle())
    }

    #[staticmethod]
    #[pyo3(signature = (hemisphere = "west"))]
    fn discrete(hemisphere: &str) -> PyResult<Self> {
        let h = match hemisphere {
            "west" => Hemisphere::West,
            "east" => Hemisphere::East,
            _ => return Err(PyValueError::new_err("hemisphere must be 'west' or 'east'")),
        };
        Ok(PyCycle(cycles::discrete_cycle(h)))
    }

    #[staticmethod]
    fn zero_section() -> Self {
        PyCycle(cycles::zero_section_cycle())
    }

    #[staticmethod]
    fn deformed_discrete(t_lat_deg: f64) -> Self {
        PyCycle(cycles::deformed_discrete_cycle(t_lat_deg))
    }

    #[staticmethod]
    fn deformed_principal(t_lat_deg: f64) -> Self {
        PyCycle(cycles::deformed_principal_cycle(t_lat_deg))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn patch_count(&self) -> usize {
        self.0.patches.len()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Largest `Re <g, mu>` over `n` seeded sample points with fiber norm at most `radial_max`.
    #[pyo3(signature = (g, n = 10000, radial_max = 50.0, seed = 0))]
    fn certificate_max(&self, g: &PySl2Element, n: usize, radial_max: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = self.0.sample_points(n, radial_max, &mut rng);
        cycles::certificate_max(&g.0, &points)
    }

    fn __repr__(&self) -> String {
        format!("Cycle({:?}, {} patches)", self.0.name, self.0.patches.len())
    }
}

/// Result of a pairing.
#[pyclass(name = "PairingReport", frozen, get_all)]
struct PyPairingReport {
    value: Complex64,
    quadrature_degree: usize,
    cutoff_r: Option<f64>,
    theta_t: Option<f64>,
    tail_estimate: f64,
    points: usize,
}

impl From<characters::PairingReport> for PyPairingReport {
    fn from(r: characters::PairingReport) -> Self {
        PyPairingReport {
            value: r.value,
            quadrature_degree: r.quadrature_degree,
            cutoff_r: r.cutoff_r,
            theta_t: r.theta_t,
            tail_estimate: r.tail_estimate,
            points: r.points,
        }
    }
}

#[pymethods]
impl PyPairingReport {
    fn __repr__(&self) -> String {
        format!("PairingReport(value={}, points={})", self.value, self.points)
    }
}

fn rule(m: (i32, i32, i32, i32)) -> MultiplicityRule {
    MultiplicityRule {
        attracting: m.0,
        repelling: m.1,
        elliptic_upper: m.2,
        elliptic_lower: m.3,
    }
}

/// The moment map at `xi dz` over `z` in `chart` (1 or 2), as `(h, e, f)`.
#[pyfunction]
#[pyo3(signature = (z, xi, chart_index = 1))]
fn moment(z: Complex64, xi: Complex64, chart_index: u8) -> PyResult<(Complex64, Complex64, Complex64)> {
    let p = CotangentPoint::new(chart(chart_index)?, z, xi);
    Ok(covector(&flag::moment(&p)))
}

/// The twisted moment map `mu + lambda_x` for the weight with value `lambda_h` on `H`.
#[pyfunction]
#[pyo3(signature = (z, xi, lambda_h, chart_index = 1))]
fn twisted_moment(
    z: Complex64,
    xi: Complex64,
    lambda_h: Complex64,
    chart_index: u8,
) -> PyResult<(Complex64, Complex64, Complex64)> {
    let p = CotangentPoint::new(chart(chart_index)?, z, xi);
    Ok(covector(&flag::twisted_moment(&p, &flag::Weight::new(lambda_h))))
}

/// `sum_k m_k e^{<g, lambda_{x_k}>} / alpha_k(g)`; multiplicities are
/// `(attracting, repelling, elliptic_upper, elliptic_lower)`.
#[pyfunction]
#[pyo3(signature = (g, lambda_h, multiplicities = (1, 1, 1, 1)))]
fn fixed_point_density(
    g: &PySl2Element,
    lambda_h: Complex64,
    multiplicities: (i32, i32, i32, i32),
) -> PyResult<Complex64> {
    characters::fixed_point_density(&g.0, &flag::Weight::new(lambda_h), &rule(multiplicities))
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (lambda_h, phi, multiplicities = (1, 1, 1, 1)))]
fn fixed_point_pairing(
    py: Python<'_>,
    lambda_h: Complex64,
    phi: &PyTestFunction,
    multiplicities: (i32, i32, i32, i32),
) -> PyPairingReport {
    let lam = flag::Weight::new(lambda_h);
    let opts = characters::FixedPointOptions::default();
    py.detach(|| characters::fixed_point_pairing(&lam, &rule(multiplicities), &phi.0, &opts))
        .into()
}

/// `(1/2 pi i) int_{cycle, ||zeta|| <= R} phi_hat(mu_lambda) mu_lambda^* sigma_lambda`.
#[pyfunction]
#[pyo3(signature = (cycle, lambda_h, phi, r, degree = 16))]
fn cycle_pairing(
    py: Python<'_>,
    cycle: &PyCycle,
    lambda_h: Complex64,
    phi: &PyTestFunction,
    r: f64,
    degree: usize,
) -> PyResult<PyPairingReport> {
    let lam = flag::Weight::new(lambda_h);
    let opts = CycleQuadrature {
        degree,
        ..CycleQuadrature::default()
    };
    py.detach(|| characters::cycle_pairing(&cycle.0, &lam, &phi.0, r, &opts))
        .map(Into::into)
        .map_err(py_err)
}

/// The pairing with the integrand pulled back through the deformation at parameter `t`.
#[pyfunction]
fn deformed_cycle_pairing(
    py: Python<'_>,
    cycle: &PyCycle,
    lambda_h: Complex64,
    phi: &PyTestFunction,
    t: f64,
    r: f64,
) -> PyResult<PyPairingReport> {
    let lam = flag::Weight::new(lambda_h);
    let opts = DeformedQuadrature::default();
    py.detach(|| characters::deformed_cycle_pairing(&cycle.0, &lam, &phi.0, t, r, &opts))
        .map(Into::into)
        .map_err(py_err)
}

/// `(numerical value, 2 pi i e^{<g, lambda_{x_k}>} / alpha_k(g) phi(g))`.
#[pyfunction]
fn gaussian_fiber_limit(
    g: &PySl2Element,
    k: usize,
    lambda_h: Complex64,
    phi: &PyTestFunction,
    t: f64,
    r: f64,
) -> PyResult<(Complex64, Complex64)> {
    if k > 1 {
        return Err(PyValueError::new_err("k must be 0 or 1"));
    }
    let lam = flag::Weight::new(lambda_h);
    let v = characters::gaussian_fiber_limit(&g.0, k, &lam, &phi.0, t, r).map_err(py_err)?;
    let target = characters::gaussian_fiber_target(&g.0, k, &lam, &phi.0).map_err(py_err)?;
    Ok((v, target))
}

#[pyfunction]
fn weyl_character_su2(n: u32, theta: f64) -> f64 {
    characters::weyl_character_su2(n, theta)
}

#[pyfunction]
fn kirillov_pairing_su2(n: u32, phi: &PyTestFunction) -> Complex64 {
    characters::kirillov_pairing_su2(n, &phi.0)
}

#[pyfunction]
#[pyo3(signature = (n, phi, degree = 24))]
fn weyl_side_pairing(n: u32, phi: &PyTestFunction, degree: usize) -> f64 {
    characters::weyl_side_pairing(n, &phi.0, degree)
}

#[pyfunction]
#[pyo3(signature = (speed, height_scale = 1.0))]
fn dh_localization_check(speed: f64, height_scale: f64) -> (Complex64, Complex64) {
    characters::dh_localization_check(speed, height_scale)
}

/// Runs an experiment config (JSON text) and returns the rows as JSON text.
#[pyfunction]
fn run_experiment(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let config = ExperimentConfig::from_json(config_json).map_err(py_err)?;
    let rows = py.detach(|| harness::run(&config)).map_err(py_err)?;
    Ok(harness::to_json(&rows))
}

#[pymodule]
pub fn charloc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySl2Element>()?;
    m.add_class::<PyTestFunction>()?;
    m.add_class::<PyCycle>()?;
    m.add_class::<PyPairingReport>()?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_moment, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_point_density, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_point_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(deformed_cycle_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_fiber_limit, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_character_su2, m)?)?;
    m.add_function(wrap_pyfunction!(kirillov_pairing_su2, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_side_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(dh_localization_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}

//! Python module `warped_cas`: generate, evaluate, classify and verify
//! constant angle surfaces. Structured results come back as plain dicts
//! with the same keys as the CLI's JSON output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyList, PyString, PyTuple};
use serde::Serialize;
use serde_json::Value;

use warped_cas::config::{CoordinateModel, Settings};
use warped_cas::generators::{self, classify, ClassifyOptions};
use warped_cas::surface::{to_half_space as half_space, Grid, Immersion, ParamDomain};
use warped_cas::verify::{self, Subject, Suite};
use warped_cas::warped_space::{AmbientPoint, WarpedSpace, WarpingFunction};
use warped_cas::GeometryError;

fn err(e: GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => PyInt::new(py, i).into_any(),
            None => PyFloat::new(py, n.as_f64().unwrap_or(f64::NAN)).into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if obj.is_none() {
        Ok(Value::Null)
    } else if let Ok(b) = obj.cast::<PyBool>() {
        Ok(Value::Bool(b.is_true()))
    } else if let Ok(i) = obj.extract::<i64>() {
        Ok(Value::from(i))
    } else if let Ok(x) = obj.extract::<f64>() {
        Ok(Value::from(x))
    } else if let Ok(s) = obj.extract::<String>() {
        Ok(Value::String(s))
    } else if let Ok(items) = obj.extract::<Vec<Bound<'_, PyAny>>>() {
        items
            .iter()
            .map(from_py)
            .collect::<PyResult<Vec<_>>>()
            .map(Value::Array)
    } else {
        Err(PyValueError::new_err(format!("unsupported setting value {obj}")))
    }
}

fn dumps<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn settings(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Settings> {
    let mut map = serde_json::Map::new();
    if let Some(kw) = kwargs {
        for (k, v) in kw.iter() {
            map.insert(k.extract::<String>()?, from_py(&v)?);
        }
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| PyValueError::new_err(format!("settings: {e}")))
}

fn grid(n: usize) -> PyResult<Grid> {
    Grid::square(n).map_err(err)
}

/// An immersed surface in `I x_f E^2`, optionally with the generator spec
/// that produced it.
#[pyclass(name = "Surface", module = "warped_cas", frozen)]
struct PySurface {
    subject: Subject,
}

impl PySurface {
    fn s(&self) -> &Immersion {
        &self.subject.immersion
    }
}

#[pymethods]
impl PySurface {
    /// Builds a generator surface from config-file keys, e.g.
    /// `Surface.generate(family="type_i", warping="exp", theta_deg=45, alpha="0.3*sin(v)")`.
    #[staticmethod]
    #[pyo3(signature = (**kwargs))]
    fn generate(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let spec = settings(kwargs)?.generator_spec().map_err(err)?;
        Ok(Self {
            subject: Subject::from_spec(&spec).map_err(err)?,
        })
    }

    /// Surface given by `"(t, x, y)"` expressions in `u` and `v`.
    #[staticmethod]
    #[pyo3(signature = (expression, warping = "exp", domain = (-1.0, 1.0, -1.0, 1.0), constants = None))]
    fn from_expression(
        expression: &str,
        warping: &str,
        domain: (f64, f64, f64, f64),
        constants: Option<Vec<(String, f64)>>,
    ) -> PyResult<Self> {
        let space = WarpedSpace::new(WarpingFunction::from_registry(warping).map_err(err)?);
        let d = ParamDomain::new(domain.0, domain.1, domain.2, domain.3).map_err(err)?;
        let consts = constants.unwrap_or_default();
        let named: Vec<(&str, f64)> = consts.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let s = Immersion::from_expression(space, d, expression, &named).map_err(err)?;
        Ok(Self {
            subject: Subject::from_immersion(s),
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.s().label().to_string()
    }

    #[getter]
    fn warping(&self) -> String {
        self.s().space().warping().name().to_string()
    }

    /// `(u0, u1, v0, v1)`
    #[getter]
    fn domain(&self) -> (f64, f64, f64, f64) {
        let d = self.s().domain();
        (d.u0, d.u1, d.v0, d.v1)
    }

    /// The same surface with finite-difference derivatives.
    fn finite_difference(&self) -> Self {
        Self {
            subject: Subject {
                immersion: self.s().finite_difference(),
                spec: self.subject.spec.clone(),
            },
        }
    }

    /// `(t, x, y)`
    fn point(&self, u: f64, v: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.s().point(u, v).map_err(err)?;
        Ok((p.t, p.x, p.y))
    }

    fn angle(&self, u: f64, v: f64) -> PyResult<f64> {
        self.s().angle(u, v).map_err(err)
    }

    fn unit_normal(&self, u: f64, v: f64) -> PyResult<(f64, f64, f64)> {
        let n = self.s().unit_normal(u, v).map_err(err)?;
        Ok((n.dt, n.dx, n.dy))
    }

    fn first_fundamental_form(&self, u: f64, v: f64) -> PyResult<[[f64; 2]; 2]> {
        self.s().first_fundamental_form(u, v).map_err(err)
    }

    fn shape_operator(&self, u: f64, v: f64) -> PyResult<[[f64; 2]; 2]> {
        self.s().shape_operator(u, v).map_err(err)
    }

    /// Gauss curvature of the induced metric.
    fn gauss_curvature(&self, u: f64, v: f64) -> PyResult<f64> {
        self.s().gauss_curvature_intrinsic(u, v).map_err(err)
    }

    /// `(Delta h, 2 cos(theta) H + (log f)' (1 + cos^2 theta))`
    fn laplacian_height(&self, u: f64, v: f64) -> PyResult<(f64, f64)> {
        self.s().laplacian_height(u, v).map_err(err)
    }

    /// Pointwise geometry report as a dict.
    fn geometry<'py>(&self, py: Python<'py>, u: f64, v: f64) -> PyResult<Bound<'py, PyAny>> {
        dumps(py, &self.s().geometry(u, v).map_err(err)?)
    }

    #[pyo3(signature = (grid = 64, sampled = false))]
    fn classify<'py>(&self, py: Python<'py>, grid: usize, sampled: bool) -> PyResult<Bound<'py, PyAny>> {
        let mut opts = if sampled {
            ClassifyOptions::sampled()
        } else {
            ClassifyOptions::default()
        };
        if let Some(spec) = &self.subject.spec {
            opts.t_base = Some(spec.t_base().map_err(err)?);
        }
        let g = self::grid(grid)?;
        dumps(py, &classify(self.s(), g, &opts).map_err(err)?)
    }

    /// Runs a suite (or `"all"`) and returns `{"pass": ..., "reports": [...]}`.
    #[pyo3(signature = (suite = "all", grid = 64))]
    fn verify<'py>(&self, py: Python<'py>, suite: &str, grid: usize) -> PyResult<Bound<'py, PyAny>> {
        let suites: Vec<Suite> = Suite::resolve(suite, &self.subject).map_err(err)?;
        let reports =
            verify::run_suites(&suites, &self.subject, self::grid(grid)?, &Default::default()).map_err(err)?;
        let pass = reports.iter().all(|r| r.pass);
        dumps(py, &serde_json::json!({ "pass": pass, "reports": reports }))
    }

    /// `(vertices, triangles)` of the triangulated grid.
    #[pyo3(signature = (grid = 64, model = "raw"))]
    fn mesh<'py>(&self, py: Python<'py>, grid: usize, model: &str) -> PyResult<Bound<'py, PyTuple>> {
        let model: CoordinateModel = model.parse().map_err(err)?;
        let mesh = warped_cas::export::build_mesh(self.s(), self::grid(grid)?, model).map_err(err)?;
        (mesh.vertices, mesh.triangles).into_pyobject(py)
    }

    fn __repr__(&self) -> String {
        let d = self.s().domain();
        format!(
            "Surface({}, warping={}, domain=[{}, {}]x[{}, {}])",
            self.s().label(),
            self.s().space().warping().name(),
            d.u0,
            d.u1,
            d.v0,
            d.v1
        )
    }
}

/// `arccos(sqrt((1 - m) / (1 + m)))`, the angle of the minimal surface in `f = t^m`.
#[pyfunction]
fn minimal_theta(m: f64) -> PyResult<f64> {
    generators::minimal_theta(m).map_err(err)
}

/// `sin^2(theta) / (1 + cos^2(theta))`
#[pyfunction]
fn minimal_exponent(theta: f64) -> f64 {
    generators::minimal_exponent(theta)
}

/// `(x, y, e^{-t})`
#[pyfunction]
fn to_half_space(t: f64, x: f64, y: f64) -> PyResult<(f64, f64, f64)> {
    let [a, b, c] = half_space(&WarpedSpace::new(WarpingFunction::exp()), &AmbientPoint::new(t, x, y)).map_err(err)?;
    Ok((a, b, c))
}

/// Names accepted by `Surface.verify`.
#[pyfunction]
fn suites() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.as_str()).collect()
}

#[pymodule]
#[pyo3(name = "warped_cas")]
fn warped_cas_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(minimal_theta, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(to_half_space, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    Ok(())
}

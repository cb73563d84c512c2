//! Python bindings. Structured results cross the boundary as plain dicts and lists
//! built from the same JSON the command line prints.

use std::str::FromStr;

use lenscross::bisection::verify_bisection;
use lenscross::bounds::default_c_param;
use lenscross::generators::{
    gen_convex_complete, gen_nested_lenses, gen_random_separated, gen_semicircle,
    gen_star_thrackle, DEFAULT_SEGMENTS_PER_ARC,
};
use lenscross::svg::{render_svg, RenderOptions};
use lenscross::{Point, Rational, Segment};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::Serialize;

create_exception!(lenscross, LensCrossError, PyValueError);

fn to_py(e: lenscross::Error) -> PyErr {
    LensCrossError::new_err(format!("{}: {e}", e.kind()))
}

fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (text,))?.unbind())
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = value.extract::<i64>() {
        return Ok(Rational::from(i));
    }
    let s = value.str()?;
    Rational::from_str(s.to_str()?).map_err(|e| LensCrossError::new_err(format!("ParseError: {e}")))
}

fn point(value: &Bound<'_, PyAny>) -> PyResult<Point> {
    let (x, y): (Bound<'_, PyAny>, Bound<'_, PyAny>) = value.extract()?;
    Ok(Point {
        x: rational(&x)?,
        y: rational(&y)?,
    })
}

#[pyclass(module = "lenscross", frozen)]
struct Drawing {
    inner: lenscross::Drawing,
}

impl From<lenscross::Drawing> for Drawing {
    fn from(inner: lenscross::Drawing) -> Self {
        Drawing { inner }
    }
}

#[pymethods]
impl Drawing {
    /// Parses the JSON drawing format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        lenscross::load(text.as_bytes()).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| LensCrossError::new_err(format!("IoError: {path}: {e}")))?;
        lenscross::load(&bytes).map(Into::into).map_err(to_py)
    }

    fn to_json(&self) -> String {
        String::from_utf8(lenscross::save(&self.inner)).expect("drawings serialize to UTF-8")
    }

    fn save(&self, path: &str) -> PyResult<()> {
        std::fs::write(path, lenscross::save(&self.inner))
            .map_err(|e| LensCrossError::new_err(format!("IoError: {path}: {e}")))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn e(&self) -> usize {
        self.inner.e()
    }

    /// Vertex coordinates as exact rational strings.
    #[getter]
    fn vertices(&self) -> Vec<(String, String)> {
        self.inner
            .vertices()
            .iter()
            .map(|p| (p.x.to_string(), p.y.to_string()))
            .collect()
    }

    /// Endpoint pairs of the edges in id order.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().map(|e| (e.u, e.v)).collect()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &self.inner.validate())
    }

    #[pyo3(signature = (engine = "naive"))]
    fn crossings(&self, py: Python<'_>, engine: &str) -> PyResult<Py<PyAny>> {
        let report = match engine {
            "naive" => lenscross::count_crossings(&self.inner),
            "sweep" => lenscross::count_crossings_sweep(&self.inner),
            other => return Err(PyValueError::new_err(format!("unknown engine {other:?}"))),
        }
        .map_err(to_py)?;
        to_object(py, &report)
    }

    fn lenses(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &lenscross::lenses(&self.inner).map_err(to_py)?)
    }

    fn verdict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &lenscross::separated_verdict(&self.inner).map_err(to_py)?)
    }

    #[pyo3(signature = (c_param = None))]
    fn check_bounds(&self, py: Python<'_>, c_param: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
        let c = c_param.map(rational).transpose()?.unwrap_or_else(default_c_param);
        to_object(py, &lenscross::check_drawing_bounds(&self.inner, &c).map_err(to_py)?)
    }

    fn thrackle(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &lenscross::thrackle_check(&self.inner).map_err(to_py)?)
    }

    fn bisection(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = py
            .detach(|| lenscross::bisection_width_exact(&self.inner))
            .map_err(to_py)?;
        debug_assert!(verify_bisection(&self.inner, &r) == r.parts_valid);
        to_object(py, &r)
    }

    fn lemma4(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_object(py, &lenscross::check_lemma4(&self.inner).map_err(to_py)?)
    }

    #[pyo3(signature = (seed = 0, trials = 100))]
    fn replay(&self, py: Python<'_>, seed: u64, trials: u64) -> PyResult<Py<PyAny>> {
        let trace = py
            .detach(|| lenscross::replay_theorem1(&self.inner, seed, trials))
            .map_err(to_py)?;
        to_object(py, &trace)
    }

    #[pyo3(signature = (seed = 0, trials = 100, k = None))]
    fn sampling(&self, py: Python<'_>, seed: u64, trials: u64, k: Option<u32>) -> PyResult<Py<PyAny>> {
        let summary = py
            .detach(|| lenscross::sampling_statistics(&self.inner, seed, trials, k))
            .map_err(to_py)?;
        to_object(py, &summary)
    }

    #[pyo3(signature = (k_override = None))]
    fn decompose(&self, py: Python<'_>, k_override: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
        let k = k_override.map(rational).transpose()?;
        let trace = py
            .detach(|| lenscross::decompose(&self.inner, k))
            .map_err(to_py)?;
        to_object(py, &trace)
    }

    #[pyo3(signature = (shade_lenses = false, mark_crossings = true, labels = true, size = 800.0))]
    fn render_svg(&self, shade_lenses: bool, mark_crossings: bool, labels: bool, size: f64) -> PyResult<String> {
        let opts = RenderOptions {
            shade_lenses,
            mark_crossings,
            labels,
            size,
        };
        render_svg(&self.inner, &opts).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Drawing(n={}, e={})", self.inner.n(), self.inner.e())
    }
}

#[pyfunction]
#[pyo3(signature = (n, segments = DEFAULT_SEGMENTS_PER_ARC))]
fn semicircle(n: usize, segments: usize) -> PyResult<Drawing> {
    gen_semicircle(n, segments).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn nested_lenses(k: usize) -> PyResult<Drawing> {
    if k == 0 {
        return Err(LensCrossError::new_err("DomainError: nested lenses need k >= 1"));
    }
    Ok(gen_nested_lenses(k).into())
}

#[pyfunction]
fn convex_complete(n: usize) -> PyResult<Drawing> {
    gen_convex_complete(n).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn star_thrackle(n: usize) -> PyResult<Drawing> {
    gen_star_thrackle(n).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, extra = 0, seed = 0))]
fn random_separated(n: usize, extra: usize, seed: u64) -> PyResult<Drawing> {
    gen_random_separated(n, extra, seed).map(Into::into).map_err(to_py)
}

/// Bound values for abstract parameters, without a drawing.
#[pyfunction]
#[pyo3(signature = (n, e, m = 1, c_param = None))]
fn evaluate_bounds(py: Python<'_>, n: u64, e: u64, m: u64, c_param: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let c = c_param.map(rational).transpose()?.unwrap_or_else(default_c_param);
    to_object(py, &lenscross::evaluate_bounds(n, e, m, &c).map_err(to_py)?)
}

/// `"left"`, `"right"` or `"collinear"`.
#[pyfunction]
fn orient(p: &Bound<'_, PyAny>, q: &Bound<'_, PyAny>, r: &Bound<'_, PyAny>) -> PyResult<&'static str> {
    Ok(match lenscross::orient(&point(p)?, &point(q)?, &point(r)?) {
        lenscross::geometry::Orientation::Left => "left",
        lenscross::geometry::Orientation::Right => "right",
        lenscross::geometry::Orientation::Collinear => "collinear",
    })
}

#[pyfunction]
fn segment_intersection(
    py: Python<'_>,
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
    c: &Bound<'_, PyAny>,
    d: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let s1 = Segment::new(point(a)?, point(b)?).map_err(to_py)?;
    let s2 = Segment::new(point(c)?, point(d)?).map_err(to_py)?;
    to_object(py, &lenscross::segment_intersection(&s1, &s2))
}

#[pymodule]
#[pyo3(name = "lenscross")]
fn lenscross_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Drawing>()?;
    m.add("LensCrossError", m.py().get_type::<LensCrossError>())?;
    m.add("__version__", PyString::new(m.py(), env!("CARGO_PKG_VERSION")))?;
    m.add_function(wrap_pyfunction!(semicircle, m)?)?;
    m.add_function(wrap_pyfunction!(nested_lenses, m)?)?;
    m.add_function(wrap_pyfunction!(convex_complete, m)?)?;
    m.add_function(wrap_pyfunction!(star_thrackle, m)?)?;
    m.add_function(wrap_pyfunction!(random_separated, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(orient, m)?)?;
    m.add_function(wrap_pyfunction!(segment_intersection, m)?)?;
    Ok(())
}

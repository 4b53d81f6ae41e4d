use pyo3::exceptions::{PyRuntimeError, PyTimeoutError, PyValueError};
use pyo3::prelude::*;

use invdepth::actions::GroupKind;
use invdepth::depth_lab::{self, DepthCertificate, PipelineOptions};
use invdepth::frobenius::{self, FrobeniusProblem, KernelRoute};
use invdepth::text::format_poly;
use invdepth::{ops, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Interrupted => PyTimeoutError::new_err(e.to_string()),
        Error::Parse(_) | Error::Io { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn group(name: &str) -> PyResult<GroupKind> {
    GroupKind::parse(name).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (text, order = "grevlex"))]
fn groebner_basis(text: &str, order: &str) -> PyResult<String> {
    ops::groebner_basis(text, order).map_err(py_err)
}

#[pyfunction]
fn relation_ideal(text: &str) -> PyResult<String> {
    ops::relation_ideal(text).map_err(py_err)
}

/// Returns the tag-ring header and, per candidate, a witness or None.
#[pyfunction]
fn membership(generators: &str, candidates: &str) -> PyResult<(String, Vec<Option<String>>)> {
    ops::membership(generators, candidates).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, exponent = 1, characteristic = 0, tags = false))]
fn hsop(n: usize, exponent: u32, characteristic: u32, tags: bool) -> PyResult<String> {
    ops::hsop(n, exponent, characteristic, tags).map_err(py_err)
}

#[pyfunction]
fn roberts_forward(p: u32, k: usize, poly: &str) -> PyResult<(String, String)> {
    ops::roberts_forward(p, k, poly).map_err(py_err)
}

#[pyfunction]
fn roberts_inverse(p: u32, k: usize, poly: &str) -> PyResult<(String, String)> {
    ops::roberts_inverse(p, k, poly).map_err(py_err)
}

#[pyclass(frozen, get_all)]
struct ScanReport {
    accepted: Vec<usize>,
    sequence: Vec<String>,
    interrupted: bool,
}

#[pymethods]
impl ScanReport {
    #[getter]
    fn depth_lower_bound(&self) -> usize {
        self.accepted.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ScanReport(accepted={:?}, interrupted={})",
            self.accepted, self.interrupted
        )
    }
}

#[pyfunction]
fn scan_reg(ring: &str, sequence: &str) -> PyResult<ScanReport> {
    let r = ops::scan_regular(ring, sequence).map_err(py_err)?;
    Ok(ScanReport {
        accepted: r.accepted,
        sequence: r.sequence,
        interrupted: r.interrupted,
    })
}

#[pyclass(frozen, get_all)]
struct FrobeniusResult {
    ring: String,
    invariants: Vec<String>,
    intersection: Vec<String>,
    tensor_rank: usize,
    warnings: Vec<String>,
}

#[pymethods]
impl FrobeniusResult {
    fn __len__(&self) -> usize {
        self.invariants.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "FrobeniusResult({} generators in {})",
            self.invariants.len(),
            self.ring
        )
    }
}

#[pyfunction]
#[pyo3(signature = (p, k, group = "ga", route = "fused"))]
fn frobenius_invariants(
    py: Python<'_>,
    p: u32,
    k: usize,
    group: &str,
    route: &str,
) -> PyResult<FrobeniusResult> {
    let kind = self::group(group)?;
    let route = match route {
        "fused" => KernelRoute::Fused,
        "stepwise" => KernelRoute::Stepwise,
        r => return Err(PyValueError::new_err(format!("unknown route {r:?}"))),
    };
    let (ring, out) = py
        .detach(|| {
            let prob = FrobeniusProblem::builtin(kind, p, k)?.with_route(route);
            frobenius::frobenius_invariants(&prob).map(|o| (prob.target.header(), o))
        })
        .map_err(py_err)?;
    Ok(FrobeniusResult {
        ring,
        invariants: out.invariants.iter().map(format_poly).collect(),
        intersection: out.intersection.iter().map(format_poly).collect(),
        tensor_rank: out.tensor_rank,
        warnings: out.warnings,
    })
}

#[pyclass(frozen)]
struct Certificate {
    inner: DepthCertificate,
    text: String,
}

#[pymethods]
impl Certificate {
    #[getter]
    fn complete(&self) -> bool {
        self.inner.complete
    }

    #[getter]
    fn depth_bounds(&self) -> (i64, i64) {
        (
            self.inner.lower_bound_depth(),
            self.inner.upper_bound_depth(),
        )
    }

    #[getter]
    fn cmdef_interval(&self) -> (i64, i64) {
        self.inner.cmdef_interval()
    }

    #[getter]
    fn cmdef(&self) -> Option<i64> {
        self.inner.exact_cmdef()
    }

    #[getter]
    fn regular_sequence(&self) -> Vec<(String, String)> {
        self.inner
            .regular_sequence
            .iter()
            .map(|(l, g)| (l.clone(), format_poly(g)))
            .collect()
    }

    #[getter]
    fn text(&self) -> &str {
        &self.text
    }

    fn __str__(&self) -> &str {
        &self.text
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.cmdef_interval();
        format!(
            "Certificate({} p={} k={} cmdef in [{lo}, {hi}])",
            self.inner.group, self.inner.p, self.inner.k
        )
    }
}

#[pyfunction]
#[pyo3(signature = (p, k, group = "ga", homogenize = true, time_budget = None))]
fn cmdef(
    py: Python<'_>,
    p: u32,
    k: usize,
    group: &str,
    homogenize: bool,
    time_budget: Option<f64>,
) -> PyResult<Certificate> {
    let kind = self::group(group)?;
    let budget = time_budget
        .map(|s| {
            std::time::Duration::try_from_secs_f64(s)
                .map_err(|e| PyValueError::new_err(e.to_string()))
        })
        .transpose()?;
    let inner = py
        .detach(|| {
            invdepth::budget::with_budget(budget, || {
                depth_lab::cmdef_pipeline(p, k, kind, PipelineOptions { homogenize })
            })
        })
        .map_err(py_err)?;
    let text = inner.render().map_err(py_err)?;
    Ok(Certificate { inner, text })
}

/// Re-checks a certificate; returns (complete, (cmdef_lo, cmdef_hi)).
#[pyfunction]
fn verify(py: Python<'_>, text: &str) -> PyResult<(bool, (i64, i64))> {
    let text = text.to_owned();
    let rep = py.detach(|| depth_lab::verify(&text)).map_err(py_err)?;
    Ok((rep.complete, rep.cmdef))
}

#[pymodule]
fn invdepth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(relation_ideal, m)?)?;
    m.add_function(wrap_pyfunction!(membership, m)?)?;
    m.add_function(wrap_pyfunction!(hsop, m)?)?;
    m.add_function(wrap_pyfunction!(roberts_forward, m)?)?;
    m.add_function(wrap_pyfunction!(roberts_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(scan_reg, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(cmdef, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<ScanReport>()?;
    m.add_class::<FrobeniusResult>()?;
    m.add_class::<Certificate>()?;
    Ok(())
}

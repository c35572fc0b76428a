//! Python bindings: curves, point counts, L-polynomials, Newton slopes and the
//! verification pipeline. Reports cross the boundary as plain dicts.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use supersingular::count::DEFAULT_BUDGET;
use supersingular::verify::{inspect as inspect_curve, verify_entry, DEFAULT_CROSSCHECK_LIMIT};
use supersingular::zeta::l_polynomial_from_counts;
use supersingular::{
    builtin_catalog, count_points, count_sequence, family_of, field_specs, newton_polygon,
    validate_weil, CatalogEntry, CountOptions, CyclicFieldSpec, LPolynomial, PrimeModulus,
    ResidueStrategy, SuperellipticCurve, VerifyOptions,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime(p: u64) -> PyResult<PrimeModulus> {
    PrimeModulus::new(p).map_err(value_error)
}

fn count_options(strategy: &str, budget: u64) -> PyResult<CountOptions> {
    let s = match strategy {
        "auto" => ResidueStrategy::Auto,
        "exponentiation" => ResidueStrategy::Exponentiation,
        "table" => ResidueStrategy::Table,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown strategy {other:?}; expected auto, exponentiation or table"
            )))
        }
    };
    Ok(CountOptions::default().with_strategy(s).with_budget(budget))
}

fn verify_options(budget: u64, timings: bool) -> VerifyOptions {
    let mut opts = VerifyOptions::default();
    opts.count.budget = budget;
    opts.crosscheck_limit = DEFAULT_CROSSCHECK_LIMIT;
    opts.timings = timings;
    opts
}

fn json<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn lpoly(p: u64, coeffs: Vec<BigInt>) -> PyResult<LPolynomial> {
    if coeffs.len() % 2 == 0 {
        return Err(PyValueError::new_err(
            "an L-polynomial has even degree, so an odd number of coefficients",
        ));
    }
    Ok(LPolynomial::from_coefficients(prime(p)?, coeffs))
}

fn slope_tuples(l: &LPolynomial) -> Vec<(i64, i64, u32)> {
    newton_polygon(l)
        .slopes
        .iter()
        .map(|s| (s.num, s.den, s.mult))
        .collect()
}

fn find_entry(name: &str) -> PyResult<CatalogEntry> {
    let entries = builtin_catalog();
    let by_name = entries.iter().find(|e| e.name == name);
    let by_label = || {
        let label = name.parse().ok()?;
        entries.iter().find(|e| e.label == label)
    };
    by_name
        .or_else(by_label)
        .cloned()
        .ok_or_else(|| PyValueError::new_err(format!("no catalog entry named {name:?}")))
}

fn field_spec(n: u64) -> PyResult<CyclicFieldSpec> {
    field_specs().into_iter().find(|s| s.n == n).ok_or_else(|| {
        PyValueError::new_err(format!("no cyclic field of conductor {n}; use 9, 36 or 45"))
    })
}

/// The smooth model of `y^m = f(x)` over `F_p`.
#[pyclass(name = "Curve", module = "pysupersingular", frozen)]
struct PyCurve {
    inner: SuperellipticCurve,
}

impl PyCurve {
    fn l_polynomial_inner(&self, py: Python<'_>, budget: u64) -> PyResult<LPolynomial> {
        let curve = self.inner.clone();
        let g = curve.genus();
        if g == 0 {
            return Ok(LPolynomial::from_coefficients(
                curve.prime(),
                vec![BigInt::from(1)],
            ));
        }
        let opts = count_options("auto", budget)?;
        py.detach(move || {
            let counts = count_sequence(&curve, g as usize, &opts).map_err(|e| e.to_string())?;
            l_polynomial_from_counts(curve.prime(), g, &counts.counts).map_err(|e| e.to_string())
        })
        .map_err(PyValueError::new_err)
    }
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(m: u32, coeffs: Vec<i64>, p: u64) -> PyResult<Self> {
        let inner = SuperellipticCurve::from_integer(prime(p)?, m, &coeffs).map_err(value_error)?;
        Ok(PyCurve { inner })
    }

    /// The catalog curve `name` (entry name or family label) reduced at `p`.
    #[staticmethod]
    fn from_catalog(name: &str, p: u64) -> PyResult<Self> {
        let inner = find_entry(name)?.curve_at(prime(p)?).map_err(value_error)?;
        Ok(PyCurve { inner })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.exponent()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.prime().get()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.inner.genus()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn delta(&self) -> u32 {
        self.inner.delta()
    }

    #[getter]
    fn family(&self) -> String {
        family_of(&self.inner).to_string()
    }

    /// Coefficients of `f` reduced mod `p`, low degree first.
    #[getter]
    fn coefficients(&self) -> Vec<u32> {
        self.inner.polynomial().coefficients().to_vec()
    }

    #[pyo3(signature = (k, strategy = "auto", budget = DEFAULT_BUDGET))]
    fn count_points(&self, py: Python<'_>, k: usize, strategy: &str, budget: u64) -> PyResult<u64> {
        let opts = count_options(strategy, budget)?;
        let curve = self.inner.clone();
        py.detach(move || count_points(&curve, k, &opts))
            .map_err(value_error)
    }

    /// `[N_1, ..., N_r]`; `r` defaults to the genus.
    #[pyo3(signature = (r = None, budget = DEFAULT_BUDGET))]
    fn count_sequence(&self, py: Python<'_>, r: Option<usize>, budget: u64) -> PyResult<Vec<u64>> {
        let r = r.unwrap_or(self.inner.genus() as usize);
        let opts = count_options("auto", budget)?;
        let curve = self.inner.clone();
        py.detach(move || count_sequence(&curve, r, &opts))
            .map(|c| c.counts)
            .map_err(value_error)
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn l_polynomial(&self, py: Python<'_>, budget: u64) -> PyResult<Vec<BigInt>> {
        Ok(self.l_polynomial_inner(py, budget)?.coefficients().to_vec())
    }

    /// `(num, den, multiplicity)` triples in increasing order.
    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn newton_slopes(&self, py: Python<'_>, budget: u64) -> PyResult<Vec<(i64, i64, u32)>> {
        Ok(slope_tuples(&self.l_polynomial_inner(py, budget)?))
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn is_supersingular(&self, py: Python<'_>, budget: u64) -> PyResult<bool> {
        Ok(newton_polygon(&self.l_polynomial_inner(py, budget)?).is_supersingular())
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn p_rank(&self, py: Python<'_>, budget: u64) -> PyResult<u32> {
        Ok(newton_polygon(&self.l_polynomial_inner(py, budget)?).p_rank())
    }

    fn __repr__(&self) -> String {
        format!(
            "Curve(y^{} = {} over F_{}, genus {})",
            self.inner.exponent(),
            self.inner.polynomial(),
            self.inner.prime().get(),
            self.inner.genus()
        )
    }
}

/// `L(T)` coefficients from `[N_1, ..., N_g]`.
#[pyfunction]
fn l_polynomial_from_point_counts(p: u64, genus: u32, counts: Vec<u64>) -> PyResult<Vec<BigInt>> {
    l_polynomial_from_counts(prime(p)?, genus, &counts)
        .map(|l| l.coefficients().to_vec())
        .map_err(value_error)
}

#[pyfunction]
fn newton_slopes(p: u64, coeffs: Vec<BigInt>) -> PyResult<Vec<(i64, i64, u32)>> {
    Ok(slope_tuples(&lpoly(p, coeffs)?))
}

#[pyfunction]
fn weil_check(py: Python<'_>, p: u64, coeffs: Vec<BigInt>) -> PyResult<Py<PyAny>> {
    json(py, &validate_weil(&lpoly(p, coeffs)?))
}

#[pyfunction(name = "field_specs")]
fn py_field_specs(py: Python<'_>) -> PyResult<Py<PyAny>> {
    json(py, &field_specs())
}

/// Order of Frobenius at `p` in the cyclic field of conductor `n`.
#[pyfunction]
fn frobenius_order(n: u64, p: u64) -> PyResult<u64> {
    field_spec(n)?.frobenius_order(p).map_err(value_error)
}

#[pyfunction]
fn splitting_count(n: u64, p: u64) -> PyResult<u64> {
    field_spec(n)?.splitting_count(p).map_err(value_error)
}

#[pyfunction]
fn catalog(py: Python<'_>) -> PyResult<Py<PyAny>> {
    json(py, &builtin_catalog())
}

/// One report dict per prime in `[pmin, pmax]` that carries an expectation.
#[pyfunction]
#[pyo3(signature = (family, pmax, pmin = 2, budget = DEFAULT_BUDGET, timings = false))]
fn verify(
    py: Python<'_>,
    family: &str,
    pmax: u64,
    pmin: u64,
    budget: u64,
    timings: bool,
) -> PyResult<Py<PyAny>> {
    let entry = find_entry(family)?;
    let opts = verify_options(budget, timings);
    let reports = py.detach(move || verify_entry(&entry, pmin, pmax, &opts));
    json(py, &reports)
}

#[pyfunction]
#[pyo3(signature = (m, coeffs, p, budget = DEFAULT_BUDGET, timings = false))]
fn inspect(
    py: Python<'_>,
    m: u32,
    coeffs: Vec<i64>,
    p: u64,
    budget: u64,
    timings: bool,
) -> PyResult<Py<PyAny>> {
    let opts = verify_options(budget, timings);
    let report = py
        .detach(move || inspect_curve(m, &coeffs, p, &opts))
        .map_err(value_error)?;
    json(py, &report)
}

#[pymodule]
fn pysupersingular(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(l_polynomial_from_point_counts, m)?)?;
    m.add_function(wrap_pyfunction!(newton_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(weil_check, m)?)?;
    m.add_function(wrap_pyfunction!(py_field_specs, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius_order, m)?)?;
    m.add_function(wrap_pyfunction!(splitting_count, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(inspect, m)?)?;
    Ok(())
}

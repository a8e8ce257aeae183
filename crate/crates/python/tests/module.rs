use pyo3::prelude::*;
use pyo3::types::PyDict;

use gumbel_lpp_python::gumbel_lpp_module;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>) -> R) -> R {
    static INIT: std::sync::Once = std::sync::Once::new();
    INIT.call_once(|| {
        pyo3::append_to_inittab!(gumbel_lpp_module);
        Python::initialize();
    });
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(c"import gumbel_lpp as g", Some(&globals), None).unwrap();
        f(py, &globals)
    })
}

fn eval(py: Python<'_>, globals: &Bound<'_, PyDict>, code: &std::ffi::CStr) -> f64 {
    py.eval(code, Some(globals), None).unwrap().extract().unwrap()
}

#[test]
fn constants_and_special_functions() {
    with_module(|py, g| {
        assert!((eval(py, g, c"g.corollary1_constants()[0]") - 3.9270200520).abs() < 1e-9);
        assert!((eval(py, g, c"g.tracy_widom_gue_cdf(0.0)") - 0.9693728284).abs() < 1e-8);
        assert!((eval(py, g, c"g.digamma(1.0)") + 0.5772156649).abs() < 1e-9);
    });
}

#[test]
fn sample_sets_round_trip() {
    with_module(|py, g| {
        let n = eval(py, g, c"len(g.sample_statistic('log_gamma', 3, 3, 500, 1))");
        assert_eq!(n, 500.0);
        let same = eval(
            py,
            g,
            c"float(g.sample_statistic('gumbel_lpp', 3, 3, 50, 4).values() == g.sample_statistic('gumbel_lpp', 3, 3, 50, 4).values())",
        );
        assert_eq!(same, 1.0);
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, g| {
        let err = py
            .eval(c"g.sample_statistic('gumbel_lpp', 0, 3, 10, 1)", Some(g), None)
            .unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let err = py.eval(c"g.grid('nope', 2, 2)", Some(g), None).unwrap_err();
        assert!(err.to_string().contains("unknown model"));
    });
}

use pyo3::prelude::*;

#[pymodule]
fn enthom_py(_m: &Bound<'_, PyModule>) -> PyResult<()> { Ok(()) }

use pyo3::prelude::*;

#[pymodule]
fn lensball_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}

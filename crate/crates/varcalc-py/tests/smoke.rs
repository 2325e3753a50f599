use std::ffi::CString;

use pyo3::prelude::*;
use pyvarcalc::pyvarcalc;

#[test]
fn python_smoke_script() {
    pyo3::append_to_inittab!(pyvarcalc);
    Python::initialize();
    let code = CString::new(include_str!("../../../python/smoke_test.py")).unwrap();
    Python::attach(|py| {
        if let Err(e) = py.run(&code, None, None) {
            e.display(py);
            panic!("smoke script failed");
        }
    });
}

use pyconjlab::pyconjlab;
use pyo3::ffi::c_str;
use pyo3::prelude::*;

fn python() {
    static INIT: std::sync::Once = std::sync::Once::new();
    INIT.call_once(|| {
        pyo3::append_to_inittab!(pyconjlab);
        Python::initialize();
    });
}

#[test]
fn conjugates_round_trip_through_python() {
    python();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import pyconjlab as cl
axis = [-3.0 + 0.01 * i for i in range(601)]
f = cl.GridFunction([axis], [y * y for y in axis])
fast = cl.fast_conjugate_1d(f, [-1.0, 0.0, 2.0])
brute = cl.brute_conjugate(f, [[-1.0], [0.0], [2.0]])
assert max(abs(a - b) for a, b in zip(fast, brute)) <= 1e-10
assert abs(fast[2] - 1.0) <= 1e-4
g = cl.conjugate_nd(f, [[-1.0, 0.0, 2.0]])
assert g.values == fast
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}

#[test]
fn errors_become_value_errors() {
    python();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import pyconjlab as cl
for bad in (lambda: cl.run("integrate"), lambda: cl.duality_gap("t^3", [1.0]),
            lambda: cl.WeightFamily("t^2", base=1.0), lambda: cl.TestFunction.gaussian(0.5, 1)([1.0, 2.0])):
    try:
        bad()
    except ValueError:
        pass
    else:
        raise AssertionError("no error")
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}

#[test]
fn reports_are_plain_dicts() {
    python();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import pyconjlab as cl
r = cl.run("conjugate", seed=3, config='{"options": {"oracle_samples": 4}}')
assert r["command"] == "conjugate" and r["seed"] == 3
assert r["summary"]["failed"] == 0
assert all(rec["anchor"] for rec in r["records"])
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}

"""Smoke test for the Python bindings.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import json
import math

import kaden


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    half = kaden.SheetMu.from_alpha(0.5)
    close(half.mu, 2.0 / 3.0, 1e-15)

    value, err = kaden.pv_lemma(0.25)
    close(value, math.pi, 1e-8)

    v1, v2, _ = kaden.velocity_timezero(0.0, 1.0, half)
    close(v1, -math.sqrt(2) / 8, 1e-9)
    close(v2, -math.sqrt(2) / 8, 1e-9)

    e = kaden.surface_energy("timezero", half, 1.0)
    close(e["value"], math.pi / 8, 1e-10)
    assert e["converged"]

    table = kaden.moment_table("timezero", half, 1.0, 2)
    close(table["inner"][0].real, 1.0, 1e-10)

    m = kaden.matching_lhs(1.0)
    close(m["lhs"], -0.0430158, 1e-6)
    assert len(m["excision_trace"]) == 9

    y1, y2 = kaden.impulse_y()
    close(y1, -math.pi / 16, 1e-8)
    close(y2, 0.0, 1e-8)

    bump = json.dumps({
        "center": [0.1, -0.2], "radius": 1.0, "amplitude": 1.0,
        "profile": {"type": "polynomial", "order": 5},
    })
    form = kaden.momentum_form(half, bump)
    assert form["converged"]

    axis = json.dumps({
        "center": [1.0, 0.2], "radius": 0.8, "amplitude": 1.0,
        "profile": {"type": "smooth_exponential"},
    })
    mu = kaden.SheetMu(0.8)
    rhs, _ = kaden.line_rhs(mu, axis)
    close(kaden.momentum_form(mu, axis)["value"], rhs, 1e-3 * abs(rhs))

    report = kaden.condition_report(kaden.SheetMu(0.6667))
    assert not report["decay_holds"] and report["matching_holds"]

    try:
        kaden.SheetMu(1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("mu = 1.5 accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()

"""Smoke test for the pyskewinfo extension.

Build and install first, e.g.

    cd crates/python && maturin build --release -o dist && pip install dist/*.whl

then run ``python python/smoke_test.py`` (or ``pytest python/``).
"""

import math

import numpy as np

import pyskewinfo as si

SX = [[0, 1], [1, 0]]
SY = [[0, -1j], [1j, 0]]
SZ = [[1, 0], [0, -1]]


def test_state_and_values():
    rho = si.QuantumState.bloch([math.sqrt(3) / 2, 0, 0])
    assert rho.dim == 2
    assert abs(sum(rho.eigenvalues) - 1) < 1e-12
    fisher = si.skew_observable(rho, SY, si.Metric.fisher())
    assert abs(fisher - 0.75) < 1e-10
    wyd = si.Metric.wyd(1 / 3)
    assert si.skew_observable(rho, SX, wyd) < 1e-15
    x = np.array([[0.3, 1 - 2j], [0.5j, -1]])
    assert abs(si.skew_operator(rho, x.tolist(), wyd) - si.wyd_direct(rho, x.tolist(), 1 / 3)) < 1e-10


def test_pure_state_matches_variance():
    up = si.QuantumState.pure([1, 0])
    for metric in (si.Metric.fisher(), si.Metric.wyd(0.2), si.Metric.wigner_yanase()):
        assert abs(si.skew_observable(up, SX, metric) - si.variance(up, SX)) < 1e-10


def test_custom_metric():
    custom = si.Metric.custom("sld", lambda t: (1 + t) / 2, 0.5)
    rho = si.QuantumState.equatorial(0.6, 0.4)
    a = si.skew_observable(rho, SZ, custom)
    b = si.skew_observable(rho, SZ, si.Metric.fisher())
    assert abs(a - b) < 1e-12
    try:
        si.Metric.custom("square", lambda t: t * t, 0.0)
    except si.SkewInfoError:
        pass
    else:
        raise AssertionError("f(t) = t^2 must be rejected")


def test_bounds():
    rho = si.QuantumState.equatorial(math.sqrt(3) / 2, 0.0)
    r = si.observable_bounds(rho, [SX, SY, SZ], si.Metric.wyd(1 / 3))
    assert r["bounds"]["THM1"] <= r["lhs_sum"] + 1e-9
    assert r["bounds"]["THM1"] >= r["bounds"]["REN_OBS"]
    assert r["witnesses"]["THM1"] in ("x=0", "x=1")

    q = 0.5
    eps = [[[1, 0], [0, math.sqrt(1 - q)]], [[0, math.sqrt(q)], [0, 0]]]
    phi = [[[1, 0], [0, math.sqrt(1 - q)]], [[0, 0], [0, math.sqrt(q)]]]
    flip = [[[math.sqrt(q), 0], [0, math.sqrt(q)]], [[0, math.sqrt(1 - q)], [math.sqrt(1 - q), 0]]]
    c = si.channel_bounds(rho, [eps, phi, flip], si.Metric.wyd(1 / 3))
    assert set(c["bounds"]) == {"LB1", "LB2", "LB3", "REN_CH_1", "REN_CH_2"}
    assert all(v <= c["lhs_sum"] + 1e-9 for v in c["bounds"].values())


def test_examples_and_fuzz():
    rows = si.run_example("example3", theta_steps=5)
    assert len(rows) == 5
    for row in rows:
        assert row["max"] == max(row["lb1u"], row["lb2u"], row["lb3u"])
        assert row["max"] <= row["sum"] + 1e-9
    csv = si.example_csv("example1", theta_steps=3)
    assert csv.splitlines()[0].startswith("theta,sum,var_sum,thm1")
    report = si.run_fuzz(trials=50, seed=3)
    assert report["violations"] == []


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)

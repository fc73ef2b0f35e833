"""Acceptance checks with pinned tolerances.

A summary line per criterion (PASS/FAIL) is printed at the end of the run
by the hook in ``conftest.py``.
"""

import time

import numpy as np
import pytest

from sirelax.analysis import (
    observed_order,
    reference_oracle,
    report_int,
    run_method,
    summarize,
)
from sirelax.cli import main
from sirelax.csvio import read_columns, write_columns
from sirelax.grid import TimeGrid
from sirelax.models import ModelSpec, amplitude_sir, amplitude_sird
from sirelax.relaxation import RelaxationConfig, apriori_bounds, relax_solve, successive_diffs

from conftest import SMALL, TEST1, TEST2

c1 = pytest.mark.criterion(1, "Test-1 amplitudes and peak days")
c2 = pytest.mark.criterion(2, "closed-form true amplitudes")
c3 = pytest.mark.criterion(3, "Test-2 amplitudes and peak days")
c4 = pytest.mark.criterion(4, "oracle peaks")
c5 = pytest.mark.criterion(5, "non-negativity property suite")
c6 = pytest.mark.criterion(6, "convergence orders")
c7 = pytest.mark.criterion(7, "geometric rate c = 0.57735")
c8 = pytest.mark.criterion(8, "factorial squared-error bound")
c9 = pytest.mark.criterion(9, "CSV/SVG round trip and determinism")


def _timed(model, method, P, **kw):
    start = time.perf_counter()
    run = run_method(model, method, P, **kw)
    rep = summarize(run.bundle, run.sequence)
    return rep, time.perf_counter() - start


# 1 ---------------------------------------------------------------------------

TABLE1 = [
    # method, P, K, amplitude, tol, peak day, tol
    ("euler_relax", 100, 5, 797, 2, 25, 1),
    ("euler_relax", 1000, 50, 800, 1, 23, 1),
    ("linearization", 100, 2, 800, 2, None, None),
    ("linearization", 1000, 4, None, None, 35, 3),
    ("analytic", 100, None, 755, 3, 114, 3),
    ("analytic", 1000, None, 755, 3, 114, 3),
    ("euler_direct", 100, None, 793, 2, 32, 2),
    ("euler_direct", 1000, None, 800, 1, 25, 1),
]


@c1
@pytest.mark.parametrize("method, P, K, amp, amp_tol, day, day_tol", TABLE1)
def test_table1(method, P, K, amp, amp_tol, day, day_tol):
    model = ModelSpec.sir(**TEST1)
    M = 0.02 if method == "euler_relax" else None
    rep, seconds = _timed(model, method, P, K=K, M=M)
    if amp is not None:
        assert abs(report_int(rep.amplitude) - amp) <= amp_tol
    if day is not None:
        assert abs(rep.peak_day - day) <= day_tol
    assert seconds < 1.0


@c1
def test_table1_linearization_unstable():
    run = run_method(ModelSpec.sir(**TEST1), "linearization", 1000, K=4)
    diffs = successive_diffs(run.sequence)
    assert np.all(np.diff(diffs) >= 0), diffs


@c1
def test_table1_analytic_mesh_invariant():
    model = ModelSpec.sir(**TEST1)
    amps = [summarize(run_method(model, "analytic", P).bundle).amplitude for P in (100, 1000, 5000)]
    assert len({report_int(a) for a in amps}) == 1


# 2 ---------------------------------------------------------------------------

@c2
def test_true_amplitudes():
    assert report_int(amplitude_sir(ModelSpec.sir(**TEST1).params)) == 800
    assert report_int(amplitude_sir(ModelSpec.sir(**TEST2).params)) == 51_367_769
    sird = amplitude_sird(ModelSpec.sird(sigma=0.01, **TEST1).params)
    assert report_int(sird) == 730
    assert sird == pytest.approx(730.88, abs=0.01)


# 3 ---------------------------------------------------------------------------

TABLE2 = [
    ("rk4_relax", 50, 20, 51_295_165, 72),
    ("rk4_relax", 2000, 50, 51_367_769, 73),
    ("rk4_direct", 50, None, 50_948_480, 72),
    ("rk4_direct", 2000, None, 51_367_765, 73),
    ("euler_relax", 50, 20, 51_341_234, 54),
    ("euler_relax", 2000, 50, 51_367_573, 72),
]


@c3
@pytest.mark.parametrize("method, P, K, amp, day", TABLE2)
def test_table2(method, P, K, amp, day):
    model = ModelSpec.sir(**TEST2)
    M = 0.05 if K is not None else None
    rep = summarize(run_method(model, method, P, K=K, M=M).bundle)
    assert abs(rep.amplitude - amp) / amp <= 1e-4
    assert abs(rep.peak_day - day) <= 1
    if (method, P) == ("rk4_relax", 2000):
        assert abs(rep.amplitude - 51_367_769) <= 10
        assert rep.peak_day == 73


# 4 ---------------------------------------------------------------------------

@c4
def test_oracle_test1():
    assert summarize(reference_oracle(ModelSpec.sir(**TEST1)).bundle()).peak_day == 24


@c4
def test_oracle_test2():
    assert summarize(reference_oracle(ModelSpec.sir(**TEST2)).bundle()).peak_day == 73


@c4
def test_oracle_mortality():
    rep = summarize(reference_oracle(ModelSpec.sir_mortality(sigma=0.001, **TEST1)).bundle())
    assert abs(rep.amplitude - 777) <= 2
    assert abs(rep.peak_day - 24) <= 1


# 5 ---------------------------------------------------------------------------

def _random_scenarios(count=200, seed=20240611):
    rng = np.random.default_rng(seed)
    variants = ("sir", "sird", "sir_mortality")
    backends = ("euler_relax", "rk4_relax")
    out = []
    for i in range(count):
        variant = variants[i % 3]
        kw = dict(
            beta=rng.uniform(1e-5, 1e-3),
            gamma=rng.uniform(0.01, 0.1),
            n=rng.uniform(10, 1e4),
            a=rng.uniform(1, 10),
            T=rng.uniform(10, 365),
        )
        if variant != "sir":
            kw["sigma"] = rng.uniform(0.001, 0.05)
        out.append((variant, kw, backends[i % 2], int(rng.integers(100, 1001)), int(rng.integers(1, 51))))
    return out


SCENARIOS = _random_scenarios()


@c5
@pytest.mark.parametrize("variant", ["sir", "sird", "sir_mortality"])
def test_non_negative_with_valid_constant(variant):
    failures = []
    for v, kw, backend, P, K in SCENARIOS:
        if v != variant:
            continue
        model = getattr(ModelSpec, v)(**kw)
        rep = summarize(run_method(model, backend, P, K=K, M=model.threshold).bundle)
        if rep.min_value < -1e-9:
            failures.append((rep.min_value, kw, backend, P, K))
    failures.sort(key=lambda f: f[0])
    assert not failures, f"{len(failures)} scenarios go negative; worst: {failures[0]}"


@c5
@pytest.mark.parametrize("backend", ["euler_relax", "rk4_relax"])
def test_violating_constant_goes_negative(backend):
    model = ModelSpec.sird(sigma=0.01, **TEST1)
    rep = summarize(run_method(model, backend, 100, K=5, M=0.015, allow_violation=True).bundle)
    assert rep.min_value < 0


# 6 ---------------------------------------------------------------------------

P_LIST = [250, 500, 1000, 2000]


@pytest.fixture(scope="module")
def test1_reference():
    return reference_oracle(ModelSpec.sir(**TEST1))


@c6
@pytest.mark.parametrize("method, low, high", [
    ("euler_direct", 0.9, 1.1),
    ("rk4_direct", 3.5, None),
    ("euler_relax", 0.9, 1.1),
    ("rk4_relax", 1.9, None),
])
def test_observed_order(test1_reference, method, low, high):
    start = time.perf_counter()
    est = observed_order(ModelSpec.sir(**TEST1), method, P_LIST, reference=test1_reference, K=50)
    assert not est.saturated
    assert est.order >= low
    if high is not None:
        assert est.order <= high
    assert time.perf_counter() - start < 30


# 7 and 8 ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def small_errors():
    model = ModelSpec.sir(**SMALL)
    ref = reference_oracle(model)
    grid = TimeGrid(2000, SMALL["T"])
    cfg = RelaxationConfig(M=0.02, K=40, backend="rk4_relax")
    seq = relax_solve(model, grid, cfg)
    errors = np.abs(seq.iterates - ref.on_grid(grid)).max(axis=1)
    # what is left once the iteration has converged is discretization error
    floor = errors[-1]
    resolved = errors >= 100 * floor
    bounds = apriori_bounds(model, cfg, grid, float(np.abs(ref.R).max()))
    return errors, resolved, bounds


@c7
def test_corollary_rate(small_errors):
    errors, resolved, bounds = small_errors
    assert bounds.corollary_rate == pytest.approx(0.57735, abs=5e-6)
    ks = [k for k in range(3, errors.size) if resolved[k]]
    assert len(ks) >= 5
    ratios = errors[ks] / errors[[k - 1 for k in ks]]
    assert np.all(ratios <= 0.577 + 0.05), ratios


@c8
def test_factorial_bound(small_errors):
    errors, resolved, bounds = small_errors
    trivial = bounds.R_ref_sup ** 2
    checked = []
    for j, k in enumerate(bounds.k):
        bound = bounds.thm_main_bound[j]
        if bound < trivial and resolved[k]:
            checked.append((int(k), errors[k] ** 2, bound))
    assert checked
    violated = [c for c in checked if c[1] > c[2]]
    assert not violated, f"squared error above bound at (k, err^2, bound): {violated[:3]}"


# 9 ---------------------------------------------------------------------------

@c9
def test_csv_round_trip_bytes(tmp_path):
    first, second, rewritten = (tmp_path / f"{n}.csv" for n in "abc")
    for out in (first, second):
        assert main(["solve", "--preset", "test1_euler_relax", "--out", str(out)]) == 0
    assert first.read_bytes() == second.read_bytes()
    write_columns(read_columns(first), rewritten)
    assert rewritten.read_bytes() == first.read_bytes()


@c9
@pytest.mark.parametrize("preset", ["test1_euler_relax", "mortality_rk4_relax"])
def test_svg_determinism(tmp_path, preset):
    csv_path = tmp_path / "run.csv"
    assert main(["solve", "--preset", preset, "--out", str(csv_path)]) == 0
    svgs = [tmp_path / "a.svg", tmp_path / "b.svg"]
    for svg in svgs:
        assert main(["plot", str(csv_path), "--out", str(svg)]) == 0
    assert svgs[0].read_bytes() == svgs[1].read_bytes()

import math

import numpy as np
import pytest

import sturmtrace as st
from sturmtrace.fractal import box_count, box_dimension, restrict_bands, thickness


def middle_thirds(level, lo=0.0, hi=1.0):
    bands = [(lo, hi)]
    for _ in range(level):
        nxt = []
        for a, b in bands:
            third = (b - a) / 3.0
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        bands = nxt
    return tuple(bands)


def integer_middle_thirds(level):
    # endpoints are integers (exact floats), so bridge/gap ratios are exact
    bands = [(0, 3 ** level)]
    for _ in range(level):
        nxt = []
        for a, b in bands:
            third = (b - a) // 3
            nxt.append((a, a + third))
            nxt.append((b - third, b))
        bands = nxt
    return tuple((float(a), float(b)) for a, b in bands)


def test_box_count_exact_on_simple_sets():
    assert box_count(((0.0, 1.0),), 0.25) == 4
    assert box_count(((0.0, 1.0), (2.0, 3.0)), 0.5) == 4
    # right endpoint on a box boundary does not spill into the next box
    assert box_count(((0.0, 0.5),), 0.25) == 2


def test_box_dimension_single_interval():
    est = box_dimension(((0.0, 1.0),))
    assert abs(est.value - 1.0) <= 0.02
    assert est.n_scales >= 5


def test_box_dimension_middle_thirds():
    est = box_dimension(middle_thirds(10))
    assert abs(est.value - math.log(2) / math.log(3)) <= 0.02


def test_box_dimension_errors():
    with pytest.raises(ValueError):
        box_dimension(())
    bands = middle_thirds(6)
    smallest = min(b - a for a, b in bands)
    with pytest.raises(ValueError):
        # scales below the validity floor are rejected outright
        box_dimension(bands, scales=[smallest / 4.0] * 6)


def test_box_counts_below_smallest_band_look_one_dimensional():
    # the slope the guard excludes: counting below the smallest band
    bands = middle_thirds(6)
    smallest = min(b - a for a, b in bands)
    eps = np.array([smallest / 2 ** i for i in range(3, 10)])
    counts = np.array([box_count(bands, e) for e in eps], float)
    slope = np.polyfit(np.log(1 / eps), np.log(counts), 1)[0]
    # distinctly one-dimensional, nowhere near the true log2/log3
    assert slope > 0.9


def test_thickness_examples():
    assert thickness(((0.0, 1.0),)).value == math.inf
    assert thickness(((0.0, 1.0), (2.0, 3.0))).value == 1.0
    assert thickness(integer_middle_thirds(8)).value == 1.0  # exact


def test_thickness_affine_invariance():
    bands = middle_thirds(7)
    base = thickness(bands).value
    for scale, shift in ((2.7, -3.0), (0.13, 11.0)):
        moved = tuple((scale * a + shift, scale * b + shift) for a, b in bands)
        assert abs(thickness(moved).value - base) < 1e-9


def test_thickness_coupling_trend_fibonacci():
    # tau grows without bound as coupling shrinks and collapses as it grows
    taus = []
    for V in (0.2, 0.5, 1.0, 4.0, 8.0, 16.0):
        kw = {} if V < 4 else {"tol": 3e-14, "merge_tol": 2e-13}
        bands = st.floquet_bands(st.FIBONACCI, st.JacobiParams(1.0, V), 10, **kw)
        taus.append(thickness(bands).value)
    assert all(a > b for a, b in zip(taus, taus[1:]))
    assert taus[0] > 5.0 and taus[-1] < 0.01


def test_dim_thickness_inequality():
    # dim >= log2 / log(2 + 1/tau) within estimator error
    for V in (1.0, 4.0):
        bands = st.floquet_bands(st.FIBONACCI, st.JacobiParams(1.0, V), 10,
                                 tol=3e-14, merge_tol=2e-13)
        est = box_dimension(bands)
        tau = thickness(bands).value
        lower = math.log(2.0) / math.log(2.0 + 1.0 / tau)
        assert est.value >= lower - 3.0 * max(est.stderr, 0.02)


def test_local_profile_flat_for_schrodinger():
    params = st.JacobiParams(1.0, 1.5)
    profile = st.local_dimension_profile(st.FIBONACCI, params, 10, 6)
    vals = [e.value for _, e in profile if e is not None]
    errs = [e.stderr for _, e in profile if e is not None]
    assert len(vals) >= 4
    spread = max(vals) - min(vals)
    assert spread <= 2.0 * (max(errs) + 0.05)


def test_local_profile_trend_for_jacobi():
    # q (p^2 - 1) > 0: invariant grows with E, so local dimension drops
    params = st.JacobiParams(1.5, 1.0)
    profile = st.local_dimension_profile(st.FIBONACCI, params, 10, 6)
    pts = [(c, e.value) for c, e in profile if e is not None]
    assert len(pts) >= 4
    xs = np.array([c for c, _ in pts])
    ys = np.array([v for _, v in pts])
    slope = np.polyfit(xs, ys, 1)[0]
    assert slope < 0


def test_local_profile_single_window_is_global():
    params = st.JacobiParams(1.0, 2.0)
    bands = st.floquet_bands(st.FIBONACCI, params, 8)
    profile = st.local_dimension_profile(st.FIBONACCI, params, 8, 1, bands=bands)
    assert len(profile) == 1
    global_est = box_dimension(bands)
    assert abs(profile[0][1].value - global_est.value) < 1e-12


def test_restrict_bands():
    bands = ((0.0, 1.0), (2.0, 3.0), (4.0, 5.0))
    assert restrict_bands(bands, 0.5, 4.5) == ((0.5, 1.0), (2.0, 3.0), (4.0, 4.5))


def test_large_coupling_skips_zero():
    rows = st.large_coupling_check([0.0], k=4)
    assert rows == []


def test_gap_opening_rate_rejects_t_zero():
    with pytest.raises(ValueError):
        st.gap_opening_rate(st.FIBONACCI, lambda t: (1.0, t), [0.2, 0.0], label_m=1, k=6)


def test_gap_opening_rate_smoke():
    res = st.gap_opening_rate(st.FIBONACCI, lambda t: (1.0, t), [0.4, 0.2], label_m=1, k=8)
    assert len(res.ratios) == 2
    assert all(r > 0 for r in res.ratios)


def test_p_to_zero_reference_and_trend():
    res = st.p_to_zero_scan(st.FIBONACCI, 1.0, [0.4, 0.1], k=7)
    assert len(res["reference"]) == 5
    rows = res["rows"]
    assert rows[0]["p"] == 0.4 and rows[1]["p"] == 0.1
    assert rows[0]["dim"] > rows[1]["dim"]
    assert rows[0]["dist_to_reference"] > rows[1]["dist_to_reference"]

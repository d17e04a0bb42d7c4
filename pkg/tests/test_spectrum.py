import numpy as np
import pytest
from hypothesis import given, settings, strategies as st_h

import sturmtrace as st
from sturmtrace.jacobi import half_trace, word_transfer
from sturmtrace.spectrum import (
    BandSet,
    combinatorial_gap_label,
    default_energy_range,
    floquet_band_tower,
    gap_index_for_label,
    half_trace_dual_grid,
    half_trace_grid,
    merge_intervals,
)
from sturmtrace.substitution import Substitution, periodic_word

METAL = Substitution("001", "0")


def brute_force_bands(s, params, k, n_grid=200001):
    """Independent oracle: dense scan of the transfer-product half-trace."""
    word = periodic_word(s, k)
    lo, hi = default_energy_range(params)
    E = np.linspace(lo, hi, n_grid)
    vals = np.array([half_trace(word_transfer(params, word, e)) for e in E])
    inside = np.abs(vals) <= 1.0
    bands = []
    i = 0
    while i < n_grid:
        if inside[i]:
            j = i
            while j + 1 < n_grid and inside[j + 1]:
                j += 1
            # refine edges by bisection on the same brute-force function
            def g(e):
                return abs(half_trace(word_transfer(params, word, e))) - 1.0
            a = E[i] if i == 0 else _bisect(g, E[i], E[i - 1])
            b = E[j] if j == n_grid - 1 else _bisect(g, E[j], E[j + 1])
            bands.append((a, b))
            i = j + 1
        else:
            i += 1
    return bands


def _bisect(g, ins, outs, tol=1e-12):
    for _ in range(100):
        if abs(ins - outs) <= tol:
            break
        mid = 0.5 * (ins + outs)
        if g(mid) <= 0:
            ins = mid
        else:
            outs = mid
    return 0.5 * (ins + outs)


def test_free_case_single_band():
    params = st.JacobiParams(1.0, 0.0)
    for k in (0, 1, 4, 7):
        b = st.floquet_bands(st.FIBONACCI, params, k)
        assert b.band_count == 1
        a, bb = b.bands[0]
        assert abs(a + 2.0) < 1e-10 and abs(bb - 2.0) < 1e-10


def test_level2_bands_match_cubic_oracle():
    params = st.JacobiParams(1.0, 2.0)
    got = st.floquet_bands(st.FIBONACCI, params, 2)
    expected = brute_force_bands(st.FIBONACCI, params, 2)
    assert got.band_count == len(expected) <= 3
    for (a, b), (c, d) in zip(got.bands, expected):
        assert abs(a - c) < 1e-8 and abs(b - d) < 1e-8


def test_level4_jacobi_bands_match_oracle():
    params = st.JacobiParams(1.4, 0.9)
    got = st.floquet_bands(st.FIBONACCI, params, 4)
    expected = brute_force_bands(st.FIBONACCI, params, 4)
    assert got.band_count == len(expected)
    for (a, b), (c, d) in zip(got.bands, expected):
        assert abs(a - c) < 1e-8 and abs(b - d) < 1e-8


def test_level3_swapped_letters_bands_match_oracle():
    # substitution whose frequent letter is 1: the recipe tracks star 1
    swapped = Substitution("1", "10")
    params = st.JacobiParams(0.8, 1.2)
    got = st.floquet_bands(swapped, params, 3)
    word = "1"
    for _ in range(3):
        word = swapped.apply(word)
    expected = brute_force_bands_for_word(word, params)
    assert got.band_count == len(expected)
    for (a, b), (c, d) in zip(got.bands, expected):
        assert abs(a - c) < 1e-8 and abs(b - d) < 1e-8


def brute_force_bands_for_word(word, params, n_grid=200001):
    lo, hi = default_energy_range(params)
    E = np.linspace(lo, hi, n_grid)
    vals = np.array([half_trace(word_transfer(params, word, e)) for e in E])
    inside = np.abs(vals) <= 1.0
    bands = []
    i = 0
    while i < n_grid:
        if inside[i]:
            j = i
            while j + 1 < n_grid and inside[j + 1]:
                j += 1
            def g(e):
                return abs(half_trace(word_transfer(params, word, e))) - 1.0
            a = E[i] if i == 0 else _bisect(g, E[i], E[i - 1])
            b = E[j] if j == n_grid - 1 else _bisect(g, E[j], E[j + 1])
            bands.append((a, b))
            i = j + 1
        else:
            i += 1
    return bands


def test_band_count_bounded_by_degree():
    params = st.JacobiParams(1.0, 2.0)
    tower = floquet_band_tower(st.FIBONACCI, params, 8)
    lengths = [1, 2, 3, 5, 8, 13, 21, 34, 55]
    for k in range(9):
        assert tower[k].band_count <= lengths[k]


def test_band_edges_are_simple_crossings():
    # at each located edge the trace passes through +-1 with a sign change
    params = st.JacobiParams(1.0, 2.0)
    recipe = st.recipe_from_substitution(st.FIBONACCI)
    b = st.floquet_bands(st.FIBONACCI, params, 6)
    h = 50 * b.edge_tol
    for lo, hi in b.bands:
        for edge, inward in ((lo, +1.0), (hi, -1.0)):
            g_in = abs(half_trace_grid(recipe, params, np.array([edge + inward * h]), 6)[0]) - 1.0
            g_out = abs(half_trace_grid(recipe, params, np.array([edge - inward * h]), 6)[0]) - 1.0
            assert g_in < 0 < g_out


def test_half_trace_dual_matches_difference_quotient():
    params = st.JacobiParams(1.2, 0.7)
    recipe = st.recipe_from_substitution(st.FIBONACCI)
    E = np.linspace(-2, 2, 11)
    h = 1e-6
    for k in (0, 1, 3, 5):
        x, dx = half_trace_dual_grid(recipe, params, E, k)
        fd = (half_trace_grid(recipe, params, E + h, k)
              - half_trace_grid(recipe, params, E - h, k)) / (2 * h)
        assert np.allclose(dx, fd, rtol=1e-5, atol=1e-4)


def test_semicontinuity_trend():
    # every energy of sigma_{k+2} lies near sigma_k, with shrinking epsilon
    params = st.JacobiParams(1.0, 1.0)
    tower = floquet_band_tower(st.FIBONACCI, params, 9)
    eps = []
    for k in (5, 6, 7):
        mids = [0.5 * (a + b) for a, b in tower[k + 2].bands]
        from sturmtrace.spectrum import _distance_to_bands
        eps.append(float(np.max(_distance_to_bands(np.array(mids), tower[k].bands))))
    assert eps[0] > eps[-1]


def test_hausdorff_examples():
    A = BandSet(((0.0, 1.0),))
    assert st.hausdorff_distance(A, A) == 0.0
    B = BandSet(((0.0, 2.0),))
    assert st.hausdorff_distance(A, B) == 1.0
    C = BandSet(((0.0, 0.5), (2.0, 2.5)))
    D = BandSet(((0.0, 2.5),))
    assert st.hausdorff_distance(C, D) == 0.75  # midpoint of the gap
    with pytest.raises(ValueError):
        st.hausdorff_distance(BandSet(()), A)


def test_band_measure_examples():
    assert st.band_measure(BandSet(((-2.0, 2.0),))) == 4.0
    assert st.band_measure(BandSet(())) == 0.0
    params = st.JacobiParams(1.0, 2.0)
    tower = floquet_band_tower(st.FIBONACCI, params, 6)
    measures = [tower[k].measure() for k in range(2, 7)]
    assert all(a > b for a, b in zip(measures, measures[1:]))


def test_band_sum_examples():
    one = BandSet(((0.0, 1.0),))
    assert st.band_sum(one, one).bands == ((0.0, 2.0),)
    touching = BandSet(((0.0, 1.0), (2.0, 3.0)))
    assert st.band_sum(touching, touching).bands == ((0.0, 6.0),)  # sums touch and merge
    cantorish = BandSet(((0.0, 1.0), (3.0, 4.0)))
    assert st.band_sum(cantorish, cantorish).bands == ((0.0, 2.0), (3.0, 5.0), (6.0, 8.0))


intervals = st_h.lists(
    st_h.tuples(st_h.floats(-10, 10), st_h.floats(0.01, 2.0)),
    min_size=1, max_size=6,
).map(lambda ps: merge_intervals([(a, a + w) for a, w in ps]))


@given(intervals, intervals)
@settings(max_examples=60)
def test_band_sum_commutative_and_monotone(a_bands, b_bands):
    A, B = BandSet(a_bands), BandSet(b_bands)
    ab = st.band_sum(A, B)
    ba = st.band_sum(B, A)
    assert ab.bands == ba.bands
    assert ab.measure() >= max(A.measure(), B.measure()) - 1e-12


def test_combinatorial_labels_roundtrip():
    params = st.JacobiParams(1.0, 2.0)
    b8 = st.floquet_bands(st.FIBONACCI, params, 8)
    assert b8.band_count == 55
    for j in range(1, 55):
        m = combinatorial_gap_label(st.FIBONACCI, b8, j)
        assert abs(m) <= 34
        assert gap_index_for_label(st.FIBONACCI, b8, m) == j


def test_gaps_with_labels_synthetic():
    table = type("T", (), {"value_at": lambda self, E: 0.5})()
    single = BandSet(((0.0, 1.0),), level=1)
    assert st.gaps_with_labels(single, table, 0.618, m_max=5, tol=0.1) == []
    two = BandSet(((0.0, 1.0), (2.0, 3.0)), level=1)
    gaps = st.gaps_with_labels(two, table, 0.618, m_max=5, tol=0.0)
    assert len(gaps) == 1 and gaps[0].label_m is None  # tol=0 matches nothing


def test_dynamical_probe_examples():
    s = st.FIBONACCI
    params = st.JacobiParams(1.0, 0.0)
    for E in (-1.5, 0.0, 1.9):
        v = st.dynamical_spectrum_probe(s, params, [E], max_steps=80)[0]
        assert v.kind == "bounded-so-far"
    params = st.JacobiParams(1.0, 2.0)
    lo, hi = default_energy_range(params)
    v = st.dynamical_spectrum_probe(s, params, [hi + 1.0], max_steps=60)[0]
    assert v.kind == "escaped"


def test_probe_consistency_with_bands():
    s = st.FIBONACCI
    params = st.JacobiParams(1.0, 2.0)
    b = st.floquet_bands(s, params, 8)
    rng = np.random.default_rng(3)
    widths = np.array([hi - lo for lo, hi in b.bands])
    for _ in range(20):
        i = rng.choice(len(b.bands), p=widths / widths.sum())
        lo, hi = b.bands[i]
        E = rng.uniform(lo + 0.3 * (hi - lo), hi - 0.3 * (hi - lo))
        v = st.dynamical_spectrum_probe(s, params, [E], max_steps=12)[0]
        assert v.kind == "bounded-so-far"
    wide = [g for g in b.gaps() if g[1] - g[0] > 5e-2]
    for lo, hi in wide[:20]:
        E = 0.5 * (lo + hi)
        v = st.dynamical_spectrum_probe(s, params, [E], max_steps=13)[0]
        assert v.kind == "escaped"

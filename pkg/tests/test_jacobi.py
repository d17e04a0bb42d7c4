import numpy as np
import pytest
import sympy

import sturmtrace as st
from sturmtrace.jacobi import (
    JacobiParams,
    TridiagonalSpec,
    decoupled_block_spectrum,
    dirichlet_restriction,
    eigen_count_below,
    eigen_count_below_grid,
    initial_conditions,
    initial_invariant,
    invariant_slope,
    m_form_transfer,
    transfer_unimodular,
    word_transfer,
)
from sturmtrace.substitution import FIBONACCI, fixed_point_prefix


def test_params_validation():
    with pytest.raises(ValueError):
        JacobiParams(0.0, 1.0)
    p = JacobiParams(2.0, -1.0)
    assert p.hopping("1") == 2.0 and p.hopping("0") == 1.0
    assert p.potential("1") == -1.0 and p.potential("0") == 0.0


def test_transfer_schrodinger_site():
    t = transfer_unimodular(JacobiParams(2.0, 3.0), "0", "0", 1.7)
    assert np.allclose(t, [[1.7, -1.0], [1.0, 0.0]])


def test_transfer_letter_one_site():
    p, q, E = 0.7, -1.3, 0.4
    t = transfer_unimodular(JacobiParams(p, q), "1", "1", E)
    assert np.allclose(t, [[(E - q) / p, -1.0 / p], [p, 0.0]])


def test_transfer_determinant_one():
    rng = np.random.default_rng(0)
    for _ in range(50):
        params = JacobiParams(rng.uniform(0.3, 3.0), rng.uniform(-2, 2))
        t = transfer_unimodular(params, rng.choice(["0", "1"]),
                                rng.choice(["0", "1"]), rng.uniform(-3, 3))
        assert abs(np.linalg.det(t) - 1.0) < 1e-12


def test_word_transfer_single_site_and_period2():
    assert np.allclose(word_transfer(JacobiParams(1.0, 0.0), "0", 1.1),
                       [[1.1, -1.0], [1.0, 0.0]])
    # period-2 Schrodinger chain: hand product with cyclic successor
    V, E = 0.7, 0.25
    params = JacobiParams(1.0, V)
    t1 = np.array([[E, -1.0], [1.0, 0.0]])        # site 1: letter 0, next 1
    t2 = np.array([[E - V, -1.0], [1.0, 0.0]])    # site 2: letter 1, next 0 (cyclic)
    assert np.allclose(word_transfer(params, "01", E), t2 @ t1)


def test_word_transfer_unimodular_long_words():
    rng = np.random.default_rng(1)
    word = fixed_point_prefix(FIBONACCI, 200)
    for _ in range(10):
        params = JacobiParams(rng.uniform(0.5, 2.0), rng.uniform(-1, 1))
        m = word_transfer(params, word, rng.uniform(-2, 2))
        # true matrix is unimodular, so sigma_min = 1/sigma_max and the
        # condition number is sigma_max^2 <= frobenius^2
        cond = np.sum(m * m)
        assert abs(abs(np.linalg.det(m)) - 1.0) <= 1e-9 * cond


def test_initial_conditions_values():
    assert initial_conditions(JacobiParams(1.0, 0.0), 0.0) == (-1.0, 0.0, 0.0)
    p = JacobiParams(1.0, 2.0)
    for E in (-1.0, 0.3, 2.2):
        assert abs(st.fricke_vogt(initial_conditions(p, E)) - 1.0) < 1e-12  # V^2/4 = 1


def test_initial_invariant_closed_form():
    rng = np.random.default_rng(2)
    for _ in range(200):
        params = JacobiParams(rng.uniform(0.3, 3.0) * rng.choice([-1, 1]),
                              rng.uniform(-3, 3))
        E = rng.uniform(-4, 4)
        lhs = st.fricke_vogt(initial_conditions(params, E))
        assert abs(lhs - initial_invariant(params, E)) < 1e-12 * (1 + abs(lhs))


def test_invariant_slope_symbolic():
    E, pp, qq = sympy.symbols("E p q")
    lx = (E ** 2 - qq * E - pp ** 2 - 1) / (2 * pp)
    ly = (E - qq) / (2 * pp)
    lz = E / 2
    I = lx ** 2 + ly ** 2 + lz ** 2 - 2 * lx * ly * lz - 1
    slope = sympy.simplify(sympy.diff(I, E) - qq * (pp ** 2 - 1) / (4 * pp ** 2))
    assert slope == 0
    for p_val, q_val in ((2, 1), (sympy.Rational(1, 2), 3), (3, sympy.Rational(-2, 7))):
        got = invariant_slope(JacobiParams(float(p_val), float(q_val)))
        exact = sympy.Rational(q_val) * (sympy.Rational(p_val) ** 2 - 1) / (4 * sympy.Rational(p_val) ** 2)
        assert abs(got - float(exact)) < 1e-15 * max(1.0, abs(float(exact)))
    assert invariant_slope(JacobiParams(1.0, 5.0)) == 0.0
    assert invariant_slope(JacobiParams(2.0, 0.0)) == 0.0
    assert invariant_slope(JacobiParams(2.0, 1.0)) == 3.0 / 16.0


def test_schrodinger_specialization_after_inverse_map():
    # one corrected inverse-Fibonacci application sends l(E) to the classic
    # Schrodinger line ((E - q)/2, E/2, 1) when p = 1
    from sturmtrace.tracemap import fibonacci_map_inverse
    q = 0.8
    for E in (-1.5, 0.0, 2.4):
        pt = fibonacci_map_inverse(initial_conditions(JacobiParams(1.0, q), E))
        assert np.allclose(pt, ((E - q) / 2.0, E / 2.0, 1.0), atol=1e-12)


def test_dirichlet_restriction_structures():
    params = JacobiParams(2.0, 5.0)
    free = dirichlet_restriction(JacobiParams(2.0, 0.0), "000")
    assert free.diag == (0.0, 0.0, 0.0)
    assert free.offdiag == (1.0, 1.0, 1.0)
    alt = dirichlet_restriction(params, "0101")
    assert alt.diag == (0.0, 5.0, 0.0, 5.0)
    assert alt.offdiag == (1.0, 2.0, 1.0, 2.0)
    word = fixed_point_prefix(FIBONACCI, 13)
    spec = dirichlet_restriction(params, word)
    assert sum(1 for d in spec.diag if d == 5.0) == word.count("1") == 5
    with pytest.raises(ValueError):
        dirichlet_restriction(params, "")


def test_tridiagonal_csv_rows():
    spec = dirichlet_restriction(JacobiParams(2.0, 5.0), "010")
    assert spec.to_csv_rows() == [(0, 0.0, 1.0), (1, 5.0, 2.0), (2, 0.0, 1.0)]


def test_eigen_count_free_block():
    spec = dirichlet_restriction(JacobiParams(1.0, 0.0), "000")
    # eigenvalues -sqrt2, 0, sqrt2
    assert eigen_count_below(spec, 3.0) == 3
    assert eigen_count_below(spec, 0.0) == 2  # counts <= E (0 included)
    assert eigen_count_below(spec, -0.1) == 1
    assert eigen_count_below(spec, -10.0) == 0


def test_eigen_count_gershgorin_and_saturation():
    params = JacobiParams(1.4, -2.0)
    spec = dirichlet_restriction(params, fixed_point_prefix(FIBONACCI, 40))
    bound = 1.0 + 3.0 * max(2.0, abs(params.q) + 2 * abs(params.p))
    assert eigen_count_below(spec, -bound) == 0
    assert eigen_count_below(spec, bound) == 40


def test_eigen_count_against_dense_oracle():
    rng = np.random.default_rng(4)
    for _ in range(20):
        params = JacobiParams(rng.uniform(0.3, 2.0), rng.uniform(-2, 2))
        L = int(rng.integers(2, 13))
        spec = dirichlet_restriction(params, fixed_point_prefix(FIBONACCI, L))
        evals = np.linalg.eigvalsh(spec.dense())
        for E in rng.uniform(-4, 4, size=8):
            assert eigen_count_below(spec, E) == int((evals <= E).sum())


def test_eigen_count_monotone_in_energy():
    spec = dirichlet_restriction(JacobiParams(0.8, 1.0), fixed_point_prefix(FIBONACCI, 55))
    grid = np.linspace(-4, 4, 400)
    counts = eigen_count_below_grid(spec, grid)
    assert (np.diff(counts) >= 0).all()


def test_eigen_count_zero_offdiag_block_split():
    spec = TridiagonalSpec((1.0, 1.0, -1.0, -1.0), (1.0, 0.0, 1.0, 0.0))
    # two decoupled 2x2 blocks; compare against dense with the zeros kept
    evals = np.linalg.eigvalsh(spec.dense())
    for E in (-2.0, -0.5, 0.0, 0.5, 2.0):
        assert eigen_count_below(spec, E) == int((evals <= E).sum())


def test_m_form_solution_recursion_consistent():
    # propagate a solution by the M-form and check the T-form conjugation
    # Theta_n = (theta_n, p_n theta_{n-1}) reproduces it
    rng = np.random.default_rng(5)
    params = JacobiParams(1.7, -0.6)
    word = fixed_point_prefix(FIBONACCI, 12)
    E = 0.9
    theta = [0.3, 1.1]  # theta_0, theta_1
    for n in range(1, len(word)):
        m = m_form_transfer(params, word[n - 1], word[n], E)
        nxt = m @ np.array([theta[-1], theta[-2]])
        theta.append(float(nxt[0]))
    ps = [params.hopping(c) for c in word]
    Theta = np.array([theta[1], ps[0] * theta[0]])
    for n in range(1, len(word)):
        t = transfer_unimodular(params, word[n - 1], word[n], E)
        Theta = t @ Theta
        assert abs(Theta[0] - theta[n + 1]) < 1e-9 * max(1.0, abs(theta[n + 1]))


def test_decoupled_blocks_match_dense_p_zero():
    # independent oracle: dense diagonalization of a long chain with p = 0
    word = fixed_point_prefix(FIBONACCI, 300)
    q = 1.0
    ref = decoupled_block_spectrum(word, q)
    diag = [q if c == "1" else 0.0 for c in word]
    off = [0.0 if c == "1" else 1.0 for c in word]
    m = np.diag(diag)
    for i in range(1, len(word)):
        m[i - 1, i] = m[i, i - 1] = off[i]
    dense = np.linalg.eigvalsh(m)
    # every dense eigenvalue lies near the reference set (boundary block aside)
    dists = np.min(np.abs(dense[:, None] - ref[None, :]), axis=1)
    assert np.quantile(dists, 0.98) < 1e-9
    assert len(ref) == 5  # blocks 10 and 100 for the Fibonacci sequence

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyens import (
    CoefficientRangeError,
    NumericalBreakdownError,
    RankError,
    atoms_measure,
    banded_table,
    classical_table,
    equilibrium_measure,
    eval_polynomials,
    hessenberg_matrix,
    mean_moment,
    op_table,
    path_sum_moment,
    stream,
    table_from_measure,
)

import oracles


def random_op_table(seed, N=None, pad=5):
    rng = stream(seed)
    N = N or int(rng.integers(1, 9))
    top = N + pad
    a = rng.uniform(0.3, 1.5, size=top + 1)
    b = rng.uniform(-0.7, 0.7, size=top + 1)
    return op_table(a, b, N)


def random_banded_table(seed, q, N=None, pad=6):
    rng = stream(seed)
    N = N or int(rng.integers(1, 7))
    K = N + pad
    c = rng.uniform(-1.0, 1.0, size=(K + 1, q + 2))
    c[:, 0] = rng.uniform(0.4, 1.2, size=K + 1)  # keep the up step alive
    for k in range(K + 1):
        c[k, k + 2 :] = 0.0  # steps below ordinate 0 are not a thing
    return banded_table(c, q, N)


def test_gue_coefficients():
    t = classical_table("gue", 4, pad=2)
    # a_k = sqrt((k+1)/N) under the convention a_k = <x P_k, P_{k+1}>
    for k in range(5):
        assert np.isclose(t.coeff(k, k + 1), np.sqrt((k + 1) / 4))
        assert t.coeff(k, k) == 0.0


def test_chebyshev_coefficients():
    t = classical_table("chebyshev", 5, pad=1, alpha=-1.0, beta=1.0)
    assert np.isclose(t.coeff(0, 1), 1 / np.sqrt(2))
    for k in range(1, 5):
        assert np.isclose(t.coeff(k, k + 1), 0.5)
    t = classical_table("chebyshev", 5, pad=1, alpha=1.0, beta=5.0)
    assert np.isclose(t.coeff(0, 0), 3.0)  # b_k = midpoint
    assert np.isclose(t.coeff(2, 3), 1.0)  # a_k = half-width / 2


def test_circle_table_is_pure_shift():
    t = classical_table("circle", 6, pad=2)
    assert t.q == 0
    assert t.coeff(3, 4) == 1.0
    assert t.coeff(3, 3) == 0.0


def test_coeff_band_and_range():
    t = random_op_table(3, N=4, pad=2)
    assert t.coeff(1, 3) == 0.0  # above the band
    assert t.coeff(4, 1) == 0.0  # below it (q = 1)
    with pytest.raises(CoefficientRangeError):
        t.coeff(7, 8)  # beyond stored coefficients


def test_op_table_rejects_nonpositive_up_step():
    with pytest.raises(ValueError):
        op_table([0.5, 0.0, 0.5], [0.0, 0.0, 0.0, 0.0], 2)


def test_path_sum_zero_steps():
    t = random_op_table(11, N=5)
    assert path_sum_moment(t, 0, 3, 3) == 1.0
    assert path_sum_moment(t, 0, 3, 2) == 0.0


def test_path_sum_one_step_is_the_coefficient():
    t = random_op_table(12, N=5)
    for k, m in [(0, 1), (2, 2), (3, 2)]:
        assert np.isclose(path_sum_moment(t, 1, k, m), t.coeff(k, m), rtol=1e-15)


def test_path_sum_unreachable_is_zero():
    t = random_op_table(13, N=6)
    assert path_sum_moment(t, 2, 0, 3) == 0.0  # 2 steps climb at most 2
    assert path_sum_moment(t, 3, 5, 0) == 0.0  # q = 1 drops at most 3


@pytest.mark.parametrize("seed", range(20))
def test_path_sum_matches_enumeration_op(seed):
    t = random_op_table(100 + seed)
    rng = stream(200 + seed)
    for _ in range(6):
        ell = int(rng.integers(0, 5))
        k = int(rng.integers(0, t.N))
        m = int(rng.integers(0, t.N))
        want = oracles.moment_by_paths(t, ell, k, m)
        got = path_sum_moment(t, ell, k, m)
        assert np.isclose(got, want, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("q", [0, 2, 3])
@pytest.mark.parametrize("seed", range(6))
def test_path_sum_matches_enumeration_banded(q, seed):
    t = random_banded_table(300 + 10 * q + seed, q)
    rng = stream(400 + seed)
    for _ in range(5):
        ell = int(rng.integers(0, 4))
        k = int(rng.integers(0, t.N))
        m = int(rng.integers(0, t.N))
        want = oracles.moment_by_paths(t, ell, k, m)
        got = path_sum_moment(t, ell, k, m)
        assert np.isclose(got, want, rtol=1e-12, atol=1e-14)


def test_path_sum_matches_quadrature():
    # the same number must fall out of integrating x^l P_k P_m against the
    # Gauss rule reconstructed from the coefficients
    t = random_op_table(77, N=6, pad=6)
    a = [t.coeff(k, k + 1) for k in range(t.top)]
    b = [t.coeff(k, k) for k in range(t.top + 1)]
    x, w = oracles.gauss_rule(a, b)
    P = eval_polynomials(t, x, t.N + 2)
    for ell, k, m in [(1, 0, 1), (2, 3, 5), (3, 2, 1), (4, 4, 4)]:
        quad = float(np.sum(x**ell * P[k] * P[m] * w))
        assert np.isclose(path_sum_moment(t, ell, k, m), quad, rtol=1e-10, atol=1e-12)


def test_window_outside_perturbation_is_invisible():
    # coefficients that no admissible path can touch must not change the
    # result in a single bit
    base = random_op_table(55, N=6, pad=6)
    ell, k, m = 2, 1, 1
    want = path_sum_moment(base, ell, k, m)
    a = np.array([base.coeff(j, j + 1) for j in range(base.top + 1)])
    b = np.array([base.coeff(j, j) for j in range(base.top + 1)])
    a[5:] += 17.0  # window for (2, 1, 1) tops out at ordinate 2
    b[5:] -= 3.0
    bumped = op_table(a, b, base.N)
    assert path_sum_moment(bumped, ell, k, m) == want


def test_mean_moment_gue_exact_values():
    for N in (1, 2, 7, 40, 200):
        t = classical_table("gue", N, pad=4)
        assert abs(mean_moment(t, 1)) < 1e-15
        assert np.isclose(mean_moment(t, 2), 1.0, rtol=1e-13)
        if N >= 2:
            # telescoping the path weights gives 2 + 1/N^2 at every N
            assert np.isclose(mean_moment(t, 4), 2.0 + 1.0 / N**2, rtol=1e-12)


def test_mean_moment_gue_small_n_by_enumeration():
    t = classical_table("gue", 3, pad=4)
    for ell in range(7):
        assert np.isclose(mean_moment(t, ell), oracles.mean_moment_by_paths(t, ell), rtol=1e-12)


def test_mean_moment_chebyshev_second():
    for N in (2, 10, 100):
        t = classical_table("chebyshev", N, pad=3)
        assert np.isclose(mean_moment(t, 2), 0.5 + 0.25 / N, rtol=1e-13)


def test_table_from_measure_roundtrip():
    rng = stream(21)
    x = np.sort(rng.uniform(-2, 2, size=24))
    w = rng.uniform(0.1, 1.0, size=24)
    m = atoms_measure(x, w)
    t = table_from_measure(m, 6, pad=4)
    # rebuild the Gauss rule from the computed coefficients and check the
    # measure's moments are reproduced through degree 2*top+1
    a = [t.coeff(k, k + 1) for k in range(t.top)]
    b = [t.coeff(k, k) for k in range(t.top + 1)]
    gx, gw = oracles.gauss_rule(a, b)
    for ell in range(8):
        assert np.isclose(
            np.sum(gx**ell * gw) * m.total_mass,
            m.integrate(lambda v: v**ell),
            rtol=1e-9,
            atol=1e-11,
        )


def test_table_from_measure_orthonormality():
    m = equilibrium_measure(-1, 1, 40)
    t = table_from_measure(m, 5, pad=3)
    P = eval_polynomials(t, m.points, t.top, p0=1.0 / np.sqrt(m.total_mass))
    G = (P * m.weights) @ P.T
    assert np.max(np.abs(G - np.eye(len(G)))) < 1e-10
    # and it recovers the classical coefficients
    ref = classical_table("chebyshev", 5, pad=3)
    for k in range(5):
        assert np.isclose(t.coeff(k, k + 1), ref.coeff(k, k + 1), rtol=1e-9, atol=1e-12)
        assert np.isclose(t.coeff(k, k), 0.0, atol=1e-12)


def test_table_from_measure_needs_enough_atoms():
    m = atoms_measure(np.arange(5.0), np.ones(5))
    with pytest.raises(RankError):
        table_from_measure(m, 5, pad=2)


def test_hessenberg_layout_op():
    t = random_op_table(9, N=5, pad=1)
    H = hessenberg_matrix(t, 5)
    assert H.shape == (5, 5)
    for i in range(5):
        for j in range(5):
            assert H[i, j] == t.coeff(j, i)  # column j holds <x P_j, Q_i>
    assert np.allclose(H, H.T)


def test_hessenberg_layout_banded():
    t = random_banded_table(31, q=2, N=4, pad=3)
    H = hessenberg_matrix(t, 4)
    # upper Hessenberg: nothing below the first subdiagonal
    assert np.all(H[np.tril_indices(4, -2)] == 0)
    assert H[3, 2] == t.coeff(2, 3)


def test_eval_polynomials_chebyshev_closed_form():
    t = classical_table("chebyshev", 6, pad=2)
    theta = np.linspace(0.3, 2.8, 9)
    P = eval_polynomials(t, np.cos(theta), 6)
    assert np.allclose(P[0], 1.0)
    for k in range(1, 7):
        assert np.allclose(P[k], np.sqrt(2) * np.cos(k * theta), atol=1e-12)


def test_eval_polynomials_circle_powers():
    t = classical_table("circle", 5, pad=2)
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 7, endpoint=False))
    P = eval_polynomials(t, z, 5)
    for k in range(6):
        assert np.allclose(P[k], z**k)


def test_eval_polynomials_breaks_on_dead_up_step():
    c = np.ones((4, 2))
    c[1, 0] = 0.0
    t = banded_table(c, 0, 2)
    with pytest.raises(NumericalBreakdownError):
        eval_polynomials(t, np.array([0.5]), 3)


@given(st.integers(0, 10**6))
def test_mean_first_moment_is_average_diagonal(seed):
    # mean of sum(x) is the average of the b_k: the only 1-step loops
    t = random_op_table(seed)
    b = np.mean([t.coeff(k, k) for k in range(t.N)])
    assert np.isclose(mean_moment(t, 1), b, rtol=1e-12, atol=1e-14)


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_moment_symmetry_op(seed, ell):
    # <x^l P_k, P_m> is symmetric in (k, m) for orthonormal families
    t = random_op_table(seed, N=6)
    rng = stream(seed + 1)
    k, m = rng.integers(0, 6, size=2)
    lhs = path_sum_moment(t, ell, int(k), int(m))
    rhs = path_sum_moment(t, ell, int(m), int(k))
    assert np.isclose(lhs, rhs, rtol=1e-11, atol=1e-13)


def test_constant_coefficient_closed_form():
    # bulk diagonal moments of a constant table count unconstrained loops:
    # choose which 2m steps move, then which m of those go up
    from math import comb

    aa, bb = 0.8, 0.3
    t = op_table(np.full(24, aa), np.full(24, bb), 20)
    k = 10
    for ell in range(9):
        want = sum(
            comb(ell, 2 * m) * comb(2 * m, m) * aa ** (2 * m) * bb ** (ell - 2 * m)
            for m in range(ell // 2 + 1)
        )
        assert np.isclose(path_sum_moment(t, ell, k, k), want, rtol=1e-12)

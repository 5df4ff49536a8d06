"""Epstein zeta for the integer lattices Z^d: values, poles, reflection."""

import math

import mpmath as mp
import numpy as np
import pytest

import besselsum.specfun as sf

mp.mp.dps = 40


def _rel(got, want):
    return abs(got - float(want)) / max(1.0, abs(float(want)))


CTX = {d: sf.EpsteinContext(d) for d in (1, 2, 3)}


# ---------------------------------------------------------------------------
# d = 1 reduces to the Riemann zeta function
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("u", [0.3, 1.7, -0.7, 2.5])
def test_d1_reduces_to_riemann(u):
    assert _rel(sf.epstein_zeta(CTX[1], u), 2.0 * float(mp.zeta(2 * u))) < 1e-12
    assert _rel(sf.epstein_zeta_deriv(CTX[1], u),
                4.0 * float(mp.zeta(2 * u, derivative=1))) < 1e-12


def test_d1_derivative_at_special_points():
    assert _rel(sf.epstein_zeta_deriv(CTX[1], -1.0),
                4.0 * float(mp.zeta(-2, derivative=1))) < 1e-12
    assert _rel(sf.epstein_zeta_deriv(CTX[1], 0.0),
                4.0 * float(mp.zeta(0, derivative=1))) < 1e-12


def test_d1_pole_data():
    pp = sf.epstein_res_fp(CTX[1])
    assert _rel(pp.residue, 1.0) < 1e-12
    assert _rel(pp.finite_part, 2.0 * float(mp.euler)) < 1e-12


# ---------------------------------------------------------------------------
# d = 2 factorizes through the Dirichlet beta function
# ---------------------------------------------------------------------------

def _dirichlet_beta(s):
    return float(mp.nsum(lambda k: (-1) ** k / mp.mpf(2 * k + 1) ** s,
                         [0, mp.inf]))


@pytest.mark.parametrize("u", [2.0, 1.6])
def test_d2_factorization(u):
    want = 4.0 * float(mp.zeta(u)) * _dirichlet_beta(u)
    assert _rel(sf.epstein_zeta(CTX[2], u), want) < 1e-11


def test_d2_value_at_two_vs_catalan_and_brute_force():
    want = 4.0 * float(mp.zeta(2)) * float(mp.catalan)
    got = sf.epstein_zeta(CTX[2], 2.0)
    assert _rel(got, want) < 1e-10
    # brute force over shells k <= K with the mean-density tail pi/K appended
    K = 40000
    counts = sf.lattice_shell_counts(2, K)
    k = np.arange(1, K + 1, dtype=float)
    brute = float(np.sum(np.asarray(counts[1:], dtype=float) / k ** 2))
    assert abs(got - (brute + math.pi / K)) < 1e-5


# ---------------------------------------------------------------------------
# Exact zero-point value and reflection formula, d in {1, 2, 3}
# ---------------------------------------------------------------------------

def test_zero_point_value_exact():
    for d in (1, 2, 3):
        assert sf.epstein_zeta(CTX[d], 0.0) == -1.0


@pytest.mark.parametrize("d,u", [(1, 0.3), (1, -0.6), (2, 0.3), (2, 0.8),
                                 (3, 0.4), (3, 1.1)])
def test_reflection_formula(d, u):
    lhs = sf.epstein_zeta(CTX[d], u)
    rhs = (math.pi ** (2 * u - d / 2.0)
           * sf.gamma(d / 2.0 - u) / sf.gamma(u)
           * sf.epstein_zeta(CTX[d], d / 2.0 - u))
    assert abs(lhs - rhs) < 1e-10


# ---------------------------------------------------------------------------
# Derivative consistency (finite differences of the continuation)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("d,u", [(2, 0.7), (3, -0.4)])
def test_derivative_matches_finite_difference(d, u):
    h = 1e-5
    fd = (sf.epstein_zeta(CTX[d], u + h) - sf.epstein_zeta(CTX[d], u - h)) / (2 * h)
    assert _rel(sf.epstein_zeta_deriv(CTX[d], u), fd) < 1e-8

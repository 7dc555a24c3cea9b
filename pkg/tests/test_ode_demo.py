"""Exact matrix-polynomial Magnus demo."""

import json
import math
import random
from fractions import Fraction

import pytest

from logderiv import ode_demo as ode
from logderiv.errors import PreconditionError

F = Fraction


def const_matrix(entries):
    return ode.MatrixPoly.from_scalars(entries)


PAULI_X = const_matrix([[0, 1], [1, 0]])
PAULI_Z = const_matrix([[1, 0], [0, -1]])


def t_times(m):
    """t * m as a MatrixPoly."""
    return ode.MatrixPoly([[( F(0), ) + e if e else () for e in row] for row in m.rows])


# ---------------------------------------------------------------------------
# exact polynomial arithmetic

def test_poly_matrix_arithmetic():
    m = ode.MatrixPoly([[(1, 2), ()], [(), (0, 0, 3)]])  # diag(1+2t, 3t^2)
    assert m.derivative() == ode.MatrixPoly([[(2,), ()], [(), (0, 6)]])
    assert m.integrate() == ode.MatrixPoly([[(0, 1, 1), ()], [(), (0, 0, 0, 1)]])
    assert m.integrate().derivative() == m
    assert (m * m).rows[0][0] == (1, 4, 4)


def test_matrix_dimension_bounds():
    with pytest.raises(PreconditionError):
        ode.MatrixPoly([[()] * 5 for _ in range(5)])
    with pytest.raises(PreconditionError):
        ode.MatrixPoly([[(), ()], [()]])


def test_integration_by_parts_is_weight0():
    rng = random.Random(31)
    for _ in range(10):
        p = _random_matrix(rng, 2, 2)
        q = _random_matrix(rng, 2, 2)
        r = lambda m: m.integrate()
        assert r(p) * r(q) == r(r(p) * q) + r(p * r(q))


def _random_matrix(rng, dim, t_degree):
    return ode.MatrixPoly(
        [[tuple(F(rng.randint(-2, 2)) for _ in range(t_degree + 1))
          for _ in range(dim)] for _ in range(dim)])


# ---------------------------------------------------------------------------
# picard series

def test_picard_constant_matrix():
    x = ode.picard_matrix(PAULI_X, 5)
    power = ode.MatrixPoly.identity(2)
    for n in range(6):
        # component n must be t^n A^n / n!
        expected = ode.MatrixPoly(
            [[(F(0),) * n + tuple(e) for e in row] for row in power.rows]
        ) / math.factorial(n)
        assert x.component(n) == expected
        power = power * PAULI_X


def test_picard_zero_matrix():
    z = ode.MatrixPoly.zeros(2)
    assert ode.picard_matrix(z, 4) == ode.LambdaSeries.unit(2)


def test_picard_second_component_against_double_integral():
    a = PAULI_Z + t_times(PAULI_X)  # A(t) = Z + tX, [Z, X] != 0

    # independent oracle: evaluate int_0^t (int_0^s A(u) du) A(s) ds directly
    inner = a.integrate()
    expected = (inner * a).integrate()
    assert ode.picard_matrix(a, 3).component(2) == expected


def test_picard_fixed_point():
    a = PAULI_Z + t_times(PAULI_X)
    x = ode.picard_matrix(a, 5)
    lam_a = ode.LambdaSeries.embed(a, 1)
    fixed = ode.LambdaSeries.unit(2) + (x * lam_a).truncate(5).integrate()
    assert fixed.truncate(5) == x.truncate(5)


# ---------------------------------------------------------------------------
# logarithm and the Magnus relation

def test_omega_constant_matrix():
    x = ode.picard_matrix(PAULI_X, 5)
    om = ode.omega_log(x, 5)
    assert om.component(1) == t_times(PAULI_X)
    assert all(not om.component(n) for n in range(2, 6))


def test_omega_round_trip():
    a = PAULI_Z + t_times(PAULI_X)
    x = ode.picard_matrix(a, 5)
    om = ode.omega_log(x, 5)
    assert ode.lambda_exp(om, 5) == x.truncate(5)
    assert ode.omega_log(ode.LambdaSeries.unit(2), 4) == ode.LambdaSeries.zero(2)
    with pytest.raises(PreconditionError):
        ode.omega_log(ode.LambdaSeries.embed(PAULI_X, 0), 3)


def test_magnus_relation():
    assert ode.magnus_relation_check(PAULI_X, 4)  # constant, only i = 0 term
    assert ode.magnus_relation_check(ode.MatrixPoly.zeros(2), 4)
    a = PAULI_Z + t_times(PAULI_X)
    assert ode.magnus_relation_check(a, 5)
    a3 = ode.MatrixPoly([
        [(0, 1), (1,), ()],
        [(), (2,), (0, 0, 1)],
        [(1,), (), ()],
    ])
    assert ode.magnus_relation_check(a3, 5)


# ---------------------------------------------------------------------------
# the time pre-Lie product

def test_prelie_time_examples():
    m_const = ode.LambdaSeries.embed(PAULI_X, 1)
    n_any = ode.LambdaSeries.embed(t_times(PAULI_Z), 1)
    assert not ode.prelie_time(m_const, n_any)  # constant first factor

    m = ode.LambdaSeries.embed(t_times(PAULI_X), 1)
    n = ode.LambdaSeries.embed(t_times(PAULI_Z), 1)
    got = ode.prelie_time(m, n)
    comm = PAULI_Z * PAULI_X - PAULI_X * PAULI_Z
    half_t2 = ode.MatrixPoly(
        [[((F(0), F(0)) + tuple(c / 2 for c in e)) if e else () for e in row]
         for row in comm.rows])
    assert got.component(2) == half_t2


def test_prelie_derivative_law_seeded():
    rng = random.Random(32)
    for _ in range(8):
        m = ode.LambdaSeries.embed(_random_matrix(rng, 2, 2), rng.randint(0, 1))
        n = ode.LambdaSeries.embed(_random_matrix(rng, 2, 2), rng.randint(0, 1))
        mp = m.derivative()
        assert ode.prelie_time(m, n).derivative() == n * mp - mp * n


# ---------------------------------------------------------------------------
# matrix files

def test_matrix_json_round_trip(tmp_path):
    a = PAULI_Z + t_times(PAULI_X)
    data = ode.dump_matrix(a)
    assert ode.load_matrix(json.dumps(data)) == a
    path = tmp_path / "a.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert ode.load_matrix(str(path)) == a


def test_matrix_json_validation():
    with pytest.raises(PreconditionError):
        ode.load_matrix(json.dumps({"dim": 2, "entries": [[["1"]]]}))
    with pytest.raises(PreconditionError):
        ode.load_matrix(json.dumps(
            {"dim": 5, "entries": [[["1"]] * 5 for _ in range(5)]}))

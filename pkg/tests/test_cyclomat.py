import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from thetabundle.cyclomat import CycloMatrix, joint_eigenspaces, span_rank
from thetabundle.exactnum import Cyclotomic, RootOfUnity

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_rational_rank_and_inverse_match_sympy(rows):
    M = CycloMatrix(rows)
    S = sympy.Matrix(rows)
    assert M.rank() == S.rank()
    if S.det():
        inv = M.inverse()
        assert M @ inv == CycloMatrix.identity(4)
        expected = S.inv()
        for i in range(4):
            for j in range(4):
                assert inv[i, j] == Cyclotomic.rational(Fraction(int(expected[i, j].p), int(expected[i, j].q)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace(rows):
    M = CycloMatrix(rows)
    null = M.nullspace()
    assert len(null) == 5 - M.rank()
    for v in null:
        assert M @ CycloMatrix.from_columns([v]) == CycloMatrix.zeros(len(rows), 1)


def test_cyclotomic_inverse():
    i = Cyclotomic.root(4)
    M = CycloMatrix([[1, i], [i, 2]], 4)
    assert M @ M.inverse() == CycloMatrix.identity(2, 4)
    with pytest.raises(ZeroDivisionError):
        CycloMatrix([[1, i], [i, -1]], 4).inverse()


def test_monomial_inverse():
    z = Cyclotomic.root(6)
    M = CycloMatrix([[0, z, 0], [0, 0, 2], [z * z, 0, 0]], 6)
    assert M.is_monomial()
    assert M @ M.inverse() == CycloMatrix.identity(3, 6)


def test_powers_and_kron():
    P = CycloMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert P ** 3 == CycloMatrix.identity(3)
    assert P ** 0 == CycloMatrix.identity(3)
    assert P ** 2 == P @ P
    A, B = CycloMatrix([[1, 2], [3, 4]]), CycloMatrix([[0, 1], [1, 0]])
    assert A.kron(B).shape == (4, 4)
    assert A.kron(B) @ B.kron(A) == (A @ B).kron(B @ A)


def test_span_rank():
    E = [CycloMatrix([[int(k == 2 * i + j) for j in range(2)] for i in range(2)]) for k in range(4)]
    assert span_rank(E) == 4
    assert span_rank(E + [E[0] + E[1]]) == 4
    assert span_rank([E[0], E[0].scale(3)]) == 1


def test_joint_eigenspaces():
    rng = random.Random(1)
    # conjugate two commuting diagonal order-4 matrices by a random rational matrix
    i = RootOfUnity(4, 1)
    d1 = CycloMatrix.diag([(i ** k).to_cyclotomic(4) for k in (0, 1, 1, 3)], 4)
    d2 = CycloMatrix.diag([1, -1, 1, 1], 4)
    while True:
        P = CycloMatrix([[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)])
        if P.rank() == 4:
            break
    Pi = P.inverse()
    spaces = joint_eigenspaces([P @ d1 @ Pi, P @ d2 @ Pi], [4, 2])
    dims = {values: len(cols) for values, cols in spaces}
    assert dims == {(i ** 0, RootOfUnity(2, 0)): 1, (i, RootOfUnity(2, 1)): 1, (i, RootOfUnity(2, 0)): 1, (i ** 3, RootOfUnity(2, 0)): 1}
    for (l1, l2), cols in spaces:
        for c in cols:
            v = CycloMatrix.from_columns([c], 4)
            assert P @ d1 @ Pi @ v == v.scale(l1.to_cyclotomic(4))
            assert P @ d2 @ Pi @ v == v.scale(l2.to_cyclotomic(4))


def test_json_round_trip():
    M = CycloMatrix([[Cyclotomic.root(3), Fraction(1, 2)], [0, -1]], 3)
    assert CycloMatrix.from_json(M.to_json()) == M

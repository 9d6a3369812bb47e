import itertools
import random

import pytest

from thetabundle.cyclomat import CycloMatrix, span_rank
from thetabundle.errors import FormDegenerateOnBlock, InvalidInput, NoInvariantForm, NonUniqueInvariantForm, RankTooLarge
from thetabundle.exactnum import Cyclotomic, RootOfUnity
from thetabundle.fingroup import FiniteAbelianGroup
from thetabundle.heisenberg import StandardRep, ThetaElement
from thetabundle.selfdual import (
    ORDER,
    AffineCharacter,
    QuadraticFormF2,
    SelfDualThetaGroup,
    SymplecticSpaceF2,
    bit_vectors,
    build_block,
    central_product,
    character_permutation,
    classify_sign,
    eigen_split,
    expected_symmetric_orbit_size,
    form_basis,
    form_coordinates,
    form_weight,
    matrix_orbits,
    normalizer_generators,
    pull_back_form,
    sp_orbits,
    standard_commutator_check,
    transvection_orbits,
)

ONE = RootOfUnity.one()
I = Cyclotomic.root(ORDER, 1)


def random_invertible(rng, n):
    while True:
        P = CycloMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], ORDER)
        if P.rank() == n:
            return P


def test_form_counts_rank_one():
    forms = form_basis(1)
    assert len(forms) == 4
    sym = [G for _, G in forms if G.T == G]
    alt = [G for _, G in forms if G.T == -G]
    assert len(sym) == 3 and len(alt) == 1
    assert all((G.T == G) == chi.is_symmetric for chi, G in forms)


def test_identity_form():
    for r in (1, 2, 3):
        G = dict(form_basis(r))[AffineCharacter((0,) * r, (0,) * r)]
        assert G == CycloMatrix.identity(2 ** r, ORDER)


def test_form_family_rank_two():
    forms = form_basis(2)
    assert len(forms) == 16
    assert span_rank(G for _, G in forms) == 16
    assert sum(G.T == G for _, G in forms) == 10


@pytest.mark.parametrize("r", [1, 2, 3])
def test_form_weights_are_distinct_and_exhaust(r):
    weights = [form_weight(G, r) for _, G in form_basis(r)]
    assert weights == [chi for chi, _ in form_basis(r)]
    assert len(set(weights)) == 4 ** r


def test_weights_against_direct_action():
    # the pulled-back form scales by chi(g) for every theta element, not only generators
    r = 2
    K = FiniteAbelianGroup([2] * r)
    rep = StandardRep(K)
    rng = random.Random(0)
    for chi, G in form_basis(r):
        for _ in range(6):
            g = ThetaElement(RootOfUnity(4, rng.randrange(4)), K.element([rng.randrange(2) for _ in range(r)]), K.character([rng.randrange(2) for _ in range(r)]))
            lhs = pull_back_form(G, rep(g.inverse()).lift(ORDER))
            assert lhs == G.scale(chi.value(g).to_cyclotomic(ORDER))


def test_form_coordinates_round_trip():
    rng = random.Random(1)
    forms = form_basis(2)
    coeffs = [rng.randint(-3, 3) for _ in forms]
    G = CycloMatrix.zeros(4, 4, ORDER)
    for c, (_, B) in zip(coeffs, forms):
        G = G + B.scale(c)
    coords = form_coordinates(G, 2)
    assert {chi: v for chi, v in coords.items()} == {chi: Cyclotomic.rational(c, ORDER) for c, (chi, _) in zip(coeffs, forms) if c}


def test_orbit_sizes():
    assert sp_orbits(1).sizes == [3, 1]
    report = sp_orbits(2)
    assert report.sizes == [10, 6]
    assert report.kinds() == ["symmetric", "alternating"]
    assert report.routes_agree()
    assert report.to_json()["orbits"] == [{"size": 10, "kind": "symmetric"}, {"size": 6, "kind": "alternating"}]


def test_restricted_families_fix_the_trivial_character():
    assert [len(o) for o in matrix_orbits(1, full=False)] == [2, 1, 1]
    assert [len(o) for o in matrix_orbits(2, full=False)] == [9, 6, 1]
    assert [len(o) for o in matrix_orbits(3, full=False)] == [35, 28, 1]


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_symmetric_orbit_formula(r):
    sizes = [len(o) for o in transvection_orbits(r)]
    sym = expected_symmetric_orbit_size(r)
    assert sym == 2 ** (r - 1) * (2 ** r + 1)
    assert sizes == [sym, 4 ** r - sym]


def test_rank_four_matrix_route():
    report = sp_orbits(4)
    assert report.sizes == [136, 120] and report.routes_agree()


def test_generators_preserve_symmetry():
    for r in (1, 2, 3):
        for M in normalizer_generators(r).values():
            for a, b in character_permutation(M, r).items():
                assert a.is_symmetric == b.is_symmetric


def test_rank_limits():
    with pytest.raises(RankTooLarge):
        sp_orbits(5)
    with pytest.raises(InvalidInput):
        sp_orbits(0)


def test_symplectic_space():
    S = SymplecticSpaceF2(2)
    transvections = {S.transvection(v) for v in S.vectors() if any(v)}
    assert len(transvections) == 15
    assert all(S.is_symplectic(T) for T in transvections)
    assert not S.is_symplectic(((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def test_quadratic_form_action():
    q = QuadraticFormF2(((0, 1), (0, 0)))
    K = FiniteAbelianGroup([2, 2])
    rep = StandardRep(K)
    D = q.realization()
    for x in bit_vectors(2):
        for xi in bit_vectors(2):
            g = ThetaElement(ONE, K.element(x), K.character(xi))
            assert D @ rep(g).lift(ORDER) @ D.inverse() == rep(q.act(g)).lift(ORDER)
    for a, b in itertools.product(bit_vectors(2), repeat=2):
        polar = sum(x * y for x, y in zip(q.polar()[0], b)) if a == (1, 0) else None
        if polar is not None:
            s = tuple((u + v) % 2 for u, v in zip(a, b))
            assert polar % 2 == (q(s) + q(a) + q(b)) % 2
    with pytest.raises(InvalidInput):
        QuadraticFormF2(((0, 0), (1, 0)))


def test_blocks():
    D, Q = build_block("dihedral"), build_block("quaternion")
    assert D.generators == [CycloMatrix([[0, 1], [1, 0]], ORDER), CycloMatrix.diag([1, -1], ORDER)]
    assert Q.generators[1] == CycloMatrix.diag([I, -I], ORDER)
    assert classify_sign(D) == 1 and classify_sign(Q) == -1
    assert D.invariant_form.T == D.invariant_form
    assert Q.invariant_form.T == -Q.invariant_form
    assert D.closure_order() == Q.closure_order() == 8
    assert standard_commutator_check(D) and standard_commutator_check(Q)
    with pytest.raises(InvalidInput):
        build_block("cyclic")


def test_central_products():
    D, Q = build_block("dihedral"), build_block("quaternion")
    for a, b, sign in ((D, D, 1), (Q, D, -1), (Q, Q, 1), (D, Q, -1)):
        G = central_product(a, b)
        assert G.rank == 2 and G.sign == sign
        assert classify_sign(G) == sign
        assert standard_commutator_check(G)
        assert all(beta.is_one() for beta in G.betas())
    assert central_product(Q, D).closure_order() == 32


def test_sign_multiplicativity_up_to_rank_three():
    D, Q = build_block("dihedral"), build_block("quaternion")
    for blocks in itertools.product((D, Q), repeat=3):
        G = central_product(central_product(blocks[0], blocks[1]), blocks[2])
        assert classify_sign(G) == blocks[0].sign * blocks[1].sign * blocks[2].sign
        # reordering the factors does not change the sign
        H = central_product(blocks[2], central_product(blocks[1], blocks[0]))
        assert classify_sign(H) == classify_sign(G)


def test_sign_is_conjugation_invariant():
    rng = random.Random(5)
    QD = central_product(build_block("quaternion"), build_block("dihedral"))
    for _ in range(5):
        G = QD.conjugate(random_invertible(rng, 4))
        assert classify_sign(G) == -1
        assert all(beta.is_one() for beta in G.betas())


def test_invariant_form_errors():
    g = CycloMatrix.diag([I, 1], ORDER)
    with pytest.raises(NoInvariantForm):
        swap = CycloMatrix([[0, 1], [1, 0]], ORDER)
        classify_sign(SelfDualThetaGroup(1, 1, [swap, CycloMatrix.diag([2, 1], ORDER)], g))
    with pytest.raises(NonUniqueInvariantForm):
        classify_sign(SelfDualThetaGroup(1, 1, [CycloMatrix.identity(2, ORDER)], g))


def test_eigen_split_single_block():
    D = build_block("dihedral")
    minus = CycloMatrix.identity(2, ORDER).scale(-1)
    split = eigen_split([minus], [2], D.invariant_form, [ONE])
    assert split.kinds() == ["self-paired"] and split.blocks[0].dimension == 2


def hyperbolic_input(rng, include_selfpaired):
    """Central g of order 4 with weights i on U and -i on U*, B pairing them."""
    weights, blocks = [], []
    if include_selfpaired:
        weights += [1, -1, -1]
        S = CycloMatrix([[1, 1], [1, 2]], ORDER)
        blocks.append(CycloMatrix.identity(1, ORDER))
        blocks.append(S)
    weights += [I, I, -I, -I]
    A = random_invertible(rng, 2)
    hyper = CycloMatrix([[0, 0, A[0, 0], A[0, 1]], [0, 0, A[1, 0], A[1, 1]], [A[0, 0], A[1, 0], 0, 0], [A[0, 1], A[1, 1], 0, 0]], ORDER)
    blocks.append(hyper)
    g = CycloMatrix.diag(weights, ORDER)
    B = CycloMatrix.block_diag(*blocks)
    P = random_invertible(rng, len(weights))
    Pinv = P.inverse()
    return P @ g @ Pinv, Pinv.T @ B @ Pinv


def test_eigen_split_hyperbolic_pair():
    rng = random.Random(2)
    g, B = hyperbolic_input(rng, False)
    split = eigen_split([g], [4], B, [ONE])
    assert split.kinds() == ["hyperbolic"]
    assert split.blocks[0].dimension == 4


def test_eigen_split_three_blocks_are_orthogonal():
    rng = random.Random(3)
    for _ in range(3):
        g, B = hyperbolic_input(rng, True)
        split = eigen_split([g], [4], B, [ONE])
        assert sorted(split.kinds()) == ["hyperbolic", "self-paired", "self-paired"]
        for b1, b2 in itertools.combinations(split.blocks, 2):
            for u in b1.basis:
                for v in b2.basis:
                    U, V = CycloMatrix.from_columns([u], ORDER), CycloMatrix.from_columns([v], ORDER)
                    assert (U.T @ B @ V).rows[0][0] == 0


def test_eigen_split_detects_degenerate_form():
    g = CycloMatrix.diag([I, 1], ORDER)
    B = CycloMatrix.diag([0, 1], ORDER)
    with pytest.raises(FormDegenerateOnBlock):
        eigen_split([g], [4], B, [ONE])

"""Verification suites run by ``thetabundle verify``.

Each suite returns a :class:`SuiteResult` with the number of checks made,
the first counterexample found (if any) and a few summary numbers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterator

from . import brauer, heisenberg, pairing, selfdual
from .cyclomat import CycloMatrix
from .exactnum import RootOfUnity
from .fingroup import FiniteAbelianGroup


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    counterexample: object = None
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def expect(self, ok: bool, witness) -> bool:
        self.checks += 1
        if not ok and self.counterexample is None:
            self.counterexample = witness
        return ok

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
            "summary": self.summary,
        }


# --------------------------------------------------------------------------
# generators of test inputs


def abelian_groups(max_order: int) -> Iterator[FiniteAbelianGroup]:
    """All nontrivial finite abelian groups of order <= max_order, canonical form."""

    def chains(limit: int, divides: int | None) -> Iterator[list[int]]:
        for n in range(2, limit + 1):
            if divides is None or divides % n == 0:
                yield [n]
                for rest in chains(limit // n, n):
                    yield [n] + rest

    for factors in chains(max_order, None):
        yield FiniteAbelianGroup(factors)


def random_group(rng: random.Random, max_order: int, max_rank: int = 6) -> FiniteAbelianGroup:
    while True:
        factors = []
        order = 1
        n = rng.randint(2, max_order)
        while len(factors) < max_rank and order * n <= max_order:
            factors.append(n)
            order *= n
            divisors = [d for d in range(2, n + 1) if n % d == 0]
            if rng.random() < 0.3:
                break
            n = rng.choice(divisors)
        if factors:
            return FiniteAbelianGroup(factors)


def random_invertible(rng: random.Random, n: int, bound: int = 3) -> CycloMatrix:
    while True:
        P = CycloMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if P.rank() == n:
            return P


# --------------------------------------------------------------------------
# suites


def heisenberg_suite(max_k: int = 12) -> SuiteResult:
    res = SuiteResult("heisenberg")
    groups = 0
    for K in abelian_groups(max_k):
        groups += 1
        rep = heisenberg.StandardRep(K)
        H = rep.H
        M = K.exponent
        lifts = [heisenberg.ThetaElement.lift(K, h) for h in H.elements()]
        mats = {g.image().coords: rep(g) for g in lifts}
        gens = [heisenberg.ThetaElement.lift(K, h) for h in H.generators()]
        gens.append(heisenberg.ThetaElement(RootOfUnity(M, 1), K.zero(), K.trivial_character()))
        left = gens if K.order > 6 else lifts + gens[-1:]
        for a in left:
            ra = rep(a)
            for b in lifts:
                res.expect(ra @ mats[b.image().coords] == rep(a * b), (K.factors, a, b))
        res.expect(heisenberg.verify_irreducible(rep), (K.factors, "reducible"))
        formula = heisenberg.commutator_pairing(K)
        res.expect(heisenberg.commutator_pairing_from_law(K) == formula, (K.factors, "law pairing"))
        extracted = heisenberg.pairing_from_lifts(H, [mats[g.coords] for g in H.generators()])
        res.expect(extracted == formula, (K.factors, "extracted pairing"))
        res.expect(pairing.homogeneous_index(formula) == K.order == rep.dimension, (K.factors, "index"))
    res.summary = {"groups": groups, "max_k": max_k}
    return res


def uh_suite(max_k: int = 6) -> SuiteResult:
    res = SuiteResult("uh-basis")
    for K in abelian_groups(max_k):
        U = heisenberg.uh_basis(K)
        res.expect(U.rank() == K.order ** 2, (K.factors, "rank"))
        res.expect(U.check_products(), (K.factors, "structure constants"))
        weights = U.conjugation_weights()
        res.expect(len(set(weights.values())) == len(weights) == U.H.order, (K.factors, "weights"))
    return res


def normal_form_suite(count: int = 500, max_order: int = 4096, seed: int = 0) -> SuiteResult:
    res = SuiteResult("normal-form")
    rng = random.Random(seed)
    for _ in range(count):
        H = random_group(rng, max_order)
        e = pairing.random_pairing(H, rng)
        nf = pairing.mumford_normal_form(e)
        res.expect(nf.reconstruct() == e, e)
        orders = nf.block_orders
        res.expect(all(a % b == 0 for a, b in zip(orders, orders[1:])), (e, "chain"))
        d = pairing.homogeneous_index(e)
        res.expect(d == nf.index and d * d * nf.radical.order == H.order, (e, "index"))
    return res


def weight1_suite(count: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("weight1")
    rng = random.Random(seed)
    groups = [K for K in abelian_groups(4)]
    for _ in range(count):
        K = rng.choice(groups)
        m = rng.randint(1, 3)
        W = heisenberg.Weight1Rep.standard(K)
        V = W.direct_sum(*([W] * (m - 1))).conjugate(random_invertible(rng, m * K.order))
        res.expect(heisenberg.decompose_weight1(V).multiplicity == m, (K.factors, m))
    return res


def orbit_suite(max_rank: int = 3) -> SuiteResult:
    res = SuiteResult("orbits")
    sizes = {}
    for r in range(1, max_rank + 1):
        report = selfdual.sp_orbits(r)
        sizes[str(r)] = report.sizes
        sym = selfdual.expected_symmetric_orbit_size(r)
        res.expect(report.sizes == [sym, 4 ** r - sym], (r, report.sizes))
        res.expect(report.kinds() == ["symmetric", "alternating"], (r, report.kinds()))
        res.expect(report.routes_agree(), (r, "transvection route disagrees"))
    res.summary = {"orbit_sizes": sizes}
    return res


def sign_suite(trials: int = 20, seed: int = 0, max_rank: int = 3) -> SuiteResult:
    res = SuiteResult("signs")
    D, Q = selfdual.build_block("dihedral"), selfdual.build_block("quaternion")
    res.expect(selfdual.classify_sign(D) == 1, "D")
    res.expect(selfdual.classify_sign(Q) == -1, "Q")
    level = [D, Q]
    built = list(level)
    for _ in range(max_rank - 1):
        level = [selfdual.central_product(a, b) for a in level for b in (D, Q)]
        built += level
    for G in built:
        res.expect(selfdual.classify_sign(G) == G.sign, (G.rank, G.sign))
        res.expect(selfdual.standard_commutator_check(G), (G.rank, "pairing"))
    rng = random.Random(seed)
    QD = selfdual.central_product(Q, D)
    for _ in range(trials):
        P = random_invertible(rng, QD.dimension)
        res.expect(selfdual.classify_sign(QD.conjugate(P)) == -1, "conjugated Q.D")
    return res


def brauer_suite(g: int | None = None, n: int | None = None) -> SuiteResult:
    res = SuiteResult("brauer")
    if g is not None or n is not None:
        cases = [(g if g is not None else 1, n if n is not None else 2)]
    else:
        cases = [(1, k) for k in range(2, 7)] + [(a, b) for a in (2, 3) for b in (2, 3)]
    orders = {}
    for gg, nn in cases:
        model = brauer.AbelianVarietyModel(gg, nn, (brauer.standard_polarization(gg),) if gg else ())
        B = brauer.brauer_group(model)
        orders[f"g={gg},n={nn}"] = B.order
        res.expect(B.order * B.image.order == nn ** (gg * (2 * gg - 1)), (gg, nn))
        if gg == 1:
            res.expect(B.order == 1, (gg, nn, "elliptic"))
        for e in islice(B.representatives(), 16):
            c = B.class_of(e)
            res.expect((c ** nn).is_trivial(), (gg, nn, "n-torsion"))
            res.expect((c * c.inverse()).is_trivial(), (gg, nn, "inverse"))
    res.summary = {"brauer_orders": orders}
    return res


def cocycle_suite(max_h: int = 16) -> SuiteResult:
    res = SuiteResult("cocycle")
    for K in abelian_groups(int(max_h ** 0.5)):
        H = heisenberg.pair_group(K)
        if H.order > max_h:
            continue
        A = brauer.standard_cocycle(H)
        res.expect(A.is_normalized(), (K.factors, "normalized"))
        res.expect(A.check_cocycle(), (K.factors, "cocycle"))
        res.expect(A.commutator_pairing() == heisenberg.commutator_pairing(K), (K.factors, "pairing"))
        res.expect(A.check_associativity(), (K.factors, "associative"))
        res.expect(A.center_dimension() == 1, (K.factors, "center"))
    return res


def obstruction_suite(max_g: int = 10, max_d: int = 100) -> SuiteResult:
    res = SuiteResult("obstruction")
    for g in range(max_g + 1):
        for d in range(max(2 * g, 0), max_d + 1):
            res.expect(brauer.symmetric_product_obstruction(g, d) == (g <= 1), (g, d))
    return res


def multiplicativity_suite(count: int = 200, seed: int = 0, max_order: int = 64) -> SuiteResult:
    res = SuiteResult("multiplicativity")
    rng = random.Random(seed)
    for _ in range(count):
        H = random_group(rng, max_order)
        e1, e2 = pairing.random_pairing(H, rng), pairing.random_pairing(H, rng)
        p1, p2 = heisenberg.projective_rep(e1), heisenberg.projective_rep(e2)
        res.expect(heisenberg.pairing_from_lifts(H, p1) == e1, (e1, "realization"))
        product = heisenberg.pairing_from_lifts(H, heisenberg.tensor_lifts(p1, p2))
        res.expect(product == e1 * e2, (e1, e2, "tensor"))
        res.expect(heisenberg.pairing_from_lifts(H, heisenberg.dual_lifts(p1)) == e1.inverse(), (e1, "dual"))
        _, induced = pairing.nondegenerate_quotient(e1)
        res.expect((induced ** pairing.homogeneous_index(e1)).is_trivial(), (e1, "d-th power"))
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "heisenberg": heisenberg_suite,
    "uh-basis": uh_suite,
    "normal-form": normal_form_suite,
    "weight1": weight1_suite,
    "orbits": orbit_suite,
    "signs": sign_suite,
    "brauer": brauer_suite,
    "cocycle": cocycle_suite,
    "obstruction": obstruction_suite,
    "multiplicativity": multiplicativity_suite,
}

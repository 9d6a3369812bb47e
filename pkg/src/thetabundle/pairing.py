"""Alternating bilinear pairings on finite abelian groups.

A pairing on ``H = (n_1, ..., n_r)`` is stored as an integer matrix ``E``
with ``e(g_i, g_j) = zeta_{n_1} ** E[i][j]`` on the canonical generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Callable, Sequence

from .errors import DegenerateInput, InternalInvariantViolation, InvalidInput, NotAlternating, ParentMismatch
from .exactnum import RootOfUnity
from .fingroup import (
    FiniteAbelianGroup,
    GroupElement,
    GroupHom,
    Quotient,
    Subgroup,
    dual_group,
    quotient,
    solve_integer,
)


@dataclass(frozen=True)
class AlternatingPairing:
    group: FiniteAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, group: FiniteAbelianGroup, matrix: Sequence[Sequence[int]]):
        N = group.exponent
        r = group.rank
        if len(matrix) != r or any(len(row) != r for row in matrix):
            raise InvalidInput(f"pairing matrix must be {r}x{r}")
        E = tuple(tuple(int(v) % N for v in row) for row in matrix)
        for i in range(r):
            if E[i][i]:
                raise NotAlternating(f"e(g{i}, g{i}) != 1")
            for j in range(r):
                if (E[i][j] + E[j][i]) % N:
                    raise NotAlternating(f"e(g{i}, g{j}) is not inverse to e(g{j}, g{i})")
                g = gcd(group.factors[i], group.factors[j])
                if (E[i][j] * g) % N:
                    raise InvalidInput(f"e(g{i}, g{j}) has order not dividing {g}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "matrix", E)

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> AlternatingPairing:
        return cls(group, [[0] * group.rank for _ in range(group.rank)])

    @classmethod
    def from_function(cls, group: FiniteAbelianGroup, fn: Callable[[GroupElement, GroupElement], RootOfUnity]) -> AlternatingPairing:
        """Build the pairing whose values on generators are given by ``fn``."""
        gens = group.generators()
        N = group.exponent
        rows = []
        for a in gens:
            row = []
            for b in gens:
                v = fn(a, b)
                o, k = v.reduced()
                if N % o:
                    raise InvalidInput(f"value {v} is not an {N}-th root of unity")
                row.append(k * (N // o))
            rows.append(row)
        return cls(group, rows)

    # evaluation -----------------------------------------------------------
    @property
    def order(self) -> int:
        """The root-of-unity order the exponents refer to."""
        return self.group.exponent

    def exponent(self, x: GroupElement, y: GroupElement) -> int:
        if x.parent != self.group or y.parent != self.group:
            raise ParentMismatch("pairing evaluated outside its group")
        total = 0
        for a, row in zip(x.coords, self.matrix):
            if a:
                total += a * sum(c * b for c, b in zip(row, y.coords))
        return total % self.order

    def __call__(self, x: GroupElement, y: GroupElement) -> RootOfUnity:
        return RootOfUnity(self.order, self.exponent(x, y))

    def is_trivial(self) -> bool:
        return not any(any(r) for r in self.matrix)

    # group structure on pairings -----------------------------------------
    def __mul__(self, other: AlternatingPairing) -> AlternatingPairing:
        if other.group != self.group:
            raise ParentMismatch("pairings on different groups")
        return AlternatingPairing(
            self.group, [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        )

    def __pow__(self, m: int) -> AlternatingPairing:
        return pairing_power(self, m)

    def inverse(self) -> AlternatingPairing:
        return pairing_power(self, -1)

    # structure ------------------------------------------------------------
    def epsilon(self) -> GroupHom:
        """x -> e(x, .) as a map into the character group."""
        N = self.order
        G = self.group
        rows = [[E_ij // (N // n_j) for E_ij, n_j in zip(row, G.factors)] for row in self.matrix]
        return GroupHom(G, dual_group(G), rows)

    def radical(self) -> Subgroup:
        return radical(self)

    def pullback(self, f: GroupHom) -> AlternatingPairing:
        """The pairing (x, y) -> e(f x, f y) on ``f.source``."""
        if f.target != self.group:
            raise ParentMismatch("pullback along a map into another group")
        return AlternatingPairing.from_function(f.source, lambda a, b: self(f(a), f(b)))

    def restrict(self, sub: Subgroup) -> AlternatingPairing:
        return self.pullback(sub.embedding)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, doc: dict) -> AlternatingPairing:
        return cls(FiniteAbelianGroup.from_json(doc["group"]), doc["matrix"])


def pairing_power(e: AlternatingPairing, m: int) -> AlternatingPairing:
    return AlternatingPairing(e.group, [[m * v for v in row] for row in e.matrix])


def radical(e: AlternatingPairing) -> Subgroup:
    """H-perp = {x : e(x, y) = 1 for all y}, the kernel of epsilon."""
    return e.epsilon().kernel()


def is_nondegenerate(e: AlternatingPairing) -> bool:
    return radical(e).order == 1


def homogeneous_index(e: AlternatingPairing) -> int:
    """sqrt([H : H-perp])."""
    idx = e.group.order // radical(e).order
    d = isqrt(idx)
    if d * d != idx:
        raise InternalInvariantViolation(f"[H : H-perp] = {idx} is not a square")
    return d


def nondegenerate_quotient(e: AlternatingPairing) -> tuple[Quotient, AlternatingPairing]:
    """H / H-perp with the induced (non-degenerate) pairing."""
    rad = radical(e)
    q = quotient(e.group, rad.generators)
    induced = AlternatingPairing.from_function(q.group, lambda a, b: e(q.lift(a), q.lift(b)))
    return q, induced


def standard_pairing(n: int, twist: int = 1) -> AlternatingPairing:
    """e_d on (Z/n)^2 = Z/n x X(Z/n): e((1,0),(0,chi_1)) = zeta_n ** d."""
    return AlternatingPairing(FiniteAbelianGroup([n, n]), [[0, twist], [-twist, 0]])


def random_pairing(group: FiniteAbelianGroup, rng: random.Random) -> AlternatingPairing:
    N = group.exponent
    r = group.rank
    E = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            g = gcd(group.factors[i], group.factors[j])
            v = rng.randrange(g) * (N // g)
            E[i][j], E[j][i] = v, -v
    return AlternatingPairing(group, E)


# --------------------------------------------------------------------------
# normal form


def block_group(orders: Sequence[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup([n for n in orders for _ in range(2)])


@dataclass
class NormalForm:
    """Decomposition of (H / H-perp, e) into blocks (Z/n_i)^2 with twists d_i.

    ``basis[i] = (x_i, y_i)`` are elements of ``H`` whose images in
    ``H / H-perp`` form the i-th hyperbolic pair, ``e(x_i, y_i) = zeta_{n_i} ** d_i``.
    """

    pairing: AlternatingPairing
    block_orders: list[int]
    twists: list[int]
    basis: list[tuple[GroupElement, GroupElement]]
    radical: Subgroup
    quotient: Quotient
    block_map: GroupHom = field(repr=False)  # blocks -> H / H-perp
    _inverse: GroupHom = field(repr=False)  # H / H-perp -> blocks

    @property
    def blocks(self) -> list[tuple[int, int]]:
        return list(zip(self.block_orders, self.twists))

    @property
    def index(self) -> int:
        out = 1
        for n in self.block_orders:
            out *= n
        return out

    def coordinates(self, h: GroupElement) -> tuple[int, ...]:
        """Block coordinates (a_1, b_1, a_2, b_2, ...) of the image of ``h``."""
        return self._inverse(self.quotient.projection(h)).coords

    def block_exponent(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Exponent of prod_i e_{d_i} as a power of zeta_N, N = exponent(H)."""
        N = self.pairing.order
        total = 0
        for i, (n, d) in enumerate(zip(self.block_orders, self.twists)):
            total += d * (a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i]) * (N // n)
        return total % N

    def reconstruct(self) -> AlternatingPairing:
        gens = self.pairing.group.generators()
        coords = [self.coordinates(g) for g in gens]
        return AlternatingPairing(self.pairing.group, [[self.block_exponent(a, b) for b in coords] for a in coords])

    def to_json(self) -> dict:
        return {
            "blocks": [{"n": n, "d": d} for n, d in self.blocks],
            "basis": [[list(x.coords), list(y.coords)] for x, y in self.basis],
            "radical": self.radical.to_json(),
        }


def _hyperbolic_pairs(e: AlternatingPairing):
    """Greedy symplectic basis of a non-degenerate pairing.

    Yields (n, d, x, y) with x, y in ``e.group``.  Within each step the
    current subgroup C is handled in its own canonical coordinates: x is its
    first canonical generator (maximal order n) and y the lexicographically
    first element with e(x, y) of order n.
    """
    H = e.group
    embed = GroupHom.identity(H)
    local = e
    while not local.group.is_trivial():
        C = local.group
        n = C.exponent
        x = C.generators()[0]
        # local.order == n: exponents are already powers of zeta_n
        y = next(z for z in C.elements() if gcd(local.exponent(x, z), n) == 1)
        d = local.exponent(x, y)
        yield n, d, embed(x), embed(y)
        rows = [[local.exponent(x, g), local.exponent(y, g)] for g in C.generators()]
        complement = GroupHom(C, FiniteAbelianGroup([n, n]), rows).kernel()
        embed = embed.compose(complement.embedding)
        local = local.pullback(complement.embedding)


def mumford_normal_form(e: AlternatingPairing, allow_degenerate: bool = True) -> NormalForm:
    rad = radical(e)
    if rad.order > 1 and not allow_degenerate:
        raise DegenerateInput(f"radical of order {rad.order}")
    H = e.group
    if rad.order == 1:
        q = quotient(H, [])
        induced = AlternatingPairing.from_function(q.group, lambda a, b: e(q.lift(a), q.lift(b)))
    else:
        q, induced = nondegenerate_quotient(e)
    orders, twists, basis, images = [], [], [], []
    for n, d, x, y in _hyperbolic_pairs(induced):
        orders.append(n)
        twists.append(d)
        basis.append((q.lift(x), q.lift(y)))
        images += [x, y]
    B = block_group(orders)
    block_map = GroupHom.from_images(B, q.group, images)
    inverse = _invert(block_map)
    return NormalForm(e, orders, twists, basis, rad, q, block_map, inverse)


def _invert(f: GroupHom) -> GroupHom:
    """Inverse of an isomorphism of finite abelian groups."""
    if f.source.order != f.target.order:
        raise InternalInvariantViolation("block map is not bijective")
    T = f.target
    stacked = [list(r) for r in f.matrix] + [[n if i == j else 0 for j in range(T.rank)] for i, n in enumerate(T.factors)]
    rows = []
    for g in T.generators():
        w = solve_integer(stacked, list(g.coords), T.rank)
        if w is None:
            raise InternalInvariantViolation("block map is not surjective")
        rows.append(w[: f.source.rank])
    inv = GroupHom(T, f.source, rows)
    return inv

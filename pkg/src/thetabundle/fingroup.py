"""Finite abelian groups in invariant-factor form.

Groups are stored as ``(n_1, ..., n_r)`` with ``n_{i+1} | n_i`` (largest
factor first).  Subgroups, quotients, kernels and integer solving all go
through :func:`smith_decomposition`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import InfiniteGroup, InvalidInput, ParentMismatch
from .exactnum import RootOfUnity

IntMatrix = list[list[int]]


# --------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular; ``Vinv = V^-1``."""

    diagonal: list[int]
    U: IntMatrix
    V: IntMatrix
    Vinv: IntMatrix
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_decomposition(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> SmithDecomposition:
    A = [list(map(int, r)) for r in matrix]
    m = len(A)
    k = len(A[0]) if A else (ncols or 0)
    U, V, Vinv = _identity(m), _identity(k), _identity(k)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q:
            A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q:
            for r in A:
                r[dst] -= q * r[src]
            for r in V:
                r[dst] -= q * r[src]
            Vinv[src] = [a + q * b for a, b in zip(Vinv[src], Vinv[dst])]

    for t in range(min(m, k)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                add_row(i, t, A[i][t] // p)
                dirty |= A[i][t] != 0
            for j in range(t + 1, k):
                add_col(j, t, A[t][j] // p)
                dirty |= A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, k) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if t < m and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    diagonal = [A[i][i] for i in range(min(m, k))]
    return SmithDecomposition(diagonal, U, V, Vinv, (m, k))


def invariant_factors_of(relations: Sequence[Sequence[int]], ncols: int) -> list[int]:
    snf = smith_decomposition(relations, ncols)
    return sorted((d for d in snf.diagonal if d > 1), reverse=True)


# --------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]

    def __init__(self, factors: Iterable[int] = ()):
        factors = tuple(int(n) for n in factors)
        for i, n in enumerate(factors):
            if n < 2:
                raise InvalidInput(f"invariant factor {n} < 2")
            if i and factors[i - 1] % n:
                raise InvalidInput(f"divisibility chain broken: {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[0] if self.factors else 1

    def is_trivial(self) -> bool:
        return not self.factors

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list[GroupElement]:
        return [GroupElement(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def elements(self) -> Iterator[GroupElement]:
        """All elements, lexicographic in coordinates."""
        for c in itertools.product(*(range(n) for n in self.factors)):
            yield GroupElement._raw(self, c)

    def characters(self) -> Iterator[DualElement]:
        for c in itertools.product(*(range(n) for n in self.factors)):
            yield DualElement._raw(self, c)

    def character(self, coords: Sequence[int]) -> DualElement:
        return DualElement(self, tuple(coords))

    def trivial_character(self) -> DualElement:
        return DualElement(self, (0,) * self.rank)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(c % n for c, n in zip(coords, self.factors))

    @classmethod
    def from_presentation(cls, relations: Sequence[Sequence[int]], ngens: int) -> FiniteAbelianGroup:
        return smith_normal_form(relations, ngens)[0]

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.factors)})"

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    @classmethod
    def from_json(cls, doc: dict) -> FiniteAbelianGroup:
        return cls(doc["factors"])


def _check_parent(a, b):
    if a.parent != b.parent:
        raise ParentMismatch(f"{a.parent} vs {b.parent}")


@dataclass(frozen=True)
class GroupElement:
    parent: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.parent.rank:
            raise InvalidInput(f"expected {self.parent.rank} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", self.parent.reduce(self.coords))

    @classmethod
    def _raw(cls, parent, coords) -> GroupElement:
        obj = object.__new__(cls)
        object.__setattr__(obj, "parent", parent)
        object.__setattr__(obj, "coords", coords)
        return obj

    def __add__(self, other: GroupElement) -> GroupElement:
        _check_parent(self, other)
        return GroupElement._raw(
            self.parent, tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.parent.factors))
        )

    def __neg__(self) -> GroupElement:
        return GroupElement._raw(self.parent, tuple((-a) % n for a, n in zip(self.coords, self.parent.factors)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement._raw(self.parent, tuple((a * k) % n for a, n in zip(self.coords, self.parent.factors)))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        out = 1
        for a, n in zip(self.coords, self.parent.factors):
            o = n // gcd(a, n)
            out = out * o // gcd(out, o)
        return out

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}


@dataclass(frozen=True)
class DualElement:
    """The character x -> zeta_{n_1} ** sum(c_i * x_i * n_1 / n_i)."""

    parent: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.parent.rank:
            raise InvalidInput(f"expected {self.parent.rank} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", self.parent.reduce(self.coords))

    @classmethod
    def _raw(cls, parent, coords) -> DualElement:
        obj = object.__new__(cls)
        object.__setattr__(obj, "parent", parent)
        object.__setattr__(obj, "coords", coords)
        return obj

    def __call__(self, x: GroupElement) -> RootOfUnity:
        return eval_char(self, x)

    def exponent_at(self, x: GroupElement) -> int:
        """Exponent of the value as a power of zeta_{n_1}."""
        g = self.parent
        e = g.exponent
        return sum(c * a * (e // n) for c, a, n in zip(self.coords, x.coords, g.factors)) % e

    def __add__(self, other: DualElement) -> DualElement:
        _check_parent(self, other)
        return DualElement._raw(
            self.parent, tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.parent.factors))
        )

    def __neg__(self) -> DualElement:
        return DualElement._raw(self.parent, tuple((-a) % n for a, n in zip(self.coords, self.parent.factors)))

    def __sub__(self, other: DualElement) -> DualElement:
        return self + (-other)

    def __mul__(self, k: int) -> DualElement:
        return DualElement._raw(self.parent, tuple((a * k) % n for a, n in zip(self.coords, self.parent.factors)))

    __rmul__ = __mul__

    def is_trivial(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}


def eval_char(chi: DualElement, x: GroupElement) -> RootOfUnity:
    if chi.parent != x.parent:
        raise ParentMismatch(f"{chi.parent} vs {x.parent}")
    return RootOfUnity(chi.parent.exponent, chi.exponent_at(x))


def dual_group(G: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """Character group; same invariant factors, generators dual to G's."""
    return FiniteAbelianGroup(G.factors)


def character_as_element(chi: DualElement) -> GroupElement:
    """The element of dual_group(G) with the same coordinates."""
    return GroupElement(dual_group(chi.parent), chi.coords)


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    """Row ``i`` of ``matrix`` is the image of the i-th source generator."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source, target, matrix):
        rows = tuple(target.reduce(r) for r in matrix)
        if len(rows) != source.rank or any(len(r) != target.rank for r in rows):
            raise InvalidInput("homomorphism matrix has the wrong shape")
        for n, r in zip(source.factors, rows):
            if any((n * c) % t for c, t in zip(r, target.factors)):
                raise InvalidInput(f"generator of order {n} mapped to {r}, not killed by {n}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, G: FiniteAbelianGroup) -> GroupHom:
        return cls(G, G, [[int(i == j) for j in range(G.rank)] for i in range(G.rank)])

    @classmethod
    def from_images(cls, source, target, images: Sequence[GroupElement]) -> GroupHom:
        return cls(source, target, [im.coords for im in images])

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent != self.source:
            raise ParentMismatch(f"{x.parent} vs {self.source}")
        out = [0] * self.target.rank
        for a, row in zip(x.coords, self.matrix):
            if a:
                for j, c in enumerate(row):
                    out[j] += a * c
        return GroupElement(self.target, out)

    def compose(self, inner: GroupHom) -> GroupHom:
        """``self o inner``."""
        if inner.target != self.source:
            raise ParentMismatch("composition of incompatible homomorphisms")
        return GroupHom(inner.source, self.target, [self(GroupElement(self.source, r)).coords for r in inner.matrix])

    def kernel(self) -> Subgroup:
        r, s = self.source.rank, self.target.rank
        stacked = [list(row) for row in self.matrix] + [
            [t if i == j else 0 for j in range(s)] for i, t in enumerate(self.target.factors)
        ]
        gens = [GroupElement(self.source, w[:r]) for w in left_kernel(stacked, s)]
        return Subgroup.generated(self.source, gens)

    def image(self) -> Subgroup:
        return Subgroup.generated(self.target, [GroupElement(self.target, r) for r in self.matrix])

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def is_surjective(self) -> bool:
        return self.image().order == self.target.order

    def is_isomorphism(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix]}


def left_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Generators of {w in Z^m : w @ matrix == 0}."""
    snf = smith_decomposition(matrix, ncols)
    m = snf.shape[0]
    return [snf.U[i] for i in range(m) if i >= len(snf.diagonal) or snf.diagonal[i] == 0]


def solve_integer(matrix: Sequence[Sequence[int]], target: Sequence[int], ncols: int) -> list[int] | None:
    """Some integer row vector ``w`` with ``w @ matrix == target``, or None."""
    m = len(matrix)
    transposed = [[matrix[i][j] for i in range(m)] for j in range(ncols)]
    snf = smith_decomposition(transposed, m)
    rhs = [sum(u * t for u, t in zip(row, target)) for row in snf.U]
    z = [0] * m
    for i, r in enumerate(rhs):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if r:
                return None
        elif r % d:
            return None
        else:
            z[i] = r // d
    return [sum(snf.V[i][j] * z[j] for j in range(m)) for i in range(m)]


# --------------------------------------------------------------------------
# presentations, subgroups, quotients


@dataclass
class Presentation:
    """Result of canonicalising ``Z^k / rowspace(relations)``.

    ``projection[j]`` gives the canonical coordinates of presented generator
    ``j``; ``lifts[i]`` expresses canonical generator ``i`` in presented
    coordinates.
    """

    group: FiniteAbelianGroup
    projection: list[tuple[int, ...]]
    lifts: list[list[int]]


def smith_normal_form(relations: Sequence[Sequence[int]], ngens: int | None = None) -> tuple[FiniteAbelianGroup, Presentation]:
    """Canonical form of the abelian group presented by ``relations``.

    Each row of ``relations`` is a relation among ``ngens`` generators.
    """
    rows = [list(r) for r in relations]
    k = len(rows[0]) if rows else (ngens or 0)
    if ngens is not None and rows and ngens != k:
        raise InvalidInput("relation rows do not match the generator count")
    snf = smith_decomposition(rows, k)
    diag = snf.diagonal + [0] * (k - len(snf.diagonal))
    if any(d == 0 for d in diag):
        raise InfiniteGroup("presentation has a free part")
    keep = sorted((i for i in range(k) if diag[i] > 1), key=lambda i: diag[i], reverse=True)
    group = FiniteAbelianGroup([diag[i] for i in keep])
    projection = [group.reduce([snf.V[j][i] for i in keep]) for j in range(k)]
    lifts = [list(snf.Vinv[i]) for i in keep]
    return group, Presentation(group, projection, lifts)


@dataclass
class Subgroup:
    """A subgroup with its own canonical structure and embedding."""

    ambient: FiniteAbelianGroup
    structure: FiniteAbelianGroup
    generators: list[GroupElement]
    embedding: GroupHom = field(repr=False)

    @classmethod
    def generated(cls, G: FiniteAbelianGroup, elements: Sequence[GroupElement]) -> Subgroup:
        elements = [x for x in elements if not x.is_zero()]
        for x in elements:
            if x.parent != G:
                raise ParentMismatch(f"{x.parent} vs {G}")
        s = len(elements)
        if s == 0:
            trivial = FiniteAbelianGroup()
            return cls(G, trivial, [], GroupHom(trivial, G, []))
        stacked = [list(x.coords) for x in elements] + [
            [n if i == j else 0 for j in range(G.rank)] for i, n in enumerate(G.factors)
        ]
        relations = [w[:s] for w in left_kernel(stacked, G.rank)]
        structure, pres = smith_normal_form(relations, s)
        gens = []
        for lift in pres.lifts:
            coords = [0] * G.rank
            for c, x in zip(lift, elements):
                for j, a in enumerate(x.coords):
                    coords[j] += c * a
            gens.append(GroupElement(G, coords))
        return cls(G, structure, gens, GroupHom.from_images(structure, G, gens))

    @classmethod
    def whole(cls, G: FiniteAbelianGroup) -> Subgroup:
        return cls(G, G, G.generators(), GroupHom.identity(G))

    @property
    def order(self) -> int:
        return self.structure.order

    def index(self) -> int:
        return self.ambient.order // self.order

    def coefficients(self, x: GroupElement) -> list[int] | None:
        """Integers ``c`` with ``x == sum(c_i * generators[i])``, if any."""
        if x.parent != self.ambient:
            raise ParentMismatch(f"{x.parent} vs {self.ambient}")
        G = self.ambient
        stacked = [list(g.coords) for g in self.generators] + [
            [n if i == j else 0 for j in range(G.rank)] for i, n in enumerate(G.factors)
        ]
        if not stacked:
            return [] if x.is_zero() else None
        w = solve_integer(stacked, list(x.coords), G.rank)
        if w is None:
            return None
        return list(self.structure.reduce(w[: len(self.generators)]))

    def __contains__(self, x: GroupElement) -> bool:
        return self.coefficients(x) is not None

    def to_structure(self, x: GroupElement) -> GroupElement:
        c = self.coefficients(x)
        if c is None:
            raise InvalidInput("element not in subgroup")
        return GroupElement(self.structure, c)

    def elements(self) -> Iterator[GroupElement]:
        for y in self.structure.elements():
            yield self.embedding(y)

    def to_json(self) -> dict:
        return {
            "factors": list(self.structure.factors),
            "generators": [list(g.coords) for g in self.generators],
        }


@dataclass
class Quotient:
    group: FiniteAbelianGroup
    projection: GroupHom
    lifts: list[GroupElement]

    def lift(self, y: GroupElement) -> GroupElement:
        out = self.projection.source.zero()
        for a, g in zip(y.coords, self.lifts):
            out = out + g * a
        return out


def quotient(G: FiniteAbelianGroup, elements: Sequence[GroupElement]) -> Quotient:
    relations = [[n if i == j else 0 for j in range(G.rank)] for i, n in enumerate(G.factors)]
    relations += [list(x.coords) for x in elements]
    Q, pres = smith_normal_form(relations, G.rank)
    proj = GroupHom(G, Q, pres.projection)
    lifts = [GroupElement(G, lift) for lift in pres.lifts]
    return Quotient(Q, proj, lifts)

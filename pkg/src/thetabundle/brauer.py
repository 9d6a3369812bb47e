"""A finite model of the n-torsion Brauer group of an abelian variety.

The variety enters only through its dimension ``g``, a level ``n`` and a list
of integral alternating 2g x 2g matrices standing for Neron-Severi classes.
Pairings on X_n = (Z/n)^{2g} are written in coordinates by their
upper-triangular exponents, identifying Hom(Lambda^2 X_n, mu_n) with
(Z/n)^{g(2g-1)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .cyclomat import nullspace
from .errors import DomainError, InvalidInput, NoIsotropicSplitting, NotAlternating, ParentMismatch
from .exactnum import Cyclotomic, RootOfUnity, lcm
from .fingroup import FiniteAbelianGroup, GroupElement, Quotient, Subgroup, quotient, solve_integer
from .heisenberg import pair_group, split_h
from .pairing import AlternatingPairing, mumford_normal_form

Matrix = tuple[tuple[int, ...], ...]


def _check_alternating(E: Sequence[Sequence[int]], size: int) -> Matrix:
    if len(E) != size or any(len(r) != size for r in E):
        raise InvalidInput(f"expected a {size}x{size} matrix")
    for i in range(size):
        if E[i][i]:
            raise NotAlternating("nonzero diagonal entry")
        for j in range(size):
            if E[i][j] != -E[j][i]:
                raise NotAlternating("matrix is not antisymmetric")
    return tuple(tuple(int(v) for v in r) for r in E)


@dataclass(frozen=True)
class AbelianVarietyModel:
    g: int
    level: int
    ns_generators: tuple[Matrix, ...] = ()

    def __post_init__(self):
        if self.g < 0:
            raise InvalidInput("dimension must be non-negative")
        if self.level < 2:
            raise InvalidInput("level must be at least 2")
        gens = tuple(_check_alternating(E, 2 * self.g) for E in self.ns_generators)
        object.__setattr__(self, "ns_generators", gens)

    @property
    def torsion(self) -> FiniteAbelianGroup:
        """X_n = (Z/n)^{2g}."""
        return FiniteAbelianGroup([self.level] * (2 * self.g))

    def at_level(self, m: int) -> AbelianVarietyModel:
        return AbelianVarietyModel(self.g, m, self.ns_generators)

    def to_json(self) -> dict:
        return {"g": self.g, "n": self.level, "ns": [[list(r) for r in E] for E in self.ns_generators]}

    @classmethod
    def from_json(cls, doc: dict) -> AbelianVarietyModel:
        return cls(int(doc["g"]), int(doc["n"]), tuple(doc.get("ns", [])))


def standard_polarization(g: int) -> Matrix:
    """[[0, I], [-I, 0]] on Z^{2g}."""
    return tuple(
        tuple(1 if j == i + g else -1 if i == j + g else 0 for j in range(2 * g)) for i in range(2 * g)
    )


def full_alternating_lattice(g: int) -> tuple[Matrix, ...]:
    """The elementary alternating matrices E_ij - E_ji, i < j."""
    out = []
    for i, j in _pairs(2 * g):
        out.append(tuple(tuple(1 if (a, b) == (i, j) else -1 if (a, b) == (j, i) else 0 for b in range(2 * g)) for a in range(2 * g)))
    return tuple(out)


def _pairs(size: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(size) for j in range(i + 1, size)]


# --------------------------------------------------------------------------
# the pairing group and phi


def pairing_group(g: int, n: int) -> FiniteAbelianGroup:
    """Hom(Lambda^2 X_n, mu_n) as (Z/n)^{g(2g-1)}."""
    return FiniteAbelianGroup([n] * (g * (2 * g - 1)))


def pairing_coordinates(e: AlternatingPairing) -> tuple[int, ...]:
    return tuple(e.matrix[i][j] for i, j in _pairs(e.group.rank))


def pairing_from_coordinates(g: int, n: int, coords: Sequence[int]) -> AlternatingPairing:
    E = [[0] * (2 * g) for _ in range(2 * g)]
    for (i, j), v in zip(_pairs(2 * g), coords):
        E[i][j], E[j][i] = v, -v
    return AlternatingPairing(FiniteAbelianGroup([n] * (2 * g)), E)


def pairing_of_class(E: Matrix, n: int) -> AlternatingPairing:
    """The pairing zeta_n ** E(x, y) on X_n."""
    return AlternatingPairing(FiniteAbelianGroup([n] * len(E)), E)


def _check_level(model: AbelianVarietyModel, e: AlternatingPairing) -> None:
    if e.group != model.torsion:
        raise ParentMismatch(f"pairing lives on {e.group}, expected {model.torsion}")


def phi_image(model: AbelianVarietyModel) -> Subgroup:
    P = pairing_group(model.g, model.level)
    images = [P.element(pairing_coordinates(pairing_of_class(E, model.level))) for E in model.ns_generators]
    return Subgroup.generated(P, images)


@dataclass
class BrauerGroup:
    model: AbelianVarietyModel
    image: Subgroup
    quotient: Quotient

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.quotient.group

    @property
    def order(self) -> int:
        return self.group.order

    def class_of(self, e: AlternatingPairing) -> BrauerClass:
        _check_level(self.model, e)
        return BrauerClass(self.model, e)

    def project(self, e: AlternatingPairing) -> GroupElement:
        _check_level(self.model, e)
        P = self.quotient.projection.source
        return self.quotient.projection(P.element(pairing_coordinates(e)))

    def representative(self, y: GroupElement) -> AlternatingPairing:
        return pairing_from_coordinates(self.model.g, self.model.level, self.quotient.lift(y).coords)

    def representatives(self) -> Iterator[AlternatingPairing]:
        return (self.representative(y) for y in self.group.elements())

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "invariant_factors": list(self.group.factors),
            "phi_image_order": self.image.order,
            "group": "trivial" if self.order == 1 else "nontrivial",
        }


def brauer_group(model: AbelianVarietyModel) -> BrauerGroup:
    image = phi_image(model)
    return BrauerGroup(model, image, quotient(image.ambient, image.generators))


@dataclass(frozen=True)
class BrauerClass:
    model: AbelianVarietyModel
    representative: AlternatingPairing

    def __post_init__(self):
        _check_level(self.model, self.representative)

    def element(self) -> GroupElement:
        return brauer_group(self.model).project(self.representative)

    def __eq__(self, other):
        if not isinstance(other, BrauerClass):
            return NotImplemented
        return self.model == other.model and self.element() == other.element()

    def __hash__(self):
        return hash((self.model, self.element().coords))

    def __mul__(self, other: BrauerClass) -> BrauerClass:
        if other.model != self.model:
            raise ParentMismatch("classes over different models")
        return BrauerClass(self.model, self.representative * other.representative)

    def __pow__(self, k: int) -> BrauerClass:
        return BrauerClass(self.model, self.representative ** k)

    def inverse(self) -> BrauerClass:
        return self ** -1

    def is_trivial(self) -> bool:
        return self.element().is_zero()

    def order(self) -> int:
        return self.element().order()


# --------------------------------------------------------------------------
# projectivization criterion


@dataclass
class ProjectivizationVerdict:
    result: bool
    certificate: list[int] | None = None  # NS coefficients
    separating_character: list[RootOfUnity] | None = None  # values on pairing-group generators

    def to_json(self) -> dict:
        return {
            "is_projectivization": self.result,
            "certificate": self.certificate,
            "separating_character": None
            if self.separating_character is None
            else [c.to_json() for c in self.separating_character],
        }


def is_projectivization(e: AlternatingPairing, model: AbelianVarietyModel) -> ProjectivizationVerdict:
    """Whether ``e`` on X_m comes from a line bundle class, m read off from ``e``."""
    if e.group.rank != 2 * model.g or len(set(e.group.factors)) > 1:
        raise ParentMismatch(f"pairing lives on {e.group}, not on some X_m of dimension {model.g}")
    m = e.group.factors[0] if e.group.factors else model.level
    local = model.at_level(m)
    target = pairing_coordinates(e)
    gens = [pairing_coordinates(pairing_of_class(E, m)) for E in local.ns_generators]
    size = len(target)
    stacked = [list(v) for v in gens] + [[m if i == j else 0 for j in range(size)] for i in range(size)]
    w = solve_integer(stacked, list(target), size)
    if w is not None:
        cert = [c % m for c in w[: len(gens)]]
        check = [sum(c * v[k] for c, v in zip(cert, gens)) % m for k in range(size)]
        assert tuple(check) == target
        return ProjectivizationVerdict(True, certificate=cert)
    br = brauer_group(local)
    y = br.project(e)
    k = next(i for i, c in enumerate(y.coords) if c)
    psi = br.group.character([int(i == k) for i in range(br.group.rank)])
    P = br.quotient.projection.source
    values = [psi(br.quotient.projection(g)) for g in P.generators()]
    return ProjectivizationVerdict(False, separating_character=values)


def evaluate_character(values: Sequence[RootOfUnity], e: AlternatingPairing) -> RootOfUnity:
    out = RootOfUnity.one()
    for v, c in zip(values, pairing_coordinates(e)):
        out = out * v ** c
    return out


def cyclic_decomposition(c: BrauerClass) -> list[tuple[int, int]]:
    """Cyclic algebra descriptors (n_i, d_i): x^n_i, y^n_i central, xy = zeta^d_i yx."""
    return mumford_normal_form(c.representative).blocks


def symmetric_product_obstruction(g: int, d: int) -> bool:
    """Whether n^g equals n (n - 1) ... (n - g + 1) for n = d - g + 1."""
    if g < 0:
        raise DomainError("genus must be non-negative")
    if d <= 2 * g - 2:
        raise DomainError(f"degree {d} must exceed 2g - 2 = {2 * g - 2}")
    n = d - g + 1
    falling = 1
    for k in range(g):
        falling *= n - k
    return n ** g == falling


# --------------------------------------------------------------------------
# twisted group algebras


class CocycleAlgebra:
    """The algebra with basis e_s (s in H) and e_s e_t = a(s, t) e_{s+t}."""

    def __init__(self, H: FiniteAbelianGroup, cocycle: Callable[[GroupElement, GroupElement], RootOfUnity]):
        self.H = H
        self.elements = list(H.elements())
        self.index = {h.coords: i for i, h in enumerate(self.elements)}
        self._table = {(s.coords, t.coords): cocycle(s, t) for s in self.elements for t in self.elements}
        self.order = lcm(H.exponent, *(v.order for v in self._table.values()))

    def a(self, s: GroupElement, t: GroupElement) -> RootOfUnity:
        return self._table[s.coords, t.coords]

    def table(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], RootOfUnity]:
        return dict(self._table)

    def is_normalized(self) -> bool:
        z = self.H.zero()
        return all(self.a(z, s).is_one() and self.a(s, z).is_one() for s in self.elements)

    def check_cocycle(self) -> bool:
        """a(s, t) a(s + t, u) == a(t, u) a(s, t + u) for all triples."""
        a = self.a
        for s in self.elements:
            for t in self.elements:
                st = a(s, t)
                for u in self.elements:
                    if st * a(s + t, u) != a(t, u) * a(s, t + u):
                        return False
        return True

    def commutator_pairing(self) -> AlternatingPairing:
        """e(s, t) = a(s, t) a(t, s)^-1."""
        return AlternatingPairing.from_function(self.H, lambda s, t: self.a(s, t) * self.a(t, s).inverse())

    def basis_vector(self, h: GroupElement) -> dict[int, Cyclotomic]:
        return {self.index[h.coords]: Cyclotomic.one(self.order)}

    def multiply(self, u: dict[int, Cyclotomic], v: dict[int, Cyclotomic]) -> dict[int, Cyclotomic]:
        out: dict[int, Cyclotomic] = {}
        for i, x in u.items():
            s = self.elements[i]
            for j, y in v.items():
                t = self.elements[j]
                k = self.index[(s + t).coords]
                term = x * y * self.a(s, t).to_cyclotomic(self.order)
                out[k] = out[k] + term if k in out else term
        return {k: c for k, c in out.items() if c}

    def check_associativity(self) -> bool:
        basis = [self.basis_vector(h) for h in self.elements]
        for x in basis:
            for y in basis:
                xy = self.multiply(x, y)
                for z in basis:
                    if self.multiply(xy, z) != self.multiply(x, self.multiply(y, z)):
                        return False
        return True

    def center_dimension(self) -> int:
        """dim {z : z e_t = e_t z for all t}, by exact linear algebra."""
        n = len(self.elements)
        rows = []
        for t in self.elements:
            et = self.basis_vector(t)
            # coefficient of e_{s+t} in z e_t - e_t z, as a linear form in z
            by_target: dict[int, dict[int, Cyclotomic]] = {}
            for i, s in enumerate(self.elements):
                es = {i: Cyclotomic.one(self.order)}
                diff = dict(self.multiply(es, et))
                for k, c in self.multiply(et, es).items():
                    diff[k] = diff.get(k, Cyclotomic.zero(self.order)) - c
                for k, c in diff.items():
                    if c:
                        by_target.setdefault(k, {})[i] = c
            rows.extend(by_target.values())
        return len(nullspace(rows, n, self.order))


def standard_cocycle(H: FiniteAbelianGroup) -> CocycleAlgebra:
    """a((x, chi), (x', chi')) = chi'(x) on H = K (+) X(K) in interleaved form."""
    f = H.factors
    if len(f) % 2 or any(f[2 * i] != f[2 * i + 1] for i in range(len(f) // 2)):
        raise NoIsotropicSplitting(f"{H} is not presented as K + X(K)")
    K = FiniteAbelianGroup(list(f[0::2]))
    if pair_group(K) != H:
        raise NoIsotropicSplitting(f"{H} is not presented as K + X(K)")

    def cocycle(s, t):
        x, _ = split_h(K, s)
        _, chi = split_h(K, t)
        return chi(x)

    return CocycleAlgebra(H, cocycle)


def cocycle_from_pairing(e: AlternatingPairing) -> CocycleAlgebra:
    """A bilinear cocycle with commutator ``e``, read off from the normal form.

    With block coordinates (a_i, b_i), a(s, t) = prod_i zeta_{n_i} ** (d_i a_i(s) b_i(t)).
    """
    nf = mumford_normal_form(e)
    coords = {h.coords: nf.coordinates(h) for h in e.group.elements()}

    def cocycle(s, t):
        out = RootOfUnity.one()
        cs, ct = coords[s.coords], coords[t.coords]
        for i, (n, d) in enumerate(nf.blocks):
            out = out * RootOfUnity(n, d * cs[2 * i] * ct[2 * i + 1])
        return out

    return CocycleAlgebra(e.group, cocycle)

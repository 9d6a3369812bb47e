"""Heisenberg groups H(K) = G_m x K x X(K) and their weight-one representations.

Scalars are roots of unity.  The group ``H = K (+) X(K)`` is laid out with
interleaved coordinates ``(x_1, chi_1, x_2, chi_2, ...)`` so that it is in
canonical invariant-factor form.  Representation matrices act on functions
on ``K`` in the basis of delta functions, ordered lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .cyclomat import CycloMatrix, joint_eigenspaces, span_rank
from .errors import NotARepresentation, NotWeightOne, ParentMismatch
from .exactnum import Cyclotomic, RootOfUnity, lcm
from .fingroup import DualElement, FiniteAbelianGroup, GroupElement
from .pairing import AlternatingPairing, mumford_normal_form


def pair_group(K: FiniteAbelianGroup) -> FiniteAbelianGroup:
    """H = K (+) X(K) in interleaved canonical form."""
    return FiniteAbelianGroup([n for n in K.factors for _ in range(2)])


def split_h(K: FiniteAbelianGroup, h: GroupElement) -> tuple[GroupElement, DualElement]:
    return K.element(h.coords[0::2]), K.character(h.coords[1::2])


def join_h(x: GroupElement, chi: DualElement) -> GroupElement:
    if x.parent != chi.parent:
        raise ParentMismatch("x and chi live over different groups")
    coords = [c for pair in zip(x.coords, chi.coords) for c in pair]
    return pair_group(x.parent).element(coords)


# --------------------------------------------------------------------------
# group law


@dataclass(frozen=True)
class ThetaElement:
    scalar: RootOfUnity
    x: GroupElement
    chi: DualElement

    def __post_init__(self):
        if self.x.parent != self.chi.parent:
            raise ParentMismatch("x and chi live over different groups")

    @property
    def K(self) -> FiniteAbelianGroup:
        return self.x.parent

    @classmethod
    def identity(cls, K: FiniteAbelianGroup) -> ThetaElement:
        return cls(RootOfUnity.one(), K.zero(), K.trivial_character())

    @classmethod
    def lift(cls, K: FiniteAbelianGroup, h: GroupElement, scalar: RootOfUnity | None = None) -> ThetaElement:
        x, chi = split_h(K, h)
        return cls(scalar or RootOfUnity.one(), x, chi)

    def image(self) -> GroupElement:
        return join_h(self.x, self.chi)

    def __mul__(self, other: ThetaElement) -> ThetaElement:
        return theta_mul(self, other)

    def inverse(self) -> ThetaElement:
        # (t, x, chi)^-1 = (t^-1 chi(x), -x, -chi)
        return ThetaElement(self.scalar.inverse() * self.chi(self.x), -self.x, -self.chi)

    def __eq__(self, other):
        if not isinstance(other, ThetaElement):
            return NotImplemented
        return self.scalar == other.scalar and self.x == other.x and self.chi == other.chi

    def __hash__(self):
        return hash((self.scalar, self.x, self.chi))

    def to_json(self) -> dict:
        return {"scalar": self.scalar.to_json(), "x": list(self.x.coords), "chi": list(self.chi.coords)}

    @classmethod
    def from_json(cls, K: FiniteAbelianGroup, doc: dict) -> ThetaElement:
        return cls(RootOfUnity.from_json(doc["scalar"]), K.element(doc["x"]), K.character(doc["chi"]))


def theta_mul(a: ThetaElement, b: ThetaElement) -> ThetaElement:
    """(t, x, chi)(t', x', chi') = (t t' chi'(x), x + x', chi + chi')."""
    if a.K != b.K:
        raise ParentMismatch(f"{a.K} vs {b.K}")
    return ThetaElement(a.scalar * b.scalar * b.chi(a.x), a.x + b.x, a.chi + b.chi)


def theta_commutator(a: ThetaElement, b: ThetaElement) -> RootOfUnity:
    c = a * b * a.inverse() * b.inverse()
    assert c.x.is_zero() and c.chi.is_trivial()
    return c.scalar


def theta_elements(K: FiniteAbelianGroup, scalar_order: int = 1) -> Iterator[ThetaElement]:
    for k in range(scalar_order):
        t = RootOfUnity(scalar_order, k)
        for x in K.elements():
            for chi in K.characters():
                yield ThetaElement(t, x, chi)


def commutator_pairing(K: FiniteAbelianGroup) -> AlternatingPairing:
    """e((x, chi), (x', chi')) = chi'(x) chi(x')^-1 on H = K (+) X(K)."""

    def formula(h1, h2):
        x1, c1 = split_h(K, h1)
        x2, c2 = split_h(K, h2)
        return c2(x1) * c1(x2).inverse()

    return AlternatingPairing.from_function(pair_group(K), formula)


def commutator_pairing_from_law(K: FiniteAbelianGroup) -> AlternatingPairing:
    """Same pairing, read off from commutators in the group law."""
    return AlternatingPairing.from_function(
        pair_group(K), lambda h1, h2: theta_commutator(ThetaElement.lift(K, h1), ThetaElement.lift(K, h2))
    )


# --------------------------------------------------------------------------
# representations


class StandardRep:
    """Schroedinger representation ((t, x, chi) f)(y) = t chi(y) f(x + y)."""

    def __init__(self, K: FiniteAbelianGroup):
        self.K = K
        self.basis = list(K.elements())
        self.index = {z.coords: i for i, z in enumerate(self.basis)}
        self.order = max(K.exponent, 1)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def H(self) -> FiniteAbelianGroup:
        return pair_group(self.K)

    def matrix(self, g: ThetaElement) -> CycloMatrix:
        if g.K != self.K:
            raise ParentMismatch(f"{g.K} vs {self.K}")
        n = lcm(self.order, g.scalar.order)
        zero = Cyclotomic.zero(n)
        rows = [[zero] * self.dimension for _ in range(self.dimension)]
        # g . delta_z = t chi(z - x) delta_{z - x}
        for col, z in enumerate(self.basis):
            w = z - g.x
            rows[self.index[w.coords]][col] = (g.scalar * g.chi(w)).to_cyclotomic(n)
        return CycloMatrix._raw(rows, n)

    def __call__(self, g: ThetaElement) -> CycloMatrix:
        return self.matrix(g)

    def lift_matrix(self, h: GroupElement) -> CycloMatrix:
        return self.matrix(ThetaElement.lift(self.K, h))

    def lift_matrices(self) -> list[CycloMatrix]:
        return [self.lift_matrix(h) for h in self.H.elements()]

    def as_weight1(self) -> Weight1Rep:
        a = [self.matrix(ThetaElement(RootOfUnity.one(), g, self.K.trivial_character())) for g in self.K.generators()]
        b = [
            self.matrix(ThetaElement(RootOfUnity.one(), self.K.zero(), self.K.character(g.coords)))
            for g in self.K.generators()
        ]
        return Weight1Rep(self.K, a, b)

    def dump(self) -> list:
        return [[ThetaElement.lift(self.K, h).to_json(), self.lift_matrix(h).to_json()] for h in self.H.elements()]


def standard_rep(K: FiniteAbelianGroup) -> StandardRep:
    return StandardRep(K)


class Weight1Rep:
    """A representation of H(K) given on generators.

    ``a[i]`` is the image of (1, g_i, 0) and ``b[i]`` that of (1, 0, delta_i),
    where g_i are the canonical generators of K and delta_i the dual ones.
    Scalars act by scalar multiplication.
    """

    def __init__(self, K: FiniteAbelianGroup, a: Sequence[CycloMatrix], b: Sequence[CycloMatrix]):
        if len(a) != K.rank or len(b) != K.rank:
            raise NotARepresentation("need one matrix per generator of K and of X(K)")
        self.K = K
        self.a = list(a)
        self.b = list(b)
        shapes = {m.shape for m in self.a + self.b}
        if len(shapes) > 1 or any(r != c for r, c in shapes):
            raise NotARepresentation("generator matrices must be square of one size")
        self.dimension = shapes.pop()[0] if shapes else 1
        self.order = lcm(K.exponent, *(m.order for m in self.a + self.b))

    @property
    def H(self) -> FiniteAbelianGroup:
        return pair_group(self.K)

    def _word(self, x: GroupElement, chi: DualElement) -> CycloMatrix:
        out = CycloMatrix.identity(self.dimension, self.order)
        for k, m in zip(x.coords, self.a):
            if k:
                out = out @ (m ** k)
        for k, m in zip(chi.coords, self.b):
            if k:
                out = out @ (m ** k)
        return out

    def matrix(self, g: ThetaElement) -> CycloMatrix:
        # (t, x, chi) = t chi(x)^-1 (1, x, 0)(1, 0, chi)
        scalar = g.scalar * g.chi(g.x).inverse()
        return self._word(g.x, g.chi).scale(scalar.to_cyclotomic(lcm(self.order, scalar.order)))

    def lift_matrix(self, h: GroupElement) -> CycloMatrix:
        x, chi = split_h(self.K, h)
        return self._word(x, chi)

    def lift_matrices(self) -> list[CycloMatrix]:
        return [self.lift_matrix(h) for h in self.H.elements()]

    def validate(self) -> None:
        """Check the defining relations of H(K) on the generators."""
        K = self.K
        n = self.dimension
        one = CycloMatrix.identity(n, self.order)
        for i, ni in enumerate(K.factors):
            for name, m in (("a", self.a[i]), ("b", self.b[i])):
                if m ** ni != one:
                    raise NotARepresentation(f"{name}[{i}] ** {ni} != 1")
        for i in range(K.rank):
            for j in range(K.rank):
                if i < j:
                    for name, ms in (("a", self.a), ("b", self.b)):
                        if ms[i] @ ms[j] != ms[j] @ ms[i]:
                            raise NotARepresentation(f"{name}[{i}] and {name}[{j}] do not commute")
                # a_i b_j = delta_j(g_i) b_j a_i
                expected = K.character(_unit(K.rank, j))(K.element(_unit(K.rank, i)))
                ab, ba = self.a[i] @ self.b[j], self.b[j] @ self.a[i]
                if ab == ba.scale(expected.to_cyclotomic(lcm(self.order, expected.order))):
                    continue
                c = _ratio(ab, ba)
                if c is None:
                    raise NotARepresentation(f"commutator of a[{i}], b[{j}] is not scalar")
                raise NotWeightOne(f"central scalar {expected} acts as {c}")

    # constructions --------------------------------------------------------
    @classmethod
    def standard(cls, K: FiniteAbelianGroup) -> Weight1Rep:
        return StandardRep(K).as_weight1()

    def direct_sum(self, *others: Weight1Rep) -> Weight1Rep:
        reps = (self,) + others
        a = [CycloMatrix.block_diag(*(r.a[i] for r in reps)) for i in range(self.K.rank)]
        b = [CycloMatrix.block_diag(*(r.b[i] for r in reps)) for i in range(self.K.rank)]
        return Weight1Rep(self.K, a, b)

    def conjugate(self, P: CycloMatrix) -> Weight1Rep:
        """The representation g -> P rho(g) P^-1."""
        Pinv = P.inverse()
        return Weight1Rep(self.K, [P @ m @ Pinv for m in self.a], [P @ m @ Pinv for m in self.b])


def _unit(r: int, i: int) -> list[int]:
    return [int(k == i) for k in range(r)]


def verify_irreducible(rep) -> bool:
    """True iff the lifts of H span all dim x dim matrices."""
    n = rep.dimension
    return span_rank(rep.lift_matrices()) == n * n


# --------------------------------------------------------------------------
# the u_h basis of M_n


@dataclass
class UhBasis:
    K: FiniteAbelianGroup
    elements: list[GroupElement]
    matrices: list[CycloMatrix]

    @property
    def H(self) -> FiniteAbelianGroup:
        return pair_group(self.K)

    def __getitem__(self, h: GroupElement) -> CycloMatrix:
        return self.matrices[self.elements.index(h)]

    def structure_constant(self, h1: GroupElement, h2: GroupElement) -> RootOfUnity:
        """u_h1 u_h2 = c u_{h1 + h2} with c = chi2(x1)."""
        x1, _ = split_h(self.K, h1)
        _, c2 = split_h(self.K, h2)
        return c2(x1)

    def check_products(self) -> bool:
        lookup = {h.coords: m for h, m in zip(self.elements, self.matrices)}
        for h1, m1 in zip(self.elements, self.matrices):
            for h2, m2 in zip(self.elements, self.matrices):
                c = self.structure_constant(h1, h2)
                rhs = lookup[(h1 + h2).coords].scale(c.to_cyclotomic(lcm(m1.order, c.order)))
                if m1 @ m2 != rhs:
                    return False
        return True

    def rank(self) -> int:
        return span_rank(self.matrices)

    def conjugation_weights(self) -> dict[tuple[int, ...], tuple[RootOfUnity, ...]]:
        """Weight of u_h under conjugation by the lifts of generators of H.

        Maps h to (w(g_1), ..., w(g_2r)) with u_g u_h u_g^-1 = w(g) u_h.
        """
        gens = self.H.generators()
        lookup = {h.coords: m for h, m in zip(self.elements, self.matrices)}
        conj = [(lookup[g.coords], lookup[g.coords].inverse()) for g in gens]
        out = {}
        for h, m in zip(self.elements, self.matrices):
            ws = []
            for u, uinv in conj:
                ws.append(_proportionality(u @ m @ uinv, m))
            out[h.coords] = tuple(ws)
        return out


def _proportionality(a: CycloMatrix, b: CycloMatrix) -> RootOfUnity:
    c = _ratio(a, b)
    if c is None:
        raise NotARepresentation("matrices are not proportional by a root of unity")
    return c


def uh_basis(K: FiniteAbelianGroup) -> UhBasis:
    rep = StandardRep(K)
    elements = list(pair_group(K).elements())
    return UhBasis(K, elements, [rep.lift_matrix(h) for h in elements])


# --------------------------------------------------------------------------
# weight-one decomposition


@dataclass
class Weight1Decomposition:
    multiplicity: int
    fixed_vectors: list[list[Cyclotomic]]
    intertwiner: CycloMatrix  # W(K)^m -> V, columns indexed (copy, z)


def decompose_weight1(rep: Weight1Rep) -> Weight1Decomposition:
    rep.validate()
    K = rep.K
    n = K.order
    if rep.dimension % n:
        raise NotARepresentation(f"dimension {rep.dimension} is not a multiple of |K| = {n}")
    one = CycloMatrix.identity(rep.dimension, rep.order)
    stacked = []
    for a in rep.a:
        stacked.extend((a - one).rows)
    if stacked:
        fixed = CycloMatrix._raw(stacked, rep.order).nullspace()
    else:
        fixed = [one.column(j) for j in range(rep.dimension)]
    m = len(fixed)
    if m * n != rep.dimension:
        raise NotARepresentation(f"fixed space of dimension {m} does not match dimension {rep.dimension}")
    # phi_j(delta_z) = 1/n sum_chi chi(z)^-1 rho(1, 0, chi) v_j
    chars = list(K.characters())
    char_mats = [rep._word(K.zero(), chi) for chi in chars]
    N = rep.order
    columns = []
    for v in fixed:
        vcol = CycloMatrix.from_columns([v], N)
        images = [cm @ vcol for cm in char_mats]
        for z in K.elements():
            acc = None
            for chi, img in zip(chars, images):
                term = img.scale(chi(z).inverse().to_cyclotomic(N))
                acc = term if acc is None else acc + term
            columns.append(acc.scale(Fraction(1, n)).column(0))
    T = CycloMatrix.from_columns(columns, N)
    std = StandardRep(K).as_weight1()
    for mv, mw in zip(rep.a + rep.b, std.a + std.b):
        block = CycloMatrix.block_diag(*([mw] * m))
        if T @ block != mv @ T:
            raise NotARepresentation("constructed intertwiner failed to intertwine")
    if T.rank() != rep.dimension:
        raise NotARepresentation("constructed intertwiner is singular")
    return Weight1Decomposition(m, fixed, T)


# --------------------------------------------------------------------------
# projective representations of arbitrary (H, e)


def pairing_from_lifts(H: FiniteAbelianGroup, lifts: Sequence[CycloMatrix]) -> AlternatingPairing:
    """Commutator pairing of a projective representation given on generators.

    e(g_i, g_j) is the scalar c with L_i L_j = c L_j L_i.
    """

    def comm(a: GroupElement, b: GroupElement) -> RootOfUnity:
        i, j = a.coords.index(1), b.coords.index(1)
        c = _ratio(lifts[i] @ lifts[j], lifts[j] @ lifts[i])
        if c is None:
            raise NotARepresentation(f"lifts {i}, {j} do not commute up to a root of unity")
        return c

    return AlternatingPairing.from_function(H, comm)


def _ratio(a: CycloMatrix, b: CycloMatrix) -> RootOfUnity | None:
    """The root of unity c with a == c b, or None."""
    for ra, rb in zip(a.rows, b.rows):
        for x, y in zip(ra, rb):
            if y:
                c = (x / y).as_root_of_unity()
                if c is None or a != b.scale(c.to_cyclotomic(lcm(b.order, c.order))):
                    return None
                return c
            if x:
                return None
    return None


def projective_rep(e: AlternatingPairing) -> list[CycloMatrix]:
    """Lifts of the generators of H realising ``e`` in dimension d = index.

    Built from the normal form: each block (n, d) acts on functions on Z/n
    through the shift and the d-th power of the basic character.
    """
    nf = mumford_normal_form(e)
    block_mats = []
    for n, d in nf.blocks:
        K = FiniteAbelianGroup([n])
        w = StandardRep(K).as_weight1()
        block_mats.append((w.a[0], w.b[0] ** d))
    order = lcm(e.order, *(n for n in nf.block_orders))
    lifts = []
    for g in e.group.generators():
        coords = nf.coordinates(g)
        out = CycloMatrix.identity(1, order)
        for i, (x, y) in enumerate(block_mats):
            out = out.kron((x ** coords[2 * i]) @ (y ** coords[2 * i + 1]))
        lifts.append(out.lift(order))
    return lifts


def tensor_lifts(a: Sequence[CycloMatrix], b: Sequence[CycloMatrix]) -> list[CycloMatrix]:
    return [x.kron(y) for x, y in zip(a, b)]


def dual_lifts(a: Sequence[CycloMatrix]) -> list[CycloMatrix]:
    return [m.inverse().transpose() for m in a]


# --------------------------------------------------------------------------
# splitting when e = 1


@dataclass
class Refusal:
    x: GroupElement
    y: GroupElement
    value: RootOfUnity


@dataclass
class Splitting:
    """A linear lift of the projective representation, simultaneously diagonalised.

    ``eigenbasis`` has the common eigenvectors as columns; ``characters[k]``
    lists the eigenvalues of the linear lifts on column ``k``.
    """

    linear_lifts: list[CycloMatrix]
    eigenbasis: CycloMatrix
    characters: list[tuple[RootOfUnity, ...]]


def split_if_trivial_pairing(H: FiniteAbelianGroup, e: AlternatingPairing, rep) -> Splitting | Refusal:
    """Linear lift of a projective representation of H when e is trivial.

    ``rep`` is either a list of matrices lifting the generators of H or an
    object with ``lift_matrix`` (such as a standard representation).
    """
    if hasattr(rep, "lift_matrix"):
        lifts = [rep.lift_matrix(g) for g in H.generators()]
    else:
        lifts = list(rep)
    if e.group != H:
        raise ParentMismatch("pairing lives on another group")
    if len(lifts) != H.rank:
        raise NotARepresentation("need one lift per generator of H")
    if pairing_from_lifts(H, lifts) != e:
        raise NotARepresentation("lifts do not have the stated commutator pairing")
    gens = H.generators()
    if not e.is_trivial():
        for a in gens:
            for b in gens:
                if not e(a, b).is_one():
                    return Refusal(a, b, e(a, b))
    dim = lifts[0].shape[0] if lifts else 1
    linear = []
    order = lcm(1, *(m.order for m in lifts))
    for m, n in zip(lifts, H.factors):
        c = (m ** n).scalar_value()
        r = c.as_root_of_unity() if c is not None else None
        if r is None:
            raise NotARepresentation("power of a lift is not a scalar root of unity")
        # s ** n == r with s = zeta_{order(r) * n} ** exp(r)
        s = RootOfUnity(r.order * n, r.exp)
        order = lcm(order, s.order)
        linear.append(m.lift(order).scale(s.inverse().to_cyclotomic(order)))
    linear = [m.lift(order) for m in linear]
    columns, characters = [], []
    for values, cols in joint_eigenspaces(linear, H.factors) if linear else [((), CycloMatrix.identity(dim, order).rows)]:
        columns.extend(cols)
        characters.extend([values] * len(cols))
    S = CycloMatrix.from_columns(columns, order)
    return Splitting(linear, S, characters)

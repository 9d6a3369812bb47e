"""Self-dual theta groups over F_2 = K (+) K*, K = (Z/2)^r.

Everything is realized on W = functions on K with the delta basis, using
matrices over Q(i).  A bilinear form is stored as its Gram matrix ``G``,
``B(v, w) = v^T G w``.  A group element ``g`` acts on forms by
``B -> B(g^-1 ., g^-1 .)``; a form is semi-invariant with character beta
when ``g^T G g = beta(g)^-1 G``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .cyclomat import CycloMatrix, joint_eigenspaces, nullspace
from .errors import (
    FormDegenerateOnBlock,
    InternalInvariantViolation,
    InvalidInput,
    NoInvariantForm,
    NonUniqueInvariantForm,
    RankTooLarge,
)
from .exactnum import Cyclotomic, RootOfUnity
from .fingroup import FiniteAbelianGroup
from .heisenberg import StandardRep, ThetaElement, commutator_pairing, pairing_from_lifts
from .pairing import AlternatingPairing

ORDER = 4
MAX_ORBIT_RANK = 4

Bits = tuple[int, ...]


def _dot(a: Bits, b: Bits) -> int:
    return sum(x & y for x, y in zip(a, b)) & 1


def _add(a: Bits, b: Bits) -> Bits:
    return tuple(x ^ y for x, y in zip(a, b))


def bit_vectors(r: int) -> list[Bits]:
    """All of F_2^r in lexicographic order (the delta-basis order of W)."""
    return list(product((0, 1), repeat=r))


def _unit(r: int, k: int) -> Bits:
    return tuple(int(i == k) for i in range(r))


def _mat_vec(M: Sequence[Bits], v: Bits) -> Bits:
    return tuple(_dot(row, v) for row in M)


# --------------------------------------------------------------------------
# linear algebra over F_2


@dataclass(frozen=True)
class SymplecticSpaceF2:
    """F_2^{2r} with w((x, xi), (x', xi')) = <x, xi'> + <x', xi>.

    Vectors are bit tuples of length 2r: the first r bits are x, the rest xi.
    """

    rank: int

    @property
    def form(self) -> tuple[Bits, ...]:
        r = self.rank
        return tuple(
            tuple(int(abs(i - j) == r) for j in range(2 * r)) for i in range(2 * r)
        )

    def omega(self, v: Bits, w: Bits) -> int:
        r = self.rank
        return (_dot(v[:r], w[r:]) + _dot(w[:r], v[r:])) & 1

    def vectors(self) -> list[Bits]:
        return bit_vectors(2 * self.rank)

    def transvection(self, v: Bits) -> tuple[Bits, ...]:
        """Matrix of w -> w + omega(v, w) v."""
        n = 2 * self.rank
        cols = [_add(e, v) if self.omega(v, e) else e for e in (_unit(n, k) for k in range(n))]
        return tuple(tuple(c[i] for c in cols) for i in range(n))

    def is_symplectic(self, M: Sequence[Bits]) -> bool:
        vs = [_unit(2 * self.rank, k) for k in range(2 * self.rank)]
        return all(
            self.omega(_mat_vec(M, a), _mat_vec(M, b)) == self.omega(a, b) for a in vs for b in vs
        )


@dataclass(frozen=True)
class AffineCharacter:
    """chi_{x, xi}: (t, y, eta) -> t^-2 (-1)^(<x, eta> + <y, xi>)."""

    x: Bits
    xi: Bits

    @property
    def vector(self) -> Bits:
        return self.x + self.xi

    @property
    def is_symmetric(self) -> bool:
        return _dot(self.x, self.xi) == 0

    @property
    def kind(self) -> str:
        return "symmetric" if self.is_symmetric else "alternating"

    def value(self, g: ThetaElement) -> RootOfUnity:
        sign = RootOfUnity(2, _dot(self.x, g.chi.coords) + _dot(g.x.coords, self.xi))
        return (g.scalar ** -2) * sign

    def to_json(self) -> dict:
        return {"x": list(self.x), "xi": list(self.xi), "kind": self.kind}


@dataclass(frozen=True)
class QuadraticFormF2:
    """q(x) = sum_{i <= j} U[i][j] x_i x_j over F_2, U upper triangular."""

    matrix: tuple[Bits, ...]

    def __post_init__(self):
        U = self.matrix
        if any(U[i][j] for i in range(len(U)) for j in range(i)):
            raise InvalidInput("quadratic form must be given by an upper-triangular matrix")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Bits) -> int:
        U = self.matrix
        return sum(U[i][j] & x[i] & x[j] for i in range(self.rank) for j in range(i, self.rank)) & 1

    def polar(self) -> tuple[Bits, ...]:
        """Matrix of phi with <phi(x), y> = q(x + y) + q(x) + q(y)."""
        U = self.matrix
        r = self.rank
        return tuple(tuple(0 if i == j else (U[i][j] | U[j][i]) for j in range(r)) for i in range(r))

    def act(self, g: ThetaElement) -> ThetaElement:
        """(t, x, xi) -> (t (-1)^q(x), x, xi + phi(x))."""
        x = g.x.coords
        shift = _mat_vec(self.polar(), x)
        return ThetaElement(g.scalar * RootOfUnity(2, self(x)), g.x, g.chi + g.K.character(shift))

    def realization(self) -> CycloMatrix:
        """diag((-1)^q(y)), which conjugates rep(g) into rep(act(g))."""
        return CycloMatrix.diag([(-1) ** self(y) for y in bit_vectors(self.rank)], ORDER)


# --------------------------------------------------------------------------
# forms


def form_matrix(x: Bits, xi: Bits) -> CycloMatrix:
    """Gram matrix of B_{x, xi}: entry [y][x + y] = (-1)^<y, xi>."""
    basis = bit_vectors(len(x))
    index = {v: i for i, v in enumerate(basis)}
    zero = Cyclotomic.zero(ORDER)
    rows = [[zero] * len(basis) for _ in basis]
    for y in basis:
        rows[index[y]][index[_add(x, y)]] = Cyclotomic.rational(-1 if _dot(y, xi) else 1, ORDER)
    return CycloMatrix._raw(rows, ORDER)


def affine_characters(r: int) -> list[AffineCharacter]:
    vs = bit_vectors(r)
    return [AffineCharacter(x, xi) for x in vs for xi in vs]


def form_basis(r: int) -> list[tuple[AffineCharacter, CycloMatrix]]:
    return [(c, form_matrix(c.x, c.xi)) for c in affine_characters(r)]


def pull_back_form(G: CycloMatrix, g: CycloMatrix) -> CycloMatrix:
    return g.T @ G @ g


def form_weight(G: CycloMatrix, r: int) -> AffineCharacter:
    """Read off the character by which the theta group scales the form.

    Checks every generator (and the scalar i) exactly and raises if ``G``
    is not an eigenvector.
    """
    K = FiniteAbelianGroup([2] * r)
    rep = StandardRep(K)
    x, xi = [], []
    gens = [ThetaElement(RootOfUnity.one(), e, K.trivial_character()) for e in K.generators()]
    gens += [ThetaElement(RootOfUnity.one(), K.zero(), K.character(e.coords)) for e in K.generators()]
    values = []
    for g in gens + [ThetaElement(RootOfUnity(4, 1), K.zero(), K.trivial_character())]:
        ginv = rep(g.inverse())
        c = _ratio(pull_back_form(G, ginv), G)
        if c is None:
            raise InvalidInput("form is not an eigenvector of the theta group")
        values.append(c)
    # chi(1, e_k, 0) = (-1)^xi_k and chi(1, 0, d_k) = (-1)^x_k
    xi = tuple(int(not v.is_one()) for v in values[:r])
    x = tuple(int(not v.is_one()) for v in values[r : 2 * r])
    chi = AffineCharacter(x, xi)
    if values[-1] != RootOfUnity(4, -2):
        raise InvalidInput("scalars do not act with weight -2")
    return chi


def _ratio(a: CycloMatrix, b: CycloMatrix) -> RootOfUnity | None:
    """Root of unity c with a == c b, if any."""
    for ra, rb in zip(a.rows, b.rows):
        for u, v in zip(ra, rb):
            if v:
                c = (u / v).as_root_of_unity()
                if c is None or a != b.scale(c.to_cyclotomic(ORDER)):
                    return None
                return c
            if u:
                return None
    return None


def identify_form(G: CycloMatrix, r: int) -> tuple[AffineCharacter, Cyclotomic]:
    """Write a multiple of some B_{x, xi} as (chi_{x, xi}, scale)."""
    basis = bit_vectors(r)
    row0 = G.rows[0]
    cols = [j for j, v in enumerate(row0) if v]
    if len(cols) != 1:
        raise InternalInvariantViolation("not a multiple of a basic form")
    x = basis[cols[0]]
    c = row0[cols[0]]
    index = {v: i for i, v in enumerate(basis)}
    xi = []
    for k in range(r):
        e = _unit(r, k)
        v = G.rows[index[e]][index[_add(x, e)]]
        xi.append(0 if v == c else 1)
    chi = AffineCharacter(x, tuple(xi))
    if G != form_matrix(chi.x, chi.xi).scale(c):
        raise InternalInvariantViolation("not a multiple of a basic form")
    return chi, c


# --------------------------------------------------------------------------
# orbits


def _permutation_matrix(A: Sequence[Bits]) -> CycloMatrix:
    """delta_y -> delta_{A y}."""
    r = len(A)
    basis = bit_vectors(r)
    index = {v: i for i, v in enumerate(basis)}
    zero, one = Cyclotomic.zero(ORDER), Cyclotomic.one(ORDER)
    rows = [[zero] * len(basis) for _ in basis]
    for j, y in enumerate(basis):
        rows[index[_mat_vec(A, y)]][j] = one
    return CycloMatrix._raw(rows, ORDER)


def fourier_matrix(r: int) -> CycloMatrix:
    basis = bit_vectors(r)
    return CycloMatrix([[(-1) ** _dot(y, xi) for y in basis] for xi in basis], ORDER)


def quarter_phase(r: int, k: int) -> CycloMatrix:
    """diag(i^{y_k}); moves the symmetric character chi_{0,0}."""
    return CycloMatrix.diag([Cyclotomic.root(ORDER, y[k]) for y in bit_vectors(r)], ORDER)


def normalizer_generators(r: int, full: bool = True) -> dict[str, CycloMatrix]:
    """Matrices in GL(W) normalizing the theta group.

    Always contains elementary GL(K) maps, the Fourier swap and the sign
    changes diag((-1)^q(y)) for q = y_i y_j.  With ``full`` also the maps
    diag(i^{y_k}) whose induced automorphisms carry scalar i.
    """
    gens = {}
    for i in range(r):
        for j in range(r):
            if i != j:
                A = [list(_unit(r, k)) for k in range(r)]
                A[i][j] = 1
                gens[f"gl[{i},{j}]"] = _permutation_matrix([tuple(row) for row in A])
    gens["fourier"] = fourier_matrix(r)
    for i in range(r):
        for j in range(i + 1, r):
            U = [[int((a, b) == (i, j)) for b in range(r)] for a in range(r)]
            gens[f"q[{i},{j}]"] = QuadraticFormF2(tuple(map(tuple, U))).realization()
    if full:
        for k in range(r):
            gens[f"phase[{k}]"] = quarter_phase(r, k)
    return gens


def _orbits(points: list, moves: list[Callable]) -> list[list]:
    seen, out = set(), []
    for p in points:
        if p in seen:
            continue
        seen.add(p)
        orbit, queue = [p], deque([p])
        while queue:
            q = queue.popleft()
            for move in moves:
                s = move(q)
                if s not in seen:
                    seen.add(s)
                    orbit.append(s)
                    queue.append(s)
        out.append(sorted(orbit, key=lambda c: c.vector))
    out.sort(key=lambda o: (-len(o), o[0].vector))
    return out


def character_permutation(M: CycloMatrix, r: int) -> dict[AffineCharacter, AffineCharacter]:
    """Action of a normalizing matrix on characters through pulled-back forms."""
    return {chi: identify_form(pull_back_form(G, M), r)[0] for chi, G in form_basis(r)}


def matrix_orbits(r: int, full: bool = True) -> list[list[AffineCharacter]]:
    perms = [character_permutation(M, r) for M in normalizer_generators(r, full).values()]
    return _orbits(affine_characters(r), [p.__getitem__ for p in perms])


def transvection_action(r: int, v: Bits) -> Callable[[AffineCharacter], AffineCharacter]:
    """Affine action of the transvection along ``v`` on weight -2 characters.

    A lift of gamma to the theta group is (t, b) -> (t s(b), gamma b) with
    s(b)^2 = beta(b, b) beta(gamma b, gamma b), beta((x, xi), (x', xi')) =
    (-1)^<x, xi'>.  Since s^2 = (-1)^omega(d, .), pulling back chi_c gives
    chi_{gamma^-1 c + d}.
    """
    space = SymplecticSpaceF2(r)
    T = space.transvection(v)
    n = 2 * r

    def twist(b: Bits) -> int:
        gb = _mat_vec(T, b)
        return (_dot(b[:r], b[r:]) + _dot(gb[:r], gb[r:])) & 1

    # omega(d, (y, eta)) = <d_x, eta> + <y, d_xi>
    d = tuple(twist(_unit(n, r + k)) for k in range(r)) + tuple(twist(_unit(n, k)) for k in range(r))
    for b in space.vectors():
        if space.omega(d, b) != twist(b):
            raise InternalInvariantViolation("lift twist is not a character")

    def move(chi: AffineCharacter) -> AffineCharacter:
        # transvections are involutions
        c = _add(_mat_vec(T, chi.vector), d)
        return AffineCharacter(c[:r], c[r:])

    return move


def transvection_orbits(r: int) -> list[list[AffineCharacter]]:
    moves = [transvection_action(r, v) for v in bit_vectors(2 * r) if any(v)]
    return _orbits(affine_characters(r), moves)


@dataclass
class OrbitReport:
    rank: int
    orbits: list[list[AffineCharacter]]
    transvection_orbits: list[list[AffineCharacter]]
    restricted_orbits: list[list[AffineCharacter]] = field(repr=False)

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def kinds(self) -> list[str]:
        out = []
        for o in self.orbits:
            kinds = {c.kind for c in o}
            out.append(kinds.pop() if len(kinds) == 1 else "mixed")
        return out

    def routes_agree(self) -> bool:
        def as_sets(orbits):
            return sorted(sorted(c.vector for c in o) for o in orbits)

        return as_sets(self.orbits) == as_sets(self.transvection_orbits)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "orbits": [{"size": len(o), "kind": k} for o, k in zip(self.orbits, self.kinds())],
            "transvection_check": self.routes_agree(),
            "restricted_family_orbit_sizes": [len(o) for o in self.restricted_orbits],
        }


def sp_orbits(r: int) -> OrbitReport:
    if r < 1:
        raise InvalidInput("rank must be positive")
    if r > MAX_ORBIT_RANK:
        raise RankTooLarge(f"exhaustive orbit computation is limited to rank <= {MAX_ORBIT_RANK}")
    return OrbitReport(r, matrix_orbits(r), transvection_orbits(r), matrix_orbits(r, full=False))


def expected_symmetric_orbit_size(r: int) -> int:
    return 2 ** (2 * r - 1) + 2 ** (r - 1)


# --------------------------------------------------------------------------
# self-dual theta groups


@dataclass
class SelfDualThetaGroup:
    """Lifted generators over Q(i) and an invariant form.

    Generators come in pairs (lift of (e_k, 0), lift of (0, d_k)) so that the
    underlying projective group is (Z/2)^{2r} in interleaved coordinates.
    """

    rank: int
    sign: int
    generators: list[CycloMatrix]
    invariant_form: CycloMatrix

    @property
    def dimension(self) -> int:
        return 2 ** self.rank

    def betas(self) -> list[RootOfUnity]:
        """beta(g) with g^T B g = beta(g)^-1 B for each generator."""
        out = []
        for g in self.generators:
            c = _ratio(pull_back_form(self.invariant_form, g), self.invariant_form)
            if c is None:
                raise InvalidInput("generator does not preserve the form up to scalar")
            out.append(c.inverse())
        return out

    def commutator_pairing(self) -> AlternatingPairing:
        return pairing_from_lifts(FiniteAbelianGroup([2] * (2 * self.rank)), self.generators)

    def closure_order(self) -> int:
        """Size of the finite matrix group generated by the lifts."""
        key = lambda m: tuple(v.coeffs for row in m.lift(ORDER).rows for v in row)
        start = CycloMatrix.identity(self.dimension, ORDER)
        seen = {key(start)}
        queue = deque([start])
        while queue:
            m = queue.popleft()
            for g in self.generators:
                p = m @ g
                k = key(p)
                if k not in seen:
                    seen.add(k)
                    queue.append(p)
        return len(seen)

    def conjugate(self, P: CycloMatrix) -> SelfDualThetaGroup:
        """Transport along v -> P v."""
        Pinv = P.inverse()
        return SelfDualThetaGroup(
            self.rank, self.sign, [P @ g @ Pinv for g in self.generators], Pinv.T @ self.invariant_form @ Pinv
        )

    def to_json(self) -> dict:
        return {"rank": self.rank, "sign": self.sign, "dimension": self.dimension}


def build_block(kind: str) -> SelfDualThetaGroup:
    if kind == "dihedral":
        gens = [CycloMatrix([[0, 1], [1, 0]], ORDER), CycloMatrix.diag([1, -1], ORDER)]
        return SelfDualThetaGroup(1, 1, gens, CycloMatrix.identity(2, ORDER))
    if kind == "quaternion":
        i = Cyclotomic.root(ORDER, 1)
        gens = [CycloMatrix([[0, 1], [-1, 0]], ORDER), CycloMatrix.diag([i, -i], ORDER)]
        return SelfDualThetaGroup(1, -1, gens, CycloMatrix([[0, 1], [-1, 0]], ORDER))
    raise InvalidInput(f"unknown block kind {kind!r}")


def central_product(a: SelfDualThetaGroup, b: SelfDualThetaGroup) -> SelfDualThetaGroup:
    ia = CycloMatrix.identity(a.dimension, ORDER)
    ib = CycloMatrix.identity(b.dimension, ORDER)
    gens = [g.kron(ib) for g in a.generators] + [ia.kron(g) for g in b.generators]
    return SelfDualThetaGroup(a.rank + b.rank, a.sign * b.sign, gens, a.invariant_form.kron(b.invariant_form))


def invariant_forms(generators: Sequence[CycloMatrix]) -> list[CycloMatrix]:
    """Basis of {X : g^T X g = X for every generator}."""
    n = generators[0].shape[0]
    order = ORDER
    rows = []
    for g in generators:
        g = g.lift(order)
        colnz = [[(c, g.rows[c][a]) for c in range(n) if g.rows[c][a]] for a in range(n)]
        for a in range(n):
            for b in range(n):
                row = {}
                for c, gca in colnz[a]:
                    for d, gdb in colnz[b]:
                        k = c * n + d
                        v = row.get(k, Cyclotomic.zero(order)) + gca * gdb
                        row[k] = v
                k = a * n + b
                row[k] = row.get(k, Cyclotomic.zero(order)) - 1
                rows.append({j: v for j, v in row.items() if v})
    out = []
    for vec in nullspace(rows, n * n, order):
        out.append(CycloMatrix([[vec.get(a * n + b, 0) for b in range(n)] for a in range(n)], order))
    return out


def form_coordinates(G: CycloMatrix, r: int) -> dict[AffineCharacter, Cyclotomic]:
    """Coefficients of G in the basis B_{x, xi}."""
    basis = bit_vectors(r)
    index = {v: i for i, v in enumerate(basis)}
    out = {}
    for chi in affine_characters(r):
        acc = Cyclotomic.zero(ORDER)
        for y in basis:
            v = G.rows[index[y]][index[_add(chi.x, y)]]
            acc = acc - v if _dot(y, chi.xi) else acc + v
        c = acc * Fraction(1, len(basis))
        if c:
            out[chi] = c
    return out


def classify_sign(G: SelfDualThetaGroup) -> int:
    """+1 if the invariant form of the given lifts is symmetric, -1 if alternating."""
    forms = invariant_forms(G.generators)
    if not forms:
        raise NoInvariantForm("no bilinear form is invariant under the given lifts")
    if len(forms) > 1:
        raise NonUniqueInvariantForm(f"{len(forms)}-dimensional space of invariant forms")
    X = forms[0]
    if X.T == X:
        return 1
    if X.T == -X:
        return -1
    raise InternalInvariantViolation("invariant form is neither symmetric nor alternating")


# --------------------------------------------------------------------------
# orthogonal eigen-decomposition


@dataclass
class EigenBlock:
    kind: str  # "self-paired" or "hyperbolic"
    weights: list[tuple[RootOfUnity, ...]]
    basis: list[list[Cyclotomic]]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class EigenSplit:
    blocks: list[EigenBlock]

    def kinds(self) -> list[str]:
        return [b.kind for b in self.blocks]


def _bilinear(B: CycloMatrix, u: list[Cyclotomic], v: list[Cyclotomic]) -> Cyclotomic:
    order = B.order
    acc = Cyclotomic.zero(order)
    for i, ui in enumerate(u):
        if ui:
            for j, bij in enumerate(B.rows[i]):
                if bij and v[j]:
                    acc = acc + ui * bij * v[j]
    return acc


def eigen_split(
    central: Sequence[CycloMatrix], orders: Sequence[int], B: CycloMatrix, beta: Sequence[RootOfUnity]
) -> EigenSplit:
    """Split V into weight spaces of commuting central elements.

    ``central[k]`` has ``central[k] ** orders[k] == 1`` and satisfies
    ``g^T B g = beta[k]^-1 B``.  The weight lambda pairs with
    ``(lambda beta)^-1``; self-paired weights give one block, the others are
    grouped into hyperbolic pairs.
    """
    n = B.shape[0]
    for g, m, b in zip(central, orders, beta):
        if g ** m != CycloMatrix.identity(n):
            raise InvalidInput("central element does not have the stated order")
        if pull_back_form(B, g) != B.scale(b.inverse().to_cyclotomic()):
            raise InvalidInput("form is not semi-invariant with the stated character")
    if central:
        spaces = dict(joint_eigenspaces(central, orders))
    else:
        spaces = {(): CycloMatrix.identity(n, B.order).rows}
    partner = {lam: tuple((l * b).inverse() for l, b in zip(lam, beta)) for lam in spaces}
    blocks, used = [], set()
    for lam in spaces:
        if lam in used:
            continue
        mu = partner[lam]
        if mu == lam:
            blocks.append(EigenBlock("self-paired", [lam], spaces[lam]))
        elif mu in spaces:
            blocks.append(EigenBlock("hyperbolic", [lam, mu], spaces[lam] + spaces[mu]))
            used.add(mu)
        else:
            raise FormDegenerateOnBlock(f"weight {lam} has no partner weight {mu}")
        used.add(lam)
    for lam, U in spaces.items():
        for mu, V in spaces.items():
            if mu != partner[lam] and any(_bilinear(B, u, v) for u in U for v in V):
                raise FormDegenerateOnBlock(f"weights {lam} and {mu} are not orthogonal")
    for block in blocks:
        gram = CycloMatrix([[_bilinear(B, u, v) for v in block.basis] for u in block.basis], B.order)
        if gram.rank() != block.dimension:
            raise FormDegenerateOnBlock(f"form is degenerate on block {block.weights}")
    return EigenSplit(blocks)


def standard_commutator_check(G: SelfDualThetaGroup) -> bool:
    """The projective group carries the standard F_2 symplectic pairing."""
    return G.commutator_pairing() == commutator_pairing(FiniteAbelianGroup([2] * G.rank))

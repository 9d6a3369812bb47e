"""Dense matrices over Q(zeta_N) with exact Gaussian elimination.

Products and elimination skip zero entries, which keeps the monomial
matrices of Heisenberg representations cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ZeroInversion
from .exactnum import Cyclotomic, RootOfUnity, lcm

Vector = dict  # column index -> nonzero Cyclotomic


def _order_of(value) -> int:
    if isinstance(value, (Cyclotomic, RootOfUnity)):
        return value.order
    return 1


class CycloMatrix:
    __slots__ = ("order", "rows")

    def __init__(self, rows: Iterable[Iterable], order: int | None = None):
        rows = [list(r) for r in rows]
        n = 1 if order is None else order
        for r in rows:
            for v in r:
                n = lcm(n, _order_of(v))
        self.order = n
        self.rows = [[Cyclotomic.coerce(v, n) for v in r] for r in rows]

    @classmethod
    def _raw(cls, rows, order) -> CycloMatrix:
        obj = object.__new__(cls)
        obj.order = order
        obj.rows = rows
        return obj

    @classmethod
    def identity(cls, n: int, order: int = 1) -> CycloMatrix:
        one, zero = Cyclotomic.one(order), Cyclotomic.zero(order)
        return cls._raw([[one if i == j else zero for j in range(n)] for i in range(n)], order)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, order: int = 1) -> CycloMatrix:
        zero = Cyclotomic.zero(order)
        return cls._raw([[zero] * ncols for _ in range(nrows)], order)

    @classmethod
    def diag(cls, values: Sequence, order: int | None = None) -> CycloMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], order)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], order: int | None = None) -> CycloMatrix:
        if not columns:
            raise ValueError("need at least one column")
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))], order)

    # shape ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij) -> Cyclotomic:
        i, j = ij
        return self.rows[i][j]

    def lift(self, m: int) -> CycloMatrix:
        if m == self.order:
            return self
        return CycloMatrix._raw([[v.lift(m) for v in r] for r in self.rows], m)

    def _align(self, other: CycloMatrix) -> tuple[CycloMatrix, CycloMatrix]:
        if self.order == other.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    # arithmetic -----------------------------------------------------------
    def __matmul__(self, other: CycloMatrix) -> CycloMatrix:
        a, b = self._align(other)
        n = a.order
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        ncols = b.shape[1]
        zero = Cyclotomic.zero(n)
        brows = [[(j, v) for j, v in enumerate(r) if v] for r in b.rows]
        out = []
        for r in a.rows:
            acc = {}
            for k, x in enumerate(r):
                if x:
                    for j, y in brows[k]:
                        t = x * y
                        acc[j] = acc[j] + t if j in acc else t
            out.append([acc.get(j, zero) for j in range(ncols)])
        return CycloMatrix._raw(out, n)

    def scale(self, c) -> CycloMatrix:
        c = Cyclotomic.coerce(c, self.order)
        m = lcm(self.order, c.order)
        a = self.lift(m)
        c = c.lift(m)
        return CycloMatrix._raw([[v * c if v else v for v in r] for r in a.rows], m)

    def __add__(self, other: CycloMatrix) -> CycloMatrix:
        a, b = self._align(other)
        return CycloMatrix._raw([[x + y for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)], a.order)

    def __neg__(self) -> CycloMatrix:
        return CycloMatrix._raw([[-x for x in r] for r in self.rows], self.order)

    def __sub__(self, other: CycloMatrix) -> CycloMatrix:
        return self + (-other)

    def __pow__(self, k: int) -> CycloMatrix:
        if k < 0:
            return self.inverse() ** (-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result @ base
            k >>= 1
            if k:
                base = base @ base
        return CycloMatrix.identity(self.shape[0], self.order) if result is None else result

    def transpose(self) -> CycloMatrix:
        return CycloMatrix._raw([list(c) for c in zip(*self.rows)], self.order)

    @property
    def T(self) -> CycloMatrix:
        return self.transpose()

    def kron(self, other: CycloMatrix) -> CycloMatrix:
        a, b = self._align(other)
        zero = Cyclotomic.zero(a.order)
        out = []
        for ra in a.rows:
            for rb in b.rows:
                out.append([x * y if x and y else zero for x in ra for y in rb])
        return CycloMatrix._raw(out, a.order)

    @staticmethod
    def block_diag(*mats: CycloMatrix) -> CycloMatrix:
        n = lcm(*(m.order for m in mats))
        mats = [m.lift(n) for m in mats]
        total = sum(m.shape[1] for m in mats)
        zero = Cyclotomic.zero(n)
        out = []
        offset = 0
        for m in mats:
            w = m.shape[1]
            for r in m.rows:
                out.append([zero] * offset + list(r) + [zero] * (total - offset - w))
            offset += w
        return CycloMatrix._raw(out, n)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> CycloMatrix:
        return CycloMatrix._raw([[self.rows[i][j] for j in cols] for i in rows], self.order)

    def column(self, j: int) -> list[Cyclotomic]:
        return [r[j] for r in self.rows]

    def flatten(self) -> list[Cyclotomic]:
        return [v for r in self.rows for v in r]

    # predicates -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._align(other)
        return all(x.coeffs == y.coeffs for r, s in zip(a.rows, b.rows) for x, y in zip(r, s))

    __hash__ = None

    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def scalar_value(self) -> Cyclotomic | None:
        """Return c if the matrix equals c * identity, else None."""
        if not self.is_square() or not self.rows:
            return None
        c = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if i == j:
                    if v.coeffs != c.coeffs:
                        return None
                elif v:
                    return None
        return c

    def is_monomial(self) -> bool:
        if not self.is_square():
            return False
        cols = set()
        for r in self.rows:
            nz = [j for j, v in enumerate(r) if v]
            if len(nz) != 1 or nz[0] in cols:
                return False
            cols.add(nz[0])
        return True

    # elimination ----------------------------------------------------------
    def sparse_rows(self) -> list[Vector]:
        return [{j: v for j, v in enumerate(r) if v} for r in self.rows]

    def rank(self) -> int:
        return len(rref(self.sparse_rows(), self.shape[1])[0])

    def nullspace(self) -> list[list[Cyclotomic]]:
        """Basis of {v : self @ v == 0} as lists of entries."""
        ncols = self.shape[1]
        return [
            [vec.get(j, Cyclotomic.zero(self.order)) for j in range(ncols)]
            for vec in nullspace(self.sparse_rows(), ncols, self.order)
        ]

    def inverse(self) -> CycloMatrix:
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        if self.is_monomial():
            zero = Cyclotomic.zero(self.order)
            out = [[zero] * n for _ in range(n)]
            for i, r in enumerate(self.rows):
                j = next(j for j, v in enumerate(r) if v)
                out[j][i] = r[j].inverse()
            return CycloMatrix._raw(out, self.order)
        one = Cyclotomic.one(self.order)
        aug = []
        for i, r in enumerate(self.rows):
            row = {j: v for j, v in enumerate(r) if v}
            row[n + i] = one
            aug.append(row)
        pivots, reduced = rref(aug, 2 * n)
        if len(pivots) < n or pivots[n - 1] >= n:
            raise ZeroInversion("matrix is singular")
        zero = Cyclotomic.zero(self.order)
        return CycloMatrix._raw([[row.get(n + j, zero) for j in range(n)] for row in reduced[:n]], self.order)

    def __repr__(self):
        return f"CycloMatrix(order={self.order}, rows={self.rows!r})"

    # json -----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"order": self.order, "rows": [[v.to_json()["coeffs"] for v in r] for r in self.rows]}

    @classmethod
    def from_json(cls, doc: dict) -> CycloMatrix:
        n = int(doc["order"])
        return cls([[Cyclotomic(n, [Fraction(c) for c in v]) for v in r] for r in doc["rows"]], n)


# --------------------------------------------------------------------------
# sparse elimination on dict rows


def _axpy(target: Vector, c: Cyclotomic, src: Vector) -> None:
    """target -= c * src, dropping zeros."""
    for j, v in src.items():
        t = c * v
        if j in target:
            new = target[j] - t
            if new:
                target[j] = new
            else:
                del target[j]
        else:
            target[j] = -t


def rref(rows: list[Vector], ncols: int) -> tuple[list[int], list[Vector]]:
    """Reduced row echelon form; returns (pivot columns, nonzero rows)."""
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    done: list[Vector] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(rows) if col in r), None)
        if idx is None:
            continue
        prow = rows.pop(idx)
        inv = prow[col].inverse()
        prow = {j: v * inv for j, v in prow.items()}
        for r in rows:
            if col in r:
                _axpy(r, r[col], prow)
        for r in done:
            if col in r:
                _axpy(r, r[col], prow)
        rows = [r for r in rows if r]
        pivots.append(col)
        done.append(prow)
        if not rows:
            break
    return pivots, done


def nullspace(rows: list[Vector], ncols: int, order: int = 1) -> list[Vector]:
    pivots, reduced = rref(rows, ncols)
    pivset = set(pivots)
    one = Cyclotomic.one(order)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: one}
        for p, r in zip(pivots, reduced):
            if free in r:
                vec[p] = -r[free]
        basis.append(vec)
    return basis


class EchelonBasis:
    """Incrementally maintained echelon basis of a span of sparse vectors."""

    def __init__(self):
        self.pivot_rows: dict[int, Vector] = {}

    def reduce(self, vec: Vector) -> Vector:
        vec = dict(vec)
        while vec:
            col = min(vec)
            prow = self.pivot_rows.get(col)
            if prow is None:
                return vec
            _axpy(vec, vec[col], prow)
        return vec

    def add(self, vec: Vector) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        vec = self.reduce(vec)
        if not vec:
            return False
        col = min(vec)
        inv = vec[col].inverse()
        self.pivot_rows[col] = {j: v * inv for j, v in vec.items()}
        return True

    def __len__(self):
        return len(self.pivot_rows)


def span_rank(matrices: Iterable[CycloMatrix]) -> int:
    """Dimension of the linear span of the given matrices."""
    basis = EchelonBasis()
    for m in matrices:
        basis.add({k: v for k, v in enumerate(m.flatten()) if v})
    return len(basis)


def common_order(*items) -> int:
    return lcm(*(_order_of(x) if not isinstance(x, CycloMatrix) else x.order for x in items))


def joint_eigenspaces(mats: Sequence[CycloMatrix], orders: Sequence[int]) -> list[tuple[tuple[RootOfUnity, ...], list[list[Cyclotomic]]]]:
    """Common eigenspaces of commuting matrices with ``m ** n == 1``.

    Returns (eigenvalues, basis columns) for each nonzero joint eigenspace,
    found by multiplying spectral projectors (1/n) sum_j lam^-j m^j.
    """
    if not mats:
        raise ValueError("need at least one matrix")
    dim = mats[0].shape[0]
    order = lcm(*(m.order for m in mats), *orders)
    pieces = [((), CycloMatrix.identity(dim, order))]
    for m, n in zip(mats, orders):
        m = m.lift(order)
        powers = [CycloMatrix.identity(dim, order)]
        for _ in range(n - 1):
            powers.append(powers[-1] @ m)
        refined = []
        for values, P in pieces:
            for k in range(n):
                lam = RootOfUnity(n, k)
                proj = powers[0]
                for j in range(1, n):
                    proj = proj + powers[j].scale((lam ** -j).to_cyclotomic(order))
                Q = P @ proj.scale(Fraction(1, n))
                if any(v for row in Q.rows for v in row):
                    refined.append((values + (lam,), Q))
        pieces = refined
    out = []
    for values, P in pieces:
        basis = EchelonBasis()
        cols = []
        for j in range(dim):
            col = P.column(j)
            if basis.add({i: v for i, v in enumerate(col) if v}):
                cols.append(col)
        out.append((values, cols))
    return out

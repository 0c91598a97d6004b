"""Polynomial matrices, graded maps, minors, compounds and rank over the fraction field."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, RingMismatchError, ShapeError
from .linalg import dense_rank
from .ring import ANY_DEGREE, Polynomial, PolyRing, is_homogeneous
from .claims import claims

COFACTOR_LIMIT = 4


class PolyMatrix:
    """An r x c matrix of polynomials over a common ring (immutable)."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolyRing, entries: Sequence[Sequence]):
        rows = [tuple(_coerce_entry(ring, e) for e in row) for row in entries]
        if not rows or not rows[0]:
            raise ShapeError("matrices need at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeError("ragged matrix")
        self.ring = ring
        self.rows = len(rows)
        self.cols = width
        self.entries = tuple(rows)

    @classmethod
    def zeros(cls, ring: PolyRing, rows: int, cols: int) -> "PolyMatrix":
        return cls(ring, [[ring.zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> "PolyMatrix":
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key) -> Polynomial:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(row[j] for row in self.entries)

    def tolist(self) -> list[list[Polynomial]]:
        return [list(row) for row in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return not any(e for row in self.entries for e in row)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [list(col) for col in zip(*self.entries)])

    transpose = T

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[-a for a in row] for row in self.entries])

    def scale(self, c) -> "PolyMatrix":
        if isinstance(c, Polynomial):
            return PolyMatrix(self.ring, [[a * c for a in row] for row in self.entries])
        return PolyMatrix(self.ring, [[a.scale(c) for a in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ring.zero
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for row in self.entries:
            new = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return PolyMatrix(self.ring, out)

    def _check_same(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMatrix":
        rows, cols = list(rows), list(cols)
        for i in rows:
            if not 0 <= i < self.rows:
                raise ShapeError(f"row index {i} out of range")
        for j in cols:
            if not 0 <= j < self.cols:
                raise ShapeError(f"column index {j} out of range")
        return PolyMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows])

    def delete_row(self, i: int) -> "PolyMatrix":
        return self.submatrix([k for k in range(self.rows) if k != i], range(self.cols))

    def delete_cols(self, cols: Iterable[int]) -> "PolyMatrix":
        drop = set(cols)
        return self.submatrix(range(self.rows), [j for j in range(self.cols) if j not in drop])

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        if self.cols != other.cols:
            raise ShapeError("column counts differ")
        return PolyMatrix(self.ring, list(self.entries) + list(other.entries))

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_same(other)
        if self.rows != other.rows:
            raise ShapeError("row counts differ")
        return PolyMatrix(self.ring, [list(a) + list(b) for a, b in zip(self.entries, other.entries)])

    def change_ring(self, ring: PolyRing) -> "PolyMatrix":
        return PolyMatrix(ring, [[e.change_ring(ring) for e in row] for row in self.entries])

    def evaluate(self, point) -> list[list]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def det(self) -> Polynomial:
        return determinant(self)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, ring: PolyRing, data: Mapping) -> "PolyMatrix":
        m = cls(ring, data["entries"])
        if "rows" in data and data["rows"] != m.rows or "cols" in data and data["cols"] != m.cols:
            raise ShapeError("declared shape does not match entries")
        return m

    def __str__(self):
        cells = [[str(e) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {self.ring!r})"


def _coerce_entry(ring: PolyRing, e) -> Polynomial:
    if isinstance(e, Polynomial):
        if e.ring != ring:
            raise RingMismatchError(f"entry over {e.ring!r}, matrix over {ring!r}")
        return e
    if isinstance(e, str):
        return ring.parse(e)
    return ring.constant(e)


class GradedMap:
    """A matrix read as a map sum R(-b_j) -> sum R(-a_i) acting on column vectors."""

    __slots__ = ("matrix", "target_shifts", "source_shifts")

    def __init__(self, matrix: PolyMatrix, target_shifts: Sequence[int], source_shifts: Sequence[int], check: bool = True):
        if len(target_shifts) != matrix.rows or len(source_shifts) != matrix.cols:
            raise ShapeError("shift vectors must match the matrix shape")
        self.matrix = matrix
        self.target_shifts = tuple(int(a) for a in target_shifts)
        self.source_shifts = tuple(int(b) for b in source_shifts)
        if check:
            bad = self.degree_violations()
            if bad:
                i, j, want, got = bad[0]
                raise ShapeError(f"entry ({i},{j}) has degree {got}, expected {want}")

    @property
    def ring(self) -> PolyRing:
        return self.matrix.ring

    def degree_violations(self) -> list[tuple[int, int, int, object]]:
        bad = []
        for i, a in enumerate(self.target_shifts):
            for j, b in enumerate(self.source_shifts):
                deg = is_homogeneous(self.matrix[i, j])
                if deg is ANY_DEGREE:
                    continue
                if deg != b - a:
                    bad.append((i, j, b - a, deg))
        return bad

    def conforms(self) -> bool:
        return not self.degree_violations()

    def to_json(self) -> dict:
        return {**self.matrix.to_json(), "target_shifts": list(self.target_shifts), "source_shifts": list(self.source_shifts)}

    @classmethod
    def from_json(cls, ring: PolyRing, data: Mapping, check: bool = True) -> "GradedMap":
        return cls(PolyMatrix.from_json(ring, data), data["target_shifts"], data["source_shifts"], check=check)

    def __repr__(self):
        return f"GradedMap({self.source_shifts} -> {self.target_shifts})"


# determinants


def _det_cofactor(rows: list[list[Polynomial]], zero: Polynomial) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = zero
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        sub = [row[:j] + row[j + 1:] for row in rows[1:]]
        t = a * _det_cofactor(sub, zero)
        total = total + t if j % 2 == 0 else total - t
    return total


def _det_bareiss(rows: list[list[Polynomial]], ring: PolyRing) -> Polynomial:
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = m[i][j] * pivot - mik * m[k][j]
                m[i][j] = num.exact_div(prev) if num else num
            m[i][k] = ring.zero
        prev = pivot
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def determinant(M: PolyMatrix, method: str | None = None) -> Polynomial:
    """Cofactor expansion up to size 4, fraction-free Bareiss elimination above."""
    if M.rows != M.cols:
        raise ShapeError(f"determinant of a non-square {M.shape} matrix")
    if method is None:
        method = "cofactor" if M.rows <= COFACTOR_LIMIT else "bareiss"
    rows = M.tolist()
    if method == "cofactor":
        return _det_cofactor(rows, M.ring.zero)
    if method == "bareiss":
        return _det_bareiss(rows, M.ring)
    raise ValueError(f"unknown method {method!r}")


@claims("determinantal-heights")
def minor(M: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ShapeError("row and column index sets differ in size")
    if not rows or len(rows) > min(M.rows, M.cols):
        raise ShapeError("minor size out of range")
    for idx in (rows, cols):
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ShapeError("index sets must be strictly increasing")
    return determinant(M.submatrix(rows, cols))


def minors(M: PolyMatrix, t: int) -> list[Polynomial]:
    """All t x t minors, lexicographic in (rows, cols); zeros included."""
    if not 1 <= t <= min(M.rows, M.cols):
        raise ShapeError(f"no {t}-minors for a {M.shape} matrix")
    return [
        minor(M, r, c) for r in combinations(range(M.rows), t) for c in combinations(range(M.cols), t)
    ]


def ideal_of_minors(M: PolyMatrix, t: int) -> list[Polynomial]:
    """Nonzero, deduplicated generators of I_t(M); the zero ideal gives an empty list."""
    seen = []
    found = set()
    for f in minors(M, t):
        if f and f not in found:
            found.add(f)
            seen.append(f)
    return seen


@claims("signed-minors-of-eta")
def signed_maximal_minors(M: PolyMatrix) -> list[Polynomial]:
    """p_i = (-1)^(i+1) det(M without row i) for an (c+1) x c matrix; [p] M = 0 is certified."""
    if M.rows != M.cols + 1:
        raise ShapeError(f"signed maximal minors need a (c+1) x c matrix, got {M.shape}")
    ps = []
    for i in range(M.rows):
        d = determinant(M.delete_row(i))
        ps.append(d if i % 2 == 0 else -d)
    for j in range(M.cols):
        acc = M.ring.zero
        for i, p in enumerate(ps):
            if p and M[i, j]:
                acc = acc + p * M[i, j]
        if acc:
            raise ContractViolation("signed maximal minors do not annihilate the matrix")
    return ps


@claims("compound-property")
def compound(M: PolyMatrix, p: int) -> PolyMatrix:
    """The p-th compound matrix; index sets in lexicographic order."""
    if not 1 <= p <= min(M.rows, M.cols):
        raise ShapeError(f"compound order {p} out of range for {M.shape}")
    rsets = list(combinations(range(M.rows), p))
    csets = list(combinations(range(M.cols), p))
    return PolyMatrix(M.ring, [[determinant(M.submatrix(r, c)) for c in csets] for r in rsets])


@claims("adjugate-colon")
def adjugate(M: PolyMatrix) -> PolyMatrix:
    if M.rows != M.cols:
        raise ShapeError("adjugate of a non-square matrix")
    n = M.rows
    ring = M.ring
    if n == 1:
        adj = PolyMatrix(ring, [[ring.one]])
    else:
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                d = determinant(M.submatrix([k for k in range(n) if k != j], [k for k in range(n) if k != i]))
                cof[i][j] = d if (i + j) % 2 == 0 else -d
        adj = PolyMatrix(ring, cof)
    det = determinant(M)
    if M @ adj != PolyMatrix.identity(ring, n).scale(det):
        raise ContractViolation("M adj(M) != det(M) I")
    return adj


# rank over the fraction field


def _bareiss_rank(M: PolyMatrix) -> int:
    m = M.tolist()
    ring = M.ring
    nrows, ncols = M.rows, M.cols
    r = 0
    prev = ring.one
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            for j in range(c + 1, ncols):
                num = m[i][j] * pivot - mic * m[r][j]
                m[i][j] = num.exact_div(prev) if num else num
            m[i][c] = ring.zero
        prev = pivot
        r += 1
        if r == nrows:
            break
    return r


def rank_symbolic(M: PolyMatrix) -> int:
    """Exact rank by fraction-free elimination on the polynomial entries."""
    return _bareiss_rank(M)


def _random_point(ring: PolyRing, rng: random.Random) -> list:
    return [ring.field.random_element(rng, nonzero=True) for _ in range(ring.n)]


def _evaluated_ranks(M: PolyMatrix, trials: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    return [dense_rank(M.ring.field, M.evaluate(_random_point(M.ring, rng))) for _ in range(trials)]


@claims("rank-over-fraction-field")
def rank_ff(M: PolyMatrix, trials: int = 5, seed: int = 0) -> int:
    """Rank over Frac(R): random evaluations, symbolic elimination if the trials disagree."""
    if M.is_zero():
        return 0
    ranks = _evaluated_ranks(M, trials, seed)
    if len(set(ranks)) == 1:
        return ranks[0]
    return rank_symbolic(M)


def rank_at_most(M: PolyMatrix, bound: int, trials: int = 5, seed: int = 0) -> bool:
    """Certified test of rank(M) <= bound; only a refutation may come from evaluation."""
    if M.is_zero():
        return True
    if max(_evaluated_ranks(M, trials, seed)) > bound:
        return False
    return rank_symbolic(M) <= bound

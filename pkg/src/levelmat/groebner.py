"""Buchberger's algorithm for ideals and graded submodules of free modules.

Terms are stored as order-aware tuples ``(slot0, -position, m_1, ..., m_n)``
whose natural tuple comparison is the monomial order, so the leading term of
a sparse dict is simply ``max(f)``.  For graded orders ``slot0`` is the total
degree plus the shift of the component; for lex it is 0 (position over term).
On homogeneous input the graded module order agrees with position-over-term,
which is what the syzygy elimination below relies on.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import ContractViolation, RingMismatchError, ResourceLimitError, ShapeError
from .linalg import Echelon
from .matrices import PolyMatrix
from .ring import ANY_DEGREE, Polynomial, PolyRing, is_homogeneous
from .claims import claims

DEFAULT_MAX_DEGREE = 60
DEFAULT_MAX_PAIRS = 200_000

_ALIASES = {"degree-then-lex": "deglex", "grlex": "deglex", "grevlex": "degrevlex"}


class MonomialOrder:
    """degrevlex (default), lex or deglex on the ring's variable order."""

    __slots__ = ("kind",)

    def __init__(self, kind: str = "degrevlex"):
        kind = _ALIASES.get(kind, kind)
        if kind not in ("degrevlex", "lex", "deglex"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind

    @property
    def graded(self) -> bool:
        return self.kind != "lex"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"

    def encode(self, exp: Sequence[int], pos: int = 0, shift: int = 0) -> tuple:
        mon = tuple(-e for e in reversed(exp)) if self.kind == "degrevlex" else tuple(exp)
        return (sum(exp) + shift if self.graded else 0, -pos) + mon

    def decode(self, key: tuple) -> tuple[int, tuple[int, ...]]:
        mon = key[2:]
        exp = tuple(-e for e in reversed(mon)) if self.kind == "degrevlex" else tuple(mon)
        return -key[1], exp

    def sort_key(self, exp: Sequence[int]) -> tuple:
        """Larger key means larger monomial."""
        return self.encode(exp)


def as_order(order) -> MonomialOrder:
    if order is None:
        return MonomialOrder()
    if isinstance(order, MonomialOrder):
        return order
    return MonomialOrder(order)


@dataclass(frozen=True)
class Limits:
    max_degree: int = DEFAULT_MAX_DEGREE
    max_pairs: int = DEFAULT_MAX_PAIRS


class _Engine:
    """Term arithmetic on encoded keys plus reduction of sparse dict vectors."""

    def __init__(self, order: MonomialOrder, field, shifts: Sequence[int] = (0,)):
        self.order = order
        self.field = field
        self.p = field.p
        self.neg = order.kind == "degrevlex"
        self.graded = order.graded
        self.shifts = tuple(shifts)

    def encode(self, f: Polynomial, pos: int = 0) -> dict:
        enc = self.order.encode
        sh = self.shifts[pos]
        return {enc(e, pos, sh): c for e, c in f.terms.items()}

    def decode(self, vec: dict, ring: PolyRing, npos: int) -> list[Polynomial]:
        parts = [dict() for _ in range(npos)]
        dec = self.order.decode
        for k, c in vec.items():
            pos, exp = dec(k)
            parts[pos][exp] = c
        return [Polynomial(ring, t) for t in parts]

    def divides(self, a: tuple, b: tuple) -> bool:
        if a[1] != b[1]:
            return False
        if self.neg:
            return all(x >= y for x, y in zip(a[2:], b[2:]))
        return all(x <= y for x, y in zip(a[2:], b[2:]))

    @staticmethod
    def quotient(b: tuple, a: tuple) -> tuple:
        return tuple(y - x for x, y in zip(a, b))

    def lcm(self, a: tuple, b: tuple) -> tuple:
        if self.neg:
            mon = tuple(min(x, y) for x, y in zip(a[2:], b[2:]))
            d = a[0] + sum(x - z for x, z in zip(a[2:], mon))
        else:
            mon = tuple(max(x, y) for x, y in zip(a[2:], b[2:]))
            d = a[0] + sum(z - x for x, z in zip(a[2:], mon)) if self.graded else 0
        return (d, a[1]) + mon

    def coprime(self, a: tuple, b: tuple) -> bool:
        return all(not x or not y for x, y in zip(a[2:], b[2:]))

    def tdeg(self, key: tuple) -> int:
        """Total degree of the monomial part (shift excluded)."""
        s = sum(key[2:])
        return -s if self.neg else s

    def hdeg(self, key: tuple) -> int:
        """Degree in the graded free module (shift included)."""
        return self.tdeg(key) + self.shifts[-key[1]]

    def monic(self, f: dict) -> dict:
        lc = f[max(f)]
        if lc == 1:
            return f
        inv = self.field.inv(lc)
        if self.p:
            return {k: v * inv % self.p for k, v in f.items()}
        return {k: v * inv for k, v in f.items()}

    def axpy(self, f: dict, c, mono: tuple, g: dict) -> None:
        """f -= c * mono * g in place."""
        p = self.p
        for k, v in g.items():
            nk = tuple(x + y for x, y in zip(k, mono))
            nv = f.get(nk, 0) - c * v
            if p:
                nv %= p
            if nv:
                f[nk] = nv
            else:
                f.pop(nk, None)

    def reduce(self, f: dict, leads: Sequence[tuple], elems: Sequence[dict], full: bool = True) -> dict:
        """Remainder of f modulo monic elements; ``full`` also reduces the tail."""
        f = dict(f)
        rem = {}
        divides = self.divides
        while f:
            t = max(f)
            c = f[t]
            for gk, g in zip(leads, elems):
                if divides(gk, t):
                    self.axpy(f, c, self.quotient(t, gk), g)
                    break
            else:
                if not full:
                    f.update(rem)
                    return f
                rem[t] = c
                del f[t]
        return rem


def _buchberger_core(engine: _Engine, inputs: Sequence[dict], limits: Limits, module: bool):
    """Reduced Groebner basis of the span of ``inputs`` (encoded dict vectors)."""
    stats = {"pairs": 0, "reductions_to_zero": 0, "max_degree": 0, "basis_size": 0}
    elems: list[dict] = []
    leads: list[tuple] = []
    active: list[bool] = []
    queue: list = []

    for idx, f in enumerate(inputs):
        if f:
            heapq.heappush(queue, (engine.tdeg(max(f)), 0, idx, 0))

    def active_basis():
        idx = [i for i, a in enumerate(active) if a]
        return [leads[i] for i in idx], [elems[i] for i in idx]

    def update(k: int) -> None:
        lh = leads[k]
        cand = [(i, engine.lcm(leads[i], lh)) for i in range(k) if active[i] and leads[i][1] == lh[1]]
        kept = []
        while cand:
            i, L = cand.pop(0)
            if not module and engine.coprime(leads[i], lh):
                kept.append((i, L, True))
            elif not any(engine.divides(L2, L) for _, L2 in cand) and not any(
                engine.divides(L2, L) for _, L2, _ in kept
            ):
                kept.append((i, L, False))
        fresh = [(i, L) for i, L, cop in kept if not cop]
        # chain criterion on the pairs already queued
        survivors = []
        for item in queue:
            deg, kind, i, j = item[:4]
            if kind == 1:
                L = item[4]
                if (
                    engine.divides(lh, L)
                    and engine.lcm(leads[i], lh) != L
                    and engine.lcm(leads[j], lh) != L
                ):
                    continue
            survivors.append(item)
        queue[:] = survivors
        for i, L in fresh:
            queue.append((engine.tdeg(L), 1, i, k, L))
        heapq.heapify(queue)
        for i in range(k):
            if active[i] and engine.divides(lh, leads[i]):
                active[i] = False

    while queue:
        item = heapq.heappop(queue)
        deg, kind = item[0], item[1]
        if deg > limits.max_degree:
            stats["basis_size"] = sum(active)
            raise ResourceLimitError(f"degree cap {limits.max_degree} exceeded (reached {deg})", stats)
        if kind == 0:
            h = inputs[item[2]]
        else:
            stats["pairs"] += 1
            if stats["pairs"] > limits.max_pairs:
                stats["basis_size"] = sum(active)
                raise ResourceLimitError(f"pair cap {limits.max_pairs} exceeded", stats)
            i, j, L = item[2], item[3], item[4]
            h = {}
            engine.axpy(h, -1, engine.quotient(L, leads[i]), elems[i])
            engine.axpy(h, 1, engine.quotient(L, leads[j]), elems[j])
        bl, be = active_basis()
        h = engine.reduce(h, bl, be)
        if not h:
            if kind == 1:
                stats["reductions_to_zero"] += 1
            continue
        h = engine.monic(h)
        lt = max(h)
        stats["max_degree"] = max(stats["max_degree"], engine.tdeg(lt))
        if stats["max_degree"] > limits.max_degree:
            raise ResourceLimitError(f"degree cap {limits.max_degree} exceeded", stats)
        elems.append(h)
        leads.append(lt)
        active.append(True)
        update(len(elems) - 1)

    # minimal, then fully interreduced
    idx = [i for i, a in enumerate(active) if a]
    final_leads = [leads[i] for i in idx]
    final = []
    for pos, i in enumerate(idx):
        others_l = final_leads[:pos] + final_leads[pos + 1:]
        others_e = [elems[j] for j in idx[:pos] + idx[pos + 1:]]
        red = engine.reduce(elems[i], others_l, others_e)
        if max(red) != leads[i]:
            raise ContractViolation("interreduction changed a leading term")
        final.append(engine.monic(red))
    final.sort(key=lambda g: (engine.tdeg(max(g)), tuple(-x for x in max(g)[1:])))
    stats["basis_size"] = len(final)
    return final, stats


def _common_ring(polys: Sequence[Polynomial]) -> PolyRing:
    if not polys:
        raise ValueError("empty generator list")
    ring = polys[0].ring
    for f in polys:
        if f.ring != ring:
            raise RingMismatchError(f"{f.ring!r} vs {ring!r}")
    return ring


class GroebnerBasis:
    """Reduced Groebner basis of an ideal; immutable once built."""

    def __init__(self, gens, basis, order, ring, stats):
        self.gens = tuple(gens)
        self.basis = tuple(basis)
        self.order = order
        self.ring = ring
        self.stats = dict(stats)
        self._engine = _Engine(order, ring.field)
        self._encoded = [self._engine.encode(g) for g in self.basis]
        self._leads = [max(g) for g in self._encoded]

    @property
    def field(self):
        return self.ring.field

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"GroebnerBasis({len(self.basis)} elements, {self.order.kind})"

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.basis)

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [self.order.decode(k)[1] for k in self._leads]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring!r} vs {self.ring!r}")
        red = self._engine.reduce(self._engine.encode(f), self._leads, self._encoded)
        return self._engine.decode(red, self.ring, 1)[0]

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "order": self.order.kind,
            "basis": [str(g) for g in self.basis],
            "stats": self.stats,
        }


def buchberger(gens: Sequence[Polynomial], order=None, limits: Limits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic for fixed input and order."""
    gens = list(gens)
    ring = _common_ring(gens)
    order = as_order(order)
    limits = limits or Limits()
    engine = _Engine(order, ring.field)
    encoded, stats = _buchberger_core(engine, [engine.encode(g) for g in gens], limits, module=False)
    basis = [engine.decode(v, ring, 1)[0] for v in encoded]
    return GroebnerBasis(gens, basis, order, ring, stats)


groebner = buchberger


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def ideal_contains(gens_or_gb, f: Polynomial, limits: Limits | None = None) -> bool:
    gb = gens_or_gb if isinstance(gens_or_gb, GroebnerBasis) else buchberger(gens_or_gb, limits=limits)
    return gb.contains(f)


def ideal_subset(gens1: Sequence[Polynomial], gens2, limits: Limits | None = None) -> bool:
    """Is the ideal of gens1 contained in the ideal of gens2?"""
    gb = gens2 if isinstance(gens2, GroebnerBasis) else buchberger(list(gens2), limits=limits)
    return all(gb.contains(f) for f in gens1)


def ideal_equal(gens1: Sequence[Polynomial], gens2: Sequence[Polynomial], limits: Limits | None = None) -> bool:
    gens1 = [f for f in gens1 if f] or [_common_ring(list(gens1)).zero]
    gens2 = [f for f in gens2 if f] or [_common_ring(list(gens2)).zero]
    if gens1[0].ring != gens2[0].ring:
        raise RingMismatchError("ideals live in different rings")
    return ideal_subset(gens1, gens2, limits) and ideal_subset(gens2, gens1, limits)


# dimension and height


def _check_homogeneous(gens: Sequence[Polynomial]) -> None:
    for f in gens:
        if is_homogeneous(f) is None:
            raise ShapeError(f"generator {f} is not homogeneous")


def dimension_of_monomial_ideal(exps: Sequence[Sequence[int]], n: int) -> int:
    """Krull dimension of k[x]/(monomials): largest variable set containing no support."""
    supports = [frozenset(i for i, e in enumerate(exp) if e) for exp in exps]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


@claims("determinantal-heights")
def dimension(gens, limits: Limits | None = None) -> int:
    """dim R/I for a homogeneous ideal; -1 for the unit ideal."""
    if isinstance(gens, GroebnerBasis):
        gb = gens
    else:
        gens = list(gens)
        _check_homogeneous(gens)
        ring = _common_ring(gens)
        if not any(gens):
            return ring.n
        gb = buchberger(gens, limits=limits)
    if not gb.basis:
        return gb.ring.n
    return dimension_of_monomial_ideal(gb.leading_exponents(), gb.ring.n)


@claims("determinantal-heights")
def height(gens, limits: Limits | None = None):
    """Codimension n - dim R/I; the unit ideal has height ``math.inf``."""
    dim = dimension(gens, limits)
    ring = gens.ring if isinstance(gens, GroebnerBasis) else _common_ring(list(gens))
    if dim < 0:
        return math.inf
    return ring.n - dim


# syzygies


@dataclass
class SyzygyModule:
    """Columns generate the first syzygies of ``gens`` (as columns of a matrix)."""

    ring: PolyRing
    gens: PolyMatrix  # s x r, columns are the generators
    target_shifts: tuple[int, ...]
    shifts: tuple[int, ...]  # degrees of the generators
    matrix: PolyMatrix | None  # r x t presentation, None when there are no syzygies
    degrees: tuple[int, ...] = ()
    stats: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return 0 if self.matrix is None else self.matrix.cols

    def columns(self) -> list[list[Polynomial]]:
        if self.matrix is None:
            return []
        return [list(self.matrix.col(j)) for j in range(self.matrix.cols)]

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "shifts": list(self.shifts),
            "degrees": list(self.degrees),
            "matrix": None if self.matrix is None else self.matrix.to_json(),
        }


def _as_generator_matrix(gens) -> PolyMatrix:
    if isinstance(gens, PolyMatrix):
        return gens
    gens = list(gens)
    ring = _common_ring(gens)
    return PolyMatrix(ring, [gens])


def _infer_shifts(M: PolyMatrix, target_shifts: Sequence[int]) -> tuple[int, ...]:
    out = []
    for j in range(M.cols):
        for i in range(M.rows):
            d = is_homogeneous(M[i, j])
            if d is ANY_DEGREE:
                continue
            if d is None:
                raise ShapeError(f"generator {j} is not homogeneous")
            out.append(d + target_shifts[i])
            break
        else:
            raise ShapeError(f"generator {j} is zero; its degree must be given explicitly")
    return tuple(out)


def _check_graded(M: PolyMatrix, target_shifts, shifts) -> None:
    for j in range(M.cols):
        for i in range(M.rows):
            d = is_homogeneous(M[i, j])
            if d is ANY_DEGREE:
                continue
            if d is None or d + target_shifts[i] != shifts[j]:
                raise ShapeError(f"entry ({i},{j}) is not homogeneous of degree {shifts[j] - target_shifts[i]}")


def minimal_subset(engine: _Engine, vectors: Sequence[dict], ring: PolyRing) -> list[int]:
    """Indices of a minimal generating subset of homogeneous vectors, lowest degrees first.

    A vector of degree D is dropped when it lies in the k-span of all
    monomial multiples, in degree D, of the vectors kept so far.
    """
    degs = [engine.hdeg(max(v)) for v in vectors]
    order = sorted((i for i, v in enumerate(vectors) if v), key=lambda i: (degs[i], i))
    kept: list[int] = []
    for D in sorted({degs[i] for i in order}):
        ech = Echelon(engine.field)
        for k in kept:
            for exp in ring.monomials(D - degs[k]):
                mono = engine.order.encode(exp)
                mono = (mono[0] if engine.graded else 0, 0) + mono[2:]
                ech.add({tuple(x + y for x, y in zip(key, mono)): c for key, c in vectors[k].items()})
        for i in order:
            if degs[i] == D and ech.add(dict(vectors[i])):
                kept.append(i)
    return kept


def syzygies(
    gens,
    shifts: Sequence[int] | None = None,
    target_shifts: Sequence[int] | None = None,
    order=None,
    limits: Limits | None = None,
    minimal: bool = True,
) -> SyzygyModule:
    """Graded first syzygies of an ordered list of polynomials or of the columns of a matrix.

    Each generator g_j is extended by a unit vector in fresh tag components;
    Groebner basis elements whose leading term sits in a tag component have
    zero original part and together generate the syzygy module.
    """
    M = _as_generator_matrix(gens)
    ring = M.ring
    s, r = M.rows, M.cols
    target_shifts = tuple(target_shifts) if target_shifts is not None else (0,) * s
    if len(target_shifts) != s:
        raise ShapeError("target shifts do not match the number of rows")
    shifts = tuple(shifts) if shifts is not None else _infer_shifts(M, target_shifts)
    if len(shifts) != r:
        raise ShapeError("shifts do not match the number of generators")
    _check_graded(M, target_shifts, shifts)
    order = as_order(order)
    if not order.graded:
        raise ShapeError("syzygies are computed with a graded order")
    engine = _Engine(order, ring.field, target_shifts + shifts)
    inputs = []
    one = ring.one
    for j in range(r):
        v = {}
        for i in range(s):
            v.update(engine.encode(M[i, j], i))
        v.update(engine.encode(one, s + j))
        inputs.append(v)
    basis, stats = _buchberger_core(engine, inputs, limits or Limits(), module=True)
    syz = []
    for v in basis:
        if -max(v)[1] >= s:
            # shift tag components back to positions 0..r-1
            moved = {}
            for k, c in v.items():
                pos = -k[1]
                if pos < s:
                    raise ContractViolation("syzygy element with nonzero original part")
                moved[(k[0], -(pos - s)) + k[2:]] = c
            syz.append(moved)
    tag_engine = _Engine(order, ring.field, shifts)
    if minimal and syz:
        syz = [syz[i] for i in minimal_subset(tag_engine, syz, ring)]
    cols = [tag_engine.decode(v, ring, r) for v in syz]
    degrees = tuple(tag_engine.hdeg(max(v)) for v in syz)
    # deterministic presentation: by degree, then by leading term
    perm = sorted(range(len(cols)), key=lambda j: (degrees[j], tuple(-x for x in max(syz[j])[1:])))
    cols = [cols[j] for j in perm]
    degrees = tuple(degrees[j] for j in perm)
    matrix = PolyMatrix(ring, [[cols[j][i] for j in range(len(cols))] for i in range(r)]) if cols else None
    if matrix is not None and not (M @ matrix).is_zero():
        raise ContractViolation("computed syzygies do not annihilate the generators")
    stats["syzygies"] = len(cols)
    return SyzygyModule(ring, M, target_shifts, shifts, matrix, degrees, stats)


def minimal_generators(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """A minimal homogeneous generating subset, in input order among equal degrees."""
    gens = list(gens)
    ring = _common_ring(gens)
    _check_homogeneous(gens)
    engine = _Engine(MonomialOrder(), ring.field)
    enc = [engine.encode(g) for g in gens]
    return [gens[i] for i in sorted(minimal_subset(engine, enc, ring))]

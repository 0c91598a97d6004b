"""Graded complexes of length three: construction from a level matrix, certification,
Hilbert numerators, resolution of three-generated ideals and recovery of a level matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CertificationError, ContractViolation, ResolutionShapeError, ShapeError
from .groebner import Limits, height, ideal_equal, syzygies
from .latent import LatentData, LatentReport, latent_from_shifts
from .level import LevelMatrix, certify_level, minors_fixing_lower_block
from .linalg import solve
from .matrices import GradedMap, PolyMatrix, ideal_of_minors, rank_ff
from .rim import _in_field, build_K
from .ring import ANY_DEGREE, DEFAULT_MODULUS, Polynomial, PolyRing, is_homogeneous
from .claims import claims


@dataclass
class GradedComplex:
    """F_0 <- F_1 <- F_2 <- F_3 with maps d_1, d_2, d_3 acting on column vectors."""

    ring: PolyRing
    modules: tuple[tuple[int, ...], ...]
    maps: tuple[GradedMap, ...]
    certification: dict = field(default_factory=dict)
    latent: LatentData | LatentReport | None = None

    def __post_init__(self):
        if len(self.maps) != len(self.modules) - 1:
            raise ShapeError("need one map between each pair of consecutive modules")
        for k, phi in enumerate(self.maps):
            if phi.target_shifts != self.modules[k] or phi.source_shifts != self.modules[k + 1]:
                raise ShapeError(f"map d_{k + 1} does not match the module shifts")

    @property
    def m(self) -> int:
        return len(self.modules[2])

    @property
    def generators(self) -> list[Polynomial]:
        return list(self.maps[0].matrix.row(0))

    def shifts(self) -> tuple[tuple[int, ...], ...]:
        return self.modules

    def to_json(self) -> dict:
        out = {
            "ring": self.ring.to_json(),
            "modules": [list(F) for F in self.modules],
            "maps": [phi.to_json() for phi in self.maps],
            "certified": self.certification,
        }
        if isinstance(self.latent, LatentData):
            out["latent"] = self.latent.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping, ring: PolyRing | None = None) -> "GradedComplex":
        ring = ring or PolyRing.from_json(data["ring"])
        maps = tuple(GradedMap.from_json(ring, mp, check=False) for mp in data["maps"])
        modules = tuple(tuple(F) for F in data["modules"])
        return cls(ring, modules, maps)


def _graded_map(M: PolyMatrix, target, source) -> GradedMap:
    return GradedMap(M, target, source, check=True)


@claims("level-resolution")
def build_resolution(eta: LevelMatrix, require_certified: bool = True) -> GradedComplex:
    """d_1 = [p1 p2 p3], d_2 = A K, d_3 = B^t with the shifts dictated by the latent data."""
    if require_certified and not eta.certified:
        raise CertificationError("build_resolution needs a certified level matrix", eta.certification.to_json())
    latent = eta.latent
    ring = eta.ring
    F0, F1, F2, F3 = latent.resolution_shifts()
    p = minors_fixing_lower_block(eta)
    K = build_K(eta.B).K
    d1 = _graded_map(PolyMatrix(ring, [list(p)]), F0, F1)
    d2 = _graded_map(eta.A @ K, F1, F2)
    d3 = _graded_map(eta.B.T, F2, F3)
    if not (d1.matrix @ d2.matrix).is_zero():
        raise ContractViolation("d1 d2 != 0")
    if not (d2.matrix @ d3.matrix).is_zero():
        raise ContractViolation("d2 d3 != 0")
    return GradedComplex(ring, (F0, F1, F2, F3), (d1, d2, d3), latent=latent)


@claims("level-resolution")
def verify_complex(cx: GradedComplex) -> dict:
    """Zero compositions, degree conformity and minimality, reported independently."""
    comps = all(
        (a.matrix @ b.matrix).is_zero() for a, b in zip(cx.maps, cx.maps[1:])
    )
    degrees = all(phi.conforms() for phi in cx.maps)
    minimal = not any(
        e and e.is_constant() for phi in cx.maps for row in phi.matrix.entries for e in row
    )
    report = {"compositions_zero": comps, "degrees_conform": degrees, "minimal": minimal}
    report["ok"] = comps and degrees and minimal
    return report


@claims("acyclicity-criterion")
def buchsbaum_eisenbud_check(
    cx: GradedComplex,
    modulus: int | None = DEFAULT_MODULUS,
    limits: Limits | None = None,
    seed: int = 0,
) -> dict:
    """Ranks with r_k + r_(k+1) = rank F_k and heights ht I_(r_k)(d_k) >= k."""
    ranks = [rank_ff(phi.matrix, seed=seed) for phi in cx.maps]
    n = len(cx.maps)
    rank_ok = []
    for k in range(n):
        nxt = ranks[k + 1] if k + 1 < n else 0
        rank_ok.append(ranks[k] + nxt == len(cx.modules[k + 1]))
    expected = [1, 2, cx.m - 2][:n]
    heights = []
    for k, (phi, r) in enumerate(zip(cx.maps, ranks)):
        if r == 0:
            heights.append(math.inf)
            continue
        gens = [f for f in _in_field(ideal_of_minors(phi.matrix, r), modulus) if f]
        heights.append(height(gens, limits) if gens else 0)
    height_ok = [h >= k + 1 for k, h in enumerate(heights)]
    diagnostics = []
    if ranks != expected:
        diagnostics.append(f"ranks {ranks} differ from the expected {expected}")
    for k, ok in enumerate(rank_ok):
        if not ok:
            diagnostics.append(f"rank condition fails at F_{k + 1}")
    for k, ok in enumerate(height_ok):
        if not ok:
            diagnostics.append(f"ht I_{ranks[k]}(d_{k + 1}) = {heights[k]} < {k + 1}")
    return {
        "ranks": ranks,
        "rank_conditions": rank_ok,
        "heights": heights,
        "height_conditions": height_ok,
        "acyclic": all(rank_ok) and all(height_ok),
        "diagnostics": diagnostics,
    }


# Hilbert numerator


@dataclass(frozen=True)
class HilbertNumerator:
    coefficients: tuple[int, ...]  # N(t) = sum c_k t^k

    def derivative_at_one(self, order: int) -> int:
        total = 0
        for k, c in enumerate(self.coefficients):
            if c and k >= order:
                total += c * math.perm(k, order)
        return total

    @property
    def value_at_one(self) -> int:
        return self.derivative_at_one(0)

    @property
    def first_derivative_at_one(self) -> int:
        return self.derivative_at_one(1)

    @property
    def e(self) -> Fraction | int:
        """N''(1)/2: the multiplicity when the codimension is two."""
        q = Fraction(self.derivative_at_one(2), 2)
        return q.numerator if q.denominator == 1 else q

    @property
    def codimension(self) -> int:
        """Order of vanishing of N at t = 1 (for a nonzero N)."""
        if not any(self.coefficients):
            raise ValueError("zero numerator")
        c = 0
        while self.derivative_at_one(c) == 0:
            c += 1
        return c

    @property
    def degree(self) -> int:
        """Multiplicity read at the true codimension c: (-1)^c N^(c)(1) / c!."""
        c = self.codimension
        return (-1) ** c * self.derivative_at_one(c) // math.factorial(c)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                body = str(abs(c))
            else:
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_json(self) -> dict:
        return {
            "numerator": str(self),
            "coefficients": list(self.coefficients),
            "N(1)": self.value_at_one,
            "N'(1)": self.first_derivative_at_one,
            "N''(1)": self.derivative_at_one(2),
            "e": self.e if isinstance(self.e, int) else str(self.e),
            "codimension": self.codimension,
            "degree": self.degree,
        }


@claims("hilbert-numerator")
def hilbert_numerator(cx_or_modules) -> HilbertNumerator:
    """N(t) = sum_k (-1)^k sum_(a in F_k) t^a from a complex or a list of shift lists.

    For the three-step shape the identity N'(1) = 0 <=> delta_1 + delta_2 = d + sum(epsilon)
    is asserted.
    """
    modules = cx_or_modules.modules if isinstance(cx_or_modules, GradedComplex) else cx_or_modules
    modules = [tuple(F) for F in modules]
    top = max((a for F in modules for a in F), default=0)
    coeffs = [0] * (top + 1)
    for k, F in enumerate(modules):
        for a in F:
            if a < 0:
                raise ValueError("shifts must be nonnegative")
            coeffs[a] += (-1) ** k
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    N = HilbertNumerator(tuple(coeffs))
    if _has_three_step_shape(modules):
        d = modules[1][0]
        delta = sorted(a - d for a in modules[2])
        D = sorted(modules[3])
        eps = [Dj - d - delta[j + 2] for j, Dj in enumerate(D)]
        if (N.first_derivative_at_one == 0) != (delta[0] + delta[1] == d + sum(eps)):
            raise ContractViolation("N'(1) = 0 is not equivalent to the shift-sum relation")
    return N


def _has_three_step_shape(modules) -> bool:
    return (
        len(modules) == 4
        and modules[0] == (0,)
        and len(modules[1]) == 3
        and len(set(modules[1])) == 1
        and len(modules[3]) == len(modules[2]) - 2
    )


# resolving three-generated ideals


def resolve_3generated(J: Sequence[Polynomial], limits: Limits | None = None) -> GradedComplex:
    """Minimal graded resolution of three forms of one degree d >= 2, height 2, homological dimension 2."""
    J = list(J)
    if len(J) != 3:
        raise ResolutionShapeError(f"expected three generators, got {len(J)}")
    ring = J[0].ring
    degs = {is_homogeneous(f) for f in J}
    if len(degs) != 1 or None in degs or ANY_DEGREE in degs:
        raise ResolutionShapeError("generators must be nonzero forms of a common degree")
    d = degs.pop()
    if d < 2:
        raise ResolutionShapeError(f"generator degree must be at least 2, got {d}")
    ht = height(J, limits)
    if ht != 2:
        raise ResolutionShapeError(f"height {ht} != 2", {"height": ht})
    s1 = syzygies(J, shifts=(d, d, d), limits=limits)
    if s1.matrix is None:
        raise ResolutionShapeError("no syzygies")
    s2 = syzygies(s1.matrix, shifts=s1.degrees, target_shifts=s1.shifts, limits=limits)
    if s2.matrix is None:
        raise ResolutionShapeError("perfect ideal: homological dimension 1", {"hd": 1})
    s3 = syzygies(s2.matrix, shifts=s2.degrees, target_shifts=s2.shifts, limits=limits)
    if s3.matrix is not None:
        raise ResolutionShapeError("hd > 2", {"hd": ">2"})
    F = ((0,), (d, d, d), s1.degrees, s2.degrees)
    d1 = GradedMap(PolyMatrix(ring, [J]), F[0], F[1])
    d2 = GradedMap(s1.matrix, F[1], F[2])
    d3 = GradedMap(s2.matrix, F[2], F[3])
    cx = GradedComplex(ring, F, (d1, d2, d3))
    delta = [a - d for a in F[2]]
    cx.latent = latent_from_shifts(d, delta, F[3])
    cx.certification = {"height": ht, "hd": 2, **verify_complex(cx)}
    return cx


# level matrix recovery


def _solve_row(phi_row, K: PolyMatrix, latent: LatentData, ring: PolyRing):
    """Coefficients of one row of A with phi_row = a K, unknown entries of the degree pattern."""
    m = latent.m
    field_ = ring.field
    unknowns = []  # (column k, exponent)
    for k in range(m):
        deg = latent.a_degree(k)
        if deg >= 0:
            unknowns.extend((k, exp) for exp in ring.monomials(deg))
    index = {u: i for i, u in enumerate(unknowns)}
    equations: dict = {}
    for j in range(m):
        for (k, exp), col in index.items():
            kk = K[k, j]
            for e2, c in kk.terms.items():
                mono = tuple(a + b for a, b in zip(exp, e2))
                row = equations.setdefault((j, mono), {})
                v = row.get(col, 0) + c
                if field_.p:
                    v %= field_.p
                row[col] = v
    rhs = {}
    for j, f in enumerate(phi_row):
        for exp, c in f.terms.items():
            rhs[(j, exp)] = c
            equations.setdefault((j, exp), {})
    keys = sorted(equations)
    rows = [{c: v for c, v in equations[key].items() if v} for key in keys]
    x = solve(field_, rows, [rhs.get(key, 0) for key in keys], len(unknowns))
    if x is None:
        return None
    entries = [dict() for _ in range(m)]
    for (k, exp), val in zip(unknowns, x):
        if val:
            entries[k][exp] = val
    return [Polynomial(ring, t) for t in entries]


@claims("level-recovery")
def recover_level_matrix(
    cx: GradedComplex,
    J: Sequence[Polynomial] | None = None,
    limits: Limits | None = None,
    **certify_kw,
) -> LevelMatrix:
    """Take B = d_3^t, K = K(B), solve d_2 = A K degree by degree and certify the result."""
    if not isinstance(cx.latent, LatentData):
        if cx.latent is None:
            F = cx.modules
            d = F[1][0]
            cx.latent = latent_from_shifts(d, [a - d for a in F[2]], F[3])
        if not isinstance(cx.latent, LatentData):
            raise ResolutionShapeError("shifts do not give valid latent data", {"latent": cx.latent.to_json()})
    latent = cx.latent
    ring = cx.ring
    B = cx.maps[2].matrix.T
    K = build_K(B).K
    phi = cx.maps[1].matrix
    rows = []
    for i in range(3):
        row = _solve_row(phi.row(i), K, latent, ring)
        if row is None:
            raise ContractViolation(f"phi = A K has no solution for row {i + 1}")
        rows.append(row)
    A = PolyMatrix(ring, rows)
    if A @ K != phi:
        raise ContractViolation("recovered A does not satisfy phi = A K")
    eta = certify_level(latent, A, B, limits=limits, **certify_kw)
    gens = list(J) if J is not None else cx.generators
    p = minors_fixing_lower_block(eta)
    if not ideal_equal(list(p), gens, limits):
        raise CertificationError("minors fixing B do not regenerate the ideal")
    return eta


def proportionality(p: Sequence[Polynomial], f: Sequence[Polynomial]):
    """The scalar c with p = c f componentwise, or None."""
    ratio = None
    for a, b in zip(p, f):
        if not a and not b:
            continue
        if not a or not b:
            return None
        ea, ca = max(a.terms.items(), key=lambda t: (sum(t[0]), t[0]))
        cb = b.terms.get(ea)
        if cb is None:
            return None
        r = a.ring.field.div(ca, cb)
        if b.scale(r) != a:
            return None
        if ratio is None:
            ratio = r
        elif ratio != r:
            return None
    return ratio

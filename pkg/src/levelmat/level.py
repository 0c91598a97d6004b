"""Level matrices: degree-shape checks, height certification and the two constructors."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .errors import CertificationError, CharacteristicError, ContractViolation, PreconditionError, ShapeError
from .groebner import Limits, height
from .latent import LatentData
from .matrices import PolyMatrix, ideal_of_minors, signed_maximal_minors
from .ring import ANY_DEGREE, DEFAULT_MODULUS, Field, Polynomial, PolyRing, is_homogeneous
from .claims import claims


@dataclass(frozen=True)
class ShapeReport:
    failures: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def _expect(entry: Polynomial, degree: int, zero_rule: bool):
    """None when the entry obeys the rule, else the offending degree description."""
    got = is_homogeneous(entry)
    if got is ANY_DEGREE:
        return None
    if zero_rule:
        return "nonzero"
    if got is None:
        return "inhomogeneous"
    return None if got == degree else got


@claims("level-degree-shape")
def check_degree_shape(latent: LatentData, A: PolyMatrix, B: PolyMatrix) -> ShapeReport:
    """Per-entry comparison against the degree rules of the upper and lower blocks."""
    m = latent.m
    if A.shape != (3, m):
        raise ShapeError(f"upper block must be 3x{m}, got {A.shape}")
    if B.shape != (m - 2, m):
        raise ShapeError(f"lower block must be {m - 2}x{m}, got {B.shape}")
    if A.ring != B.ring:
        raise ShapeError("blocks live over different rings")
    failures = []
    for i in range(3):
        for j in range(m):
            want = latent.a_degree(j)
            bad = _expect(A[i, j], want, want < 0)
            if bad is not None:
                failures.append({"block": "A", "row": i + 1, "col": j + 1, "expected": want if want >= 0 else "zero", "got": bad})
    for i in range(m - 2):
        for j in range(m):
            want = latent.b_degree(i, j)
            bad = _expect(B[i, j], want, want <= 0)
            if bad is not None:
                failures.append({"block": "B", "row": i + 1, "col": j + 1, "expected": want if want > 0 else "zero", "got": bad})
    return ShapeReport(tuple(failures))


def admissible_pattern(latent: LatentData) -> tuple[list[list[bool]], list[list[bool]]]:
    """Which entries of A and B may be nonzero under the degree rules."""
    m = latent.m
    a = [[latent.a_degree(j) >= 0 for j in range(m)] for _ in range(3)]
    b = [[latent.b_degree(i, j) > 0 for j in range(m)] for i in range(m - 2)]
    return a, b


@dataclass(frozen=True)
class Certification:
    shape: bool
    ht_eta: int | float | None = None
    ht_B: int | float | None = None
    field: str | None = None

    @property
    def level(self) -> bool:
        return self.shape and self.ht_eta == 2 and self.ht_B == 3

    def to_json(self) -> dict:
        def enc(h):
            return "infinity" if h == math.inf else h

        return {"shape": self.shape, "ht_eta": enc(self.ht_eta), "ht_B": enc(self.ht_B), "field": self.field}


@dataclass(frozen=True)
class LevelMatrix:
    """eta = [A over B] tied to latent data; ``certification`` records what was verified."""

    latent: LatentData
    A: PolyMatrix
    B: PolyMatrix
    certification: Certification

    @property
    def ring(self) -> PolyRing:
        return self.A.ring

    @property
    def eta(self) -> PolyMatrix:
        return self.A.vstack(self.B)

    @property
    def certified(self) -> bool:
        return self.certification.level

    def signed_minors(self) -> list[Polynomial]:
        return signed_maximal_minors(self.eta)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "latent": self.latent.to_json(),
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "certified": self.certification.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping, ring: PolyRing | None = None) -> "LevelMatrix":
        ring = ring or PolyRing.from_json(data["ring"])
        latent = LatentData.from_json(data["latent"])
        A = PolyMatrix.from_json(ring, data["A"])
        B = PolyMatrix.from_json(ring, data["B"])
        shape = check_degree_shape(latent, A, B).ok
        return cls(latent, A, B, Certification(shape))


def height_over(gens: Sequence[Polynomial], modulus: int | None = DEFAULT_MODULUS, limits: Limits | None = None):
    """Height computed over GF(modulus), or over the input field when ``modulus`` is None."""
    gens = [g for g in gens if g]
    if not gens:
        return 0
    ring = gens[0].ring
    if modulus is not None and ring.field.p != modulus:
        if ring.field.p:
            raise CharacteristicError(f"cannot move from GF({ring.field.p}) to GF({modulus})")
        target = ring.with_field(Field(modulus))
        gens = [g.change_ring(target) for g in gens]
        gens = [g for g in gens if g]
        if not gens:
            return 0
    return height(gens, limits)


def _field_label(ring: PolyRing, modulus) -> str:
    if modulus is None or ring.field.p:
        return repr(ring.field)
    return f"GF({modulus})"


@claims("determinantal-heights")
def certify_level(
    latent: LatentData,
    A: PolyMatrix,
    B: PolyMatrix,
    authoritative: bool = False,
    modulus: int = DEFAULT_MODULUS,
    limits: Limits | None = None,
    strict: bool = True,
) -> LevelMatrix:
    """Check shape, ht I_m(eta) = 2 and ht I_(m-2)(B) = 3.

    Heights run over GF(modulus) unless ``authoritative`` asks for the input field.
    With ``strict`` a failed condition raises CertificationError carrying the record.
    """
    report = check_degree_shape(latent, A, B)
    if not report.ok:
        cert = Certification(False)
        if strict:
            raise CertificationError("degree shape violated", {"shape": report.to_json()})
        return LevelMatrix(latent, A, B, cert)
    mod = None if authoritative else modulus
    eta = A.vstack(B)
    ht_eta = height_over(signed_maximal_minors(eta), mod, limits)
    ht_B = height_over(ideal_of_minors(B, latent.m - 2), mod, limits)
    cert = Certification(True, ht_eta, ht_B, _field_label(A.ring, mod))
    level = LevelMatrix(latent, A, B, cert)
    if strict and not cert.level:
        raise CertificationError(
            f"not level: ht I_m(eta) = {ht_eta} (need 2), ht I_(m-2)(B) = {ht_B} (need 3)",
            {"certified": cert.to_json()},
        )
    return level


@claims("fixed-block-minors")
def minors_fixing_lower_block(eta: LevelMatrix) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Signed maximal minors of eta obtained by deleting one of the three upper rows."""
    ps = eta.signed_minors()
    p = tuple(ps[:3])
    d = eta.latent.d
    for f in p:
        deg = is_homogeneous(f)
        if deg is ANY_DEGREE:
            if eta.certified:
                raise ContractViolation("a minor fixing the lower block vanishes on a level matrix")
            continue
        if deg != d:
            raise ContractViolation(f"minor fixing the lower block has degree {deg}, expected {d}")
    return p


def lower_block_identity(eta: LevelMatrix) -> bool:
    """[p1 p2 p3] A == -[p4 ... p_(m+1)] B, entrywise."""
    ps = eta.signed_minors()
    top = PolyMatrix(eta.ring, [ps[:3]]) @ eta.A
    bottom = PolyMatrix(eta.ring, [ps[3:]]) @ eta.B
    return top == -bottom


def _xyz(ring: PolyRing | None) -> PolyRing:
    if ring is None:
        return PolyRing("x y z")
    if ring.n != 3:
        raise PreconditionError("the monomial construction needs exactly three variables")
    return ring


@claims("monomial-level-matrix")
def monomial_level(latent: LatentData, ring: PolyRing | None = None, **certify_kw) -> LevelMatrix:
    """Bidiagonal upper block and banded monomial lower block in x, y, z; certified."""
    ring = _xyz(ring)
    m = latent.m
    for i in range(m - 3):
        if latent.b_degree(i, i + 3) <= 0:
            raise PreconditionError(
                f"need delta_{i + 3} - delta_{i + 4} + epsilon_{i + 1} > 0, got {latent.b_degree(i, i + 3)}"
            )
    alpha = [latent.a_degree(j) for j in range(3)]
    if min(alpha) < 0:
        raise PreconditionError(f"negative exponent in upper block: {alpha}")
    x, y, z = ring.gens()
    zero = ring.zero
    A = [[zero] * m for _ in range(3)]
    A[0][0] = x ** alpha[0]
    A[1][0], A[1][1] = y ** alpha[0], x ** alpha[1]
    A[2][1], A[2][2] = y ** alpha[1], x ** alpha[2]
    B = [[zero] * m for _ in range(m - 2)]

    def beta(i, j):
        b = latent.b_degree(i, j)
        if b < 0:
            raise PreconditionError(f"negative exponent beta_({i + 1},{j + 1}) = {b}")
        return b

    for i in range(m - 3):
        B[i][i + 1] = z ** beta(i, i + 1)
        B[i][i + 2] = y ** beta(i, i + 2)
        B[i][i + 3] = x ** beta(i, i + 3)
    last = m - 3
    B[last][0] = x ** beta(last, 0)
    B[last][m - 2] = z ** beta(last, m - 2)
    B[last][m - 1] = y ** beta(last, m - 1)
    return certify_level(latent, PolyMatrix(ring, A), PolyMatrix(ring, B), **certify_kw)


@claims("identity-embedding")
def embed_identity_level(
    Bfull: PolyMatrix,
    latent: LatentData,
    u: int,
    limits: Limits | None = None,
    **certify_kw,
) -> LevelMatrix:
    """Upper block = 3x3 identity in columns u, u+1, u+2 (1-based), zero elsewhere.

    Requires delta_u = delta_(u+1) = delta_(u+2) = d and ht I_(m-3)(B') >= 2, where
    B' drops those three columns.
    """
    m = latent.m
    if not 1 <= u <= m - 2:
        raise PreconditionError(f"u must lie in 1..{m - 2}, got {u}")
    cols = [u - 1, u, u + 1]
    if any(latent.delta[j] != latent.d for j in cols):
        raise PreconditionError(f"delta at columns {u}..{u + 2} must all equal d = {latent.d}")
    ring = Bfull.ring
    A = PolyMatrix(ring, [[ring.one if j == cols[i] else ring.zero for j in range(m)] for i in range(3)])
    report = check_degree_shape(latent, A, Bfull)
    if not report.ok:
        raise CertificationError("lower block violates the degree rule", {"shape": report.to_json()})
    modulus = None if certify_kw.get("authoritative") else certify_kw.get("modulus", DEFAULT_MODULUS)
    if m > 3:
        Bp = Bfull.delete_cols(cols)
        ht_Bp = height_over(ideal_of_minors(Bp, m - 3), modulus, limits)
    else:
        ht_Bp = math.inf
    if ht_Bp < 2:
        raise CertificationError(f"ht I_(m-3)(B') = {ht_Bp} < 2", {"ht_B_prime": ht_Bp})
    return certify_level(latent, A, Bfull, limits=limits, **certify_kw)


def random_form(ring: PolyRing, degree: int, rng: random.Random, density: float = 1.0) -> Polynomial:
    """Dense (or thinned) form with pseudorandom coefficients; zero for negative degree."""
    if degree < 0:
        return ring.zero
    terms = {}
    for exp in ring.monomials(degree):
        if density >= 1.0 or rng.random() < density:
            terms[exp] = ring.field.random_element(rng) if ring.field.p else rng.randint(-5, 5)
    return Polynomial(ring, terms)


def random_candidate(latent: LatentData, ring: PolyRing, seed: int = 0) -> tuple[PolyMatrix, PolyMatrix]:
    """Random A, B filling every admissible entry with a dense form of the right degree."""
    rng = random.Random(seed)
    a_mask, b_mask = admissible_pattern(latent)
    m = latent.m
    A = [[random_form(ring, latent.a_degree(j), rng) if a_mask[i][j] else ring.zero for j in range(m)] for i in range(3)]
    B = [
        [random_form(ring, latent.b_degree(i, j), rng) if b_mask[i][j] else ring.zero for j in range(m)]
        for i in range(m - 2)
    ]
    return PolyMatrix(ring, A), PolyMatrix(ring, B)


def with_certification(eta: LevelMatrix, **changes) -> LevelMatrix:
    return replace(eta, certification=replace(eta.certification, **changes))

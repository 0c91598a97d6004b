"""The skew matrix K of complementary minors, the rank-2 compound identity and the
determinantal identities linking I_2(AK), the fixed-block minors and I_m(eta)."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import ContractViolation, ShapeError
from .groebner import Limits, buchberger, height, ideal_equal
from .level import LevelMatrix, minors_fixing_lower_block
from .matrices import PolyMatrix, compound, determinant, ideal_of_minors, rank_at_most, signed_maximal_minors
from .ring import DEFAULT_MODULUS, Field, Polynomial
from .claims import claims


@dataclass(frozen=True)
class SkewSyzygyMatrix:
    K: PolyMatrix
    B: PolyMatrix
    delta_minors: dict  # (i, j) 0-based, i < j -> Delta_{i,j}

    @property
    def m(self) -> int:
        return self.K.rows

    def nonzero_off_diagonal(self) -> bool:
        return all(self.delta_minors.values())


def complementary_minor(B: PolyMatrix, i: int, j: int) -> Polynomial:
    """Maximal minor of B omitting columns i and j (0-based)."""
    keep = [k for k in range(B.cols) if k not in (i, j)]
    return determinant(B.submatrix(range(B.rows), keep))


@claims("skew-complementary-minors")
def build_K(B: PolyMatrix) -> SkewSyzygyMatrix:
    """K[i][j] = (-1)^(i+j) Delta_{i,j} above the diagonal, extended skewly; B K = 0 certified."""
    m = B.cols
    if B.rows != m - 2 or m < 3:
        raise ShapeError(f"B must be (m-2) x m with m >= 3, got {B.shape}")
    ring = B.ring
    deltas = {}
    K = [[ring.zero] * m for _ in range(m)]
    for i, j in combinations(range(m), 2):
        delta = complementary_minor(B, i, j)
        deltas[(i, j)] = delta
        entry = delta if (i + j) % 2 == 0 else -delta
        K[i][j] = entry
        K[j][i] = -entry
    Km = PolyMatrix(ring, K)
    if Km + Km.T != PolyMatrix.zeros(ring, m, m):
        raise ContractViolation("K is not skew-symmetric")
    if not (B @ Km).is_zero():
        raise ContractViolation("B K != 0")
    return SkewSyzygyMatrix(Km, B, deltas)


@dataclass
class Rank2Report:
    skew: bool
    rank_at_most_2: bool | None = None
    nonzero_off_diagonal: bool | None = None
    columns: list = field(default_factory=list)  # [((i, j), bool)] 1-based pairs
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.skew and bool(self.rank_at_most_2) and bool(self.columns) and all(p for _, p in self.columns)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "skew": self.skew,
            "rank_at_most_2": self.rank_at_most_2,
            "nonzero_off_diagonal": self.nonzero_off_diagonal,
            "columns": [{"pair": list(c), "pass": p} for c, p in self.columns],
            "reason": self.reason,
        }


@claims("rank-two-skew-compound")
def verify_rank2_compound(M: PolyMatrix, trials: int = 5, seed: int = 0) -> Rank2Report:
    """Column {i,j} of C_2(M) against a_{i,j} (a_{1,2}, ..., a_{m-1,m})^t for skew M of rank <= 2."""
    if M.rows != M.cols:
        return Rank2Report(False, reason="not square")
    m = M.rows
    if M + M.T != PolyMatrix.zeros(M.ring, m, m):
        return Rank2Report(False, reason="not skew-symmetric")
    report = Rank2Report(True)
    report.rank_at_most_2 = rank_at_most(M, 2, trials=trials, seed=seed)
    report.nonzero_off_diagonal = all(M[i, j] for i, j in combinations(range(m), 2))
    if not report.rank_at_most_2:
        report.reason = "rank > 2"
        return report
    if m < 2:
        report.reason = "no 2-minors"
        return report
    C2 = compound(M, 2)
    pairs = list(combinations(range(m), 2))
    plucker = [M[k, l] for k, l in pairs]
    for col, (i, j) in enumerate(pairs):
        a = M[i, j]
        good = all(C2[row, col] == a * plucker[row] for row in range(len(pairs)))
        report.columns.append(((i + 1, j + 1), good))
    if not report.nonzero_off_diagonal:
        report.reason = "some off-diagonal entry vanishes"
    return report


def _in_field(polys: Sequence[Polynomial], modulus: int | None) -> list[Polynomial]:
    """Move polynomials to GF(modulus) for the Groebner side of a check (None keeps them)."""
    polys = list(polys)
    if modulus is None or not polys or polys[0].ring.field.p == modulus:
        return polys
    target = polys[0].ring.with_field(Field(modulus))
    return [f.change_ring(target) for f in polys]


@dataclass(frozen=True)
class IdentityA:
    lhs: tuple[Polynomial, ...]  # 2-minors of A K
    rhs: tuple[Polynomial, ...]  # p_i * Delta_{u,v}

    def holds(self, modulus: int | None = DEFAULT_MODULUS, limits: Limits | None = None) -> bool:
        lhs = [f for f in _in_field(self.lhs, modulus) if f]
        rhs = [f for f in _in_field(self.rhs, modulus) if f]
        if not lhs or not rhs:
            return not lhs and not rhs
        return ideal_equal(lhs, rhs, limits)


@claims("product-of-minor-ideals")
def vasconcelos_identity_a(eta: LevelMatrix) -> IdentityA:
    """Generators of I_2(AK) and of <p1,p2,p3> I_(m-2)(B); C_2(AK) = C_2(A) C_2(K) is asserted."""
    K = build_K(eta.B).K
    AK = eta.A @ K
    C2_AK = compound(AK, 2)
    if C2_AK != compound(eta.A, 2) @ compound(K, 2):
        raise ContractViolation("compound property failed for A K")
    lhs = [f for row in C2_AK for f in row if f]
    p = minors_fixing_lower_block(eta)
    deltas = ideal_of_minors(eta.B, eta.latent.m - 2)
    rhs = [pi * dv for pi in p for dv in deltas]
    return IdentityA(tuple(dict.fromkeys(lhs)), tuple(dict.fromkeys(f for f in rhs if f)))


@dataclass
class ContainmentReport:
    checked: int
    failures: list  # [(delta index, q index)]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": [list(f) for f in self.failures]}


@claims("adjugate-colon")
def vasconcelos_identity_b(
    eta: LevelMatrix, modulus: int | None = DEFAULT_MODULUS, limits: Limits | None = None
) -> ContainmentReport:
    """Every Delta q with Delta a maximal minor of B and q a signed maximal minor of eta lies in <p1,p2,p3>."""
    p = [f for f in _in_field(minors_fixing_lower_block(eta), modulus) if f]
    qs = _in_field(signed_maximal_minors(eta.eta), modulus)
    deltas = _in_field(ideal_of_minors(eta.B, eta.latent.m - 2), modulus)
    if not p:
        failures = [(a, b) for a, dv in enumerate(deltas) for b, q in enumerate(qs) if dv * q]
        return ContainmentReport(len(deltas) * len(qs), failures)
    gb = buchberger(p, limits=limits)
    failures = []
    for a, dv in enumerate(deltas):
        for b, q in enumerate(qs):
            if not gb.contains(dv * q):
                failures.append((a, b))
    return ContainmentReport(len(deltas) * len(qs), failures)


@claims("height-equivalence")
def height_equivalences(
    eta: LevelMatrix, modulus: int | None = DEFAULT_MODULUS, limits: Limits | None = None
) -> dict:
    """Heights of I_2(AK), <p1,p2,p3>, I_m(eta) and whether the three conditions agree."""

    def ht(gens):
        gens = [f for f in _in_field(gens, modulus) if f]
        return height(gens, limits) if gens else 0

    K = build_K(eta.B).K
    h_ak = ht(ideal_of_minors(eta.A @ K, 2))
    h_p = ht(minors_fixing_lower_block(eta))
    h_eta = ht(signed_maximal_minors(eta.eta))
    conds = {"I2_AK_at_least_2": h_ak >= 2, "p_height_2": h_p == 2, "Im_eta_height_2": h_eta == 2}
    return {
        "ht_I2_AK": h_ak,
        "ht_p": h_p,
        "ht_Im_eta": h_eta,
        **conds,
        "consistent": len(set(conds.values())) == 1,
    }

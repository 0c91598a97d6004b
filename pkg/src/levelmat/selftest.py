"""Seeded invariant suites: Cauchy-Binet, the rank-2 skew compound identity, K contracts, round trips."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable

from .latent import LatentData
from .level import monomial_level, random_form
from .matrices import PolyMatrix, compound
from .resolution import GradedComplex, build_resolution
from .rim import build_K, verify_rank2_compound
from .ring import DEFAULT_MODULUS, QQ, Field, PolyRing


@dataclass
class SuiteResult:
    name: str
    claim: str | None
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cases > 0 and not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "claim": self.claim,
            "cases": self.cases,
            "failures": self.failures[:10],
            "failed": len(self.failures),
            "pass": self.ok,
        }


@dataclass
class SelftestReport:
    seed: int
    suites: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def table(self) -> str:
        lines = [f"{'suite':<16} {'cases':>6} {'failed':>6}  result"]
        for s in self.suites:
            lines.append(f"{s.name:<16} {s.cases:>6} {len(s.failures):>6}  {'PASS' if s.ok else 'FAIL'}")
        return "\n".join(lines)


def _rings():
    return [PolyRing("x y z", QQ), PolyRing("x y z", Field(DEFAULT_MODULUS))]


def random_matrix(ring: PolyRing, rows: int, cols: int, rng: random.Random, max_degree: int = 1) -> PolyMatrix:
    return PolyMatrix(
        ring,
        [[random_form(ring, rng.randint(0, max_degree), rng, density=0.5) for _ in range(cols)] for _ in range(rows)],
    )


def cauchy_binet_suite(seed: int = 0, pairs: int = 100) -> SuiteResult:
    """C_p(MN) = C_p(M) C_p(N) for random polynomial matrices, p = 1, 2, 3."""
    res = SuiteResult("cauchy-binet", "compound-property")
    rng = random.Random(seed)
    for ring in _rings():
        for p in (1, 2, 3):
            for k in range(pairs):
                r, s, t = (rng.randint(p, 5) for _ in range(3))
                M, N = random_matrix(ring, r, s, rng), random_matrix(ring, s, t, rng)
                res.cases += 1
                if compound(M @ N, p) != compound(M, p) @ compound(N, p):
                    res.failures.append({"field": repr(ring.field), "p": p, "case": k, "shapes": [[r, s], [s, t]]})
    return res


def random_monomial(ring: PolyRing, rng: random.Random, max_degree: int = 2):
    exp = [0] * ring.n
    for _ in range(rng.randint(0, max_degree)):
        exp[rng.randrange(ring.n)] += 1
    c = ring.field.random_element(rng) if ring.field.p else rng.choice([-3, -2, -1, 1, 2, 3])
    return ring.monomial(exp, c)


def rank2_skew(ring: PolyRing, size: int, rng: random.Random) -> PolyMatrix:
    u = PolyMatrix(ring, [[random_monomial(ring, rng)] for _ in range(size)])
    v = PolyMatrix(ring, [[random_monomial(ring, rng)] for _ in range(size)])
    return u @ v.T - v @ u.T


def rank2_suite(seed: int = 0, count: int = 50) -> SuiteResult:
    """Columns of C_2 of a rank-2 skew matrix are a_ij times the vector of its upper entries."""
    res = SuiteResult("rank2-compound", "rank-two-skew-compound")
    rng = random.Random(seed)
    ring = PolyRing("x y z", QQ)
    for k in range(count):
        size = rng.randint(4, 6)
        M = rank2_skew(ring, size, rng)
        report = verify_rank2_compound(M, seed=seed)
        res.cases += 1
        if not report.ok:
            res.failures.append({"case": k, "size": size, "report": report.to_json()})
    return res


def random_lower_block(ring: PolyRing, m: int, rng: random.Random) -> PolyMatrix:
    return random_matrix(ring, m - 2, m, rng, max_degree=2)


def k_contract_suite(
    seed: int = 0,
    count: int = 50,
    blocks: list | None = None,
    k_builder: Callable[[PolyMatrix], PolyMatrix] | None = None,
) -> SuiteResult:
    """K is skew and B K = 0, checked independently of the builder's own assertions."""
    res = SuiteResult("k-contract", "skew-complementary-minors")
    builder = k_builder or (lambda B: build_K(B).K)
    rng = random.Random(seed)
    cases = list(blocks or [])
    for ring in _rings():
        for k in range(count // 2 + (count % 2 if ring.field.p else 0)):
            cases.append((f"random-{ring.field!r}-{k}", random_lower_block(ring, rng.randint(3, 6), rng)))
    for label, B in cases:
        res.cases += 1
        try:
            K = builder(B)
        except Exception as exc:  # a faulty builder may trip its own assertions
            res.failures.append({"case": label, "error": str(exc)})
            continue
        m = B.cols
        skew = all(K[i, j] == -K[j, i] for i in range(m) for j in range(m))
        if not skew or not (B @ K).is_zero():
            res.failures.append({"case": label, "skew": skew})
    return res


def round_trip_suite(seed: int = 0, count: int = 30) -> SuiteResult:
    """Parse/print and JSON round trips for polynomials, matrices, latent data and complexes."""
    res = SuiteResult("round-trips", None)
    rng = random.Random(seed)
    for ring in _rings():
        for k in range(count):
            f = random_form(ring, rng.randint(0, 4), rng, density=0.6)
            res.cases += 1
            if ring.parse(str(f)) != f:
                res.failures.append({"case": f"poly-{k}", "text": str(f)})
            M = random_matrix(ring, rng.randint(1, 4), rng.randint(1, 4), rng)
            res.cases += 1
            if PolyMatrix.from_json(ring, json.loads(json.dumps(M.to_json()))) != M:
                res.failures.append({"case": f"matrix-{k}"})
    for latent in (
        LatentData.checked(3, 3, (2, 2, 3), (1,)),
        LatentData.checked(2, 4, (2, 2, 2, 2), (1, 1)),
    ):
        res.cases += 1
        if LatentData.from_json(json.loads(json.dumps(latent.to_json()))) != latent:
            res.failures.append({"case": f"latent-{latent.to_json()}"})
        eta = monomial_level(latent)
        cx = build_resolution(eta)
        back = GradedComplex.from_json(json.loads(json.dumps(cx.to_json())))
        res.cases += 1
        if back.modules != cx.modules or any(a.matrix != b.matrix for a, b in zip(back.maps, cx.maps)):
            res.failures.append({"case": f"complex-{latent.to_json()}"})
    return res


def selftest(seed: int = 0, k_builder=None, include_corpus: bool = True) -> SelftestReport:
    blocks = None
    if include_corpus:
        from .corpus import corpus_lower_blocks

        blocks = corpus_lower_blocks()
    suites = [
        cauchy_binet_suite(seed),
        rank2_suite(seed),
        k_contract_suite(seed, blocks=blocks, k_builder=k_builder),
        round_trip_suite(seed),
    ]
    return SelftestReport(seed, suites)

"""Latent data (d, m, delta, epsilon) and its validity conditions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ContractViolation
from .claims import claims

CONDITIONS = ("shape", "monotone", "positive", "(i)", "(ii)", "(iii)", "(iv)")


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str

    def to_json(self) -> dict:
        return {"condition": self.condition, "message": self.message}


@dataclass(frozen=True)
class LatentData:
    """Validated tuple; build through :func:`validate_latent` or :meth:`checked`."""

    d: int
    m: int
    delta: tuple[int, ...]
    epsilon: tuple[int, ...]

    @classmethod
    def checked(cls, d, m, delta, epsilon) -> "LatentData":
        result = validate_latent(d, m, delta, epsilon)
        if isinstance(result, LatentData):
            return result
        raise ValueError("invalid latent data: " + "; ".join(v.message for v in result.violations))

    def a_degree(self, j: int) -> int:
        """Degree of column j of the upper block (0-based); negative means the entry is zero."""
        return self.d - self.delta[j]

    def b_degree(self, i: int, j: int) -> int:
        """Degree of entry (i, j) of the lower block (0-based); nonpositive means zero."""
        return self.delta[i + 2] - self.delta[j] + self.epsilon[i]

    def resolution_shifts(self) -> tuple[tuple[int, ...], ...]:
        d = self.d
        return (
            (0,),
            (d, d, d),
            tuple(d + x for x in self.delta),
            tuple(d + self.delta[j + 2] + e for j, e in enumerate(self.epsilon)),
        )

    def to_json(self) -> dict:
        return {"d": self.d, "m": self.m, "delta": list(self.delta), "epsilon": list(self.epsilon)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LatentData":
        return cls.checked(data["d"], data["m"], data["delta"], data["epsilon"])


@dataclass(frozen=True)
class LatentReport:
    """Every failed condition of a candidate tuple."""

    candidate: dict
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def failed(self) -> tuple[str, ...]:
        return tuple(v.condition for v in self.violations)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "candidate": self.candidate,
            "violations": [v.to_json() for v in self.violations],
        }


def latent_violations(d, m, delta, epsilon) -> list[Violation]:
    out: list[Violation] = []
    delta = tuple(delta)
    epsilon = tuple(epsilon)
    if not isinstance(d, int) or d < 1:
        out.append(Violation("shape", f"d must be an integer >= 1, got {d!r}"))
    if not isinstance(m, int) or m < 3:
        out.append(Violation("shape", f"m must be an integer >= 3, got {m!r}"))
        return out
    if len(delta) != m:
        out.append(Violation("shape", f"delta has length {len(delta)}, expected m = {m}"))
    if len(epsilon) != m - 2:
        out.append(Violation("shape", f"epsilon has length {len(epsilon)}, expected m - 2 = {m - 2}"))
    if out:
        return out
    if any(b < a for a, b in zip(delta, delta[1:])):
        out.append(Violation("monotone", f"delta {list(delta)} is not non-decreasing"))
    bad = [x for x in delta if x < 1] + [x for x in epsilon if x < 1]
    if bad:
        out.append(Violation("positive", f"delta and epsilon entries must be >= 1, found {bad}"))
    chain = [delta[j + 2] + epsilon[j] for j in range(m - 2)]
    if any(b < a for a, b in zip(chain, chain[1:])):
        out.append(Violation("(i)", f"delta_(j+2) + epsilon_j = {chain} is not non-decreasing"))
    lhs, rhs = delta[0] + delta[1], d + sum(epsilon)
    if lhs != rhs:
        out.append(Violation("(ii)", f"delta_1 + delta_2 = {lhs} != d + sum(epsilon) = {rhs}"))
    pairs = [(i + 1, j + 1) for i, j in combinations(range(m), 2) if delta[i] + delta[j] < d + 1]
    if pairs:
        out.append(Violation("(iii)", f"delta_i + delta_j < d + 1 = {d + 1} for pairs {pairs}"))
    if delta[2] > d:
        out.append(Violation("(iv)", f"delta_3 = {delta[2]} > d = {d}"))
    return out


@claims("latent-data")
def validate_latent(d, m=None, delta=None, epsilon=None):
    """A :class:`LatentData` when valid, else a :class:`LatentReport` naming every violation.

    Also accepts a single mapping with keys d, m, delta, epsilon.
    """
    if isinstance(d, Mapping):
        data = d
        try:
            d, m, delta, epsilon = data["d"], data["m"], data["delta"], data["epsilon"]
        except KeyError as exc:
            return LatentReport(dict(data), (Violation("shape", f"missing key {exc.args[0]!r}"),))
    candidate = {"d": d, "m": m, "delta": list(delta), "epsilon": list(epsilon)}
    violations = latent_violations(d, m, delta, epsilon)
    if violations:
        return LatentReport(candidate, tuple(violations))
    latent = LatentData(d, m, tuple(delta), tuple(epsilon))
    check_column_degrees(latent)
    return latent


def check_column_degrees(latent: LatentData) -> None:
    """Derived consequence of validity: delta_(i+2) - delta_j + epsilon_i > 0 whenever j <= i + 2."""
    for i in range(latent.m - 2):
        for j in range(i + 3):
            if latent.b_degree(i, j) <= 0:
                raise ContractViolation(f"valid latent data with nonpositive degree at ({i + 1},{j + 1})")


@claims("nonperfect-shift-bound")
def check_nonperfect_shifts(d: int, delta: Sequence[int]) -> bool:
    """True iff every pairwise shift sum reaches d + 1."""
    return all(a + b >= d + 1 for a, b in combinations(delta, 2))


@claims("second-syzygy-shifts")
def latent_from_shifts(d: int, delta: Sequence[int], D: Sequence[int]):
    """Recover epsilon_j = D_j - d - delta_(j+2) and validate; a LatentReport on failure."""
    delta = tuple(delta)
    D = tuple(D)
    m = len(delta)
    if len(D) != m - 2:
        return LatentReport(
            {"d": d, "delta": list(delta), "D": list(D)},
            (Violation("shape", f"expected {m - 2} second-syzygy shifts, got {len(D)}"),),
        )
    epsilon = tuple(Dj - d - delta[j + 2] for j, Dj in enumerate(D))
    return validate_latent(d, m, delta, epsilon)

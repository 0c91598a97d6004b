"""Tag functions with the claim identifier of the identity they implement."""

from __future__ import annotations

from typing import Callable, TypeVar

F = TypeVar("F", bound=Callable)

REGISTRY: dict[str, list[str]] = {}


def claims(claim_id: str) -> Callable[[F], F]:
    def mark(fn: F) -> F:
        fn.__claim__ = claim_id
        REGISTRY.setdefault(claim_id, []).append(fn.__qualname__)
        return fn

    return mark

"""Sparse exact Gaussian elimination over a coefficient field.

Rows are dicts ``column -> value``; columns are any sortable hashables.
Pivot choice is deterministic: the smallest column of each row.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .ring import Field


class Echelon:
    """Incrementally maintained row echelon form with monic pivots."""

    def __init__(self, field: Field):
        self.field = field
        self.pivots: dict[Hashable, dict] = {}

    def reduce(self, row: dict) -> dict:
        """Reduce ``row`` against the stored pivots (fully, so the result is canonical)."""
        field = self.field
        p = field.p
        row = {k: v for k, v in row.items() if v}
        while True:
            hit = [c for c in row if c in self.pivots]
            if not hit:
                return row
            for col in sorted(hit):
                if col not in row:
                    continue
                c = row[col]
                for k, v in self.pivots[col].items():
                    nv = row.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)

    def add(self, row: dict) -> bool:
        """Insert a row; returns False when it was already in the span."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        inv = self.field.inv(row[col])
        p = self.field.p
        if p:
            row = {k: v * inv % p for k, v in row.items()}
        else:
            row = {k: v * inv for k, v in row.items()}
        # keep stored pivots mutually reduced
        for other in self.pivots.values():
            c = other.get(col)
            if c:
                for k, v in row.items():
                    nv = other.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.pivots[col] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def solve(field: Field, rows: Sequence[dict], rhs: Sequence, nvars: int):
    """One solution of ``rows * x = rhs`` with every free unknown set to zero.

    Unknowns are ``0..nvars-1``; returns ``None`` when the system is inconsistent.
    """
    ech = Echelon(field)
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[nvars] = b  # rhs column sorts after every unknown
        red = ech.reduce(r)
        if red and min(red) == nvars:
            return None
        ech.add(r)
    x = [0] * nvars
    for col, row in ech.pivots.items():
        if col == nvars:
            return None
        x[col] = row.get(nvars, 0)
    return x


def nullspace(field: Field, rows: Sequence[dict], nvars: int) -> list[list]:
    """Basis of the right kernel, one vector per free column (free entry = 1)."""
    ech = Echelon(field)
    for row in rows:
        ech.add(row)
    p = field.p
    basis = []
    pivcols = set(ech.pivots)
    for free in range(nvars):
        if free in pivcols:
            continue
        v = [0] * nvars
        v[free] = 1
        for col, row in ech.pivots.items():
            c = row.get(free, 0)
            if c:
                v[col] = (-c) % p if p else -c
        basis.append(v)
    return basis


def dense_rank(field: Field, matrix: Sequence[Sequence]) -> int:
    ech = Echelon(field)
    for row in matrix:
        ech.add({j: v for j, v in enumerate(row) if v})
    return ech.rank

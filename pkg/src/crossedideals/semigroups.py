"""Finite inverse semigroups as multiplication tables.

Elements are dense indices 0..size-1 with optional display names.  The
involution is part of the data; validation checks associativity, the
involutive anti-homomorphism laws, s s* s = s, and that idempotents
commute (which forces uniqueness of generalized inverses).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .validation import ValidationReport


@dataclass(frozen=True)
class InverseSemigroup:
    mult: tuple
    star: tuple
    names: tuple | None = None

    def __post_init__(self):
        n = len(self.mult)
        object.__setattr__(self, "mult", tuple(tuple(row) for row in self.mult))
        object.__setattr__(self, "star", tuple(self.star))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != n:
                raise ValueError("one name per element required")
        if len(self.star) != n or any(len(row) != n for row in self.mult):
            raise ValueError("malformed multiplication table")
        for row in self.mult:
            for v in row:
                if not 0 <= v < n:
                    raise ValueError(f"product {v} out of range")
        for v in self.star:
            if not 0 <= v < n:
                raise ValueError(f"involution value {v} out of range")

    @property
    def size(self) -> int:
        return len(self.mult)

    def product(self, s: int, t: int) -> int:
        return self.mult[s][t]

    def inv(self, s: int) -> int:
        return self.star[s]

    def name(self, s: int) -> str:
        return self.names[s] if self.names else str(s)

    def element_index(self, token: str) -> int:
        """Look an element up by display name, falling back to its index."""
        if self.names and token in self.names:
            return self.names.index(token)
        if token.isdigit():
            i = int(token)
            if 0 <= i < self.size:
                return i
        raise ValueError(f"unknown semigroup element {token!r}")

    @cached_property
    def idempotents(self) -> tuple:
        return tuple(e for e in range(self.size) if self.mult[e][e] == e)

    def leq(self, s: int, t: int) -> bool:
        """Natural partial order: s <= t iff s = t e for some idempotent e."""
        return any(self.mult[t][e] == s for e in self.idempotents)

    def order_pairs(self) -> tuple:
        """All strictly comparable pairs (s, t) with s <= t, s != t."""
        return tuple(
            (s, t)
            for s in range(self.size)
            for t in range(self.size)
            if s != t and self.leq(s, t)
        )

    def unitize(self) -> "InverseSemigroup":
        """Adjoin a fresh two-sided unit as the last element (always,
        even if the semigroup already has one)."""
        n = self.size
        mult = [list(row) + [s] for s, row in enumerate(self.mult)]
        mult.append(list(range(n)) + [n])
        star = list(self.star) + [n]
        names = (tuple(self.names) + ("1+",)) if self.names else None
        return InverseSemigroup(tuple(tuple(r) for r in mult), tuple(star), names)

    def validate(self) -> ValidationReport:
        n = self.size
        mult, star = self.mult, self.star
        for a in range(n):
            for b in range(n):
                ab = mult[a][b]
                for c in range(n):
                    if mult[ab][c] != mult[a][mult[b][c]]:
                        return ValidationReport.failed(
                            "associativity", (self.name(a), self.name(b), self.name(c)))
        for s in range(n):
            if star[star[s]] != s:
                return ValidationReport.failed("involution", (self.name(s),))
        for s in range(n):
            for t in range(n):
                if star[mult[s][t]] != mult[star[t]][star[s]]:
                    return ValidationReport.failed(
                        "star-antihomomorphism", (self.name(s), self.name(t)))
        for s in range(n):
            if mult[mult[s][star[s]]][s] != s:
                return ValidationReport.failed("inverse-law", (self.name(s),))
        idem = [e for e in range(n) if mult[e][e] == e]
        for e in idem:
            for f in idem:
                if mult[e][f] != mult[f][e]:
                    return ValidationReport.failed(
                        "commuting-idempotents", (self.name(e), self.name(f)))
        return ValidationReport.passed()

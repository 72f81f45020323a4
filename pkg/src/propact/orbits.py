"""Nilpotent orbits of o(2m+1, C) and sl(n), via partitions.

Orbits are labelled by partitions; each one is turned into its standard
neutral element (the dominant representative of the associated hyperbolic
orbit). For type B the same data is also carried by a multiplicity sequence
``a = (a_0, ..., a_2m)``, where ``a_i`` counts the entries equal to ``i`` in
the neutral element.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .roots import IntVector


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(not isinstance(p, int) or p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive ints: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {self.parts}")

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def multiplicity(self, part: int) -> int:
        return self.parts.count(part)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def is_b_admissible(self, m: int) -> bool:
        """Partition of 2m+1 whose even parts have even multiplicity."""
        if self.size != 2 * m + 1:
            return False
        return all(k % 2 == 0 for p, k in self.multiplicities.items() if p % 2 == 0)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """Partitions of n in descending lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(rem: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for tail in rec(rem - first, first):
                yield (first,) + tail

    for parts in rec(n, n if largest is None else largest):
        yield Partition(parts)


def enumerate_partitions_B(m: int) -> list[Partition]:
    if m < 1:
        raise ValueError("m must be >= 1")
    return [d for d in partitions(2 * m + 1) if d.is_b_admissible(m)]


def enumerate_partitions_A(n: int) -> list[Partition]:
    if n < 2:
        raise ValueError("n must be >= 2")
    return list(partitions(n))


def _jordan_weights(d: Partition) -> list[int]:
    """Eigenvalues of the neutral element on the defining representation."""
    seq = []
    for part in d.parts:
        seq.extend(range(part - 1, -part, -2))
    return sorted(seq, reverse=True)


def neutral_element_B(d: Partition, m: int) -> IntVector:
    if not d.is_b_admissible(m):
        raise ValueError(f"{d} is not a B-admissible partition of {2 * m + 1}")
    full = _jordan_weights(d)
    h = tuple(full[:m])
    expected = list(h) + [0] + [-x for x in reversed(h)]
    if full != expected:  # pragma: no cover - guaranteed for admissible d
        raise AssertionError(f"weights of {d} are not symmetric: {full}")
    return h


def neutral_element_A(d: Partition, n: int) -> IntVector:
    if d.size != n:
        raise ValueError(f"{d} is not a partition of {n}")
    return tuple(_jordan_weights(d))


def satisfies_ddagger(a: Sequence[int], m: int) -> bool:
    """The constraints on a multiplicity sequence of length 2m+1."""
    if len(a) != 2 * m + 1 or any(not isinstance(x, int) or x < 0 for x in a):
        return False
    odd = a[1::2]
    even = a[2::2]
    if any(x % 2 for x in odd):
        return False
    if even and 2 * a[0] + 1 < even[0]:
        return False
    if any(x < y for x, y in zip(even, even[1:])):
        return False
    if any(x < y for x, y in zip(odd, odd[1:])):
        return False
    return sum(a) == m


@dataclass(frozen=True, order=True)
class MultiplicitySequence:
    a: tuple[int, ...]
    m: int

    def __post_init__(self):
        if not satisfies_ddagger(self.a, self.m):
            raise ValueError(f"{self.a} violates the multiplicity constraints for m={self.m}")

    def __getitem__(self, i: int) -> int:
        return self.a[i]

    def vector(self) -> IntVector:
        return vector_from_multiplicity_sequence(self)


def multiplicity_sequence_from_partition(d: Partition, m: int) -> MultiplicitySequence:
    if not d.is_b_admissible(m):
        raise ValueError(f"{d} is not a B-admissible partition of {2 * m + 1}")
    mult = d.multiplicities

    def dm(ell: int) -> int:
        return mult.get(ell, 0)

    odd_total = sum(dm(2 * i + 1) for i in range(m + 1))
    a = [0] * (2 * m + 1)
    a[0] = (odd_total - 1) // 2
    for k in range(1, m + 1):
        a[2 * k] = sum(dm(2 * i + 1) for i in range(k, m + 1))
        a[2 * k - 1] = sum(dm(2 * i) for i in range(k, m + 1))
    return MultiplicitySequence(tuple(a), m)


def partition_from_multiplicity_sequence(seq: MultiplicitySequence) -> Partition:
    a, m = seq.a, seq.m
    ext = list(a) + [0, 0]
    parts = []
    for ell in range(2 * m + 1, 0, -1):
        if ell == 1:
            k = 2 * a[0] + 1 - ext[2]
        else:
            k = ext[ell - 1] - ext[ell + 1]
        parts.extend([ell] * k)
    return Partition(tuple(parts))


def vector_from_multiplicity_sequence(seq: MultiplicitySequence) -> IntVector:
    a = seq.a
    out: list[int] = []
    for value in range(2 * seq.m, -1, -1):
        out.extend([value] * a[value])
    return tuple(out)


def _nonincreasing(length: int, budget: int, cap: int, step: int) -> Iterator[tuple[int, ...]]:
    """Nonincreasing tuples of multiples of ``step`` with sum <= budget."""
    if length == 0:
        yield ()
        return
    top = min(cap, budget)
    top -= top % step
    for first in range(top, -1, -step):
        for tail in _nonincreasing(length - 1, budget - first, first, step):
            yield (first,) + tail


def enumerate_ddagger_sequences(m: int) -> list[MultiplicitySequence]:
    """All multiplicity sequences for o(2m+1), built directly from the constraints.

    Sorted in descending lexicographic order of ``a``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    out = []
    for odd in _nonincreasing(m, m, m, 2):
        used = sum(odd)
        for even in _nonincreasing(m, m - used, m - used, 1):
            a0 = m - used - sum(even)
            if 2 * a0 + 1 < even[0]:
                continue
            a = [a0]
            for o, e in zip(odd, even):
                a.extend((o, e))
            out.append(MultiplicitySequence(tuple(a), m))
    return sorted(out, key=lambda s: s.a, reverse=True)

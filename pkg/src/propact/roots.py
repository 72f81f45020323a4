"""Restricted root data for types B_m and A_{m-1}.

Vectors of the Cartan subspace are plain tuples of Python ints. For type B
the ambient space is Z^m and the Weyl group is the full group of signed
permutations; for type A the ambient space is the trace-zero part of Z^m and
the Weyl group is the symmetric group.

Action convention, used everywhere in the package::

    (sigma v)[i] = sigma.signs[i] * v[sigma.perm^{-1}(i)]

so that ``<c, sigma v> == <sigma^{-1} c, v>``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

IntVector = tuple[int, ...]

# Leaf budget for the generic depth-first witness search. Roughly a minute of
# pure-Python work; full signed-permutation search stays below it up to m = 9.
DEFAULT_MAX_NODES = 20_000_000


class SearchInfeasible(RuntimeError):
    """The generic witness search ran past its node budget."""


@dataclass(frozen=True)
class RootType:
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise ValueError(f"unknown root type {self.kind!r}")
        if not isinstance(self.m, int) or isinstance(self.m, bool):
            raise TypeError("m must be an int")
        if self.kind == "B" and self.m < 1:
            raise ValueError("type B requires m >= 1")
        if self.kind == "A" and self.m < 2:
            raise ValueError("type A requires m >= 2")

    @classmethod
    def B(cls, m: int) -> "RootType":
        return cls("B", m)

    @classmethod
    def A(cls, m: int) -> "RootType":
        return cls("A", m)

    @property
    def signed(self) -> bool:
        return self.kind == "B"

    @property
    def rank(self) -> int:
        """Real rank of the ambient group (dimension of the Cartan subspace)."""
        return self.m if self.kind == "B" else self.m - 1

    def weyl_order(self) -> int:
        return math.factorial(self.m) * (2**self.m if self.signed else 1)

    def vector(self, coords: Iterable[int]) -> IntVector:
        v = tuple(coords)
        check_vector(self, v)
        return v

    def __str__(self) -> str:
        return f"{self.kind}(m={self.m})"


def check_vector(rt: RootType, v: Sequence[int]) -> None:
    if len(v) != rt.m:
        raise ValueError(f"expected length {rt.m} for {rt}, got {len(v)}")
    for x in v:
        if not isinstance(x, int) or isinstance(x, bool):
            raise TypeError(f"coordinates must be exact ints, got {x!r}")
    if rt.kind == "A" and sum(v) != 0:
        raise ValueError(f"type A vectors must have zero coordinate sum: {tuple(v)}")


def inner(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class SignedPermutation:
    """Element of S_m x| {+-1}^m.

    ``perm[j]`` is the position that coordinate ``j`` is moved to (0-based).
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        m = len(self.perm)
        if sorted(self.perm) != list(range(m)):
            raise ValueError(f"perm is not a bijection: {self.perm}")
        if len(self.signs) != m or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad signs {self.signs}")

    @classmethod
    def identity(cls, m: int) -> "SignedPermutation":
        return cls(tuple(range(m)), (1,) * m)

    @classmethod
    def from_preimages(cls, pre: Sequence[int], signs: Sequence[int]) -> "SignedPermutation":
        """Build from ``pre[i] = perm^{-1}(i)``."""
        perm = [0] * len(pre)
        for i, j in enumerate(pre):
            perm[j] = i
        return cls(tuple(perm), tuple(signs))

    @property
    def m(self) -> int:
        return len(self.perm)

    @cached_property
    def preimages(self) -> tuple[int, ...]:
        pre = [0] * self.m
        for j, i in enumerate(self.perm):
            pre[i] = j
        return tuple(pre)

    @property
    def is_unsigned(self) -> bool:
        return all(s == 1 for s in self.signs)

    def __call__(self, v: Sequence[int]) -> IntVector:
        if len(v) != self.m:
            raise ValueError(f"dimension mismatch: {self.m} vs {len(v)}")
        pre = self.preimages
        return tuple(self.signs[i] * v[pre[i]] for i in range(self.m))

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition: ``(self * other)(v) == self(other(v))``."""
        if other.m != self.m:
            raise ValueError("dimension mismatch")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.m))
        pre = self.preimages
        signs = tuple(self.signs[i] * other.signs[pre[i]] for i in range(self.m))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        return SignedPermutation(self.preimages, tuple(self.signs[self.perm[i]] for i in range(self.m)))

    def to_dict(self) -> dict:
        return {"perm": [p + 1 for p in self.perm], "signs": list(self.signs)}


def act(sigma: SignedPermutation, v: Sequence[int], rt: Optional[RootType] = None) -> IntVector:
    if rt is not None:
        check_vector(rt, v)
        if not rt.signed and not sigma.is_unsigned:
            raise ValueError("type A Weyl elements carry no sign flips")
        if sigma.m != rt.m:
            raise ValueError("dimension mismatch")
    return sigma(v)


def dominant(v: Sequence[int], rt: Optional[RootType] = None) -> IntVector:
    """Chamber representative of the Weyl orbit of ``v``.

    Without ``rt`` the vector is treated as type B.
    """
    if rt is not None:
        check_vector(rt, v)
    if rt is None or rt.signed:
        return tuple(sorted((abs(x) for x in v), reverse=True))
    return tuple(sorted(v, reverse=True))


def weyl_group(rt: RootType) -> Iterable[SignedPermutation]:
    """Every element of W, in a fixed order. Only sensible for small m."""
    sign_choices = itertools.product((1, -1), repeat=rt.m) if rt.signed else [(1,) * rt.m]
    sign_choices = list(sign_choices)
    for perm in itertools.permutations(range(rt.m)):
        for signs in sign_choices:
            yield SignedPermutation(perm, signs)


# ---------------------------------------------------------------------------
# exact linear algebra


def _primitive(vec) -> IntVector:
    """Scale a rational vector to a primitive integer vector."""
    from sympy import ilcm, igcd, Rational

    vals = [Rational(x) for x in vec]
    den = 1
    for x in vals:
        den = ilcm(den, x.q)
    ints = [int(x * den) for x in vals]
    g = 0
    for x in ints:
        g = igcd(g, x)
    if g:
        ints = [x // g for x in ints]
    # first nonzero entry positive
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def integer_nullspace(rows: Sequence[Sequence[int]], m: int) -> list[IntVector]:
    """Integer basis of ``{x in Q^m : <r, x> = 0 for every row r}``."""
    from sympy import Matrix

    if not rows:
        return [tuple(1 if i == j else 0 for i in range(m)) for j in range(m)]
    return [_primitive(v) for v in Matrix([list(r) for r in rows]).nullspace()]


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    from sympy import Matrix

    rows = [list(r) for r in rows if any(r)]
    return Matrix(rows).rank() if rows else 0


@dataclass(frozen=True, eq=False)
class LinearSubspace:
    """A rational subspace of the Cartan subspace of ``root_type``.

    Exactly one of ``functionals`` (kernel form) or ``vectors`` (span form)
    is supplied; the other is derived on demand. For type A the trace
    functional is implicitly part of every kernel form.
    """

    root_type: RootType
    functionals: Optional[tuple[IntVector, ...]] = None
    vectors: Optional[tuple[IntVector, ...]] = None

    def __post_init__(self):
        if (self.functionals is None) == (self.vectors is None):
            raise ValueError("give exactly one of kernel form or span form")
        rt = self.root_type
        if self.functionals is not None:
            for c in self.functionals:
                if len(c) != rt.m:
                    raise ValueError(f"functional {c} has wrong length for {rt}")
                if any(not isinstance(x, int) or isinstance(x, bool) for x in c):
                    raise TypeError(f"functional {c} must have exact int entries")
        else:
            for v in self.vectors:
                check_vector(rt, v)

    @classmethod
    def kernel(cls, rt: RootType, functionals: Iterable[Sequence[int]]) -> "LinearSubspace":
        return cls(rt, functionals=tuple(tuple(c) for c in functionals))

    @classmethod
    def span(cls, rt: RootType, vectors: Iterable[Sequence[int]]) -> "LinearSubspace":
        return cls(rt, vectors=tuple(tuple(v) for v in vectors))

    def _trace_rows(self) -> list[IntVector]:
        return [(1,) * self.root_type.m] if self.root_type.kind == "A" else []

    @cached_property
    def kernel_form(self) -> tuple[IntVector, ...]:
        """Functionals cutting out the subspace (type A: trace included)."""
        if self.functionals is not None:
            rows = list(self.functionals)
            if self.root_type.kind == "A" and integer_rank(rows + self._trace_rows()) > integer_rank(rows):
                rows = rows + self._trace_rows()
            return tuple(rows)
        vecs = [v for v in self.vectors if any(v)]
        return tuple(integer_nullspace(vecs, self.root_type.m))

    @cached_property
    def span_form(self) -> tuple[IntVector, ...]:
        if self.vectors is not None:
            return self.vectors
        rows = list(self.functionals) + self._trace_rows()
        rows = [r for r in rows if any(r)]
        return tuple(integer_nullspace(rows, self.root_type.m))

    @property
    def dim(self) -> int:
        if self.vectors is not None:
            return integer_rank(self.vectors)
        return len(self.span_form)

    @cached_property
    def search_functionals(self) -> tuple[IntVector, ...]:
        """Kernel functionals that actually constrain vectors of the ambient space.

        Zero rows and (type A) multiples of the trace are dropped, duplicates
        removed; order is otherwise preserved.
        """
        out: list[IntVector] = []
        for c in self.kernel_form:
            if not any(c):
                continue
            if self.root_type.kind == "A" and len(set(c)) == 1:
                continue
            if c not in out:
                out.append(c)
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        check_vector(self.root_type, v)
        return all(inner(c, v) == 0 for c in self.kernel_form)

    def __repr__(self) -> str:
        if self.functionals is not None:
            return f"LinearSubspace.kernel({self.root_type}, {list(self.functionals)})"
        return f"LinearSubspace.span({self.root_type}, {list(self.vectors)})"


# ---------------------------------------------------------------------------
# witness search


def _subset_with_sum(values: Sequence[int], target: int) -> Optional[list[int]]:
    """Indices of a sub-multiset of nonnegative ``values`` summing to ``target``."""
    if target < 0 or target > sum(values):
        return None
    # reach[k] is a bitset of sums attainable with the first k values
    reach = [1]
    for x in values:
        reach.append(reach[-1] | (reach[-1] << x))
    if not (reach[-1] >> target) & 1:
        return None
    chosen = []
    t = target
    for k in range(len(values), 0, -1):
        if (reach[k - 1] >> t) & 1:
            continue
        t -= values[k - 1]
        chosen.append(k - 1)
    return chosen[::-1]


def _fast_path_applies(c: Sequence[int]) -> bool:
    return len(set(c)) <= 3


def _arrangement_fast(c: Sequence[int], v: Sequence[int], signed: bool) -> Optional[SignedPermutation]:
    """Find tau with ``<tau c, v> = 0`` for a functional with few distinct entries.

    The most frequent coefficient forms a bulk block; the remaining
    coefficients are placed explicitly and the signs of the bulk block are
    settled by a subset-sum table over ``|v_j|``.
    """
    m = len(c)
    counts = Counter(c)
    bulk = max(counts, key=lambda x: (counts[x], x == 0, -abs(x)))
    others = sorted((x for x in counts if x != bulk), key=lambda x: (-abs(x), -x))
    slots_by_value = {x: [i for i in range(m) if c[i] == x] for x in counts}

    def placements(vals, free):
        if not vals:
            yield []
            return
        x, rest = vals[0], vals[1:]
        for pos in itertools.combinations(free, counts[x]):
            remaining = [j for j in free if j not in pos]
            for tail in placements(rest, remaining):
                yield [(x, pos)] + tail

    for placement in placements(others, list(range(m))):
        placed_pos = [j for _, pos in placement for j in pos]
        placed_coef = [x for x, pos in placement for _ in pos]
        rest = [j for j in range(m) if j not in set(placed_pos)]
        # sign freedom only where it changes the sum
        free_sign = [signed and x != 0 and v[j] != 0 for x, j in zip(placed_coef, placed_pos)]
        for flips in itertools.product(*[(1, -1) if f else (1,) for f in free_sign]):
            placed = sum(s * x * v[j] for s, x, j in zip(flips, placed_coef, placed_pos))
            bulk_signs = {j: 1 for j in rest}
            if bulk == 0 or not rest:
                if placed != 0:
                    continue
            elif not signed:
                if placed + bulk * sum(v[j] for j in rest) != 0:
                    continue
            else:
                if placed % bulk:
                    continue
                target = -placed // bulk
                absv = [abs(v[j]) for j in rest]
                total = sum(absv)
                if (total - target) % 2:
                    continue
                neg = _subset_with_sum(absv, (total - target) // 2)
                if neg is None:
                    continue
                neg_pos = {rest[k] for k in neg}
                for j in rest:
                    s = -1 if j in neg_pos else 1
                    bulk_signs[j] = s if v[j] >= 0 else -s
            return _assemble(c, slots_by_value, bulk, placement, flips, rest, bulk_signs)
    return None


def _assemble(c, slots_by_value, bulk, placement, flips, rest, bulk_signs) -> SignedPermutation:
    m = len(c)
    pre = [0] * m
    signs = [1] * m
    queues = {x: list(idx) for x, idx in slots_by_value.items()}
    k = 0
    for x, pos in placement:
        for j in pos:
            pre[j] = queues[x].pop(0)
            signs[j] = flips[k]
            k += 1
    for j in rest:
        pre[j] = queues[bulk].pop(0)
        signs[j] = bulk_signs[j]
    return SignedPermutation.from_preimages(pre, signs)


def _search_generic(
    funcs: Sequence[Sequence[int]],
    vecs: Sequence[Sequence[int]],
    signed: bool,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Optional[SignedPermutation]:
    """Depth-first search for sigma with ``<c, sigma u> = 0`` for all c, u.

    Positions are filled left to right, each with an unused source coordinate
    and a sign; a branch is cut as soon as some partial sum cannot be
    cancelled by the remaining positions (rearrangement bound).
    """
    m = len(funcs[0])
    F, V = len(funcs), len(vecs)
    columns = [tuple(u[j] for u in vecs) for j in range(m)]
    abs_c_suffix = [[sorted((abs(c[i]) for i in range(p, m)), reverse=True) for p in range(m + 1)] for c in funcs]
    c_suffix = [[sorted(c[i] for i in range(p, m)) for p in range(m + 1)] for c in funcs]
    partial = [[0] * V for _ in range(F)]
    used = [False] * m
    pre = [0] * m
    signs = [1] * m
    nodes = 0

    def feasible(p: int) -> bool:
        free = [j for j in range(m) if not used[j]]
        for b in range(V):
            if signed:
                us = sorted((abs(vecs[b][j]) for j in free), reverse=True)
            else:
                us = sorted(vecs[b][j] for j in free)
            for a in range(F):
                s = partial[a][b]
                if signed:
                    bound = sum(x * y for x, y in zip(abs_c_suffix[a][p], us))
                    if abs(s) > bound:
                        return False
                else:
                    cs = c_suffix[a][p]
                    hi = sum(x * y for x, y in zip(cs, us))
                    lo = sum(x * y for x, y in zip(cs, reversed(us)))
                    if not lo <= -s <= hi:
                        return False
        return True

    def dfs(p: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise SearchInfeasible(f"generic witness search exceeded {max_nodes} nodes (m={m})")
        if p == m:
            return all(partial[a][b] == 0 for a in range(F) for b in range(V))
        if not feasible(p):
            return False
        coeff_nonzero = any(c[p] for c in funcs)
        tried = set()
        for j in range(m):
            if used[j] or columns[j] in tried:
                continue
            tried.add(columns[j])
            col_nonzero = any(columns[j])
            for s in ((1, -1) if signed and coeff_nonzero and col_nonzero else (1,)):
                used[j] = True
                pre[p], signs[p] = j, s
                for a in range(F):
                    for b in range(V):
                        partial[a][b] += funcs[a][p] * s * columns[j][b]
                ok = dfs(p + 1)
                if ok:
                    return True
                for a in range(F):
                    for b in range(V):
                        partial[a][b] -= funcs[a][p] * s * columns[j][b]
                used[j] = False
        return False

    if dfs(0):
        return SignedPermutation.from_preimages(pre, signs)
    return None


def annihilating_arrangement(
    c: Sequence[int], v: Sequence[int], rt: RootType, max_nodes: int = DEFAULT_MAX_NODES
) -> Optional[SignedPermutation]:
    """Weyl element tau with ``<tau c, v> = 0``, or None.

    This is the form in which witnesses are tabulated: ``tau c`` is the
    rearranged functional that annihilates ``v``.
    """
    check_vector(rt, v)
    if len(c) != rt.m:
        raise ValueError("dimension mismatch")
    if not any(c) or not any(v):
        return SignedPermutation.identity(rt.m)
    if _fast_path_applies(c):
        return _arrangement_fast(c, v, rt.signed)
    found = _search_generic([v], [c], rt.signed, max_nodes)
    return found


def orbit_meets_subspace(
    v: Sequence[int], H: LinearSubspace, max_nodes: int = DEFAULT_MAX_NODES
) -> Optional[SignedPermutation]:
    """Witness sigma with ``sigma v`` in H, or None when the orbit misses H."""
    rt = H.root_type
    check_vector(rt, v)
    funcs = H.search_functionals
    if not funcs or not any(v):
        return SignedPermutation.identity(rt.m)
    if len(funcs) == 1 and _fast_path_applies(funcs[0]):
        tau = _arrangement_fast(funcs[0], v, rt.signed)
        return None if tau is None else tau.inverse()
    return _search_generic(funcs, [tuple(v)], rt.signed, max_nodes)


def saturation_witness(
    L: LinearSubspace, H: LinearSubspace, max_nodes: int = DEFAULT_MAX_NODES
) -> Optional[SignedPermutation]:
    """Common sigma with ``sigma L`` inside H, or None.

    A vector space over an infinite field is never a finite union of proper
    subspaces, so L lies in the union of the translates wH exactly when it
    lies in a single one; that single containment is what is searched.
    """
    if L.root_type != H.root_type:
        raise ValueError("root types differ")
    rt = H.root_type
    vecs = [v for v in L.span_form if any(v)]
    funcs = H.search_functionals
    if not vecs or not funcs:
        return SignedPermutation.identity(rt.m)
    if integer_rank(vecs) > H.dim:
        return None
    if len(vecs) == 1:
        return orbit_meets_subspace(vecs[0], H, max_nodes)
    return _search_generic(funcs, vecs, rt.signed, max_nodes)


def subspace_in_weyl_saturation(L: LinearSubspace, H: LinearSubspace, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    return saturation_witness(L, H, max_nodes) is not None


def minus_w0_fixed_space(rt: RootType) -> LinearSubspace:
    """Fixed space of ``-w0`` as a span form."""
    m = rt.m
    if rt.signed:
        return LinearSubspace.span(rt, [tuple(int(i == j) for i in range(m)) for j in range(m)])
    vecs = []
    for i in range(m // 2):
        e = [0] * m
        e[i], e[m - 1 - i] = 1, -1
        vecs.append(tuple(e))
    return LinearSubspace.span(rt, vecs)


def benoist_pfree(rt: RootType, H: LinearSubspace) -> bool:
    """Free-group properness: the fixed space of -w0 escapes W a_H."""
    if H.root_type != rt:
        raise ValueError("root types differ")
    return not subspace_in_weyl_saturation(minus_w0_fixed_space(rt), H)


def calabi_markus_pinf(rank_g: int, rank_h: int) -> bool:
    if rank_h < 0 or rank_g < 0:
        raise ValueError("ranks must be nonnegative")
    if rank_h > rank_g:
        raise ValueError(f"rank of H ({rank_h}) exceeds rank of G ({rank_g})")
    return rank_g > rank_h


def subgroup_rank(H: LinearSubspace) -> int:
    return H.dim

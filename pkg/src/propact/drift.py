"""Cartan projections of discrete subgroups of O(n,1) and their linear drift.

Matrices act on R^{n+1} with the Minkowski form ``J = diag(1, ..., 1, -1)``
(time coordinate last). For g in O(n,1) with the standard Cartan involution
the singular values are ``e^t, 1, ..., 1, e^-t``, so the Cartan projection is
``log`` of the spectral norm.

Words are enumerated in the group, not in the free group: a generator set
may declare commuting pairs, and words are kept in lexicographic normal form
for the graph product they present (right-angled Coxeter groups, free
groups, right-angled Artin groups). Those words are geodesic, so the word
length used in the drift fits is the true word length.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
import scipy.linalg

TAU_GRAM = 1e-9
TAU_MC = 1e-6
TAU_RATIO = 0.05
DEFAULT_MAX_LEN = 14
DEFAULT_WORDS_PER_LENGTH = 4096


class GramCheckError(ValueError):
    pass


class WordCeilingError(ValueError):
    pass


def minkowski(n: int) -> np.ndarray:
    return np.diag([1.0] * n + [-1.0])


def gram_defect(g: np.ndarray) -> float:
    """Relative violation of ``g^T J g = J``."""
    g = np.asarray(g, dtype=float)
    J = minkowski(g.shape[0] - 1)
    scale = max(1.0, np.linalg.norm(g, 2) ** 2)
    return float(np.max(np.abs(g.T @ J @ g - J)) / scale)


def check_lorentz(g: np.ndarray, tol: float = TAU_GRAM) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 2:
        raise GramCheckError(f"not a square matrix of size >= 2: {g.shape}")
    d = gram_defect(g)
    if d > tol:
        raise GramCheckError(f"matrix does not preserve the Minkowski form (defect {d:.3e})")
    return g


def cartan_mu(g: np.ndarray, check: bool = True) -> float:
    """Cartan projection of g in O(n,1)."""
    g = check_lorentz(g) if check else np.asarray(g, dtype=float)
    return max(0.0, math.log(np.linalg.norm(g, 2)))


def _mu_batch(mats: np.ndarray) -> np.ndarray:
    if mats.shape[0] == 0:
        return np.zeros(0)
    return np.maximum(0.0, np.log(np.linalg.norm(mats, ord=2, axis=(1, 2))))


def boost(t: float, n: int = 2, axis: int = 0) -> np.ndarray:
    """Hyperbolic translation of length t along spatial axis ``axis``."""
    g = np.eye(n + 1)
    g[axis, axis] = g[n, n] = math.cosh(t)
    g[axis, n] = g[n, axis] = math.sinh(t)
    return g


def rotation(theta: float, n: int = 2) -> np.ndarray:
    """Rotation by theta in the first two spatial coordinates."""
    g = np.eye(n + 1)
    c, s = math.cos(theta), math.sin(theta)
    g[0, 0], g[0, 1], g[1, 0], g[1, 1] = c, -s, s, c
    return g


def reflection(normal: np.ndarray) -> np.ndarray:
    """Reflection in the hyperplane orthogonal to a unit spacelike vector."""
    nv = np.asarray(normal, dtype=float)
    J = minkowski(len(nv) - 1)
    return np.eye(len(nv)) - 2.0 * np.outer(nv, nv) @ J


@dataclass
class GeneratorSet:
    """Symmetric generating set: ``inverse[i]`` indexes the inverse of generator i.

    ``commuting`` lists index pairs declared to commute; it is closed under
    taking inverses on construction.
    """

    matrices: np.ndarray
    inverse: tuple[int, ...]
    labels: tuple[str, ...] = ()
    commuting: frozenset = frozenset()
    tol: float = TAU_GRAM

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=float)
        if self.matrices.ndim != 3:
            raise ValueError("matrices must have shape (count, n+1, n+1)")
        k = len(self.matrices)
        self.inverse = tuple(int(i) for i in self.inverse)
        if len(self.inverse) != k or any(not 0 <= i < k for i in self.inverse):
            raise ValueError("inverse map has wrong length or range")
        if any(self.inverse[self.inverse[i]] != i for i in range(k)):
            raise ValueError("inverse map is not an involution")
        if not self.labels:
            self.labels = tuple(f"g{i}" for i in range(k))
        if len(self.labels) != k:
            raise ValueError("one label per generator")
        eye = np.eye(self.dim)
        for i, g in enumerate(self.matrices):
            check_lorentz(g, self.tol)
            if np.max(np.abs(g @ self.matrices[self.inverse[i]] - eye)) > self.tol * max(1.0, np.linalg.norm(g, 2) ** 2):
                raise ValueError(f"generator {self.labels[i]} times its declared inverse is not the identity")
        pairs = set()
        for a, b in self.commuting:
            for x in (a, self.inverse[a]):
                for y in (b, self.inverse[b]):
                    if x != y:
                        pairs.add((x, y))
                        pairs.add((y, x))
        self.commuting = frozenset(pairs)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def n(self) -> int:
        return self.dim - 1

    def __len__(self) -> int:
        return len(self.matrices)

    def evaluate(self, word: Sequence[int]) -> np.ndarray:
        g = np.eye(self.dim)
        for x in word:
            g = g @ self.matrices[x]
        return g

    def with_matrices(self, matrices) -> "GeneratorSet":
        """Same labels and relations, new images (e.g. another representation)."""
        return GeneratorSet(np.asarray(matrices, dtype=float), self.inverse, self.labels, self.commuting, self.tol)


def right_angled_polygon_generators(k: int, tol: float = TAU_GRAM) -> GeneratorSet:
    """Reflections in the sides of the regular right-angled 2k-gon centred at the origin.

    For a regular N-gon with interior angle alpha the inradius r satisfies
    ``cosh r = cos(alpha/2) / sin(pi/N)``.
    """
    if k < 3:
        raise ValueError("need k >= 3 for a hyperbolic right-angled 2k-gon")
    N = 2 * k
    r = math.acosh(math.cos(math.pi / 4) / math.sin(math.pi / N))
    mats = []
    for i in range(N):
        th = 2 * math.pi * i / N
        normal = np.array([math.cos(th) * math.cosh(r), math.sin(th) * math.cosh(r), math.sinh(r)])
        mats.append(reflection(normal))
    gens = GeneratorSet(
        np.array(mats),
        inverse=tuple(range(N)),
        labels=tuple(f"r{i + 1}" for i in range(N)),
        commuting=frozenset((i, (i + 1) % N) for i in range(N)),
        tol=tol,
    )
    certify_polygon_group(gens, tol)
    return gens


def certify_polygon_group(gens: GeneratorSet, tol: float = TAU_GRAM) -> None:
    """Involutions, commuting neighbours, hyperbolic products of opposite sides."""
    N = len(gens)
    eye = np.eye(gens.dim)
    R = gens.matrices
    for i in range(N):
        if np.max(np.abs(R[i] @ R[i] - eye)) > tol:
            raise GramCheckError(f"r{i + 1} is not an involution")
        p = R[i] @ R[(i + 1) % N]
        if np.max(np.abs(p @ p - eye)) > tol:
            raise GramCheckError(f"r{i + 1}, r{(i + 1) % N + 1} do not meet at a right angle")
        if cartan_mu(R[i] @ R[(i + N // 2) % N]) <= tol:
            raise GramCheckError(f"opposite sides r{i + 1} and r{(i + N // 2) % N + 1} are not ultraparallel")


def ping_pong_generators(lengths: Sequence[float] = (2.0, 2.0), angles: Optional[Sequence[float]] = None) -> GeneratorSet:
    """Free group on boosts of the given translation lengths along axes through the origin.

    Default axes are spread evenly over a half turn (perpendicular for two
    generators). Generators come as (a, a^-1, b, b^-1, ...).
    """
    if angles is None:
        angles = [math.pi * i / len(lengths) for i in range(len(lengths))]
    mats, inverse, labels = [], [], []
    for i, (t, th) in enumerate(zip(lengths, angles)):
        R = rotation(th)
        g = R @ boost(t) @ R.T
        mats += [g, R @ boost(-t) @ R.T]
        inverse += [2 * i + 1, 2 * i]
        name = chr(ord("a") + i)
        labels += [name, name.upper()]
    return GeneratorSet(np.array(mats), tuple(inverse), tuple(labels))


def block_embed(g: np.ndarray, N: int) -> np.ndarray:
    """Standard block-diagonal inclusion O(n,1) -> O(N,1)."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0] - 1
    if N < n:
        raise ValueError(f"cannot embed O({n},1) into O({N},1)")
    out = np.eye(N + 1)
    out[:n, :n] = g[:n, :n]
    out[:n, N] = g[:n, n]
    out[N, :n] = g[n, :n]
    out[N, N] = g[n, n]
    return out


def embedded_rho(gens: GeneratorSet, N: int) -> GeneratorSet:
    return gens.with_matrices([block_embed(g, N) for g in gens.matrices])


def trivial_rho(gens: GeneratorSet, N: Optional[int] = None) -> GeneratorSet:
    d = gens.dim if N is None else N + 1
    return gens.with_matrices(np.broadcast_to(np.eye(d), (len(gens), d, d)).copy())


def conjugated_rho(gens: GeneratorSet, h: np.ndarray) -> GeneratorSet:
    h = check_lorentz(h)
    hinv = np.linalg.inv(h)
    return gens.with_matrices([h @ g @ hinv for g in gens.matrices])


# ---------------------------------------------------------------------------
# words


def _extends(word: Sequence[int], x: int, gens: GeneratorSet) -> bool:
    """Whether ``word + x`` is still a reduced word in lexicographic normal form."""
    inv, comm = gens.inverse, gens.commuting
    for y in reversed(word):
        if y == inv[x]:
            return False
        if (x, y) in comm:
            if y > x:
                return False
            continue
        break
    return True


def enumerate_words(
    gens: GeneratorSet, max_len: int, ceiling: int = DEFAULT_MAX_LEN, allow_long: bool = False
) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """All normal-form words of length 1..max_len with their products.

    Ordered by length, then lexicographically. The empty word is excluded.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    if max_len > ceiling and not allow_long:
        raise WordCeilingError(f"max_len {max_len} exceeds the ceiling {ceiling}; pass allow_long=True to override")
    layer = [((), np.eye(gens.dim))]
    for _ in range(max_len):
        nxt = []
        for word, g in layer:
            for x in range(len(gens)):
                if _extends(word, x, gens):
                    item = (word + (x,), g @ gens.matrices[x])
                    nxt.append(item)
                    yield item
        layer = nxt


@dataclass
class WordSample:
    """Words of each length with products under several representations.

    Layers are complete until they would exceed ``per_length`` words; past
    that point each layer is a seeded random subset of the one-letter
    extensions of the previous layer.
    """

    lengths: np.ndarray
    words: list[tuple[int, ...]]
    mats: list[np.ndarray]
    exhaustive: bool


def sample_words(
    gens: GeneratorSet,
    reps: Sequence[GeneratorSet],
    max_len: int,
    per_length: int = DEFAULT_WORDS_PER_LENGTH,
    seed: int = 0,
    ceiling: int = DEFAULT_MAX_LEN,
    allow_long: bool = False,
) -> WordSample:
    if max_len < 1:
        raise ValueError("max_len must be positive")
    if max_len > ceiling and not allow_long:
        raise WordCeilingError(f"max_len {max_len} exceeds the ceiling {ceiling}; pass allow_long=True to override")
    for r in reps:
        if len(r) != len(gens):
            raise ValueError("representations must be index-aligned with the generating set")
    rng = np.random.default_rng(seed)
    words: list[tuple[int, ...]] = [()]
    cur = [np.eye(r.dim)[None] for r in reps]
    all_len, all_words = [], []
    all_mats: list[list[np.ndarray]] = [[] for _ in reps]
    exhaustive = True
    for ell in range(1, max_len + 1):
        parents, letters = [], []
        for p, w in enumerate(words):
            for x in range(len(gens)):
                if _extends(w, x, gens):
                    parents.append(p)
                    letters.append(x)
        if len(parents) > per_length:
            exhaustive = False
            keep = np.sort(rng.choice(len(parents), size=per_length, replace=False))
            parents = [parents[i] for i in keep]
            letters = [letters[i] for i in keep]
        if not parents:
            break
        pa, le = np.array(parents), np.array(letters)
        cur = [c[pa] @ r.matrices[le] for c, r in zip(cur, reps)]
        words = [words[p] + (x,) for p, x in zip(parents, letters)]
        all_len.append(np.full(len(words), ell))
        all_words.extend(words)
        for store, c in zip(all_mats, cur):
            store.append(c)
    mats = [np.concatenate(s) if s else np.zeros((0, r.dim, r.dim)) for s, r in zip(all_mats, reps)]
    lengths = np.concatenate(all_len) if all_len else np.zeros(0, dtype=int)
    return WordSample(lengths, all_words, mats, exhaustive)


# ---------------------------------------------------------------------------
# drift fits


@dataclass(frozen=True)
class DriftSample:
    word_length: int
    mu_j: float
    mu_rho: float
    dist_to_line: float


@dataclass
class DriftFit:
    """Certified lower envelope ``value >= epsilon * length - M`` over all samples.

    ``values`` is the fitted quantity: the distance to the line for
    :func:`drift_statistics`, ``mu_j`` for :func:`convex_cocompact_drift`.
    """

    epsilon: float
    M: float
    word_lengths: np.ndarray
    mu_j: np.ndarray
    mu_rho: np.ndarray
    dist_to_line: np.ndarray
    values: np.ndarray
    exhaustive: bool = True
    c_car: Optional[float] = None

    @property
    def sample_count(self) -> int:
        return len(self.word_lengths)

    @property
    def samples(self) -> list[DriftSample]:
        return [
            DriftSample(int(l), float(a), float(b), float(d))
            for l, a, b, d in zip(self.word_lengths, self.mu_j, self.mu_rho, self.dist_to_line)
        ]

    def holds(self) -> bool:
        return bool(np.all(self.values >= self.epsilon * self.word_lengths - self.M))

    def summary(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "M": self.M,
            "c_car_estimate": self.c_car,
            "sample_count": self.sample_count,
            "exhaustive": self.exhaustive,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["word_length", "mu_j", "mu_rho", "dist_to_line"])
        for l, a, b, d in zip(self.word_lengths, self.mu_j, self.mu_rho, self.dist_to_line):
            w.writerow([int(l), f"{a:.17g}", f"{b:.17g}", f"{d:.17g}"])
        return buf.getvalue()


def fit_envelope(lengths: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Slope and offset of a lower envelope ``values >= eps * lengths - M``.

    ``eps`` is the slope of the last edge of the lower convex hull of the
    per-length minima (the drift rate seen at the longest words); ``M`` is
    the smallest offset for which the envelope holds on every sample.
    """
    lengths = np.asarray(lengths, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(lengths) == 0:
        raise ValueError("no samples")
    ells = np.unique(lengths)
    mins = np.array([values[lengths == l].min() for l in ells])
    if len(ells) == 1:
        eps = 0.0
    else:
        L, fL = ells[-1], mins[-1]
        eps = float(np.max((fL - mins[:-1]) / (L - ells[:-1])))
    M = float(np.max(eps * lengths - values))
    while not np.all(values >= eps * lengths - M):
        M = float(np.nextafter(M, np.inf))
    return eps, M


def line_distance(x: np.ndarray, y: np.ndarray, slope: float) -> np.ndarray:
    """Euclidean distance from (x, y) to the line through 0 of the given slope.

    ``slope = +-inf`` is the vertical axis.
    """
    if math.isinf(slope):
        d = np.abs(x)
    else:
        d = np.abs(slope * x - y) / math.hypot(1.0, slope)
    # rounding noise from computing the same norm twice is not drift
    noise = TAU_GRAM * np.maximum(1.0, np.hypot(x, y))
    return np.where(d < noise, 0.0, d)


def parse_slope(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "-inf", "axis", "vertical"):
        return math.inf
    return float(t)


def drift_statistics(
    j_gens: GeneratorSet,
    rho_gens: GeneratorSet,
    slope: float,
    max_len: int,
    per_length: int = DEFAULT_WORDS_PER_LENGTH,
    seed: int = 0,
    allow_long: bool = False,
) -> DriftFit:
    """Distance of ``(mu_j, mu_rho)`` to a line through the origin, word by word."""
    if len(j_gens) != len(rho_gens) or j_gens.inverse != rho_gens.inverse:
        raise ValueError("generator sets are not index-aligned")
    ws = sample_words(j_gens, [j_gens, rho_gens], max_len, per_length, seed, allow_long=allow_long)
    mu_j, mu_r = _mu_batch(ws.mats[0]), _mu_batch(ws.mats[1])
    dist = line_distance(mu_j, mu_r, slope)
    eps, M = fit_envelope(ws.lengths, dist)
    fit = DriftFit(eps, M, ws.lengths, mu_j, mu_r, dist, dist, ws.exhaustive)
    fit.c_car = _c_car_from(ws.lengths, mu_j, mu_r, max_len)
    return fit


def _c_car_from(lengths, mu_j, mu_r, max_len) -> float:
    mask = (lengths >= max_len / 2) & (mu_j >= TAU_GRAM)
    if not np.any(mask):
        return float("nan")
    return float(np.max(mu_r[mask] / mu_j[mask]))


def c_car_estimate(
    j_gens: GeneratorSet,
    rho_gens: GeneratorSet,
    max_len: int,
    per_length: int = DEFAULT_WORDS_PER_LENGTH,
    seed: int = 0,
) -> float:
    """Largest ratio ``|mu_rho| / |mu_j|`` over words of length >= max_len/2.

    An estimate of the Cartan domination constant, not a bound.
    """
    if len(j_gens) != len(rho_gens) or j_gens.inverse != rho_gens.inverse:
        raise ValueError("generator sets are not index-aligned")
    ws = sample_words(j_gens, [j_gens, rho_gens], max_len, per_length, seed)
    return _c_car_from(ws.lengths, _mu_batch(ws.mats[0]), _mu_batch(ws.mats[1]), max_len)


def convex_cocompact_drift(
    j_gens: GeneratorSet, max_len: int, per_length: int = DEFAULT_WORDS_PER_LENGTH, seed: int = 0
) -> DriftFit:
    """Lower envelope of ``mu_j`` against word length; epsilon > 0 signals convex cocompactness."""
    ws = sample_words(j_gens, [j_gens], max_len, per_length, seed)
    mu_j = _mu_batch(ws.mats[0])
    eps, M = fit_envelope(ws.lengths, mu_j)
    zeros = np.zeros_like(mu_j)
    return DriftFit(eps, M, ws.lengths, mu_j, zeros, zeros, mu_j, ws.exhaustive)


# ---------------------------------------------------------------------------
# linear-space estimate


def _orth(basis, tol: float) -> np.ndarray:
    a = np.atleast_2d(np.asarray(basis, dtype=float))
    if a.size == 0:
        return np.zeros((0, 0))
    # rows are basis vectors
    q = scipy.linalg.orth(a.T, rcond=tol)
    if q.shape[1] != a.shape[0]:
        raise ValueError("basis vectors are not numerically independent")
    return q


def delta_constant(v_prime, v_double_prime, tol: float = 1e-10) -> float:
    """Smallest distance to V'' of a unit vector of W, the orthogonal complement
    of V' ∩ V'' inside V'. Returns ``inf`` when W is zero (V' inside V'').

    Bases are given as rows.
    """
    Q1 = _orth(v_prime, tol)
    Q2 = _orth(v_double_prime, tol)
    dim = Q1.shape[0]
    if Q2.shape[0] not in (0, dim):
        raise ValueError("subspaces live in different dimensions")
    # V' ∩ V'': vectors of V' with no component off V''
    P2 = Q2 @ Q2.T if Q2.size else np.zeros((dim, dim))
    resid = (np.eye(dim) - P2) @ Q1
    _, s, vt = np.linalg.svd(resid, full_matrices=True)
    s_full = np.zeros(Q1.shape[1])
    s_full[: len(s)] = s
    complement = vt[s_full > tol]
    if complement.shape[0] == 0:
        return math.inf
    W = Q1 @ complement.T
    return float(np.linalg.svd((np.eye(dim) - P2) @ W, compute_uv=False).min())


def distance_to_subspace(points: np.ndarray, basis) -> np.ndarray:
    """Row-wise distance of ``points`` to span(basis); an empty basis is {0}."""
    points = np.atleast_2d(points)
    b = np.asarray(basis, dtype=float)
    if b.size == 0:
        return np.linalg.norm(points, axis=1)
    Q = _orth(b, 1e-10)
    return np.linalg.norm(points - (points @ Q) @ Q.T, axis=1)


def intersection_basis(v_prime, v_double_prime, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal rows spanning V' ∩ V''."""
    Q1 = _orth(v_prime, tol)
    Q2 = _orth(v_double_prime, tol)
    dim = Q1.shape[0]
    resid = (np.eye(dim) - Q2 @ Q2.T) @ Q1
    _, s, vt = np.linalg.svd(resid, full_matrices=True)
    s_full = np.zeros(Q1.shape[1])
    s_full[: len(s)] = s
    return (Q1 @ vt[s_full <= tol].T).T

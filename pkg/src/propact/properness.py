"""Decision procedures for proper SL(2,R)-actions and the combinatorial filters.

A homogeneous space G/H admits a proper action of a subgroup locally
isomorphic to SL(2,R) precisely when some nonzero standard neutral element
fails to lie in ``W a_H``. :func:`decide_psl2r` runs that test orbit by
orbit. The rest of the module is the machinery for the family
``a_H = ker(2, 1, ..., 1, 0)`` in type B_m: the witness search over all
multiplicity sequences, the four exclusion filters used to shrink the
search, and the tables of surviving sequences for m = 4..7.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional, Sequence

from .orbits import (
    MultiplicitySequence,
    Partition,
    enumerate_ddagger_sequences,
    enumerate_partitions_A,
    enumerate_partitions_B,
    neutral_element_A,
    neutral_element_B,
)
from .roots import (
    DEFAULT_MAX_NODES,
    IntVector,
    LinearSubspace,
    RootType,
    SignedPermutation,
    annihilating_arrangement,
    inner,
    orbit_meets_subspace,
)


def main_example_functional(m: int) -> IntVector:
    """``(2, 1, ..., 1, 0)`` with m-2 ones."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return (2,) + (1,) * (m - 2) + (0,)


def main_example_subspace(m: int) -> LinearSubspace:
    return LinearSubspace.kernel(RootType.B(m), [main_example_functional(m)])


@dataclass(frozen=True)
class OrbitWitness:
    partition: Partition
    neutral: IntVector
    witness: Optional[SignedPermutation]

    def to_dict(self) -> dict:
        return {
            "partition": list(self.partition.parts),
            "neutral_element": list(self.neutral),
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


@dataclass
class Psl2rVerdict:
    answer: bool
    witnesses: list[OrbitWitness] = field(default_factory=list)

    @property
    def escaping(self) -> list[OrbitWitness]:
        """Nonzero orbits whose neutral element avoids ``W a_H``."""
        return [w for w in self.witnesses if w.witness is None]


def _orbit_job(args):
    h, H, max_nodes = args
    return orbit_meets_subspace(h, H, max_nodes)


def _pmap(fn, jobs, threads: int):
    if threads == 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=None if threads == 0 else threads) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // 64)))


def decide_psl2r(rt: RootType, H: LinearSubspace, threads: int = 1, max_nodes: int = DEFAULT_MAX_NODES) -> Psl2rVerdict:
    """Decide whether G/H admits a proper action of a group locally SL(2,R).

    Raises :class:`~propact.roots.SearchInfeasible` if the generic witness
    search exhausts ``max_nodes`` on some orbit.
    """
    if H.root_type != rt:
        raise ValueError("root types differ")
    if rt.kind == "B":
        orbits = [(d, neutral_element_B(d, rt.m)) for d in enumerate_partitions_B(rt.m)]
    else:
        orbits = [(d, neutral_element_A(d, rt.m)) for d in enumerate_partitions_A(rt.m)]
    orbits = [(d, h) for d, h in orbits if any(h)]
    found = _pmap(_orbit_job, [(h, H, max_nodes) for _, h in orbits], threads)
    witnesses = [OrbitWitness(d, h, w) for (d, h), w in zip(orbits, found)]
    return Psl2rVerdict(answer=any(w.witness is None for w in witnesses), witnesses=witnesses)


@dataclass
class StarReport:
    m: int
    all_witnessed: bool
    per_sequence: list[tuple[MultiplicitySequence, Optional[SignedPermutation]]]

    def rows(self) -> list[dict]:
        c = main_example_functional(self.m)
        out = []
        for seq, tau in self.per_sequence:
            out.append(
                {
                    "a": list(seq.a),
                    "v": list(seq.vector()),
                    "witness": None if tau is None else tau.to_dict(),
                    "sigma_image": None if tau is None else list(tau(c)),
                }
            )
        return out


def _star_job(args):
    c, v, m = args
    return annihilating_arrangement(c, v, RootType.B(m))


def star_m_check(m: int, threads: int = 1) -> StarReport:
    """Search, for every multiplicity sequence, a signed permutation tau with
    ``<v_a, tau(2,1,...,1,0)> = 0``."""
    if m < 4:
        raise ValueError("m must be >= 4")
    c = main_example_functional(m)
    seqs = enumerate_ddagger_sequences(m)
    found = _pmap(_star_job, [(c, s.vector(), m) for s in seqs], threads)
    return StarReport(m, all(t is not None for t in found), list(zip(seqs, found)))


class Step(Enum):
    STEP2 = 2
    STEP4 = 4
    STEP5 = 5
    STEP7 = 7


def _top_even_index(a: Sequence[int]) -> Optional[int]:
    """Largest i >= 1 with a_{2i} >= 1."""
    m = (len(a) - 1) // 2
    for i in range(m, 0, -1):
        if a[2 * i] >= 1:
            return i
    return None


def step_filter(seq: MultiplicitySequence, which: Step) -> bool:
    """True if ``seq`` is not excluded by the named necessary condition for a
    minimal counterexample."""
    a, m = seq.a, seq.m
    if which is Step.STEP2:
        return a[2] in (2 * a[0], 2 * a[0] + 1)
    if which is Step.STEP4:
        return all(a[2 * i - 1] == 0 for i in range(1, m + 1))
    if which is Step.STEP5:
        i0 = _top_even_index(a)
        if i0 is None:
            # no nonzero even slot beyond a_0: nothing to exclude
            return True
        if a[2 * i0] != 1:
            return False
        return all(0 <= a[2 * i - 2] - a[2 * i] <= 1 for i in range(2, i0 + 1))
    if which is Step.STEP7:
        return all(a[2 * i] == 0 for i in range(4, m + 1))
    raise ValueError(which)


def survivors(m: int, steps: Sequence[Step]) -> list[MultiplicitySequence]:
    return [s for s in enumerate_ddagger_sequences(m) if all(step_filter(s, st) for st in steps)]


TABLE_FILTERS: dict[int, tuple[Step, ...]] = {
    4: (),
    5: (Step.STEP2,),
    6: (Step.STEP2, Step.STEP4, Step.STEP5),
    7: (Step.STEP2, Step.STEP4, Step.STEP5),
}


@dataclass(frozen=True)
class TableRow:
    v: IntVector
    sigma_image: IntVector

    def __post_init__(self):
        if inner(self.v, self.sigma_image) != 0:
            raise ValueError(f"<{self.v}, {self.sigma_image}> != 0")

    def to_dict(self) -> dict:
        return {"v": list(self.v), "sigma_image": list(self.sigma_image)}


def reproduce_table(m: int) -> list[TableRow]:
    """Rows of the witness table for m in 4..7, one per surviving sequence."""
    if m not in TABLE_FILTERS:
        raise ValueError("tables exist for m = 4, 5, 6, 7 only")
    c = main_example_functional(m)
    rows = []
    for seq in survivors(m, TABLE_FILTERS[m]):
        v = seq.vector()
        tau = annihilating_arrangement(c, v, RootType.B(m))
        if tau is None:  # pragma: no cover - would refute the assertion
            raise RuntimeError(f"no witness for {v}")
        rows.append(TableRow(v, tau(c)))
    return rows


def published_tables() -> dict[int, list[TableRow]]:
    """Witness tables as printed, keyed by m; rows keep the printed order."""
    text = resources.files("propact").joinpath("data/published_tables.jsonl").read_text()
    out: dict[int, list[TableRow]] = {}
    for line in text.splitlines():
        if line.strip():
            rec = json.loads(line)
            out.setdefault(rec["m"], []).append(TableRow(tuple(rec["v"]), tuple(rec["sigma_image"])))
    return out


def image_shape_ok(row: TableRow, m: int) -> bool:
    """The image is a signed rearrangement of (2, 1, ..., 1, 0)."""
    return sorted(abs(x) for x in row.sigma_image) == sorted(main_example_functional(m))


def verify_table(m: int) -> list[str]:
    """Compare the reproduced table with the printed one; an empty list means
    full agreement. Each message names the offending row."""
    problems = []
    printed = published_tables()[m]
    for row in printed:
        if not image_shape_ok(row, m):
            problems.append(f"printed row v={list(row.v)}: image {list(row.sigma_image)} is not a signed rearrangement")
    ours = sorted(r.v for r in reproduce_table(m))
    theirs = sorted(r.v for r in printed)
    for v in sorted(set(ours) - set(theirs)):
        problems.append(f"reproduced row v={list(v)} missing from printed table")
    for v in sorted(set(theirs) - set(ours)):
        problems.append(f"printed row v={list(v)} not reproduced")
    if len(ours) != len(theirs) and not problems:
        problems.append(f"row count {len(ours)} != printed {len(theirs)}")
    return problems


def theorem_main2_check(m: int, threads: int = 1) -> bool:
    """No proper SL(2,R)-action on the m-th member of the family."""
    if m < 4:
        raise ValueError("m must be >= 4")
    return not decide_psl2r(RootType.B(m), main_example_subspace(m), threads=threads).answer


def step8_contradiction_check(m: int) -> bool:
    if m < 8:
        raise ValueError("m must be >= 8")
    return not survivors(m, (Step.STEP2, Step.STEP4, Step.STEP5, Step.STEP7))

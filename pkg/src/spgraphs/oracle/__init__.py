"""Brute-force ground truth: every labelled graph on up to 7 (or 8) vertices.

The per-mask work runs in a compiled kernel when it is available and falls
back to a pure-Python implementation otherwise.  Set ``SPGRAPHS_PURE=1`` to
force the fallback.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..families import CountTable, ConnectivityLevel, FamilyKind, FAMILIES, LEVELS
from . import _pure

if os.environ.get("SPGRAPHS_PURE") == "1":
    _backend = _pure
else:
    try:
        from . import _core as _backend
    except ImportError:  # pragma: no cover - depends on the build
        _backend = _pure

BACKEND = "compiled" if _backend is not _pure else "pure"

CONNECTED = _pure.CONNECTED
BICONNECTED = _pure.BICONNECTED
K4_MINOR = _pure.K4_MINOR
K23_MINOR = _pure.K23_MINOR


def backend(name: str | None = None):
    """The kernel module in use, or a specific one ('compiled' or 'pure')."""
    if name is None:
        return _backend
    if name == "pure":
        return _pure
    if name == "compiled":
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")


class OracleError(AssertionError):
    """Two independent membership tests disagreed."""


def pairs(n: int):
    """Vertex pairs in edge-bit order."""
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class SmallGraph:
    """Simple graph on vertices 0..n-1 given by an edge bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= 8:
            raise ValueError("SmallGraph supports at most 8 vertices")
        if self.mask < 0 or self.mask >> (self.n * (self.n - 1) // 2):
            raise ValueError("edge mask out of range")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SmallGraph":
        index = {p: i for i, p in enumerate(pairs(n))}
        mask = 0
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            mask |= 1 << index[(min(u, v), max(u, v))]
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "SmallGraph":
        return cls(n, (1 << (n * (n - 1) // 2)) - 1)

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "SmallGraph":
        return cls.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    @property
    def edges(self):
        return [p for i, p in enumerate(pairs(self.n)) if self.mask >> i & 1]

    @property
    def edge_count(self) -> int:
        return bin(self.mask).count("1")

    def components(self) -> int:
        return _backend.components(self.n, self.mask)

    def is_connected(self) -> bool:
        return self.n > 0 and self.components() == 1

    def is_biconnected(self) -> bool:
        return _backend.biconnected(self.n, self.mask)


def has_k4_minor(g: SmallGraph) -> bool:
    """K4-minor test by series-parallel reduction, confirmed by branch-set search."""
    a = _backend.k4_reduction(g.n, g.mask)
    b = _backend.k4_branch(g.n, g.mask)
    if a != b:
        raise OracleError(f"K4 tests disagree on n={g.n} mask={g.mask}: reduction={a} branch={b}")
    return a


def has_k23_minor(g: SmallGraph) -> bool:
    """K23-minor test by branch-set search.

    On 2-connected inputs the answer is cross-checked: a 2-connected graph
    with a K4 minor but no K23 minor must be K4 itself.
    """
    res = _backend.k23_branch(g.n, g.mask)
    if not res and g.is_biconnected() and has_k4_minor(g):
        if not (g.n == 4 and g.edge_count == 6):
            raise OracleError(f"2-connected K23-free graph with a K4 minor that is not K4: n={g.n} mask={g.mask}")
    return res


def member_mask(flags: np.ndarray, family) -> np.ndarray:
    family = FamilyKind.parse(family)
    k4 = (flags & K4_MINOR) != 0
    k23 = (flags & K23_MINOR) != 0
    if family is FamilyKind.SP:
        return ~k4
    if family is FamilyKind.OUTERPLANAR:
        return ~k4 & ~k23
    return ~k23


def level_mask(flags: np.ndarray, level) -> np.ndarray:
    level = ConnectivityLevel.parse(level)
    if level is ConnectivityLevel.ALL:
        return np.ones(flags.shape, dtype=bool)
    if level is ConnectivityLevel.CONNECTED:
        return (flags & CONNECTED) != 0
    return (flags & BICONNECTED) != 0


@dataclass(frozen=True)
class OracleTable:
    """Brute-force counts for one family, keyed by level then (n, q, k_components)."""

    family: FamilyKind
    n_max: int
    counts: dict = field(default_factory=dict)

    def count_table(self, level, refined: bool = True) -> CountTable:
        level = ConnectivityLevel.parse(level)
        entries: dict = {}
        for (n, q, _k), c in self.counts[level].items():
            key = (n, q) if refined else (n, None)
            entries[key] = entries.get(key, 0) + c
        if not refined:
            for n in range(1, self.n_max + 1):
                entries.setdefault((n, None), 0)
        return CountTable(self.family, level, self.n_max, refined, entries)

    def total(self, level, n: int) -> int:
        level = ConnectivityLevel.parse(level)
        return sum(c for (m, _q, _k), c in self.counts[level].items() if m == n)

    def components(self, n: int) -> dict:
        """{k: number of family members on n vertices with k components}."""
        out: dict = {}
        for (m, _q, k), c in self.counts[ConnectivityLevel.ALL].items():
            if m == n:
                out[k] = out.get(k, 0) + c
        return out

    def to_csv(self, header: list[str] | None = None) -> str:
        buf = io.StringIO()
        for line in header or []:
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "level", "n", "q", "k_components", "count"])
        for level in LEVELS:
            for (n, q, k) in sorted(self.counts.get(level, {})):
                w.writerow([self.family.value, level.value, n, q, k, self.counts[level][(n, q, k)]])
        return buf.getvalue()


@dataclass
class SweepResult:
    n: int
    flags: np.ndarray
    comps: np.ndarray
    problems: list


def sweep(n: int, cross_check: bool = False, kernel=None) -> SweepResult:
    """Classify every edge mask on n vertices."""
    kernel = kernel or _backend
    flags, comps, problems = kernel.classify_range(n, cross_check)
    return SweepResult(n, np.asarray(flags), np.asarray(comps), list(problems))


def _sweep_worker(args):
    n, cross_check, name = args
    return sweep(n, cross_check, backend(name))


def classify_and_count(n_max: int = 7, families=FAMILIES, allow_8: bool = False, threads: int = 1,
                       cross_check: bool = False) -> dict:
    """Exhaustive tallies {family: OracleTable} for 1 <= n <= n_max.

    Raises :class:`OracleError` if any internal cross-check fails.
    """
    if n_max > 8 or (n_max == 8 and not allow_8):
        raise ValueError("n_max above 7 needs allow_8 (and at most 8)")
    families = [FamilyKind.parse(f) for f in families]
    name = BACKEND
    jobs = [(n, cross_check, name) for n in range(1, n_max + 1)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_sweep_worker, jobs))
    else:
        results = [_sweep_worker(j) for j in jobs]

    tables = {f: {lev: {} for lev in LEVELS} for f in families}
    for res in results:
        if res.problems:
            raise OracleError(f"oracle cross-check failed at n={res.n}: {res.problems}")
        n = res.n
        E = n * (n - 1) // 2
        masks = np.arange(1 << E, dtype=np.uint32)
        q = np.bitwise_count(masks).astype(np.int64)
        k = res.comps.astype(np.int64)
        flags = res.flags
        # compositional membership: outerplanar = SP and K23-free
        sp = member_mask(flags, FamilyKind.SP)
        k23 = member_mask(flags, FamilyKind.K23FREE)
        if not np.array_equal(member_mask(flags, FamilyKind.OUTERPLANAR), sp & k23):
            raise OracleError("outerplanar membership is not SP and K23-free")
        width = n + 1
        key = q * width + k
        for fam in families:
            mem = member_mask(flags, fam)
            for lev in LEVELS:
                sel = mem & level_mask(flags, lev)
                tally = np.bincount(key[sel], minlength=(E + 1) * width)
                store = tables[fam][lev]
                for idx in np.nonzero(tally)[0]:
                    store[(n, int(idx) // width, int(idx) % width)] = int(tally[idx])
    return {f: OracleTable(f, n_max, tables[f]) for f in families}


def random_cross_check(n: int, samples: int, seed: int = 0) -> int:
    """Both K4 tests on ``samples`` uniform random graphs; returns the sample count."""
    rng = np.random.default_rng(seed)
    E = n * (n - 1) // 2
    masks = rng.integers(0, 1 << E, size=samples, dtype=np.uint64)
    bad = _backend.cross_check_masks(n, np.ascontiguousarray(masks))
    if bad != -1:
        raise OracleError(f"K4 tests disagree on n={n} mask={bad}")
    return samples

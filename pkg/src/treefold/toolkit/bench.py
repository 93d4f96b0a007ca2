"""Lookup cost comparison: flat path map vs. tree descent vs. path cache.

The flat store holds (path, value) pairs and is scanned front to back, each
candidate compared element by element. Tree descent is ``namei`` with a
linear scan inside each directory. The cache is an LRU map from paths to
indexes in front of tree descent; the image is immutable, so an entry that
was correct when inserted stays correct.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field, fields
from typing import Any, Sequence

import numpy as np

from treefold.alpha import Directory, Ordinary
from treefold.blockdev import DiskImage
from treefold.resolver import DOTS, NOT_FOUND, Failure, contents_or_none, namei
from treefold.toolkit.builder import build_bytes
from treefold.toolkit.manifest import Dir, File, Manifest

Path = tuple[str, ...]
STRATEGIES = ("flat", "tree", "cached")
WORKLOADS = ("uniform", "zipf")


@dataclass
class CostCounters:
    path_comparisons: int = 0
    string_comparisons: int = 0
    directory_fetches: int = 0
    block_reads: int = 0

    def __iadd__(self, other: "CostCounters") -> "CostCounters":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.path_comparisons, self.string_comparisons, self.directory_fetches, self.block_reads)


def flat_pairs(fs: DiskImage, files_only: bool = False) -> list[tuple[Path, int]]:
    """Every defined dot-free path with its index, depth-first in entry order."""
    out = []
    stack: list[tuple[Path, int]] = [((), fs.root)]
    expanded = set()
    while stack:
        path, i = stack.pop()
        c = contents_or_none(fs, i)
        if c is None:
            continue
        if not files_only or isinstance(c, Ordinary):
            out.append((path, i))
        if isinstance(c, Directory) and i not in expanded:
            expanded.add(i)
            kids = [(path + (x,), j) for x, j in c.entries.items() if x not in DOTS]
            stack.extend(reversed(kids))
    return out


def flat_lookup(pairs: Sequence[tuple[Path, Any]], p: Sequence[str], counters: CostCounters):
    p = tuple(p)
    n = len(p)
    pc = sc = 0
    found: Any = NOT_FOUND
    for cand, value in pairs:
        pc += 1
        for a, b in zip(cand, p):
            sc += 1
            if a != b:
                break
        else:
            if len(cand) == n:
                found = value
                break
    counters.path_comparisons += pc
    counters.string_comparisons += sc
    return found


def tree_lookup_instrumented(fs: DiskImage, p: Sequence[str], counters: CostCounters) -> int | Failure:
    before = fs.block_reads
    i: int | Failure = fs.root
    for x in p:
        c = contents_or_none(fs, i)
        if not isinstance(c, Directory):
            i = NOT_FOUND
            break
        counters.directory_fetches += 1
        for name, j in c.entries.items():
            counters.string_comparisons += 1
            if name == x:
                i = j
                break
        else:
            i = NOT_FOUND
            break
    counters.block_reads += fs.block_reads - before
    return i


@dataclass
class PathCache:
    capacity: int | None = 4096
    entries: OrderedDict = field(default_factory=OrderedDict)
    hits: int = 0
    misses: int = 0

    def get(self, p: Path) -> int | None:
        i = self.entries.get(p)
        if i is None:
            self.misses += 1
            return None
        self.hits += 1
        self.entries.move_to_end(p)
        return i

    def put(self, p: Path, i: int) -> None:
        self.entries[p] = i
        self.entries.move_to_end(p)
        if self.capacity is not None and len(self.entries) > self.capacity:
            self.entries.popitem(last=False)

    def audit(self, fs: DiskImage) -> list[tuple[Path, int]]:
        """Entries whose index disagrees with a fresh resolution."""
        return [(p, i) for p, i in self.entries.items() if namei(fs, fs.root, p).result != i]


def cached_lookup(cache: PathCache, fs: DiskImage, p: Sequence[str], counters: CostCounters) -> int | Failure:
    p = tuple(p)
    i = cache.get(p)
    if i is not None:
        return i
    r = tree_lookup_instrumented(fs, p, counters)
    if not isinstance(r, Failure):
        cache.put(p, r)
    return r


def balanced_manifest(n: int, k: int, payload: bool = True) -> Manifest:
    """``n`` files under a k-ary directory tree.

    Directory levels are added until k per leaf directory can hold all the
    files; files then fill leaf directories k at a time, so a shortfall
    leaves the last leaf directories partly filled or empty.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    levels = 0
    while k ** (levels + 1) < n:
        levels += 1
    decls: list = []
    frontier: list[Path] = [()]
    for _ in range(levels):
        nxt = []
        for parent in frontier:
            for c in range(k):
                path = parent + (f"d{c}",)
                decls.append(Dir(path))
                nxt.append(path)
        frontier = nxt
    for t in range(n):
        path = frontier[t // k] + (f"f{t % k}",)
        data = f"file {t}\n".encode() if payload else b""
        decls.append(File(path, data))
    return Manifest(decls)


def balanced_image(n: int, k: int) -> DiskImage:
    return DiskImage(build_bytes(balanced_manifest(n, k)), name=f"balanced-n{n}-k{k}")


def make_queries(
    keys: Sequence[Path], count: int, workload: str, rng: np.random.Generator, zipf_s: float = 1.1
) -> list[Path]:
    if workload == "uniform":
        picks = rng.integers(0, len(keys), size=count)
    elif workload == "zipf":
        ranks = np.arange(1, len(keys) + 1, dtype=float)
        weights = ranks ** -zipf_s
        order = rng.permutation(len(keys))
        picks = order[rng.choice(len(keys), size=count, p=weights / weights.sum())]
    else:
        raise ValueError(f"unknown workload {workload!r}")
    return [keys[int(t)] for t in picks]


@dataclass(frozen=True)
class BenchConfig:
    n: int = 1000
    k: int = 10
    queries: int = 10_000
    workload: str = "uniform"
    zipf_s: float = 1.1
    seed: int = 0
    cache_capacity: int | None = 4096
    strategies: tuple[str, ...] = STRATEGIES

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.queries < 1:
            raise ValueError("queries must be at least 1")
        if self.workload not in WORKLOADS:
            raise ValueError(f"workload must be one of {WORKLOADS}")
        if self.cache_capacity is not None and self.cache_capacity < 1:
            raise ValueError("cache capacity must be positive")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies {sorted(unknown)}")


@dataclass
class BenchResult:
    config: BenchConfig
    counters: dict[str, CostCounters]
    answers: dict[str, list]
    cache: PathCache | None = None

    def mean(self, strategy: str, counter: str) -> float:
        return getattr(self.counters[strategy], counter) / self.config.queries

    def table(self) -> str:
        rows = ["strategy path_cmp string_cmp dir_fetch block_read"]
        for name, c in self.counters.items():
            rows.append(" ".join([name, *map(str, c.as_tuple())]))
        return "\n".join(rows) + "\n"


def bench_report(config: BenchConfig, fs: DiskImage | None = None) -> BenchResult:
    """Run every configured strategy over one query stream of file paths."""
    config.validate()
    if fs is None:
        fs = balanced_image(config.n, config.k)
    files = flat_pairs(fs, files_only=True)
    rng = np.random.default_rng(config.seed)
    queries = make_queries([p for p, _ in files], config.queries, config.workload, rng, config.zipf_s)
    counters: dict[str, CostCounters] = {}
    answers: dict[str, list] = {}
    cache = None
    for name in config.strategies:
        c = counters[name] = CostCounters()
        if name == "flat":
            answers[name] = [flat_lookup(files, q, c) for q in queries]
        elif name == "tree":
            answers[name] = [tree_lookup_instrumented(fs, q, c) for q in queries]
        else:
            cache = PathCache(config.cache_capacity)
            answers[name] = [cached_lookup(cache, fs, q, c) for q in queries]
    return BenchResult(config, counters, answers, cache)

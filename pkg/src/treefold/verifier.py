"""fsck-style consistency checks over a whole image.

Every check returns a :class:`CheckResult` whose witnesses can be replayed
through the resolver. The graph checks ignore "." and ".." entries and treat
soft links as leaves; only ``check_softlink_loops`` reads link targets, and
it only warns.
"""

from __future__ import annotations

import shlex
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from treefold.alpha import AlphaError, Contents, Directory, SoftLink, alpha
from treefold.blockdev import DiskError, DiskImage
from treefold.codec import CodecError, FileType
from treefold.resolver import (
    DEFAULT_LINK_BUDGET,
    DOTS,
    LINK_BUDGET_EXHAUSTED,
    Failure,
    contents_or_none,
    namei,
    namei_links,
)

Path = tuple[str, ...]
Resolver = Callable[[DiskImage, Path], "int | Failure"]


def fmt_path(p: Path) -> str:
    return shlex.quote("/" + "/".join(p))


@dataclass
class CheckResult:
    name: str
    witnesses: list[Any] = field(default_factory=list)
    hard: bool = True

    @property
    def ok(self) -> bool:
        return not self.witnesses

    def line(self) -> str:
        if self.ok:
            return f"CHECK {self.name} PASS"
        status = "FAIL" if self.hard else "WARN"
        return f"CHECK {self.name} {status} " + " ".join(_fmt(w) for w in self.witnesses)


def _fmt(w: Any) -> str:
    if hasattr(w, "text"):
        return w.text()
    return str(w)


@dataclass(frozen=True)
class Undecodable:
    index: int
    error: str

    def text(self) -> str:
        return f"{self.index}:{self.error}"


@dataclass(frozen=True)
class DanglingEntry:
    directory: int
    name: str
    target: int

    def text(self) -> str:
        return f"{self.directory}:{shlex.quote(self.name)}->{self.target}"


@dataclass(frozen=True)
class DotViolation:
    law: str  # "self", "parent" or "root-parent"
    path: Path
    expected: int
    found: int | None

    def text(self) -> str:
        return f"{self.law}@{fmt_path(self.path)}:expected={self.expected},found={self.found}"


@dataclass(frozen=True)
class AliasPair:
    first: Path
    second: Path
    index: int

    def text(self) -> str:
        return f"{fmt_path(self.first)}={fmt_path(self.second)}->{self.index}"


@dataclass(frozen=True)
class LinkViolation:
    index: int
    parents: tuple[int, ...]

    def text(self) -> str:
        return f"{self.index}<-" + ",".join(map(str, self.parents))


@dataclass(frozen=True)
class PrefixViolation:
    path: Path
    reason: str

    def text(self) -> str:
        return f"{fmt_path(self.path)}:{self.reason}"


@dataclass(frozen=True)
class LinkLoop:
    index: int
    target: Path

    def text(self) -> str:
        return f"{self.index}->{fmt_path(self.target)}"


@dataclass
class LinksMatrixSummary:
    in_degree: dict[int, int]
    root_in_degree_sources: set[int]
    parents: dict[int, set[int]]

    @property
    def total(self) -> int:
        return sum(self.in_degree.values())


class Snapshot:
    """Every inode of an image decoded once; corrupt ones kept apart."""

    def __init__(self, fs: DiskImage):
        self.fs = fs
        self.root = fs.root
        self.contents: dict[int, Contents] = {}
        self.errors: dict[int, Exception] = {}
        for i in range(fs.inode_count):
            try:
                c = alpha(fs, i)
            except (AlphaError, CodecError, DiskError) as exc:
                self.errors[i] = exc
            else:
                if c is not None:
                    self.contents[i] = c

    def defined(self, i: int) -> bool:
        return i in self.contents or i in self.errors

    def directory(self, i: int) -> Directory | None:
        c = self.contents.get(i)
        return c if isinstance(c, Directory) else None

    def directories(self) -> Iterator[tuple[int, Directory]]:
        for i, c in self.contents.items():
            if isinstance(c, Directory):
                yield i, c

    def walk(self) -> Iterator[tuple[Path, int, Path | None]]:
        """BFS over dot-free entries from the root.

        Yields ``(path, index, first_path)`` for every edge into a defined
        index; ``first_path`` is None on the first arrival and the earlier
        path on a revisit. Only first arrivals at directories are expanded.
        """
        first: dict[int, Path] = {self.root: ()}
        yield (), self.root, None
        queue = deque([((), self.root)])
        while queue:
            path, i = queue.popleft()
            d = self.directory(i)
            if d is None:
                continue
            for x, j in d.entries.items():
                if x in DOTS or not self.defined(j):
                    continue
                q = path + (x,)
                if j in first:
                    yield q, j, first[j]
                    continue
                first[j] = q
                yield q, j, None
                queue.append((q, j))


def _snap(fs: DiskImage | Snapshot) -> Snapshot:
    return fs if isinstance(fs, Snapshot) else Snapshot(fs)


def check_decodable(fs) -> CheckResult:
    s = _snap(fs)
    return CheckResult(
        "decodable",
        [Undecodable(i, type(e).__name__) for i, e in sorted(s.errors.items())],
    )


def check_no_orphans(fs) -> CheckResult:
    s = _snap(fs)
    reached = {i for _, i, _ in s.walk()}
    everything = set(s.contents) | set(s.errors)
    return CheckResult("no_orphans", sorted(everything - reached))


def check_no_dangling(fs) -> CheckResult:
    s = _snap(fs)
    bad = []
    for i, d in sorted(s.directories()):
        for x, j in d.entries.items():
            if not s.defined(j):
                bad.append(DanglingEntry(i, x, j))
    return CheckResult("no_dangling", bad)


def check_dot_laws(fs) -> CheckResult:
    s = _snap(fs)
    bad = []
    root_dir = s.directory(s.root)
    if root_dir is not None and root_dir("..") != s.root:
        bad.append(DotViolation("root-parent", (), s.root, root_dir("..")))
    index_of: dict[Path, int] = {}
    for path, i, seen in s.walk():
        d = s.directory(i)
        if d is None:
            continue
        if path:
            parent = index_of[path[:-1]]
            if d("..") != parent:
                bad.append(DotViolation("parent", path, parent, d("..")))
        if seen is None:
            index_of[path] = i
            if d(".") != i:
                bad.append(DotViolation("self", path, i, d(".")))
    return CheckResult("dot_laws", bad)


def check_alias_free(fs) -> CheckResult:
    s = _snap(fs)
    pairs = [AliasPair(seen, path, i) for path, i, seen in s.walk() if seen is not None]
    return CheckResult("alias_free", pairs)


def links_summary(fs) -> LinksMatrixSummary:
    """Distinct-parent in-degree of every directory over dot-free entries."""
    s = _snap(fs)
    parents: dict[int, set[int]] = {i: set() for i, _ in s.directories()}
    for j, d in s.directories():
        for x, i in d.entries.items():
            if x not in DOTS and i in parents:
                parents[i].add(j)
    return LinksMatrixSummary(
        in_degree={i: len(ps) for i, ps in parents.items()},
        root_in_degree_sources=set(parents.get(s.root, set())),
        parents=parents,
    )


def check_link_constraint(fs) -> CheckResult:
    s = _snap(fs)
    summary = links_summary(s)
    bad = []
    for i, ps in sorted(summary.parents.items()):
        if i == s.root:
            offenders = ps - {s.root}
        elif len(ps) >= 2:
            offenders = ps
        else:
            continue
        if offenders:
            bad.append(LinkViolation(i, tuple(sorted(offenders))))
    return CheckResult("link_constraint", bad)


def _namei_root(fs: DiskImage, p: Path) -> int | Failure:
    return namei(fs, fs.root, p).result


def check_prefix_property(fs, resolver: Resolver = _namei_root) -> CheckResult:
    """Every enumerated path must resolve to its index and its parent path to
    a directory. Checking the immediate parent of every path covers all
    proper prefixes, since each prefix is itself enumerated."""
    s = _snap(fs)
    bad = []
    for path, i, seen in s.walk():
        got = resolver(s.fs, path)
        if got != i:
            bad.append(PrefixViolation(path, f"resolves to {got}, enumerated {i}"))
            continue
        if path:
            parent = resolver(s.fs, path[:-1])
            c = None if isinstance(parent, Failure) else contents_or_none(s.fs, parent)
            if not isinstance(c, Directory):
                bad.append(PrefixViolation(path, "prefix is not a directory"))
    return CheckResult("prefix_property", bad)


def follow_link(fs: DiskImage, i: int, budget: int) -> int | Failure:
    """Resolve soft link ``i`` until a non-link is reached, spending one unit
    of ``budget`` per link, including ``i`` itself."""
    remaining = budget
    c = contents_or_none(fs, i)
    while isinstance(c, SoftLink):
        if remaining == 0:
            return LINK_BUDGET_EXHAUSTED
        r = namei_links(fs, fs.root, c.path, remaining - 1)
        if not r.ok:
            return r.result
        remaining -= 1 + r.links_followed
        i = r.result
        c = contents_or_none(fs, i)
    return i


def check_softlink_loops(fs, budget: int = DEFAULT_LINK_BUDGET) -> CheckResult:
    s = _snap(fs)
    loops = [
        LinkLoop(i, c.path)
        for i, c in sorted(s.contents.items())
        if isinstance(c, SoftLink) and follow_link(s.fs, i, budget) is LINK_BUDGET_EXHAUSTED
    ]
    return CheckResult("softlink_loops", loops, hard=False)


@dataclass
class CheckReport:
    results: list[CheckResult]
    stats: dict[str, int]

    @property
    def clean(self) -> bool:
        return all(r.ok for r in self.results if r.hard)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self) -> set[str]:
        return {r.name for r in self.results if r.hard and not r.ok}

    def to_text(self) -> str:
        lines = [r.line() for r in self.results]
        lines += [f"STATS {k}={v}" for k, v in self.stats.items()]
        return "\n".join(lines) + "\n"


def _stats(s: Snapshot) -> dict[str, int]:
    by_type = {t: 0 for t in FileType}
    for c in s.contents.values():
        by_type[c.ftype] += 1
    depth = max((len(p) for p, _, seen in s.walk() if seen is None), default=0)
    return {
        "inodes": s.fs.inode_count,
        "ordinary": by_type[FileType.ORDINARY],
        "directory": by_type[FileType.DIRECTORY],
        "softlink": by_type[FileType.SOFTLINK],
        "undefined": s.fs.inode_count - len(s.contents) - len(s.errors),
        "corrupt": len(s.errors),
        "max_depth": depth,
        "links_total": links_summary(s).total,
    }


def fsck(fs: DiskImage, budget: int = DEFAULT_LINK_BUDGET) -> CheckReport:
    s = Snapshot(fs)
    results = [
        check_decodable(s),
        check_no_orphans(s),
        check_no_dangling(s),
        check_dot_laws(s),
        check_alias_free(s),
        check_link_constraint(s),
        check_prefix_property(s),
        check_softlink_loops(s, budget),
    ]
    return CheckReport(results, _stats(s))

"""Path resolution over the index layer.

``namei`` consumes one path element per step starting from an index and
never follows soft links. ``namei_links`` splices a soft link's stored path
in front of the unconsumed elements and restarts from the root, spending one
unit of a link budget each time. ``find`` walks a subtree and may follow
soft links under the same kind of budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from treefold.alpha import Contents, Directory, IndexOutOfRange, SoftLink, alpha, file_type
from treefold.blockdev import DiskImage
from treefold.codec import FileType

DEFAULT_LINK_BUDGET = 40
DOTS = frozenset((".", ".."))


class Failure(enum.Enum):
    NOT_FOUND = "NotFound"
    LINK_BUDGET_EXHAUSTED = "LinkBudgetExhausted"

    def __str__(self) -> str:
        return self.value


NOT_FOUND = Failure.NOT_FOUND
LINK_BUDGET_EXHAUSTED = Failure.LINK_BUDGET_EXHAUSTED


class ListMode(enum.Enum):
    DIRS_ONLY = "dirs_only"  # only directory-valued entries
    ALL = "all"


@dataclass(frozen=True)
class ResolveOutcome:
    result: int | Failure
    steps: int
    links_followed: int = 0

    @property
    def ok(self) -> bool:
        return not isinstance(self.result, Failure)


def contents_or_none(fs: DiskImage, i: int) -> Contents | None:
    """alpha(i), with an out-of-range index treated as undefined."""
    try:
        return alpha(fs, i)
    except IndexOutOfRange:
        return None


def namei(fs: DiskImage, i: int, p: Sequence[str]) -> ResolveOutcome:
    steps = 1
    for x in p:
        c = contents_or_none(fs, i)
        if not isinstance(c, Directory) or x not in c.entries:
            return ResolveOutcome(NOT_FOUND, steps)
        i = c.entries[x]
        steps += 1
    return ResolveOutcome(i, steps)


def namei_links(fs: DiskImage, i: int, p: Sequence[str], budget: int) -> ResolveOutcome:
    if budget < 0:
        raise ValueError(f"negative link budget {budget}")
    path, pos = tuple(p), 0
    steps, links = 1, 0
    while pos < len(path):
        c = contents_or_none(fs, i)
        if isinstance(c, Directory):
            x = path[pos]
            if x not in c.entries:
                return ResolveOutcome(NOT_FOUND, steps, links)
            i = c.entries[x]
            pos += 1
        elif isinstance(c, SoftLink):
            if budget == 0:
                return ResolveOutcome(LINK_BUDGET_EXHAUSTED, steps, links)
            budget -= 1
            links += 1
            path, pos = c.path + path[pos:], 0
            i = fs.root
        else:
            return ResolveOutcome(NOT_FOUND, steps, links)
        steps += 1
    return ResolveOutcome(i, steps, links)


def beta(fs: DiskImage, p: Sequence[str], budget: int = DEFAULT_LINK_BUDGET) -> int | Failure:
    return namei_links(fs, fs.root, p, budget).result


def f_lookup(
    fs: DiskImage, p: Sequence[str], budget: int = DEFAULT_LINK_BUDGET
) -> Contents | None | Failure:
    """Contents named by ``p``: None when undefined, LINK_BUDGET_EXHAUSTED
    passed through unchanged."""
    i = beta(fs, p, budget)
    if i is LINK_BUDGET_EXHAUSTED:
        return i
    if i is NOT_FOUND:
        return None
    return contents_or_none(fs, i)


def _names(fs: DiskImage, d: Directory, mode: ListMode) -> list[str]:
    names = [x for x in d.entries if x not in DOTS]
    if mode is ListMode.DIRS_ONLY:
        names = [x for x in names if file_type(fs, d.entries[x]) is FileType.DIRECTORY]
    return names


def list_entries(
    fs: DiskImage,
    p: Sequence[str],
    mode: ListMode = ListMode.ALL,
    budget: int = DEFAULT_LINK_BUDGET,
) -> set[str]:
    c = f_lookup(fs, p, budget)
    if not isinstance(c, Directory):
        return set()
    return set(_names(fs, c, mode))


@dataclass
class FindResult:
    paths: set[tuple[str, ...]] = field(default_factory=set)
    exhausted: bool = False  # some soft link was pruned for lack of budget
    depth_limited: bool = False  # a link-free run grew past inode_count

    def __iter__(self):
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)


def find(
    fs: DiskImage,
    p: Sequence[str] = (),
    mode: ListMode = ListMode.ALL,
    link_budget: int = DEFAULT_LINK_BUDGET,
) -> FindResult:
    """All paths under ``p`` (``p`` included) that name something.

    A soft link met during the walk is replaced by its target when budget
    remains; otherwise its subtree is pruned and ``exhausted`` is set. Runs
    of more than ``inode_count`` elements without a soft link imply an alias
    loop and are cut off with ``depth_limited`` set.
    """
    out = FindResult()
    start = namei_links(fs, fs.root, p, link_budget)
    if start.result is LINK_BUDGET_EXHAUSTED:
        out.exhausted = True
        return out
    if start.result is NOT_FOUND:
        return out
    limit = fs.inode_count
    stack = [(tuple(p), start.result, link_budget - start.links_followed, 0)]
    while stack:
        path, i, budget, depth = stack.pop()
        c = contents_or_none(fs, i)
        if c is None:
            continue
        out.paths.add(path)
        while isinstance(c, SoftLink):
            if budget == 0:
                out.exhausted = True
                break
            r = namei_links(fs, fs.root, c.path, budget - 1)
            if r.result is LINK_BUDGET_EXHAUSTED:
                out.exhausted = True
                break
            if r.result is NOT_FOUND:
                break
            budget -= 1 + r.links_followed
            depth = 0
            c = contents_or_none(fs, r.result)
        if not isinstance(c, Directory):
            continue
        names = _names(fs, c, mode)
        if names and depth >= limit:
            out.depth_limited = True
            continue
        for x in names:
            stack.append((path + (x,), c.entries[x], budget, depth + 1))
    return out

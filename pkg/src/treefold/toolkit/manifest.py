"""Line-oriented manifest describing the tree an image should hold.

    dir  /etc
    file /etc/passwords inline:736563726574
    file /etc/motd @motd.txt
    link /pw etc/passwords

Tokens are split shell-style, so names with spaces can be quoted and ``#``
starts a comment. Parents must be declared before their children.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from treefold import codec
from treefold.resolver import DOTS


class ManifestError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class ParseError(ManifestError):
    pass


class OrphanDeclaration(ManifestError):
    pass


class DuplicatePath(ManifestError):
    pass


@dataclass(frozen=True)
class Dir:
    path: tuple[str, ...]


@dataclass(frozen=True)
class File:
    path: tuple[str, ...]
    data: bytes


@dataclass(frozen=True)
class Link:
    path: tuple[str, ...]
    target: tuple[str, ...]


Declaration = Union[Dir, File, Link]


@dataclass
class Manifest:
    decls: list[Declaration] = field(default_factory=list)
    _kinds: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        decls, self.decls = self.decls, []
        self._kinds = {(): Dir}
        for n, d in enumerate(decls, 1):
            self.add(d, n)

    def __iter__(self):
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)

    def add(self, d: Declaration, lineno: int = 0) -> None:
        if d.path in self._kinds:
            raise DuplicatePath(lineno, f"/{'/'.join(d.path)} declared twice")
        if self._kinds.get(d.path[:-1]) is not Dir:
            raise OrphanDeclaration(lineno, f"parent of /{'/'.join(d.path)} is not a declared directory")
        self._kinds[d.path] = type(d)
        self.decls.append(d)

    def to_text(self) -> str:
        lines = []
        for d in self.decls:
            path = shlex.quote("/" + "/".join(d.path))
            if isinstance(d, Dir):
                lines.append(f"dir {path}")
            elif isinstance(d, File):
                lines.append(f"file {path} inline:{d.data.hex()}")
            else:
                lines.append(f"link {path} {shlex.quote('/' + '/'.join(d.target))}")
        return "".join(line + "\n" for line in lines)


def split_path(text: str, *, allow_dots: bool = True) -> tuple[str, ...]:
    """Split "/"-separated text into elements; a leading "/" is optional and
    "" or "/" is the null path."""
    body = text[1:] if text.startswith("/") else text
    if not body:
        return ()
    parts = tuple(body.split("/"))
    for x in parts:
        codec.check_name(x)
        if not allow_dots and x in DOTS:
            raise codec.CodecError(f"'{x}' is not allowed here")
    return parts


def _abs_path(token: str, lineno: int) -> tuple[str, ...]:
    if not token.startswith("/"):
        raise ParseError(lineno, f"path {token!r} is not absolute")
    try:
        path = split_path(token, allow_dots=False)
    except codec.CodecError as exc:
        raise ParseError(lineno, str(exc)) from exc
    if not path:
        raise DuplicatePath(lineno, "the root directory is implicit")
    return path


def _payload(source: str, lineno: int, base_dir: Path) -> bytes:
    if source.startswith("inline:"):
        try:
            return bytes.fromhex(source[len("inline:"):])
        except ValueError as exc:
            raise ParseError(lineno, f"bad hex payload: {exc}") from exc
    if source.startswith("@"):
        host = base_dir / source[1:]
        try:
            return host.read_bytes()
        except OSError as exc:
            raise ParseError(lineno, f"cannot read {host}: {exc}") from exc
    raise ParseError(lineno, f"payload source {source!r} is neither inline:<hex> nor @<file>")


def parse_manifest(text: str, base_dir: str | Path | None = None) -> Manifest:
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    m = Manifest()
    for lineno, line in enumerate(text.splitlines(), 1):
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from exc
        if not tokens:
            continue
        kind, args = tokens[0], tokens[1:]
        if kind == "dir" and len(args) == 1:
            d: Declaration = Dir(_abs_path(args[0], lineno))
        elif kind == "file" and len(args) == 2:
            d = File(_abs_path(args[0], lineno), _payload(args[1], lineno, base))
        elif kind == "link" and len(args) == 2:
            try:
                target = split_path(args[1])
            except codec.CodecError as exc:
                raise ParseError(lineno, f"bad link target: {exc}") from exc
            d = Link(_abs_path(args[0], lineno), target)
        else:
            raise ParseError(lineno, f"cannot parse {line.strip()!r}")
        m.add(d, lineno)
    return m


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), base_dir=path.parent)

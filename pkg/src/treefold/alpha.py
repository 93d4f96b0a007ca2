"""The index layer: inode number -> decoded contents.

``alpha1`` locates an inode block, ``file_contents`` gathers and truncates
the data blocks it lists, and ``alpha`` decodes the result by file type.
Decode failures raise; an unused inode slot yields ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from treefold import codec
from treefold.blockdev import DiskError, DiskImage
from treefold.codec import FileType, InodeRecord


class AlphaError(Exception):
    pass


class IndexOutOfRange(AlphaError):
    pass


class DanglingBlockRef(AlphaError):
    pass


class ShortBlockList(AlphaError):
    pass


@dataclass(frozen=True)
class Ordinary:
    data: bytes

    ftype = FileType.ORDINARY


@dataclass(frozen=True)
class Directory:
    entries: dict[str, int] = field(default_factory=dict)

    ftype = FileType.DIRECTORY

    def __call__(self, name: str) -> int | None:
        return self.entries.get(name)


@dataclass(frozen=True)
class SoftLink:
    path: tuple[str, ...]

    ftype = FileType.SOFTLINK


Contents = Union[Ordinary, Directory, SoftLink]


def alpha1(fs: DiskImage, i: int) -> int:
    if not 0 <= i < fs.inode_count:
        raise IndexOutOfRange(f"index {i} outside [0, {fs.inode_count})")
    return fs.geometry.inode_table_start + i


def inode(fs: DiskImage, i: int, strict: bool = False) -> InodeRecord | None:
    return codec.decode_inode(fs.read_block(alpha1(fs, i)), strict=strict)


def block_list(fs: DiskImage, r: InodeRecord) -> list[int]:
    """The ``ceil(size/512)`` data block numbers of ``r``, direct ones first."""
    need = r.nblocks
    numbers = list(r.direct)
    if need > codec.N_DIRECT:
        if r.indirect == 0:
            raise ShortBlockList(f"{need} blocks needed, no indirect block")
        numbers += _data_block(fs, r.indirect, "indirect", codec.decode_indirect)[: need - codec.N_DIRECT]
    if 0 in numbers:
        first_zero = numbers.index(0)
        if any(numbers[first_zero:]):
            raise DanglingBlockRef(f"null block reference at position {first_zero}")
        raise ShortBlockList(f"{need} blocks needed, {first_zero} referenced")
    return numbers


def _data_block(fs: DiskImage, b: int, what: str, decode=bytes):
    try:
        return decode(fs.read_data_block(b))
    except DiskError as exc:
        raise DanglingBlockRef(f"{what} block {b}: {exc}") from exc


def file_contents(fs: DiskImage, r: InodeRecord) -> bytes:
    blocks = [_data_block(fs, b, "data") for b in block_list(fs, r)]
    return b"".join(blocks)[: r.size]


def alpha(fs: DiskImage, i: int) -> Contents | None:
    r = inode(fs, i)
    if r is None:
        return None
    data = file_contents(fs, r)
    if r.ftype is FileType.ORDINARY:
        return Ordinary(data)
    if r.ftype is FileType.DIRECTORY:
        return Directory(codec.decode_directory(data))
    return SoftLink(codec.decode_softlink(data))


def file_type(fs: DiskImage, i: int) -> FileType | None:
    """Type of inode ``i`` from its inode block alone; ``None`` if undefined,
    out of range or unreadable."""
    try:
        r = inode(fs, i)
    except (AlphaError, codec.CodecError):
        return None
    return None if r is None else r.ftype


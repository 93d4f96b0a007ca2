"""Byte layouts for inode blocks, indirect blocks, directories and soft links.

Inode block (512 bytes)::

    0        type tag: 0 undefined, 1 ordinary, 2 directory, 3 soft link
    1..8     zero
    8..16    size, u64 BE
    16..496  120 direct block numbers, u32 BE, unused slots 0
    496..500 indirect block number, u32 BE, 0 = none
    500..512 zero

A directory is a run of entries ``name-bytes 00 00 index(u32 BE)``; a soft
link stores its target as "/"-joined UTF-8 text.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from typing import Mapping, Sequence

from treefold.blockdev import BLOCK_SIZE

N_DIRECT = 120
N_INDIRECT = BLOCK_SIZE // 4
MAX_FILE_SIZE = (N_DIRECT + N_INDIRECT) * BLOCK_SIZE  # 126,976
MAX_INDEX = 0xFFFFFFFF

INODE = struct.Struct(f">B7xQ{N_DIRECT}II12x")
INDIRECT = struct.Struct(f">{N_INDIRECT}I")
INDEX = struct.Struct(">I")
assert INODE.size == BLOCK_SIZE and INDIRECT.size == BLOCK_SIZE

PathName = tuple[str, ...]  # () is the null path


class CodecError(ValueError):
    pass


class BadTypeTag(CodecError):
    pass


class SizeOverflow(CodecError):
    pass


class NonZeroPadding(CodecError):
    pass


class TooManyDirect(CodecError):
    pass


class BlockCountMismatch(CodecError):
    pass


class TrailingGarbage(CodecError):
    pass


class EmptyName(CodecError):
    pass


class DuplicateName(CodecError):
    pass


class BadUtf8(CodecError):
    pass


class NameContainsZeroByte(CodecError):
    pass


class NameContainsSlash(CodecError):
    pass


class IndexOverflow(CodecError):
    pass


class EmptyElement(CodecError):
    pass


class FileType(enum.IntEnum):
    ORDINARY = 1
    DIRECTORY = 2
    SOFTLINK = 3


def blocks_for(size: int) -> int:
    return -(-size // BLOCK_SIZE)


@dataclass(frozen=True)
class InodeRecord:
    ftype: FileType
    size: int
    direct: tuple[int, ...] = ()
    indirect: int = 0

    @property
    def nblocks(self) -> int:
        return blocks_for(self.size)


def check_name(name: str) -> bytes:
    """Validate a directory entry name and return its encoded bytes."""
    if not name:
        raise EmptyName("empty name")
    if "/" in name:
        raise NameContainsSlash(f"name {name!r} contains '/'")
    if "\x00" in name:
        raise NameContainsZeroByte(f"name {name!r} contains a zero byte")
    try:
        return name.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise BadUtf8(f"name {name!r} is not UTF-8 encodable") from exc


def decode_inode(b: bytes, strict: bool = False) -> InodeRecord | None:
    """Parse an inode block; ``None`` when the slot is undefined (tag 0)."""
    if len(b) != BLOCK_SIZE:
        raise CodecError(f"inode block is {len(b)} bytes")
    tag = b[0]
    if tag == 0:
        return None
    if tag not in (1, 2, 3):
        raise BadTypeTag(f"type tag {tag}")
    if strict and (any(b[1:8]) or any(b[500:512])):
        raise NonZeroPadding("reserved inode bytes are not zero")
    fields = INODE.unpack(b)
    size = fields[1]
    if size > MAX_FILE_SIZE:
        raise SizeOverflow(f"size {size} exceeds {MAX_FILE_SIZE}")
    n = min(blocks_for(size), N_DIRECT)
    return InodeRecord(FileType(tag), size, tuple(fields[2:2 + n]), fields[2 + N_DIRECT])


def encode_inode(r: InodeRecord) -> bytes:
    if len(r.direct) > N_DIRECT:
        raise TooManyDirect(f"{len(r.direct)} direct blocks, at most {N_DIRECT}")
    if not 0 <= r.size <= MAX_FILE_SIZE:
        raise SizeOverflow(f"size {r.size} exceeds {MAX_FILE_SIZE}")
    need = r.nblocks
    if len(r.direct) != min(need, N_DIRECT) or (need > N_DIRECT) != (r.indirect != 0):
        raise BlockCountMismatch(
            f"size {r.size} needs {need} blocks; got {len(r.direct)} direct, indirect={r.indirect}"
        )
    slots = list(r.direct) + [0] * (N_DIRECT - len(r.direct))
    return INODE.pack(int(r.ftype), r.size, *slots, r.indirect)


def decode_indirect(b: bytes) -> tuple[int, ...]:
    return INDIRECT.unpack(b)


def encode_indirect(numbers: Sequence[int]) -> bytes:
    if len(numbers) > N_INDIRECT:
        raise TooManyDirect(f"{len(numbers)} numbers do not fit one indirect block")
    return INDIRECT.pack(*numbers, *([0] * (N_INDIRECT - len(numbers))))


def decode_directory(data: bytes) -> dict[str, int]:
    """Decode directory contents; entry order on disk is preserved."""
    entries: dict[str, int] = {}
    pos, end = 0, len(data)
    while pos < end:
        nul = data.find(b"\x00", pos)
        if nul < 0:
            raise TrailingGarbage(f"unterminated name at offset {pos}")
        if nul == pos:
            raise EmptyName(f"empty name at offset {pos}")
        if nul + 6 > end:
            raise TrailingGarbage(f"incomplete entry at offset {pos}")
        if data[nul + 1] != 0:
            raise TrailingGarbage(f"bad terminator at offset {nul}")
        try:
            name = data[pos:nul].decode("utf-8")
        except UnicodeDecodeError as exc:
            raise BadUtf8(f"name at offset {pos}") from exc
        if "/" in name:
            raise NameContainsSlash(f"name {name!r} at offset {pos}")
        if name in entries:
            raise DuplicateName(name)
        entries[name] = INDEX.unpack_from(data, nul + 2)[0]
        pos = nul + 6
    return entries


def encode_directory(d: Mapping[str, int]) -> bytes:
    encoded = []
    for name, index in d.items():
        if not 0 <= index <= MAX_INDEX:
            raise IndexOverflow(f"index {index} for {name!r}")
        encoded.append((check_name(name), index))
    encoded.sort()
    return b"".join(raw + b"\x00\x00" + INDEX.pack(index) for raw, index in encoded)


def decode_softlink(data: bytes) -> tuple[str, ...]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadUtf8("soft link target") from exc
    if not text:
        return ()
    parts = tuple(text.split("/"))
    if not all(parts):
        raise EmptyElement(f"empty element in {text!r}")
    return parts


def encode_softlink(path: Sequence[str]) -> bytes:
    for element in path:
        check_name(element)
    return "/".join(path).encode("utf-8")

"""Simulated disk: a flat array of 512-byte blocks stored in one image file.

Block 0 is the superblock::

    0..8     magic "TREEFLD1"
    8..12    block_size   u32 BE, always 512
    12..20   block_count  u64 BE
    20..28   inode_count  u64 BE
    28..36   root_index   u64 BE
    36..40   inode_table_start u32 BE
    40..512  zero
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

BLOCK_SIZE = 512
MAGIC = b"TREEFLD1"
MAX_BLOCK_NUMBER = 0xFFFFFFFF

SUPERBLOCK = struct.Struct(">8sIQQQI")
assert SUPERBLOCK.size == 40


class DiskError(Exception):
    pass


class BadMagic(DiskError):
    pass


class GeometryInvalid(DiskError):
    pass


class TruncatedImage(DiskError):
    pass


class OutOfRange(DiskError):
    pass


class NullBlock(DiskError):
    pass


@dataclass(frozen=True)
class Geometry:
    block_count: int
    inode_count: int
    root_index: int = 0
    inode_table_start: int = 1
    block_size: int = BLOCK_SIZE

    def validate(self) -> None:
        if self.block_size != BLOCK_SIZE:
            raise GeometryInvalid(f"block size {self.block_size}, expected {BLOCK_SIZE}")
        if not 1 <= self.inode_table_start <= MAX_BLOCK_NUMBER:
            raise GeometryInvalid(f"inode table start {self.inode_table_start} out of range")
        if self.inode_table_start + self.inode_count > self.block_count:
            raise GeometryInvalid(
                f"inode table [{self.inode_table_start}, "
                f"{self.inode_table_start + self.inode_count}) exceeds {self.block_count} blocks"
            )
        if not 0 <= self.root_index < self.inode_count:
            raise GeometryInvalid(f"root index {self.root_index} not below inode count {self.inode_count}")

    def pack(self) -> bytes:
        head = SUPERBLOCK.pack(
            MAGIC,
            self.block_size,
            self.block_count,
            self.inode_count,
            self.root_index,
            self.inode_table_start,
        )
        return head.ljust(BLOCK_SIZE, b"\x00")

    @classmethod
    def unpack(cls, block: bytes) -> "Geometry":
        if len(block) < BLOCK_SIZE:
            raise TruncatedImage(f"superblock is {len(block)} bytes")
        magic, bsize, bcount, icount, root, itable = SUPERBLOCK.unpack_from(block)
        if magic != MAGIC:
            raise BadMagic(f"bad magic {magic!r}")
        if any(block[SUPERBLOCK.size:BLOCK_SIZE]):
            raise GeometryInvalid("reserved superblock bytes are not zero")
        geo = cls(
            block_count=bcount,
            inode_count=icount,
            root_index=root,
            inode_table_start=itable,
            block_size=bsize,
        )
        geo.validate()
        return geo


class DiskImage:
    """Read-only view of an image: the map from block numbers to blocks.

    ``block_reads`` counts calls to :meth:`read_block` and exists only for
    instrumentation; it is the one piece of mutable state.
    """

    def __init__(self, data: bytes, name: str = "<memory>"):
        if len(data) % BLOCK_SIZE:
            raise TruncatedImage(f"{name}: length {len(data)} is not a multiple of {BLOCK_SIZE}")
        if len(data) < BLOCK_SIZE:
            raise TruncatedImage(f"{name}: no superblock")
        self.geometry = Geometry.unpack(data[:BLOCK_SIZE])
        if len(data) < self.geometry.block_count * BLOCK_SIZE:
            raise TruncatedImage(
                f"{name}: {len(data) // BLOCK_SIZE} blocks present, "
                f"superblock claims {self.geometry.block_count}"
            )
        self._data = bytes(data)
        self.name = name
        self.block_reads = 0

    @classmethod
    def from_bytes(cls, data: bytes) -> "DiskImage":
        return cls(data)

    @property
    def block_count(self) -> int:
        return self.geometry.block_count

    @property
    def inode_count(self) -> int:
        return self.geometry.inode_count

    @property
    def root(self) -> int:
        return self.geometry.root_index

    def read_block(self, b: int) -> bytes:
        if not 0 <= b < self.geometry.block_count:
            raise OutOfRange(f"block {b} outside [0, {self.geometry.block_count})")
        self.block_reads += 1
        off = b * BLOCK_SIZE
        return self._data[off:off + BLOCK_SIZE]

    def read_data_block(self, b: int) -> bytes:
        """Like :meth:`read_block`, but block 0 is the null reference here."""
        if b == 0:
            raise NullBlock("block 0 dereferenced as file data")
        return self.read_block(b)

    def raw(self) -> bytes:
        return self._data

    def __repr__(self) -> str:
        g = self.geometry
        return f"DiskImage({self.name!r}, blocks={g.block_count}, inodes={g.inode_count})"


def open_image(path: str | os.PathLike) -> DiskImage:
    with open(path, "rb") as fh:
        data = fh.read()
    return DiskImage(data, name=os.fspath(path))


def read_block(h: DiskImage, b: int) -> bytes:
    return h.read_block(b)

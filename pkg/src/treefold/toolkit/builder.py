"""Image construction.

``write_image`` serializes an arbitrary inode table, consistent or not, which
is what the corruption fixtures and property tests need. ``build_image``
turns a manifest into a consistent tree: root at index 0, declarations
numbered in order, "." and ".." in every directory.
"""

from __future__ import annotations

import os
from typing import Sequence

from treefold import codec
from treefold.alpha import Contents, Directory, Ordinary, SoftLink
from treefold.blockdev import BLOCK_SIZE, MAX_BLOCK_NUMBER, Geometry
from treefold.codec import InodeRecord
from treefold.toolkit.manifest import Dir, File, Link, Manifest


class BuildError(Exception):
    pass


class FileTooLarge(BuildError):
    pass


class ImageFull(BuildError):
    pass


def _payload(c: Contents) -> bytes:
    if isinstance(c, Ordinary):
        return c.data
    if isinstance(c, Directory):
        return codec.encode_directory(c.entries)
    return codec.encode_softlink(c.path)


def write_image(
    nodes: Sequence[Contents | None],
    root: int = 0,
    max_blocks: int = MAX_BLOCK_NUMBER + 1,
) -> bytes:
    """Serialize ``nodes`` (index -> contents, None for a free slot).

    Data blocks are allocated sequentially after the inode table, each file's
    direct blocks first and its indirect block after them.
    """
    start = 1
    next_block = start + len(nodes)
    inodes: list[bytes] = []
    data: list[bytes] = []
    for i, c in enumerate(nodes):
        if c is None:
            inodes.append(bytes(BLOCK_SIZE))
            continue
        payload = _payload(c)
        if len(payload) > codec.MAX_FILE_SIZE:
            raise FileTooLarge(f"index {i}: {len(payload)} bytes, limit {codec.MAX_FILE_SIZE}")
        n = codec.blocks_for(len(payload))
        numbers = list(range(next_block, next_block + n))
        next_block += n
        indirect = 0
        if n > codec.N_DIRECT:
            indirect = next_block
            next_block += 1
        for k in range(n):
            data.append(payload[k * BLOCK_SIZE:(k + 1) * BLOCK_SIZE].ljust(BLOCK_SIZE, b"\x00"))
        if indirect:
            data.append(codec.encode_indirect(numbers[codec.N_DIRECT:]))
        record = InodeRecord(c.ftype, len(payload), tuple(numbers[:codec.N_DIRECT]), indirect)
        inodes.append(codec.encode_inode(record))
        if next_block > max_blocks:
            break
    if next_block > max_blocks:
        raise ImageFull(f"{next_block} blocks needed, limit {max_blocks}")
    geo = Geometry(block_count=next_block, inode_count=len(nodes), root_index=root, inode_table_start=start)
    geo.validate()
    return b"".join([geo.pack(), *inodes, *data])


def manifest_nodes(m: Manifest, spare_inodes: int = 0) -> list[Contents | None]:
    """Inode table for ``m``: root is 0, the k-th declaration is k."""
    index = {(): 0}
    for k, d in enumerate(m, 1):
        index[d.path] = k
    children: dict[tuple[str, ...], dict[str, int]] = {(): {}}
    for d in m:
        children[d.path[:-1]][d.path[-1]] = index[d.path]
        if isinstance(d, Dir):
            children[d.path] = {}

    def directory(path):
        parent = index[path[:-1]] if path else 0
        return Directory({".": index[path], "..": parent, **children[path]})

    nodes: list[Contents | None] = [directory(())]
    for d in m:
        if isinstance(d, Dir):
            nodes.append(directory(d.path))
        elif isinstance(d, File):
            nodes.append(Ordinary(d.data))
        elif isinstance(d, Link):
            nodes.append(SoftLink(d.target))
    return nodes + [None] * spare_inodes


def build_bytes(m: Manifest, spare_inodes: int = 0, max_blocks: int = MAX_BLOCK_NUMBER + 1) -> bytes:
    return write_image(manifest_nodes(m, spare_inodes), root=0, max_blocks=max_blocks)


def build_image(m: Manifest, out: str | os.PathLike, **kw) -> Geometry:
    data = build_bytes(m, **kw)
    with open(out, "wb") as fh:
        fh.write(data)
    return Geometry.unpack(data[:BLOCK_SIZE])

"""treefold: a read-only UNIX-style file system over a simulated block device.

The layers, bottom up:

* :mod:`treefold.blockdev` -- the disk, a flat array of 512-byte blocks.
* :mod:`treefold.codec` -- byte layouts for inodes, directories and soft links.
* :mod:`treefold.alpha` -- index -> contents, through the inode table.
* :mod:`treefold.resolver` -- path -> index by recursive descent, plus ``find``.
* :mod:`treefold.verifier` -- fsck-style consistency checks.
* :mod:`treefold.toolkit` -- manifest builder, lookup benchmark, CLI.
"""

from treefold.alpha import Directory, Ordinary, SoftLink, alpha, alpha1, file_contents
from treefold.blockdev import BLOCK_SIZE, DiskImage, Geometry, open_image
from treefold.resolver import (
    DEFAULT_LINK_BUDGET,
    Failure,
    beta,
    f_lookup,
    find,
    list_entries,
    namei,
    namei_links,
)

__all__ = [
    "BLOCK_SIZE",
    "DEFAULT_LINK_BUDGET",
    "Directory",
    "DiskImage",
    "Failure",
    "Geometry",
    "Ordinary",
    "SoftLink",
    "alpha",
    "alpha1",
    "beta",
    "f_lookup",
    "file_contents",
    "find",
    "list_entries",
    "namei",
    "namei_links",
    "open_image",
]

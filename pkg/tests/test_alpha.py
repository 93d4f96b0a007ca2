import struct

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from treefold import codec
from treefold.alpha import (
    DanglingBlockRef,
    Directory,
    IndexOutOfRange,
    Ordinary,
    ShortBlockList,
    SoftLink,
    alpha,
    alpha1,
    file_contents,
    inode,
)
from treefold.blockdev import DiskImage
from treefold.codec import FileType, InodeRecord
from treefold.toolkit.builder import build_bytes, write_image
from treefold.toolkit.manifest import Dir, File, Link, Manifest


def image(*nodes, root=0):
    return DiskImage(write_image(list(nodes), root=root))


def test_alpha1_offsets():
    fs = image(Directory({".": 0, "..": 0}), *[None] * 6)
    assert alpha1(fs, 0) == 1
    assert alpha1(fs, 5) == 6
    with pytest.raises(IndexOutOfRange):
        alpha1(fs, fs.inode_count)


def test_empty_manifest_root():
    fs = DiskImage(build_bytes(Manifest()))
    assert alpha(fs, 0) == Directory({".": 0, "..": 0})


def test_free_slot_is_undefined():
    fs = image(Directory({".": 0, "..": 0}), None)
    assert alpha(fs, 1) is None


def test_passwords_directory():
    fs = image(Directory({"passwords": 34832}))
    assert alpha(fs, 0) == Directory({"passwords": 34832})
    r = inode(fs, 0)
    assert fs.read_block(r.direct[0])[:15] == bytes.fromhex("70617373776f726473000000008810")


def test_empty_file_has_no_blocks():
    fs = image(Directory({}), Ordinary(b""))
    r = inode(fs, 1)
    assert r == InodeRecord(FileType.ORDINARY, 0, (), 0)
    assert file_contents(fs, r) == b""


def test_hello_truncated():
    fs = image(Directory({}), Ordinary(b"hello"))
    assert file_contents(fs, inode(fs, 1)) == bytes([0x68, 0x65, 0x6C, 0x6C, 0x6F])


def test_six_hundred_bytes_against_raw_slices():
    payload = bytes(range(256)) * 2 + bytes(range(88))
    data = write_image([Directory({}), Ordinary(payload)])
    fs = DiskImage(data)
    r = inode(fs, 1)
    b1, b2 = r.direct
    expected = data[b1 * 512:(b1 + 1) * 512] + data[b2 * 512:b2 * 512 + 88]
    assert file_contents(fs, r) == expected == payload


@pytest.mark.parametrize("size", [120 * 512, 120 * 512 + 1, 126_976])
def test_indirect_files(size):
    payload = bytes((i * 7) % 251 for i in range(size))
    data = write_image([Directory({}), Ordinary(payload)])
    fs = DiskImage(data)
    r = inode(fs, 1)
    assert (r.indirect != 0) == (size > 120 * 512)
    assert alpha(fs, 1) == Ordinary(payload)
    assert oracles.raw_contents(data, 1) == ("file", payload)


def test_softlink_contents():
    fs = image(Directory({}), SoftLink(("a", "b")))
    assert alpha(fs, 1) == SoftLink(("a", "b"))


def test_corrupt_directory_raises_not_undefined():
    data = bytearray(write_image([Directory({"a": 1}), Ordinary(b"x")]))
    r = codec.decode_inode(bytes(data[512:1024]))
    struct.pack_into(">Q", data, 512 + 8, r.size - 2)  # cut the last entry short
    with pytest.raises(codec.TrailingGarbage):
        alpha(DiskImage(bytes(data)), 0)


def _file_image(direct, size, indirect=0):
    data = bytearray(write_image([Directory({}), Ordinary(b"z" * 512 * 3)]))
    block = bytearray(512)
    block[0] = 1
    block[8:16] = size.to_bytes(8, "big")
    for k, b in enumerate(direct):
        block[16 + 4 * k:20 + 4 * k] = b.to_bytes(4, "big")
    block[496:500] = indirect.to_bytes(4, "big")
    data[2 * 512:3 * 512] = block
    return DiskImage(bytes(data))


def test_dangling_block_out_of_range():
    fs = _file_image([10_000], 10)
    with pytest.raises(DanglingBlockRef):
        alpha(fs, 1)


def test_null_block_hole_is_dangling():
    fs = _file_image([0, 4], 1000)
    with pytest.raises(DanglingBlockRef):
        alpha(fs, 1)


def test_short_block_list():
    fs = _file_image([3], 1000)
    with pytest.raises(ShortBlockList):
        alpha(fs, 1)


def test_missing_indirect_is_short():
    fs = _file_image(list(range(3, 123)), 121 * 512)
    with pytest.raises(ShortBlockList):
        alpha(fs, 1)


@given(st.lists(st.binary(max_size=1400), max_size=6))
def test_ordinary_payload_length_equals_size(payloads):
    nodes = [Directory({})] + [Ordinary(p) for p in payloads]
    fs = DiskImage(write_image(nodes))
    for i, p in enumerate(payloads, 1):
        c = alpha(fs, i)
        assert c == Ordinary(p)
        assert len(c.data) == inode(fs, i).size
        assert alpha(fs, i) == c


def test_manifest_round_trip_through_alpha():
    m = Manifest([Dir(("d",)), File(("d", "f"), b"abc"), Link(("l",), ("d", "f"))])
    fs = DiskImage(build_bytes(m))
    assert alpha(fs, 0) == Directory({".": 0, "..": 0, "d": 1, "l": 3})
    assert alpha(fs, 1) == Directory({".": 1, "..": 0, "f": 2})
    assert alpha(fs, 2) == Ordinary(b"abc")
    assert alpha(fs, 3) == SoftLink(("d", "f"))

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from generators import random_manifest
from treefold.alpha import Directory, Ordinary, alpha
from treefold.blockdev import DiskImage
from treefold.resolver import (
    LINK_BUDGET_EXHAUSTED,
    NOT_FOUND,
    ListMode,
    beta,
    f_lookup,
    find,
    list_entries,
    namei,
    namei_links,
)
from treefold.toolkit.builder import build_bytes, write_image
from treefold.toolkit.manifest import Manifest, parse_manifest


def build(text):
    return DiskImage(build_bytes(parse_manifest(text)))


@pytest.fixture
def two_level():
    # root 0, /a 1, /a/b 2
    return build("dir /a\nfile /a/b inline:6869\n")


@pytest.fixture
def empty():
    return DiskImage(build_bytes(Manifest()))


def test_null_path_is_one_step(empty):
    r = namei(empty, 0, ())
    assert (r.result, r.steps) == (0, 1)


def test_two_level_descent(two_level):
    data = two_level.raw()
    assert oracles.all_paths(data)[("a", "b")] == 2
    r = namei(two_level, 0, ("a", "b"))
    assert (r.result, r.steps) == (2, 3)


def test_missing_name(empty):
    assert namei(empty, 0, ("missing",)).result is NOT_FOUND


def test_through_a_file(two_level):
    assert beta(two_level, ("a", "b", "c")) is NOT_FOUND


def test_dots_are_real_entries(two_level):
    assert namei(two_level, 0, ("a", "..", "a", ".", "b")).result == 2
    assert namei(two_level, 0, ("..", "..")).result == 0


def test_namei_does_not_follow_links():
    fs = build("dir /d\nfile /d/f inline:00\nlink /l d\n")
    assert namei(fs, 0, ("l", "f")).result is NOT_FOUND
    assert namei(fs, 0, ("l",)).result == 3


@pytest.fixture
def linked():
    # root 0, /d 1, /d/f 2, /l 3 -> d
    return build("dir /d\nfile /d/f inline:00\nlink /l d\n")


def test_link_is_spliced(linked):
    data = linked.raw()
    assert oracles.paper_namei_links(data, 0, ("l", "f"), 1) == 2
    r = namei_links(linked, 0, ("l", "f"), 1)
    assert (r.result, r.links_followed) == (2, 1)


def test_link_needs_budget(linked):
    assert namei_links(linked, 0, ("l", "f"), 0).result is LINK_BUDGET_EXHAUSTED


def test_trailing_link_is_not_followed(linked):
    assert namei_links(linked, 0, ("l",), 5).result == 3


def test_self_loop_exhausts():
    fs = build("link /l l\n")
    assert namei_links(fs, 0, ("l", "x"), 8).result is LINK_BUDGET_EXHAUSTED


def test_negative_budget():
    with pytest.raises(ValueError):
        namei_links(build(""), 0, (), -1)


def test_beta_null_path(two_level):
    assert beta(two_level, ()) == two_level.root


def test_beta_two_level(two_level):
    assert beta(two_level, ("a", "b")) == 2


def test_f_lookup(empty):
    assert f_lookup(empty, ()) == Directory({".": 0, "..": 0})


def test_f_lookup_passwords():
    fs = build("file /passwords inline:736563726574\n")
    assert f_lookup(fs, ("passwords",)) == Ordinary(b"secret")


def test_f_lookup_dangling_is_undefined():
    fs = DiskImage(write_image([Directory({".": 0, "..": 0, "gone": 1}), None]))
    assert f_lookup(fs, ("gone",)) is None
    assert f_lookup(fs, ("nothing",)) is None


def test_f_lookup_passes_exhaustion_through():
    assert f_lookup(build("link /l l\n"), ("l", "x")) is LINK_BUDGET_EXHAUSTED


@pytest.fixture
def mixed():
    return build("file /f inline:00\ndir /d\n")


def test_list_modes(mixed):
    assert list_entries(mixed, (), ListMode.DIRS_ONLY) == {"d"}
    assert list_entries(mixed, (), ListMode.ALL) == {"f", "d"}


def test_list_non_directory_and_empty(mixed):
    assert list_entries(mixed, ("f",)) == set()
    assert list_entries(mixed, ("nope",)) == set()
    assert list_entries(mixed, ("d",)) == set()


def test_find_cases(empty):
    assert find(empty, ("nope",)).paths == set()
    assert find(empty, ()).paths == {()}
    chain = build("dir /a\nfile /a/b inline:00\n")
    assert find(chain, ()).paths == {(), ("a",), ("a", "b")}
    assert set(oracles.all_paths(chain.raw())) == find(chain, ()).paths


def test_find_paper_list_skips_files():
    fs = build("dir /a\nfile /a/b inline:00\ndir /a/c\n")
    assert find(fs, (), ListMode.DIRS_ONLY).paths == {(), ("a",), ("a", "c")}
    assert find(fs, ("a", "b"), ListMode.DIRS_ONLY).paths == {("a", "b")}


def test_find_follows_links_within_budget():
    fs = build("dir /d\nfile /d/f inline:00\nlink /l d\n")
    r = find(fs, ())
    assert r.paths == {(), ("d",), ("d", "f"), ("l",), ("l", "f")}
    assert not r.exhausted
    r = find(fs, (), link_budget=0)
    assert r.paths == {(), ("d",), ("d", "f"), ("l",)}
    assert r.exhausted


def test_find_terminates_on_link_cycle():
    fs = build("dir /d\nlink /d/up /\n")
    r = find(fs, (), link_budget=3)
    assert r.exhausted
    # three followed links, then a fourth that is listed but not entered
    assert max(len(p) for p in r.paths) == 2 * (3 + 1)


def test_find_depth_guard_on_directory_loop():
    # /a contains itself under another name: an alias loop, no soft links
    fs = DiskImage(write_image([Directory({".": 0, "..": 0, "a": 1}), Directory({".": 1, "..": 0, "again": 1})]))
    r = find(fs, ())
    assert r.depth_limited
    assert max(len(p) for p in r.paths) <= fs.inode_count + 1


# properties over random clean images

seeds = st.integers(0, 2**32 - 1)


def _image(seed, links=False):
    return DiskImage(build_bytes(random_manifest(random.Random(seed), 10, links=links)))


@given(seeds)
def test_termination_bound(seed):
    fs = _image(seed)
    for p, i in oracles.all_paths(fs.raw()).items():
        r = namei(fs, fs.root, p)
        assert r.result == i
        assert r.steps <= len(p) + 1


@given(seeds)
def test_prefix_property(seed):
    fs = _image(seed, links=True)
    for p in oracles.all_paths(fs.raw()):
        for k in range(len(p)):
            assert isinstance(f_lookup(fs, p[:k], 0), Directory)


@given(seeds, st.integers(0, 6))
def test_link_free_namei_links_equals_namei(seed, budget):
    fs = _image(seed)
    rnd = random.Random(seed)
    paths = list(oracles.all_paths(fs.raw()))
    paths += [p + (rnd.choice(["a", "..", ".", "zz"]),) for p in paths]
    for p in paths:
        assert namei_links(fs, 0, p, budget).result == namei(fs, 0, p).result


@given(seeds, st.integers(0, 5))
def test_links_agree_with_substitution_oracle(seed, budget):
    fs = _image(seed, links=True)
    data = fs.raw()
    rnd = random.Random(seed ^ 0x5A5A)
    paths = list(oracles.all_paths(data))
    paths += [p + tuple(rnd.choice(["a", "b", "x", ".."]) for _ in range(2)) for p in paths]
    for p in paths:
        got = namei_links(fs, 0, p, budget).result
        assert str(got) == str(oracles.paper_namei_links(data, 0, p, budget))


@given(seeds)
def test_budget_is_monotone(seed):
    fs = _image(seed, links=True)
    rnd = random.Random(seed)
    paths = [p + (rnd.choice(["a", "b", "c", "x"]),) for p in oracles.all_paths(fs.raw())]
    for p in paths:
        for b in range(6):
            r = namei_links(fs, 0, p, b)
            if r.ok:
                assert all(namei_links(fs, 0, p, b2).result == r.result for b2 in range(b, 12))
                break


@given(seeds)
def test_find_matches_enumeration_and_depth(seed):
    fs = _image(seed)
    r = find(fs, (), ListMode.ALL)
    assert r.paths == set(oracles.all_paths(fs.raw()))
    assert not r.depth_limited
    assert all(len(p) <= fs.inode_count for p in r.paths)


@given(seeds)
def test_find_paper_mode_is_directory_subset(seed):
    fs = _image(seed)
    paper = find(fs, (), ListMode.DIRS_ONLY).paths
    assert paper <= find(fs, ()).paths
    for p in paper - {()}:
        assert isinstance(alpha(fs, beta(fs, p)), Directory)

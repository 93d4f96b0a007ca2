"""Command line: treefold build|resolve|cat|ls|find|fsck|bench.

Exit status is 0 on success, 1 when a path does not resolve or fsck finds a
problem, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from treefold import codec
from treefold.alpha import Directory, Ordinary, SoftLink
from treefold.blockdev import DiskError, open_image
from treefold.resolver import DEFAULT_LINK_BUDGET, Failure, ListMode, beta, f_lookup, find, list_entries
from treefold.toolkit.bench import BenchConfig, bench_report
from treefold.toolkit.builder import BuildError, build_image
from treefold.toolkit.manifest import ManifestError, load_manifest, split_path
from treefold.verifier import fmt_path, fsck


class UsageError(Exception):
    pass


def _path(text: str) -> tuple[str, ...]:
    try:
        return split_path(text)
    except codec.CodecError as exc:
        raise UsageError(f"bad path {text!r}: {exc}") from exc


def cmd_build(args) -> int:
    geo = build_image(load_manifest(args.manifest), args.out, spare_inodes=args.spare_inodes)
    print(f"wrote {args.out}: {geo.block_count} blocks, {geo.inode_count} inodes")
    return 0


def cmd_resolve(args) -> int:
    i = beta(open_image(args.image), _path(args.path), args.links)
    print(i)
    return 1 if isinstance(i, Failure) else 0


def cmd_cat(args) -> int:
    c = f_lookup(open_image(args.image), _path(args.path), args.links)
    if isinstance(c, SoftLink):
        print(f"{args.path}: soft link to {fmt_path(c.path)}", file=sys.stderr)
        return 1
    if not isinstance(c, Ordinary):
        print(f"{args.path}: not an ordinary file", file=sys.stderr)
        return 1
    sys.stdout.buffer.write(c.data)
    sys.stdout.flush()
    return 0


def cmd_ls(args) -> int:
    fs = open_image(args.image)
    p = _path(args.path)
    if not isinstance(f_lookup(fs, p, args.links), Directory):
        print(f"{args.path}: not a directory", file=sys.stderr)
        return 1
    mode = ListMode.DIRS_ONLY if args.dirs_only else ListMode.ALL
    for name in sorted(list_entries(fs, p, mode, args.links)):
        print(name)
    return 0


def cmd_find(args) -> int:
    mode = ListMode.DIRS_ONLY if args.paper_list else ListMode.ALL
    result = find(open_image(args.image), _path(args.path), mode, args.links)
    for p in sorted(result.paths):
        print(fmt_path(p))
    if result.exhausted:
        print("find: soft link budget exhausted, some subtrees pruned", file=sys.stderr)
    if result.depth_limited:
        print("find: depth limit reached, image has a directory loop", file=sys.stderr)
    return 0 if result.paths else 1


def cmd_fsck(args) -> int:
    report = fsck(open_image(args.image), args.links)
    sys.stdout.write(report.to_text())
    return 0 if report.clean else 1


def cmd_bench(args) -> int:
    config = BenchConfig(
        n=args.n,
        k=args.k,
        queries=args.queries,
        workload=args.workload,
        seed=args.seed,
        cache_capacity=args.cache_capacity,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(bench_report(config).table())
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treefold", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an image from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--spare-inodes", type=int, default=0, help="unused inode slots to append")
    p.set_defaults(func=cmd_build)

    def image_path(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("image")
        p.add_argument("path", help='"/"-separated; "" is the root')
        p.add_argument("--links", type=int, default=DEFAULT_LINK_BUDGET, help="soft link budget")
        p.set_defaults(func=func)
        return p

    image_path("resolve", cmd_resolve, "print the index a path names")
    image_path("cat", cmd_cat, "print an ordinary file")
    p = image_path("ls", cmd_ls, "list a directory")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="every entry (default)")
    group.add_argument("--dirs-only", action="store_true", help="directory entries only")
    p = image_path("find", cmd_find, "list every path under a directory")
    p.add_argument("--paper-list", action="store_true", help="descend through directory entries only")

    p = sub.add_parser("fsck", help="check image consistency")
    p.add_argument("image")
    p.add_argument("--links", type=int, default=DEFAULT_LINK_BUDGET)
    p.set_defaults(func=cmd_fsck)

    p = sub.add_parser("bench", help="compare lookup strategies on a balanced image")
    p.add_argument("--n", type=int, default=1000, help="number of files")
    p.add_argument("--k", type=int, default=10, help="entries per directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--queries", type=int, default=10_000)
    p.add_argument("--workload", choices=["uniform", "zipf"], default="uniform")
    p.add_argument("--cache-capacity", type=int, default=4096)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "links", 0) < 0:
        parser.error("--links must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"treefold: {exc}", file=sys.stderr)
        return 2
    except (DiskError, ManifestError, BuildError, codec.CodecError, OSError) as exc:
        print(f"treefold: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Manifest-driven image builder, lookup benchmark and command line."""

from treefold.toolkit.bench import (
    BenchConfig,
    CostCounters,
    PathCache,
    balanced_image,
    balanced_manifest,
    bench_report,
    cached_lookup,
    flat_lookup,
    flat_pairs,
    tree_lookup_instrumented,
)
from treefold.toolkit.builder import build_bytes, build_image, write_image
from treefold.toolkit.manifest import Manifest, load_manifest, parse_manifest

__all__ = [
    "BenchConfig",
    "CostCounters",
    "Manifest",
    "PathCache",
    "balanced_image",
    "balanced_manifest",
    "bench_report",
    "build_bytes",
    "build_image",
    "cached_lookup",
    "flat_lookup",
    "flat_pairs",
    "load_manifest",
    "parse_manifest",
    "tree_lookup_instrumented",
    "write_image",
]

"""Write a demo image and one corrupted copy per fsck fixture into a directory.

    python scripts/make_fixtures.py out/
    treefold fsck out/dot_self.img
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import corruptions  # noqa: E402


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    (out / "base.manifest").write_text(corruptions.BASE_MANIFEST)
    (out / "base.img").write_bytes(bytes(corruptions.base_image()))
    for name, (make, expected) in corruptions.FIXTURES.items():
        (out / f"{name}.img").write_bytes(bytes(make()))
        print(f"{name}.img  expect FAIL: {' '.join(sorted(expected))}")


if __name__ == "__main__":
    main()

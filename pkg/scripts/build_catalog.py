#!/usr/bin/env python3
"""Enumerate the shape catalog and dump one JSON line per entry.

Usage: python scripts/build_catalog.py [depth] [max_dim] [max_elements]
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ogpkit.harness import Bounds, enumerate_catalog  # noqa: E402
from ogpkit.render import poset_to_dict  # noqa: E402


def main(argv):
    depth = int(argv[0]) if len(argv) > 0 else 2
    max_dim = int(argv[1]) if len(argv) > 1 else 4
    max_elements = int(argv[2]) if len(argv) > 2 else 16
    catalog = enumerate_catalog(Bounds(depth, max_dim, max_elements))
    for entry in catalog.entries:
        doc = {
            "expr": entry.expr,
            "depth": entry.depth,
            "dim": entry.molecule.dim,
            "elements": len(entry.molecule),
            "atom": entry.molecule.is_atom(),
            "shape": poset_to_dict(entry.molecule),
        }
        print(json.dumps(doc, sort_keys=True))
    print(f"{len(catalog.entries)} catalog entries", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

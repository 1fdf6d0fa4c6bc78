#!/usr/bin/env python3
"""Run the lemma-checking suite and print the report document.

Equivalent to `ogpkit verify`; kept as a script so the default experiment
run is one command from a fresh checkout.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ogpkit.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main(["verify", *sys.argv[1:]]))

"""Bundled protocol child: evaluates the registry's sphere function.

Run as ``python -m peoa.harness.sphere_server``. Reads one line of
space-separated floats per request and answers with one float per line,
using the exact in-process sphere so parent and child produce bit
identical values for identical inputs.
"""
from __future__ import annotations

import sys

import numpy as np

from ..benchmarks import sphere


def main() -> int:
    for line in sys.stdin:
        tokens = line.split()
        if not tokens:
            continue
        x = np.array([float(tok) for tok in tokens])
        sys.stdout.write(repr(sphere(x)) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

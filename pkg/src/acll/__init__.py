"""Completion of left-linear term rewrite systems modulo AC."""

import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

__version__ = "0.1.0"

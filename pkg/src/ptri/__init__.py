"""Triangulated 3-pseudomanifolds: skeleton analysis, bistellar moves, and
quantum state-sum invariants."""

__version__ = "0.1.0"

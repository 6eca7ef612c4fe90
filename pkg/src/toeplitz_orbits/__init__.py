"""Toeplitz subshifts with divergent polynomial ergodic averages.

Number-theoretic primitives live in ``ntcore``, partial words and viable
pairs in ``words``, the three tower constructions in ``constructions``, and
exact orbit statistics in ``orbitstats``.  ``cli`` wires them to a command
line.
"""

__version__ = "0.1.0"

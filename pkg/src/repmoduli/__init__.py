"""Exact verification of character-table, class-fusion and orbit-graph
computations for the simple groups PSL2(q) and Sz(q), plus a floating-point
companion that realizes distinguished irreducible representations as unitary
matrices and exercises the induced representation moduli at desk scale."""

__version__ = "0.1.0"

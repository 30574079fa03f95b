"""Exact integral bases for plane algebraic curves.

The package computes, for an irreducible plane curve defined by a
polynomial f in Q[x, y] monic in y, a basis of the integral closure of
Q[x][y]/<f> as a Q[x]-module, working with exact rational arithmetic
throughout.
"""

__all__ = ["algebra", "poly2", "puiseux", "errors"]

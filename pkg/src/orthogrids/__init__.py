"""Exact-arithmetic toolkit for integer vectors on spheres and the lattices
orthogonal to them: enumeration, canonical shapes, marked grids, local form
invariants, and equidistribution statistics."""

__version__ = "0.1.0"

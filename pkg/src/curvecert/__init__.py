"""Toolkit for planar differential inclusions into 2x2 matrix curves.

Certifies curve hypotheses (nowhere-elliptic, absence of rank-one
connections, quartic nondegeneracy), computes the rank-one tangent
factorization and its winding invariants, builds entropy families,
synthesizes the rigid solution fields (constants, simple waves, vortex
and half-vortex), and measures entropy productions, kinetic residuals,
Besov seminorms and commutator decay on discretized fields.
"""

__version__ = "0.1.0"

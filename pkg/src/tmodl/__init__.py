"""Exact computation of infinity-adic special L-values of abelian t-modules
over F_q[t]: Euler products, the exp/log analytic side with unit lattices
and class modules, Artin L-values of Galois representations, and a trace
formula verifier on the affine line."""

__version__ = '0.1.0'

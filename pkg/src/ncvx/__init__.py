"""Exact-arithmetic workbench for nearly convex sets, mappings, and functions.

Sets are modeled as punctured polyhedra (a closed convex polyhedral carrier
minus finitely many closed polyhedral pieces), set-valued mappings as their
graphs in product space, and functions as piecewise-linear convex bases on
punctured polyhedral domains.  All decision procedures run over exact
rationals and produce certificates that are re-verified before use.
"""

__version__ = "0.1.0"

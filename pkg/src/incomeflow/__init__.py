"""incomeflow package.

Extended Yakovenko income-distribution model: the two-branch equilibrium law,
its Langevin dynamics, empirical CCDFs, survey/rich-list matching and fitting.
"""

__version__ = "0.1.0"  # pragma: no cover

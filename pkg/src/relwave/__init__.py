"""Numerical workbench for a wave-function picture of relativistic particles in 1+1D.

Modules: kinematics, metric (geodesics), planewave, algebra and dirac
(two-component factorization), action (phases and least action),
maxwell (massless limit), evolve (grid evolution), scenario/runner/cli.
"""
__version__ = "0.1.0"

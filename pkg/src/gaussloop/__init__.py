"""Gaussian test-function regularization of loop integrals.

Core modules:

- :mod:`gaussloop.quad` -- adaptive quadrature, cubature, derivatives
- :mod:`gaussloop.testfn` -- Hermite-Gaussian test functions
- :mod:`gaussloop.propagator` -- regularized two-point functions
- :mod:`gaussloop.loops` -- tadpole, triangle anomaly, self-energy, vertex
- :mod:`gaussloop.tlr` -- Taylor-Lagrange extension machinery

Service and CLI layers live in :mod:`gaussloop.api` and :mod:`gaussloop.cli`.
"""

__version__ = "0.1.0"

from .quad import QuadratureConfig, QuadratureResult  # noqa: E402,F401

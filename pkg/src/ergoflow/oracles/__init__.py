"""Independent brute-force verifiers for the closed-form Gaussian machinery.

Three unrelated numerical routes cross-check the analytic results:

- :mod:`ergoflow.oracles.lyapunov` integrates the literal moment ODEs with a
  fixed-step RK4 scheme,
- :mod:`ergoflow.oracles.fock` evolves dense truncated-Fock density matrices
  under the full master equation and extracts the definitional
  (spectrum-reordering) ergotropy,
- :mod:`ergoflow.oracles.quadrature` evaluates phase-space integrals on a
  plain grid.

None of them reuse the exponential solution or the entropy/ergotropy closed
forms they are meant to check.
"""

from . import fock, lyapunov, quadrature

__all__ = ["fock", "lyapunov", "quadrature"]

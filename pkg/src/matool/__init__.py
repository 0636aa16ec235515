"""Numerical construction and verification toolkit for degenerate planar
Monge-Ampere coefficient fields with flat oscillatory coefficients.

Subpackages and modules:

* ``numerics``     -- log-domain extended-precision scalars, quadrature,
                      finite differences, ODE integration.
* ``construction`` -- patch geometry, oscillator profile, cutoff families,
                      and the glued coefficient field (a, b, c, f).
* ``legendre``     -- Legendre chart machinery and integral identities.
* ``adjoint``      -- WKB-type quasimodes for the adjoint of the reduced
                      hyperbolic operator.
* ``duel``         -- both sides of the pairing integral and the scaling
                      report that compares them across the oscillation index.
* ``oleinik``      -- Levi-condition checker and isolated-zero census.
* ``cli``          -- the ``matool`` command line surface.
"""

__version__ = "0.1.0"

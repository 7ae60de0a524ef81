"""Circular 3-webs on the unit sphere from rational polar curves.

Builds webs from rational space curves via the projective (3,1) model of
Moebius geometry, certifies hexagonality numerically (third-order
residual and Thomsen hexagon closure), verifies the quadratic ideal
generators of the twisted-cubic families, computes their Moebius
invariants, and renders stereographic SVG figures.
"""

__version__ = "0.1.0"

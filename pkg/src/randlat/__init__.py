"""Statistics of short vectors of random unit-covolume lattices.

Exact sieve combinatorics, Poisson analytics, lattice enumeration, spherical
angle geometry, and Monte-Carlo experiments comparing empirical lattice
statistics against their analytic limit predictions.
"""

__version__ = "0.1.0"

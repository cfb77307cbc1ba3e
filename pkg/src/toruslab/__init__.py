"""toruslab: a numerical laboratory for exponential sums, lattice points on
spheres, the periodic Schrodinger propagator, circle-method kernel
decompositions, additive energies and L^p scaling experiments on the square
torus."""

__version__ = "0.1.0"

from . import arith, energy, errors, estimator, expsum, kernel, lattice, profiles, propagator

__all__ = [
    "arith", "energy", "errors", "estimator", "expsum", "kernel", "lattice",
    "profiles", "propagator", "__version__",
]

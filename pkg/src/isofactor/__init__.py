"""isofactor - exactly solvable potentials by factorization, checked against numerical spectra."""

__version__ = "0.1.0"

"""Mixcurve - signed multiplicities and intersection numbers of mixed polynomials"""

__version__ = "0.1.0"

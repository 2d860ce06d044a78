"""
Command-line interface

    python -m src.cli sm --poly "u^2 + u + conj(u)" --at 0
"""

from .main import run, main

__all__ = ['run', 'main']

"""
Topology Module

Certified winding numbers, multiplicity with sign (winding) and local
intersection numbers of mixed curves (intersection).

Import from the submodules: intersection depends on src.roots, which in
turn depends on winding.
"""

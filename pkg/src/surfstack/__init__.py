"""Stacks of three 3D surface codes on the rectified cubic lattice: construction and verification."""

from .codealg import CssCode
from .lattice import Lattice, LatticeDims, build_lattice
from .report import Report
from .stack_builder import Stack, build_2d, build_stack

__all__ = ["CssCode", "Lattice", "LatticeDims", "Report", "Stack", "build_2d", "build_lattice", "build_stack"]

"""annlint: a toolchain for the Ann annotation-constraint language.

The package parses ``.ann`` annotation definitions, checks annotated
program models against them, searches bounded program spaces for
conflicts between constraint sets, and generates Java annotation types,
annotation processors, and USE/OCL specifications.
"""

from __future__ import annotations

__version__ = "0.1.0"

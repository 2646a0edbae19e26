"""Tangled circuit diagrams: a small term language and several evaluators.

Submodules:

* ``diagram``  terms, multigraphs, typing, desugaring
* ``dsl``      text syntax for programs and JSON binding files
* ``groups``   finite groups as multiplication tables
* ``trel``     relations over powers of a group (plain and decorated)
* ``spans``    spans of finite sets, coloring counts
* ``knotgroup``  presentations, Tietze moves, homomorphism counts
* ``linres``   exact rational linear circuits
* ``cli``      the ``tcd`` command
"""

from .diagram import (
    Braid,
    BraidInv,
    Cap,
    Comul,
    Compose,
    Counit,
    Cup,
    Gen,
    Id,
    Interface,
    Multigraph,
    Mul,
    Tensor,
    Unit,
    compose,
    desugar,
    generator_census,
    tensor,
    typecheck,
)
from .dsl import Program, parse_bindings, parse_program
from .groups import FiniteGroup, make_group

__all__ = [
    "Braid", "BraidInv", "Cap", "Comul", "Compose", "Counit", "Cup", "Gen", "Id",
    "Interface", "Multigraph", "Mul", "Tensor", "Unit", "compose", "desugar",
    "generator_census", "tensor", "typecheck", "Program", "parse_bindings",
    "parse_program", "FiniteGroup", "make_group",
]

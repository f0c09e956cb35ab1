"""Subexpression graphs of Coxeter groups and their cycle spaces.

Submodules:
  coxeter     -- Coxeter systems, the geometric representation, roots
  roots       -- Fibonacci sequences, reflection closures, proper pairs
  expressions -- subexpressions, folds, the order, and the graph Sub(s,w)
  dihedral    -- dihedral projections, circle model, Cyc cycles, Tits cone
  cyclespace  -- GF(2) cycle-space generators, decomposition, spanning
  sweeps      -- exhaustive/alternating sweep drivers and table rows
  cli         -- the ``subexpr`` command-line tool
"""

from . import coxeter, cyclespace, dihedral, expressions, roots, sweeps
from .coxeter import CoxeterSystem, Element, named_system, new_system
from .expressions import (Expression, Subexpression, SubexprGraph,
                          build_all_graphs, build_graph, double_fold,
                          special_pairs)
from .cyclespace import (GeneratorCycle, cycle_space_dim, decompose,
                         enumerate_generators, min_length_basis, verify_span)

__all__ = [
    "coxeter", "roots", "expressions", "dihedral", "cyclespace", "sweeps",
    "CoxeterSystem", "Element", "named_system", "new_system",
    "Expression", "Subexpression", "SubexprGraph", "build_graph",
    "build_all_graphs", "double_fold", "special_pairs",
    "GeneratorCycle", "cycle_space_dim", "decompose",
    "enumerate_generators", "min_length_basis", "verify_span",
]

__version__ = "0.1.0"

"""Leavitt path algebra toolkit.

Graph moves that preserve the algebra up to isomorphism or Morita
equivalence, corner graphs cut out by directed forests, exact K-theory rank
bookkeeping through Smith normal form, a symbolic checker for Cuntz-Krieger
generator families, and the graph monoid of vertex multisets.

The modules are small and independent: :mod:`leavitt.graph` (directed
graphs, paths, hereditary/saturated sets, text format), :mod:`leavitt.moves`
(the moves plus replayable traces), :mod:`leavitt.corners` (forests and
corners), :mod:`leavitt.ktheory` (integer linear algebra and classification
verdicts), :mod:`leavitt.algebra` (exact element arithmetic, normal forms,
family verification), :mod:`leavitt.monoid` (vertex multisets under the
range relation), and :mod:`leavitt.cli` (the ``leavitt`` command).
"""

from .graph import Edge, Graph, PathSeq, parse_graph, serialize_graph

__version__ = "0.1.0"

__all__ = ["Edge", "Graph", "PathSeq", "parse_graph", "serialize_graph", "__version__"]

"""
Finite graphs as darts with a twin involution, their chain complex and
(co)homology over the rationals.

A dart is an ordered edge; twin(e) is the same edge traversed backwards. An
edge is the pair {e, twin(e)} and is represented in coordinates by its smaller
dart id. Loops and parallel edges are allowed.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple
import logging

import networkx as nx

from dualgraph.errors import InvalidCycle
from dualgraph.exact_linalg import (
    Matrix, Scalar, apply, column_echelon_pivots, kernel_basis, matmul, solve,
    to_rational, transpose,
)

logger = logging.getLogger(__name__)

PLUS = "+"
MINUS = "-"


class Graph:
    """Finite graph given by vertex ids, dart sources and the twin involution"""

    def __init__(self, vertex_ids: Iterable[str], src: Mapping[str, str], twin: Mapping[str, str]):
        vertices = tuple(sorted(set(vertex_ids)))
        vertex_set = set(vertices)
        src = dict(src)
        twin = dict(twin)
        if set(src) != set(twin):
            raise ValueError("src and twin must be defined on the same darts")
        for dart, mate in twin.items():
            if mate not in twin:
                raise ValueError(f"twin of dart {dart} is unknown dart {mate}")
            if mate == dart:
                raise ValueError(f"dart {dart} is its own twin")
            if twin[mate] != dart:
                raise ValueError(f"twin is not an involution at dart {dart}")
        for dart, vertex in src.items():
            if vertex not in vertex_set:
                raise ValueError(f"dart {dart} starts at unknown vertex {vertex}")
        self.vertex_ids: Tuple[str, ...] = vertices
        self._vertex_set = vertex_set
        self.dart_ids: Tuple[str, ...] = tuple(sorted(src))
        self._src: Dict[str, str] = src
        self._twin: Dict[str, str] = twin

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str]]) -> "Graph":
        """
        Build a graph from (edge id, src, dst) triples.

        Edge e gives darts "e+" (src to dst) and "e-" (dst to src).
        """
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex id")
        src: Dict[str, str] = {}
        twin: Dict[str, str] = {}
        seen: Set[str] = set()
        for edge_id, a, b in edges:
            if edge_id in seen:
                raise ValueError(f"duplicate edge id {edge_id}")
            seen.add(edge_id)
            plus, minus = edge_id + PLUS, edge_id + MINUS
            src[plus], src[minus] = a, b
            twin[plus], twin[minus] = minus, plus
        return cls(vertices, src, twin)

    @classmethod
    def empty(cls) -> "Graph":
        return cls((), {}, {})

    def src(self, dart: str) -> str:
        return self._src[dart]

    def target(self, dart: str) -> str:
        return self._src[self._twin[dart]]

    def twin(self, dart: str) -> str:
        return self._twin[dart]

    def has_dart(self, dart: str) -> bool:
        return dart in self._src

    def has_vertex(self, vertex: str) -> bool:
        return vertex in self._vertex_set

    def representative(self, dart: str) -> str:
        """Smallest dart id of the edge containing dart"""
        return min(dart, self._twin[dart])

    @property
    def edges(self) -> Tuple[str, ...]:
        """Representative darts, one per edge, sorted"""
        return tuple(d for d in self.dart_ids if d == self.representative(d))

    def darts_from(self, vertex: str) -> Tuple[str, ...]:
        return tuple(d for d in self.dart_ids if self._src[d] == vertex)

    def is_loop(self, dart: str) -> bool:
        return self.src(dart) == self.target(dart)

    def subgraph(self, vertices: Iterable[str], darts: Iterable[str]) -> "Graph":
        darts = set(darts)
        return Graph(vertices, {d: self._src[d] for d in darts}, {d: self._twin[d] for d in darts})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.vertex_ids == other.vertex_ids and self._src == other._src
                and self._twin == other._twin)

    def __hash__(self) -> int:
        return hash((self.vertex_ids, self.dart_ids))

    def __repr__(self) -> str:
        return f"Graph(vertices={len(self.vertex_ids)}, edges={len(self.edges)})"

    def to_networkx(self) -> nx.MultiGraph:
        """Undirected multigraph keyed by representative dart"""
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertex_ids)
        for rep in self.edges:
            g.add_edge(self.src(rep), self.target(rep), key=rep)
        return g


@dataclass(frozen=True)
class Orientation:
    """One chosen dart per edge; the column order of every edge-indexed matrix"""
    graph: Graph
    representatives: Tuple[str, ...]

    def coordinate(self, dart: str) -> Tuple[int, int]:
        """(column, sign) of a dart: +1 for the representative, -1 for its twin"""
        rep = self.graph.representative(dart)
        return self.representatives.index(rep), (1 if rep == dart else -1)


def canonical_orientation(g: Graph) -> Orientation:
    return Orientation(g, g.edges)


def _check_orientation(g: Graph, o: Orientation):
    if o.graph != g or set(o.representatives) != set(g.edges):
        raise ValueError("orientation does not belong to this graph")


class Chain0:
    """Rational combination of vertices, zero-filled"""

    def __init__(self, graph: Graph, coefficients: Optional[Mapping[str, Scalar]] = None):
        self.graph = graph
        self.coefficients: Dict[str, Fraction] = {v: Fraction(0) for v in graph.vertex_ids}
        for v, c in (coefficients or {}).items():
            if v not in self.coefficients:
                raise ValueError(f"unknown vertex {v}")
            self.coefficients[v] = to_rational(c)

    def vector(self) -> Tuple[Fraction, ...]:
        return tuple(self.coefficients[v] for v in self.graph.vertex_ids)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain0):
            return NotImplemented
        return self.graph == other.graph and self.coefficients == other.coefficients


class Chain1:
    """
    Rational combination of darts modulo e = -twin(e).

    Coefficients are stored on every dart and kept antisymmetric.
    """

    def __init__(self, graph: Graph, coefficients: Optional[Mapping[str, Scalar]] = None):
        self.graph = graph
        self.coefficients: Dict[str, Fraction] = {d: Fraction(0) for d in graph.dart_ids}
        for dart, c in (coefficients or {}).items():
            self._add(dart, to_rational(c))

    def _add(self, dart: str, c: Fraction):
        if dart not in self.coefficients:
            raise ValueError(f"unknown dart {dart}")
        self.coefficients[dart] += c
        self.coefficients[self.graph.twin(dart)] -= c

    @classmethod
    def from_vector(cls, graph: Graph, o: Orientation, vector: Sequence[Scalar]) -> "Chain1":
        if len(vector) != len(o.representatives):
            raise ValueError("vector length does not match the number of edges")
        return cls(graph, {rep: c for rep, c in zip(o.representatives, vector)})

    @classmethod
    def of_darts(cls, graph: Graph, darts: Iterable[str]) -> "Chain1":
        chain = cls(graph)
        for dart in darts:
            chain._add(dart, Fraction(1))
        return chain

    def __getitem__(self, dart: str) -> Fraction:
        return self.coefficients[dart]

    def vector(self, o: Optional[Orientation] = None) -> Tuple[Fraction, ...]:
        reps = o.representatives if o is not None else self.graph.edges
        return tuple(self.coefficients[r] for r in reps)

    def by_edge(self) -> Dict[str, Fraction]:
        """Coefficient on each representative dart"""
        return {rep: self.coefficients[rep] for rep in self.graph.edges}

    def __add__(self, other: "Chain1") -> "Chain1":
        _check_same_graph(self, other)
        result = Chain1(self.graph)
        for dart in self.graph.dart_ids:
            result.coefficients[dart] = self.coefficients[dart] + other.coefficients[dart]
        return result

    def __mul__(self, scalar: Scalar) -> "Chain1":
        c = to_rational(scalar)
        result = Chain1(self.graph)
        for dart, value in self.coefficients.items():
            result.coefficients[dart] = c * value
        return result

    __rmul__ = __mul__

    def __neg__(self) -> "Chain1":
        return self * -1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients.values())

    def is_antisymmetric(self) -> bool:
        return all(self.coefficients[self.graph.twin(d)] == -c for d, c in self.coefficients.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain1):
            return NotImplemented
        return self.graph == other.graph and self.coefficients == other.coefficients

    def __repr__(self) -> str:
        terms = [f"{c}*{d}" for d, c in self.by_edge().items() if c != 0]
        return "Chain1(" + (" + ".join(terms) or "0") + ")"


def _check_same_graph(x, y):
    if x.graph != y.graph:
        raise ValueError("chains live on different graphs")


@dataclass(frozen=True)
class Cycle:
    """Closed walk e_1 ... e_m with t(e_i) = s(e_i+1) and t(e_m) = s(e_1)"""
    graph: Graph
    darts: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "darts", tuple(self.darts))
        if not self.darts:
            raise InvalidCycle("a cycle needs at least one dart")
        for dart in self.darts:
            if not self.graph.has_dart(dart):
                raise InvalidCycle(f"dart {dart} is not in the graph")
        for i, dart in enumerate(self.darts):
            following = self.darts[(i + 1) % len(self.darts)]
            if self.graph.target(dart) != self.graph.src(following):
                raise InvalidCycle(
                    f"walk is not closed: {dart} ends at {self.graph.target(dart)} "
                    f"but {following} starts at {self.graph.src(following)}"
                )

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(self.graph.src(d) for d in self.darts)


@dataclass(frozen=True)
class H1Basis:
    """Basis of H_1 = Ker(d); columns in representative-dart coordinates"""
    graph: Graph
    orientation: Orientation
    basis_matrix: Matrix

    @property
    def dimension(self) -> int:
        return self.basis_matrix.cols

    def chains(self) -> List[Chain1]:
        return [Chain1.from_vector(self.graph, self.orientation, col) for col in self.basis_matrix.columns()]

    def coordinates(self, chain: Chain1) -> Optional[Tuple[Fraction, ...]]:
        """Coordinates of a chain in this basis, or None if it is not a cycle"""
        return solve(self.basis_matrix, chain.vector(self.orientation))


@dataclass(frozen=True)
class H1CohomClasses:
    """Chain representatives of a basis of H^1 = Coker(delta)"""
    graph: Graph
    orientation: Orientation
    representative_matrix: Matrix

    @property
    def dimension(self) -> int:
        return self.representative_matrix.cols

    def chains(self) -> List[Chain1]:
        return [Chain1.from_vector(self.graph, self.orientation, col)
                for col in self.representative_matrix.columns()]


def boundary_matrix(g: Graph, o: Optional[Orientation] = None) -> Matrix:
    """d: E -> V, e -> t(e) - s(e); loop columns are zero"""
    o = o or canonical_orientation(g)
    _check_orientation(g, o)
    row = {v: i for i, v in enumerate(g.vertex_ids)}
    columns = []
    for rep in o.representatives:
        column = [Fraction(0)] * len(g.vertex_ids)
        column[row[g.target(rep)]] += 1
        column[row[g.src(rep)]] -= 1
        columns.append(column)
    return Matrix.from_columns(columns, rows=len(g.vertex_ids))


def coboundary_matrix(g: Graph, o: Optional[Orientation] = None) -> Matrix:
    """
    delta: V -> E, v -> sum of the darts e with t(e) = v.

    Built dart by dart from the definition, not by transposing d.
    """
    o = o or canonical_orientation(g)
    _check_orientation(g, o)
    columns = []
    for v in g.vertex_ids:
        image = Chain1(g)
        for dart in g.dart_ids:
            if g.target(dart) == v:
                image = image + Chain1.of_darts(g, [dart])
        columns.append(image.vector(o))
    return Matrix.from_columns(columns, rows=len(o.representatives))


def boundary(x: Chain1) -> Chain0:
    """Apply d to a chain"""
    g = x.graph
    o = canonical_orientation(g)
    values = apply(boundary_matrix(g, o), x.vector(o))
    return Chain0(g, dict(zip(g.vertex_ids, values)))


def h1_basis(g: Graph) -> H1Basis:
    o = canonical_orientation(g)
    basis = kernel_basis(boundary_matrix(g, o))
    logger.debug("H_1 of %r has dimension %d", g, basis.cols)
    return H1Basis(g, o, basis)


def h1_cohom_classes(g: Graph) -> H1CohomClasses:
    """
    Representatives of a basis of Coker(delta).

    The unit vectors on the leading coordinates of the reduced column-echelon
    H_1 basis span a complement of Im(delta) = Ker(d)^perp, and their Gram
    matrix against that basis is the identity.
    """
    basis = h1_basis(g)
    n = len(basis.orientation.representatives)
    columns = []
    for lead in column_echelon_pivots(basis.basis_matrix):
        unit = [Fraction(0)] * n
        unit[lead] = Fraction(1)
        columns.append(unit)
    return H1CohomClasses(g, basis.orientation, Matrix.from_columns(columns, rows=n))


def pairing(x: Chain1, y: Chain1) -> Fraction:
    """<x, y> = sum over edges of x(r) y(r), r the representative dart"""
    _check_same_graph(x, y)
    return sum((x[rep] * y[rep] for rep in x.graph.edges), Fraction(0))


def gram_matrix(basis: H1Basis, classes: H1CohomClasses) -> Matrix:
    """Entry (i, j) is <i-th H_1 basis cycle, j-th H^1 representative>"""
    if basis.graph != classes.graph:
        raise ValueError("basis and classes live on different graphs")
    return matmul(transpose(basis.basis_matrix), classes.representative_matrix)


def cycle_to_chain(r: Cycle) -> Chain1:
    """+1 per traversed dart, repeats accumulate"""
    return Chain1.of_darts(r.graph, r.darts)


def connected_components(g: Graph) -> List[Set[str]]:
    components = [set(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(components, key=min)


def betti1(g: Graph) -> int:
    """|edges| - |vertices| + number of connected components"""
    return len(g.edges) - len(g.vertex_ids) + nx.number_connected_components(g.to_networkx())


def spanning_forest(g: Graph) -> Set[str]:
    """Representative darts of a deterministic spanning forest"""
    forest = nx.minimum_spanning_edges(g.to_networkx(), algorithm="kruskal", keys=True, data=False)
    return {key for _, _, key in forest}


def fundamental_cycles(g: Graph) -> List[Cycle]:
    """
    One closed walk per edge outside the spanning forest: the edge followed
    by the forest path back to its source. Their chains form a basis of H_1.
    """
    tree_edges = spanning_forest(g)
    tree = nx.MultiGraph()
    tree.add_nodes_from(g.vertex_ids)
    for rep in sorted(tree_edges):
        tree.add_edge(g.src(rep), g.target(rep), key=rep)
    cycles = []
    for rep in g.edges:
        if rep in tree_edges:
            continue
        walk = [rep]
        if not g.is_loop(rep):
            path = nx.shortest_path(tree, g.target(rep), g.src(rep))
            for u, w in zip(path, path[1:]):
                key = next(iter(tree[u][w]))
                walk.append(key if g.src(key) == u else g.twin(key))
        cycles.append(Cycle(g, tuple(walk)))
    logger.debug("found %d fundamental cycles in %r", len(cycles), g)
    return cycles

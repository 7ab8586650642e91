import random
from fractions import Fraction

import pytest

from covers import random_graph
from dualgraph.errors import InvalidCycle
from dualgraph.exact_linalg import Matrix, determinant, identity, transpose
from dualgraph.graph_core import (
    Chain1, Cycle, Graph, betti1, boundary, boundary_matrix, coboundary_matrix,
    connected_components, cycle_to_chain, fundamental_cycles, gram_matrix, h1_basis,
    h1_cohom_classes, pairing,
)

RANDOM_GRAPHS = [random_graph(random.Random(seed)) for seed in range(60)]


def test_darts_and_twins(theta):
    assert theta.dart_ids == ("a+", "a-", "b+", "b-", "c+", "c-")
    assert theta.twin("a+") == "a-"
    assert theta.src("a-") == "v"
    assert theta.target("a-") == "u"
    assert theta.edges == ("a+", "b+", "c+")


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError):
        Graph.from_edges(["u", "u"], [])
    with pytest.raises(ValueError):
        Graph.from_edges(["u"], [("a", "u", "u"), ("a", "u", "u")])
    with pytest.raises(ValueError):
        Graph.from_edges(["u"], [("a", "u", "w")])


def test_twin_must_be_involution():
    with pytest.raises(ValueError):
        Graph(["u"], {"x": "u", "y": "u", "z": "u"}, {"x": "y", "y": "z", "z": "x"})


def test_boundary_of_loop_is_zero(loop):
    assert boundary_matrix(loop) == Matrix.zeros(1, 1)
    assert boundary(Chain1.of_darts(loop, ["e+"])).is_zero()


def test_boundary_of_single_edge():
    g = Graph.from_edges(["u", "v"], [("a", "u", "v")])
    assert boundary_matrix(g) == Matrix.from_rows([[-1], [1]])
    assert h1_basis(g).dimension == 0


def test_theta_homology(theta):
    basis = h1_basis(theta)
    assert basis.dimension == 2
    assert basis.basis_matrix == Matrix.from_rows([[1, 0], [0, 1], [-1, -1]])
    assert gram_matrix(basis, h1_cohom_classes(theta)) == identity(2)


def test_single_loop_normalization(loop):
    basis = h1_basis(loop)
    classes = h1_cohom_classes(loop)
    assert basis.basis_matrix == Matrix.from_rows([[1]])
    assert pairing(basis.chains()[0], classes.chains()[0]) == 1


def test_two_gon_basis(two_gon):
    assert h1_basis(two_gon).basis_matrix == Matrix.from_rows([[1], [1]])


def test_chain_antisymmetry(theta):
    x = Chain1(theta, {"a-": 2})
    assert x["a+"] == -2
    assert x.is_antisymmetric()
    assert (x + Chain1.of_darts(theta, ["a+", "a+"])).is_zero()
    assert (-x)["a-"] == -2


def test_cycle_validation(theta):
    assert len(Cycle(theta, ("a+", "b-"))) == 2
    with pytest.raises(InvalidCycle):
        Cycle(theta, ())
    with pytest.raises(InvalidCycle):
        Cycle(theta, ("a+", "b+"))
    with pytest.raises(InvalidCycle):
        Cycle(theta, ("z+",))


def test_cycle_to_chain_accumulates(loop):
    chain = cycle_to_chain(Cycle(loop, ("e+", "e+", "e+")))
    assert chain["e+"] == 3


def test_back_and_forth_walk_cancels(theta):
    assert cycle_to_chain(Cycle(theta, ("a+", "a-"))).is_zero()


def test_pairing_with_twin(theta):
    e, twin = Chain1.of_darts(theta, ["a+"]), Chain1.of_darts(theta, ["a-"])
    assert pairing(e, twin) == -1
    assert pairing(e, e) == 1


def test_cycle_chains_are_cycles(theta):
    chain = cycle_to_chain(Cycle(theta, ("a+", "b-")))
    assert boundary(chain).is_zero()
    assert h1_basis(theta).coordinates(chain) == (1, -1)


def test_coordinates_of_non_cycle(theta):
    assert h1_basis(theta).coordinates(Chain1.of_darts(theta, ["a+"])) is None


def test_components_and_betti():
    g = Graph.from_edges(["a", "b", "c", "d"], [("x", "a", "b"), ("y", "c", "c")])
    assert connected_components(g) == [{"a", "b"}, {"c"}, {"d"}]
    assert betti1(g) == 1


def test_fundamental_cycles_span(theta):
    cycles = fundamental_cycles(theta)
    assert len(cycles) == 2
    vectors = [h1_basis(theta).coordinates(cycle_to_chain(r)) for r in cycles]
    assert determinant(Matrix.from_columns(vectors)) != 0


def test_fundamental_cycles_of_loops_and_trees(loop):
    assert [r.darts for r in fundamental_cycles(loop)] == [("e+",)]
    tree = Graph.from_edges(["u", "v", "w"], [("a", "u", "v"), ("b", "v", "w")])
    assert fundamental_cycles(tree) == []


def test_empty_graph():
    g = Graph.empty()
    assert betti1(g) == 0
    assert h1_basis(g).dimension == 0


@pytest.mark.parametrize("g", RANDOM_GRAPHS)
def test_gram_matrix_is_invertible(g):
    gram = gram_matrix(h1_basis(g), h1_cohom_classes(g))
    assert gram.rows == gram.cols
    assert determinant(gram) != 0


@pytest.mark.parametrize("g", RANDOM_GRAPHS)
def test_coboundary_is_transpose_of_boundary(g):
    assert coboundary_matrix(g) == transpose(boundary_matrix(g))


@pytest.mark.parametrize("g", RANDOM_GRAPHS)
def test_betti_oracle(g):
    expected = len(g.edges) - len(g.vertex_ids) + len(connected_components(g))
    assert h1_basis(g).dimension == expected == betti1(g)


@pytest.mark.parametrize("g", RANDOM_GRAPHS[:20])
def test_fundamental_cycles_form_basis(g):
    basis = h1_basis(g)
    cycles = fundamental_cycles(g)
    assert len(cycles) == basis.dimension
    if cycles:
        coordinates = [basis.coordinates(cycle_to_chain(r)) for r in cycles]
        assert determinant(Matrix.from_columns(coordinates)) != 0


def test_pairing_is_bilinear(theta):
    x = Chain1(theta, {"a+": Fraction(1, 2), "b-": 3})
    y = Chain1(theta, {"a+": 4, "b+": 1})
    assert pairing(x, y) == Fraction(1, 2) * 4 + (-3) * 1
    assert pairing(x * 2, y) == 2 * pairing(x, y)

import random
from collections import Counter
from dataclasses import replace

import pytest

from covers import (
    cycle_graph, cyclic_cover, disjoint_cover, explicit_covers, fold_cover, permutation_cover,
    random_graph, two_weighted_loops_cover, weighted_loop_cover,
)
from dualgraph.errors import InternalError, InvalidCycle, NotAPower, ValidationFailure
from dualgraph.exact_linalg import Matrix, identity, is_identity_multiple, matmul
from dualgraph.flat_morphism import (
    chain_sum, check_adjointness, check_degree_identity, degree_over, identity_morphism,
    image_cycle, lift_cycles, pullback_chain, pullback_h1, pullback_h1cohom, pushforward_h1,
    pushforward_h1cohom, restrict, validate,
)
from dualgraph.config import get_settings
from dualgraph.graph_core import Chain1, Cycle, Graph, boundary, cycle_to_chain, fundamental_cycles

EXPLICIT = explicit_covers()
SEEDS = list(range(20))


def test_identity_is_valid(theta):
    assert validate(identity_morphism(theta)).valid


def test_double_cover_of_loop_is_valid():
    assert validate(cyclic_cover(1, 2)).valid


def test_broken_multiplicity_names_fiber_sum():
    phi = cyclic_cover(1, 2)
    broken = replace(phi, dart_mult={**phi.dart_mult, "f0+": 2, "f0-": 2})
    report = validate(broken)
    assert not report.valid
    assert "fiber-sum" in report.axioms()
    assert any(v.subject == "e0+" for v in report.violations if v.axiom == "fiber-sum")


def test_twin_multiplicity_violation():
    phi = cyclic_cover(1, 2)
    broken = replace(phi, dart_mult={**phi.dart_mult, "f0+": 2})
    assert "twin-multiplicity" in validate(broken).axioms()


def test_missing_image_reported():
    phi = cyclic_cover(2, 2)
    dart_map = dict(phi.dart_map)
    del dart_map["f0+"]
    report = validate(replace(phi, dart_map=dart_map))
    assert report.axioms() == {"dart-map-total"}


def test_non_surjective_dart_map():
    target = cycle_graph(1)
    target_two = Graph.from_edges(["v0"], [("e0", "v0", "v0"), ("x", "v0", "v0")])
    phi = replace(identity_morphism(target), target=target_two)
    axioms = validate(phi).axioms()
    assert "dart-map-surjective" in axioms


def test_twin_compatibility_required():
    theta = Graph.from_edges(["u", "v"], [("a", "u", "v"), ("b", "u", "v")])
    phi = identity_morphism(theta)
    bad = replace(phi, dart_map={**phi.dart_map, "a-": "b-"})
    assert "twin-compatible" in validate(bad).axioms()


def test_fold_cover_is_valid():
    assert validate(fold_cover()).valid


def test_vertex_sum_violation():
    phi = fold_cover()
    bad = replace(phi, vertex_mult={**phi.vertex_mult, "u": 1})
    assert "vertex-sum" in validate(bad).axioms()


def test_image_cycle_and_degree():
    phi = cyclic_cover(1, 2)
    r = Cycle(phi.source, ("f0+", "f1+"))
    image = image_cycle(phi, r)
    assert image.darts == ("e0+", "e0+")
    assert degree_over(phi, r, Cycle(phi.target, ("e0+",))) == 2


def test_degree_over_hexagon():
    phi = cyclic_cover(3, 2)
    r = Cycle(phi.source, tuple(f"f{j}+" for j in range(6)))
    assert degree_over(phi, r, Cycle(phi.target, ("e0+", "e1+", "e2+"))) == 2
    assert degree_over(phi, r, Cycle(phi.target, ("e1+", "e2+", "e0+"))) == 2


def test_degree_over_rejects_other_cycles():
    phi = cyclic_cover(3, 2)
    r = Cycle(phi.source, tuple(f"f{j}+" for j in range(6)))
    with pytest.raises(NotAPower):
        degree_over(phi, r, Cycle(phi.target, ("e2-", "e1-", "e0-")))


def test_identity_lifts_to_itself(theta):
    base = Cycle(theta, ("a+", "b-"))
    assert lift_cycles(identity_morphism(theta), base) == [base]


def test_two_gon_lifts_to_one_cycle():
    phi = cyclic_cover(1, 2)
    lifts = lift_cycles(phi, Cycle(phi.target, ("e0+",)))
    assert [r.darts for r in lifts] == [("f0+", "f1+")]


def test_disjoint_cover_lifts_sheetwise():
    phi = disjoint_cover(cycle_graph(1), 2)
    lifts = lift_cycles(phi, Cycle(phi.target, ("e0+",)))
    assert [r.darts for r in lifts] == [("e0#0+",), ("e0#1+",)]


def test_weighted_loops_lift():
    phi = two_weighted_loops_cover()
    lifts = lift_cycles(phi, Cycle(phi.target, ("e+",)))
    assert [r.darts for r in lifts] == [("f+",), ("g+",), ("g+",)]


def test_pullback_chain_small_covers():
    phi = cyclic_cover(1, 2)
    assert pullback_chain(phi, Cycle(phi.target, ("e0+",))) == Chain1.of_darts(phi.source, ["f0+", "f1+"])
    square = weighted_loop_cover(2)
    assert pullback_chain(square, Cycle(square.target, ("e+",)))["f+"] == 2


def test_lift_rejects_foreign_cycle(theta):
    phi = cyclic_cover(1, 2)
    with pytest.raises(InvalidCycle):
        lift_cycles(phi, Cycle(theta, ("a+", "b-")))


def test_lift_rejects_invalid_morphism():
    phi = cyclic_cover(1, 2)
    broken = replace(phi, degree=3)
    with pytest.raises(ValidationFailure) as info:
        lift_cycles(broken, Cycle(phi.target, ("e0+",)))
    assert "fiber-sum" in {v.axiom for v in info.value.violations}


def test_lift_step_limit(monkeypatch):
    monkeypatch.setenv("DUALGRAPH_LIFT_STEP_LIMIT", "3")
    get_settings.cache_clear()
    phi = cyclic_cover(2, 3)
    with pytest.raises(InternalError):
        lift_cycles(phi, Cycle(phi.target, ("e0+", "e1+")))


def test_lift_step_limit_covers_all_walks(monkeypatch):
    phi = disjoint_cover(cycle_graph(1), 3)
    base = Cycle(phi.target, ("e0+",))
    monkeypatch.setenv("DUALGRAPH_LIFT_STEP_LIMIT", "3")
    get_settings.cache_clear()
    assert len(lift_cycles(phi, base)) == 3
    monkeypatch.setenv("DUALGRAPH_LIFT_STEP_LIMIT", "2")
    get_settings.cache_clear()
    with pytest.raises(InternalError, match="exceeded 2 steps"):
        lift_cycles(phi, base)


def test_push_pull_matrices_two_gon():
    phi = cyclic_cover(1, 2)
    assert pushforward_h1(phi) == Matrix.from_rows([[2]])
    assert pullback_h1(phi) == Matrix.from_rows([[1]])
    assert pushforward_h1cohom(phi) == Matrix.from_rows([[1]])
    assert pullback_h1cohom(phi) == Matrix.from_rows([[2]])


def test_push_pull_matrices_disjoint():
    phi = disjoint_cover(cycle_graph(1), 2)
    assert pushforward_h1(phi) == Matrix.from_rows([[1, 1]])
    assert pullback_h1(phi) == Matrix.from_rows([[1], [1]])


def test_identity_matrices(theta):
    phi = identity_morphism(theta)
    for m in (pushforward_h1(phi), pullback_h1(phi), pushforward_h1cohom(phi), pullback_h1cohom(phi)):
        assert m == identity(2)


def test_restrict_to_subgraphs():
    phi = fold_cover()
    source = phi.source.subgraph(["u", "x1"], ["a1+", "a1-", "b1+", "b1-"])
    restricted = restrict(phi, source, phi.target)
    assert restricted.degree == 2
    assert "fiber-sum" in validate(restricted).axioms()


@pytest.mark.parametrize("name,phi", EXPLICIT, ids=[name for name, _ in EXPLICIT])
def test_degree_identity(name, phi):
    assert is_identity_multiple(matmul(pushforward_h1(phi), pullback_h1(phi)), phi.degree)
    assert check_degree_identity(phi).passed


@pytest.mark.parametrize("name,phi", EXPLICIT, ids=[name for name, _ in EXPLICIT])
def test_adjointness(name, phi):
    assert check_adjointness(phi).passed


@pytest.mark.parametrize("name,phi", EXPLICIT, ids=[name for name, _ in EXPLICIT])
def test_lifting_is_independent_of_choices(name, phi):
    for base in fundamental_cycles(phi.target):
        expected = pullback_chain(phi, base)
        assert boundary(expected).is_zero()
        for seed in SEEDS:
            lifts = lift_cycles(phi, base, seed=seed)
            assert chain_sum((cycle_to_chain(r) for r in lifts), phi.source) == expected
            assert sum(degree_over(phi, r, base) for r in lifts) == phi.degree
            used = Counter(d for r in lifts for d in r.darts)
            for dart in base.darts:
                for lifted in phi.fiber(dart):
                    assert used[lifted] >= phi.dart_mult[lifted]
            if len(set(base.darts)) == len(base.darts):
                over = {d for dart in base.darts for d in phi.fiber(dart)}
                assert used == Counter({d: phi.dart_mult[d] for d in over})


@pytest.mark.parametrize("seed", range(10))
def test_random_permutation_covers(seed):
    rng = random.Random(seed)
    target = random_graph(rng, max_vertices=6, max_edges=10)
    phi = permutation_cover(target, rng.randint(1, 4), rng)
    assert validate(phi).valid
    assert check_degree_identity(phi).passed
    assert check_adjointness(phi).passed
    for base in fundamental_cycles(target):
        first = chain_sum((cycle_to_chain(r) for r in lift_cycles(phi, base)), phi.source)
        for lift_seed in SEEDS[:5]:
            lifts = lift_cycles(phi, base, seed=lift_seed)
            assert chain_sum((cycle_to_chain(r) for r in lifts), phi.source) == first
        assert first == pullback_chain(phi, base)


def test_repeated_base_dart_counts_per_position():
    phi = cyclic_cover(1, 2)
    lifts = lift_cycles(phi, Cycle(phi.target, ("e0+", "e0+")))
    used = Counter(d for r in lifts for d in r.darts)
    assert used == Counter({"f0+": 2, "f1+": 2})
    assert sum(degree_over(phi, r, Cycle(phi.target, ("e0+", "e0+"))) for r in lifts) == 2

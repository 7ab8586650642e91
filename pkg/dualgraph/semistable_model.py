"""
Combinatorial semi-stable coverings of a wide open curve and their dual graphs.

A covering is given by its components (with genus), the connecting annuli
between components and the wide open ends. From it we build

    gamma        one vertex per component, one edge per annulus
    gamma_prime  gamma plus one vertex per end, joined to its component
    gamma_tilde  gamma_prime plus a star vertex joined to every end vertex

and read off the weight-graded dimensions of H^1 of the curve. Covering
morphisms induce finite flat morphisms on gamma_prime and gamma_tilde.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple
import logging

import networkx as nx

from dualgraph.errors import ValidationFailure
from dualgraph.exact_linalg import Matrix, is_identity_multiple, matmul, rank
from dualgraph.flat_morphism import (
    FiniteFlatMorphism, pullback_h1, pullback_h1cohom, pullback_of_chain, pushforward_chain,
    pushforward_h1, pushforward_h1cohom, restrict, validate,
)
from dualgraph.graph_core import Chain1, Graph, betti1, h1_basis
from dualgraph.models import CheckResult, DimensionReport, ValidationReport, Violation

logger = logging.getLogger(__name__)

COMPONENT_PREFIX = "comp:"
END_PREFIX = "end:"
STAR = "star"
ANNULUS_PREFIX = "ann:"
LEG_PREFIX = "leg:"
RAY_PREFIX = "ray:"


@dataclass(frozen=True)
class Component:
    id: str
    genus: int


@dataclass(frozen=True)
class Annulus:
    """Connecting annulus from component a to component b"""
    id: str
    a: str
    b: str


@dataclass(frozen=True)
class End:
    id: str
    component: str


@dataclass(frozen=True)
class CoveringDescription:
    """Geometric dual-graph data of a semi-stable covering"""
    components: Tuple[Component, ...]
    annuli: Tuple[Annulus, ...] = ()
    ends: Tuple[End, ...] = ()

    def component(self, component_id: str) -> Optional[Component]:
        return next((c for c in self.components if c.id == component_id), None)

    def annulus(self, annulus_id: str) -> Optional[Annulus]:
        return next((a for a in self.annuli if a.id == annulus_id), None)

    def end(self, end_id: str) -> Optional[End]:
        return next((e for e in self.ends if e.id == end_id), None)


def component_vertex(component_id: str) -> str:
    return COMPONENT_PREFIX + component_id


def end_vertex(end_id: str) -> str:
    return END_PREFIX + end_id


def _component_graph(c: CoveringDescription) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(comp.id for comp in c.components)
    g.add_edges_from((a.a, a.b) for a in c.annuli if a.a in g and a.b in g)
    return g


def validate_covering(c: CoveringDescription, scope: Optional[str] = None) -> ValidationReport:
    """Unique ids, resolvable references, genus >= 0, connected, at least one end"""
    violations: List[Violation] = []

    def fail(axiom: str, subject: str, message: str):
        violations.append(Violation(axiom=axiom, subject=subject, message=message, scope=scope))

    for kind, ids in (("component", [x.id for x in c.components]),
                      ("annulus", [x.id for x in c.annuli]),
                      ("end", [x.id for x in c.ends])):
        for item_id, count in sorted(Counter(ids).items()):
            if count > 1:
                fail("unique-ids", item_id, f"{kind} id {item_id} used {count} times")
    if not c.components:
        fail("connected", "components", "covering has no components")
    for comp in c.components:
        if comp.genus < 0:
            fail("genus-nonnegative", comp.id, f"component {comp.id} has negative genus {comp.genus}")
    known = {comp.id for comp in c.components}
    for annulus in c.annuli:
        for endpoint in (annulus.a, annulus.b):
            if endpoint not in known:
                fail("unknown-component", annulus.id, f"annulus {annulus.id} meets unknown component {endpoint}")
    for end in c.ends:
        if end.component not in known:
            fail("unknown-component", end.id, f"end {end.id} lies on unknown component {end.component}")
    if not c.ends:
        fail("has-end", "ends", "covering has no ends; proper curves are not wide open")
    if c.components and not nx.is_connected(_component_graph(c)):
        fail("connected", "annuli", "covering not connected")
    return ValidationReport.from_violations(violations)


def require_valid_covering(c: CoveringDescription, role: str = "input"):
    report = validate_covering(c, scope=role)
    if not report.valid:
        if "connected" in report.axioms():
            raise ValidationFailure(f"{role} covering not connected", report.violations)
        raise ValidationFailure(f"{role} covering is invalid", report.violations)


@dataclass(frozen=True)
class GraphTriple:
    """gamma inside gamma_prime inside gamma_tilde; the inclusions keep ids"""
    gamma: Graph
    gamma_prime: Graph
    gamma_tilde: Graph
    star_vertex: str = STAR
    gamma_in_prime: Dict[str, str] = field(default_factory=dict)
    prime_in_tilde: Dict[str, str] = field(default_factory=dict)


def build_graphs(c: CoveringDescription) -> GraphTriple:
    require_valid_covering(c)
    components = [component_vertex(comp.id) for comp in c.components]
    annulus_edges = [(ANNULUS_PREFIX + a.id, component_vertex(a.a), component_vertex(a.b)) for a in c.annuli]
    ends = [end_vertex(e.id) for e in c.ends]
    leg_edges = [(LEG_PREFIX + e.id, component_vertex(e.component), end_vertex(e.id)) for e in c.ends]
    ray_edges = [(RAY_PREFIX + e.id, end_vertex(e.id), STAR) for e in c.ends]

    gamma = Graph.from_edges(components, annulus_edges)
    gamma_prime = Graph.from_edges(components + ends, annulus_edges + leg_edges)
    gamma_tilde = Graph.from_edges(components + ends + [STAR], annulus_edges + leg_edges + ray_edges)
    logger.debug("built dual graphs %r, %r, %r", gamma, gamma_prime, gamma_tilde)

    gamma_in_prime = {x: x for x in gamma.vertex_ids + gamma.dart_ids}
    prime_in_tilde = {x: x for x in gamma_prime.vertex_ids + gamma_prime.dart_ids}
    return GraphTriple(gamma, gamma_prime, gamma_tilde, STAR, gamma_in_prime, prime_in_tilde)


def dimension_report(c: CoveringDescription) -> DimensionReport:
    triple = build_graphs(c)
    w0 = betti1(triple.gamma)
    w1 = sum(2 * comp.genus for comp in c.components)
    w2 = betti1(triple.gamma_tilde)
    return DimensionReport(
        h0=nx.number_connected_components(triple.gamma.to_networkx()),
        w0=w0, w1=w1, w2=w2,
        h1_total=w0 + w1 + w2,
        h1_special=w0 + w1,
    )


def end_pairing_matrix(triple: GraphTriple) -> Matrix:
    """
    Pairings of the H_1(gamma_tilde) basis cycles with the edges of
    gamma_prime: one row per gamma_prime edge, one column per cycle. The rays
    form a tree, so its rank is the weight-2 dimension.
    """
    basis = h1_basis(triple.gamma_tilde)
    rows = triple.gamma_prime.edges
    columns = [[chain[rep] for rep in rows] for chain in basis.chains()]
    return Matrix.from_columns(columns, rows=len(rows))


@dataclass(frozen=True)
class CoveringMorphism:
    """Maps of components, annuli and ends with multiplicities, and the degree"""
    source: CoveringDescription
    target: CoveringDescription
    degree: int
    component_map: Mapping[str, str]
    component_mult: Mapping[str, int]
    annulus_map: Mapping[str, str] = field(default_factory=dict)
    annulus_mult: Mapping[str, int] = field(default_factory=dict)
    annulus_flip: Mapping[str, bool] = field(default_factory=dict)
    end_map: Mapping[str, str] = field(default_factory=dict)
    end_mult: Mapping[str, int] = field(default_factory=dict)


def identity_covering_morphism(c: CoveringDescription) -> CoveringMorphism:
    return CoveringMorphism(
        source=c, target=c, degree=1,
        component_map={x.id: x.id for x in c.components},
        component_mult={x.id: 1 for x in c.components},
        annulus_map={x.id: x.id for x in c.annuli},
        annulus_mult={x.id: 1 for x in c.annuli},
        end_map={x.id: x.id for x in c.ends},
        end_mult={x.id: 1 for x in c.ends},
    )


def validate_covering_morphism(f: CoveringMorphism) -> ValidationReport:
    """Covering-level checks made before the graph morphisms are assembled"""
    violations: List[Violation] = []
    violations += validate_covering(f.source, scope="source").violations
    violations += validate_covering(f.target, scope="target").violations

    def fail(axiom: str, subject: str, message: str):
        violations.append(Violation(axiom=axiom, subject=subject, message=message, scope="covering"))

    if f.degree <= 0:
        fail("degree-positive", "degree", f"degree must be a positive integer, got {f.degree}")

    maps = (
        ("component", f.source.components, f.component_map, f.component_mult, f.target.component),
        ("annulus", f.source.annuli, f.annulus_map, f.annulus_mult, f.target.annulus),
        ("end", f.source.ends, f.end_map, f.end_mult, f.target.end),
    )
    for kind, items, image_map, mults, lookup in maps:
        known = {item.id for item in items}
        for item in items:
            if item.id not in image_map:
                fail(f"{kind}-map-total", item.id, f"source {kind} {item.id} has no image")
            elif lookup(image_map[item.id]) is None:
                fail(f"{kind}-map-total", item.id, f"source {kind} {item.id} maps to unknown {kind} {image_map[item.id]}")
            if mults.get(item.id, 0) <= 0:
                fail("positive-multiplicity", item.id, f"{kind} {item.id} needs a positive multiplicity, got {mults.get(item.id)}")
        for extra in sorted(set(image_map) - known):
            fail(f"{kind}-map-total", extra, f"map names unknown source {kind} {extra}")
    if violations:
        return ValidationReport.from_violations(violations)

    for annulus in f.source.annuli:
        image = f.target.annulus(f.annulus_map[annulus.id])
        a, b = f.component_map[annulus.a], f.component_map[annulus.b]
        expected = (image.b, image.a) if f.annulus_flip.get(annulus.id, False) else (image.a, image.b)
        if (a, b) != expected:
            fail("annulus-incidence", annulus.id,
                 f"annulus {annulus.id} joins components over {a}, {b} but its image {image.id} joins {expected[0]}, {expected[1]}")
    for end in f.source.ends:
        image = f.target.end(f.end_map[end.id])
        if f.component_map[end.component] != image.component:
            fail("end-incidence", end.id,
                 f"end {end.id} lies over {f.component_map[end.component]} but its image {image.id} lies on {image.component}")
    return ValidationReport.from_violations(violations)


def _induced_maps(f: CoveringMorphism, with_star: bool) -> FiniteFlatMorphism:
    source, target = build_graphs(f.source), build_graphs(f.target)
    vertex_map: Dict[str, str] = {}
    vertex_mult: Dict[str, int] = {}
    dart_map: Dict[str, str] = {}
    dart_mult: Dict[str, int] = {}

    def add_edge(edge_id: str, image_id: str, mult: int, flip: bool = False):
        plus, minus = ("-", "+") if flip else ("+", "-")
        dart_map[edge_id + "+"], dart_map[edge_id + "-"] = image_id + plus, image_id + minus
        dart_mult[edge_id + "+"] = dart_mult[edge_id + "-"] = mult

    for comp in f.source.components:
        vertex_map[component_vertex(comp.id)] = component_vertex(f.component_map[comp.id])
        vertex_mult[component_vertex(comp.id)] = f.component_mult[comp.id]
    for annulus in f.source.annuli:
        add_edge(ANNULUS_PREFIX + annulus.id, ANNULUS_PREFIX + f.annulus_map[annulus.id],
                 f.annulus_mult[annulus.id], f.annulus_flip.get(annulus.id, False))
    for end in f.source.ends:
        vertex_map[end_vertex(end.id)] = end_vertex(f.end_map[end.id])
        vertex_mult[end_vertex(end.id)] = f.end_mult[end.id]
        add_edge(LEG_PREFIX + end.id, LEG_PREFIX + f.end_map[end.id], f.end_mult[end.id])
        if with_star:
            add_edge(RAY_PREFIX + end.id, RAY_PREFIX + f.end_map[end.id], f.end_mult[end.id])
    if with_star:
        vertex_map[STAR] = STAR
        vertex_mult[STAR] = f.degree

    if with_star:
        graphs = (source.gamma_tilde, target.gamma_tilde)
    else:
        graphs = (source.gamma_prime, target.gamma_prime)
    return FiniteFlatMorphism(graphs[0], graphs[1], vertex_map, dart_map, vertex_mult, dart_mult, f.degree)


def validate_induced_morphisms(f: CoveringMorphism) -> ValidationReport:
    """Covering-level checks, then every axiom on gamma_prime and on gamma_tilde"""
    report = validate_covering_morphism(f)
    if not report.valid:
        return report
    violations = (validate(_induced_maps(f, with_star=False), scope="gamma_prime").violations
                  + validate(_induced_maps(f, with_star=True), scope="gamma_tilde").violations)
    return ValidationReport.from_violations(violations)


def build_graph_morphism(f: CoveringMorphism) -> Tuple[FiniteFlatMorphism, FiniteFlatMorphism]:
    """The induced finite flat morphisms on gamma_prime and on gamma_tilde"""
    report = validate_covering_morphism(f)
    if not report.valid:
        if any(v.axiom == "connected" and v.scope == "source" for v in report.violations):
            raise ValidationFailure("source covering not connected", report.violations)
        raise ValidationFailure("covering morphism is invalid", report.violations)
    phi = _induced_maps(f, with_star=False)
    phi_tilde = _induced_maps(f, with_star=True)
    violations = validate(phi, scope="gamma_prime").violations + validate(phi_tilde, scope="gamma_tilde").violations
    if violations:
        raise ValidationFailure("induced graph morphism is not finite flat", violations)
    logger.debug("covering morphism of degree %d induces valid graph morphisms", f.degree)
    return phi, phi_tilde


def annulus_transfer_check(f: CoveringMorphism) -> CheckResult:
    """
    Every annulus and end edge e of multiplicity m over e' pushes forward to
    e' and appears with coefficient m in the pullback of e'.
    """
    phi, _ = build_graph_morphism(f)
    failures = []
    for rep in phi.source.edges:
        image = phi.dart_map[rep]
        pushed = pushforward_chain(phi, Chain1.of_darts(phi.source, [rep]))
        pulled = pullback_of_chain(phi, Chain1.of_darts(phi.target, [image]))
        if pushed != Chain1.of_darts(phi.target, [image]):
            failures.append(f"{rep} does not push forward to {image}")
        if pulled[rep] != phi.dart_mult[rep]:
            failures.append(f"{rep} has coefficient {pulled[rep]} in the pullback of {image}, expected {phi.dart_mult[rep]}")
    return CheckResult(
        name="annulus-transfer",
        passed=not failures,
        detail="; ".join(failures) if failures else f"{len(phi.source.edges)} edges transfer with their multiplicities",
    )


@dataclass(frozen=True)
class FunctorialReport:
    """Graded push/pull matrices of a covering morphism and the checks run on them"""
    degree: int
    source: DimensionReport
    target: DimensionReport
    weight0_push: Matrix
    weight0_pull: Matrix
    weight2_push: Matrix
    weight2_pull: Matrix
    checks: List[CheckResult]


def _push_pull_check(name: str, push: Matrix, pull: Matrix, degree: int) -> CheckResult:
    passed = is_identity_multiple(matmul(push, pull), degree)
    return CheckResult(
        name=name,
        passed=passed,
        detail=f"push pull = {degree} id" if passed else f"push pull differs from {degree} id",
    )


def _rank_check(name: str, triple: GraphTriple) -> CheckResult:
    pairing_rank = rank(end_pairing_matrix(triple))
    w2 = betti1(triple.gamma_tilde)
    return CheckResult(
        name=name,
        passed=pairing_rank == w2,
        detail=f"end pairing rank {pairing_rank}, weight-2 dimension {w2}",
    )


def functorial_report(f: CoveringMorphism) -> FunctorialReport:
    """
    Weight 0: the induced maps on H^1(gamma) of the restriction of phi_f.
    Weight 2: the induced maps on H_1(gamma_tilde) of phi_tilde.
    """
    require_valid_covering(f.source, role="source")
    phi, phi_tilde = build_graph_morphism(f)
    source_triple, target_triple = build_graphs(f.source), build_graphs(f.target)

    phi_gamma = restrict(phi, source_triple.gamma, target_triple.gamma)
    restriction = validate(phi_gamma, scope="gamma")
    if not restriction.valid:
        raise ValidationFailure("restriction to gamma is not finite flat", restriction.violations)

    weight0_push, weight0_pull = pushforward_h1cohom(phi_gamma), pullback_h1cohom(phi_gamma)
    weight2_push, weight2_pull = pushforward_h1(phi_tilde), pullback_h1(phi_tilde)
    checks = [
        CheckResult(name="restriction-finite-flat", passed=True,
                    detail=f"phi_f restricts to a degree {f.degree} morphism of gamma"),
        _push_pull_check("weight0-push-pull", weight0_push, weight0_pull, f.degree),
        _push_pull_check("weight2-push-pull", weight2_push, weight2_pull, f.degree),
        _rank_check("end-pairing-source", source_triple),
        _rank_check("end-pairing-target", target_triple),
        annulus_transfer_check(f),
    ]
    logger.info("functorial check: %d of %d checks passed", sum(c.passed for c in checks), len(checks))
    return FunctorialReport(
        degree=f.degree,
        source=dimension_report(f.source),
        target=dimension_report(f.target),
        weight0_push=weight0_push,
        weight0_pull=weight0_pull,
        weight2_push=weight2_push,
        weight2_pull=weight2_pull,
        checks=checks,
    )

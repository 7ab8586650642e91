"""
Finite flat graph morphisms: validation, images of cycles, lifting of cycles
and the induced maps on H_1 and H^1.
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple
import logging

import numpy as np

from dualgraph.config import get_settings
from dualgraph.errors import InternalError, InvalidCycle, NotAPower, ValidationFailure
from dualgraph.exact_linalg import Matrix, apply, inverse, is_identity_multiple, matmul, transpose
from dualgraph.graph_core import (
    Chain1, Cycle, Graph, cycle_to_chain, gram_matrix, h1_basis, h1_cohom_classes, pairing,
)
from dualgraph.models import CheckResult, ValidationReport, Violation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteFlatMorphism:
    """
    Vertex and dart maps with multiplicities n_v, n_e and degree n.

    Axioms (checked by validate): both maps surjective and compatible with
    source, target and twin; n_e = n_twin(e); for every target dart e' the
    sources of the darts above e' cover the vertices above s(e'), the n_e
    above e' sum to n and, grouped by source vertex v, sum to n_v.
    """
    source: Graph
    target: Graph
    vertex_map: Mapping[str, str]
    dart_map: Mapping[str, str]
    vertex_mult: Mapping[str, int]
    dart_mult: Mapping[str, int]
    degree: int

    def fiber(self, target_dart: str) -> Tuple[str, ...]:
        return tuple(d for d in self.source.dart_ids if self.dart_map.get(d) == target_dart)

    def vertex_fiber(self, target_vertex: str) -> Tuple[str, ...]:
        return tuple(v for v in self.source.vertex_ids if self.vertex_map.get(v) == target_vertex)


def identity_morphism(g: Graph) -> FiniteFlatMorphism:
    return FiniteFlatMorphism(
        source=g, target=g,
        vertex_map={v: v for v in g.vertex_ids},
        dart_map={d: d for d in g.dart_ids},
        vertex_mult={v: 1 for v in g.vertex_ids},
        dart_mult={d: 1 for d in g.dart_ids},
        degree=1,
    )


def validate(phi: FiniteFlatMorphism, scope: Optional[str] = None) -> ValidationReport:
    """Check every axiom; violations name the axiom and the offending dart or vertex"""
    violations: List[Violation] = []
    src, tgt = phi.source, phi.target

    def fail(axiom: str, subject: str, message: str):
        violations.append(Violation(axiom=axiom, subject=subject, message=message, scope=scope))

    if not isinstance(phi.degree, int) or phi.degree <= 0:
        fail("degree-positive", "degree", f"degree must be a positive integer, got {phi.degree}")

    for v in src.vertex_ids:
        if v not in phi.vertex_map:
            fail("vertex-map-total", v, f"source vertex {v} has no image")
        elif not tgt.has_vertex(phi.vertex_map[v]):
            fail("vertex-map-total", v, f"source vertex {v} maps to unknown vertex {phi.vertex_map[v]}")
        n_v = phi.vertex_mult.get(v)
        if not isinstance(n_v, int) or n_v <= 0:
            fail("positive-multiplicity", v, f"n_v of vertex {v} must be a positive integer, got {n_v}")
    for d in src.dart_ids:
        if d not in phi.dart_map:
            fail("dart-map-total", d, f"source dart {d} has no image")
        elif not tgt.has_dart(phi.dart_map[d]):
            fail("dart-map-total", d, f"source dart {d} maps to unknown dart {phi.dart_map[d]}")
        n_e = phi.dart_mult.get(d)
        if not isinstance(n_e, int) or n_e <= 0:
            fail("positive-multiplicity", d, f"n_e of dart {d} must be a positive integer, got {n_e}")
    if violations:
        # the remaining axioms are meaningless on partial data
        logger.debug("morphism data incomplete: %d violations", len(violations))
        return ValidationReport.from_violations(violations)

    for w in sorted(set(tgt.vertex_ids) - set(phi.vertex_map.values())):
        fail("vertex-map-surjective", w, f"target vertex {w} has no preimage")
    for e in sorted(set(tgt.dart_ids) - set(phi.dart_map.values())):
        fail("dart-map-surjective", e, f"phi_E not surjective: target dart {e} has no preimage")

    for d in src.dart_ids:
        image = phi.dart_map[d]
        if phi.vertex_map[src.src(d)] != tgt.src(image):
            fail("source-compatible", d, f"phi_V(s({d})) = {phi.vertex_map[src.src(d)]} but s({image}) = {tgt.src(image)}")
        if phi.vertex_map[src.target(d)] != tgt.target(image):
            fail("target-compatible", d, f"phi_V(t({d})) = {phi.vertex_map[src.target(d)]} but t({image}) = {tgt.target(image)}")
        if phi.dart_map[src.twin(d)] != tgt.twin(image):
            fail("twin-compatible", d, f"phi_E({src.twin(d)}) = {phi.dart_map[src.twin(d)]} is not the twin of phi_E({d}) = {image}")
        if phi.dart_mult[d] != phi.dart_mult[src.twin(d)]:
            fail("twin-multiplicity", d, f"n_e = {phi.dart_mult[d]} on {d} but {phi.dart_mult[src.twin(d)]} on {src.twin(d)}")

    fibers: Dict[str, List[str]] = defaultdict(list)
    for d in src.dart_ids:
        fibers[phi.dart_map[d]].append(d)
    for e in tgt.dart_ids:
        fiber = fibers.get(e, [])
        if not fiber:
            continue
        total = sum(phi.dart_mult[d] for d in fiber)
        if total != phi.degree:
            fail("fiber-sum", e, f"fiber sum over {e} is {total}, not the degree {phi.degree}")
        for v in phi.vertex_fiber(tgt.src(e)):
            local = [d for d in fiber if src.src(d) == v]
            if not local:
                fail("fiber-source-surjective", e, f"no dart above {e} starts at {v}, which lies above s({e})")
                continue
            local_sum = sum(phi.dart_mult[d] for d in local)
            if local_sum != phi.vertex_mult[v]:
                fail("vertex-sum", e, f"darts above {e} starting at {v} have multiplicities summing to {local_sum}, not n_v = {phi.vertex_mult[v]}")
        # follows from the source condition on twin(e); reported separately
        for v in phi.vertex_fiber(tgt.target(e)):
            if not any(src.target(d) == v for d in fiber):
                fail("fiber-target-surjective", e, f"no dart above {e} ends at {v}, which lies above t({e})")

    for violation in violations:
        logger.debug("violation [%s] %s", violation.axiom, violation.message)
    return ValidationReport.from_violations(violations)


def require_valid(phi: FiniteFlatMorphism, scope: Optional[str] = None):
    report = validate(phi, scope)
    if not report.valid:
        raise ValidationFailure("morphism is not finite flat", report.violations)


def restrict(phi: FiniteFlatMorphism, source_sub: Graph, target_sub: Graph) -> FiniteFlatMorphism:
    """Restriction to subgraphs; every kept source dart must land in target_sub"""
    for d in source_sub.dart_ids:
        if not target_sub.has_dart(phi.dart_map[d]):
            raise ValueError(f"dart {d} maps outside the target subgraph")
    for v in source_sub.vertex_ids:
        if not target_sub.has_vertex(phi.vertex_map[v]):
            raise ValueError(f"vertex {v} maps outside the target subgraph")
    return FiniteFlatMorphism(
        source=source_sub, target=target_sub,
        vertex_map={v: phi.vertex_map[v] for v in source_sub.vertex_ids},
        dart_map={d: phi.dart_map[d] for d in source_sub.dart_ids},
        vertex_mult={v: phi.vertex_mult[v] for v in source_sub.vertex_ids},
        dart_mult={d: phi.dart_mult[d] for d in source_sub.dart_ids},
        degree=phi.degree,
    )


def image_cycle(phi: FiniteFlatMorphism, r: Cycle) -> Cycle:
    if r.graph != phi.source:
        raise InvalidCycle("cycle does not live on the source graph")
    return Cycle(phi.target, tuple(phi.dart_map[d] for d in r.darts))


def degree_over(phi: FiniteFlatMorphism, r: Cycle, base: Cycle) -> int:
    """deg(R/R'): how many times the image of r wraps the base cycle"""
    image = image_cycle(phi, r).darts
    m = len(base.darts)
    if len(image) % m:
        raise NotAPower(f"image has length {len(image)}, not a multiple of {m}")
    for shift in range(m):
        if all(dart == base.darts[(j + shift) % m] for j, dart in enumerate(image)):
            return len(image) // m
    raise NotAPower("image of the cycle is not a power of the base cycle")


def _check_base(phi: FiniteFlatMorphism, base: Cycle):
    if base.graph != phi.target:
        raise InvalidCycle("base cycle uses darts outside the target graph")


def lift_cycles(phi: FiniteFlatMorphism, base: Cycle, seed: Optional[int] = None) -> List[Cycle]:
    """
    Cycles R_1..R_m above a target cycle R'.

    Each R_i maps onto R' traversed deg(R_i/R') times; every source dart above
    the dart at position i of R' is used n_e times at that position, and the
    degrees sum to n. The walk starts at the smallest source vertex above
    s(R'_0) with darts left, takes darts smallest id first (shuffled by a
    numpy generator when a seed is given) and closes on returning to its start
    at a position divisible by |R'|; a dead end backtracks to the last choice.
    """
    require_valid(phi)
    _check_base(phi, base)
    m = len(base.darts)
    remaining: List[Dict[str, int]] = [
        {d: phi.dart_mult[d] for d in phi.fiber(dart)} for dart in base.darts
    ]
    rng = np.random.default_rng(seed) if seed is not None else None
    step_limit = get_settings().lift_step_limit
    lifts: List[Cycle] = []
    lifted_degree = 0
    steps = 0

    def candidates(position: int, vertex: str) -> List[str]:
        options = sorted(d for d, left in remaining[position].items()
                         if left > 0 and phi.source.src(d) == vertex)
        if rng is not None and len(options) > 1:
            options = [options[i] for i in rng.permutation(len(options))]
        return options

    while any(left > 0 for left in remaining[0].values()):
        start = min(phi.source.src(d) for d, left in remaining[0].items() if left > 0)
        walk: List[str] = []
        stack: List[List[str]] = [candidates(0, start)]
        while True:
            steps += 1
            if steps > step_limit:
                raise InternalError(f"lifting exceeded {step_limit} steps")
            options = stack[-1]
            if not options:
                # dead end: undo the previous choice and try its next option
                stack.pop()
                if not walk:
                    raise InternalError(f"no closed lift of {base.darts} starts at {start}")
                undone = walk.pop()
                remaining[len(walk) % m][undone] += 1
                logger.debug("backtracking over %s", undone)
                continue
            dart = options.pop(0)
            remaining[len(walk) % m][dart] -= 1
            walk.append(dart)
            here = phi.source.target(dart)
            if len(walk) % m == 0 and here == start:
                break
            stack.append(candidates(len(walk) % m, here))
        lift = Cycle(phi.source, tuple(walk))
        lifts.append(lift)
        lifted_degree += len(walk) // m
        logger.debug("lifted cycle %s of degree %d", walk, len(walk) // m)
        for position, left in enumerate(remaining):
            if sum(left.values()) != phi.degree - lifted_degree:
                raise InternalError(
                    f"multiplicity bookkeeping broken at position {position}: "
                    f"{sum(left.values())} left, expected {phi.degree - lifted_degree}"
                )
    return lifts


def pushforward_chain(phi: FiniteFlatMorphism, x: Chain1) -> Chain1:
    """Dart-by-dart image of a chain"""
    if x.graph != phi.source:
        raise ValueError("chain does not live on the source graph")
    terms: Dict[str, Fraction] = defaultdict(Fraction)
    for rep, c in x.by_edge().items():
        if c:
            terms[phi.dart_map[rep]] += c
    return Chain1(phi.target, terms)


def pullback_of_chain(phi: FiniteFlatMorphism, y: Chain1) -> Chain1:
    """Linear pullback e' -> sum of n_e e over the darts e above e'"""
    if y.graph != phi.target:
        raise ValueError("chain does not live on the target graph")
    terms: Dict[str, Fraction] = defaultdict(Fraction)
    for rep, c in y.by_edge().items():
        if c:
            for d in phi.fiber(rep):
                terms[d] += c * phi.dart_mult[d]
    return Chain1(phi.source, terms)


def pullback_chain(phi: FiniteFlatMorphism, base: Cycle) -> Chain1:
    """Sum of n_e e over the darts above the darts of R', position by position"""
    require_valid(phi)
    _check_base(phi, base)
    return pullback_of_chain(phi, cycle_to_chain(base))


def _coordinates(basis, chain: Chain1, what: str) -> Tuple[Fraction, ...]:
    coords = basis.coordinates(chain)
    if coords is None:
        raise InternalError(f"{what} is not a cycle")
    return coords


def pushforward_h1(phi: FiniteFlatMorphism) -> Matrix:
    """phi_*: H_1(source) -> H_1(target) in the deterministic bases"""
    require_valid(phi)
    source_basis, target_basis = h1_basis(phi.source), h1_basis(phi.target)
    columns = [_coordinates(target_basis, pushforward_chain(phi, x), "image of a basis cycle")
               for x in source_basis.chains()]
    return Matrix.from_columns(columns, rows=target_basis.dimension)


def pullback_h1(phi: FiniteFlatMorphism) -> Matrix:
    """phi^*: H_1(target) -> H_1(source) in the deterministic bases"""
    require_valid(phi)
    source_basis, target_basis = h1_basis(phi.source), h1_basis(phi.target)
    columns = [_coordinates(source_basis, pullback_of_chain(phi, y), "pullback of a basis cycle")
               for y in target_basis.chains()]
    return Matrix.from_columns(columns, rows=source_basis.dimension)


def _grams(phi: FiniteFlatMorphism) -> Tuple[Matrix, Matrix]:
    source_gram = gram_matrix(h1_basis(phi.source), h1_cohom_classes(phi.source))
    target_gram = gram_matrix(h1_basis(phi.target), h1_cohom_classes(phi.target))
    return source_gram, target_gram


def pushforward_h1cohom(phi: FiniteFlatMorphism) -> Matrix:
    """phi_*: H^1(source) -> H^1(target), the dual of phi^* on H_1"""
    pull = pullback_h1(phi)
    source_gram, target_gram = _grams(phi)
    return matmul(inverse(target_gram), matmul(transpose(pull), source_gram))


def pullback_h1cohom(phi: FiniteFlatMorphism) -> Matrix:
    """phi^*: H^1(target) -> H^1(source), the dual of phi_* on H_1"""
    push = pushforward_h1(phi)
    source_gram, target_gram = _grams(phi)
    return matmul(inverse(source_gram), matmul(transpose(push), target_gram))


def check_degree_identity(phi: FiniteFlatMorphism) -> CheckResult:
    composite = matmul(pushforward_h1(phi), pullback_h1(phi))
    passed = is_identity_multiple(composite, phi.degree)
    return CheckResult(
        name="push-pull-degree",
        passed=passed,
        detail=f"phi_* phi^* = {phi.degree} id on H_1(target)" if passed
        else f"phi_* phi^* differs from {phi.degree} id",
    )


def check_adjointness(phi: FiniteFlatMorphism) -> CheckResult:
    """
    <phi_* x, xi'> = <x, phi^* xi'> on chain representatives, and the
    matrix forms push^T G_target = G_source pull_cohom and
    pull^T G_source = G_target push_cohom.
    """
    push, pull = pushforward_h1(phi), pullback_h1(phi)
    push_cohom, pull_cohom = pushforward_h1cohom(phi), pullback_h1cohom(phi)
    source_gram, target_gram = _grams(phi)
    matrix_ok = (matmul(transpose(push), target_gram) == matmul(source_gram, pull_cohom)
                 and matmul(transpose(pull), source_gram) == matmul(target_gram, push_cohom))

    source_cycles = h1_basis(phi.source).chains()
    source_classes = h1_cohom_classes(phi.source)
    target_classes = h1_cohom_classes(phi.target).chains()
    chain_ok = True
    for j, xi in enumerate(target_classes):
        pulled = Chain1.from_vector(
            phi.source, source_classes.orientation,
            apply(source_classes.representative_matrix, pull_cohom.column(j)),
        )
        for x in source_cycles:
            if pairing(pushforward_chain(phi, x), xi) != pairing(x, pulled):
                chain_ok = False
    passed = matrix_ok and chain_ok
    return CheckResult(
        name="adjointness",
        passed=passed,
        detail="pairing identities hold" if passed else "pairing identities fail",
    )


def chain_sum(chains: Iterable[Chain1], graph: Graph) -> Chain1:
    total = Chain1(graph)
    for chain in chains:
        total = total + chain
    return total

"""
Report builder turning computed matrices and checks into report models,
and rendering those reports as text or JSON.
"""
from typing import Dict, List, Optional, Sequence
import logging

import pandas as pd
from pydantic import BaseModel

from dualgraph.exact_linalg import Matrix, format_rational, rank
from dualgraph.flat_morphism import (
    FiniteFlatMorphism, check_adjointness, check_degree_identity, chain_sum, degree_over,
    lift_cycles, pullback_chain, pullback_h1, pullback_h1cohom, pushforward_h1,
    pushforward_h1cohom, validate,
)
from dualgraph.graph_core import (
    Chain1, Cycle, Graph, betti1, boundary_matrix, coboundary_matrix, connected_components,
    cycle_to_chain, gram_matrix, h1_basis, h1_cohom_classes,
)
from dualgraph.models import (
    CheckResult, CycleLiftModel, DimsReport, FunctorialCheckReport, GraphSize, HomologyReport,
    LiftedCycleModel, LiftReport, MatrixModel, MorphismCheckReport, PushPullReport,
    ValidateReport, ValidationReport, Violation,
)
from dualgraph.semistable_model import (
    CoveringDescription, CoveringMorphism, annulus_transfer_check, build_graph_morphism,
    build_graphs, dimension_report, end_pairing_matrix, functorial_report,
    validate_covering, validate_induced_morphisms,
)

logger = logging.getLogger(__name__)


def labels(prefix: str, count: int) -> List[str]:
    return [f"{prefix}{i + 1}" for i in range(count)]


def matrix_model(m: Matrix, row_labels: Sequence[str], column_labels: Sequence[str]) -> MatrixModel:
    return MatrixModel(
        row_labels=list(row_labels),
        column_labels=list(column_labels),
        entries=[[format_rational(x) for x in row] for row in m.entries],
    )


def chain_terms(x: Chain1) -> Dict[str, str]:
    """Nonzero coefficients on representative darts"""
    return {rep: format_rational(c) for rep, c in x.by_edge().items() if c != 0}


def graph_size(g: Graph) -> GraphSize:
    return GraphSize(vertices=len(g.vertex_ids), edges=len(g.edges), betti1=betti1(g))


class ReportBuilder:
    """Build the report of each command"""

    def __init__(self, include_matrices: bool = True):
        self.include_matrices = include_matrices

    def _matrix(self, m: Matrix, row_labels, column_labels) -> Optional[MatrixModel]:
        if not self.include_matrices:
            return None
        return matrix_model(m, row_labels, column_labels)

    def homology(self, g: Graph) -> HomologyReport:
        basis = h1_basis(g)
        classes = h1_cohom_classes(g)
        edges = list(basis.orientation.representatives)
        cycles = labels("z", basis.dimension)
        cocycles = labels("xi", classes.dimension)
        return HomologyReport(
            vertices=len(g.vertex_ids),
            edges=len(g.edges),
            components=len(connected_components(g)),
            betti1=basis.dimension,
            boundary=self._matrix(boundary_matrix(g), g.vertex_ids, edges),
            coboundary=self._matrix(coboundary_matrix(g), edges, g.vertex_ids),
            h1_basis=self._matrix(basis.basis_matrix, edges, cycles),
            h1_cohom_classes=self._matrix(classes.representative_matrix, edges, cocycles),
            gram=self._matrix(gram_matrix(basis, classes), cycles, cocycles),
        )

    def lift(self, phi: FiniteFlatMorphism, base_cycles: Sequence[Cycle], seed: Optional[int] = None) -> LiftReport:
        cycles = []
        for base in base_cycles:
            lifts = lift_cycles(phi, base, seed=seed)
            summed = chain_sum((cycle_to_chain(r) for r in lifts), phi.source)
            expected = pullback_chain(phi, base)
            lifted = [LiftedCycleModel(darts=list(r.darts), degree=degree_over(phi, r, base)) for r in lifts]
            cycles.append(CycleLiftModel(
                base_cycle=list(base.darts),
                lifts=lifted,
                degree_sum=sum(x.degree for x in lifted),
                summed_chain=chain_terms(summed),
                pullback_chain=chain_terms(expected),
                agrees=summed == expected,
            ))
        return LiftReport(degree=phi.degree, seed=seed, cycles=cycles)

    def push(self, phi: FiniteFlatMorphism) -> PushPullReport:
        source_dim, target_dim = h1_basis(phi.source).dimension, h1_basis(phi.target).dimension
        return PushPullReport(
            command="push",
            degree=phi.degree,
            source_betti1=source_dim,
            target_betti1=target_dim,
            h1=self._matrix(pushforward_h1(phi), labels("z'", target_dim), labels("z", source_dim)),
            h1_cohom=self._matrix(pushforward_h1cohom(phi), labels("xi'", target_dim), labels("xi", source_dim)),
        )

    def pull(self, phi: FiniteFlatMorphism) -> PushPullReport:
        source_dim, target_dim = h1_basis(phi.source).dimension, h1_basis(phi.target).dimension
        return PushPullReport(
            command="pull",
            degree=phi.degree,
            source_betti1=source_dim,
            target_betti1=target_dim,
            h1=self._matrix(pullback_h1(phi), labels("z", source_dim), labels("z'", target_dim)),
            h1_cohom=self._matrix(pullback_h1cohom(phi), labels("xi", source_dim), labels("xi'", target_dim)),
        )

    def dims(self, c: CoveringDescription) -> DimsReport:
        triple = build_graphs(c)
        pairing = end_pairing_matrix(triple)
        return DimsReport(
            dimensions=dimension_report(c),
            gamma=graph_size(triple.gamma),
            gamma_prime=graph_size(triple.gamma_prime),
            gamma_tilde=graph_size(triple.gamma_tilde),
            end_pairing_rank=rank(pairing),
            end_pairing=self._matrix(pairing, triple.gamma_prime.edges, labels("z", pairing.cols)),
        )

    def validation(self, kind: str, subject) -> ValidateReport:
        if isinstance(subject, FiniteFlatMorphism):
            report = validate(subject)
        elif isinstance(subject, CoveringMorphism):
            report = validate_induced_morphisms(subject)
        elif isinstance(subject, CoveringDescription):
            report = validate_covering(subject)
        else:
            # a graph that loaded is a valid graph
            report = ValidationReport(valid=True)
        return ValidateReport(kind=kind, validation=report)

    def morphism_check(self, kind: str, subject) -> MorphismCheckReport:
        if isinstance(subject, CoveringMorphism):
            report = validate_induced_morphisms(subject)
            checks: List[CheckResult] = []
            if report.valid:
                phi, phi_tilde = build_graph_morphism(subject)
                for scope, morphism in (("gamma_prime", phi), ("gamma_tilde", phi_tilde)):
                    for check in (check_degree_identity(morphism), check_adjointness(morphism)):
                        checks.append(check.model_copy(update={"name": f"{scope}:{check.name}"}))
                checks.append(annulus_transfer_check(subject))
            return MorphismCheckReport(kind=kind, degree=subject.degree, validation=report, checks=checks)
        report = validate(subject)
        checks = [check_degree_identity(subject), check_adjointness(subject)] if report.valid else []
        return MorphismCheckReport(kind=kind, degree=subject.degree, validation=report, checks=checks)

    def functorial_check(self, f: CoveringMorphism) -> FunctorialCheckReport:
        result = functorial_report(f)
        w0_source, w0_target = result.source.w0, result.target.w0
        w2_source, w2_target = result.source.w2, result.target.w2
        return FunctorialCheckReport(
            degree=result.degree,
            source=result.source,
            target=result.target,
            weight0_push=self._matrix(result.weight0_push, labels("xi'", w0_target), labels("xi", w0_source)),
            weight0_pull=self._matrix(result.weight0_pull, labels("xi", w0_source), labels("xi'", w0_target)),
            weight2_push=self._matrix(result.weight2_push, labels("z'", w2_target), labels("z", w2_source)),
            weight2_pull=self._matrix(result.weight2_pull, labels("z", w2_source), labels("z'", w2_target)),
            checks=result.checks,
        )


# Rendering

def render_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2, exclude_none=True)


def render_matrix(m: MatrixModel) -> str:
    if not m.row_labels or not m.column_labels:
        return f"(empty {len(m.row_labels)} x {len(m.column_labels)} matrix)"
    frame = pd.DataFrame(m.entries, index=m.row_labels, columns=m.column_labels)
    return frame.to_string()


def _render(name: str, value, lines: List[str], indent: str = ""):
    if value is None:
        return
    if isinstance(value, MatrixModel):
        lines.append(f"{indent}{name}:")
        lines.extend(f"{indent}  {line}" for line in render_matrix(value).splitlines())
    elif isinstance(value, CheckResult):
        status = "PASS" if value.passed else "FAIL"
        lines.append(f"{indent}{status} {value.name}" + (f": {value.detail}" if value.detail else ""))
    elif isinstance(value, Violation):
        scope = f"{value.scope} " if value.scope else ""
        lines.append(f"{indent}{scope}[{value.axiom}] {value.message}")
    elif isinstance(value, BaseModel):
        lines.append(f"{indent}{name}:")
        for field_name in type(value).model_fields:
            _render(field_name, getattr(value, field_name), lines, indent + "  ")
    elif isinstance(value, dict):
        lines.append(f"{indent}{name}:" + ("" if value else " {}"))
        for key in sorted(value):
            lines.append(f"{indent}  {key} = {value[key]}")
    elif isinstance(value, list):
        if not value:
            lines.append(f"{indent}{name}: none")
        elif isinstance(value[0], BaseModel):
            lines.append(f"{indent}{name}:")
            for i, item in enumerate(value):
                _render(f"{name}[{i}]", item, lines, indent + "  ")
        else:
            lines.append(f"{indent}{name} = " + " ".join(str(x) for x in value))
    elif isinstance(value, bool):
        lines.append(f"{indent}{name} = {'yes' if value else 'no'}")
    else:
        lines.append(f"{indent}{name} = {value}")


def render_text(report: BaseModel) -> str:
    lines: List[str] = []
    for field_name in type(report).model_fields:
        _render(field_name, getattr(report, field_name), lines)
    return "\n".join(lines) + "\n"

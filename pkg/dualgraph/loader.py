"""
JSON file loader to build graphs, morphisms and coverings from input files.
Handles the four document kinds and resolves file references.
"""
from pathlib import Path
from typing import Dict, Optional, Sequence, Union
import json
import logging

from pydantic import BaseModel, ValidationError

from dualgraph.errors import InputError
from dualgraph.flat_morphism import FiniteFlatMorphism
from dualgraph.graph_core import MINUS, PLUS, Graph
from dualgraph.models import (
    CoveringDocument, CoveringMorphismDocument, GraphDocument, MorphismDocument,
)
from dualgraph.semistable_model import (
    Annulus, Component, CoveringDescription, CoveringMorphism, End,
)

logger = logging.getLogger(__name__)

GRAPH = "graph"
MORPHISM = "morphism"
COVERING = "covering"
COVERING_MORPHISM = "covering-morphism"

DOCUMENT_MODELS = {
    GRAPH: GraphDocument,
    MORPHISM: MorphismDocument,
    COVERING: CoveringDocument,
    COVERING_MORPHISM: CoveringMorphismDocument,
}


def _decisive_kind(data: Dict) -> Optional[str]:
    if "component_map" in data:
        return COVERING_MORPHISM
    if "components" in data:
        return COVERING
    if "vertex_map" in data or "edge_map" in data:
        return MORPHISM
    if "vertices" in data:
        return GRAPH
    return None


def closest_kind(data: Dict, kinds: Sequence[str] = tuple(DOCUMENT_MODELS)) -> Optional[str]:
    """Kind whose schema shares the most top-level keys with data; None if none shares any"""
    scores = {kind: len(set(data) & set(DOCUMENT_MODELS[kind].model_fields)) for kind in kinds}
    best = max(kinds, key=lambda kind: scores[kind], default=None)
    return best if best is not None and scores[best] > 0 else None


def detect_kind(data: Dict, expected: Sequence[str] = ()) -> str:
    """
    Document kind from its top-level keys.

    A document without the key that identifies its kind is read as the only
    expected kind, or else as the closest kind, so schema validation can name
    the missing field.
    """
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    kind = _decisive_kind(data)
    if kind is None and len(expected) == 1:
        kind = expected[0]
    if kind is None:
        kind = closest_kind(data, expected or tuple(DOCUMENT_MODELS))
    if kind is None:
        raise InputError(f"cannot tell the document kind from keys {sorted(data)}")
    return kind


class DocumentLoader:
    """Load one JSON input file and turn it into domain objects"""

    def __init__(self, file_path: Union[str, Path]):
        self.file_path = Path(file_path)
        self.data = None
        self.kind = None

    def load_file(self, expected: Sequence[str] = ()):
        """Read and parse the file; `expected` lists the kinds the caller can use"""
        if not self.file_path.exists():
            raise InputError(f"file not found: {self.file_path}")
        try:
            text = self.file_path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise InputError(f"cannot read {self.file_path}: {e}") from e
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"{self.file_path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
        self.kind = detect_kind(self.data, expected)
        logger.debug("loaded %s document from %s", self.kind, self.file_path)
        return self

    def document(self, expected_kind: str = None) -> BaseModel:
        """Validate the parsed data against the schema of its kind"""
        if self.data is None:
            self.load_file((expected_kind,) if expected_kind else ())
        kind = expected_kind or self.kind
        if expected_kind and self.kind != expected_kind:
            raise InputError(f"{self.file_path}: expected a {expected_kind} document, found a {self.kind} document")
        try:
            return DOCUMENT_MODELS[kind].model_validate(self.data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise InputError(f"{self.file_path}: field {location}: {first['msg']}") from e

    def resolve(self, reference: str) -> Path:
        """Paths inside a document are relative to the document itself"""
        path = Path(reference)
        return path if path.is_absolute() else self.file_path.parent / path

    def to_graph(self) -> Graph:
        doc: GraphDocument = self.document(GRAPH)
        try:
            graph = Graph.from_edges(doc.vertices, [(e.id, e.src, e.dst) for e in doc.edges])
        except ValueError as e:
            raise InputError(f"{self.file_path}: {e}") from e
        logger.debug("graph %s has %d vertices and %d edges", self.file_path.name, len(graph.vertex_ids), len(graph.edges))
        return graph

    def to_morphism(self) -> FiniteFlatMorphism:
        doc: MorphismDocument = self.document(MORPHISM)
        source = DocumentLoader(self.resolve(doc.source)).to_graph()
        target = DocumentLoader(self.resolve(doc.target)).to_graph()
        source_edges = {rep[:-1] for rep in source.edges}

        dart_map: Dict[str, str] = {}
        dart_mult: Dict[str, int] = {}
        for edge_id, image in doc.edge_map.items():
            if edge_id not in source_edges:
                raise InputError(f"{self.file_path}: field edge_map.{edge_id}: unknown source edge")
            plus, minus = (MINUS, PLUS) if image.flip else (PLUS, MINUS)
            dart_map[edge_id + PLUS] = image.to + plus
            dart_map[edge_id + MINUS] = image.to + minus
        for edge_id, mult in doc.edge_mult.items():
            if edge_id not in source_edges:
                raise InputError(f"{self.file_path}: field edge_mult.{edge_id}: unknown source edge")
            dart_mult[edge_id + PLUS] = dart_mult[edge_id + MINUS] = mult
        for field_name, mapping in (("vertex_map", doc.vertex_map), ("vertex_mult", doc.vertex_mult)):
            for vertex in mapping:
                if not source.has_vertex(vertex):
                    raise InputError(f"{self.file_path}: field {field_name}.{vertex}: unknown source vertex")

        return FiniteFlatMorphism(
            source=source,
            target=target,
            vertex_map=dict(doc.vertex_map),
            dart_map=dart_map,
            vertex_mult=dict(doc.vertex_mult),
            dart_mult=dart_mult,
            degree=doc.degree,
        )

    def to_covering(self) -> CoveringDescription:
        doc: CoveringDocument = self.document(COVERING)
        return CoveringDescription(
            components=tuple(Component(c.id, c.genus) for c in doc.components),
            annuli=tuple(Annulus(a.id, a.a, a.b) for a in doc.annuli),
            ends=tuple(End(e.id, e.component) for e in doc.ends),
        )

    def to_covering_morphism(self) -> CoveringMorphism:
        doc: CoveringMorphismDocument = self.document(COVERING_MORPHISM)
        return CoveringMorphism(
            source=DocumentLoader(self.resolve(doc.source)).to_covering(),
            target=DocumentLoader(self.resolve(doc.target)).to_covering(),
            degree=doc.degree,
            component_map={k: v.to for k, v in doc.component_map.items()},
            component_mult={k: v.mult for k, v in doc.component_map.items()},
            annulus_map={k: v.to for k, v in doc.annulus_map.items()},
            annulus_mult={k: v.mult for k, v in doc.annulus_map.items()},
            annulus_flip={k: v.flip for k, v in doc.annulus_map.items()},
            end_map={k: v.to for k, v in doc.end_map.items()},
            end_mult={k: v.mult for k, v in doc.end_map.items()},
        )

    def load(self):
        """Domain object for whatever kind of document the file holds"""
        if self.data is None:
            self.load_file()
        builders = {
            GRAPH: self.to_graph,
            MORPHISM: self.to_morphism,
            COVERING: self.to_covering,
            COVERING_MORPHISM: self.to_covering_morphism,
        }
        return builders[self.kind]()


def load_graph(file_path: Union[str, Path]) -> Graph:
    return DocumentLoader(file_path).to_graph()


def load_morphism(file_path: Union[str, Path]) -> FiniteFlatMorphism:
    return DocumentLoader(file_path).to_morphism()


def load_covering(file_path: Union[str, Path]) -> CoveringDescription:
    return DocumentLoader(file_path).to_covering()


def load_covering_morphism(file_path: Union[str, Path]) -> CoveringMorphism:
    return DocumentLoader(file_path).to_covering_morphism()

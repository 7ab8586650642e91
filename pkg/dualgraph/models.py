"""
Pydantic models for input documents and output reports.
"""
from pydantic import BaseModel, ConfigDict, StrictBool, StrictInt, StrictStr
from typing import Dict, List, Optional, Set


class Document(BaseModel):
    """Base for JSON input documents; unknown keys are rejected"""
    model_config = ConfigDict(extra="forbid")


class EdgeDocument(Document):
    """One edge of a graph file; darts are <id>+ (src to dst) and <id>- (dst to src)"""
    id: StrictStr
    src: StrictStr
    dst: StrictStr


class GraphDocument(Document):
    """Graph file"""
    vertices: List[StrictStr]
    edges: List[EdgeDocument] = []


class EdgeImage(Document):
    """Image of a source edge; flip sends the + dart to the target - dart"""
    to: StrictStr
    flip: StrictBool = False


class MorphismDocument(Document):
    """Finite flat graph morphism file; source and target are paths relative to it"""
    source: StrictStr
    target: StrictStr
    degree: StrictInt
    vertex_map: Dict[StrictStr, StrictStr]
    edge_map: Dict[StrictStr, EdgeImage]
    vertex_mult: Dict[StrictStr, StrictInt]
    edge_mult: Dict[StrictStr, StrictInt]


class ComponentDocument(Document):
    id: StrictStr
    genus: StrictInt


class AnnulusDocument(Document):
    """Connecting annulus between components a and b (a == b for a self-annulus)"""
    id: StrictStr
    a: StrictStr
    b: StrictStr


class EndDocument(Document):
    """Wide open end attached to a component"""
    id: StrictStr
    component: StrictStr


class CoveringDocument(Document):
    """Combinatorial semi-stable covering file"""
    components: List[ComponentDocument]
    annuli: List[AnnulusDocument] = []
    ends: List[EndDocument] = []


class ComponentImage(Document):
    to: StrictStr
    mult: StrictInt


class AnnulusImage(Document):
    to: StrictStr
    mult: StrictInt
    flip: StrictBool = False


class EndImage(Document):
    to: StrictStr
    mult: StrictInt


class CoveringMorphismDocument(Document):
    """Covering-compatible morphism file; source and target are covering paths"""
    source: StrictStr
    target: StrictStr
    degree: StrictInt
    component_map: Dict[StrictStr, ComponentImage]
    annulus_map: Dict[StrictStr, AnnulusImage] = {}
    end_map: Dict[StrictStr, EndImage] = {}


# Validation

class Violation(BaseModel):
    """One failed axiom, naming the offending dart or vertex"""
    axiom: str
    subject: str
    message: str
    scope: Optional[str] = None


class ValidationReport(BaseModel):
    """Result of checking a morphism or covering against its axioms"""
    valid: bool
    violations: List[Violation] = []

    @classmethod
    def from_violations(cls, violations: List[Violation]) -> "ValidationReport":
        return cls(valid=not violations, violations=violations)

    def axioms(self) -> Set[str]:
        return {v.axiom for v in self.violations}


class CheckResult(BaseModel):
    """Outcome of one identity checked on computed matrices"""
    name: str
    passed: bool
    detail: str = ""


# Reports

class MatrixModel(BaseModel):
    """Matrix with labelled rows and columns; entries are "p" or "p/q" strings"""
    row_labels: List[str]
    column_labels: List[str]
    entries: List[List[str]]


class DimensionReport(BaseModel):
    """Weight-graded dimensions of H^1 of a wide open curve"""
    h0: int
    w0: int
    w1: int
    w2: int
    h1_total: int
    h1_special: int
    weight2_twist: str = "(-1)"


class GraphSize(BaseModel):
    vertices: int
    edges: int
    betti1: int


class HomologyReport(BaseModel):
    command: str = "homology"
    vertices: int
    edges: int
    components: int
    betti1: int
    boundary: Optional[MatrixModel] = None
    coboundary: Optional[MatrixModel] = None
    h1_basis: Optional[MatrixModel] = None
    h1_cohom_classes: Optional[MatrixModel] = None
    gram: Optional[MatrixModel] = None


class LiftedCycleModel(BaseModel):
    darts: List[str]
    degree: int


class CycleLiftModel(BaseModel):
    base_cycle: List[str]
    lifts: List[LiftedCycleModel]
    degree_sum: int
    summed_chain: Dict[str, str]
    pullback_chain: Dict[str, str]
    agrees: bool


class LiftReport(BaseModel):
    command: str = "lift"
    degree: int
    seed: Optional[int] = None
    cycles: List[CycleLiftModel]


class PushPullReport(BaseModel):
    command: str
    degree: int
    source_betti1: int
    target_betti1: int
    h1: Optional[MatrixModel] = None
    h1_cohom: Optional[MatrixModel] = None


class DimsReport(BaseModel):
    command: str = "dims"
    dimensions: DimensionReport
    gamma: GraphSize
    gamma_prime: GraphSize
    gamma_tilde: GraphSize
    end_pairing_rank: int
    end_pairing: Optional[MatrixModel] = None


class ValidateReport(BaseModel):
    command: str = "validate"
    kind: str
    validation: ValidationReport


class MorphismCheckReport(BaseModel):
    command: str = "morphism-check"
    kind: str
    degree: int
    validation: ValidationReport
    checks: List[CheckResult] = []


class FunctorialCheckReport(BaseModel):
    command: str = "functorial-check"
    degree: int
    source: DimensionReport
    target: DimensionReport
    weight0_push: Optional[MatrixModel] = None
    weight0_pull: Optional[MatrixModel] = None
    weight2_push: Optional[MatrixModel] = None
    weight2_pull: Optional[MatrixModel] = None
    checks: List[CheckResult] = []

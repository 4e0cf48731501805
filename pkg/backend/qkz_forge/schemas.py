"""Pydantic schemas for the JSON documents written by the CLI."""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class FieldElemModel(BaseModel):
    """Schema for a reduced rational function."""
    num: str
    den: str


class LaurentTermModel(BaseModel):
    """Schema for one term of a Laurent polynomial."""
    exp: List[int]
    coeff: FieldElemModel


class LaurentPolyModel(BaseModel):
    """Schema for a sparse Laurent polynomial."""
    n: int
    terms: List[LaurentTermModel] = []


class GraphEdgeModel(BaseModel):
    """Schema for a labelled graph edge (indices into the vertex list)."""
    model_config = ConfigDict(populate_by_name=True)

    from_: int = Field(..., alias="from")
    to: int
    label: int


class GraphModel(BaseModel):
    """Schema for an admissibility graph."""
    vertices: List[List[int]] = []
    edges: List[GraphEdgeModel] = []


class CheckModel(BaseModel):
    """Schema for one verified identity."""
    relation: str
    holds: bool


class KoornwinderModel(BaseModel):
    """Schema for a computed Koornwinder polynomial."""
    model_config = ConfigDict(populate_by_name=True)

    lambda_: List[int] = Field(..., alias="lambda")
    poly: LaurentPolyModel
    eigenvalues: List[FieldElemModel] = []


class KLVectorModel(BaseModel):
    """Schema for a Kazhdan-Lusztig basis vector."""
    epsilon: str
    basis: str
    expansion: Dict[str, FieldElemModel] = {}


class QkzStateModel(BaseModel):
    """Schema for a solved qKZ state."""
    case: str
    N: int
    basis: str
    spec: Dict[str, FieldElemModel] = {}
    constraint: Optional[Dict[str, FieldElemModel]] = None
    components: Dict[str, LaurentPolyModel] = {}


class ReportModel(BaseModel):
    """Schema for a CLI report: verified identities plus an optional payload."""
    command: str
    checks: List[CheckModel] = []
    payload: Optional[dict] = None


class RunConfig(BaseModel):
    """Validated command-line input."""
    command: str
    N: int = Field(2, ge=1, le=6)
    r: int = Field(1, ge=1)
    J: int = Field(1, ge=1)
    sign: Literal["+", "-"] = "+"
    basis: str = "BII"
    M: Optional[int] = Field(None, ge=1)
    case: Literal["one", "two"] = "two"
    omega: Literal[1, -1] = 1
    seed: int = 0
    ehat_convention: Literal["boundary-param", "uniform-q"] = "boundary-param"
    family: Literal["nu", "xi0", "xi1", "xiplus"] = "nu"
    graph: bool = False
    weight: Optional[List[int]] = None
    out: Optional[str] = None
    verbosity: int = 0

    @field_validator("basis")
    @classmethod
    def basis_known(cls, value: str) -> str:
        if value in ("BII", "BIII"):
            return value
        if value.startswith("BI:") and value[3:].isdigit() and int(value[3:]) >= 1:
            return value
        if value == "BI":
            return value
        raise ValueError("basis must be BI:M, BII or BIII")

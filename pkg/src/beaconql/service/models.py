"""Request/response bodies for the HTTP API."""
from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class QuestionRequest(BaseModel):
    question: str
    workflow: Optional[Literal["parallel", "multistep"]] = None


class FieldState(BaseModel):
    value: Optional[str] = None
    status: str = "unknown"
    reason: str = ""


class VariantModel(BaseModel):
    assembly_id: Optional[str] = None
    reference_name: Optional[str] = None
    start: list[int] = Field(default_factory=list)
    end: list[int] = Field(default_factory=list)
    reference_bases: Optional[str] = None
    alternate_bases: Optional[str] = None
    gene_id: Optional[str] = None


class FilterModel(BaseModel):
    filter_type: str = "custom"
    id: Optional[str] = None
    value: Optional[str] = None
    term: str = ""
    scope: str = "unknown"


class Card(BaseModel):
    scope: FieldState
    granularity: FieldState
    variant: Optional[VariantModel] = None
    variant_status: FieldState = Field(default_factory=FieldState)
    filters: list[FilterModel] = Field(default_factory=list)
    filters_status: FieldState = Field(default_factory=FieldState)
    residue: list[str] = Field(default_factory=list)
    editable: bool = True


class UsageModel(BaseModel):
    prompt_tokens: int = 0
    completion_tokens: int = 0


class QuestionResponse(BaseModel):
    kind: Literal["card", "refusal", "greeting"]
    state: str
    card: Optional[Card] = None
    reply: Optional[str] = None
    reason: Optional[str] = None
    usage: UsageModel = Field(default_factory=UsageModel)


class ConfirmRequest(BaseModel):
    scope: Optional[str] = None
    granularity: Optional[str] = None
    variant: Optional[VariantModel] = None
    filters: list[FilterModel] = Field(default_factory=list)


class ColumnModel(BaseModel):
    name: str
    kind: str


class ConfirmResponse(BaseModel):
    kind: Literal["record", "count", "boolean"]
    state: str
    count: Optional[int] = None
    exists: Optional[bool] = None
    row_count: Optional[int] = None
    columns: Optional[list[ColumnModel]] = None
    rows: Optional[list[list[Any]]] = None
    payload: dict[str, Any]


class AnalysisRequest(BaseModel):
    request: str


class ViolationModel(BaseModel):
    rule: str
    line: int
    excerpt: str


class GuardModel(BaseModel):
    verdict: str
    violations: list[ViolationModel] = Field(default_factory=list)


class ArtifactModel(BaseModel):
    code: str
    files: list[str] = Field(default_factory=list)
    assumptions: list[str] = Field(default_factory=list)
    feedback: list[str] = Field(default_factory=list)


class AnalysisResponse(BaseModel):
    state: str
    artifact: ArtifactModel
    guard: GuardModel


class RunAnalysisRequest(BaseModel):
    code: str


class RunAnalysisResponse(BaseModel):
    state: str
    stdout: str
    stderr: str
    exit_status: int
    files: list[str] = Field(default_factory=list)
    undeclared_files: list[str] = Field(default_factory=list)
    wall_time: float


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: Any = None

"""Request and response schemas for the service.

Functions travel as text literals (``periodic n=4 d=0 t=2``, ``sym n=3
layers=0,2``, ``table n=2 bits=f``), formulas as s-expressions, signatures in
the ``name := literal`` line format, family descriptors as JSON objects.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class CapsOverride(BaseModel):
    max_nvars: Optional[int] = None
    max_generator_arity: Optional[int] = None
    max_derived: Optional[int] = None
    max_formula_depth: Optional[int] = None
    max_formula_nodes: Optional[int] = None
    max_general_args: Optional[int] = None


class PeriodRequest(BaseModel):
    function: str


class ProfileModel(BaseModel):
    n: int
    d: int
    t: int


class PeriodResponse(BaseModel):
    periodic: bool
    profile: Optional[ProfileModel] = None
    layers: list[int]
    is_indicator: bool


class MakeFnRequest(BaseModel):
    kind: Literal["periodic", "sym", "table"]
    n: int
    d: Optional[int] = None
    t: Optional[int] = None
    layers: Optional[list[int]] = None
    bits: Optional[str] = None  # hex


class MakeFnResponse(BaseModel):
    literal: str
    layers: Optional[list[int]] = None
    profile: Optional[ProfileModel] = None
    is_indicator: bool
    table_bits: Optional[str] = None


class EvalRequest(BaseModel):
    function: Optional[str] = None
    formula: Optional[str] = None
    signature: Optional[str] = None
    nvars: Optional[int] = None
    point: list[int]


class EvalResponse(BaseModel):
    value: int


class CertificateModel(BaseModel):
    t: int
    q: int
    k: int
    s: Optional[int] = None


class MemberRequest(BaseModel):
    f: str
    g: str
    with_indicators: bool = False
    method: Literal["criteria", "oracle", "both"] = "criteria"
    caps: Optional[CapsOverride] = None


class MemberResponse(BaseModel):
    verdict: str  # yes | no | inapplicable | incomplete
    branch: Optional[str] = None
    certificate: Optional[CertificateModel] = None
    reason: Optional[str] = None
    oracle_verdict: Optional[str] = None
    witness: Optional[str] = None
    agreement: Optional[bool] = None


class ClosureRequest(BaseModel):
    generators: list[str]
    nvars: int
    caps: Optional[CapsOverride] = None


class DerivedModel(BaseModel):
    table: str  # function literal over nvars
    variables: list[int]
    witness: str


class ClosureResponse(BaseModel):
    complete: bool
    round_sizes: list[int]
    count: int
    functions: list[DerivedModel]


class ThetaRequest(BaseModel):
    formula: str
    signature: str = ""
    nvars: int
    caps: Optional[CapsOverride] = None


class ThetaOccurrence(BaseModel):
    path: list[int]
    head: str


class ThetaResponse(BaseModel):
    functions: list[str]
    occurrences: list[ThetaOccurrence]


class RewriteRequest(BaseModel):
    formula: str


class RewriteResponse(BaseModel):
    formula: str
    changed: bool


class ClassifyRequest(BaseModel):
    descriptor: dict
    extract_basis: bool = False
    caps: Optional[CapsOverride] = None


class ValidationModel(BaseModel):
    ok: bool
    issues: list[str]
    notes: list[str]
    prefix_bound: int


class ClassifyResponse(BaseModel):
    verdict: str
    witness: dict
    rho_analysis: list[dict]
    validation: ValidationModel
    basis: Optional[list[ProfileModel]] = None
    basis_undecided: Optional[list[ProfileModel]] = None


class BasisRequest(BaseModel):
    profiles: list[ProfileModel]
    p: Optional[int] = None
    caps: Optional[CapsOverride] = None


class RemovedModel(BaseModel):
    profile: ProfileModel
    justification: str
    witness: Optional[str] = None


class BasisResponse(BaseModel):
    basis: list[ProfileModel]
    removed: list[RemovedModel]
    undecided: list[dict]


class VerifyRequest(BaseModel):
    suite: str
    seed: int = 0
    samples: Optional[int] = None
    max_n: Optional[int] = None
    max_m: Optional[int] = None
    max_index: Optional[int] = None
    caps: Optional[CapsOverride] = None


class SuiteReportModel(BaseModel):
    suite: str
    seed: int
    checks: int
    violations: list[str]
    passed: bool
    details: dict = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    passed: bool
    reports: list[SuiteReportModel]


class ConfigResponse(BaseModel):
    version: str
    caps: dict
    suites: list[str]

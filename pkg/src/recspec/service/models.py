"""Request and response schemas for the HTTP service and the CLI.

Graphs travel as their transition lists; the target ``-1`` stands for the
termination state √, matching the sentinel used internally.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

DEFAULT_LIMIT = 10_000
DEFAULT_BUDGET = 1_000_000


class TransitionEdge(BaseModel):
    src: int
    action: str
    dst: int = Field(description="target state; -1 is the termination state")


class GraphResponse(BaseModel):
    num_states: int
    transitions: list[TransitionEdge]
    canonical: str = Field(description="line format: 'src action dst', dst may be TICK")
    dot: str


class LtsRequest(BaseModel):
    term: str
    spec: Optional[str] = Field(default=None, description="specification literal {X = t, ...}")
    limit: int = DEFAULT_LIMIT


class GuardedRequest(BaseModel):
    spec: str


class GuardedResponse(BaseModel):
    guarded: bool
    witness: Optional[list[str]] = None
    description: str


class BisimRequest(BaseModel):
    left: str
    right: str
    spec: Optional[str] = None
    limit: int = DEFAULT_LIMIT


class BisimResponse(BaseModel):
    bisimilar: bool
    formula: Optional[str] = Field(
        default=None, description="holds at the left root, fails at the right"
    )


class SolveRequest(BaseModel):
    spec: str
    actions: list[str] = ["a"]
    max_states: int = 1
    budget: int = DEFAULT_BUDGET


class SolveResponse(BaseModel):
    variables: list[str]
    solutions: list[list[int]] = Field(description="universe member indices per variable")
    universe_size: int
    legend: list[str]
    rendered: str


class CheckRequest(BaseModel):
    lhs: str
    rhs: str
    spec: str
    actions: list[str] = ["a"]
    max_states: int = 1
    conditional: bool = False
    budget: int = DEFAULT_BUDGET


class CheckResponse(BaseModel):
    holds: bool
    conditional: bool
    variables: list[str]
    witness: Optional[list[int]] = None
    rendered: str


class ApproxRequest(BaseModel):
    term: str
    depth: int = 0
    limit: int = DEFAULT_LIMIT


class CompareRequest(BaseModel):
    term: str
    depth: int = 6
    limit: int = DEFAULT_LIMIT


class CompareLevel(BaseModel):
    depth: int
    agree: bool


class CompareResponse(BaseModel):
    levels: list[CompareLevel]
    agree: bool
    rendered: str


class UniverseRequest(BaseModel):
    actions: list[str] = ["a"]
    max_states: int = 1
    budget: int = 65536


class UniverseResponse(BaseModel):
    actions: list[str]
    max_states: int
    size: int
    members: list[str]


class ErrorResponse(BaseModel):
    kind: str
    error: str

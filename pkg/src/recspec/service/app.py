"""HTTP front end: one POST endpoint per operation, JSON in and out.

Error mapping: parse errors become 400, semantic errors (unknown names,
uncovered variables, exceeded limits and budgets) become 422, internal
inconsistencies 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import InternalInconsistencyError, SemanticError
from ..parser import ParseError, parse_spec, parse_term
from ..syntax import Equation
from . import handlers
from .models import (
    ApproxRequest,
    BisimRequest,
    BisimResponse,
    CheckRequest,
    CheckResponse,
    CompareRequest,
    CompareResponse,
    GraphResponse,
    GuardedRequest,
    GuardedResponse,
    LtsRequest,
    SolveRequest,
    SolveResponse,
    UniverseRequest,
    UniverseResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="recspec",
        description="Recursion workbench over finite process graphs modulo strong bisimilarity",
    )

    @app.exception_handler(ParseError)
    async def parse_error(_: Request, exc: ParseError):
        return JSONResponse(status_code=400, content={"kind": "parse", "error": str(exc)})

    @app.exception_handler(SemanticError)
    async def semantic_error(_: Request, exc: SemanticError):
        return JSONResponse(status_code=422, content={"kind": "semantic", "error": str(exc)})

    @app.exception_handler(InternalInconsistencyError)
    async def internal_error(_: Request, exc: InternalInconsistencyError):
        return JSONResponse(status_code=500, content={"kind": "internal", "error": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/lts")
    def lts(req: LtsRequest) -> GraphResponse:
        spec = parse_spec(req.spec) if req.spec else None
        return handlers.lts(parse_term(req.term), spec, None, req.limit)

    @app.post("/guarded")
    def guarded(req: GuardedRequest) -> GuardedResponse:
        return handlers.guarded(parse_spec(req.spec))

    @app.post("/bisim")
    def bisim(req: BisimRequest) -> BisimResponse:
        spec = parse_spec(req.spec) if req.spec else None
        return handlers.bisim(parse_term(req.left), parse_term(req.right), spec, req.limit)

    @app.post("/solve")
    def solve(req: SolveRequest) -> SolveResponse:
        universe = handlers.make_universe(req.actions, req.max_states)
        return handlers.solve(parse_spec(req.spec), universe, req.budget)

    @app.post("/check")
    def check(req: CheckRequest) -> CheckResponse:
        universe = handlers.make_universe(req.actions, req.max_states)
        eq = Equation(parse_term(req.lhs), parse_term(req.rhs))
        return handlers.check(eq, parse_spec(req.spec), universe, req.conditional, req.budget)

    @app.post("/approx")
    def approx(req: ApproxRequest) -> GraphResponse:
        return handlers.approx(parse_term(req.term), req.depth, req.limit)

    @app.post("/compare")
    def compare(req: CompareRequest) -> CompareResponse:
        return handlers.compare(parse_term(req.term), req.depth, req.limit)

    @app.post("/universe")
    def universe(req: UniverseRequest) -> UniverseResponse:
        return handlers.universe_listing(
            handlers.make_universe(req.actions, req.max_states, req.budget)
        )

    return app


app = create_app()

"""HTTP API tying extraction, execution and analytics together.

Every inference passes a human checkpoint: questions produce editable
confirmation cards, and only an explicit confirm triggers a Beacon call.
The caller's bearer token travels to the Beacon verbatim and is never
stored beyond the request. Generated analysis code is statically vetted,
shown for review, re-vetted on the exact submitted bytes, and executed in
an isolated interpreter process.
"""
from __future__ import annotations

import json
import mimetypes
from dataclasses import replace
from typing import Any, Optional

import httpx
from fastapi import Depends, FastAPI, Header, Request, Response
from fastapi.responses import JSONResponse

from ..analytics import (
    AnalyticsTimeout,
    GuardReport,
    InterpreterMissing,
    ScriptArtifact,
    build_codegen_prompt,
    guard_script,
    run_script,
)
from ..extraction import extract_multistep, extract_parallel
from ..extraction.drafts import ExtractionDraft, FieldStatus
from ..llm.decode import DecodeError, decode_structured
from ..llm.gateway import LlmClient
from ..llm.scripted import rule_based_provider
from ..sdk import HttpError, QueryBuilder, ResultFrame, Unauthorized
from ..types import (
    BeaconQueryError,
    Filter,
    Granularity,
    Scope,
    VariantParams,
)
from .config import ServiceConfig
from .models import (
    AnalysisRequest,
    AnalysisResponse,
    ArtifactModel,
    Card,
    ColumnModel,
    ConfirmRequest,
    ConfirmResponse,
    FieldState,
    FilterModel,
    GuardModel,
    QuestionRequest,
    QuestionResponse,
    RunAnalysisRequest,
    RunAnalysisResponse,
    UsageModel,
    VariantModel,
    ViolationModel,
)
from .state import (
    QUESTIONABLE,
    HistorySummary,
    SessionStore,
    SessionTab,
    UnknownSession,
    UnknownTab,
    WrongState,
    merge_history,
)

ANALYSIS_FRAME_NAME = "df"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _require_auth(authorization: Optional[str] = Header(default=None)) -> str:
    if not authorization:
        raise ApiError(401, "unauthorized", "Authorization header required")
    return authorization


def _status_model(status: FieldStatus) -> FieldState:
    return FieldState(value=None, status=status.state, reason=status.reason)


def _variant_model(variant: Optional[VariantParams]) -> Optional[VariantModel]:
    if variant is None:
        return None
    return VariantModel(assembly_id=variant.assembly_id,
                        reference_name=variant.reference_name,
                        start=list(variant.start), end=list(variant.end),
                        reference_bases=variant.reference_bases,
                        alternate_bases=variant.alternate_bases,
                        gene_id=variant.gene_id)


def _filter_models(filters: tuple[Filter, ...]) -> list[FilterModel]:
    return [FilterModel(filter_type=f.filter_type, id=f.id, value=f.value,
                        term=f.term, scope=f.scope.value) for f in filters]


def _build_card(history: HistorySummary, draft: ExtractionDraft) -> tuple[Card, HistorySummary]:
    merged = merge_history(history, draft)
    scope_state = FieldState(
        value=merged.scope.value if merged.scope.is_concrete else None,
        status="known" if merged.scope.is_concrete else draft.scope_status.state,
        reason=draft.scope_status.reason,
    )
    granularity_state = FieldState(
        value=merged.granularity.value if merged.granularity.is_concrete else None,
        status="known" if merged.granularity.is_concrete else draft.granularity_status.state,
        reason=draft.granularity_status.reason,
    )
    card = Card(
        scope=scope_state,
        granularity=granularity_state,
        variant=_variant_model(merged.variant),
        variant_status=_status_model(draft.variant_status),
        filters=_filter_models(merged.filters),
        filters_status=_status_model(draft.filters_status),
        residue=list(draft.residue),
        editable=True,
    )
    return card, merged


def _query_from_confirmation(body: ConfirmRequest):
    scope = Scope.parse(body.scope or "unknown")
    if not scope.is_concrete:
        raise ApiError(422, "validation", "scope is required", detail="scope")
    granularity = Granularity.parse(body.granularity or "unknown")
    if not granularity.is_concrete:
        raise ApiError(422, "validation", "granularity is required", detail="granularity")
    variant = None
    if body.variant is not None:
        try:
            variant = VariantParams(
                assembly_id=body.variant.assembly_id,
                reference_name=body.variant.reference_name,
                start=tuple(body.variant.start),
                end=tuple(body.variant.end),
                reference_bases=body.variant.reference_bases,
                alternate_bases=body.variant.alternate_bases,
                gene_id=body.variant.gene_id,
            )
        except BeaconQueryError as exc:
            raise ApiError(422, "validation", str(exc), detail="variant")
    filters = []
    for index, item in enumerate(body.filters):
        try:
            filters.append(Filter(
                filter_type=item.filter_type or None,
                id=item.id, value=item.value, term=item.term,
                scope=Scope.parse(item.scope),
            ))
        except BeaconQueryError as exc:
            raise ApiError(422, "validation", str(exc), detail=f"filters[{index}]")
    return scope, granularity, variant, tuple(filters)


def _is_greeting(draft: ExtractionDraft) -> Optional[str]:
    """A validator reply that is text rather than JSON is a greeting."""
    for exchange in draft.exchanges:
        if exchange.prompt.template_id != "parallel/validator":
            continue
        if exchange.decode_status != "decode_failed" or not exchange.raw_text.strip():
            return None
        try:
            json.loads(exchange.raw_text)
            return None
        except json.JSONDecodeError:
            return exchange.raw_text.strip()
    return None


def create_app(config: Optional[ServiceConfig] = None, *,
               provider: Optional[LlmClient] = None,
               beacon_http: Optional[httpx.Client] = None,
               store: Optional[SessionStore] = None) -> FastAPI:
    config = config or ServiceConfig()
    if provider is None:
        provider = (LlmClient(config.provider) if config.provider
                    and config.provider.kind != "mock" else rule_based_provider())
    store = store or SessionStore(log_dir=config.session_log_dir)

    app = FastAPI(title="beaconql service")

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(status_code=exc.status, content={
            "code": exc.code, "message": exc.message, "detail": exc.detail})

    def tab_or_404(session_id: str, tab_id: str) -> SessionTab:
        try:
            return store.get_tab(session_id, tab_id)
        except UnknownSession:
            raise ApiError(404, "unknown_session", f"no session {session_id}")
        except UnknownTab:
            raise ApiError(404, "unknown_tab", f"no tab {tab_id}")

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(_auth: str = Depends(_require_auth)) -> dict[str, str]:
        return {"session_id": store.create_session()}

    @app.post("/sessions/{session_id}/tabs", status_code=201)
    def open_tab(session_id: str, _auth: str = Depends(_require_auth)) -> dict[str, str]:
        try:
            return {"tab_id": store.open_tab(session_id)}
        except UnknownSession:
            raise ApiError(404, "unknown_session", f"no session {session_id}")

    @app.get("/sessions/{session_id}/tabs")
    def list_tabs(session_id: str, _auth: str = Depends(_require_auth)) -> dict[str, Any]:
        try:
            return {"tabs": store.tabs(session_id)}
        except UnknownSession:
            raise ApiError(404, "unknown_session", f"no session {session_id}")

    @app.post("/sessions/{session_id}/tabs/{tab_id}/question")
    def post_question(session_id: str, tab_id: str, body: QuestionRequest,
                      _auth: str = Depends(_require_auth)) -> QuestionResponse:
        tab = tab_or_404(session_id, tab_id)
        workflow = body.workflow or config.workflow_default
        with tab.lock:
            try:
                tab.require(QUESTIONABLE, "post a question")
            except WrongState as exc:
                raise ApiError(409, "wrong_state", str(exc), detail=tab.state)

            if workflow == "multistep":
                draft, _trace = extract_multistep(body.question, provider)
            else:
                draft = extract_parallel(body.question, provider)

            usage = UsageModel(prompt_tokens=draft.total_usage.prompt_tokens,
                               completion_tokens=draft.total_usage.completion_tokens)
            greeting = _is_greeting(draft)
            if greeting is not None:
                return QuestionResponse(kind="greeting", state=tab.state,
                                        reply=greeting, usage=usage)
            if not draft.validity.yes:
                return QuestionResponse(kind="refusal", state=tab.state,
                                        reason=draft.validity.reason, usage=usage)

            card, _merged = _build_card(tab.history, draft)
            tab.pending_draft = draft
            tab.pending_card = card.model_dump()
            tab.state = "awaiting_confirmation"
            return QuestionResponse(kind="card", state=tab.state, card=card, usage=usage)

    @app.post("/sessions/{session_id}/tabs/{tab_id}/confirm")
    def confirm(session_id: str, tab_id: str, body: ConfirmRequest,
                auth: str = Depends(_require_auth)) -> ConfirmResponse:
        tab = tab_or_404(session_id, tab_id)
        with tab.lock:
            try:
                tab.require(("awaiting_confirmation",), "confirm")
            except WrongState as exc:
                raise ApiError(409, "wrong_state", str(exc), detail=tab.state)
            scope, granularity, variant, filters = _query_from_confirmation(body)

            builder = QueryBuilder(endpoint=config.beacon_endpoint, auth_token=auth)
            builder = builder.with_scope(scope)
            if variant is not None:
                builder = builder.with_variant(variant)
            builder = replace(builder, partial=replace(builder.partial, filters=filters))
            payload = json.loads(builder.payload(granularity))

            tab.state = "executing"
            try:
                result = builder.fetch(granularity, http=beacon_http)
            except Unauthorized as exc:
                tab.state = "awaiting_confirmation"
                raise ApiError(401, "upstream_unauthorized", str(exc))
            except HttpError as exc:
                tab.state = "awaiting_confirmation"
                raise ApiError(exc.status, "upstream_error", str(exc), detail=exc.status)
            except httpx.HTTPError as exc:
                tab.state = "awaiting_confirmation"
                raise ApiError(502, "upstream_unreachable", str(exc))

            tab.history = HistorySummary(scope=scope, granularity=granularity,
                                         variant=variant, filters=filters)
            store.record_confirmation(session_id, tab)
            tab.last_result = result
            tab.pending_draft = None
            tab.pending_card = None
            tab.state = "done"

            if granularity is Granularity.COUNT:
                return ConfirmResponse(kind="count", state=tab.state, count=result,
                                       payload=payload)
            if granularity is Granularity.BOOLEAN:
                return ConfirmResponse(kind="boolean", state=tab.state, exists=result,
                                       payload=payload)
            frame: ResultFrame = result
            tab.last_frame = frame
            return ConfirmResponse(
                kind="record", state=tab.state, row_count=len(frame.rows),
                columns=[ColumnModel(name=c.name, kind=c.kind) for c in frame.columns],
                rows=[list(row) for row in frame.rows],
                payload=payload)

    @app.post("/sessions/{session_id}/tabs/{tab_id}/analysis")
    def request_analysis(session_id: str, tab_id: str, body: AnalysisRequest,
                         _auth: str = Depends(_require_auth)) -> AnalysisResponse:
        tab = tab_or_404(session_id, tab_id)
        with tab.lock:
            try:
                tab.require(("done", "awaiting_question", "awaiting_code_review"),
                            "request analysis")
            except WrongState as exc:
                raise ApiError(409, "wrong_state", str(exc), detail=tab.state)
            if tab.last_frame is None:
                raise ApiError(409, "no_records",
                               "analysis needs a record-granularity result first")

            prompt = build_codegen_prompt(
                [(ANALYSIS_FRAME_NAME, tab.last_frame.columns)], body.request)
            exchange = provider.complete(prompt)
            if exchange.decode_status == "transport_failed":
                raise ApiError(502, "provider_unavailable",
                               f"code generation failed: {exchange.reason}")
            try:
                output = decode_structured(exchange, "codegen-result")
            except DecodeError as exc:
                raise ApiError(502, "decode_failed", str(exc))
            artifact = ScriptArtifact.from_codegen(output)
            guard = guard_script(artifact)
            tab.pending_artifact = artifact
            tab.pending_guard = guard
            tab.state = "awaiting_code_review"
            return AnalysisResponse(
                state=tab.state,
                artifact=ArtifactModel(code=artifact.code, files=list(artifact.files),
                                       assumptions=list(artifact.assumptions),
                                       feedback=list(artifact.feedback)),
                guard=GuardModel(verdict=guard.verdict, violations=[
                    ViolationModel(rule=v.rule, line=v.line, excerpt=v.excerpt)
                    for v in guard.violations]),
            )

    @app.post("/sessions/{session_id}/tabs/{tab_id}/analysis/run")
    def run_analysis(session_id: str, tab_id: str, body: RunAnalysisRequest,
                     _auth: str = Depends(_require_auth)) -> RunAnalysisResponse:
        tab = tab_or_404(session_id, tab_id)
        with tab.lock:
            try:
                tab.require(("awaiting_code_review",), "run analysis")
            except WrongState as exc:
                raise ApiError(409, "wrong_state", str(exc), detail=tab.state)
            if tab.pending_artifact is None or tab.last_frame is None:
                raise ApiError(409, "no_pending_analysis", "request analysis first")

            # Edits re-vet: the verdict is computed on the exact bytes run.
            artifact = replace(tab.pending_artifact, code=body.code)
            guard: GuardReport = guard_script(artifact)
            tab.pending_guard = guard
            if not guard.passed:
                raise ApiError(422, "guard_rejected", "static checks failed", detail=[
                    {"rule": v.rule, "line": v.line, "excerpt": v.excerpt}
                    for v in guard.violations])
            try:
                result = run_script(artifact, [(ANALYSIS_FRAME_NAME, tab.last_frame)],
                                    guard, config.analytics)
            except AnalyticsTimeout as exc:
                raise ApiError(504, "timeout", "script exceeded its time limit", detail={
                    "stdout": exc.partial.stdout, "stderr": exc.partial.stderr})
            except InterpreterMissing as exc:
                raise ApiError(503, "interpreter_missing", str(exc))

            tab.executions.append(result)
            for declared, content in result.produced_files:
                tab.files[declared.rsplit("/", 1)[-1]] = content
            tab.pending_artifact = artifact
            tab.state = "done"
            return RunAnalysisResponse(
                state=tab.state, stdout=result.stdout, stderr=result.stderr,
                exit_status=result.exit_status,
                files=[declared.rsplit("/", 1)[-1] for declared, _ in result.produced_files],
                undeclared_files=list(result.undeclared_files),
                wall_time=result.wall_time)

    @app.get("/sessions/{session_id}/tabs/{tab_id}/artifacts/{filename}")
    def get_artifact(session_id: str, tab_id: str, filename: str,
                     _auth: str = Depends(_require_auth)) -> Response:
        tab = tab_or_404(session_id, tab_id)
        with tab.lock:
            if filename not in tab.files:
                raise ApiError(404, "unknown_artifact", f"no artifact {filename}")
            media_type = mimetypes.guess_type(filename)[0] or "application/octet-stream"
            return Response(content=tab.files[filename], media_type=media_type)

    return app

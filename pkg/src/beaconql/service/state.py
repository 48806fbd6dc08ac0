"""Session and tab state.

Tabs are fully isolated conversation contexts; their state machine is

    awaiting_question -> awaiting_confirmation -> executing -> done
                      -> awaiting_code_review  -> done

with loops back to questioning after completion. Per-tab operations are
serialized by the tab lock, so transitions are atomic; different tabs and
sessions proceed in parallel. History holds only human-confirmed fields:
unconfirmed extractions never enter it.

Sessions live in memory; with a log directory configured, every confirmed
fact appends to one JSONL file per session so history survives restarts
(pending drafts and results intentionally do not).
"""
from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from ..analytics import ExecutionResult, GuardReport, ScriptArtifact
from ..extraction.drafts import ExtractionDraft
from ..sdk import ResultFrame
from ..types import Filter, Granularity, Scope, VariantParams


class WrongState(Exception):
    def __init__(self, state: str, operation: str):
        super().__init__(f"cannot {operation} while tab is {state}")
        self.state = state


class UnknownSession(KeyError):
    pass


class UnknownTab(KeyError):
    pass


STATES = ("awaiting_question", "awaiting_confirmation", "executing",
          "awaiting_code_review", "done")

# States from which a new question may start a fresh turn.
QUESTIONABLE = ("awaiting_question", "awaiting_confirmation", "done")


@dataclass
class HistorySummary:
    scope: Scope = Scope.UNKNOWN
    granularity: Granularity = Granularity.UNKNOWN
    variant: Optional[VariantParams] = None
    filters: tuple[Filter, ...] = ()


@dataclass
class SessionTab:
    tab_id: str
    state: str = "awaiting_question"
    history: HistorySummary = field(default_factory=HistorySummary)
    pending_draft: Optional[ExtractionDraft] = None
    pending_card: Optional[dict[str, Any]] = None
    pending_artifact: Optional[ScriptArtifact] = None
    pending_guard: Optional[GuardReport] = None
    last_result: Any = None
    last_frame: Optional[ResultFrame] = None
    executions: list[ExecutionResult] = field(default_factory=list)
    files: dict[str, bytes] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def require(self, states: tuple[str, ...], operation: str) -> None:
        if self.state not in states:
            raise WrongState(self.state, operation)


@dataclass
class Session:
    session_id: str
    tabs: dict[str, SessionTab] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _filter_to_event(f: Filter) -> dict[str, Any]:
    return {"filter_type": f.filter_type, "id": f.id, "value": f.value,
            "term": f.term, "scope": f.scope.value}


def _filter_from_event(doc: dict[str, Any]) -> Filter:
    return Filter(filter_type=doc.get("filter_type"), id=doc.get("id"),
                  value=doc.get("value"), term=doc.get("term", ""),
                  scope=Scope.parse(doc.get("scope", "unknown")))


def _variant_to_event(v: Optional[VariantParams]) -> Optional[dict[str, Any]]:
    if v is None:
        return None
    return {"assembly_id": v.assembly_id, "reference_name": v.reference_name,
            "start": list(v.start), "end": list(v.end),
            "reference_bases": v.reference_bases, "alternate_bases": v.alternate_bases,
            "gene_id": v.gene_id}


def _variant_from_event(doc: Optional[dict[str, Any]]) -> Optional[VariantParams]:
    if doc is None:
        return None
    return VariantParams(assembly_id=doc.get("assembly_id"),
                         reference_name=doc.get("reference_name"),
                         start=tuple(doc.get("start", ())), end=tuple(doc.get("end", ())),
                         reference_bases=doc.get("reference_bases"),
                         alternate_bases=doc.get("alternate_bases"),
                         gene_id=doc.get("gene_id"))


class SessionStore:
    def __init__(self, log_dir: Optional[str] = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._log_dir = log_dir
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

    def _log(self, session_id: str, event: dict[str, Any]) -> None:
        if not self._log_dir:
            return
        path = os.path.join(self._log_dir, f"{session_id}.jsonl")
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    def create_session(self) -> str:
        session_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._sessions[session_id] = Session(session_id=session_id)
        self._log(session_id, {"event": "session_created"})
        return session_id

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(session_id) from None

    def open_tab(self, session_id: str) -> str:
        session = self.get_session(session_id)
        tab_id = uuid.uuid4().hex[:8]
        with session.lock:
            session.tabs[tab_id] = SessionTab(tab_id=tab_id)
        self._log(session_id, {"event": "tab_opened", "tab": tab_id})
        return tab_id

    def tabs(self, session_id: str) -> list[dict[str, str]]:
        session = self.get_session(session_id)
        with session.lock:
            return [{"tab_id": tab.tab_id, "state": tab.state}
                    for tab in session.tabs.values()]

    def get_tab(self, session_id: str, tab_id: str) -> SessionTab:
        session = self.get_session(session_id)
        with session.lock:
            try:
                return session.tabs[tab_id]
            except KeyError:
                raise UnknownTab(tab_id) from None

    def record_confirmation(self, session_id: str, tab: SessionTab) -> None:
        history = tab.history
        self._log(session_id, {
            "event": "confirmed",
            "tab": tab.tab_id,
            "scope": history.scope.value,
            "granularity": history.granularity.value,
            "variant": _variant_to_event(history.variant),
            "filters": [_filter_to_event(f) for f in history.filters],
        })

    @classmethod
    def restore(cls, log_dir: str) -> "SessionStore":
        """Rebuild sessions and confirmed history from the event logs.

        Pending drafts, results and artifacts are not durable; restored
        tabs come back ready for a new question.
        """
        store = cls(log_dir=log_dir)
        for name in sorted(os.listdir(log_dir)):
            if not name.endswith(".jsonl"):
                continue
            session_id = name[:-6]
            session = Session(session_id=session_id)
            with open(os.path.join(log_dir, name), encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    event = json.loads(line)
                    if event["event"] == "tab_opened":
                        session.tabs[event["tab"]] = SessionTab(tab_id=event["tab"])
                    elif event["event"] == "confirmed" and event["tab"] in session.tabs:
                        tab = session.tabs[event["tab"]]
                        tab.history = HistorySummary(
                            scope=Scope.parse(event.get("scope", "unknown")),
                            granularity=Granularity.parse(event.get("granularity", "unknown")),
                            variant=_variant_from_event(event.get("variant")),
                            filters=tuple(_filter_from_event(f) for f in event.get("filters", ())),
                        )
            with store._lock:
                store._sessions[session_id] = session
        return store


def merge_history(history: HistorySummary, draft: ExtractionDraft) -> HistorySummary:
    """New known fields overwrite; everything else inherits from history.

    An empty-but-known filter extraction adds nothing new, so it does not
    wipe inherited filters; the user deletes filters on the card instead.
    """
    scope = draft.scope if draft.scope_status.is_known else history.scope
    granularity = (draft.granularity if draft.granularity_status.is_known
                   else history.granularity)
    variant = (draft.variant if draft.variant_status.is_known and draft.variant is not None
               else history.variant)
    filters = (draft.filters if draft.filters_status.is_known and draft.filters
               else history.filters)
    return HistorySummary(scope=scope, granularity=granularity,
                          variant=variant, filters=filters)

"""Service configuration."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..analytics import AnalyticsConfig
from ..llm.gateway import ProviderConfig

WORKFLOWS = ("parallel", "multistep")


@dataclass(frozen=True)
class ServiceConfig:
    beacon_endpoint: str = "http://localhost:9000"
    workflow_default: str = "parallel"
    session_log_dir: Optional[str] = None
    provider: Optional[ProviderConfig] = None   # None: shipped rule-based mock
    analytics: AnalyticsConfig = field(default_factory=AnalyticsConfig)

    def __post_init__(self) -> None:
        if self.workflow_default not in WORKFLOWS:
            raise ValueError(f"workflow_default must be one of {WORKFLOWS}")


def load_service_config(path: str) -> ServiceConfig:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    provider = None
    if "provider" in raw and raw["provider"] is not None:
        p = raw["provider"]
        provider = ProviderConfig(
            kind=p.get("kind", "mock"),
            base_url=p.get("base_url", ""),
            model=p.get("model", "mock"),
            timeout=float(p.get("timeout", 30.0)),
            json_mode=bool(p.get("json_mode", True)),
        )
    analytics_raw = raw.get("analytics", {})
    analytics = AnalyticsConfig(
        interpreter=analytics_raw.get("interpreter"),
        timeout=float(analytics_raw.get("timeout", 30.0)),
        sandbox_root=analytics_raw.get("sandbox_root"),
    )
    return ServiceConfig(
        beacon_endpoint=raw.get("beacon_endpoint", "http://localhost:9000"),
        workflow_default=raw.get("workflow_default", "parallel"),
        session_log_dir=raw.get("session_log_dir"),
        provider=provider,
        analytics=analytics,
    )

from .artifact import ScriptArtifact, known_good_pie_artifact
from .guard import GuardConfig, GuardReport, Violation, guard_script
from .prompt import build_codegen_prompt, kind_hint
from .runner import (
    AnalyticsConfig,
    AnalyticsTimeout,
    ExecutionResult,
    GuardNotPassed,
    InterpreterMissing,
    resolve_interpreter,
    run_script,
)

__all__ = [
    "AnalyticsConfig",
    "AnalyticsTimeout",
    "ExecutionResult",
    "GuardConfig",
    "GuardNotPassed",
    "GuardReport",
    "InterpreterMissing",
    "ScriptArtifact",
    "Violation",
    "build_codegen_prompt",
    "guard_script",
    "kind_hint",
    "known_good_pie_artifact",
    "resolve_interpreter",
    "run_script",
]

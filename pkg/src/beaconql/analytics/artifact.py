"""Generated-script artifacts."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..llm.decode import CodegenOutput


@dataclass(frozen=True)
class ScriptArtifact:
    """A generated analysis script plus its declared outputs and notes."""

    code: str
    files: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    feedback: tuple[str, ...] = ()

    @classmethod
    def from_codegen(cls, output: CodegenOutput) -> "ScriptArtifact":
        return cls(code=output.code, files=output.files,
                   assumptions=output.assumptions, feedback=output.feedback)

    def to_json(self) -> str:
        return json.dumps({
            "code": self.code,
            "files": list(self.files),
            "assumptions": list(self.assumptions),
            "feedback": list(self.feedback),
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ScriptArtifact":
        doc = json.loads(text)
        return cls(code=doc["code"], files=tuple(doc.get("files", ())),
                   assumptions=tuple(doc.get("assumptions", ())),
                   feedback=tuple(doc.get("feedback", ())))


def known_good_pie_artifact() -> ScriptArtifact:
    """The shipped pie-chart script used as the execution golden."""
    text = resources.files("beaconql").joinpath("analytics/assets/pie_chart.json").read_text()
    return ScriptArtifact.from_json(text)

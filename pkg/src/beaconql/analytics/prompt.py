"""Code-generation prompt assembly from frame schemas."""
from __future__ import annotations

from typing import Sequence

from ..prompting import RenderedPrompt, TemplateRegistry, default_registry
from ..sdk import Column

# The prompt's hint vocabulary has three tokens; frame kinds without a
# token (integer/real/boolean) hint as 'str'.
_KIND_HINTS = {"object": "dict", "list": "list"}


def kind_hint(kind: str) -> str:
    return _KIND_HINTS.get(kind, "str")


def _data_section(frame_schemas: Sequence[tuple[str, Sequence[Column]]]) -> str:
    lines = []
    for name, columns in frame_schemas:
        lines.append(f"{name}:")
        for column in columns:
            lines.append(f"  {column.name}: '{kind_hint(column.kind)}'")
    return "\n".join(lines)


def build_codegen_prompt(frame_schemas: Sequence[tuple[str, Sequence[Column]]],
                         user_request: str,
                         registry: TemplateRegistry | None = None) -> RenderedPrompt:
    if not frame_schemas:
        raise ValueError("at least one input frame is required")
    registry = registry or default_registry()
    return registry.render("analytics/codegen", {
        "data": _data_section(frame_schemas),
        "query": user_request,
    })

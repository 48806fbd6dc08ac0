"""Prompt template registry and renderer.

Templates use ``{name}`` placeholders with ``{{``/``}}`` escapes for
literal braces (so JSON skeletons can be embedded in prompt bodies). The
stock templates live as one text file each under ``templates/`` and load
into a read-only registry at startup; keeping them as plain assets makes
any wording drift visible in diffs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from types import MappingProxyType
from typing import Iterator, Mapping


class TemplateError(Exception):
    pass


class DuplicateId(TemplateError):
    pass


class MalformedTemplate(TemplateError):
    pass


class UnknownTemplate(TemplateError):
    pass


class UnboundVariable(TemplateError):
    def __init__(self, name: str):
        super().__init__(f"missing binding for {{{name}}}")
        self.name = name


def _scan(body: str) -> Iterator[tuple[str, str]]:
    """Yield (kind, text) chunks: 'lit' literals or 'var' placeholder names."""
    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        if ch == "{":
            if i + 1 < n and body[i + 1] == "{":
                yield "lit", "{"
                i += 2
                continue
            close = body.find("}", i + 1)
            if close == -1:
                raise MalformedTemplate(f"unclosed placeholder at offset {i}")
            name = body[i + 1:close]
            if not name.isidentifier():
                raise MalformedTemplate(f"bad placeholder name {name!r} at offset {i}")
            yield "var", name
            i = close + 1
        elif ch == "}":
            if i + 1 < n and body[i + 1] == "}":
                yield "lit", "}"
                i += 2
                continue
            raise MalformedTemplate(f"stray closing brace at offset {i}")
        else:
            nxt = min(x for x in (body.find("{", i), body.find("}", i), n) if x != -1)
            yield "lit", body[i:nxt]
            i = nxt


@dataclass(frozen=True)
class Template:
    id: str
    body: str
    required_bindings: frozenset[str] = field(init=False, default=frozenset())

    def __post_init__(self) -> None:
        object.__setattr__(self, "required_bindings",
                           frozenset(t for k, t in _scan(self.body) if k == "var"))


@dataclass(frozen=True)
class RenderedPrompt:
    template_id: str
    text: str
    bindings: Mapping[str, str]


def render_template(template: Template, bindings: Mapping[str, str]) -> RenderedPrompt:
    missing = template.required_bindings - set(bindings)
    if missing:
        raise UnboundVariable(sorted(missing)[0])
    parts = []
    for kind, text in _scan(template.body):
        parts.append(str(bindings[text]) if kind == "var" else text)
    return RenderedPrompt(template_id=template.id, text="".join(parts),
                          bindings=MappingProxyType(dict(bindings)))


class TemplateRegistry:
    """Write-once template store; reads are lock-free after startup."""

    def __init__(self) -> None:
        self._templates: dict[str, Template] = {}

    def register(self, template: Template) -> str:
        if template.id in self._templates:
            raise DuplicateId(template.id)
        self._templates[template.id] = template
        return template.id

    def get(self, template_id: str) -> Template:
        try:
            return self._templates[template_id]
        except KeyError:
            raise UnknownTemplate(template_id) from None

    def render(self, template_id: str, bindings: Mapping[str, str]) -> RenderedPrompt:
        return render_template(self.get(template_id), bindings)

    def ids(self) -> list[str]:
        return sorted(self._templates)


STOCK_TEMPLATE_IDS = (
    "parallel/validator",
    "parallel/scope",
    "parallel/granularity",
    "parallel/variants",
    "parallel/filters",
    "multistep/scope",
    "multistep/granularity",
    "multistep/text2sql",
    "analytics/codegen",
)

_default_registry: TemplateRegistry | None = None


def load_stock_templates() -> TemplateRegistry:
    registry = TemplateRegistry()
    base = resources.files("beaconql").joinpath("templates")
    for template_id in STOCK_TEMPLATE_IDS:
        body = base.joinpath(f"{template_id}.txt").read_text(encoding="utf-8")
        registry.register(Template(id=template_id, body=body))
    return registry


def default_registry() -> TemplateRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = load_stock_templates()
    return _default_registry

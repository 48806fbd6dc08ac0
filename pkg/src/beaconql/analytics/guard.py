"""Static vetting of generated scripts before any execution.

The guard is token/line-based pattern analysis, deliberately conservative:
deny and allow lists are configuration, and the per-run process sandbox is
the real boundary. A script that cannot be analyzed line-by-line (triple
quotes, unbalanced quoting) is rejected outright rather than guessed at.

Rules:
  R1  no import statements of any form
  R2  only the pre-imported library aliases may be referenced
  R3  file paths written to must start with the declared output directory
  R4  no process/OS/network/reflection call tokens
  R5  no interactive display calls (save plots instead)
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .artifact import ScriptArtifact

UNPARSEABLE = "R0"
RULE_IMPORTS = "R1"
RULE_ALIASES = "R2"
RULE_PATHS = "R3"
RULE_DENY_CALLS = "R4"
RULE_DISPLAY = "R5"


@dataclass(frozen=True)
class Violation:
    rule: str
    line: int
    excerpt: str


@dataclass(frozen=True)
class GuardReport:
    verdict: str   # pass | reject
    violations: tuple[Violation, ...]
    code_sha256: str

    def __post_init__(self) -> None:
        expected = "reject" if self.violations else "pass"
        if self.verdict != expected:
            raise ValueError("verdict must follow from violations")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


# Aliases the execution wrapper pre-binds for the guest script.
DEFAULT_ALIAS_ALLOWLIST = ("pd", "np", "plt", "sns")

# Module-looking names whose use indicates escaping the pre-imported set.
DEFAULT_KNOWN_MODULES = (
    "os", "sys", "subprocess", "socket", "shutil", "requests", "urllib",
    "http", "httpx", "pathlib", "importlib", "ctypes", "pickle",
    "multiprocessing", "threading", "builtins", "io", "glob", "tempfile",
    "webbrowser", "inspect", "signal", "resource", "platform", "getpass",
    "ftplib", "smtplib", "code", "pty",
)

DEFAULT_DENY_CALLS = (
    "eval", "exec", "compile", "__import__", "getattr", "setattr", "delattr",
    "globals", "locals", "vars", "breakpoint", "input", "exit", "quit",
    "system", "popen", "fork", "spawn", "kill", "connect", "urlopen",
)

_WRITE_CALLS = ("open", "savefig", "imsave", "to_csv", "to_json", "to_excel",
                "to_parquet", "to_html", "to_pickle", "save")


@dataclass(frozen=True)
class GuardConfig:
    alias_allowlist: tuple[str, ...] = DEFAULT_ALIAS_ALLOWLIST
    known_modules: tuple[str, ...] = DEFAULT_KNOWN_MODULES
    deny_calls: tuple[str, ...] = DEFAULT_DENY_CALLS
    output_prefix: str = "/tmp/"


_IMPORT_RE = re.compile(r"(?:^|;)\s*(?:import\s+\w|from\s+\w[\w.]*\s+import\b)")
_STRING_RE = re.compile(r"('(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\")")
_WRITE_PATH_RE = re.compile(
    r"\b(?:" + "|".join(_WRITE_CALLS) + r")\s*\(\s*(?:f|r|rf|fr)?(['\"])([^'\"]*)\1"
)


def _mask_strings(line: str) -> str:
    return _STRING_RE.sub(lambda m: "'" + "_" * (len(m.group(0)) - 2) + "'", line)


def _strip_comment(line: str) -> str:
    # Run on masked lines only, where no '#' can hide inside a literal.
    return line.split("#", 1)[0]


def guard_script(artifact: ScriptArtifact, config: GuardConfig = GuardConfig()) -> GuardReport:
    violations: list[Violation] = []
    code = artifact.code
    sha = hashlib.sha256(code.encode("utf-8")).hexdigest()

    def report(verdict_violations: list[Violation]) -> GuardReport:
        ordered = tuple(sorted(verdict_violations, key=lambda v: (v.line, v.rule)))
        return GuardReport(verdict="reject" if ordered else "pass",
                           violations=ordered, code_sha256=sha)

    if not isinstance(code, str) or "\x00" in code:
        return report([Violation(UNPARSEABLE, 0, "script is not analyzable text")])

    deny_res = [re.compile(rf"\b{re.escape(name)}\s*\(") for name in config.deny_calls]
    module_res = [
        (module, re.compile(rf"\b{re.escape(module)}\s*[.(]"))
        for module in config.known_modules
        if module not in config.alias_allowlist
    ]

    for line_no, raw in enumerate(code.splitlines(), start=1):
        if "'''" in raw or '"""' in raw:
            return report([Violation(UNPARSEABLE, line_no,
                                     "triple-quoted strings defeat line analysis")])
        masked = _mask_strings(raw)
        if masked.count("'") % 2 or masked.count('"') % 2:
            return report([Violation(UNPARSEABLE, line_no, "unbalanced quoting")])
        stripped = _strip_comment(masked)
        excerpt = raw.strip()[:80]

        if _IMPORT_RE.search(stripped):
            violations.append(Violation(RULE_IMPORTS, line_no, excerpt))
        for module, pattern in module_res:
            if pattern.search(stripped):
                violations.append(Violation(RULE_ALIASES, line_no, excerpt))
                break
        for pattern in deny_res:
            if pattern.search(stripped):
                violations.append(Violation(RULE_DENY_CALLS, line_no, excerpt))
                break
        if re.search(r"\b(?:show|display)\s*\(", stripped):
            violations.append(Violation(RULE_DISPLAY, line_no, excerpt))
        # Path literals need the unmasked line; masking preserves offsets,
        # so the comment boundary found on the masked line applies as-is.
        comment_at = masked.find("#")
        code_part = raw if comment_at < 0 else raw[:comment_at]
        for match in _WRITE_PATH_RE.finditer(code_part):
            if not match.group(2).startswith(config.output_prefix):
                violations.append(Violation(RULE_PATHS, line_no, excerpt))

    for declared in artifact.files:
        if not declared.startswith(config.output_prefix):
            violations.append(Violation(RULE_PATHS, 0, f"declared file {declared}"))

    return report(violations)

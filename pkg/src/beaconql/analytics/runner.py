"""Isolated execution of guarded scripts in an external interpreter.

Each run owns a fresh sandbox directory: inputs materialize as one CSV per
frame (plus a JSON sidecar naming object/list columns), a wrapper script
pre-binds the allowlisted libraries and loads the frames, and the guest
script runs appended to it with its ``/tmp/`` output paths remapped into
the sandbox. Streams are captured at process level; only declared files
are collected; the directory is destroyed afterwards.
"""
from __future__ import annotations

import hashlib
import json
import os
import shutil
import subprocess
import sys
import tempfile
import time
import uuid
from csv import writer as csv_writer
from dataclasses import dataclass
from io import StringIO
from typing import Optional, Sequence

from ..sdk import ResultFrame
from .artifact import ScriptArtifact
from .guard import GuardReport


class AnalyticsError(Exception):
    pass


class GuardNotPassed(AnalyticsError):
    pass


class InterpreterMissing(AnalyticsError):
    pass


@dataclass(frozen=True)
class ExecutionResult:
    stdout: str
    stderr: str
    exit_status: int
    produced_files: tuple[tuple[str, bytes], ...]   # (declared path, content)
    undeclared_files: tuple[str, ...]               # reported, never returned
    wall_time: float


class AnalyticsTimeout(AnalyticsError):
    """Wall-clock limit hit; carries whatever output was captured."""

    def __init__(self, partial: ExecutionResult):
        super().__init__(f"script exceeded {partial.wall_time:.1f}s")
        self.partial = partial


@dataclass(frozen=True)
class AnalyticsConfig:
    interpreter: Optional[str] = None
    timeout: float = 30.0
    output_cap: int = 32 * 1024 * 1024
    sandbox_root: Optional[str] = None
    declared_prefix: str = "/tmp/"


_probe_cache: dict[str, bool] = {}


def _has_guest_libraries(interpreter: str) -> bool:
    if interpreter not in _probe_cache:
        try:
            proc = subprocess.run(
                [interpreter, "-c", "import pandas, numpy, matplotlib, seaborn"],
                capture_output=True, timeout=120,
            )
            _probe_cache[interpreter] = proc.returncode == 0
        except (OSError, subprocess.TimeoutExpired):
            _probe_cache[interpreter] = False
    return _probe_cache[interpreter]


def resolve_interpreter(config: AnalyticsConfig = AnalyticsConfig()) -> str:
    """Pick the guest interpreter, verifying the pre-imported set exists."""
    candidates = [config.interpreter, os.environ.get("BEACONQL_GUEST_PYTHON"), sys.executable]
    for candidate in candidates:
        if candidate and shutil.which(candidate) and _has_guest_libraries(candidate):
            return candidate
    raise InterpreterMissing(
        "no interpreter with pandas/numpy/matplotlib/seaborn available; "
        "set AnalyticsConfig.interpreter or BEACONQL_GUEST_PYTHON")


def _frame_to_csv(frame: ResultFrame) -> tuple[str, list[str]]:
    """Returns CSV text and the columns serialized as JSON strings."""
    json_columns = [c.name for c in frame.columns if c.kind in ("object", "list")]
    buffer = StringIO()
    writer = csv_writer(buffer)
    writer.writerow(frame.column_names)
    for row in frame.rows:
        out = []
        for column, cell in zip(frame.columns, row):
            if cell is None:
                out.append("")
            elif column.name in json_columns:
                out.append(json.dumps(cell))
            else:
                out.append(cell)
        writer.writerow(out)
    return buffer.getvalue(), json_columns


_WRAPPER_PREAMBLE = """\
import json
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns
"""

_FRAME_LOADER = """\
{name} = pd.read_csv({csv_path!r})
with open({meta_path!r}) as _fh:
    _meta = json.load(_fh)
for _col in _meta["json_columns"]:
    {name}[_col] = {name}[_col].map(lambda v: json.loads(v) if isinstance(v, str) and v else v)
"""


def _comment_block(title: str, lines: Sequence[str]) -> str:
    if not lines:
        return ""
    body = "\n".join(f"# {line}" for line in lines)
    return f"# {title}\n{body}\n"


def run_script(artifact: ScriptArtifact,
               inputs: Sequence[tuple[str, ResultFrame]],
               guard: GuardReport,
               config: AnalyticsConfig = AnalyticsConfig()) -> ExecutionResult:
    """Execute a guarded artifact over the given frames.

    Demands a pass verdict computed on the exact bytes being executed;
    re-guard after any edit.
    """
    if not guard.passed:
        raise GuardNotPassed("guard verdict is reject")
    if guard.code_sha256 != hashlib.sha256(artifact.code.encode("utf-8")).hexdigest():
        raise GuardNotPassed("guard verdict was computed on different code")
    interpreter = resolve_interpreter(config)

    root = config.sandbox_root or tempfile.gettempdir()
    run_dir = os.path.join(root, f"beaconql-run-{uuid.uuid4().hex}")
    out_dir = os.path.join(run_dir, "out")
    os.makedirs(out_dir)
    try:
        parts = [_WRAPPER_PREAMBLE]
        for name, frame in inputs:
            csv_text, json_columns = _frame_to_csv(frame)
            csv_path = os.path.join(run_dir, f"{name}.csv")
            meta_path = os.path.join(run_dir, f"{name}.columns.json")
            with open(csv_path, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
            with open(meta_path, "w", encoding="utf-8") as fh:
                json.dump({"json_columns": json_columns}, fh)
            parts.append(_FRAME_LOADER.format(name=name, csv_path=csv_path,
                                              meta_path=meta_path))

        out_prefix = out_dir + os.sep
        guest_code = artifact.code.replace(config.declared_prefix, out_prefix)
        parts.append(_comment_block("assumptions:", artifact.assumptions))
        parts.append(_comment_block("feedback:", artifact.feedback))
        parts.append(guest_code)
        wrapper_path = os.path.join(run_dir, "wrapper.py")
        with open(wrapper_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(parts))

        env = {
            "PATH": os.environ.get("PATH", ""),
            "HOME": run_dir,
            "MPLCONFIGDIR": os.path.join(run_dir, ".mpl"),
        }
        started = time.monotonic()
        proc = subprocess.Popen([interpreter, wrapper_path], cwd=run_dir, env=env,
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE)
        timed_out = False
        try:
            stdout_b, stderr_b = proc.communicate(timeout=config.timeout)
        except subprocess.TimeoutExpired:
            timed_out = True
            proc.kill()
            stdout_b, stderr_b = proc.communicate()
        wall_time = time.monotonic() - started

        cap = config.output_cap
        stdout = stdout_b[:cap].decode("utf-8", errors="replace")
        stderr = stderr_b[:cap].decode("utf-8", errors="replace")

        produced: list[tuple[str, bytes]] = []
        declared_actual = {}
        for declared in artifact.files:
            declared_actual[declared] = declared.replace(config.declared_prefix, out_prefix)
        for declared, actual in declared_actual.items():
            if os.path.isfile(actual) and os.path.getsize(actual) <= cap:
                with open(actual, "rb") as fh:
                    produced.append((declared, fh.read()))

        undeclared = []
        for dirpath, _dirnames, filenames in os.walk(out_dir):
            for filename in filenames:
                full = os.path.join(dirpath, filename)
                if full not in declared_actual.values():
                    undeclared.append(full.replace(out_prefix, config.declared_prefix))

        result = ExecutionResult(
            stdout=stdout,
            stderr=stderr,
            exit_status=proc.returncode,
            produced_files=tuple(produced),
            undeclared_files=tuple(sorted(undeclared)),
            wall_time=wall_time,
        )
        if timed_out:
            raise AnalyticsTimeout(result)
        return result
    finally:
        shutil.rmtree(run_dir, ignore_errors=True)

// Code review pane: editable buffer, guard badge, run button, stream panes
// and a produced-file gallery. No code ever executes client-side; Run only
// posts the buffer to the analysis/run endpoint, and the buffer's latest
// authoritative guard verdict gates the button: an initial reject, or a
// server-side rejection of these exact bytes, disables Run until the user
// edits the code again.

import type { AnalysisResponse, GuardViolation, RunResponse } from "./types.js";

export interface RunOutcome {
  ok: boolean;
  run?: RunResponse;
  violations?: GuardViolation[];
}

export interface ReviewPane {
  root: HTMLElement;
  code(): string;
  runEnabled(): boolean;
  showOutcome(outcome: RunOutcome): void;
  showTimeout(partialStdout: string, partialStderr: string): void;
}

export function createReviewPane(
  doc: Document,
  analysis: AnalysisResponse,
  onRun: (code: string) => void,
  artifactSrc: (name: string) => string,
): ReviewPane {
  const root = doc.createElement("section");
  root.className = "code-review";

  const verdicts = new Map<string, "pass" | "reject">();
  verdicts.set(analysis.artifact.code, analysis.guard.verdict);

  const badge = doc.createElement("span");
  badge.className = "guard-badge";
  const violationList = doc.createElement("ul");
  violationList.className = "violations";
  root.appendChild(badge);
  root.appendChild(violationList);

  const notes = doc.createElement("div");
  notes.className = "notes";
  for (const [title, items] of [
    ["assumptions", analysis.artifact.assumptions],
    ["feedback", analysis.artifact.feedback],
  ] as const) {
    if (items.length === 0) {
      continue;
    }
    const list = doc.createElement("ul");
    list.className = title;
    for (const item of items) {
      const li = doc.createElement("li");
      li.textContent = item;
      list.appendChild(li);
    }
    notes.appendChild(list);
  }
  root.appendChild(notes);

  const buffer = doc.createElement("textarea");
  buffer.className = "code-buffer";
  buffer.value = analysis.artifact.code;
  buffer.rows = 18;
  root.appendChild(buffer);

  const run = doc.createElement("button");
  run.type = "button";
  run.className = "run";
  run.textContent = "Run";
  root.appendChild(run);

  const stdout = doc.createElement("pre");
  stdout.className = "stdout";
  const stderr = doc.createElement("pre");
  stderr.className = "stderr";
  root.appendChild(stdout);
  root.appendChild(stderr);

  const gallery = doc.createElement("div");
  gallery.className = "artifact-gallery";
  root.appendChild(gallery);

  function refresh(): void {
    const verdict = verdicts.get(buffer.value);
    const rejected = verdict === "reject";
    run.disabled = rejected;
    badge.textContent = verdict === "pass" ? "guard: pass"
      : rejected ? "guard: reject" : "guard: unvetted edit";
    badge.classList.toggle("reject", rejected);
    showViolations(rejected ? lastViolations : []);
  }

  let lastViolations: GuardViolation[] = analysis.guard.violations;

  function showViolations(violations: GuardViolation[]): void {
    violationList.textContent = "";
    for (const violation of violations) {
      const li = doc.createElement("li");
      li.textContent = `${violation.rule} line ${violation.line}: ${violation.excerpt}`;
      violationList.appendChild(li);
    }
  }

  buffer.addEventListener("input", refresh);
  run.onclick = () => {
    if (!run.disabled) {
      onRun(buffer.value);
    }
  };
  refresh();

  return {
    root,
    code: () => buffer.value,
    runEnabled: () => !run.disabled,
    showOutcome(outcome: RunOutcome): void {
      if (!outcome.ok) {
        verdicts.set(buffer.value, "reject");
        lastViolations = outcome.violations ?? [];
        refresh();
        return;
      }
      verdicts.set(buffer.value, "pass");
      const result = outcome.run;
      if (!result) {
        return;
      }
      stdout.textContent = result.stdout;
      stderr.textContent = result.stderr;
      gallery.textContent = "";
      for (const name of result.files) {
        if (/\.(png|jpg|jpeg|svg|gif)$/i.test(name)) {
          const img = doc.createElement("img");
          img.src = artifactSrc(name);
          img.alt = name;
          gallery.appendChild(img);
        } else {
          const link = doc.createElement("a");
          link.href = artifactSrc(name);
          link.textContent = name;
          link.setAttribute("download", name);
          gallery.appendChild(link);
        }
      }
      refresh();
    },
    showTimeout(partialStdout: string, partialStderr: string): void {
      const banner = doc.createElement("div");
      banner.className = "timeout-banner";
      banner.textContent = "Execution timed out; partial output below.";
      root.insertBefore(banner, stdout);
      stdout.textContent = partialStdout;
      stderr.textContent = partialStderr;
    },
  };
}

import { describe, expect, it, vi } from "vitest";

import { createReviewPane } from "../src/review.js";
import { sampleAnalysis } from "./helpers.js";

const artifactSrc = (name: string) => `/artifacts/${name}`;

describe("code review pane", () => {
  it("enables Run when the guard verdict is pass", () => {
    const pane = createReviewPane(document, sampleAnalysis("pass"), () => {}, artifactSrc);
    expect(pane.runEnabled()).toBe(true);
  });

  it("disables Run on guard reject and lists violations", () => {
    const pane = createReviewPane(document, sampleAnalysis("reject"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    expect(pane.runEnabled()).toBe(false);
    const button = pane.root.querySelector<HTMLButtonElement>("button.run")!;
    expect(button.disabled).toBe(true);
    expect(pane.root.querySelector(".violations")!.textContent).toContain("R1");
  });

  it("editing a rejected buffer re-enables Run until the server says otherwise", () => {
    const pane = createReviewPane(document, sampleAnalysis("reject"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    const buffer = pane.root.querySelector<HTMLTextAreaElement>("textarea")!;
    buffer.value = "counts = df['karyotypic_sex'].value_counts()\n";
    buffer.dispatchEvent(new Event("input"));
    expect(pane.runEnabled()).toBe(true);
  });

  it("a server-side rejection of the exact bytes disables Run again", () => {
    const pane = createReviewPane(document, sampleAnalysis("pass"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    pane.showOutcome({
      ok: false,
      violations: [{ rule: "R4", line: 2, excerpt: "eval('x')" }],
    });
    expect(pane.runEnabled()).toBe(false);
    expect(pane.root.querySelector(".violations")!.textContent).toContain("R4");
  });

  it("Run only invokes the callback with the current buffer, never executes locally", () => {
    const onRun = vi.fn();
    const pane = createReviewPane(document, sampleAnalysis("pass"), onRun, artifactSrc);
    document.body.appendChild(pane.root);
    const button = pane.root.querySelector<HTMLButtonElement>("button.run")!;
    button.click();
    expect(onRun).toHaveBeenCalledTimes(1);
    expect(onRun).toHaveBeenCalledWith(sampleAnalysis().artifact.code);
  });

  it("stdout/stderr panes populate from a failing-script run", () => {
    const pane = createReviewPane(document, sampleAnalysis("pass"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    pane.showOutcome({
      ok: true,
      run: {
        state: "done",
        stdout: "partial progress line",
        stderr: "Traceback (most recent call last):\nValueError: boom",
        exit_status: 1,
        files: [],
        undeclared_files: [],
        wall_time: 0.4,
      },
    });
    expect(pane.root.querySelector(".stdout")!.textContent).toContain("partial progress");
    expect(pane.root.querySelector(".stderr")!.textContent).toContain("ValueError: boom");
  });

  it("image artifacts render inline in the gallery", () => {
    const pane = createReviewPane(document, sampleAnalysis("pass"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    pane.showOutcome({
      ok: true,
      run: {
        state: "done", stdout: "", stderr: "", exit_status: 0,
        files: ["pie.png", "table.csv"], undeclared_files: [], wall_time: 1.0,
      },
    });
    const img = pane.root.querySelector<HTMLImageElement>(".artifact-gallery img")!;
    expect(img.getAttribute("src")).toBe("/artifacts/pie.png");
    const link = pane.root.querySelector<HTMLAnchorElement>(".artifact-gallery a")!;
    expect(link.textContent).toBe("table.csv");
  });

  it("timeout shows a banner with partial output", () => {
    const pane = createReviewPane(document, sampleAnalysis("pass"), () => {}, artifactSrc);
    document.body.appendChild(pane.root);
    pane.showTimeout("got this far", "");
    expect(pane.root.querySelector(".timeout-banner")).not.toBeNull();
    expect(pane.root.querySelector(".stdout")!.textContent).toBe("got this far");
  });
});

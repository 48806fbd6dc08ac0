import { describe, expect, it } from "vitest";

import { renderConfirmationCard } from "../src/card.js";
import type { ConfirmBody } from "../src/types.js";
import { sampleCard } from "./helpers.js";

function lastInput(root: HTMLElement, name: string): HTMLInputElement {
  const found = root.querySelectorAll<HTMLInputElement>(`input[name="${name}"]`);
  return found[found.length - 1];
}

describe("confirmation card", () => {
  it("round-trips card fields into the confirm body unchanged", () => {
    let confirmed: ConfirmBody | null = null;
    const form = renderConfirmationCard(document, sampleCard(), (body) => {
      confirmed = body;
    });
    document.body.appendChild(form.root);
    form.root.querySelector<HTMLButtonElement>("button.confirm")!.click();
    expect(confirmed).not.toBeNull();
    expect(confirmed!.scope).toBe("individuals");
    expect(confirmed!.granularity).toBe("record");
    expect(confirmed!.variant?.reference_name).toBe("4");
    expect(confirmed!.variant?.start).toEqual([90600000]);
    expect(confirmed!.filters.map((f) => f.term)).toEqual(["parkinson disease"]);
  });

  it("user edits persist into the confirm body", () => {
    let confirmed: ConfirmBody | null = null;
    const form = renderConfirmationCard(document, sampleCard(), (body) => {
      confirmed = body;
    });
    document.body.appendChild(form.root);
    const chrom = form.root.querySelector<HTMLInputElement>('input[name="reference_name"]')!;
    chrom.value = "X";
    const granularity = form.root.querySelector<HTMLSelectElement>('select[name="granularity"]')!;
    granularity.value = "count";
    form.root.querySelector<HTMLButtonElement>("button.confirm")!.click();
    expect(confirmed!.variant?.reference_name).toBe("X");
    expect(confirmed!.granularity).toBe("count");
  });

  it("added filters appear in the body; removed ones vanish", () => {
    let confirmed: ConfirmBody | null = null;
    const form = renderConfirmationCard(document, sampleCard(), (body) => {
      confirmed = body;
    });
    document.body.appendChild(form.root);

    const addButtons = Array.from(form.root.querySelectorAll("button"))
      .filter((b) => b.textContent === "add filter");
    addButtons[0].click();
    lastInput(form.root, "term").value = "asthma";

    form.root.querySelector<HTMLButtonElement>("button.confirm")!.click();
    expect(confirmed!.filters.map((f) => f.term)).toEqual(["parkinson disease", "asthma"]);

    const removers = Array.from(form.root.querySelectorAll("button"))
      .filter((b) => b.textContent === "remove");
    removers[0].click();
    form.root.querySelector<HTMLButtonElement>("button.confirm")!.click();
    expect(confirmed!.filters.map((f) => f.term)).toEqual(["asthma"]);
  });

  it("flags unknown fields for the user", () => {
    const card = sampleCard();
    card.granularity = { value: null, status: "unknown", reason: "" };
    const form = renderConfirmationCard(document, card, () => {});
    const granularity = form.root.querySelector<HTMLSelectElement>('select[name="granularity"]')!;
    expect(granularity.classList.contains("flagged")).toBe(true);
  });

  it("shows residue terms instead of dropping them", () => {
    const card = sampleCard();
    card.residue = ["variantType = 'SNP'"];
    const form = renderConfirmationCard(document, card, () => {});
    expect(form.root.querySelector(".residue")!.textContent).toContain("variantType = 'SNP'");
  });
});

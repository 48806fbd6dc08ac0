// Confirmation card form: every extracted field is editable, unknown or
// residue fields are visually flagged, and submitting maps 1:1 onto the
// confirm endpoint body.

import type { Card, ConfirmBody, FilterFields, VariantFields } from "./types.js";

const SCOPES = ["individuals", "biosamples", "runs", "analyses", "datasets",
  "cohorts", "g_variants"];
const GRANULARITIES = ["record", "count", "boolean"];
const FILTER_TYPES = ["ontology", "alphanumeric", "custom"];

function option(doc: Document, value: string, selected: boolean): HTMLOptionElement {
  const el = doc.createElement("option");
  el.value = value;
  el.textContent = value || "(choose)";
  el.selected = selected;
  return el;
}

function labeled(doc: Document, text: string, input: HTMLElement): HTMLElement {
  const wrap = doc.createElement("label");
  wrap.className = "field";
  const span = doc.createElement("span");
  span.textContent = text;
  wrap.appendChild(span);
  wrap.appendChild(input);
  return wrap;
}

function enumSelect(doc: Document, name: string, values: string[],
                    current: string | null, flagged: boolean): HTMLSelectElement {
  const select = doc.createElement("select");
  select.name = name;
  select.appendChild(option(doc, "", current === null));
  for (const value of values) {
    select.appendChild(option(doc, value, current === value));
  }
  if (flagged) {
    select.classList.add("flagged");
  }
  return select;
}

function textInput(doc: Document, name: string, value: string | null): HTMLInputElement {
  const input = doc.createElement("input");
  input.type = "text";
  input.name = name;
  input.value = value ?? "";
  return input;
}

function positionsOf(raw: string): number[] {
  return raw.split(/[\s,]+/).filter((s) => s.length > 0).map((s) => Number(s));
}

interface FilterRow {
  root: HTMLElement;
  read(): FilterFields | null;
}

function filterRow(doc: Document, initial: FilterFields | null): FilterRow {
  const root = doc.createElement("div");
  root.className = "filter-row";
  const term = textInput(doc, "term", initial?.term ?? "");
  const type = enumSelect(doc, "filter_type", FILTER_TYPES,
    initial?.filter_type ?? "custom", false);
  const code = textInput(doc, "id", initial?.id ?? null);
  code.placeholder = "ontology code";
  const value = textInput(doc, "value", initial?.value ?? null);
  value.placeholder = "%pattern%";
  const scope = enumSelect(doc, "filter_scope", SCOPES, initial?.scope ?? null, false);
  const remove = doc.createElement("button");
  remove.type = "button";
  remove.textContent = "remove";
  remove.onclick = () => root.remove();
  root.appendChild(labeled(doc, "term", term));
  root.appendChild(labeled(doc, "type", type));
  root.appendChild(labeled(doc, "code", code));
  root.appendChild(labeled(doc, "value", value));
  root.appendChild(labeled(doc, "scope", scope));
  root.appendChild(remove);
  return {
    root,
    read(): FilterFields | null {
      if (!root.isConnected) {
        return null;
      }
      const row: FilterFields = {
        term: term.value,
        filter_type: type.value || "custom",
        id: code.value || null,
        value: value.value || null,
        scope: scope.value || "unknown",
      };
      if (!row.term && !row.id && !row.value) {
        return null;
      }
      return row;
    },
  };
}

export interface CardForm {
  root: HTMLElement;
  read(): ConfirmBody;
}

export function renderConfirmationCard(
  doc: Document,
  card: Card,
  onConfirm: (body: ConfirmBody) => void,
): CardForm {
  const root = doc.createElement("form");
  root.className = "confirmation-card";
  root.onsubmit = (event) => {
    event.preventDefault();
  };

  const scope = enumSelect(doc, "scope", SCOPES, card.scope.value,
    card.scope.status !== "known");
  const granularity = enumSelect(doc, "granularity", GRANULARITIES,
    card.granularity.value, card.granularity.status !== "known");
  root.appendChild(labeled(doc, "scope", scope));
  root.appendChild(labeled(doc, "granularity", granularity));

  const variantBox = doc.createElement("fieldset");
  const legend = doc.createElement("legend");
  legend.textContent = "variant";
  variantBox.appendChild(legend);
  if (card.variant_status.status !== "known") {
    variantBox.classList.add("flagged");
  }
  const variant = card.variant;
  const assembly = textInput(doc, "assembly_id", variant?.assembly_id ?? null);
  const chrom = textInput(doc, "reference_name", variant?.reference_name ?? null);
  const start = textInput(doc, "start", variant?.start.join(" ") ?? "");
  const end = textInput(doc, "end", variant?.end.join(" ") ?? "");
  const refBases = textInput(doc, "reference_bases", variant?.reference_bases ?? null);
  const altBases = textInput(doc, "alternate_bases", variant?.alternate_bases ?? null);
  const gene = textInput(doc, "gene_id", variant?.gene_id ?? null);
  variantBox.appendChild(labeled(doc, "assembly", assembly));
  variantBox.appendChild(labeled(doc, "chromosome", chrom));
  variantBox.appendChild(labeled(doc, "start", start));
  variantBox.appendChild(labeled(doc, "end", end));
  variantBox.appendChild(labeled(doc, "ref bases", refBases));
  variantBox.appendChild(labeled(doc, "alt bases", altBases));
  variantBox.appendChild(labeled(doc, "gene", gene));
  root.appendChild(variantBox);

  const filtersBox = doc.createElement("fieldset");
  const filtersLegend = doc.createElement("legend");
  filtersLegend.textContent = "filters";
  filtersBox.appendChild(filtersLegend);
  if (card.filters_status.status !== "known") {
    filtersBox.classList.add("flagged");
  }
  const rows: FilterRow[] = [];
  for (const filter of card.filters) {
    const row = filterRow(doc, filter);
    rows.push(row);
    filtersBox.appendChild(row.root);
  }
  const addFilter = doc.createElement("button");
  addFilter.type = "button";
  addFilter.textContent = "add filter";
  addFilter.onclick = () => {
    const row = filterRow(doc, null);
    rows.push(row);
    filtersBox.insertBefore(row.root, addFilter);
  };
  filtersBox.appendChild(addFilter);
  root.appendChild(filtersBox);

  if (card.residue.length > 0) {
    const residue = doc.createElement("ul");
    residue.className = "residue flagged";
    for (const item of card.residue) {
      const li = doc.createElement("li");
      li.textContent = `unclassified: ${item}`;
      residue.appendChild(li);
    }
    root.appendChild(residue);
  }

  function read(): ConfirmBody {
    const anyVariantField = [assembly, chrom, start, end, refBases, altBases, gene]
      .some((input) => input.value.trim().length > 0);
    const variantBody: VariantFields | null = anyVariantField
      ? {
          assembly_id: assembly.value || null,
          reference_name: chrom.value || null,
          start: positionsOf(start.value),
          end: positionsOf(end.value),
          reference_bases: refBases.value || null,
          alternate_bases: altBases.value || null,
          gene_id: gene.value || null,
        }
      : null;
    return {
      scope: scope.value || null,
      granularity: granularity.value || null,
      variant: variantBody,
      filters: rows.map((row) => row.read()).filter((f): f is FilterFields => f !== null),
    };
  }

  const confirm = doc.createElement("button");
  confirm.type = "submit";
  confirm.className = "confirm";
  confirm.textContent = "Confirm and run query";
  confirm.onclick = () => onConfirm(read());
  root.appendChild(confirm);

  return { root, read };
}

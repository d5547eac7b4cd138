// Appetite panel: shows the current appetite and lets the assessor move it by
// entering two anchor triples. The midpoint is computed by the service; the
// panel just displays whatever came back.

import type { UiState } from "./state.js";
import { escapeHtml } from "./grid.js";

export function parseAnchorTriple(raw: string): [number, number, number] | null {
  const parts = raw.split(",").map((part) => part.trim());
  if (parts.length !== 3) return null;
  const numbers = parts.map((part) => Number(part));
  if (numbers.some((n) => !Number.isInteger(n))) return null;
  return [numbers[0], numbers[1], numbers[2]];
}

export function renderAppetitePanel(state: UiState): string {
  const appetite = state.register ? String(state.register.appetite) : "…";
  const error = state.fieldErrors.get("anchors") ?? state.fieldErrors.get("appetite");
  const errorLine = error
    ? `<p class="field-error">${escapeHtml(error)}</p>`
    : "";
  return (
    '<h2>Risk appetite</h2>' +
    `<p>Current appetite: <strong class="appetite-value">${appetite}</strong></p>` +
    '<label>Low anchor (A,T,V) <input id="anchor-low" value="1,10,10"></label> ' +
    '<label>High anchor (A,T,V) <input id="anchor-high" value="2,10,10"></label> ' +
    '<button id="apply-anchors">Set appetite from anchors</button>' +
    errorLine
  );
}

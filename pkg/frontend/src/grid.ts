// Register grid: rows exactly as served (risk desc, id asc), colored by
// asset category, with the appetite divider drawn after the last RED row.
// Likelihood and asset-value cells are editable; an edit round-trips through
// the service and the row re-renders from the response.

import { bandColor, categoryColor } from "./colors.js";
import type { UiState } from "./state.js";
import { visibleEntries } from "./state.js";
import type { EntryJson } from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function editableCell(entry: EntryJson, field: string, value: number): string {
  return (
    `<td><input type="number" class="cell-edit" data-entry="${entry.id}" ` +
    `data-field="${field}" value="${value}"></td>`
  );
}

function entryRow(entry: EntryJson, selected: boolean): string {
  const rowClass = selected ? "entry-row selected" : "entry-row";
  return (
    `<tr class="${rowClass}" data-entry="${entry.id}" ` +
    `style="background:${categoryColor(entry.asset.category)}">` +
    `<td class="id-cell">${entry.id}</td>` +
    `<td>${escapeHtml(entry.asset.name)}</td>` +
    `<td>${escapeHtml(entry.asset.category)}</td>` +
    `<td>${escapeHtml(entry.asset.owner)}</td>` +
    editableCell(entry, "asset.value", entry.asset.value) +
    `<td>${escapeHtml(entry.threat.name)}</td>` +
    editableCell(entry, "threat.likelihood", entry.threat.likelihood) +
    `<td>${escapeHtml(entry.vulnerability.name)}</td>` +
    editableCell(entry, "vulnerability.likelihood", entry.vulnerability.likelihood) +
    `<td class="risk-cell">${entry.risk}</td>` +
    `<td><span class="band-chip" style="background:${bandColor(entry.band)}">` +
    `${escapeHtml(entry.band)}</span></td>` +
    `<td class="treatment-cell">${escapeHtml(entry.treatment)}</td>` +
    `</tr>`
  );
}

const DIVIDER_ROW =
  '<tr class="appetite-divider"><td colspan="12">— risk appetite —</td></tr>';

export function renderGrid(state: UiState): string {
  if (!state.register) {
    return '<p class="hint">Loading register…</p>';
  }
  const entries = visibleEntries(state);
  const rows: string[] = [];
  for (let i = 0; i < entries.length; i++) {
    rows.push(entryRow(entries[i], entries[i].id === state.selectedEntryId));
    // the divider sits under the last served-RED row; with the default band
    // fractions RED is exactly "above appetite", so no local comparison needed
    const nextBand = entries[i + 1]?.band;
    if (entries[i].band === "RED" && nextBand !== undefined && nextBand !== "RED") {
      rows.push(DIVIDER_ROW);
    }
  }
  const filterNote = state.cellFilter
    ? `<p class="hint">Showing heat-map cell A=${state.cellFilter.assetValue}, ` +
      `column ${state.cellFilter.column} ` +
      '(<a href="#" id="clear-filter">show all</a>)</p>'
    : "";
  return (
    filterNote +
    '<table class="register-grid"><thead><tr>' +
    "<th>id</th><th>asset</th><th>category</th><th>owner</th><th>A</th>" +
    "<th>threat</th><th>T</th><th>vulnerability</th><th>V</th>" +
    "<th>risk</th><th>band</th><th>treatment</th>" +
    "</tr></thead><tbody>" +
    rows.join("") +
    "</tbody></table>"
  );
}

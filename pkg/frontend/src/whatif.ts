// What-if panel: pick catalog controls for the selected entry, preview the
// service's before/after snapshot, and optionally commit the plan as real
// entry mutations. All residual numbers come from the snapshot response.

import { escapeHtml } from "./grid.js";
import type { UiState } from "./state.js";
import { entryById } from "./state.js";
import type { ControlJson, EntryJson, WhatifDeltaJson } from "./types.js";

// Catalog tag matching (name equality, case-insensitive); an empty tag set
// means the control is generally applicable. This mirrors the service rule so
// the picker only offers controls the service will accept.
export function controlApplies(control: ControlJson, entry: EntryJson): boolean {
  if (control.applies_to.length === 0) return true;
  const tags = control.applies_to.map((tag) => tag.toLowerCase());
  return (
    tags.includes(entry.threat.name.toLowerCase()) ||
    tags.includes(entry.vulnerability.name.toLowerCase())
  );
}

export function applicableControls(state: UiState, entry: EntryJson): ControlJson[] {
  return state.controls.filter((control) => controlApplies(control, entry));
}

function controlRow(control: ControlJson, checked: boolean): string {
  return (
    `<li><label><input type="checkbox" class="control-pick" ` +
    `data-control="${escapeHtml(control.id)}"${checked ? " checked" : ""}> ` +
    `<code>${escapeHtml(control.id)}</code> ${escapeHtml(control.name)} ` +
    `<em>(${escapeHtml(control.category)}, -${control.threat_reduction}T/-${control.vulnerability_reduction}V)</em>` +
    `</label></li>`
  );
}

function deltaLine(delta: WhatifDeltaJson): string {
  const depth = delta.defense_in_depth.satisfied
    ? '<span class="depth-ok">defense in depth: satisfied</span>'
    : `<span class="depth-warning">defense in depth: missing ` +
      `${escapeHtml(delta.defense_in_depth.missing_categories.join(", "))}</span>`;
  return (
    `<li class="delta" data-entry="${delta.entry_id}">entry ${delta.entry_id}: ` +
    `<span class="risk-transition">${delta.risk_before} → ${delta.risk_after}</span>, ` +
    `<span class="band-transition">${escapeHtml(delta.band_before)} → ${escapeHtml(delta.band_after)}</span> ` +
    depth +
    `</li>`
  );
}

export function renderWhatifPanel(state: UiState): string {
  const parts = ["<h2>What-if</h2>"];
  const selected = state.selectedEntryId === null ? undefined : entryById(state, state.selectedEntryId);
  if (!selected) {
    parts.push('<p class="hint">Select a register row to plan controls for it.</p>');
  } else {
    const picked = state.plan.get(selected.id) ?? [];
    const options = applicableControls(state, selected);
    parts.push(
      `<p>Planning for entry <strong>${selected.id}</strong> ` +
      `(${escapeHtml(selected.asset.name)} / ${escapeHtml(selected.threat.name)})</p>`,
    );
    if (options.length === 0) {
      parts.push('<p class="hint">No catalog control applies to this entry.</p>');
    } else {
      parts.push(
        '<ul class="control-list">' +
        options.map((control) => controlRow(control, picked.includes(control.id))).join("") +
        "</ul>",
      );
    }
  }
  if (state.plan.size > 0) {
    parts.push('<button id="run-whatif">Preview residual risk</button>');
  }
  const error = state.fieldErrors.get("assignments");
  if (error) {
    parts.push(`<p class="field-error">${escapeHtml(error)}</p>`);
  }
  const snapshot = state.lastSnapshot;
  if (snapshot) {
    parts.push('<ul class="delta-list">' + snapshot.deltas.map(deltaLine).join("") + "</ul>");
    parts.push(
      `<p class="totals">total risk: ${snapshot.total_before} → ${snapshot.total_after}</p>`,
    );
    parts.push('<button id="commit-plan">Commit plan to register</button>');
  }
  return parts.join("");
}

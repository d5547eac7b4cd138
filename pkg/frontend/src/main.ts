// DOM bootstrap: render the four panels from one UiState and wire events to
// the state actions. Rendering is a pure state -> HTML string mapping (see
// grid/appetite/heatmap/whatif modules), so this file is the only one that
// touches the document.

import { renderAppetitePanel, parseAnchorTriple } from "./appetite.js";
import { renderGrid } from "./grid.js";
import { renderHeatmap } from "./heatmap.js";
import {
  commitPlan,
  initialState,
  loadAll,
  runWhatif,
  selectEntry,
  setAppetiteAnchors,
  setCellFilter,
  submitEntryPatch,
  toggleControl,
  type UiState,
} from "./state.js";
import { renderWhatifPanel } from "./whatif.js";
import type { EntryPatch } from "./types.js";

const state: UiState = initialState();

function section(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element;
}

function render(): void {
  section("banner").innerHTML = state.conflict
    ? '<div class="conflict">Register changed elsewhere (revision conflict). ' +
      '<button id="reload">Reload</button></div>'
    : "";
  section("appetite").innerHTML = renderAppetitePanel(state);
  section("heatmap").innerHTML = renderHeatmap(state);
  section("grid").innerHTML = renderGrid(state);
  section("whatif").innerHTML = renderWhatifPanel(state);
  const requestError = state.fieldErrors.get("request");
  if (requestError) {
    section("banner").innerHTML += `<div class="conflict">${requestError}</div>`;
  }
}

function patchFor(field: string, value: number): EntryPatch | null {
  switch (field) {
    case "asset.value":
      return { asset: { value } };
    case "threat.likelihood":
      return { threat: { likelihood: value } };
    case "vulnerability.likelihood":
      return { vulnerability: { likelihood: value } };
    default:
      return null;
  }
}

async function onEdit(input: HTMLInputElement): Promise<void> {
  const entryId = Number(input.dataset.entry);
  const patch = patchFor(input.dataset.field ?? "", Number(input.value));
  if (!patch || !Number.isInteger(entryId)) return;
  await submitEntryPatch(state, entryId, patch);
  render();
}

async function onApplyAnchors(): Promise<void> {
  const low = parseAnchorTriple((document.getElementById("anchor-low") as HTMLInputElement).value);
  const high = parseAnchorTriple(
    (document.getElementById("anchor-high") as HTMLInputElement).value,
  );
  if (!low || !high) {
    state.fieldErrors.set("anchors", "anchors must be three comma-separated integers");
    render();
    return;
  }
  await setAppetiteAnchors(state, [low, high]);
  render();
}

function wire(): void {
  document.addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains("cell-edit")) {
      void onEdit(target as HTMLInputElement);
    } else if (target.classList.contains("control-pick")) {
      const controlId = (target as HTMLInputElement).dataset.control;
      if (controlId && state.selectedEntryId !== null) {
        toggleControl(state, state.selectedEntryId, controlId);
        render();
      }
    }
  });

  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "reload") {
      void loadAll(state).then(render);
      return;
    }
    if (target.id === "apply-anchors") {
      void onApplyAnchors();
      return;
    }
    if (target.id === "run-whatif") {
      void runWhatif(state).then(render);
      return;
    }
    if (target.id === "commit-plan") {
      void commitPlan(state).then(render);
      return;
    }
    if (target.id === "clear-filter") {
      event.preventDefault();
      setCellFilter(state, null);
      render();
      return;
    }
    const cell = target.closest<HTMLElement>(".heat-cell");
    if (cell) {
      setCellFilter(state, {
        assetValue: Number(cell.dataset.value),
        column: Number(cell.dataset.column),
      });
      render();
      return;
    }
    const row = target.closest<HTMLElement>(".entry-row");
    if (row && !(target instanceof HTMLInputElement)) {
      selectEntry(state, Number(row.dataset.entry));
      render();
    }
  });
}

async function boot(): Promise<void> {
  wire();
  render();
  await loadAll(state);
  render();
}

void boot();

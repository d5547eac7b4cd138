// UI state and the actions that change it. All scoring lives on the server:
// every risk, band, and treatment held here was received from a response,
// never derived locally. Actions resolve to the state they produced so the
// caller (DOM wiring or tests) can re-render from it.

import {
  ApiFailure,
  getControls,
  getHeatmap,
  getRegister,
  postWhatif,
  putAppetiteAnchors,
  putEntry,
} from "./api.js";
import type {
  ControlJson,
  EntryJson,
  EntryPatch,
  HeatmapResponse,
  RegisterResponse,
  WhatifAssignment,
  WhatifResponse,
} from "./types.js";

export interface CellFilter {
  assetValue: number;
  column: number;
}

export interface UiState {
  register: RegisterResponse | null;
  heatmap: HeatmapResponse | null;
  controls: ControlJson[];
  selectedEntryId: number | null;
  plan: Map<number, string[]>;
  lastSnapshot: WhatifResponse | null;
  cellFilter: CellFilter | null;
  // set when a mutation hit a 409; the UI offers reload-and-retry
  conflict: boolean;
  // field-path -> message from the latest 422, cleared on the next success
  fieldErrors: Map<string, string>;
}

export function initialState(): UiState {
  return {
    register: null,
    heatmap: null,
    controls: [],
    selectedEntryId: null,
    plan: new Map(),
    lastSnapshot: null,
    cellFilter: null,
    conflict: false,
    fieldErrors: new Map(),
  };
}

export function entryById(state: UiState, entryId: number): EntryJson | undefined {
  return state.register?.entries.find((entry) => entry.id === entryId);
}

function recordFailure(state: UiState, failure: ApiFailure): void {
  if (failure.isConflict) {
    state.conflict = true;
    return;
  }
  state.fieldErrors.set(failure.body.field ?? "request", failure.body.message);
}

async function handle<T>(state: UiState, work: Promise<T>): Promise<T | null> {
  try {
    const result = await work;
    state.fieldErrors.clear();
    return result;
  } catch (error) {
    if (error instanceof ApiFailure) {
      recordFailure(state, error);
      return null;
    }
    throw error;
  }
}

export async function loadAll(state: UiState): Promise<UiState> {
  state.register = await getRegister();
  state.heatmap = await getHeatmap();
  state.controls = (await getControls()).controls;
  state.conflict = false;
  return state;
}

async function refreshHeatmap(state: UiState): Promise<void> {
  state.heatmap = await getHeatmap();
}

// One edited likelihood or asset value -> one upsert; the grid re-renders
// from the returned register so displayed numbers are always the server's.
export async function submitEntryPatch(
  state: UiState,
  entryId: number,
  patch: EntryPatch,
): Promise<UiState> {
  if (!state.register) return state;
  const updated = await handle(state, putEntry(entryId, state.register.revision, patch));
  if (updated) {
    state.register = updated;
    await refreshHeatmap(state);
  }
  return state;
}

export async function setAppetiteAnchors(
  state: UiState,
  anchors: [number, number, number][],
): Promise<UiState> {
  if (!state.register) return state;
  const updated = await handle(state, putAppetiteAnchors(state.register.revision, anchors));
  if (updated) {
    state.register = updated;
    await refreshHeatmap(state);
  }
  return state;
}

export function selectEntry(state: UiState, entryId: number | null): UiState {
  state.selectedEntryId = entryId;
  state.lastSnapshot = null;
  return state;
}

export function toggleControl(state: UiState, entryId: number, controlId: string): UiState {
  const current = state.plan.get(entryId) ?? [];
  const next = current.includes(controlId)
    ? current.filter((id) => id !== controlId)
    : [...current, controlId];
  if (next.length === 0) {
    state.plan.delete(entryId);
  } else {
    state.plan.set(entryId, next);
  }
  state.lastSnapshot = null;
  return state;
}

export function planAssignments(state: UiState): WhatifAssignment[] {
  return [...state.plan.entries()]
    .sort(([a], [b]) => a - b)
    .map(([entry_id, control_ids]) => ({ entry_id, control_ids }));
}

// Pure exploration: the service computes the snapshot without touching the
// stored register, so the revision is unchanged until an explicit commit.
export async function runWhatif(state: UiState): Promise<UiState> {
  const snapshot = await handle(state, postWhatif(planAssignments(state)));
  if (snapshot) {
    state.lastSnapshot = snapshot;
  }
  return state;
}

// Committing replays the plan as ordinary entry upserts. The reductions are
// request inputs (like a user typing a new likelihood); the resulting risk
// and band still come back from the server.
export async function commitPlan(state: UiState): Promise<UiState> {
  if (!state.register) return state;
  const byId = new Map(state.controls.map((control) => [control.id, control]));
  for (const [entryId, controlIds] of [...state.plan.entries()].sort(([a], [b]) => a - b)) {
    const entry = entryById(state, entryId);
    if (!entry) continue;
    let threatReduction = 0;
    let vulnerabilityReduction = 0;
    for (const controlId of controlIds) {
      const control = byId.get(controlId);
      if (!control) continue;
      threatReduction += control.threat_reduction;
      vulnerabilityReduction += control.vulnerability_reduction;
    }
    const patch: EntryPatch = {
      threat: { likelihood: Math.max(1, entry.threat.likelihood - threatReduction) },
      vulnerability: {
        likelihood: Math.max(1, entry.vulnerability.likelihood - vulnerabilityReduction),
      },
    };
    const revision: number | undefined = state.register?.revision;
    if (revision === undefined) return state;
    const updated: RegisterResponse | null = await handle(
      state,
      putEntry(entryId, revision, patch),
    );
    if (!updated) return state;
    state.register = updated;
  }
  state.plan.clear();
  state.lastSnapshot = null;
  await refreshHeatmap(state);
  return state;
}

export function setCellFilter(state: UiState, filter: CellFilter | null): UiState {
  state.cellFilter = filter;
  return state;
}

export function visibleEntries(state: UiState): EntryJson[] {
  const entries = state.register?.entries ?? [];
  const filter = state.cellFilter;
  if (!filter || !state.heatmap) return entries;
  const row = state.heatmap.rows.find((r) => r.asset_value === filter.assetValue);
  const cell = row?.cells.find((c) => c.column === filter.column);
  const ids = new Set(cell?.entry_ids ?? []);
  return entries.filter((entry) => ids.has(entry.id));
}

// Canned service responses for unit tests. The risk/band values here are
// deliberately NOT all consistent with A*T*V so tests can prove the UI
// displays whatever the server said rather than recomputing.

import type {
  ControlJson,
  EntryJson,
  HeatmapResponse,
  RegisterResponse,
  WhatifResponse,
} from "../src/types.js";
import { initialState, type UiState } from "../src/state.js";

export function entry(overrides: Partial<EntryJson> & { id: number }): EntryJson {
  return {
    asset: { name: `Asset ${overrides.id}`, category: "Software", owner: "CIO", value: 3 },
    threat: { name: `Threat ${overrides.id}`, likelihood: 5 },
    vulnerability: { name: `Vulnerability ${overrides.id}`, likelihood: 5 },
    risk: 75,
    band: "GREEN",
    treatment: "transfer",
    ...overrides,
  };
}

export function cannedRegister(): RegisterResponse {
  return {
    revision: 1,
    appetite: 150,
    entries: [
      entry({
        id: 16,
        asset: { name: "Booking system", category: "Software", owner: "CIO", value: 5 },
        threat: { name: "Human error", likelihood: 8 },
        vulnerability: { name: "No training", likelihood: 9 },
        // wrong on purpose: 5*8*9 = 360, but the server said 999/YELLOW
        risk: 999,
        band: "YELLOW",
        treatment: "mitigate",
      }),
      entry({ id: 3, risk: 200, band: "RED", treatment: "avoid_eliminate" }),
      entry({ id: 7, risk: 40, band: "MONITOR", treatment: "accept_monitor" }),
    ],
  };
}

export function cannedHeatmap(): HeatmapResponse {
  const rows = [5, 4, 3, 2, 1].map((assetValue) => ({
    asset_value: assetValue,
    cells: Array.from({ length: 10 }, (_, i) => ({
      column: i + 1,
      band: "MONITOR",
      entry_ids: [] as number[],
    })),
  }));
  rows[0].cells[7] = { column: 8, band: "RED", entry_ids: [16] };
  rows[2].cells[2] = { column: 3, band: "GREEN", entry_ids: [3, 7] };
  return { revision: 1, appetite: 150, rows };
}

export function cannedControls(): ControlJson[] {
  return [
    {
      id: "C-ADM-03",
      name: "Security awareness and policies training",
      category: "Administrative",
      functions: ["Mitigate", "Prevent"],
      applies_to: ["Social engineering", "Human error"],
      threat_reduction: 3,
      vulnerability_reduction: 2,
      compensating_for: null,
    },
    {
      id: "C-TEC-10",
      name: "Centralised security monitoring and alerting",
      category: "Technical",
      functions: ["Detect"],
      applies_to: [],
      threat_reduction: 0,
      vulnerability_reduction: 0,
      compensating_for: null,
    },
    {
      id: "C-PHY-04",
      name: "Backup power generators",
      category: "Physical",
      functions: ["Mitigate"],
      applies_to: ["Power interruptions"],
      threat_reduction: 3,
      vulnerability_reduction: 2,
      compensating_for: null,
    },
  ];
}

export function cannedSnapshot(): WhatifResponse {
  return {
    revision: 1,
    appetite: 150,
    total_before: 7250,
    total_after: 7065,
    deltas: [
      {
        entry_id: 16,
        risk_before: 360,
        risk_after: 175,
        band_before: "RED",
        band_after: "RED",
        defense_in_depth: { satisfied: false, missing_categories: ["Technical", "Physical"] },
      },
    ],
  };
}

export function loadedState(): UiState {
  const state = initialState();
  state.register = cannedRegister();
  state.heatmap = cannedHeatmap();
  state.controls = cannedControls();
  return state;
}

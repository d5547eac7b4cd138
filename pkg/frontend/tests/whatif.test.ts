import { describe, expect, it } from "vitest";

import { planAssignments, selectEntry, toggleControl } from "../src/state.js";
import { applicableControls, controlApplies, renderWhatifPanel } from "../src/whatif.js";
import { cannedControls, cannedSnapshot, entry, loadedState } from "./helpers.js";

describe("control applicability", () => {
  it("matches tags against threat and vulnerability names, case-insensitively", () => {
    const training = cannedControls()[0];
    expect(controlApplies(training, entry({ id: 1, threat: { name: "HUMAN ERROR", likelihood: 5 } }))).toBe(true);
    expect(
      controlApplies(training, entry({ id: 1, vulnerability: { name: "social engineering", likelihood: 5 } })),
    ).toBe(true);
    expect(controlApplies(training, entry({ id: 1 }))).toBe(false);
  });

  it("treats an empty tag set as generally applicable", () => {
    const monitoring = cannedControls()[1];
    expect(controlApplies(monitoring, entry({ id: 1 }))).toBe(true);
  });

  it("offers only applicable controls for the selected entry", () => {
    const state = loadedState();
    const target = state.register!.entries[0]; // threat "Human error"
    expect(applicableControls(state, target).map((c) => c.id)).toEqual(["C-ADM-03", "C-TEC-10"]);
  });
});

describe("plan assembly", () => {
  it("toggles controls per entry and lists assignments sorted by entry", () => {
    const state = loadedState();
    toggleControl(state, 16, "C-ADM-03");
    toggleControl(state, 3, "C-TEC-10");
    toggleControl(state, 16, "C-TEC-10");
    expect(planAssignments(state)).toEqual([
      { entry_id: 3, control_ids: ["C-TEC-10"] },
      { entry_id: 16, control_ids: ["C-ADM-03", "C-TEC-10"] },
    ]);
    toggleControl(state, 3, "C-TEC-10");
    expect(planAssignments(state)).toEqual([
      { entry_id: 16, control_ids: ["C-ADM-03", "C-TEC-10"] },
    ]);
  });
});

describe("what-if panel", () => {
  it("renders the served before/after transition verbatim", () => {
    const state = loadedState();
    selectEntry(state, 16);
    toggleControl(state, 16, "C-ADM-03");
    state.lastSnapshot = cannedSnapshot();
    const html = renderWhatifPanel(state);
    expect(html).toContain("360 → 175");
    expect(html).toContain("RED → RED");
    expect(html).toContain("total risk: 7250 → 7065");
    expect(html).toContain('id="commit-plan"');
  });

  it("flags a single-category plan on a hot entry", () => {
    const state = loadedState();
    selectEntry(state, 16);
    state.lastSnapshot = cannedSnapshot();
    expect(renderWhatifPanel(state)).toContain("defense in depth: missing Technical, Physical");
  });

  it("shows the satisfied badge when the served check passes", () => {
    const state = loadedState();
    selectEntry(state, 16);
    const snapshot = cannedSnapshot();
    snapshot.deltas[0].defense_in_depth = { satisfied: true, missing_categories: ["Physical"] };
    state.lastSnapshot = snapshot;
    expect(renderWhatifPanel(state)).toContain("defense in depth: satisfied");
  });

  it("prompts for a selection when nothing is picked", () => {
    const html = renderWhatifPanel(loadedState());
    expect(html).toContain("Select a register row");
    expect(html).not.toContain('id="run-whatif"');
  });
});

// Clickable 5x10 heat map rendered from GET /api/heatmap. Cell colors encode
// the served band; clicking a cell filters the grid to that cell's entries.

import { bandColor } from "./colors.js";
import type { UiState } from "./state.js";

export function renderHeatmap(state: UiState): string {
  if (!state.heatmap) {
    return '<p class="hint">Loading heat map…</p>';
  }
  const lines: string[] = ['<h2>Heat map</h2><table class="heatmap">'];
  for (const row of state.heatmap.rows) {
    const cells = row.cells
      .map((cell) => {
        const active =
          state.cellFilter &&
          state.cellFilter.assetValue === row.asset_value &&
          state.cellFilter.column === cell.column;
        const count = cell.entry_ids.length > 0 ? String(cell.entry_ids.length) : "";
        return (
          `<td class="heat-cell${active ? " active" : ""}" ` +
          `data-value="${row.asset_value}" data-column="${cell.column}" ` +
          `style="background:${bandColor(cell.band)}">${count}</td>`
        );
      })
      .join("");
    lines.push(`<tr><th>A=${row.asset_value}</th>${cells}</tr>`);
  }
  const columnHeaders = Array.from({ length: 10 }, (_, i) => `<td>${i + 1}</td>`).join("");
  lines.push(`<tr class="axis"><th></th>${columnHeaders}</tr>`);
  lines.push("</table>");
  lines.push('<p class="hint">Column = combined likelihood bin; count = entries in cell.</p>');
  return lines.join("");
}

// Pure renderers: session/page state in, HTML strings out. Cell colors and
// counter highlights are a direct transcription of the service diagnostics,
// never recomputed locally. Keeping these pure makes the snapshot and
// contract tests trivial.

import {
  FREE,
  type CombinationItem,
  type Diagnostics,
  type MatrixView,
  type SessionState,
} from "./types.js";

export const DAY_NAMES = [
  "Monday",
  "Tuesday",
  "Wednesday",
  "Thursday",
  "Friday",
  "Saturday",
  "Sunday",
];

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function cellClass(diag: Diagnostics, matrix: MatrixView, week: number, col: number): string {
  if (matrix.cells[week][col] === FREE) {
    return "cell-free";
  }
  return diag.cell_flags[week][col] === "REST_VIOLATION" ? "cell-violation" : "cell-ok";
}

/** Phase-1 browser: one pattern as a weeks-as-rows matrix plus occupancy sums. */
export function renderCombination(item: CombinationItem): string {
  const head = DAY_NAMES.map((d) => `<th>${d.slice(0, 3)}</th>`).join("");
  const body = item.week_matrix
    .map(
      (row, w) =>
        `<tr><th>week ${w}</th>` +
        row
          .map((v) => `<td class="${v ? "cell-on" : "cell-off"}">${v ? "1" : "0"}</td>`)
          .join("") +
        "</tr>",
    )
    .join("");
  const sums =
    `<tr class="occupancy"><th>workers</th>` +
    item.column_sums.map((s) => `<td>${s}</td>`).join("") +
    "</tr>";
  return (
    `<table class="matrix" data-index="${item.index}">` +
    `<thead><tr><th>#${item.index}</th>${head}</tr></thead>` +
    `<tbody>${body}${sums}</tbody></table>` +
    `<p class="meta">weekends off: ${item.weekends_off}</p>`
  );
}

/** Phase-2 editor grid: a dropdown per working cell, free cells disabled. */
export function renderGrid(state: SessionState): string {
  const { matrix, diagnostics, shift_labels } = state;
  const head = DAY_NAMES.map((d) => `<th>${d.slice(0, 3)}</th>`).join("");
  const rows = matrix.cells
    .map((row, w) => {
      const cells = row
        .map((value, c) => {
          const klass = cellClass(diagnostics, matrix, w, c);
          if (value === FREE) {
            return `<td class="${klass}"><select disabled><option>0</option></select></td>`;
          }
          const options = shift_labels
            .map(
              (label, s) =>
                `<option value="${s}"${s === value ? " selected" : ""}>${escapeHtml(label)}</option>`,
            )
            .join("");
          return (
            `<td class="${klass}">` +
            `<select data-row="${w}" data-col="${c}">${options}</select></td>`
          );
        })
        .join("");
      const counts = matrix.shift_counts_per_week[w]
        .map((n, s) => `${escapeHtml(shift_labels[s])}:${n}`)
        .join(" ");
      return `<tr><th>week ${w}</th>${cells}<td class="week-counts">${counts}</td></tr>`;
    })
    .join("");
  return (
    `<table class="grid"><thead><tr><th></th>${head}<th>shifts/week</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** Per-(day, type) worker counts; understaffed combinations get highlighted. */
export function renderCoverage(state: SessionState): string {
  const { matrix, diagnostics, shift_labels } = state;
  const head = DAY_NAMES.map((d) => `<th>${d.slice(0, 3)}</th>`).join("");
  const rows = shift_labels
    .map((label, s) => {
      const cells = DAY_NAMES.map((_, c) => {
        const flag = diagnostics.coverage[c][s];
        const klass = flag === "UNDERSTAFFED" ? "count-understaffed" : "count-ok";
        return `<td class="${klass}">${matrix.coverage_counts[c][s]}</td>`;
      }).join("");
      return `<tr><th>${escapeHtml(label)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="coverage"><thead><tr><th>workers</th>${head}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderFeasibility(state: SessionState): string {
  return state.diagnostics.feasible
    ? `<span class="badge badge-ok">feasible</span>`
    : `<span class="badge badge-bad">constraints unmet</span>`;
}

/** Read-only matrix of one found solution. No feasibility classes here:
 * solutions are feasible by the service's contract, and the UI never
 * invents diagnostics of its own. */
export function renderSolutionMatrix(matrix: MatrixView, shiftLabels: string[]): string {
  const head = DAY_NAMES.map((d) => `<th>${d.slice(0, 3)}</th>`).join("");
  const rows = matrix.cells
    .map((row, w) => {
      const cells = row
        .map((value, c) =>
          value === FREE
            ? `<td class="cell-free">0</td>`
            : `<td class="cell-solution">${escapeHtml(matrix.labels[w][c])}</td>`,
        )
        .join("");
      const counts = matrix.shift_counts_per_week[w]
        .map((n, s) => `${escapeHtml(shiftLabels[s])}:${n}`)
        .join(" ");
      return `<tr><th>week ${w}</th>${cells}<td class="week-counts">${counts}</td></tr>`;
    })
    .join("");
  return (
    `<table class="grid grid-solution"><thead><tr><th></th>${head}<th>shifts/week</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

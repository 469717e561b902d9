// Single-page wiring: phase-1 browser on top, phase-2 editor below.
// Every edit round-trips to the service; the DOM is re-rendered from the
// response, so what you see is always the service's own diagnostics.

import { ApiError, Client } from "./api.js";
import { clampIndex, indexToSlider, pageFor, sliderToIndex } from "./pagination.js";
import {
  renderCombination,
  renderCoverage,
  renderFeasibility,
  renderGrid,
  renderSolutionMatrix,
} from "./render.js";
import type { CombinationItem, ScheduleParamsIn, SessionState } from "./types.js";

const SLIDER_STEPS = 1000;
const PAGE_SIZE = 50;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function readParams(): ScheduleParamsIn {
  const num = (id: string) => Number((el<HTMLInputElement>(id)).value);
  return {
    n_shift_types: num("p-types"),
    workdays_per_week: num("p-workdays"),
    weeks: num("p-weeks"),
    shift_hours: num("p-shift-hours"),
    weekly_hours: num("p-weekly-hours"),
    weekly_rest_hours: num("p-rest"),
    min_free_cluster: num("p-cluster"),
  };
}

class App {
  private client = new Client();
  private jobId: string | null = null;
  private total = 0;
  private index = 0;
  private cache = new Map<number, CombinationItem>();
  private session: SessionState | null = null;
  private solutionTotal = 0;
  private solutionIndex = 0;

  bind(): void {
    el<HTMLButtonElement>("btn-generate").addEventListener("click", () => {
      void this.startJob();
    });
    el<HTMLButtonElement>("btn-cancel").addEventListener("click", () => {
      if (this.jobId) void this.client.cancelJob(this.jobId);
    });
    const slider = el<HTMLInputElement>("combo-slider");
    slider.max = String(SLIDER_STEPS);
    slider.addEventListener("input", () => {
      void this.showCombination(sliderToIndex(Number(slider.value), SLIDER_STEPS, this.total));
    });
    el<HTMLInputElement>("combo-index").addEventListener("change", (event) => {
      void this.showCombination(Number((event.target as HTMLInputElement).value));
    });
    el<HTMLButtonElement>("btn-open").addEventListener("click", () => {
      void this.openSession();
    });
    el<HTMLButtonElement>("btn-solve").addEventListener("click", () => {
      void this.solve("AUTO", false);
    });
    el<HTMLButtonElement>("btn-export").addEventListener("click", () => {
      void this.exportCsv();
    });
    el<HTMLInputElement>("solution-index").addEventListener("change", (event) => {
      void this.showSolution(Number((event.target as HTMLInputElement).value));
    });
    el<HTMLButtonElement>("btn-theme").addEventListener("click", () => {
      const root = document.documentElement;
      root.dataset.theme = root.dataset.theme === "dark" ? "light" : "dark";
    });
    el<HTMLElement>("grid").addEventListener("change", (event) => {
      const target = event.target as HTMLSelectElement;
      if (target.tagName === "SELECT" && target.dataset.row !== undefined) {
        void this.setCell(
          Number(target.dataset.row),
          Number(target.dataset.col),
          Number(target.value),
        );
      }
    });
  }

  private setStatus(text: string): void {
    el<HTMLElement>("status").textContent = text;
  }

  private async startJob(): Promise<void> {
    this.cache.clear();
    this.session = null;
    const fast = el<HTMLInputElement>("p-fast").checked;
    const cluster = el<HTMLInputElement>("p-cluster-on").checked;
    try {
      const { job_id } = await this.client.startJob(readParams(), fast ? "FAST" : "FULL", cluster);
      this.jobId = job_id;
      await this.poll();
    } catch (error) {
      this.setStatus(error instanceof ApiError ? `${error.code}: ${error.message}` : String(error));
    }
  }

  private async poll(): Promise<void> {
    if (!this.jobId) return;
    const status = await this.client.jobStatus(this.jobId);
    this.setStatus(
      `${status.state} - examined ${status.combinations_examined}, ` +
        `accepted ${status.solutions_found} (${Math.round(status.progress * 100)}%)`,
    );
    if (status.state === "RUNNING") {
      setTimeout(() => void this.poll(), 250);
      return;
    }
    this.total = status.solutions_found;
    el<HTMLInputElement>("combo-index").max = String(Math.max(0, this.total - 1));
    await this.showCombination(0);
  }

  private async fetchItem(index: number): Promise<CombinationItem | null> {
    if (this.total === 0) return null;
    const clamped = clampIndex(index, this.total);
    const cached = this.cache.get(clamped);
    if (cached) return cached;
    const { offset, limit } = pageFor(clamped, PAGE_SIZE);
    const page = await this.client.combinations(this.jobId!, offset, limit);
    for (const item of page.items) {
      this.cache.set(item.index, item);
    }
    return this.cache.get(clamped) ?? null;
  }

  private async showCombination(index: number): Promise<void> {
    const item = await this.fetchItem(index);
    if (!item) {
      el<HTMLElement>("combination").innerHTML = "<p>no patterns</p>";
      return;
    }
    this.index = item.index;
    el<HTMLInputElement>("combo-index").value = String(item.index);
    el<HTMLInputElement>("combo-slider").value = String(
      indexToSlider(item.index, SLIDER_STEPS, this.total),
    );
    el<HTMLElement>("combination").innerHTML = renderCombination(item);
  }

  private async openSession(): Promise<void> {
    if (!this.jobId) return;
    this.session = await this.client.openSession(this.jobId, this.index);
    this.renderSession();
  }

  private renderSession(): void {
    if (!this.session) return;
    el<HTMLElement>("grid").innerHTML = renderGrid(this.session);
    el<HTMLElement>("coverage").innerHTML = renderCoverage(this.session);
    el<HTMLElement>("feasibility").innerHTML = renderFeasibility(this.session);
  }

  private async setCell(row: number, col: number, shiftType: number): Promise<void> {
    if (!this.session) return;
    try {
      this.session = await this.client.setCell(this.session.session_id, row, col, shiftType);
    } catch (error) {
      if (error instanceof ApiError && error.code === "NOT_WORKING_CELL") {
        this.setStatus("that day is free; shifts can only go on working days");
      } else {
        throw error;
      }
    }
    this.renderSession();
  }

  private async solve(method: string, confirmed: boolean): Promise<void> {
    if (!this.session) return;
    const response = await this.client.solve(this.session.session_id, method, confirmed);
    if (response.memory_guard && response.confirmed === false) {
      // the materialized product would be large: let the user pick
      const guard = response.memory_guard;
      const proceed = window.confirm(
        `Estimated memory ${guard.estimated_human} exceeds the threshold.\n` +
          `OK: continue with the Cartesian product method anyway.\n` +
          `Cancel: use the recursive low-memory method.`,
      );
      await this.solve(proceed ? "CARTESIAN" : "RECURSIVE", true);
      return;
    }
    this.solutionTotal = response.solution_count ?? 0;
    el<HTMLElement>("solve-summary").textContent =
      `${response.method}: ${response.solution_count} solutions ` +
      `out of ${response.candidates_examined} candidates`;
    el<HTMLInputElement>("solution-index").max = String(Math.max(0, this.solutionTotal - 1));
    if (this.solutionTotal > 0) {
      await this.showSolution(0);
    }
  }

  private async showSolution(index: number): Promise<void> {
    if (!this.session || this.solutionTotal === 0) return;
    const clamped = clampIndex(index, this.solutionTotal);
    this.solutionIndex = clamped;
    el<HTMLInputElement>("solution-index").value = String(clamped);
    const { offset, limit } = pageFor(clamped, 10);
    const page = await this.client.solutions(this.session.session_id, offset, limit);
    const item = page.items.find((entry) => entry.index === clamped);
    if (!item) return;
    el<HTMLElement>("solution").innerHTML = renderSolutionMatrix(
      item.matrix,
      this.session.shift_labels,
    );
  }

  private async exportCsv(): Promise<void> {
    if (!this.session) return;
    const bytes = await this.client.exportCsv(this.session.session_id, {
      solution_index: this.solutionIndex,
    });
    // pass the service bytes through untouched
    const blob = new Blob([bytes.slice().buffer], { type: "text/csv" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "schedule.csv";
    link.click();
    URL.revokeObjectURL(link.href);
  }
}

export function start(): void {
  new App().bind();
}

if (typeof document !== "undefined" && document.getElementById("btn-generate")) {
  start();
}

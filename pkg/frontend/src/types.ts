// Wire types mirroring the planning service JSON payloads.

export const FREE = -1;

export interface ScheduleParamsIn {
  n_shift_types: number;
  workdays_per_week: number;
  weeks: number;
  shift_hours: number;
  weekly_hours: number;
  weekly_rest_hours: number;
  min_free_cluster: number;
  min_rest_between_shifts?: number;
  min_workers_per_shift?: number;
  anchor_start_hour?: number;
}

export interface JobStatus {
  id: string;
  state: "RUNNING" | "DONE" | "CANCELLED" | "FAILED";
  progress: number;
  combinations_examined: number;
  solutions_found: number;
  mode: string;
  elapsed?: number;
  truncated?: boolean;
  error: string | null;
}

export interface CombinationItem {
  index: number;
  bits: string;
  week_matrix: number[][];
  column_sums: number[];
  weekends_off: number;
}

export interface CombinationsPage {
  total: number;
  offset: number;
  items: CombinationItem[];
}

export type CellFlag = "OK" | "REST_VIOLATION";
export type CoverageFlag = "OK" | "UNDERSTAFFED";

export interface Diagnostics {
  cell_flags: CellFlag[][];
  coverage: CoverageFlag[][]; // [day][shiftType]
  feasible: boolean;
}

export interface MatrixView {
  cells: number[][]; // FREE (-1) or shift type index
  labels: string[][];
  shift_counts_per_week: number[][];
  coverage_counts: number[][]; // [day][shiftType]
}

export interface SessionState {
  session_id: string;
  job_id: string;
  combination_index: number;
  n_shift_types: number;
  shift_labels: string[];
  matrix: MatrixView;
  diagnostics: Diagnostics;
  solution_count: number | null;
  selected_solution: number | null;
}

export interface MemoryGuard {
  estimated_bytes: number;
  estimated_human: string;
  threshold_bytes: number;
  requires_confirmation: boolean;
}

export interface SolveResponse {
  memory_guard?: MemoryGuard;
  confirmed?: boolean;
  method?: string;
  candidates_examined?: number;
  solution_count?: number;
  truncated?: boolean;
}

export interface SolutionItem {
  index: number;
  matrix: MatrixView;
}

export interface SolutionsPage {
  total: number;
  offset: number;
  items: SolutionItem[];
}

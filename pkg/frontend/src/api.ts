// Thin fetch client for the planning service. The UI never computes
// feasibility itself: every mutation round-trips and re-renders from the
// service's diagnostics.

import type {
  CombinationsPage,
  JobStatus,
  ScheduleParamsIn,
  SessionState,
  SolutionsPage,
  SolveResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let code = "UNKNOWN";
  let message = response.statusText;
  try {
    const body = await response.json();
    if (body && body.detail) {
      code = body.detail.error ?? code;
      message = body.detail.message ?? JSON.stringify(body.detail);
    }
  } catch {
    // leave defaults
  }
  throw new ApiError(response.status, code, message);
}

export class Client {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  startJob(
    params: ScheduleParamsIn,
    mode: "FAST" | "FULL",
    clusterFreeDays: boolean,
  ): Promise<{ job_id: string }> {
    return this.request("/phase1/jobs", {
      method: "POST",
      body: JSON.stringify({ params, mode, cluster_free_days: clusterFreeDays }),
    });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.request(`/phase1/jobs/${jobId}`);
  }

  cancelJob(jobId: string): Promise<unknown> {
    return this.request(`/phase1/jobs/${jobId}/cancel`, { method: "POST" });
  }

  combinations(jobId: string, offset: number, limit: number): Promise<CombinationsPage> {
    return this.request(
      `/phase1/jobs/${jobId}/combinations?offset=${offset}&limit=${limit}`,
    );
  }

  openSession(jobId: string, combinationIndex: number): Promise<SessionState> {
    return this.request("/phase2/sessions", {
      method: "POST",
      body: JSON.stringify({ job_id: jobId, combination_index: combinationIndex }),
    });
  }

  setCell(
    sessionId: string,
    row: number,
    column: number,
    shiftType: number,
  ): Promise<SessionState> {
    return this.request(`/phase2/sessions/${sessionId}/cells`, {
      method: "PUT",
      body: JSON.stringify({ row, column, shift_type: shiftType }),
    });
  }

  solve(sessionId: string, method: string, confirmMemory: boolean): Promise<SolveResponse> {
    return this.request(`/phase2/sessions/${sessionId}/solve`, {
      method: "POST",
      body: JSON.stringify({ method, confirm_memory: confirmMemory }),
    });
  }

  solutions(sessionId: string, offset: number, limit: number): Promise<SolutionsPage> {
    return this.request(
      `/phase2/sessions/${sessionId}/solutions?offset=${offset}&limit=${limit}`,
    );
  }

  /** Fetch exported CSV bytes verbatim; callers must not transform them. */
  async exportCsv(
    sessionId: string,
    body: { solution_index?: number; merge?: number[] },
  ): Promise<Uint8Array> {
    const response = await fetch(`${this.baseUrl}/phase2/sessions/${sessionId}/export`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      await parseError(response);
    }
    return new Uint8Array(await response.arrayBuffer());
  }
}

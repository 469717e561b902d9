// Index navigation shared by the pattern browser and the solution browser:
// a slider plus a numeric field, both clamped to the result count.

export interface Pager {
  total: number;
  index: number;
}

export function clampIndex(index: number, total: number): number {
  if (!Number.isFinite(index) || total <= 0) {
    return 0;
  }
  return Math.min(Math.max(0, Math.trunc(index)), total - 1);
}

/** Page window (offset, limit) that contains `index`. */
export function pageFor(index: number, pageSize: number): { offset: number; limit: number } {
  const safeSize = Math.max(1, pageSize);
  const page = Math.floor(index / safeSize);
  return { offset: page * safeSize, limit: safeSize };
}

export function step(pager: Pager, delta: number): Pager {
  return { total: pager.total, index: clampIndex(pager.index + delta, pager.total) };
}

/** Map a slider position in [0, steps] onto a result index. */
export function sliderToIndex(position: number, steps: number, total: number): number {
  if (steps <= 0 || total <= 0) {
    return 0;
  }
  return clampIndex(Math.round((position / steps) * (total - 1)), total);
}

export function indexToSlider(index: number, steps: number, total: number): number {
  if (total <= 1) {
    return 0;
  }
  return Math.round((clampIndex(index, total) / (total - 1)) * steps);
}

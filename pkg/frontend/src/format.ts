import type { SearchHit } from './types';

/**
 * Every number shown on screen is the API value itself; these helpers only
 * format for display and scale bar widths for layout. No score is ever
 * computed client-side.
 */

export function formatScore(value: number): string {
  return value.toFixed(4);
}

/**
 * Display bounds for the component bars: [min(0, lowest fused), highest
 * fused] over the current hit list, so a full-width bar means "as strong
 * as the best fused score on screen".
 */
export function barBounds(hits: readonly SearchHit[]): [number, number] {
  if (hits.length === 0) {
    return [0, 1];
  }
  const fusedValues = hits.map((h) => h.fused);
  const low = Math.min(0, ...fusedValues);
  const high = Math.max(...fusedValues);
  return high > low ? [low, high] : [low, low + 1];
}

export function barFraction(value: number, bounds: [number, number]): number {
  const [low, high] = bounds;
  const fraction = (value - low) / (high - low);
  return Math.min(1, Math.max(0, fraction));
}

import { describe, expect, it } from 'vitest';

import { barBounds, barFraction, formatScore } from '../src/format';
import { makeHit } from './fakeApi';

describe('formatScore', () => {
  it('always shows four decimals', () => {
    expect(formatScore(0.5)).toBe('0.5000');
    expect(formatScore(0.123456789)).toBe('0.1235');
    expect(formatScore(-0.04)).toBe('-0.0400');
    expect(formatScore(12)).toBe('12.0000');
  });
});

describe('barBounds', () => {
  it('spans zero to the best fused score', () => {
    const hits = [makeHit({ fused: 0.8 }), makeHit({ fused: 0.3 })];
    expect(barBounds(hits)).toEqual([0, 0.8]);
  });

  it('extends below zero when a fused score is negative', () => {
    const hits = [makeHit({ fused: 0.6 }), makeHit({ fused: -0.2 })];
    expect(barBounds(hits)).toEqual([-0.2, 0.6]);
  });

  it('handles empty and degenerate hit lists', () => {
    expect(barBounds([])).toEqual([0, 1]);
    expect(barBounds([makeHit({ fused: 0 })])).toEqual([0, 1]);
  });
});

describe('barFraction', () => {
  it('scales linearly inside the bounds', () => {
    expect(barFraction(0.4, [0, 0.8])).toBeCloseTo(0.5, 12);
  });

  it('clamps to [0, 1]', () => {
    expect(barFraction(-1, [0, 0.8])).toBe(0);
    expect(barFraction(2, [0, 0.8])).toBe(1);
  });
});

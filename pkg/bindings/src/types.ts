/** Columnar interchange types: structure-of-arrays, no per-event objects. */

export type NumberColumn = number[] | Float64Array | Int32Array | Int8Array | Uint16Array;

/** Four parallel columns describing an event stream (t in microseconds). */
export interface EventColumns {
  t: NumberColumn;
  x: NumberColumn;
  y: NumberColumn;
  p: NumberColumn; // -1 or +1
}

export interface TokenizerOptions {
  patchSize?: number;          // default 16
  threshold?: number;          // default patchSize * patchSize
  refractoryMs?: number;       // absolute refractory period
  variant?: "plain" | "decay" | "discrete";
  decayLambda?: number;        // potential leak per millisecond
  rrpMs?: number;              // relative refractory period
  rrpAlpha?: number;           // potential gain inside the RRP
  tMaxMs?: number;             // discrete variant duration bound
}

/** Normalized event columns as typed arrays. */
export interface NormalizedEvents {
  t: Float64Array;
  x: Int32Array;
  y: Int32Array;
  p: Int8Array;
}

/**
 * Token batch: five per-token columns plus the member-index column.
 * Member events of token i are events[memberIdx[offset[i] .. offset[i] +
 * count[i])], in arrival order; offsets partition memberIdx.
 */
export interface TokenBatch {
  width: number;
  height: number;
  options: TokenizerOptions;
  events: NormalizedEvents;
  patchX: Int32Array;
  patchY: Int32Array;
  tSpike: Float64Array;
  offset: Int32Array;
  count: Int32Array;
  memberIdx: Int32Array;
}

/** Dense per-token stacked histograms, shape (nTokens, P, P, channels). */
export interface HistogramBatch {
  nTokens: number;
  patchSize: number;
  channels: number;
  data: Uint32Array; // row-major (token, row, col, channel)
}

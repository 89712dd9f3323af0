/** Test-side references: a seeded PRNG, random sorted streams, a
 * brute-force chunking oracle, and an independent histogram recompute. */

import type { NormalizedEvents } from "../src/types";

/** mulberry32: tiny deterministic PRNG, plenty for test data. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomStream(seed: number, n: number, width: number,
                             height: number, maxT: number): NormalizedEvents {
  const rand = mulberry32(seed);
  const t = new Float64Array(n);
  const x = new Int32Array(n);
  const y = new Int32Array(n);
  const p = new Int8Array(n);
  for (let i = 0; i < n; i++) t[i] = Math.floor(rand() * maxT);
  t.sort();
  for (let i = 0; i < n; i++) {
    x[i] = Math.floor(rand() * width);
    y[i] = Math.floor(rand() * height);
    p[i] = rand() < 0.5 ? -1 : 1;
  }
  return { t, x, y, p };
}

export interface OracleToken {
  tSpike: number;
  patchY: number;
  patchX: number;
  members: number[];
}

/** Plain variant, no refractory: per-patch chunks of exactly sigma events,
 * sorted by (tSpike, patchY, patchX), per-patch order kept on ties. */
export function chunkOracle(events: NormalizedEvents, patchSize: number,
                            sigma: number): OracleToken[] {
  const byPatch = new Map<string, number[]>();
  for (let i = 0; i < events.t.length; i++) {
    const key = `${Math.floor(events.y[i] / patchSize)},${Math.floor(events.x[i] / patchSize)}`;
    let list = byPatch.get(key);
    if (!list) byPatch.set(key, (list = []));
    list.push(i);
  }
  const tokens: OracleToken[] = [];
  for (const [key, idxs] of byPatch) {
    const [py, px] = key.split(",").map(Number);
    for (let k = 0; k + sigma <= idxs.length; k += sigma) {
      const members = idxs.slice(k, k + sigma);
      tokens.push({
        tSpike: events.t[members[members.length - 1]],
        patchY: py, patchX: px, members,
      });
    }
  }
  tokens.sort((a, b) =>
    a.tSpike - b.tSpike || a.patchY - b.patchY || a.patchX - b.patchX);
  return tokens;
}

const EDGES_US = [1000, 2000, 4000, 8000, 16000, 32000, 64000, 128000, 256000];

export function timeBucketUs(deltaUs: number): number {
  let b = 0;
  while (b < EDGES_US.length && deltaUs >= EDGES_US[b]) b++;
  return b;
}

/** Independent stacked-histogram recompute for one token. */
export function histOracle(events: NormalizedEvents, members: ArrayLike<number>,
                           patchX: number, patchY: number, tSpike: number,
                           patchSize: number): Uint32Array {
  const channels = 20;
  const out = new Uint32Array(patchSize * patchSize * channels);
  for (let k = 0; k < members.length; k++) {
    const i = members[k] as number;
    const dx = events.x[i] - patchX * patchSize;
    const dy = events.y[i] - patchY * patchSize;
    const bucket = timeBucketUs(tSpike - events.t[i]);
    const chan = 2 * bucket + (events.p[i] === 1 ? 1 : 0);
    out[(dy * patchSize + dx) * channels + chan] += 1;
  }
  return out;
}

/**
 * Columnar bindings for the evtok event-camera tokenizer.
 *
 * Events go in as four parallel numeric columns, tokens come back as five
 * per-token columns plus a member-index column, histograms as one dense
 * count array. All computation happens in the tokenizer CLI; this package
 * only moves bytes across its documented file formats, so outputs are
 * identical to the library's own.
 */

import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { MismatchedColumnsError } from "./errors";
import { encodeEvs } from "./evs";
import { parseHistograms } from "./hist";
import { runCli } from "./runner";
import { parseTokensText } from "./tokens";
import type {
  EventColumns,
  HistogramBatch,
  NormalizedEvents,
  TokenBatch,
  TokenizerOptions,
} from "./types";

export { encodeEvs } from "./evs";
export * from "./errors";
export * from "./types";

export const VERSION = "0.1.0";

function normalize(events: EventColumns): NormalizedEvents {
  const n = events.t.length;
  if (events.x.length !== n || events.y.length !== n || events.p.length !== n) {
    throw new MismatchedColumnsError(
      `column lengths differ: t=${n} x=${events.x.length} ` +
      `y=${events.y.length} p=${events.p.length}`);
  }
  return {
    t: Float64Array.from(events.t as ArrayLike<number>),
    x: Int32Array.from(events.x as ArrayLike<number>),
    y: Int32Array.from(events.y as ArrayLike<number>),
    p: Int8Array.from(events.p as ArrayLike<number>),
  };
}

function tokenizerFlags(options: TokenizerOptions): string[] {
  const flags: string[] = [];
  if (options.patchSize !== undefined) flags.push("--patch-size", String(options.patchSize));
  if (options.threshold !== undefined) flags.push("--threshold", String(options.threshold));
  if (options.refractoryMs !== undefined) flags.push("--refractory-ms", String(options.refractoryMs));
  if (options.variant !== undefined) flags.push("--variant", options.variant);
  if (options.decayLambda !== undefined) flags.push("--decay-lambda", String(options.decayLambda));
  if (options.rrpMs !== undefined) flags.push("--rrp-ms", String(options.rrpMs));
  if (options.rrpAlpha !== undefined) flags.push("--rrp-alpha", String(options.rrpAlpha));
  if (options.tMaxMs !== undefined) flags.push("--t-max-ms", String(options.tMaxMs));
  return flags;
}

function withWorkdir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "evtok-bindings-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/**
 * Tokenize columnar events (sorted by t) with the spiking-patch tokenizer.
 * Numerically identical to the tokenizer library on the same input.
 */
export function tokenizeArrays(
  events: EventColumns,
  width: number,
  height: number,
  options: TokenizerOptions = {},
): TokenBatch {
  const normalized = normalize(events);
  return withWorkdir((dir) => {
    const src = join(dir, "in.evs");
    const dst = join(dir, "out.tokens");
    writeFileSync(src, encodeEvs(normalized, width, height));
    runCli(["tokenize", "-i", src, "-o", dst,
            ...tokenizerFlags(options), "--with-indices"]);
    const parsed = parseTokensText(readFileSync(dst, "utf8"));
    return { width, height, options, events: normalized, ...parsed };
  });
}

/**
 * Stacked histograms for a token batch, shape (nTokens, P, P, 20) with
 * channel = 2 * timeBucket + polarity. Recomputed by the tokenizer CLI
 * from the batch's events and configuration; tokenization is
 * deterministic, so histogram i corresponds to batch token i.
 */
export function histogramArrays(batch: TokenBatch): HistogramBatch {
  return withWorkdir((dir) => {
    const src = join(dir, "in.evs");
    const dst = join(dir, "out.hist");
    writeFileSync(src, encodeEvs(batch.events, batch.width, batch.height));
    runCli(["embed", "-i", src, "-o", dst, ...tokenizerFlags(batch.options)]);
    const hist = parseHistograms(readFileSync(dst));
    if (hist.nTokens !== batch.patchX.length) {
      throw new MismatchedColumnsError(
        `embed produced ${hist.nTokens} histograms for ${batch.patchX.length} tokens`);
    }
    return hist;
  });
}

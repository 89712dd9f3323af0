/** Parser for the histogram binary export (u16 P, u16 channels, u32 counts). */

import { EvtokCliError } from "./errors";
import type { HistogramBatch } from "./types";

export function parseHistograms(buf: Buffer): HistogramBatch {
  if (buf.length < 4) {
    throw new EvtokCliError("histogram payload shorter than its header");
  }
  const patchSize = buf.readUInt16LE(0);
  const channels = buf.readUInt16LE(2);
  const per = patchSize * patchSize * channels * 4;
  const body = buf.length - 4;
  if (per === 0 || body % per !== 0) {
    throw new EvtokCliError(
      `histogram payload of ${body} bytes is not a multiple of ${per}`);
  }
  const nTokens = body / per;
  const data = new Uint32Array(nTokens * patchSize * patchSize * channels);
  for (let i = 0; i < data.length; i++) {
    data[i] = buf.readUInt32LE(4 + 4 * i);
  }
  return { nTokens, patchSize, channels, data };
}

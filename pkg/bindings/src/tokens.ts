/** Parser for the CLI's token text format (with the indices column). */

import { EvtokCliError } from "./errors";

export interface ParsedTokens {
  patchX: Int32Array;
  patchY: Int32Array;
  tSpike: Float64Array;
  count: Int32Array;
  offset: Int32Array;
  memberIdx: Int32Array;
}

export function parseTokensText(text: string): ParsedTokens {
  const lines = text.split("\n");
  if (!lines[0] || !lines[0].startsWith("patch_x,patch_y,t_spike_us,n_events")) {
    throw new EvtokCliError(`unexpected token header: ${lines[0] ?? "<empty>"}`);
  }
  if (!lines[0].split(",").includes("indices")) {
    throw new EvtokCliError("token text lacks the indices column");
  }
  const rows: string[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].length > 0) rows.push(lines[i]);
  }
  const n = rows.length;
  const patchX = new Int32Array(n);
  const patchY = new Int32Array(n);
  const tSpike = new Float64Array(n);
  const count = new Int32Array(n);
  const offset = new Int32Array(n);
  const members: number[] = [];
  for (let i = 0; i < n; i++) {
    const cols = rows[i].split(",");
    if (cols.length < 5) {
      throw new EvtokCliError(`malformed token row ${i + 1}: ${rows[i]}`);
    }
    patchX[i] = Number(cols[0]);
    patchY[i] = Number(cols[1]);
    tSpike[i] = Number(cols[2]);
    count[i] = Number(cols[3]);
    offset[i] = members.length;
    const idxField = cols[cols.length - 1];
    if (idxField.length > 0) {
      for (const tokn of idxField.split(" ")) {
        members.push(Number(tokn));
      }
    }
    if (members.length - offset[i] !== count[i]) {
      throw new EvtokCliError(
        `token row ${i + 1}: index column holds ${members.length - offset[i]} ` +
        `entries but n_events is ${count[i]}`);
    }
  }
  return { patchX, patchY, tSpike, count, offset, memberIdx: Int32Array.from(members) };
}

/**
 * Writer for the `.evs` wire format consumed by the tokenizer CLI.
 *
 * Layout (little-endian): magic "EVS1", u16 version=1, u16 width,
 * u16 height, u16 reserved=0, u64 count, then 13-byte records of
 * u64 t (microseconds), u16 x, u16 y, u8 polarity (0 => -1, 1 => +1).
 */

import { BadPolarityAtError, OutOfBoundsAtError } from "./errors";
import type { EventColumns } from "./types";

const HEADER_BYTES = 20;
const RECORD_BYTES = 13;

export function encodeEvs(events: EventColumns, width: number, height: number): Buffer {
  const n = events.t.length;
  const buf = Buffer.alloc(HEADER_BYTES + RECORD_BYTES * n);
  buf.write("EVS1", 0, "ascii");
  buf.writeUInt16LE(1, 4);
  buf.writeUInt16LE(width, 6);
  buf.writeUInt16LE(height, 8);
  buf.writeUInt16LE(0, 10);
  buf.writeBigUInt64LE(BigInt(n), 12);
  let off = HEADER_BYTES;
  for (let i = 0; i < n; i++) {
    const t = Number(events.t[i]);
    const x = Number(events.x[i]);
    const y = Number(events.y[i]);
    const p = Number(events.p[i]);
    // values a u64/u16 record cannot carry are rejected locally with the
    // same error identities the CLI would use
    if (!Number.isInteger(t) || t < 0) {
      throw new OutOfBoundsAtError(i, "timestamp must be a non-negative integer");
    }
    if (!Number.isInteger(x) || !Number.isInteger(y) || x < 0 || y < 0 ||
        x > 0xffff || y > 0xffff) {
      throw new OutOfBoundsAtError(i);
    }
    if (p !== 1 && p !== -1) {
      throw new BadPolarityAtError(i);
    }
    buf.writeBigUInt64LE(BigInt(t), off);
    buf.writeUInt16LE(x, off + 8);
    buf.writeUInt16LE(y, off + 10);
    buf.writeUInt8(p === 1 ? 1 : 0, off + 12);
    off += RECORD_BYTES;
  }
  return buf;
}

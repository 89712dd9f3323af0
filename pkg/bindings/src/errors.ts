/**
 * Error taxonomy mirroring the tokenizer CLI's data errors. Errors raised
 * by the CLI (exit code 2) are parsed back into these classes so callers
 * see the same identities whether validation happened locally or in the
 * tokenizer process.
 */

export class EvtokCliError extends Error {
  constructor(message: string, public readonly exitCode?: number) {
    super(message);
    this.name = "EvtokCliError";
  }
}

export class StreamValidationError extends EvtokCliError {
  constructor(message: string, public readonly index: number) {
    super(message);
    this.name = "StreamValidationError";
  }
}

export class UnsortedAtError extends StreamValidationError {
  constructor(index: number) {
    super(`timestamp decreases (index ${index})`, index);
    this.name = "UnsortedAtError";
  }
}

export class OutOfBoundsAtError extends StreamValidationError {
  constructor(index: number, detail = "event outside sensor bounds") {
    super(`${detail} (index ${index})`, index);
    this.name = "OutOfBoundsAtError";
  }
}

export class BadPolarityAtError extends StreamValidationError {
  constructor(index: number) {
    super(`polarity must be -1 or +1 (index ${index})`, index);
    this.name = "BadPolarityAtError";
  }
}

export class MismatchedColumnsError extends EvtokCliError {
  constructor(message: string) {
    super(message);
    this.name = "MismatchedColumnsError";
  }
}

const PATTERNS: Array<[RegExp, (index: number) => StreamValidationError]> = [
  [/timestamp decreases \(index (\d+)\)/, (i) => new UnsortedAtError(i)],
  [/event outside sensor bounds \(index (\d+)\)/, (i) => new OutOfBoundsAtError(i)],
  [/polarity must be -1 or \+1 \(index (\d+)\)/, (i) => new BadPolarityAtError(i)],
];

/** Map a CLI stderr payload to the matching typed error. */
export function errorFromStderr(stderr: string, exitCode: number): EvtokCliError {
  for (const [pattern, make] of PATTERNS) {
    const m = stderr.match(pattern);
    if (m) return make(Number(m[1]));
  }
  return new EvtokCliError(stderr.trim() || `tokenizer CLI failed (exit ${exitCode})`, exitCode);
}

/** Subprocess plumbing: every operation goes through the tokenizer CLI. */

import { spawnSync } from "node:child_process";

import { errorFromStderr, EvtokCliError } from "./errors";

/** Override with EVTOK_BINDINGS_PYTHON (e.g. a venv interpreter). */
function pythonExe(): string {
  return process.env.EVTOK_BINDINGS_PYTHON ?? "python3";
}

export function runCli(args: string[]): string {
  const proc = spawnSync(pythonExe(), ["-m", "evtok.cli", ...args], {
    encoding: "utf8",
    maxBuffer: 1 << 28,
  });
  if (proc.error) {
    throw new EvtokCliError(`failed to launch tokenizer CLI: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw errorFromStderr(proc.stderr ?? "", proc.status ?? -1);
  }
  return proc.stdout ?? "";
}

// Global setup: serve a scratch copy of the committed fixture graph through
// the real registry service for the duration of the test run.

import { spawn, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { BASE_URL, PORT } from "./config.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE = resolve(HERE, "../../tests/fixtures/triad.occg");

let child: ChildProcess;
let scratch: string;

async function waitReady(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE_URL}/schema/classes`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`registry service did not come up on port ${PORT}`);
}

export async function setup(): Promise<void> {
  scratch = mkdtempSync(join(tmpdir(), "triad-explorer-"));
  const graph = join(scratch, "triad.occg");
  copyFileSync(FIXTURE, graph);
  child = spawn("occo", ["serve", "--graph", graph, "--bind", `127.0.0.1:${PORT}`], {
    stdio: "ignore",
  });
  await waitReady(20000);
}

export async function teardown(): Promise<void> {
  child?.kill("SIGTERM");
  if (scratch) rmSync(scratch, { recursive: true, force: true });
}

/**
 * Integration against the real evaluation service: the payloads produced by
 * the editor and quality-screen modules must be accepted verbatim.  Spawns
 * the Python CLI (`hileval ingest/gen-tasks/serve`) in a temp dir.
 */

import { type ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { HighlightEditor } from "../src/editor.js";
import { QualityScreens } from "../src/quality.js";

const PORT = 8841;
const BASE = `http://127.0.0.1:${PORT}`;

const CORPUS = {
  version: "1",
  budget_k: 6,
  documents: [
    {
      id: "story",
      text:
        "The mayor opened the new library on Friday. " +
        "Children queued outside for hours. " +
        "A local band played until sunset.",
      sanity: { statement: "The mayor opened a library.", answer: true },
    },
  ],
  summaries: [
    { doc_id: "story", system: "reference", text: "The mayor opened a library." },
    { doc_id: "story", system: "sysA", text: "a band played at the library." },
  ],
};

interface TaskRecord {
  task_id: string;
  task_kind: string;
  sanity_answer?: boolean;
  planted?: Record<string, string>;
}

let workDir: string;
let server: ChildProcess | undefined;
let taskRecords: TaskRecord[] = [];

async function waitForServer(): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      const response = await fetch(`${BASE}/api/documents/story`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "hileval-ui-"));
  const corpusPath = join(workDir, "corpus.json");
  writeFileSync(corpusPath, JSON.stringify(CORPUS));
  const campaign = join(workDir, "campaign");
  execFileSync("hileval", ["ingest", "--corpus", corpusPath, "--out", campaign, "--seed", "3"]);
  execFileSync("hileval", ["gen-tasks", "--corpus", campaign, "--annotators", "2", "--judges", "2"]);
  taskRecords = readFileSync(join(campaign, "tasks.ndjson"), "utf-8")
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as TaskRecord);

  server = spawn("hileval", ["serve", "--corpus", campaign, "--addr", `127.0.0.1:${PORT}`], {
    stdio: "ignore",
  });
  await waitForServer();
}, 40000);

afterAll(() => {
  server?.kill();
  rmSync(workDir, { recursive: true, force: true });
});

function expectedAnswer(taskId: string): boolean {
  const record = taskRecords.find((t) => t.task_id === taskId);
  if (!record || record.sanity_answer === undefined) throw new Error(`no answer for ${taskId}`);
  return record.sanity_answer;
}

describe("frontend against the live service", () => {
  const api = new ApiClient(BASE);

  it("highlight editor payloads are accepted verbatim", async () => {
    const next = await api.nextTask("ui-annotator-1", "highlight");
    expect(next.status).toBe("ok");
    if (next.status !== "ok") return;
    const task = next.task;

    const doc = await api.document(task.doc_id as string);
    const editor = new HighlightEditor(doc.tokens.length, task.budget_k as number);
    // overlapping drags, merged client-side, still within K = 6
    editor.addDrag(0, 4);
    editor.addDrag(2, 6);
    expect(editor.usedTokens()).toBe(6);
    editor.answerSanity(expectedAnswer(task.task_id));

    const result = await api.submit(editor.payload(task.task_id, "ui-annotator-1"));
    expect(result).toEqual({ status: "accepted" });
  });

  it("server rejects what the editor would have blocked", async () => {
    const next = await api.nextTask("ui-annotator-2", "highlight");
    expect(next.status).toBe("ok");
    if (next.status !== "ok") return;
    const task = next.task;

    // bypass the client gate deliberately: 7 tokens under K = 6
    const result = await api.submit({
      judge_id: "ui-annotator-2",
      task_id: task.task_id,
      spans: [[0, 7]],
      sanity_answer: expectedAnswer(task.task_id),
    });
    expect(result.status).toBe("rejected");
  });

  it("content scores flow through after highlights exist", async () => {
    const next = await api.nextTask("ui-content-1", "content");
    expect(next.status).toBe("ok");
    if (next.status !== "ok") return;
    const task = next.task;
    expect(Array.isArray(task.heatmap)).toBe(true);

    const result = await api.submit({
      judge_id: "ui-content-1",
      task_id: task.task_id,
      scores: { content_precision: 64, content_recall: 58 },
      sanity_answer: expectedAnswer(task.task_id),
      metadata: { slider_default: 50, threshold_used: 0.25 },
    });
    expect(result).toEqual({ status: "accepted" });
  });

  it("quality screens submit per-item scores the service accepts", async () => {
    const next = await api.nextTask("ui-quality-1", "fluency");
    expect(next.status).toBe("ok");
    if (next.status !== "ok") return;
    const screens = QualityScreens.fromTask(next.task);
    expect(screens.metric).toBe("fluency");

    const planted = taskRecords.find((t) => t.task_id === screens.taskId)?.planted ?? {};
    const tagByItem = new Map(Object.entries(planted).map(([tag, id]) => [id, tag]));
    const scoreForTag: Record<string, number> = { bad: 9, mediocre: 48, good: 92 };

    while (!screens.complete()) {
      const item = screens.current();
      screens.setScore(scoreForTag[tagByItem.get(item.item_id) ?? ""] ?? 57);
      screens.next();
    }
    const result = await api.submit(screens.payload("ui-quality-1"));
    expect(result).toEqual({ status: "accepted" });
  });

  it("a mis-ordered planted trio is rejected by the service", async () => {
    const next = await api.nextTask("ui-quality-2", "fluency");
    expect(next.status).toBe("ok");
    if (next.status !== "ok") return;
    const screens = QualityScreens.fromTask(next.task);
    while (!screens.complete()) {
      screens.setScore(55);
      screens.next();
    }
    const result = await api.submit(screens.payload("ui-quality-2"));
    expect(result.status).toBe("rejected");
    if (result.status === "rejected") expect(result.reason).toMatch(/ordering/);
  });

  it("reports are readable over the same API", async () => {
    const csv = await api.reportCsv("hrouge");
    expect(csv.split("\n")[0]).toContain("system");
  });
});

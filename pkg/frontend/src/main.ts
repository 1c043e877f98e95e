/**
 * Entry point: reads ?api= and ?judge= from the URL, then walks the judge
 * through whatever tasks the service has, one screen at a time.
 */

import { ApiClient, type TaskPayload, type TaskType } from "./api.js";
import { HighlightEditor } from "./editor.js";
import { QualityScreens } from "./quality.js";
import {
  attachThresholdSlider,
  renderHighlightEditor,
  renderQualityScreens,
} from "./dom.js";

const TASK_ORDER: TaskType[] = ["highlight", "content", "content_nohl", "fluency", "clarity"];

function statusLine(root: HTMLElement, text: string): void {
  const p = document.createElement("p");
  p.className = "status";
  p.textContent = text;
  root.appendChild(p);
}

async function nextAnyTask(api: ApiClient, judge: string): Promise<TaskPayload | null> {
  for (const type of TASK_ORDER) {
    const response = await api.nextTask(judge, type);
    if (response.status === "ok") return response.task;
  }
  return null;
}

async function showHighlightTask(
  root: HTMLElement,
  api: ApiClient,
  judge: string,
  task: TaskPayload,
): Promise<void> {
  const doc = await api.document(task.doc_id as string);
  const tokens = doc.tokens.map((t) => t.surface);
  const editor = new HighlightEditor(tokens.length, task.budget_k ?? 30);

  const container = document.createElement("div");
  container.className = "document";
  const counter = document.createElement("span");
  const submit = document.createElement("button");
  submit.textContent = "Submit highlight";

  const question = document.createElement("p");
  question.textContent = `True or false: ${task.sanity_statement ?? ""}`;
  const yes = document.createElement("button");
  yes.textContent = "True";
  const no = document.createElement("button");
  no.textContent = "False";
  for (const [button, answer] of [
    [yes, true],
    [no, false],
  ] as const) {
    button.addEventListener("click", () => {
      editor.answerSanity(answer);
      submit.disabled = !editor.canSubmit();
    });
  }

  submit.addEventListener("click", async () => {
    const result = await api.submit(editor.payload(task.task_id, judge));
    statusLine(root, result.status === "accepted" ? "accepted" : `rejected: ${result.reason}`);
    void run(root, api, judge);
  });

  root.replaceChildren(container, counter, question, yes, no, submit);
  renderHighlightEditor(container, counter, submit, tokens, editor);
}

async function showContentTask(
  root: HTMLElement,
  api: ApiClient,
  judge: string,
  task: TaskPayload,
): Promise<void> {
  const doc = await api.document(task.doc_id as string);
  const tokens = doc.tokens.map((t) => t.surface);
  const intensities = task.type === "content" ? (task.heatmap ?? doc.heatmap) : tokens.map(() => 0);

  const container = document.createElement("div");
  container.className = "document";
  const { slider } = attachThresholdSlider(container, tokens, intensities, 0);

  const summary = document.createElement("p");
  summary.className = "summary-text";
  summary.textContent = task.summary_text ?? "";

  const makeScore = (label: string) => {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const input = document.createElement("input");
    input.type = "range";
    input.min = "1";
    input.max = "100";
    input.value = "50";
    wrap.appendChild(input);
    return { wrap, input };
  };
  const recall = makeScore("All important information is present");
  const precision = makeScore("Only important information is present");

  const question = document.createElement("p");
  question.textContent = `True or false: ${task.sanity_statement ?? ""}`;
  let sanityAnswer: boolean | null = null;
  const yes = document.createElement("button");
  yes.textContent = "True";
  const no = document.createElement("button");
  no.textContent = "False";
  const submit = document.createElement("button");
  submit.textContent = "Submit scores";
  submit.disabled = true;
  for (const [button, answer] of [
    [yes, true],
    [no, false],
  ] as const) {
    button.addEventListener("click", () => {
      sanityAnswer = answer;
      submit.disabled = false;
    });
  }

  submit.addEventListener("click", async () => {
    if (sanityAnswer === null) return;
    const result = await api.submit({
      judge_id: judge,
      task_id: task.task_id,
      scores: {
        content_recall: Number(recall.input.value),
        content_precision: Number(precision.input.value),
      },
      sanity_answer: sanityAnswer,
      metadata: { slider_default: 50, threshold_used: Number(slider.value) },
    });
    statusLine(root, result.status === "accepted" ? "accepted" : `rejected: ${result.reason}`);
    void run(root, api, judge);
  });

  root.replaceChildren(
    slider,
    container,
    summary,
    recall.wrap,
    precision.wrap,
    question,
    yes,
    no,
    submit,
  );
}

function showQualityTask(
  root: HTMLElement,
  api: ApiClient,
  judge: string,
  task: TaskPayload,
): void {
  const screens = QualityScreens.fromTask(task);
  renderQualityScreens(root, screens, () => {
    void api.submit(screens.payload(judge)).then((result) => {
      statusLine(root, result.status === "accepted" ? "accepted" : `rejected: ${result.reason}`);
      void run(root, api, judge);
    });
  });
}

export async function run(root: HTMLElement, api: ApiClient, judge: string): Promise<void> {
  const task = await nextAnyTask(api, judge);
  if (task === null) {
    root.replaceChildren();
    statusLine(root, "No tasks left; thank you.");
    return;
  }
  if (task.type === "highlight") return showHighlightTask(root, api, judge, task);
  if (task.type === "content" || task.type === "content_nohl") {
    return showContentTask(root, api, judge, task);
  }
  showQualityTask(root, api, judge, task);
}

declare global {
  interface Window {
    hilevalStart?: () => void;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.hilevalStart = () => {
    const params = new URLSearchParams(window.location.search);
    const api = new ApiClient(params.get("api") ?? "http://127.0.0.1:8000");
    const judge = params.get("judge") ?? `judge-${Math.random().toString(36).slice(2, 8)}`;
    const root = document.getElementById("app");
    if (root) void run(root, api, judge);
  };
}

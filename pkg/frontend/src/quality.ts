/**
 * Quality judging screens: one summary per screen with a single 1-100
 * slider, prev/next navigation that preserves entered values, and a submit
 * gate requiring every summary to be scored.
 *
 * A batch carries exactly one metric (fluency or clarity); anything else is
 * rejected when the batch loads.  The slider's starting position is recorded
 * in the submission metadata since it is a presentation choice, not a score.
 */

import type { QualityItem, QualitySubmission, TaskPayload } from "./api.js";

export const SLIDER_DEFAULT = 50;
export const QUALITY_METRICS = ["fluency", "clarity"] as const;
export type QualityMetric = (typeof QUALITY_METRICS)[number];

export class QualityScreens {
  private scores = new Map<string, number>();
  private index = 0;

  constructor(
    readonly taskId: string,
    readonly metric: QualityMetric,
    readonly items: readonly QualityItem[],
    readonly sliderDefault: number = SLIDER_DEFAULT,
  ) {
    if (!QUALITY_METRICS.includes(metric)) {
      throw new Error(`quality batch must be fluency or clarity, got ${String(metric)}`);
    }
    if (items.length === 0) throw new Error("quality batch has no summaries");
  }

  /** Validate and wrap a task payload from the service. */
  static fromTask(task: TaskPayload): QualityScreens {
    const metric = task.metric ?? task.type;
    if (!QUALITY_METRICS.includes(metric as QualityMetric)) {
      throw new Error(`not a quality batch: task type ${String(task.type)}`);
    }
    if (task.metric !== undefined && task.metric !== task.type) {
      throw new Error(`batch mixes metrics: type=${task.type} metric=${task.metric}`);
    }
    return new QualityScreens(task.task_id, metric as QualityMetric, task.items ?? []);
  }

  get screenCount(): number {
    return this.items.length;
  }

  get currentIndex(): number {
    return this.index;
  }

  current(): QualityItem {
    const item = this.items[this.index];
    if (!item) throw new Error("screen index out of range");
    return item;
  }

  next(): void {
    if (this.index < this.items.length - 1) this.index += 1;
  }

  prev(): void {
    if (this.index > 0) this.index -= 1;
  }

  /** Score for the current screen: last entered value, or the slider default. */
  sliderValue(): number {
    return this.scores.get(this.current().item_id) ?? this.sliderDefault;
  }

  setScore(value: number): void {
    if (!Number.isFinite(value) || value < 1 || value > 100) {
      throw new RangeError(`score ${value} outside [1, 100]`);
    }
    this.scores.set(this.current().item_id, value);
  }

  scoreFor(itemId: string): number | undefined {
    return this.scores.get(itemId);
  }

  /** True once every summary in the batch has an entered score. */
  complete(): boolean {
    return this.items.every((item) => this.scores.has(item.item_id));
  }

  missing(): string[] {
    return this.items.filter((i) => !this.scores.has(i.item_id)).map((i) => i.item_id);
  }

  /** Wire payload; throws while the batch is incomplete. */
  payload(judgeId: string): QualitySubmission {
    if (!this.complete()) {
      throw new Error(`unscored summaries remain: ${this.missing().join(", ")}`);
    }
    const scores: Record<string, number> = {};
    for (const item of this.items) {
      scores[item.item_id] = this.scores.get(item.item_id) as number;
    }
    return {
      judge_id: judgeId,
      task_id: this.taskId,
      scores,
      metadata: { slider_default: this.sliderDefault },
    };
  }
}

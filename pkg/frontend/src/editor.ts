/**
 * Highlight editor state: drag selections over document tokens under a
 * budget, with a live used/K counter and submission gating.
 *
 * Selection is free (judges may over-select while thinking); submission is
 * blocked while the merged token count exceeds the budget, the selection is
 * empty, or the sanity question is unanswered.  Overlapping and adjacent
 * drags merge, so every token counts once.
 */

import type { HighlightSubmission } from "./api.js";

export type Span = [number, number];

function mergeSpans(spans: readonly Span[]): Span[] {
  const ordered = [...spans].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const merged: Span[] = [];
  for (const [start, end] of ordered) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  return merged;
}

export class HighlightEditor {
  private drags: Span[] = [];
  private sanityAnswer: boolean | null = null;

  constructor(
    readonly tokenCount: number,
    readonly budgetK: number,
  ) {
    if (budgetK < 1) throw new RangeError(`budget must be >= 1, got ${budgetK}`);
  }

  /** Record one click-drag over token indices [start, end). */
  addDrag(start: number, end: number): void {
    if (!Number.isInteger(start) || !Number.isInteger(end)) {
      throw new RangeError("drag bounds must be integers");
    }
    if (start < 0 || end > this.tokenCount || start >= end) {
      throw new RangeError(`drag [${start}, ${end}) outside document of ${this.tokenCount} tokens`);
    }
    this.drags.push([start, end]);
  }

  /** Deselect a single token, splitting any span that covers it. */
  removeToken(index: number): void {
    const next: Span[] = [];
    for (const [start, end] of this.spans()) {
      if (index < start || index >= end) {
        next.push([start, end]);
        continue;
      }
      if (start < index) next.push([start, index]);
      if (index + 1 < end) next.push([index + 1, end]);
    }
    this.drags = next;
  }

  clear(): void {
    this.drags = [];
  }

  /** Merged canonical spans. */
  spans(): Span[] {
    return mergeSpans(this.drags);
  }

  /** Tokens currently selected, each counted once. */
  usedTokens(): number {
    return this.spans().reduce((total, [start, end]) => total + (end - start), 0);
  }

  overBudget(): boolean {
    return this.usedTokens() > this.budgetK;
  }

  counterLabel(): string {
    return `${this.usedTokens()}/${this.budgetK}`;
  }

  isSelected(index: number): boolean {
    return this.spans().some(([start, end]) => start <= index && index < end);
  }

  answerSanity(answer: boolean): void {
    this.sanityAnswer = answer;
  }

  sanityAnswered(): boolean {
    return this.sanityAnswer !== null;
  }

  /** Submission gate: non-empty, within budget, sanity question answered. */
  canSubmit(): boolean {
    const used = this.usedTokens();
    return used >= 1 && used <= this.budgetK && this.sanityAnswer !== null;
  }

  /** Wire payload; throws while canSubmit() is false. */
  payload(taskId: string, judgeId: string): HighlightSubmission {
    if (!this.canSubmit()) {
      throw new Error(
        this.sanityAnswer === null
          ? "answer the sanity question before submitting"
          : `selection of ${this.usedTokens()} tokens violates the ${this.budgetK}-token budget`,
      );
    }
    return {
      judge_id: judgeId,
      task_id: taskId,
      spans: this.spans(),
      sanity_answer: this.sanityAnswer as boolean,
    };
  }
}

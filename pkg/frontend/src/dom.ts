/**
 * DOM rendering for the judging screens.  All decision logic lives in the
 * heatmap/editor/quality modules; this layer only draws state and forwards
 * events, so the same rules are testable without a browser.
 */

import { computeHeatmapView } from "./heatmap.js";
import type { HighlightEditor } from "./editor.js";
import type { QualityScreens } from "./quality.js";

const HIGHLIGHT_RGB = "255, 209, 0";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Render tokens with heatmap coloring; blank plus visible error on bad input. */
export function renderHeatmap(
  container: HTMLElement,
  tokens: readonly string[],
  intensities: readonly number[],
  threshold: number,
): void {
  container.replaceChildren();
  const view = computeHeatmapView(tokens, intensities, threshold);
  if (view.error !== null) {
    container.appendChild(el("p", "error", view.error));
    return;
  }
  for (const token of view.tokens) {
    const span = el("span", "token", token.text);
    if (token.highlighted) {
      span.style.backgroundColor = `rgba(${HIGHLIGHT_RGB}, ${token.opacity})`;
      span.classList.add("highlighted");
    }
    container.appendChild(span);
    container.appendChild(document.createTextNode(" "));
  }
}

export interface ThresholdControl {
  slider: HTMLInputElement;
  redraw: () => void;
}

/** Threshold scroller wired to a heatmap container. */
export function attachThresholdSlider(
  container: HTMLElement,
  tokens: readonly string[],
  intensities: readonly number[],
  initial = 0,
): ThresholdControl {
  const slider = el("input");
  slider.type = "range";
  slider.min = "0";
  slider.max = "1";
  slider.step = "0.01";
  slider.value = String(initial);
  const redraw = () => renderHeatmap(container, tokens, intensities, Number(slider.value));
  slider.addEventListener("input", redraw);
  redraw();
  return { slider, redraw };
}

/**
 * Token-level selection: mousedown on one token, mouseup on another selects
 * the whole range (snapped outward to token boundaries by construction).
 */
export function renderHighlightEditor(
  container: HTMLElement,
  counter: HTMLElement,
  submitButton: HTMLButtonElement,
  tokens: readonly string[],
  editor: HighlightEditor,
): void {
  let dragStart: number | null = null;

  const redraw = () => {
    container.replaceChildren();
    tokens.forEach((text, index) => {
      const span = el("span", "token", text);
      span.dataset.index = String(index);
      if (editor.isSelected(index)) span.classList.add("selected");
      span.addEventListener("mousedown", () => {
        dragStart = index;
      });
      span.addEventListener("mouseup", () => {
        if (dragStart === null) return;
        const [from, to] = dragStart <= index ? [dragStart, index] : [index, dragStart];
        editor.addDrag(from, to + 1);
        dragStart = null;
        redraw();
      });
      container.appendChild(span);
      container.appendChild(document.createTextNode(" "));
    });
    counter.textContent = editor.counterLabel();
    counter.classList.toggle("over-budget", editor.overBudget());
    submitButton.disabled = !editor.canSubmit();
  };
  redraw();
}

/** One summary per screen with a single slider; values survive navigation. */
export function renderQualityScreens(
  root: HTMLElement,
  screens: QualityScreens,
  onSubmit: () => void,
): void {
  const heading = el("h2");
  const summary = el("p", "summary-text");
  const slider = el("input");
  slider.type = "range";
  slider.min = "1";
  slider.max = "100";
  slider.step = "1";
  const sliderLabel = el("span", "slider-value");
  const prev = el("button", undefined, "Prev");
  const next = el("button", undefined, "Next");
  const submit = el("button", undefined, "Submit batch");

  const redraw = () => {
    const item = screens.current();
    heading.textContent = `${screens.metric} ${screens.currentIndex + 1}/${screens.screenCount}`;
    summary.textContent = item.text;
    slider.value = String(screens.sliderValue());
    sliderLabel.textContent = slider.value;
    prev.disabled = screens.currentIndex === 0;
    next.disabled = screens.currentIndex === screens.screenCount - 1;
    submit.disabled = !screens.complete();
  };

  slider.addEventListener("input", () => {
    screens.setScore(Number(slider.value));
    redraw();
  });
  prev.addEventListener("click", () => {
    screens.prev();
    redraw();
  });
  next.addEventListener("click", () => {
    screens.next();
    redraw();
  });
  submit.addEventListener("click", () => {
    if (screens.complete()) onSubmit();
  });

  root.replaceChildren(heading, summary, slider, sliderLabel, prev, next, submit);
  redraw();
}

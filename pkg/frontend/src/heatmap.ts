/**
 * Heatmap view computation: which tokens are colored, and how strongly.
 *
 * Intensity is the fraction of annotators that highlighted a token; the
 * threshold scroller hides weaker highlights.  The mapping from intensity to
 * opacity is the identity, so darker always means more annotators.
 */

export interface TokenView {
  text: string;
  /** colored iff intensity > 0 and intensity >= threshold */
  highlighted: boolean;
  /** background opacity in [0, 1]; 0 when not highlighted */
  opacity: number;
}

export interface HeatmapView {
  tokens: TokenView[];
  /** non-null renders as a visible error with a blank document */
  error: string | null;
}

export function clampThreshold(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

export function computeHeatmapView(
  tokens: readonly string[],
  intensities: readonly number[],
  threshold: number,
): HeatmapView {
  if (tokens.length !== intensities.length) {
    return {
      tokens: [],
      error: `document has ${tokens.length} tokens but ${intensities.length} intensities`,
    };
  }
  const cutoff = clampThreshold(threshold);
  const views = tokens.map((text, i) => {
    const intensity = intensities[i] ?? 0;
    if (intensity < 0 || intensity > 1) {
      throw new RangeError(`intensity ${intensity} outside [0, 1] at token ${i}`);
    }
    const highlighted = intensity > 0 && intensity >= cutoff;
    return { text, highlighted, opacity: highlighted ? intensity : 0 };
  });
  return { tokens: views, error: null };
}

import { groupColor, REF_BADGES } from "./palette.js";
import type { AnnotateResponse, SentenceRecord, VerdictRecord } from "./types.js";

/** Inline decoration in sentence-local character coordinates. */
export interface Decoration {
  charStart: number;
  charEnd: number;
  group: string;
  color: string;
  patternId: string;
  text: string;
}

export interface LegendEntry {
  group: string;
  color: string;
}

/** Everything needed to render one annotated sentence. Label, explanation,
 * and authorial reference are byte-for-byte the service's output. */
export interface HighlightView {
  sentenceId: string;
  text: string;
  label: VerdictRecord["label"];
  decorations: Decoration[];
  legend: LegendEntry[];
  explanation: string;
  refBadge: string;
  libraryVersion: string;
  degradedLinguistics: boolean;
}

function decorationsFor(sentence: SentenceRecord, verdict: VerdictRecord): Decoration[] {
  return verdict.spans.map((span) => {
    const first = sentence.tokens[span.start];
    const last = sentence.tokens[span.end - 1];
    if (first === undefined || last === undefined) {
      throw new Error(
        `span ${span.start}..${span.end} outside sentence ${sentence.id} (${sentence.tokens.length} tokens)`,
      );
    }
    return {
      charStart: first.start,
      charEnd: last.end,
      group: span.group,
      color: groupColor(span.group),
      patternId: span.pattern_id,
      text: span.text,
    };
  });
}

export function buildHighlightView(
  sentence: SentenceRecord,
  verdict: VerdictRecord,
  degraded: boolean,
): HighlightView {
  const decorations = decorationsFor(sentence, verdict);
  const seen = new Set<string>();
  const legend: LegendEntry[] = [];
  for (const d of decorations) {
    if (!seen.has(d.group)) {
      seen.add(d.group);
      legend.push({ group: d.group, color: d.color });
    }
  }
  return {
    sentenceId: sentence.id,
    text: sentence.text,
    label: verdict.label,
    decorations,
    legend,
    explanation: verdict.explanation,
    refBadge: REF_BADGES[verdict.authorial_ref] ?? verdict.authorial_ref,
    libraryVersion: verdict.library_version,
    degradedLinguistics: degraded,
  };
}

export function buildHighlightViews(response: AnnotateResponse): HighlightView[] {
  if (response.sentences.length !== response.verdicts.length) {
    throw new Error("sentence/verdict count mismatch in service response");
  }
  return response.sentences.map((s, i) =>
    buildHighlightView(s, response.verdicts[i], response.degraded_linguistics),
  );
}

/** Structural checks mirroring the view invariants; used by tests and as a
 * guard before rendering. */
export function assertViewInvariants(view: HighlightView): void {
  for (const d of view.decorations) {
    if (!(0 <= d.charStart && d.charStart < d.charEnd && d.charEnd <= view.text.length)) {
      throw new Error(`decoration ${d.charStart}..${d.charEnd} outside sentence text`);
    }
    if (!view.legend.some((l) => l.group === d.group)) {
      throw new Error(`group ${d.group} missing from legend`);
    }
  }
}

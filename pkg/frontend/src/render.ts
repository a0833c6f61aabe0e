import type { Decoration, HighlightView } from "./highlight.js";

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Flatten possibly-overlapping decorations into non-overlapping segments;
 * overlapping regions keep every group for the tooltip and blend via the
 * first decoration's color. */
function segments(text: string, decorations: Decoration[]) {
  const cuts = new Set<number>([0, text.length]);
  for (const d of decorations) {
    cuts.add(d.charStart);
    cuts.add(d.charEnd);
  }
  const points = [...cuts].sort((a, b) => a - b);
  const out: Array<{ start: number; end: number; active: Decoration[] }> = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [start, end] = [points[i], points[i + 1]];
    const active = decorations.filter((d) => d.charStart <= start && end <= d.charEnd);
    out.push({ start, end, active });
  }
  return out;
}

export function renderSentenceHtml(view: HighlightView): string {
  const parts: string[] = [];
  for (const seg of segments(view.text, view.decorations)) {
    const piece = escapeHtml(view.text.slice(seg.start, seg.end));
    if (seg.active.length === 0) {
      parts.push(piece);
    } else {
      const first = seg.active[0];
      const title = seg.active.map((d) => `${d.group} (${d.patternId})`).join(", ");
      parts.push(
        `<mark style="background:${first.color}66" title="${escapeHtml(title)}">${piece}</mark>`,
      );
    }
  }
  const badge = view.refBadge
    ? ` <span class="ref-badge">${escapeHtml(view.refBadge)}</span>`
    : "";
  return (
    `<div class="sentence" data-label="${view.label}">` +
    `<p>${parts.join("")}${badge}</p>` +
    `<p class="explanation">${escapeHtml(view.explanation)}</p>` +
    `</div>`
  );
}

export function renderLegendHtml(view: HighlightView): string {
  const items = view.legend
    .map(
      (l) =>
        `<li><span class="swatch" style="background:${l.color}"></span>${escapeHtml(l.group)}</li>`,
    )
    .join("");
  return `<ul class="legend">${items}</ul>`;
}

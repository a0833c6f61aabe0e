/** Browser entry point: wires the two panels (annotate view, pattern editor)
 * to the HTTP service. All verdict content shown comes verbatim from the
 * service; this file only handles DOM plumbing and stays out of the tests. */

import { ApiError, HttpApi } from "./api.js";
import { PatternEditLoop, summarizeDiff } from "./editloop.js";
import { assertViewInvariants, buildHighlightViews } from "./highlight.js";
import { renderLegendHtml, renderSentenceHtml } from "./render.js";

const api = new HttpApi("");
const editLoop = new PatternEditLoop(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function showError(message: string) {
  const banner = el<HTMLDivElement>("error-banner");
  banner.textContent = message;
  banner.hidden = false;
}

function clearError() {
  el<HTMLDivElement>("error-banner").hidden = true;
}

async function onAnnotate() {
  clearError();
  const text = el<HTMLTextAreaElement>("annotate-input").value;
  const output = el<HTMLDivElement>("annotate-output");
  if (!text.trim()) {
    output.innerHTML = "<p class='empty'>Nothing to annotate yet.</p>";
    return;
  }
  try {
    const response = await api.annotate(text);
    const views = buildHighlightViews(response);
    views.forEach(assertViewInvariants);
    const warning = response.degraded_linguistics
      ? "<p class='warning'>Plain-text mode: part-of-speech and dependency constraints are inactive.</p>"
      : "";
    output.innerHTML =
      warning +
      views.map((v) => renderSentenceHtml(v) + renderLegendHtml(v)).join("") +
      `<p class='version'>library ${response.library_version.slice(0, 12)}</p>`;
  } catch (err) {
    output.innerHTML = "";
    showError(err instanceof ApiError ? `service error ${err.status}` : String(err));
  }
}

function renderFindings() {
  const state = editLoop.draft.validation;
  const box = el<HTMLDivElement>("findings");
  if (state.kind === "unchecked") {
    box.innerHTML = "<p>Not validated yet.</p>";
  } else {
    const rows = state.findings
      .map((f) => `<li class="${f.severity.toLowerCase()}">${f.severity} ${f.code} ${f.rule_id ?? ""}: ${f.message}</li>`)
      .join("");
    box.innerHTML = `<ul>${rows}</ul>` + (state.kind === "ok" ? "<p>OK to commit.</p>" : "");
  }
  el<HTMLButtonElement>("commit").disabled = !editLoop.canCommit;
}

async function onLoadPatterns() {
  const state = await editLoop.load();
  el<HTMLTextAreaElement>("draft").value = state.assetsText;
  renderFindings();
}

async function onValidate() {
  editLoop.edit(el<HTMLTextAreaElement>("draft").value);
  await editLoop.validate();
  renderFindings();
}

async function onPreview() {
  editLoop.edit(el<HTMLTextAreaElement>("draft").value);
  const corpus = el<HTMLSelectElement>("corpus").value;
  const diff = await editLoop.preview(corpus);
  renderFindings();
  const box = el<HTMLDivElement>("diff");
  if (!diff) {
    box.textContent = "Draft is not parseable.";
    return;
  }
  const summary = summarizeDiff(diff);
  const rows = diff.changed
    .map(
      (c) =>
        `<li><code>${c.sentence_id}</code> ${c.before.label} → ${c.after.label}: ${c.text}</li>`,
    )
    .join("");
  box.innerHTML =
    `<p>${summary.total} sentence(s) changed; ` +
    `+${summary.gainedUncertainty.length} / -${summary.lostUncertainty.length} uncertainty</p>` +
    `<ul>${rows}</ul>`;
}

async function onCommit() {
  await editLoop.validate();
  renderFindings();
  const version = await editLoop.commit();
  const status = el<HTMLParagraphElement>("commit-status");
  if (version) {
    status.textContent = `Committed; live library is now ${version.slice(0, 12)}`;
  } else if (editLoop.draft.conflict) {
    status.textContent = `Blocked: server moved to ${editLoop.draft.conflict.currentVersion.slice(0, 12)}; reload the draft.`;
  } else {
    status.textContent = "Blocked by validation findings.";
  }
}

export function wireUp() {
  el<HTMLButtonElement>("annotate").addEventListener("click", onAnnotate);
  el<HTMLButtonElement>("load-patterns").addEventListener("click", onLoadPatterns);
  el<HTMLButtonElement>("validate").addEventListener("click", onValidate);
  el<HTMLButtonElement>("preview").addEventListener("click", onPreview);
  el<HTMLButtonElement>("commit").addEventListener("click", onCommit);
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", wireUp);
}

import { ApiError, type WorkbenchApi } from "./api.js";
import type { Finding, PatternAssets, PreviewResponse } from "./types.js";

export type ValidationState =
  | { kind: "unchecked" }
  | { kind: "ok"; findings: Finding[]; version: string }
  | { kind: "error"; findings: Finding[] };

export interface DraftState {
  assetsText: string;
  baseVersion: string;
  validation: ValidationState;
  preview: PreviewResponse | null;
  committedVersion: string | null;
  conflict: { currentVersion: string } | null;
}

function parseError(message: string): Finding {
  return { severity: "ERROR", code: "PARSE", message, rule_id: null, lexicon: null };
}

function findingsOf(body: unknown): Finding[] {
  const findings = (body as { findings?: Finding[] } | null)?.findings;
  return Array.isArray(findings) ? findings : [];
}

/** The edit -> validate -> preview -> commit loop for pattern assets.
 *
 * Commit is blocked until the current draft text validated with zero
 * ERROR-severity findings, and uses the version loaded with the draft as an
 * optimistic-concurrency precondition: the service refuses the swap when
 * someone else committed in between.
 */
export class PatternEditLoop {
  private state: DraftState = {
    assetsText: "",
    baseVersion: "",
    validation: { kind: "unchecked" },
    preview: null,
    committedVersion: null,
    conflict: null,
  };

  constructor(private readonly api: WorkbenchApi) {}

  get draft(): DraftState {
    return this.state;
  }

  get canCommit(): boolean {
    return this.state.validation.kind === "ok";
  }

  async load(): Promise<DraftState> {
    const current = await this.api.getPatterns();
    this.state = {
      assetsText: JSON.stringify(current.assets, null, 2),
      baseVersion: current.version,
      validation: { kind: "unchecked" },
      preview: null,
      committedVersion: null,
      conflict: null,
    };
    return this.state;
  }

  /** Any edit invalidates previous validation and preview results. */
  edit(text: string): DraftState {
    this.state = {
      ...this.state,
      assetsText: text,
      validation: { kind: "unchecked" },
      preview: null,
      conflict: null,
    };
    return this.state;
  }

  private parseAssets(): PatternAssets | null {
    try {
      return JSON.parse(this.state.assetsText) as PatternAssets;
    } catch (err) {
      this.state = {
        ...this.state,
        validation: { kind: "error", findings: [parseError(`draft is not valid JSON: ${err}`)] },
      };
      return null;
    }
  }

  async validate(): Promise<ValidationState> {
    const assets = this.parseAssets();
    if (assets === null) {
      return this.state.validation;
    }
    try {
      const res = await this.api.validatePatterns(assets);
      this.state = {
        ...this.state,
        validation: { kind: "ok", findings: res.findings, version: res.version ?? "" },
      };
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.state = {
          ...this.state,
          validation: { kind: "error", findings: findingsOf(err.body) },
        };
      } else {
        throw err;
      }
    }
    return this.state.validation;
  }

  async preview(corpusId = "default"): Promise<PreviewResponse | null> {
    const assets = this.parseAssets();
    if (assets === null) {
      return null;
    }
    const diff = await this.api.preview(assets, corpusId);
    this.state = { ...this.state, preview: diff };
    return diff;
  }

  /** Swap the library to the draft. Resolves to the new version, or null
   * when blocked (not validated, validation errors, or a version conflict). */
  async commit(): Promise<string | null> {
    if (!this.canCommit) {
      return null;
    }
    const assets = this.parseAssets();
    if (assets === null) {
      return null;
    }
    try {
      const res = await this.api.putPatterns(assets, this.state.baseVersion);
      this.state = { ...this.state, committedVersion: res.version, conflict: null };
      return res.version;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        const body = err.body as { current_version?: string } | null;
        this.state = {
          ...this.state,
          conflict: { currentVersion: body?.current_version ?? "" },
        };
        return null;
      }
      if (err instanceof ApiError && err.status === 422) {
        this.state = {
          ...this.state,
          validation: { kind: "error", findings: findingsOf(err.body) },
        };
        return null;
      }
      throw err;
    }
  }
}

/** Summary used by the diff panel: per label and group, which sentences
 * changed. The entry count always equals the service's changed list length. */
export interface DiffSummary {
  total: number;
  gainedUncertainty: string[];
  lostUncertainty: string[];
  groupChanges: Record<string, number>;
}

export function summarizeDiff(diff: PreviewResponse): DiffSummary {
  const gained: string[] = [];
  const lost: string[] = [];
  const groupChanges: Record<string, number> = {};
  for (const entry of diff.changed) {
    if (entry.before.label !== "UNCERTAINTY" && entry.after.label === "UNCERTAINTY") {
      gained.push(entry.sentence_id);
    }
    if (entry.before.label === "UNCERTAINTY" && entry.after.label !== "UNCERTAINTY") {
      lost.push(entry.sentence_id);
    }
    const groups = new Set<string>([
      ...entry.before.spans.map((s) => s.group),
      ...entry.after.spans.map((s) => s.group),
    ]);
    for (const g of groups) {
      const beforeN = entry.before.spans.filter((s) => s.group === g).length;
      const afterN = entry.after.spans.filter((s) => s.group === g).length;
      if (beforeN !== afterN) {
        groupChanges[g] = (groupChanges[g] ?? 0) + 1;
      }
    }
  }
  return { total: diff.changed.length, gainedUncertainty: gained, lostUncertainty: lost, groupChanges };
}

import { describe, expect, it } from "vitest";

import { ApiError, type WorkbenchApi } from "../src/api.js";
import { PatternEditLoop, summarizeDiff } from "../src/editloop.js";
import type {
  PatternAssets,
  PatternsResponse,
  PreviewResponse,
  ValidateResponse,
} from "../src/types.js";
import { loadFixture } from "./fixtures.js";

const faithfulPatterns = loadFixture<PatternsResponse>("patterns_get_faithful.json");
const defaultPatterns = loadFixture<PatternsResponse>("patterns_get.json");
const previewFixture = loadFixture<PreviewResponse>("preview_needs_replicated.json");
const duplicate422 = loadFixture<{ status: number; body: { findings: unknown[] } }>(
  "validate_duplicate_422.json",
);
const conflict409 = loadFixture<{ status: number; body: unknown }>("put_conflict_409.json");
const commit200 = loadFixture<{ status: number; body: { version: string } }>("put_commit_200.json");

function hasDuplicateIds(assets: PatternAssets): boolean {
  const ids = assets.rules.map((r) => r.id);
  return new Set(ids).size !== ids.length;
}

/** Test double that replays the recorded service responses. */
class FakeApi implements WorkbenchApi {
  currentVersion = faithfulPatterns.version;

  async annotate(): Promise<never> {
    throw new Error("not used in these tests");
  }

  async getPatterns(): Promise<PatternsResponse> {
    return faithfulPatterns;
  }

  async validatePatterns(assets: PatternAssets): Promise<ValidateResponse> {
    if (hasDuplicateIds(assets)) {
      throw new ApiError("422", duplicate422.status, duplicate422.body);
    }
    return { version: "candidate", findings: [] };
  }

  async putPatterns(assets: PatternAssets, expectedVersion: string): Promise<{ version: string }> {
    if (hasDuplicateIds(assets)) {
      throw new ApiError("422", duplicate422.status, duplicate422.body);
    }
    if (expectedVersion !== this.currentVersion) {
      throw new ApiError("409", conflict409.status, conflict409.body);
    }
    this.currentVersion = commit200.body.version;
    return commit200.body;
  }

  async preview(_assets: PatternAssets, corpusId: string): Promise<PreviewResponse> {
    if (corpusId !== "error_analysis") {
      return { ...previewFixture, corpus_id: corpusId, changed: [] };
    }
    return previewFixture;
  }
}

describe("pattern edit loop", () => {
  it("adding the replication rules flips the error-analysis fixture CLAIM to UNCERTAINTY", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    // the draft starts from the library without the errfix_* rules
    const loaded = JSON.parse(loop.draft.assetsText) as PatternAssets;
    expect(loaded.rules.some((r) => String(r.id).startsWith("errfix_"))).toBe(false);

    loop.edit(JSON.stringify(defaultPatterns.assets));
    await loop.validate();
    expect(loop.canCommit).toBe(true);

    const diff = await loop.preview("error_analysis");
    expect(diff).not.toBeNull();
    const replication = diff!.changed.find((c) => c.text.includes("needs to be replicated"));
    expect(replication).toBeDefined();
    expect(replication!.before.label).toBe("CLAIM");
    expect(replication!.after.label).toBe("UNCERTAINTY");

    // diff view completeness: the summary covers exactly the changed list
    const summary = summarizeDiff(diff!);
    expect(summary.total).toBe(diff!.changed.length);
    expect(summary.gainedUncertainty).toHaveLength(diff!.changed.length);
    expect(summary.lostUncertainty).toHaveLength(0);

    const committed = await loop.commit();
    expect(committed).toBe(commit200.body.version);
    expect(loop.draft.committedVersion).toBe(commit200.body.version);
  });

  it("blocks commit on a duplicate-id draft and surfaces the findings", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    const assets = JSON.parse(loop.draft.assetsText) as PatternAssets;
    assets.rules = [...assets.rules, { ...assets.rules[0] }];
    loop.edit(JSON.stringify(assets));

    const state = await loop.validate();
    expect(state.kind).toBe("error");
    if (state.kind === "error") {
      expect(state.findings.length).toBeGreaterThan(0);
      expect(state.findings.some((f) => f.severity === "ERROR")).toBe(true);
    }
    expect(loop.canCommit).toBe(false);
    expect(await loop.commit()).toBeNull();
  });

  it("blocks commit until the draft has been validated", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    expect(loop.canCommit).toBe(false);
    expect(await loop.commit()).toBeNull();
  });

  it("previewing the unchanged draft yields an empty diff", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    const diff = await loop.preview("default");
    expect(diff!.changed).toHaveLength(0);
  });

  it("a concurrent swap shows up as a version conflict on commit", async () => {
    const api = new FakeApi();
    const loop = new PatternEditLoop(api);
    await loop.load();
    await loop.validate();
    api.currentVersion = "someone-else-committed";
    expect(await loop.commit()).toBeNull();
    expect(loop.draft.conflict).not.toBeNull();
  });

  it("treats unparseable drafts as local ERROR findings", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    loop.edit("{not json");
    const state = await loop.validate();
    expect(state.kind).toBe("error");
    if (state.kind === "error") {
      expect(state.findings[0].code).toBe("PARSE");
    }
    expect(await loop.commit()).toBeNull();
  });

  it("editing resets validation and preview state", async () => {
    const loop = new PatternEditLoop(new FakeApi());
    await loop.load();
    await loop.validate();
    await loop.preview("error_analysis");
    expect(loop.canCommit).toBe(true);
    loop.edit(loop.draft.assetsText + " ");
    expect(loop.canCommit).toBe(false);
    expect(loop.draft.preview).toBeNull();
  });
});

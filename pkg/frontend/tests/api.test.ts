import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, HttpApi } from "../src/api.js";

function stubFetch(status: number, body: unknown) {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  globalThis.fetch = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return calls;
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("http client wire format", () => {
  it("posts exactly one of text/conllu to /annotate", async () => {
    const calls = stubFetch(200, { verdicts: [], sentences: [] });
    await new HttpApi("http://svc").annotate("Some text.");
    expect(calls[0].url).toBe("http://svc/annotate");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ text: "Some text." });
  });

  it("puts assets with the expected_version precondition", async () => {
    const calls = stubFetch(200, { version: "v2" });
    const assets = { lexicons: {}, rules: [] };
    await new HttpApi().putPatterns(assets, "v1");
    expect(calls[0].url).toBe("/patterns");
    expect(calls[0].init?.method).toBe("PUT");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      assets,
      expected_version: "v1",
    });
  });

  it("sends corpus_id on preview", async () => {
    const calls = stubFetch(200, { changed: [] });
    await new HttpApi().preview({ lexicons: {}, rules: [] }, "error_analysis");
    expect(JSON.parse(String(calls[0].init?.body)).corpus_id).toBe("error_analysis");
  });

  it("wraps non-2xx responses in ApiError with the parsed body", async () => {
    stubFetch(422, { findings: [{ severity: "ERROR" }] });
    const err = await new HttpApi().validatePatterns({ lexicons: {}, rules: [] }).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body.findings).toHaveLength(1);
  });
});

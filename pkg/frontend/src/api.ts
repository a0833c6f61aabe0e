import type {
  AnnotateResponse,
  PatternAssets,
  PatternsResponse,
  PreviewResponse,
  ValidateResponse,
} from "./types.js";

/** Error carrying the HTTP status and parsed body (422 findings, 409 info). */
export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly body: unknown,
  ) {
    super(message);
  }
}

/** The service surface the workbench consumes; faked in tests with recorded
 * responses, implemented over fetch in the browser. */
export interface WorkbenchApi {
  annotate(text: string): Promise<AnnotateResponse>;
  getPatterns(): Promise<PatternsResponse>;
  validatePatterns(assets: PatternAssets): Promise<ValidateResponse>;
  putPatterns(assets: PatternAssets, expectedVersion: string): Promise<{ version: string }>;
  preview(assets: PatternAssets, corpusId: string): Promise<PreviewResponse>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    throw new ApiError(`${init?.method ?? "GET"} ${url} failed: ${res.status}`, res.status, body);
  }
  return body as T;
}

export class HttpApi implements WorkbenchApi {
  constructor(private readonly base: string = "") {}

  annotate(text: string): Promise<AnnotateResponse> {
    return request(`${this.base}/annotate`, { method: "POST", body: JSON.stringify({ text }) });
  }

  getPatterns(): Promise<PatternsResponse> {
    return request(`${this.base}/patterns`);
  }

  validatePatterns(assets: PatternAssets): Promise<ValidateResponse> {
    return request(`${this.base}/patterns/validate`, {
      method: "POST",
      body: JSON.stringify({ assets }),
    });
  }

  putPatterns(assets: PatternAssets, expectedVersion: string): Promise<{ version: string }> {
    return request(`${this.base}/patterns`, {
      method: "PUT",
      body: JSON.stringify({ assets, expected_version: expectedVersion }),
    });
  }

  preview(assets: PatternAssets, corpusId: string): Promise<PreviewResponse> {
    return request(`${this.base}/preview`, {
      method: "POST",
      body: JSON.stringify({ assets, corpus_id: corpusId }),
    });
  }
}

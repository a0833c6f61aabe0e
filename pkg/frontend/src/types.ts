/** Wire types for the annotation service. Field names follow the service
 * responses exactly; the UI never reshapes or recomputes verdict content. */

export interface SpanRecord {
  start: number;
  end: number;
  group: string;
  pattern_id: string;
  text: string;
}

export interface CanceledRecord {
  span: SpanRecord;
  by: SpanRecord;
}

export interface VerdictRecord {
  sentence_id: string;
  label: "UNCERTAINTY" | "CLAIM";
  spans: SpanRecord[];
  canceled: CanceledRecord[];
  authorial_ref: "AUTHOR" | "FORMER_STUDY" | "BOTH" | "NONE";
  explanation: string;
  library_version: string;
  text_checksum: string;
}

export interface TokenRecord {
  text: string;
  start: number;
  end: number;
}

export interface SentenceRecord {
  id: string;
  text: string;
  tokens: TokenRecord[];
}

export interface AnnotateResponse {
  library_version: string;
  degraded_linguistics: boolean;
  sentences: SentenceRecord[];
  verdicts: VerdictRecord[];
}

export interface PatternAssets {
  lexicons: Record<string, string[]>;
  rules: Array<Record<string, unknown>>;
}

export interface PatternsResponse {
  version: string;
  assets: PatternAssets;
}

export interface Finding {
  severity: "ERROR" | "WARNING";
  code: string;
  message: string;
  rule_id: string | null;
  lexicon: string | null;
}

export interface ValidateResponse {
  version?: string;
  findings: Finding[];
}

export interface PreviewEntry {
  sentence_id: string;
  text: string;
  before: VerdictRecord;
  after: VerdictRecord;
}

export interface PreviewResponse {
  corpus_id: string;
  before_version: string;
  after_version: string;
  changed: PreviewEntry[];
}

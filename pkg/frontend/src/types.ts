/** Payload types mirroring the annotation service API (docs/corpus_schema.md). */

export interface AnchorPayload {
  index: number;
  role: string | null;
}

export interface FramePayload {
  target: string;
  cs: string;
  anchor: AnchorPayload;
  property: string;
  orientation: "positive" | "negative";
  rank: number;
  implicit: boolean;
  amount: string | null;
}

export interface Violation {
  severity: "error" | "warning";
  field: string;
  message: string;
}

export interface AnnotationState {
  status: "unseen" | "skipped" | "marked-non-superlative" | "annotated";
  revision: number;
  is_superlative: boolean | null;
  frame: FramePayload | null;
}

export interface ContextPayload {
  start: number;
  end: number;
  text: string;
}

export interface InstancePayload {
  id: string;
  doc_id: string;
  domain: string;
  doc_text: string;
  sentence_span: [number, number];
  trigger_span: [number, number];
  trigger: string;
  kind: string | null;
  filtered: boolean;
  reason: string | null;
  context: ContextPayload;
  annotation: AnnotationState;
}

export interface DocumentPayload {
  id: string;
  text: string;
  domain: string;
}

export interface IaaRow {
  name: string;
  support: number;
  accuracy: number | null;
  kappa: number | null;
}

export interface IaaPayload {
  n_overlap: number;
  rows: IaaRow[];
}

export interface SubmitOk {
  revision: number;
  status: string;
}

export interface SubmitRejected {
  violations: Violation[];
  override_allowed?: boolean;
}

export interface SubmitConflict {
  error: string;
  current_revision: number;
}

export type SubmitResult =
  | { kind: "ok"; body: SubmitOk }
  | { kind: "rejected"; body: SubmitRejected }
  | { kind: "conflict"; body: SubmitConflict };

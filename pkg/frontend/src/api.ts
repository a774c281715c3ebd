/** Thin typed client for the annotation service; fetch is injectable for
 * tests. All annotator-scoped calls send the X-Annotator header. */

import type {
  DocumentPayload,
  FramePayload,
  IaaPayload,
  InstancePayload,
  SubmitResult,
} from "./types.js";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;
  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private annotator: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private headers(): Record<string, string> {
    return { "X-Annotator": this.annotator, "Content-Type": "application/json" };
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      headers: this.headers(),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as T;
  }

  getDocuments(): Promise<DocumentPayload[]> {
    return this.getJson("/documents");
  }

  getCandidates(docId?: string): Promise<InstancePayload[]> {
    const query = docId ? `?doc=${encodeURIComponent(docId)}` : "";
    return this.getJson(`/candidates${query}`);
  }

  getInstance(instanceId: string): Promise<InstancePayload> {
    return this.getJson(`/instance/${encodeURIComponent(instanceId)}`);
  }

  getIaa(annotatorA: string, annotatorB: string, sample?: number, seed?: number): Promise<IaaPayload> {
    const params = new URLSearchParams({ annotator_a: annotatorA, annotator_b: annotatorB });
    if (sample !== undefined) params.set("sample", String(sample));
    if (seed !== undefined) params.set("seed", String(seed));
    return this.getJson(`/iaa?${params.toString()}`);
  }

  async submitFrame(
    instanceId: string,
    revision: number,
    frame: FramePayload,
    override = false,
  ): Promise<SubmitResult> {
    return this.post(instanceId, {
      revision,
      is_superlative: true,
      frame,
      override,
    });
  }

  async markNonSuperlative(instanceId: string, revision: number): Promise<SubmitResult> {
    return this.post(instanceId, { revision, is_superlative: false, frame: null });
  }

  async skip(instanceId: string): Promise<void> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/instance/${encodeURIComponent(instanceId)}/skip`,
      { method: "POST", headers: this.headers() },
    );
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
  }

  private async post(instanceId: string, body: unknown): Promise<SubmitResult> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/instance/${encodeURIComponent(instanceId)}/frame`,
      { method: "POST", headers: this.headers(), body: JSON.stringify(body) },
    );
    const payload = await response.json();
    if (response.status === 200) return { kind: "ok", body: payload };
    if (response.status === 422) return { kind: "rejected", body: payload };
    if (response.status === 409) return { kind: "conflict", body: payload };
    throw new ApiError(response.status, JSON.stringify(payload));
  }
}

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { FramePayload } from "../src/types.js";

const FRAME: FramePayload = {
  target: "Varna",
  cs: "ports OF=Bulgaria",
  anchor: { index: 0, role: null },
  property: "size",
  orientation: "positive",
  rank: 1,
  implicit: false,
  amount: null,
};

function fakeFetch(status: number, body: unknown, calls: Array<{ url: string; init?: RequestInit }>) {
  return async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

describe("ApiClient", () => {
  it("sends the annotator header and revision", async () => {
    const calls: Array<{ url: string; init?: RequestInit }> = [];
    const client = new ApiClient("http://svc", "annotator-a", fakeFetch(200, { revision: 1, status: "annotated" }, calls));
    const result = await client.submitFrame("x1", 0, FRAME);
    expect(result.kind).toBe("ok");
    expect(calls[0].url).toBe("http://svc/instance/x1/frame");
    const headers = calls[0].init?.headers as Record<string, string>;
    expect(headers["X-Annotator"]).toBe("annotator-a");
    const body = JSON.parse(String(calls[0].init?.body));
    expect(body.revision).toBe(0);
    expect(body.frame).toEqual(FRAME);
  });

  it("maps 422 to a rejection with violations", async () => {
    const calls: never[] = [];
    const client = new ApiClient(
      "http://svc",
      "a",
      fakeFetch(422, { violations: [{ severity: "error", field: "rank", message: "rank must be ≥ 1" }] }, calls),
    );
    const result = await client.submitFrame("x1", 0, { ...FRAME, rank: 0 });
    expect(result.kind).toBe("rejected");
    if (result.kind === "rejected") {
      expect(result.body.violations[0].message).toBe("rank must be ≥ 1");
    }
  });

  it("maps 409 to a conflict carrying the current revision", async () => {
    const calls: never[] = [];
    const client = new ApiClient("http://svc", "a", fakeFetch(409, { error: "revision conflict", current_revision: 4 }, calls));
    const result = await client.submitFrame("x1", 1, FRAME);
    expect(result.kind).toBe("conflict");
    if (result.kind === "conflict") expect(result.body.current_revision).toBe(4);
  });

  it("throws ApiError on unexpected statuses", async () => {
    const calls: never[] = [];
    const client = new ApiClient("http://svc", "a", fakeFetch(500, { boom: true }, calls));
    await expect(client.getInstance("x1")).rejects.toMatchObject({ status: 500 });
  });
});

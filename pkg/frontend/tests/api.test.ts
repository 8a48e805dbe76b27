// The fetch wrappers: paths, bodies, cookies and error envelopes.

import { afterEach, describe, expect, it, vi } from "vitest";
import * as api from "../src/api.js";

type Captured = { url: string; init: RequestInit | undefined };

function stubFetch(status: number, body: unknown,
                   captured: Captured[] = []): void {
  vi.stubGlobal("fetch", vi.fn(async (url: string, init?: RequestInit) => {
    captured.push({ url, init });
    return {
      ok: status >= 200 && status < 300,
      status,
      statusText: "status text",
      json: async () => {
        if (body === undefined) throw new Error("no body");
        return body;
      },
    } as Response;
  }));
}

afterEach(() => {
  vi.unstubAllGlobals();
  api.setApiBase("");
});

const sub = { sorts: "s", vocabulary: "v", constraints: "c" };

describe("request shape", () => {
  it("posts a check with the session cookie included", async () => {
    const captured: Captured[] = [];
    stubFetch(200, { ok: true }, captured);
    await api.check(sub);
    expect(captured[0].url).toBe("/api/check");
    expect(captured[0].init?.method).toBe("POST");
    expect(captured[0].init?.credentials).toBe("include");
    expect(JSON.parse(captured[0].init?.body as string)).toEqual(sub);
  });

  it("merges solve options into the body and passes the signal", async () => {
    const captured: Captured[] = [];
    stubFetch(200, { kind: "solutions" }, captured);
    const controller = new AbortController();
    await api.solve(sub, { maxModels: 5, bounds: { t: [1, 2] } },
                    controller.signal);
    const body = JSON.parse(captured[0].init?.body as string);
    expect(body.options).toEqual({ maxModels: 5, bounds: { t: [1, 2] } });
    expect(captured[0].init?.signal).toBe(controller.signal);
  });

  it("sends the diagnosis kind", async () => {
    const captured: Captured[] = [];
    stubFetch(200, { kind: "high-level-mus" }, captured);
    await api.diagnose(sub, "mus");
    expect(JSON.parse(captured[0].init?.body as string).kind).toBe("mus");
  });

  it("prefixes a configured base url", async () => {
    const captured: Captured[] = [];
    stubFetch(200, { puzzles: [] }, captured);
    api.setApiBase("http://localhost:8040/");
    await api.listPuzzles("Beginner");
    expect(captured[0].url).toBe("http://localhost:8040/api/puzzles?level=Beginner");
  });
});

describe("errors", () => {
  it("surfaces the error envelope message with the status", async () => {
    stubFetch(400, { error: "malformed request body" });
    const err = await api.check(sub).catch((e) => e);
    expect(err).toBeInstanceOf(api.ApiError);
    expect(err.status).toBe(400);
    expect(err.message).toBe("malformed request body");
  });

  it("falls back to the status line when the body is not JSON", async () => {
    stubFetch(502, undefined);
    const err = await api.listSaves().catch((e) => e);
    expect(err.message).toBe("502 status text");
  });

  it("resolves to nothing on a 204 delete", async () => {
    stubFetch(204, undefined);
    await expect(api.deleteSave("abc")).resolves.toBeUndefined();
  });
});

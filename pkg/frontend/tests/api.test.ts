import {describe, expect, it} from "vitest";

import {ApiClient, ApiError} from "../src/api.js";

type Handler = (url: string, init?: RequestInit) => {
  status: number;
  body: unknown;
};

function fakeFetch(handler: Handler): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const {status, body} = handler(String(input), init);
    return new Response(
      typeof body === "string" ? body : JSON.stringify(body),
      {status, headers: {"content-type": "application/json"}});
  }) as typeof fetch;
}

describe("ApiClient", () => {
  it("serializes annotation bodies the way the service expects", async () => {
    let captured: unknown = null;
    const client = new ApiClient("", fakeFetch((url, init) => {
      expect(url).toBe("/annotations");
      captured = JSON.parse(String(init?.body));
      return {status: 200, body: {row_id: 3, label_id: 1, value: 1,
                                  refreshed: true, snapshot_pass: 2,
                                  scores: []}};
    }));
    const ack = await client.annotate(3, 1, 1);
    expect(captured).toEqual({row_id: 3, label_id: 1, value: 1});
    expect(ack.refreshed).toBe(true);
  });

  it("builds top-texts queries with limit and exclusion flag", async () => {
    const urls: string[] = [];
    const client = new ApiClient("http://svc", fakeFetch((url) => {
      urls.push(url);
      return {status: 200, body: {label_id: 0, snapshot_pass: 0, items: []}};
    }));
    await client.topTexts(0, 25, true);
    expect(urls[0]).toBe(
      "http://svc/labels/0/top?limit=25&include_annotated=true");
  });

  it("surfaces server error details as ApiError", async () => {
    const client = new ApiClient("", fakeFetch(() => ({
      status: 409, body: {detail: 'label "x" already exists'},
    })));
    await expect(client.createLabel("x")).rejects.toThrowError(ApiError);
    await expect(client.createLabel("x")).rejects.toMatchObject({
      status: 409,
      message: 'label "x" already exists',
    });
  });

  it("returns export text verbatim", async () => {
    const client = new ApiClient("", fakeFetch((url) => {
      expect(url).toBe("/export?labels=1,2");
      return {status: 200, body: "text_id,raw_text\n0,hello\n"};
    }));
    const csv = await client.exportCsv([1, 2]);
    expect(csv.startsWith("text_id,raw_text")).toBe(true);
  });
});

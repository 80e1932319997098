/** Typed client for the /v1 REST API. */

import type { SearchRequest, SearchResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function detailOf(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${resp.status}`;
}

export class SearchClient {
  constructor(private readonly baseUrl: string) {}

  async search(request: SearchRequest): Promise<SearchResponse> {
    const resp = await fetch(`${this.baseUrl}/v1/search`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) throw new ApiError(resp.status, await detailOf(resp));
    return (await resp.json()) as SearchResponse;
  }

  async block(blockId: string): Promise<unknown> {
    const resp = await fetch(`${this.baseUrl}/v1/blocks/${encodeURIComponent(blockId)}`);
    if (!resp.ok) throw new ApiError(resp.status, await detailOf(resp));
    return resp.json();
  }

  async entity(childId: string): Promise<unknown> {
    const resp = await fetch(
      `${this.baseUrl}/v1/entities/${encodeURIComponent(childId)}`,
    );
    if (!resp.ok) throw new ApiError(resp.status, await detailOf(resp));
    return resp.json();
  }
}

// Thin typed client for the riskreg JSON API. Every mutation quotes the
// caller's revision; the service answers 409 when it is stale.

import type {
  ApiErrorBody,
  EntryPatch,
  HeatmapResponse,
  RegisterResponse,
  WhatifAssignment,
  WhatifResponse,
  ControlJson,
} from "./types.js";

let baseUrl = "";

// Tests point this at a locally spawned service; in the browser the UI is
// served by the same origin, so the default empty prefix is correct.
export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

export class ApiFailure extends Error {
  readonly status: number;
  readonly body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.body = body;
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(baseUrl + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let body: ApiErrorBody;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = { code: "Unknown", message: `${response.status} ${response.statusText}` };
    }
    throw new ApiFailure(response.status, body);
  }
  return (await response.json()) as T;
}

export function getRegister(): Promise<RegisterResponse> {
  return request("/api/register");
}

export function getHeatmap(): Promise<HeatmapResponse> {
  return request("/api/heatmap");
}

export function getControls(): Promise<{ controls: ControlJson[] }> {
  return request("/api/controls");
}

export function putEntry(
  entryId: number,
  revision: number,
  patch: EntryPatch,
): Promise<RegisterResponse> {
  return request(`/api/entries/${entryId}`, {
    method: "PUT",
    body: JSON.stringify({ revision, ...patch }),
  });
}

export function deleteEntry(entryId: number, revision: number): Promise<RegisterResponse> {
  return request(`/api/entries/${entryId}?revision=${revision}`, { method: "DELETE" });
}

export function putAppetiteAnchors(
  revision: number,
  anchors: [number, number, number][],
): Promise<RegisterResponse> {
  return request("/api/appetite", {
    method: "PUT",
    body: JSON.stringify({ revision, anchors }),
  });
}

export function putAppetiteValue(revision: number, appetite: number): Promise<RegisterResponse> {
  return request("/api/appetite", {
    method: "PUT",
    body: JSON.stringify({ revision, appetite }),
  });
}

export function postWhatif(assignments: WhatifAssignment[]): Promise<WhatifResponse> {
  return request("/api/whatif", {
    method: "POST",
    body: JSON.stringify({ assignments }),
  });
}

/** Thin client for the formula service. All formula parsing and
 * evaluation happens server-side; this module only moves JSON. */

import type { ParseDiagnostic, SelectPayload, SheetState } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** A 422 from a cell edit: the sheet is unchanged, the diagnostic says why. */
export class EditRejected extends Error {
  constructor(public diagnostic: ParseDiagnostic) {
    super(diagnostic.message);
    this.name = "EditRejected";
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(this.base + path, init);
    if (response.status === 422) {
      const body = (await response.json()) as { parseError: ParseDiagnostic };
      throw new EditRejected(body.parseError);
    }
    if (!response.ok) {
      throw new ApiError(response.status, `${init?.method ?? "GET"} ${path} -> ${response.status}`);
    }
    return response.json();
  }

  async createSession(): Promise<string> {
    const body = (await this.request("/api/session", { method: "POST" })) as {
      sessionId: string;
    };
    return body.sessionId;
  }

  async putCell(sessionId: string, addr: string, raw: string): Promise<void> {
    await this.request(`/api/session/${sessionId}/cell/${addr}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ raw }),
    });
  }

  async select(
    sessionId: string,
    addr: string | null,
    signal?: AbortSignal,
  ): Promise<SelectPayload> {
    return (await this.request(`/api/session/${sessionId}/select`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ addr }),
      signal,
    })) as SelectPayload;
  }

  async sheetState(sessionId: string): Promise<SheetState> {
    return (await this.request(`/api/session/${sessionId}/sheet`)) as SheetState;
  }
}

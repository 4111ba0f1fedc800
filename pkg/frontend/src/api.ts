/**
 * Typed client for the dialog service API. No business logic lives here:
 * the client moves strings; the server computes every response.
 */

export interface TurnResponse {
  session_id: string;
  response: string;
  fsm_state: string;
  slots: Record<string, string | null>;
  justification: string;
}

export interface SessionCreated {
  session_id: string;
  fsm_state: string;
}

export interface HistoryResponse {
  session_id: string;
  history: [string, string][];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, err instanceof Error ? err.message : "network failure");
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* no JSON body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<SessionCreated> {
    return this.request<SessionCreated>("/api/session", { method: "POST" });
  }

  sendTurn(sessionId: string, text: string): Promise<TurnResponse> {
    return this.request<TurnResponse>(`/api/session/${sessionId}/turn`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  history(sessionId: string): Promise<HistoryResponse> {
    return this.request<HistoryResponse>(`/api/session/${sessionId}/history`);
  }

  deleteSession(sessionId: string): Promise<unknown> {
    return this.request(`/api/session/${sessionId}`, { method: "DELETE" });
  }
}

export const SILENCE = "<SILENCE>";

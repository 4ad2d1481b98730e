import {
  HintResponse,
  MoveRejected,
  MoveResponse,
  RuleToggles,
  SessionState,
} from "./types.js";

/** Thin client for the engine's session API. All legality lives server-side. */
export class EngineApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      if (response.status === 409) {
        throw new MoveRejected(payload.error, payload.detail);
      }
      throw new Error(payload.error ?? `http ${response.status}`);
    }
    return payload as T;
  }

  createSession(fen?: string, config?: RuleToggles): Promise<SessionState> {
    const body: Record<string, unknown> = {};
    if (fen) body.fen = fen;
    if (config) body.config = config;
    return this.request<SessionState>("POST", "/sessions", body);
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.request<SessionState>("GET", `/sessions/${sessionId}`);
  }

  move(sessionId: string, from: string, to: string): Promise<MoveResponse> {
    return this.request<MoveResponse>("POST", `/sessions/${sessionId}/move`, {
      from,
      to,
    });
  }

  hint(sessionId: string, plies = 4): Promise<HintResponse> {
    return this.request<HintResponse>("GET", `/sessions/${sessionId}/hint?plies=${plies}`);
  }
}

/**
 * Session state for the chat view, DOM-free so it tests headlessly.
 *
 * The controller renders server output verbatim: agent bubbles are the
 * response strings byte-for-byte, the slot table mirrors the latest turn
 * response, and the justification panel carries the server's rendered
 * proof text unparsed. One request may be in flight per session; a send
 * during a pending turn is refused client-side, mirroring the server's
 * 409 contract.
 */

import { ApiClient, ApiError, SILENCE, TurnResponse } from "./api.js";

export interface TranscriptEntry {
  speaker: "user" | "agent";
  text: string;
  timestamp: number;
  justification?: string;
}

export interface SessionView {
  sessionId: string | null;
  transcript: TranscriptEntry[];
  slots: Record<string, string | null>;
  fsmState: string;
  lastJustification: string;
  busy: boolean;
  error: string | null;
}

const EMPTY_SLOTS: Record<string, string | null> = {
  cuisine: null,
  location: null,
  party_size: null,
  price: null,
};

export type Listener = (view: SessionView) => void;

export class SessionController {
  view: SessionView;

  constructor(
    private client: ApiClient,
    private onChange: Listener = () => {},
    private now: () => number = () => Date.now(),
  ) {
    this.view = this.emptyView();
  }

  private emptyView(): SessionView {
    return {
      sessionId: null,
      transcript: [],
      slots: { ...EMPTY_SLOTS },
      fsmState: "Greet",
      lastJustification: "",
      busy: false,
      error: null,
    };
  }

  private emit(): void {
    this.onChange(this.view);
  }

  async start(): Promise<boolean> {
    this.view = this.emptyView();
    this.view.busy = true;
    this.emit();
    try {
      const created = await this.client.createSession();
      this.view.sessionId = created.session_id;
      this.view.fsmState = created.fsm_state;
      this.view.error = null;
      return true;
    } catch (err) {
      this.view.error =
        err instanceof ApiError && err.status === 0
          ? `cannot reach the service (${err.detail})`
          : String(err);
      return false;
    } finally {
      this.view.busy = false;
      this.emit();
    }
  }

  canSend(text: string): boolean {
    return (
      this.view.sessionId !== null && !this.view.busy && text.trim().length > 0
    );
  }

  async send(text: string): Promise<boolean> {
    if (!this.canSend(text)) {
      return false;
    }
    const sessionId = this.view.sessionId as string;
    const userEntry: TranscriptEntry = {
      speaker: "user",
      text,
      timestamp: this.now(),
    };
    this.view.transcript.push(userEntry);
    this.view.busy = true;
    this.view.error = null;
    this.emit();
    try {
      const turn: TurnResponse = await this.client.sendTurn(sessionId, text);
      this.view.transcript.push({
        speaker: "agent",
        text: turn.response,
        timestamp: this.now(),
        justification: turn.justification,
      });
      this.view.slots = { ...turn.slots };
      this.view.fsmState = turn.fsm_state;
      this.view.lastJustification = turn.justification;
      return true;
    } catch (err) {
      // Roll the optimistic user bubble back so the transcript still
      // reconciles with the server history.
      this.view.transcript.pop();
      this.view.error = err instanceof ApiError ? err.message : String(err);
      return false;
    } finally {
      this.view.busy = false;
      this.emit();
    }
  }

  sendSilence(): Promise<boolean> {
    return this.send(SILENCE);
  }

  /** Server-side transcript; equality with the local one is the invariant. */
  async serverHistory(): Promise<[string, string][]> {
    if (this.view.sessionId === null) {
      return [];
    }
    const res = await this.client.history(this.view.sessionId);
    return res.history;
  }

  async reconciles(): Promise<boolean> {
    const server = await this.serverHistory();
    const local: [string, string][] = this.view.transcript.map((entry) => [
      entry.speaker === "agent" ? "bot" : "user",
      entry.text,
    ]);
    return (
      server.length === local.length &&
      server.every(([s, t], i) => local[i][0] === s && local[i][1] === t)
    );
  }
}

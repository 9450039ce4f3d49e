// Session state: an append-only transcript plus the retrieval settings.
// Everything needed to replay a session is the ordered (request, response)
// pair list, so the state layer is a pure fold over those pairs.

import {
  ALL_DOMAINS,
  AssistantTurn,
  ChatRequest,
  ChatResponse,
  ChatTurn,
  DEFAULT_SETTINGS,
  DomainLabel,
  RetrievalSettings,
} from './types.js';

export class SessionState {
  private turns: ChatTurn[] = [];
  private settings: RetrievalSettings = { ...DEFAULT_SETTINGS };
  private sessionId: string | undefined;
  private busy = false;

  get transcript(): readonly ChatTurn[] {
    return this.turns;
  }

  get retrievalSettings(): RetrievalSettings {
    return {
      k: this.settings.k,
      domains: this.settings.domains ? [...this.settings.domains] : null,
    };
  }

  get inFlight(): boolean {
    return this.busy;
  }

  get session(): string | undefined {
    return this.sessionId;
  }

  /** True when a send is allowed: non-empty input, nothing in flight. */
  canSend(text: string): boolean {
    return text.trim().length > 0 && !this.busy;
  }

  setK(k: number): void {
    if (!Number.isInteger(k) || k < 1 || k > 20) {
      throw new Error(`k must be an integer in [1, 20], got ${k}`);
    }
    this.settings.k = k;
  }

  setDomains(domains: DomainLabel[] | null): void {
    if (domains !== null) {
      for (const d of domains) {
        if (!ALL_DOMAINS.includes(d)) {
          throw new Error(`unknown domain: ${d}`);
        }
      }
      if (domains.length === 0 || domains.length === ALL_DOMAINS.length) {
        // selecting nothing (or everything) means "no filter"
        this.settings.domains = null;
        return;
      }
    }
    this.settings.domains = domains ? [...domains] : null;
  }

  resetSettings(): void {
    this.settings = { ...DEFAULT_SETTINGS };
  }

  /** Build the wire request for a message under the current settings. */
  buildRequest(text: string): ChatRequest {
    const request: ChatRequest = { message: text.trim(), k: this.settings.k };
    if (this.sessionId) {
      request.session_id = this.sessionId;
    }
    if (this.settings.domains) {
      request.domains = [...this.settings.domains];
    }
    return request;
  }

  /** Append the user turn the moment the request goes out. */
  beginSend(request: ChatRequest): void {
    if (this.busy) {
      throw new Error('a request is already in flight for this session');
    }
    this.busy = true;
    this.turns.push({
      role: 'user',
      text: request.message,
      settings: {
        k: request.k,
        domains: request.domains ? ([...request.domains] as DomainLabel[]) : null,
      },
    });
  }

  /** Append the assistant turn built strictly from the API response; the UI
   * never fabricates sources. */
  completeSend(response: ChatResponse): AssistantTurn {
    const turn: AssistantTurn = {
      role: 'assistant',
      text: response.answer,
      decision: response.decision,
      sources: response.sources.map((s) => ({ ...s })),
      latency: { ...response.latency_ms },
      cacheHit: response.cache_hit,
    };
    this.sessionId = response.session_id;
    this.turns.push(turn);
    this.busy = false;
    return turn;
  }

  /** Record a failure; network errors are retryable inline, validation
   * errors only explain themselves (the input stays in the box). */
  failSend(request: ChatRequest, message: string, retryable: boolean): void {
    this.turns.push({ role: 'error', text: message, retryable, request });
    this.busy = false;
  }

  /** Reconstruct a session from its ordered (request, response) pairs. */
  static replay(pairs: Array<[ChatRequest, ChatResponse]>): SessionState {
    const state = new SessionState();
    for (const [request, response] of pairs) {
      state.beginSend(request);
      state.completeSend(response);
    }
    return state;
  }
}

import { ApiErrorPayload, ChatRequest, ChatResponse } from './types.js';

export class ApiValidationError extends Error {
  constructor(
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiNetworkError extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** POST /chat. 4xx responses surface as ApiValidationError (the input is
   * recoverable); connection failures as ApiNetworkError (retryable). */
  async chat(request: ChatRequest): Promise<ChatResponse> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/chat`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(request),
      });
    } catch (err) {
      throw new ApiNetworkError(`service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let code = `http_${response.status}`;
      let message = response.statusText;
      try {
        const payload = (await response.json()) as ApiErrorPayload;
        code = payload.error.code;
        message = payload.error.message;
      } catch {
        // non-JSON error body; keep the status fallback
      }
      throw new ApiValidationError(code, message);
    }
    return (await response.json()) as ChatResponse;
  }

  async health(): Promise<{ status: string; index_chunks: number }> {
    const response = await this.fetchImpl(`${this.baseUrl}/healthz`);
    if (!response.ok) {
      throw new ApiNetworkError(`healthz returned ${response.status}`);
    }
    return (await response.json()) as { status: string; index_chunks: number };
  }
}

// Shapes of the lexrag service API and of the client-side session state.

export const ALL_DOMAINS = [
  'CriminalLaw',
  'CivilLaw',
  'ContractLaw',
  'ConstitutionalLaw',
  'General',
] as const;

export type DomainLabel = (typeof ALL_DOMAINS)[number];

export type Decision = 'answered' | 'clarify' | 'refuse';

export interface ChatRequest {
  session_id?: string;
  message: string;
  k: number;
  domains?: string[];
}

export interface SourcePayload {
  chunk_id: string;
  doc_id: string;
  score: number;
  text: string;
  domain?: string | null;
}

export interface LatencyPayload {
  embed: number;
  retrieve: number;
  generate: number;
}

export interface ChatResponse {
  session_id: string;
  answer: string;
  decision: Decision;
  generator: string | null;
  sources: SourcePayload[];
  latency_ms: LatencyPayload;
  cache_hit: boolean;
}

export interface ApiErrorPayload {
  error: { code: string; message: string };
}

export interface RetrievalSettings {
  k: number;
  // null means "all domains" (no filter sent to the service)
  domains: DomainLabel[] | null;
}

export const DEFAULT_SETTINGS: RetrievalSettings = { k: 5, domains: null };

export interface UserTurn {
  role: 'user';
  text: string;
  settings: RetrievalSettings; // echoed so each send is auditable
}

export interface AssistantTurn {
  role: 'assistant';
  text: string;
  decision: Decision;
  sources: SourcePayload[];
  latency: LatencyPayload;
  cacheHit: boolean;
}

export interface ErrorTurn {
  role: 'error';
  text: string;
  retryable: boolean; // network failures can be retried inline
  request: ChatRequest; // kept so the retry affordance can resend
}

export type ChatTurn = UserTurn | AssistantTurn | ErrorTurn;

import assert from 'node:assert/strict';
import { test } from 'node:test';

import { SessionState } from '../src/state.js';
import { ChatRequest, ChatResponse } from '../src/types.js';

function fakeResponse(overrides: Partial<ChatResponse> = {}): ChatResponse {
  return {
    session_id: 'sess-1',
    answer: 'Based on the retrieved provisions: ...',
    decision: 'answered',
    generator: 'extractive_fallback',
    sources: [
      {
        chunk_id: 'ipc_420#0000',
        doc_id: 'ipc_420',
        score: 0.52,
        text: 'IPC Section 420 prescribes...',
        domain: 'CriminalLaw',
      },
    ],
    latency_ms: { embed: 1.2, retrieve: 0.4, generate: 0.1 },
    cache_hit: false,
    ...overrides,
  };
}

test('send disabled for empty input and while a request is in flight', () => {
  const state = new SessionState();
  assert.equal(state.canSend('   '), false);
  assert.equal(state.canSend('real question'), true);
  state.beginSend(state.buildRequest('real question'));
  assert.equal(state.canSend('another'), false);
  state.completeSend(fakeResponse());
  assert.equal(state.canSend('another'), true);
});

test('transcript is append-only: user turn first, assistant on response', () => {
  const state = new SessionState();
  state.beginSend(state.buildRequest('What is theft?'));
  assert.deepEqual(
    state.transcript.map((t) => t.role),
    ['user'],
  );
  state.completeSend(fakeResponse());
  assert.deepEqual(
    state.transcript.map((t) => t.role),
    ['user', 'assistant'],
  );
});

test('assistant sources come verbatim from the response, never invented', () => {
  const state = new SessionState();
  state.beginSend(state.buildRequest('q'));
  const response = fakeResponse();
  const turn = state.completeSend(response);
  assert.deepEqual(
    turn.sources.map((s) => s.chunk_id),
    response.sources.map((s) => s.chunk_id),
  );
});

test('retrieval settings persist across sends and are echoed per user turn', () => {
  const state = new SessionState();
  state.setK(3);
  state.setDomains(['CriminalLaw']);
  state.beginSend(state.buildRequest('first'));
  state.completeSend(fakeResponse());
  state.beginSend(state.buildRequest('second'));
  state.completeSend(fakeResponse());
  const users = state.transcript.filter((t) => t.role === 'user');
  for (const turn of users) {
    assert.equal(turn.settings.k, 3);
    assert.deepEqual(turn.settings.domains, ['CriminalLaw']);
  }
});

test('reset restores k=5 and all domains', () => {
  const state = new SessionState();
  state.setK(12);
  state.setDomains(['CivilLaw', 'ContractLaw']);
  state.resetSettings();
  assert.deepEqual(state.retrievalSettings, { k: 5, domains: null });
});

test('k slider bounds are 1..20', () => {
  const state = new SessionState();
  assert.throws(() => state.setK(0));
  assert.throws(() => state.setK(21));
  state.setK(20);
  assert.equal(state.retrievalSettings.k, 20);
});

test('selecting every domain collapses to no filter', () => {
  const state = new SessionState();
  state.setDomains([
    'CriminalLaw',
    'CivilLaw',
    'ContractLaw',
    'ConstitutionalLaw',
    'General',
  ]);
  assert.equal(state.retrievalSettings.domains, null);
  assert.equal(state.buildRequest('q').domains, undefined);
});

test('session id from the first response is reused on later requests', () => {
  const state = new SessionState();
  state.beginSend(state.buildRequest('first'));
  state.completeSend(fakeResponse({ session_id: 'abc' }));
  assert.equal(state.buildRequest('second').session_id, 'abc');
});

test('network failure appends a retryable error turn and frees the session', () => {
  const state = new SessionState();
  const request = state.buildRequest('q');
  state.beginSend(request);
  state.failSend(request, 'The service is unreachable.', true);
  const last = state.transcript[state.transcript.length - 1];
  assert.equal(last.role, 'error');
  assert.equal(last.role === 'error' && last.retryable, true);
  assert.equal(state.inFlight, false);
});

test('replay of the ordered (request, response) pairs rebuilds the transcript', () => {
  const state = new SessionState();
  state.setK(2);
  const pairs: Array<[ChatRequest, ChatResponse]> = [];
  for (const message of ['first question', 'second question']) {
    const request = state.buildRequest(message);
    pairs.push([request, fakeResponse()]);
    state.beginSend(request);
    state.completeSend(fakeResponse());
  }
  const replayed = SessionState.replay(pairs);
  assert.deepEqual(replayed.transcript, state.transcript);
});

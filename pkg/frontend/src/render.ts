// Pure HTML-string renderers so the transcript can be unit-tested without a
// browser. main.ts injects these strings into the page.

import { AssistantTurn, ChatTurn, ErrorTurn, SourcePayload, UserTurn } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

function renderSourceCard(source: SourcePayload, position: number): string {
  const domain = source.domain ? `<span class="domain">${escapeHtml(source.domain)}</span>` : '';
  return [
    `<details class="source-card" data-chunk-id="${escapeHtml(source.chunk_id)}">`,
    `<summary>[${position}] ${escapeHtml(source.chunk_id)}`,
    ` <span class="score">${source.score.toFixed(3)}</span>${domain}</summary>`,
    `<p class="source-text">${escapeHtml(source.text)}</p>`,
    `<p class="source-doc">from ${escapeHtml(source.doc_id)}</p>`,
    `</details>`,
  ].join('');
}

function renderLatencyChips(turn: AssistantTurn): string {
  const chips = [
    `embed ${turn.latency.embed.toFixed(1)}ms`,
    `retrieve ${turn.latency.retrieve.toFixed(1)}ms`,
    `generate ${turn.latency.generate.toFixed(1)}ms`,
  ];
  if (turn.cacheHit) {
    chips.push('cached');
  }
  return chips.map((c) => `<span class="chip">${c}</span>`).join('');
}

export function renderUserTurn(turn: UserTurn): string {
  const domains = turn.settings.domains ? turn.settings.domains.join(', ') : 'all domains';
  return [
    `<div class="turn user">`,
    `<p class="text">${escapeHtml(turn.text)}</p>`,
    `<p class="meta">k=${turn.settings.k} · ${escapeHtml(domains)}</p>`,
    `</div>`,
  ].join('');
}

export function renderAssistantTurn(turn: AssistantTurn): string {
  const badge = `<span class="badge badge-${turn.decision}">${turn.decision}</span>`;
  const cards = turn.sources.map((s, i) => renderSourceCard(s, i + 1)).join('');
  const clarifyClass = turn.decision === 'answered' ? '' : ' needs-clarification';
  return [
    `<div class="turn assistant${clarifyClass}">`,
    badge,
    `<p class="text">${escapeHtml(turn.text)}</p>`,
    turn.sources.length > 0 ? `<div class="sources">${cards}</div>` : '',
    `<div class="latency">${renderLatencyChips(turn)}</div>`,
    `</div>`,
  ].join('');
}

export function renderErrorTurn(turn: ErrorTurn, index: number): string {
  const retry = turn.retryable
    ? `<button class="retry" data-turn-index="${index}">retry</button>`
    : '';
  return [
    `<div class="turn error">`,
    `<p class="text">${escapeHtml(turn.text)}</p>`,
    retry,
    `</div>`,
  ].join('');
}

export function renderTranscript(turns: readonly ChatTurn[]): string {
  return turns
    .map((turn, i) => {
      if (turn.role === 'user') return renderUserTurn(turn);
      if (turn.role === 'assistant') return renderAssistantTurn(turn);
      return renderErrorTurn(turn, i);
    })
    .join('\n');
}

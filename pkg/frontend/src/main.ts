// Browser entry point: wires the DOM to the session state and API client.

import { ApiClient, ApiNetworkError, ApiValidationError } from './api.js';
import { renderTranscript } from './render.js';
import { SessionState } from './state.js';
import { ALL_DOMAINS, ChatRequest, DomainLabel } from './types.js';

const baseUrl =
  new URLSearchParams(window.location.search).get('service') ?? window.location.origin;

const api = new ApiClient(baseUrl);
const state = new SessionState();

const transcriptEl = document.getElementById('transcript') as HTMLElement;
const inputEl = document.getElementById('message') as HTMLTextAreaElement;
const sendEl = document.getElementById('send') as HTMLButtonElement;
const kSliderEl = document.getElementById('k-slider') as HTMLInputElement;
const kValueEl = document.getElementById('k-value') as HTMLElement;
const domainsEl = document.getElementById('domains') as HTMLElement;
const resetEl = document.getElementById('reset-settings') as HTMLButtonElement;
const statusEl = document.getElementById('service-status') as HTMLElement;

function redraw(): void {
  transcriptEl.innerHTML = renderTranscript(state.transcript);
  transcriptEl.scrollTop = transcriptEl.scrollHeight;
  sendEl.disabled = !state.canSend(inputEl.value);
  for (const button of transcriptEl.querySelectorAll<HTMLButtonElement>('.retry')) {
    button.addEventListener('click', () => {
      const index = Number(button.dataset.turnIndex);
      const turn = state.transcript[index];
      if (turn && turn.role === 'error') {
        void dispatch(turn.request);
      }
    });
  }
}

async function dispatch(request: ChatRequest): Promise<void> {
  state.beginSend(request);
  redraw();
  try {
    state.completeSend(await api.chat(request));
  } catch (err) {
    if (err instanceof ApiValidationError) {
      state.failSend(request, `${err.code}: ${err.message}`, false);
    } else if (err instanceof ApiNetworkError) {
      state.failSend(request, 'The service is unreachable.', true);
    } else {
      state.failSend(request, String(err), false);
    }
  }
  redraw();
}

function send(): void {
  const text = inputEl.value;
  if (!state.canSend(text)) {
    return;
  }
  const request = state.buildRequest(text);
  inputEl.value = '';
  void dispatch(request);
}

function selectedDomains(): DomainLabel[] | null {
  const boxes = domainsEl.querySelectorAll<HTMLInputElement>('input[type=checkbox]');
  const chosen: DomainLabel[] = [];
  for (const box of boxes) {
    if (box.checked) {
      chosen.push(box.value as DomainLabel);
    }
  }
  return chosen.length === 0 || chosen.length === boxes.length ? null : chosen;
}

function buildDomainCheckboxes(): void {
  domainsEl.innerHTML = ALL_DOMAINS.map(
    (d) =>
      `<label><input type="checkbox" value="${d}" checked> ${d}</label>`,
  ).join('');
  for (const box of domainsEl.querySelectorAll<HTMLInputElement>('input')) {
    box.addEventListener('change', () => state.setDomains(selectedDomains()));
  }
}

sendEl.addEventListener('click', send);
inputEl.addEventListener('keydown', (event) => {
  if (event.key === 'Enter' && !event.shiftKey) {
    event.preventDefault();
    send();
  }
});
inputEl.addEventListener('input', () => {
  sendEl.disabled = !state.canSend(inputEl.value);
});
kSliderEl.addEventListener('input', () => {
  state.setK(Number(kSliderEl.value));
  kValueEl.textContent = kSliderEl.value;
});
resetEl.addEventListener('click', () => {
  state.resetSettings();
  kSliderEl.value = String(state.retrievalSettings.k);
  kValueEl.textContent = kSliderEl.value;
  buildDomainCheckboxes();
});

buildDomainCheckboxes();
sendEl.disabled = true;

void api
  .health()
  .then((h) => {
    statusEl.textContent = `connected · ${h.index_chunks} chunks indexed`;
  })
  .catch(() => {
    statusEl.textContent = 'service unreachable';
  });

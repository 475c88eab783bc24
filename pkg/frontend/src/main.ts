// Operator console wiring: one view per tab, at most one in-flight request
// per view with latest-wins cancellation.

import { ApiClient } from './api';
import { initialState, isStale, validateState, type ConsoleState } from './state';
import { buildOfferViewModel, renderOfferError, renderOfferView } from './views/offer';
import {
  buildRedispatchViewModel,
  renderRedispatchPlaceholder,
  renderRedispatchView,
} from './views/redispatch';
import { buildHeatmapViewModel, renderHeatmapView } from './views/heatmap';
import {
  MAX_UPLOAD_BYTES,
  buildUploadCard,
  renderOversizeRejection,
  renderUploadCard,
  renderUploadError,
} from './views/upload';

const api = new ApiClient('');
const state: ConsoleState = initialState();
const inflight = new Map<string, AbortController>();

function latestWins(view: string): AbortSignal {
  inflight.get(view)?.abort();
  const controller = new AbortController();
  inflight.set(view, controller);
  return controller.signal;
}

function mount(id: string, html: string): void {
  const el = document.getElementById(id);
  if (el) el.innerHTML = html;
}

async function refreshOffer(): Promise<void> {
  const problems = validateState(state);
  if (problems.length) {
    mount('offer-root', renderOfferError(
      problems.map((p) => p.message).join('; '),
      'fix the highlighted inputs and retry',
    ));
    return;
  }
  const gfs = (document.getElementById('gfs-source') as HTMLInputElement)?.value;
  try {
    const payload = await api.postOffer(
      {
        operation: state.operation === 'pre_offer' ? 'pre_offer' : 'offer',
        date: state.dateIso || undefined,
        availability: state.availabilityMw,
        plant_config_id: state.activePlant,
        gfs_source: gfs ?? '',
      },
      latestWins('offer'),
    );
    state.lastOffer = payload;
    mount('offer-root', renderOfferView(buildOfferViewModel(payload)));
  } catch (error) {
    if ((error as Error).name === 'AbortError') return;
    const detail = error instanceof Error ? error.message : String(error);
    const hint = detail.includes('404')
      ? 'no GFS forecast loaded for that day'
      : 'check the operation inputs';
    mount('offer-root', renderOfferError(detail, hint));
  }
}

async function refreshRedispatch(): Promise<void> {
  if (!state.dateIso) {
    mount('redispatch-root', renderRedispatchPlaceholder());
    return;
  }
  try {
    const payload = await api.postRedispatch(
      { date: state.dateIso, plant_config_id: state.activePlant },
      latestWins('redispatch'),
    );
    state.lastRedispatch = payload;
    state.lastRedispatchAt = Date.now();
    mount(
      'redispatch-root',
      renderRedispatchView(
        buildRedispatchViewModel(payload, isStale(state, Date.now())),
      ),
    );
  } catch (error) {
    if ((error as Error).name === 'AbortError') return;
    mount('redispatch-root', renderRedispatchPlaceholder());
  }
}

async function refreshHeatmap(option: number): Promise<void> {
  const read = (id: string) =>
    (document.getElementById(id) as HTMLInputElement)?.value ?? '';
  try {
    const payload = await api.getHeatmap(
      option,
      {
        models: read('models-source'),
        horizons: read('horizons-source'),
        irradiance: read('irradiance-source'),
      },
      latestWins('heatmap'),
    );
    mount('heatmap-root', renderHeatmapView(buildHeatmapViewModel(payload)));
  } catch (error) {
    if ((error as Error).name === 'AbortError') return;
    const detail = error instanceof Error ? error.message : String(error);
    mount('heatmap-root', `<p class="error-detail">${detail}</p>`);
  }
}

async function handleUpload(file: File): Promise<void> {
  if (file.size > MAX_UPLOAD_BYTES) {
    mount('upload-root', renderOversizeRejection(file.size));
    return;
  }
  try {
    const summary = await api.upload(file, file.name, latestWins('upload'));
    mount('upload-root', renderUploadCard(buildUploadCard(summary)));
  } catch (error) {
    if ((error as Error).name === 'AbortError') return;
    mount('upload-root', renderUploadError(error));
  }
}

function bind(): void {
  document.getElementById('availability')?.addEventListener('change', (ev) => {
    state.availabilityMw = Number((ev.target as HTMLInputElement).value);
    void refreshOffer();
  });
  document.getElementById('date')?.addEventListener('change', (ev) => {
    state.dateIso = (ev.target as HTMLInputElement).value;
    void refreshOffer();
  });
  document.getElementById('operation')?.addEventListener('change', (ev) => {
    state.operation = (ev.target as HTMLSelectElement)
      .value as ConsoleState['operation'];
    void refreshOffer();
  });
  document.getElementById('run-offer')?.addEventListener('click', () => {
    void refreshOffer();
  });
  document.getElementById('run-redispatch')?.addEventListener('click', () => {
    void refreshRedispatch();
  });
  document.getElementById('metric-option')?.addEventListener('change', (ev) => {
    void refreshHeatmap(Number((ev.target as HTMLSelectElement).value));
  });
  document.getElementById('file')?.addEventListener('change', (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) void handleUpload(file);
  });
  void api.plants().then((list) => {
    const select = document.getElementById('plant') as HTMLSelectElement | null;
    if (!select) return;
    select.innerHTML = list.plants
      .map((p) => `<option value="${p}">${p}</option>`)
      .join('');
    select.addEventListener('change', () => {
      state.activePlant = select.value;
    });
  });
}

if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', bind);
}

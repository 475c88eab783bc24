import type {
  HeatmapPayload,
  OfferPayload,
  OfferRequest,
  PlantList,
  RedispatchPayload,
  RedispatchRequest,
  UploadSummary,
} from './types';

export class ApiRequestError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`API ${status}: ${detail}`);
  }
}

async function parseError(res: Response): Promise<ApiRequestError> {
  let detail = res.statusText;
  try {
    const body = (await res.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiRequestError(res.status, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, init);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  postOffer(body: OfferRequest, signal?: AbortSignal): Promise<OfferPayload> {
    return this.request<OfferPayload>('/operations/offer', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
  }

  postRedispatch(
    body: RedispatchRequest,
    signal?: AbortSignal,
  ): Promise<RedispatchPayload> {
    return this.request<RedispatchPayload>('/operations/redispatch', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
  }

  getHeatmap(
    option: number,
    sources: { models: string; horizons: string; irradiance: string },
    signal?: AbortSignal,
  ): Promise<HeatmapPayload> {
    const query = new URLSearchParams({
      option: String(option),
      path_models: sources.models,
      path_horizons: sources.horizons,
      path_irradiance: sources.irradiance,
    });
    return this.request<HeatmapPayload>(`/metrics/heatmap?${query}`, { signal });
  }

  upload(file: File | Blob, name: string, signal?: AbortSignal): Promise<UploadSummary> {
    const form = new FormData();
    form.append('file', file, name);
    return this.request<UploadSummary>('/data/upload', {
      method: 'POST',
      body: form,
      signal,
    });
  }

  plants(signal?: AbortSignal): Promise<PlantList> {
    return this.request<PlantList>('/plants', { signal });
  }
}

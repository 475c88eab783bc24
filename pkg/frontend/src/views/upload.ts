import { EXPECTED_UPLOAD_COLUMNS, type UploadSummary } from '../types';
import { ApiRequestError } from '../api';

/** Client-side size gate; oversize files never reach the service. */
export const MAX_UPLOAD_BYTES = 25 * 1024 * 1024;

export interface UploadCardVm {
  seriesId: string;
  rows: number;
  resolutionMinutes: number;
  missing: { column: string; percent: number }[];
  clips: { column: string; count: number }[];
}

export function buildUploadCard(summary: UploadSummary): UploadCardVm {
  return {
    seriesId: summary.series_id,
    rows: summary.rows,
    resolutionMinutes: summary.resolution_minutes,
    missing: Object.entries(summary.missing_percent).map(
      ([column, percent]) => ({ column, percent }),
    ),
    clips: Object.entries(summary.clip_counts).map(([column, count]) => ({
      column,
      count,
    })),
  };
}

export function renderUploadCard(vm: UploadCardVm): string {
  const missing = vm.missing
    .map(
      (m) =>
        `<tr><td>${m.column}</td><td class="pct">${m.percent.toFixed(2)}%</td></tr>`,
    )
    .join('');
  const clips = vm.clips
    .map((c) => `<tr><td>${c.column}</td><td>${c.count}</td></tr>`)
    .join('');
  return `
<section class="upload-card" data-series-id="${vm.seriesId}">
  <h2>Series ${vm.seriesId}</h2>
  <p>${vm.rows} rows at ${vm.resolutionMinutes}-minute resolution</p>
  <h3>Missing data</h3>
  <table class="missing">${missing}</table>
  <h3>Clipped cells</h3>
  <table class="clips">${clips}</table>
</section>`;
}

export function renderUploadError(error: unknown): string {
  if (error instanceof ApiRequestError && error.status === 400) {
    const expected = EXPECTED_UPLOAD_COLUMNS.map(
      (c) => `<li>${c}</li>`,
    ).join('');
    return `
<section class="upload-card error">
  <p class="error-detail">${error.detail}</p>
  <p>The measurement file must carry exactly these columns:</p>
  <ul class="expected-columns">${expected}</ul>
</section>`;
  }
  const message = error instanceof Error ? error.message : String(error);
  return `<section class="upload-card error"><p class="error-detail">${message}</p></section>`;
}

export function renderOversizeRejection(sizeBytes: number): string {
  return (
    `<section class="upload-card error"><p class="error-detail">` +
    `File is ${(sizeBytes / 1048576).toFixed(1)} MiB - the console only ` +
    `uploads files up to ${(MAX_UPLOAD_BYTES / 1048576).toFixed(0)} MiB` +
    `</p></section>`
  );
}

// End-to-end console behavior against a mocked service API.

import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiRequestError } from '../src/api';
import { buildOfferViewModel, renderOfferView } from '../src/views/offer';
import {
  buildRedispatchViewModel,
  renderRedispatchView,
} from '../src/views/redispatch';
import { renderUploadError } from '../src/views/upload';
import { EXPECTED_UPLOAD_COLUMNS } from '../src/types';
import type { OfferPayload, RedispatchPayload } from '../src/types';

// the published example day: 58/69/69 across midday periods 11..13
const TABLE5_VALUES = [
  0, 0, 0, 0, 0, 0, 2, 14, 33, 47, 58, 69, 69, 64, 52, 38, 21, 8,
  0, 0, 0, 0, 0, 0,
];

const OFFER_PAYLOAD: OfferPayload = {
  schema_version: '1',
  operation: 'offer',
  date: '2024-05-09',
  availability_mw: 69,
  period_values_mw: TABLE5_VALUES,
  csv_locator: 'artifacts/offer_2024-05-09.csv',
};

function table6Redispatch(): RedispatchPayload {
  // GFS row 68/69/69 vs Reuniwatt 69/69/69 within the 5% band
  const committed = [...TABLE5_VALUES];
  committed[10] = 68;
  const intraday = [...TABLE5_VALUES];
  intraday[10] = 69;
  return {
    schema_version: '1',
    date: '2024-05-09',
    margin: 0.05,
    redispatch_required: false,
    periods: committed.map((c, i) => ({
      period: i + 1,
      committed_mw: c,
      intraday_mw: intraday[i],
      band_low: c === 0 ? -0.5 : c * 0.95,
      band_high: c === 0 ? 0.5 : c * 1.05,
      outside_band: false,
    })),
    csv_locator: 'artifacts/redispatch_2024-05-09.csv',
  };
}

function breachRedispatch(): RedispatchPayload {
  const payload = table6Redispatch();
  const p12 = payload.periods[11];
  p12.intraday_mw = 60;
  p12.outside_band = true;
  return { ...payload, redispatch_required: true };
}

function stubFetch(status: number, body: unknown): void {
  vi.stubGlobal(
    'fetch',
    vi.fn(async () => new Response(JSON.stringify(body), { status })),
  );
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('offer builder view', () => {
  it('renders 24 periods with the example values at 11..13', async () => {
    stubFetch(200, OFFER_PAYLOAD);
    const api = new ApiClient('http://mock');
    const payload = await api.postOffer({
      operation: 'offer',
      date: '2024-05-09',
      availability: 69,
      gfs_source: 'gfs.csv',
    });
    const html = renderOfferView(buildOfferViewModel(payload));
    const cells = html.match(/class="offer-cell"/g) ?? [];
    expect(cells).toHaveLength(24);
    expect(html).toContain('data-period="11">58<');
    expect(html).toContain('data-period="12">69<');
    expect(html).toContain('data-period="13">69<');
  });

  it('marks bars sitting at the availability ceiling as clipped', () => {
    const vm = buildOfferViewModel(OFFER_PAYLOAD);
    const clipped = vm.bars.filter((b) => b.clipped).map((b) => b.period);
    expect(clipped).toEqual([12, 13]);
    const html = renderOfferView(vm);
    expect(html).toContain('bar clipped');
  });

  it('re-renders against a lowered availability payload', async () => {
    const lowered: OfferPayload = {
      ...OFFER_PAYLOAD,
      availability_mw: 60,
      period_values_mw: TABLE5_VALUES.map((v) => Math.min(v, 60)),
    };
    stubFetch(200, lowered);
    const api = new ApiClient('http://mock');
    const payload = await api.postOffer({
      operation: 'offer',
      availability: 60,
      gfs_source: 'gfs.csv',
    });
    const vm = buildOfferViewModel(payload);
    expect(Math.max(...vm.bars.map((b) => b.valueMw))).toBe(60);
    expect(vm.bars[11].clipped).toBe(true);
  });

  it('surfaces a 404 as an inline notice', async () => {
    stubFetch(404, { detail: 'GHI source gfs.csv not found' });
    const api = new ApiClient('http://mock');
    await expect(
      api.postOffer({ operation: 'offer', availability: 69, gfs_source: 'gfs.csv' }),
    ).rejects.toThrowError(ApiRequestError);
  });
});

describe('redispatch monitor view', () => {
  it('shows no banner for the in-band example payload', () => {
    const html = renderRedispatchView(
      buildRedispatchViewModel(table6Redispatch()),
    );
    expect(html).not.toContain('redispatch-required');
    expect(html).not.toContain('class="badge breach"');
  });

  it('shows the banner and the breached period badge', async () => {
    stubFetch(200, breachRedispatch());
    const api = new ApiClient('http://mock');
    const payload = await api.postRedispatch({ date: '2024-05-09' });
    const vm = buildRedispatchViewModel(payload);
    expect(vm.showBanner).toBe(true);
    expect(vm.breachedPeriods).toEqual([12]);
    const html = renderRedispatchView(vm);
    expect(html).toContain('Redispatch required');
    expect(html).toContain('data-period="12"');
  });

  it('banner state is a pure function of the payload', () => {
    const inBand = buildRedispatchViewModel(table6Redispatch());
    const breach = buildRedispatchViewModel(breachRedispatch());
    expect(inBand.showBanner).toBe(false);
    expect(breach.showBanner).toBe(true);
    // same payload, same verdict
    expect(buildRedispatchViewModel(breachRedispatch()).showBanner).toBe(true);
  });

  it('flags stale decisions', () => {
    const html = renderRedispatchView(
      buildRedispatchViewModel(table6Redispatch(), true),
    );
    expect(html).toContain('stale-data');
  });

  it('band edges come from the payload verbatim', () => {
    const vm = buildRedispatchViewModel(table6Redispatch());
    const p11 = vm.points[10];
    expect(p11.bandLow).toBeCloseTo(64.6, 10);
    expect(p11.bandHigh).toBeCloseTo(71.4, 10);
  });
});

describe('upload error view', () => {
  it('lists the expected measurement columns on a header mismatch', () => {
    const error = new ApiRequestError(
      400,
      "expected columns ['Fecha', 'GHI', ...], found ['Irradiance', ...]",
    );
    const html = renderUploadError(error);
    for (const column of EXPECTED_UPLOAD_COLUMNS) {
      expect(html).toContain(`<li>${column}</li>`);
    }
    expect(html).toContain('expected columns');
  });

  it('renders other failures as plain detail', () => {
    const html = renderUploadError(new ApiRequestError(409, 'duplicate stamp'));
    expect(html).toContain('duplicate stamp');
    expect(html).not.toContain('expected-columns');
  });
});

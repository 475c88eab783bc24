import type { RedispatchPayload } from '../types';

export interface BandPoint {
  period: number;
  committedMw: number;
  intradayMw: number;
  bandLow: number;
  bandHigh: number;
  breached: boolean;
}

export interface RedispatchViewModel {
  date: string;
  marginPercent: number;
  showBanner: boolean;
  points: BandPoint[];
  breachedPeriods: number[];
  stale: boolean;
}

export function buildRedispatchViewModel(
  payload: RedispatchPayload,
  stale = false,
): RedispatchViewModel {
  const points = payload.periods.map((p) => ({
    period: p.period,
    committedMw: p.committed_mw,
    intradayMw: p.intraday_mw,
    bandLow: p.band_low,
    bandHigh: p.band_high,
    breached: p.outside_band,
  }));
  return {
    date: payload.date,
    marginPercent: payload.margin * 100,
    // banner state is a pure function of the decision payload
    showBanner: payload.redispatch_required,
    points,
    breachedPeriods: points.filter((p) => p.breached).map((p) => p.period),
    stale,
  };
}

const CHART = { width: 720, height: 240, pad: 30 };

function polyline(points: BandPoint[], pick: (p: BandPoint) => number,
                  maxMw: number, cls: string): string {
  const stepX = (CHART.width - 2 * CHART.pad) / Math.max(points.length - 1, 1);
  const coords = points
    .map((p, i) => {
      const x = CHART.pad + i * stepX;
      const y =
        CHART.height - CHART.pad -
        (Math.max(pick(p), 0) / maxMw) * (CHART.height - 2 * CHART.pad);
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
  return `<polyline class="${cls}" points="${coords}"/>`;
}

export function renderRedispatchView(vm: RedispatchViewModel): string {
  const banner = vm.showBanner
    ? '<div class="banner redispatch-required" role="alert">' +
      'Redispatch required</div>'
    : '';
  const stale = vm.stale
    ? '<div class="warning stale-data">Decision data is stale - refresh</div>'
    : '';
  const maxMw = Math.max(...vm.points.map((p) => p.bandHigh), 1);
  const badges = vm.points
    .map((p) =>
      p.breached
        ? `<span class="badge breach" data-period="${p.period}">` +
          `P${p.period}: ${p.intradayMw} MW outside ` +
          `[${p.bandLow}, ${p.bandHigh}]</span>`
        : '',
    )
    .join('');
  return `
<section class="redispatch-view" data-date="${vm.date}">
  ${banner}${stale}
  <h2>Redispatch monitor ${vm.date} (&plusmn;${vm.marginPercent}% band)</h2>
  <svg viewBox="0 0 ${CHART.width} ${CHART.height}" role="img">
    ${polyline(vm.points, (p) => p.bandHigh, maxMw, 'band-high')}
    ${polyline(vm.points, (p) => p.bandLow, maxMw, 'band-low')}
    ${polyline(vm.points, (p) => p.committedMw, maxMw, 'committed')}
    ${polyline(vm.points, (p) => p.intradayMw, maxMw, 'intraday')}
  </svg>
  <div class="badges">${badges}</div>
</section>`;
}

export function renderRedispatchPlaceholder(): string {
  return `
<section class="redispatch-view empty">
  <p>No redispatch decision loaded yet - run the check for a market day.</p>
</section>`;
}

import type { OfferPayload } from '../types';

export interface OfferBar {
  period: number;
  valueMw: number;
  clipped: boolean; // sits at the availability ceiling
}

export interface OfferViewModel {
  date: string;
  operation: string;
  availabilityMw: number;
  bars: OfferBar[];
  peakMw: number;
  csvLocator: string;
}

export function buildOfferViewModel(payload: OfferPayload): OfferViewModel {
  const bars = payload.period_values_mw.map((value, i) => ({
    period: i + 1,
    valueMw: value,
    clipped: value > 0 && value === payload.availability_mw,
  }));
  return {
    date: payload.date,
    operation: payload.operation,
    availabilityMw: payload.availability_mw,
    bars,
    peakMw: Math.max(...payload.period_values_mw, 0),
    csvLocator: payload.csv_locator,
  };
}

const CHART = { width: 720, height: 220, pad: 28 };

export function renderOfferView(vm: OfferViewModel): string {
  const scale = vm.availabilityMw > 0 ? vm.availabilityMw : Math.max(vm.peakMw, 1);
  const barWidth = (CHART.width - 2 * CHART.pad) / vm.bars.length;
  const bars = vm.bars
    .map((bar) => {
      const h = (Math.max(bar.valueMw, 0) / scale) * (CHART.height - 2 * CHART.pad);
      const x = CHART.pad + (bar.period - 1) * barWidth;
      const y = CHART.height - CHART.pad - h;
      const cls = bar.clipped ? 'bar clipped' : 'bar';
      return (
        `<rect class="${cls}" data-period="${bar.period}" ` +
        `data-mw="${bar.valueMw}" x="${x.toFixed(1)}" y="${y.toFixed(1)}" ` +
        `width="${(barWidth * 0.8).toFixed(1)}" height="${h.toFixed(1)}">` +
        `<title>period ${bar.period}: ${bar.valueMw} MW</title></rect>`
      );
    })
    .join('');
  const ceilingY =
    CHART.height - CHART.pad - (CHART.height - 2 * CHART.pad);
  const cells = vm.bars
    .map(
      (bar) =>
        `<td class="offer-cell" data-period="${bar.period}">${bar.valueMw}</td>`,
    )
    .join('');
  return `
<section class="offer-view" data-date="${vm.date}" data-operation="${vm.operation}">
  <h2>${vm.operation === 'offer' ? 'Offer' : 'Pre-offer'} for ${vm.date}</h2>
  <p class="availability">Availability ${vm.availabilityMw} MW -
     <a href="${vm.csvLocator}">download CSV</a></p>
  <svg viewBox="0 0 ${CHART.width} ${CHART.height}" role="img">
    <line class="ceiling" x1="${CHART.pad}" x2="${CHART.width - CHART.pad}"
          y1="${ceilingY}" y2="${ceilingY}"/>
    ${bars}
  </svg>
  <table class="offer-table"><tr>${cells}</tr></table>
</section>`;
}

export function renderOfferError(detail: string, hint: string): string {
  return `
<section class="offer-view error">
  <p class="error-detail">${detail}</p>
  <p class="error-hint">${hint}</p>
</section>`;
}
